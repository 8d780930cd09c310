"""Core settings, constants, exceptions and logging setup"""
