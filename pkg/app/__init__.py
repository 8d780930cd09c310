# app package

