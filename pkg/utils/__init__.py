# utils package

