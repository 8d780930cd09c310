# schemas package

