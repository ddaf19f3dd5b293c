# Application interfaces 