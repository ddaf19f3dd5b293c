# NV Gyroscope Simulator - Core Package 
