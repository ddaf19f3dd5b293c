# Logging implementations 