# Presentation layer - CLI and API interfaces 