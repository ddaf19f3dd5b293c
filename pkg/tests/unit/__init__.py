# Unit tests 