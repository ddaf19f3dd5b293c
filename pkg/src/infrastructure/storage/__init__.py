# Storage implementations
from .csv_storage import CsvStorage

__all__ = ["CsvStorage"]
