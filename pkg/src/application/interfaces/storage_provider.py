"""Storage provider interface."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple


class StorageProvider(ABC):
    """Where CSV tables of a run are written and read back, plus its JSON side file."""

    @abstractmethod
    async def save_csv(self, path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        """Save rows under a mandatory header; returns the written path."""
        pass

    @abstractmethod
    async def load_csv(self, path: Path) -> Tuple[List[str], Dict[str, List[float]]]:
        """Load a numeric CSV as (header, column name -> values)."""
        pass

    @abstractmethod
    async def save_json(self, path: Path, data: Dict[str, Any]) -> Path:
        """Save metadata as JSON."""
        pass

    @abstractmethod
    async def file_exists(self, path: Path) -> bool:
        """True when a result file is already present at ``path``."""
        pass
