"""CSV file storage implementation."""

import asyncio
import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from application.interfaces.storage_provider import StorageProvider
from domain.exceptions import StorageError


def format_value(value: Any) -> str:
    """Exact text form of a cell: floats round-trip through repr."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """CSV text with a header line and '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise StorageError(f"Row has {len(row)} cells, header has {len(header)}")
        writer.writerow([format_value(cell) for cell in row])
    return buffer.getvalue()


class CsvStorage(StorageProvider):
    """File-based CSV and JSON storage rooted at ``base_path``."""

    def __init__(self, base_path: Path = Path(".")):
        self.base_path = Path(base_path)

    def _resolve(self, path: Path) -> Path:
        return self.base_path / path

    async def save_csv(self, path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
        """Save rows to a CSV file."""
        if not header:
            raise StorageError(f"CSV file {path} needs a header")
        try:
            full_path = self._resolve(path)
            full_path.parent.mkdir(parents=True, exist_ok=True)
            content = render_csv(header, rows)

            await asyncio.to_thread(
                full_path.write_text,
                content,
                encoding='utf-8'
            )
            return full_path
        except StorageError:
            raise
        except Exception as e:
            raise StorageError(f"Failed to save CSV file {path}: {e}") from e

    async def load_csv(self, path: Path) -> Tuple[List[str], Dict[str, List[float]]]:
        """Load a numeric CSV file."""
        full_path = self._resolve(path)
        if not await self.file_exists(path):
            raise StorageError(f"CSV file not found: {full_path}")
        try:
            content = await asyncio.to_thread(full_path.read_text, encoding='utf-8')
            reader = csv.reader(io.StringIO(content))
            header = next(reader)
            columns: Dict[str, List[float]] = {name: [] for name in header}
            for line_number, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise StorageError(f"{path}:{line_number} has {len(row)} cells, expected {len(header)}")
                for name, cell in zip(header, row):
                    columns[name].append(float(cell))
            return header, columns
        except StorageError:
            raise
        except StopIteration:
            raise StorageError(f"CSV file {path} is empty") from None
        except Exception as e:
            raise StorageError(f"Failed to load CSV file {path}: {e}") from e

    async def save_json(self, path: Path, data: Dict[str, Any]) -> Path:
        """Save data as JSON."""
        try:
            full_path = self._resolve(path)
            full_path.parent.mkdir(parents=True, exist_ok=True)

            await asyncio.to_thread(
                full_path.write_text,
                json.dumps(data, indent=2, ensure_ascii=False),
                encoding='utf-8'
            )
            return full_path
        except Exception as e:
            raise StorageError(f"Failed to save JSON file {path}: {e}") from e

    async def file_exists(self, path: Path) -> bool:
        """True when ``path`` resolves to a regular file."""
        try:
            return await asyncio.to_thread(self._resolve(path).is_file)
        except Exception as e:
            raise StorageError(f"Failed to check file existence {path}: {e}") from e
