"""
Base Generator Class
====================
Abstract base class for all artifact generators (CSV tables, JSON reports).
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional
import logging

from ..config import OUTPUT_DIR

logger = logging.getLogger(__name__)

FORMAT_CSV = 'csv'
FORMAT_JSON = 'json'
FORMATS = (FORMAT_CSV, FORMAT_JSON)


class BaseGenerator(ABC):
    """
    Abstract base class for artifact generators.

    All generators should inherit from this class and implement
    the generate() method.
    """

    # Default output filename (override in subclasses)
    output_filename = "output.txt"

    @abstractmethod
    def generate(self) -> str:
        """
        Generate the artifact content.

        Must be implemented by subclasses.

        Returns:
            Complete file content as a string.
        """
        raise NotImplementedError("Subclasses must implement generate()")

    def save(self, output_path: Optional[Path] = None) -> Path:
        """
        Generate and save the artifact to file.

        Args:
            output_path: Path to save the file. If None, uses default location.

        Returns:
            Path to the saved file.
        """
        if output_path is None:
            output_path = OUTPUT_DIR / self.output_filename
        else:
            output_path = Path(output_path)

        output_path.parent.mkdir(parents=True, exist_ok=True)

        logger.debug(f"Generating {self.output_filename}...")
        content = self.generate()

        # newline='' keeps "\n" line endings on every platform
        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            f.write(content)

        file_size = output_path.stat().st_size / 1024  # KB
        logger.info(f"Saved {output_path.name} ({file_size:.1f} KB)")

        return output_path


class TableGenerator(BaseGenerator):
    """Generators that render either CSV or JSON."""

    stem = "table"

    def __init__(self, fmt: str = FORMAT_CSV):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
        self.fmt = fmt

    @property
    def output_filename(self) -> str:
        return f"{self.stem}.{self.fmt}"
