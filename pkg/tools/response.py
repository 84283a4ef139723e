"""Result object ที่ทุก subcommand คืนให้ main.py"""

from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class CommandResult:
    text: str = ""
    exit_code: int = 0  # 0 success, 1 validation failure
    files: list[Path] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.exit_code == 0
