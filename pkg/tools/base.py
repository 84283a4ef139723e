"""BaseTool: abstract class ที่ทุก subcommand ต้อง inherit"""

from __future__ import annotations

import argparse
from abc import ABC, abstractmethod

from core.config import RunConfig
from core.logger import get_logger
from core.template_loader import load_metadata, load_template
from tools.response import CommandResult

log = get_logger(__name__)


class BaseTool(ABC):
    name: str = ""
    description: str = ""

    def add_arguments(self, parser: argparse.ArgumentParser):
        """เพิ่ม flag เฉพาะ subcommand: default ไม่มี"""

    @abstractmethod
    def execute(self, cfg: RunConfig, args: argparse.Namespace) -> CommandResult:
        ...

    def get_help(self) -> tuple[str, str]:
        """(summary, description) จาก templates/tools/<name>.md

        ถ้าไม่มีไฟล์ → fallback ไป self.description
        """
        rel_path = f"tools/{self.name}.md"
        try:
            body = load_template(rel_path).strip()
            summary = load_metadata(rel_path).get("summary", self.description)
        except FileNotFoundError:
            return self.description, self.description
        return summary, body
