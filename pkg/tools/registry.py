"""Tool Registry: auto-discover subcommands จาก tools/ directory"""

import importlib
import inspect
import pkgutil
from pathlib import Path

from core.logger import get_logger
from tools.base import BaseTool

log = get_logger(__name__)


class ToolRegistry:
    def __init__(self):
        self.tools: dict[str, BaseTool] = {}

    def discover(self):
        """Scan tools/ หา class ที่ inherit BaseTool แล้ว register (เรียกซ้ำได้)"""
        tools_dir = Path(__file__).parent

        for _finder, module_name, _ in pkgutil.iter_modules([str(tools_dir)]):
            if module_name in ("base", "registry", "response", "__init__"):
                continue

            try:
                module = importlib.import_module(f"tools.{module_name}")
                for _attr_name, attr in inspect.getmembers(module, inspect.isclass):
                    if issubclass(attr, BaseTool) and attr is not BaseTool:
                        self._register(attr())
            except (ImportError, AttributeError, TypeError, ValueError) as e:
                log.error("Failed to load tool module '%s': %s", module_name, e, exc_info=True)

        log.debug("Discovered %s tools: %s", len(self.tools), list(self.tools.keys()))

    def _register(self, tool: BaseTool):
        if not tool.name:
            log.warning("Skipping tool with empty name: %s", type(tool))
            return
        existing = self.tools.get(tool.name)
        if existing and type(existing) is not type(tool):
            log.warning("Skipping duplicate tool %s (%s); already registered to %s",
                        tool.name, type(tool).__name__, type(existing).__name__)
            return
        self.tools[tool.name] = tool

    def get_tool(self, name: str) -> BaseTool | None:
        return self.tools.get(name)

    def get_all(self) -> list[BaseTool]:
        return [self.tools[name] for name in sorted(self.tools)]

    def get_help_text(self) -> str:
        lines = ["MMDF designer subcommands:"]
        for tool in self.get_all():
            summary, _ = tool.get_help()
            lines.append(f"  {tool.name:<10} {summary}")
        return "\n".join(lines)


# Singleton
registry = ToolRegistry()
