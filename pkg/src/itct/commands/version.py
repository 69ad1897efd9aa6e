"""Version command."""

from __future__ import annotations

from itct import __version__
from itct.utils.console import console


def run_version() -> None:
    console.print(f"itct [bold]{__version__}[/bold]")
