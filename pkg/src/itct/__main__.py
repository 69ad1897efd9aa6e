"""Allow running as python -m itct."""

from itct.cli import app

app()
