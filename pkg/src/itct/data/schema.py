"""Column schema: which CSV columns are categorical, continuous, label or ignored."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from itct.errors import DataError


class ColumnKind(str, Enum):
    CATEGORICAL = "categorical"
    CONTINUOUS = "continuous"
    LABEL = "label"
    IGNORED = "ignored"


@dataclass(frozen=True)
class Column:
    name: str
    kind: ColumnKind
    source: str = ""  # CSV header when it differs from name

    @property
    def header(self) -> str:
        return self.source or self.name

    def to_line(self) -> str:
        parts = [self.name, self.kind.value]
        if self.source and self.source != self.name:
            parts.append(self.source)
        return ",".join(parts)


@dataclass(frozen=True)
class Schema:
    """Ordered column list with exactly one label column."""

    columns: tuple[Column, ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        dupes = sorted(n for n, k in Counter(names).items() if k > 1)
        if dupes:
            raise DataError(f"Duplicate schema columns: {', '.join(dupes)}")
        labels = [c for c in self.columns if c.kind == ColumnKind.LABEL]
        if len(labels) != 1:
            raise DataError(f"Schema needs exactly one label column, found {len(labels)}")
        if not self.categorical:
            raise DataError("Schema needs at least one categorical column")
        if not self.continuous:
            raise DataError("Schema needs at least one continuous column")

    @property
    def label(self) -> str:
        return next(c.name for c in self.columns if c.kind == ColumnKind.LABEL)

    @property
    def categorical(self) -> list[str]:
        return [c.name for c in self.columns if c.kind == ColumnKind.CATEGORICAL]

    @property
    def continuous(self) -> list[str]:
        return [c.name for c in self.columns if c.kind == ColumnKind.CONTINUOUS]

    @property
    def features(self) -> list[str]:
        """Feature columns in schema order."""
        return [
            c.name
            for c in self.columns
            if c.kind in (ColumnKind.CATEGORICAL, ColumnKind.CONTINUOUS)
        ]

    @property
    def loaded(self) -> list[Column]:
        """Columns kept after loading (features and label)."""
        return [c for c in self.columns if c.kind != ColumnKind.IGNORED]

    def kind_of(self, name: str) -> ColumnKind:
        for c in self.columns:
            if c.name == name:
                return c.kind
        raise DataError(f"Unknown column: {name}")

    def subset(self, features: list[str]) -> Schema:
        """Schema restricted to the given features (plus the label)."""
        unknown = [f for f in features if f not in self.features]
        if unknown:
            raise DataError(f"Features not in schema: {', '.join(unknown)}")
        keep = set(features) | {self.label}
        return Schema(tuple(c for c in self.columns if c.name in keep))

    def to_text(self) -> str:
        return "\n".join(c.to_line() for c in self.columns) + "\n"


def parse_schema(text: str) -> Schema:
    """Parse ``<name>,<kind>[,<csv header>]`` lines. Blank lines and ``#`` comments skip."""
    columns: list[Column] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) not in (2, 3) or not parts[0]:
            raise DataError(f"Schema line {lineno}: expected '<name>,<kind>', got '{raw}'")
        try:
            kind = ColumnKind(parts[1])
        except ValueError:
            valid = ", ".join(k.value for k in ColumnKind)
            raise DataError(
                f"Schema line {lineno}: unknown kind '{parts[1]}'. Valid: {valid}"
            ) from None
        columns.append(Column(parts[0], kind, parts[2] if len(parts) == 3 else ""))
    return Schema(tuple(columns))


def load_schema(path: Path | None) -> Schema:
    """Load a schema file, or the shipped default when ``path`` is None."""
    if path is None:
        return default_schema()
    if not path.is_file():
        raise DataError(f"Schema file not found: {path}")
    return parse_schema(path.read_text(encoding="utf-8"))


def default_schema() -> Schema:
    return parse_schema(DEFAULT_SCHEMA)


# MQTT-IoT-IDS2020 packet features: 25 feature columns + label.
DEFAULT_SCHEMA = """\
ip_src,ignored
ip_dst,ignored
protocol,categorical
ttl,continuous
ip_len,continuous
ip_flag_df,categorical
ip_flag_mf,categorical
ip_flag_rb,categorical
src_port,ignored
dst_port,ignored
tcp_flag_res,categorical
tcp_flag_ns,categorical
tcp_flag_cwr,categorical
tcp_flag_ecn,categorical
tcp_flag_urg,categorical
tcp_flag_ack,categorical
tcp_flag_push,categorical
tcp_flag_reset,categorical
tcp_flag_syn,categorical
tcp_flag_fin,categorical
mqtt_message_type,categorical,mqtt_messagetype
mqtt_message_length,continuous,mqtt_messagelength
mqtt_flag_uname,categorical
mqtt_flag_passwd,categorical
mqtt_flag_retain,categorical
mqtt_flag_qos,categorical
mqtt_flag_willflag,categorical
mqtt_flag_clean,categorical
mqtt_flag_reserved,categorical
is_attack,label
"""
