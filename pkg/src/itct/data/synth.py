"""Synthetic stand-in for the five MQTT capture files.

The generated columns follow the default schema. Attack and normal rows are drawn
from overlapping per-scenario distributions so the task is learnable but not trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from itct.config import DATASET_FILE_NAMES
from itct.data.schema import ColumnKind, Schema, default_schema


@dataclass(frozen=True)
class Scenario:
    file_name: str
    normal_share: float  # fraction of rows that are normal traffic
    attack_protocols: tuple[str, ...]
    attack_syn_rate: float
    attack_mqtt_type: str


SCENARIOS: tuple[Scenario, ...] = (
    Scenario(DATASET_FILE_NAMES[0], 0.64, ("TCP",), 0.9, ""),
    Scenario(DATASET_FILE_NAMES[1], 0.90, ("UDP",), 0.0, ""),
    Scenario(DATASET_FILE_NAMES[2], 0.10, ("TCP",), 0.3, ""),
    Scenario(DATASET_FILE_NAMES[3], 0.05, ("MQTT", "TCP"), 0.2, "1"),
    Scenario(DATASET_FILE_NAMES[4], 1.00, (), 0.0, ""),
)

MISSING_RATE = 0.01
OVERLAP_RATE = 0.15  # share of attack rows that mimic normal traffic


def make_surrogate_files(
    directory: Path, rows_per_file: int, seed: int, schema: Schema | None = None
) -> list[Path]:
    """Write five CSV captures to ``directory``; returns their paths in balancing order."""
    schema = schema or default_schema()
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    for scenario in SCENARIOS:
        frame = _scenario_frame(scenario, rows_per_file, rng, schema)
        path = directory / scenario.file_name
        frame.to_csv(path, index=False)
        paths.append(path)
    return paths


def _scenario_frame(
    scenario: Scenario, rows: int, rng: np.random.Generator, schema: Schema
) -> pd.DataFrame:
    n_normal = rows if scenario.normal_share >= 1.0 else max(5, round(rows * scenario.normal_share))
    n_attack = 0 if scenario.normal_share >= 1.0 else max(5, rows - n_normal)
    labels = np.concatenate([np.zeros(n_normal, np.int8), np.ones(n_attack, np.int8)])
    rng.shuffle(labels)
    n = labels.size
    attack = labels == 1
    mimic = attack & (rng.random(n) < OVERLAP_RATE)
    looks_attack = attack & ~mimic

    normal_protocols = np.array(["MQTT", "TCP"])
    protocol = normal_protocols[rng.integers(0, 2, n)].astype(object)
    if scenario.attack_protocols:
        choices = np.array(scenario.attack_protocols)
        protocol[looks_attack] = choices[rng.integers(0, len(choices), looks_attack.sum())]

    ttl = np.where(looks_attack, rng.normal(52, 12, n), rng.normal(64, 4, n)).round()
    ip_len = np.where(looks_attack, rng.normal(60, 10, n), rng.normal(120, 40, n)).round()
    syn = np.where(looks_attack, rng.random(n) < scenario.attack_syn_rate, rng.random(n) < 0.05)
    push = np.where(looks_attack, rng.random(n) < 0.1, rng.random(n) < 0.6)
    ack = np.where(looks_attack, rng.random(n) < 0.4, rng.random(n) < 0.9)

    mqtt_type = np.where(rng.random(n) < 0.7, "3", "4").astype(object)
    mqtt_type[looks_attack] = scenario.attack_mqtt_type or "0"
    mqtt_len = np.where(mqtt_type == "3", rng.normal(40, 8, n), rng.normal(2, 1, n)).round()
    mqtt_len[looks_attack] = np.abs(rng.normal(1, 1, looks_attack.sum())).round()

    values: dict[str, np.ndarray] = {
        "ip_src": np.array([f"10.0.0.{i % 250 + 1}" for i in rng.integers(0, 250, n)]),
        "ip_dst": np.full(n, "10.0.0.254"),
        "protocol": protocol,
        "ttl": ttl,
        "ip_len": np.abs(ip_len),
        "src_port": rng.integers(1024, 65535, n),
        "dst_port": np.where(looks_attack, rng.integers(1, 1024, n), 1883),
        "tcp_flag_syn": syn.astype(int),
        "tcp_flag_push": push.astype(int),
        "tcp_flag_ack": ack.astype(int),
        "mqtt_message_type": mqtt_type,
        "mqtt_message_length": np.abs(mqtt_len),
    }

    columns: dict[str, object] = {}
    for col in schema.columns:
        if col.kind == ColumnKind.LABEL:
            columns[col.header] = labels
            continue
        data = values.get(col.name)
        if data is None:
            data = (rng.random(n) < 0.02).astype(int)
        series = pd.Series(data, dtype=object if col.kind != ColumnKind.CONTINUOUS else float)
        if col.kind in (ColumnKind.CATEGORICAL, ColumnKind.CONTINUOUS):
            series[rng.random(n) < MISSING_RATE] = None
        columns[col.header] = series
    return pd.DataFrame(columns)
