"""Deterministic CSV/JSON emission: fixed float formatting, no timestamps."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .engine import OutcomeDistribution


def fmt17(x: float) -> str:
    """Format with 17 significant digits."""
    return format(float(x), ".17g")


def label_str(label) -> str:
    if isinstance(label, tuple):
        return ":".join(str(int(x)) for x in label)
    return str(int(label))


def parse_label(text: str):
    if ":" in text:
        return tuple(int(x) for x in text.split(":"))
    return int(text)


def write_distribution_csv(path: Path, dist: OutcomeDistribution) -> None:
    lines = ["outcome_label,probability"]
    for lab, p in zip(dist.labels, dist.probs):
        lines.append(f"{label_str(lab)},{fmt17(p)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_distribution_csv(path: Path) -> OutcomeDistribution:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "outcome_label,probability":
        raise ValueError(f"{path} is not a distribution CSV")
    labels, probs = [], []
    for line in lines[1:]:
        if not line:
            continue
        lab, prob = line.rsplit(",", 1)
        labels.append(parse_label(lab))
        probs.append(float(prob))
    return OutcomeDistribution(tuple(labels), np.array(probs))


def write_f_table_csv(path: Path, instance) -> None:
    lines = ["g_index,f_index"]
    for g, v in enumerate(instance.f_table):
        lines.append(f"{g},{int(v)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_samples_csv(path: Path, samples) -> None:
    lines = ["trial_index,outcome_label"]
    for i, lab in enumerate(samples):
        lines.append(f"{i},{label_str(lab)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path: Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
