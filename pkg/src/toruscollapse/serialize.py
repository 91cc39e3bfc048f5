"""JSON and CSV encodings: rationals as "p/q" strings throughout."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

from .collapse import FluxProfile
from .lattice import PointConfig, TorusConfig
from .measures import TorusMeasure, frac


def rational_str(x) -> str:
    return str(Fraction(x))


def config_to_json(cfg: TorusConfig) -> list[int]:
    return list(cfg.occupied)


def config_from_json(data: Sequence[int]) -> TorusConfig:
    return TorusConfig(data)


def points_to_json(pts: PointConfig) -> list[str]:
    return [str(p) for p in pts.points]


def points_from_json(data: Sequence[str]) -> PointConfig:
    return PointConfig([frac(p) for p in data])


def measure_to_json(rho: TorusMeasure) -> dict:
    return rho.to_json_dict()


def measure_from_json(data: dict) -> TorusMeasure:
    return TorusMeasure.from_json_dict(data)


def part_to_json(part) -> dict:
    if isinstance(part, TorusConfig):
        return {"type": "config", "data": config_to_json(part)}
    if isinstance(part, PointConfig):
        return {"type": "points", "data": points_to_json(part)}
    if isinstance(part, TorusMeasure):
        return {"type": "measure", "data": measure_to_json(part)}
    raise TypeError(f"unsupported part {type(part)!r}")


def part_from_json(data: dict):
    kind = data["type"]
    if kind == "config":
        return config_from_json(data["data"])
    if kind == "points":
        return points_from_json(data["data"])
    if kind == "measure":
        return measure_from_json(data["data"])
    raise ValueError(f"unknown part type {kind!r}")


def flux_to_json(profile: FluxProfile) -> dict:
    return {
        "domain": profile.domain,
        "positions": [str(p) for p in profile.positions],
        "values": [str(v) for v in profile.values],
        "slopes": [str(s) for s in profile.slopes] if profile.slopes else None,
        "full_torus": profile.full_torus,
        "intervals": [
            {
                "lo": str(iv.lo),
                "hi": str(iv.hi),
                "left_closed": iv.left_closed,
                "mass_delta": str(iv.mass_delta),
            }
            for iv in profile.intervals
        ],
    }


def knots_to_csv(knots: Iterable[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["offset", "value"])
    for t, v in knots:
        w.writerow([str(t), str(v)])
    return buf.getvalue()


def rows_to_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, default=str)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
