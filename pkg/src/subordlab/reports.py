"""Report records, their byte-stable JSON form, curve CSV dumps and config files."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Optional

import numpy as np

from .disk import ProbeConfig, thetas
from .errors import UsageError

VERDICTS = ("Holds", "Fails", "Inconclusive", "Pass", "Fail")


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0"
    return format(x, ".17g")


def dumps(obj) -> str:
    """Compact JSON with sorted keys and 17-significant-digit reals.

    Non-finite reals become ``null``.  Formatting never depends on locale.
    """
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def flatten(params: dict, prefix: str = "") -> dict:
    """Nested dicts become dotted keys; complex values split into ``.re``/``.im``."""
    out = {}
    for key, val in params.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(flatten(val, name + "."))
        elif isinstance(val, (complex, np.complexfloating)):
            out[name + ".re"] = float(val.real)
            out[name + ".im"] = float(val.imag)
        elif isinstance(val, (list, tuple)):
            out.update(flatten({str(i): v for i, v in enumerate(val)}, name + "."))
        elif isinstance(val, (bool, np.bool_, str)) or val is None:
            out[name] = val
        elif isinstance(val, (int, np.integer)):
            out[name] = int(val)
        elif isinstance(val, (float, np.floating)):
            out[name] = float(val)
        else:
            out[name] = str(val)
    return out


@dataclass
class RunReport:
    check: str
    verdict: str
    margin: float = math.nan
    params: dict = field(default_factory=dict)
    witness: Optional[tuple] = None
    probe: ProbeConfig = field(default_factory=ProbeConfig)
    seed: int = 0

    def __post_init__(self):
        self.verdict = str(self.verdict)
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def as_dict(self) -> dict:
        wit = None
        if self.witness is not None:
            z, w = (complex(x) for x in self.witness)
            wit = {"z_re": z.real, "z_im": z.imag, "value_re": w.real, "value_im": w.imag}
        return {
            "check": self.check,
            "params": flatten(self.params),
            "verdict": self.verdict,
            "margin": float(self.margin),
            "witness": wit,
            "probe": {"r_max": self.probe.r_max, "n_theta": self.probe.n_theta,
                      "tol": self.probe.tol, "order": self.probe.order},
            "seed": int(self.seed),
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())


def write_curve_csv(h, r: float, n: int, stream: IO[str]) -> None:
    """Rows ``theta,re,im`` of ``h(r e^{i theta})`` with a header."""
    t = thetas(n)
    vals = np.asarray(h(r * np.exp(1j * t)), dtype=complex)
    stream.write("theta,re,im\n")
    for ti, v in zip(t, vals):
        stream.write(f"{_fmt_float(float(ti))},{_fmt_float(v.real)},{_fmt_float(v.imag)}\n")


CONFIG_KEYS = ("radii", "n_theta", "tol", "order", "seed")


def parse_config(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            if key == "radii":
                out[key] = tuple(float(x) for x in val.split(","))
            elif key in ("n_theta", "order", "seed"):
                out[key] = int(val)
            elif key == "tol":
                out[key] = float(val)
            else:
                raise UsageError(f"config line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise UsageError(f"config line {lineno}: bad value for {key}: {exc}") from exc
    return out


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
