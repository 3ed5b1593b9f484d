"""Experiment configuration: parameter schemas and key=value config files."""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field

from ..errors import DomainError

DEFAULT_SEED = 20240607


def _int(s: str) -> int:
    s = s.strip().replace("_", "")
    try:
        return int(s)
    except ValueError:
        v = float(s)
        if not v.is_integer():
            raise DomainError(f"expected an integer, got {s!r}") from None
        return int(v)


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise DomainError(f"expected a boolean, got {s!r}")


_ANGLE = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(s: str) -> float:
    """A float, or a multiple of pi such as "pi/2", "2pi", "0.5*pi"."""
    m = _ANGLE.match(s)
    if m is None:
        return float(s)
    num = float(m.group(1)) if m.group(1) not in ("", "+") else 1.0
    if m.group(1) == "-":
        num = -1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def _choice(*options):
    def parse(s):
        v = s.strip()
        if v not in options:
            raise DomainError(f"expected one of {', '.join(options)}, got {s!r}")
        return v

    return parse


def _optional(parse):
    def inner(s):
        return None if s.strip().lower() in ("", "none", "auto") else parse(s)

    return inner


# name -> {key: (parser, default as string)}
SCHEMAS: dict[str, dict[str, tuple]] = {
    "constants": {"prime_limit": (_int, "1000000"), "tol": (float, "1e-12")},
    "count": {
        "x": (_int, "1000000"),
        "brute": (_bool, "true"),
        "predict": (_bool, "true"),
        "prime_limit": (_int, "1000000"),
    },
    "leveldist": {
        "x": (_int, "1000000"),
        "d_max": (float, "1000"),
        "k": (_int, "0"),
        "seq": (_choice("A", "B"), "B"),
        "X": (_optional(float), "auto"),
    },
    "buchstab": {
        "x": (_int, "1000000"),
        "seq": (_choice("A", "B"), "B"),
        "varpi": (float, "0.1"),
        "compare": (_bool, "false"),
        "X": (_optional(float), "auto"),
    },
    "bdh": {
        "x": (_int, "100"),
        "q_max": (_optional(_int), "auto"),
        "weights": (_choice("lambda", "theta"), "lambda"),
        "main": (_choice("exact", "x2"), "x2"),
    },
    "equidist": {
        "n1": (_int, "50"),
        "n2": (_int, "50"),
        "q_max": (_int, "40"),
        "q0": (_int, "5"),
    },
    "largesieve": {"n": (_int, "1000"), "q": (_int, "30"), "trials": (_int, "10")},
    "gauss-verify": {
        "trials": (_int, "1000"),
        "classes": (_int, "20"),
        "members": (_int, "50"),
    },
    "mitsui": {
        "x": (_int, "1000000"),
        "q": (_int, "1"),
        "theta": (parse_angle, "2pi"),
        "alpha_re": (_int, "1"),
        "alpha_im": (_int, "0"),
    },
}

EXPERIMENTS = tuple(SCHEMAS)

# experiments whose natural output is a single JSON object
JSON_DEFAULT = {"constants", "equidist", "gauss-verify"}


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    output: str | None = None
    cache_dir: str | None = None
    threads: int | None = None
    format: str | None = None

    def __post_init__(self):
        if self.experiment not in SCHEMAS:
            raise DomainError(
                f"unknown experiment {self.experiment!r}; valid names: {', '.join(EXPERIMENTS)}"
            )
        schema = SCHEMAS[self.experiment]
        unknown = sorted(set(self.parameters) - set(schema))
        if unknown:
            raise DomainError(
                f"unknown parameter(s) {', '.join(unknown)} for {self.experiment}; "
                f"accepted: {', '.join(schema)}"
            )
        self.parameters = {k: str(v) for k, v in self.parameters.items()}
        if self.format is None:
            self.format = "json" if self.experiment in JSON_DEFAULT else "csv"
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        if self.cache_dir is None:
            self.cache_dir = os.environ.get("ANTLAB_CACHE")
        self.seed = int(self.seed)
        self.resolved()

    def resolved(self) -> dict:
        """Typed parameter values with defaults filled in."""
        out = {}
        for key, (parse, default) in SCHEMAS[self.experiment].items():
            raw = self.parameters.get(key, default)
            try:
                out[key] = parse(raw)
            except (ValueError, DomainError) as exc:
                raise DomainError(f"parameter {key}={raw!r}: {exc}") from None
        return out

    def echo(self) -> dict:
        """Everything that determines the output (threads and paths excluded)."""
        full = {k: self.parameters.get(k, d) for k, (_, d) in SCHEMAS[self.experiment].items()}
        return {"experiment": self.experiment, "parameters": full, "seed": self.seed}


def read_config_file(path) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out
