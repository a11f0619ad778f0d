"""Run configuration: flat ``key = value`` files, CLI overrides, defaults."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .grid import BoundaryKind, check_boundaries, parse_boundary
from .schemes import HIGH_RESOLUTION, SchemeId

PROBLEMS = ("burgers-inviscid", "burgers-viscous", "euler", "swe")
REFERENCES = ("auto", "none", "series", "characteristics", "exact", "fou-fine")

_ALLOWED_REFERENCES = {
    "burgers-inviscid": {"series", "characteristics"},
    "burgers-viscous": set(),
    "euler": {"fou-fine"},
    "swe": {"exact"},
}

# physical and numerical defaults per problem
DEFAULTS = {
    "burgers-inviscid": dict(
        n_cells=400, theta=0.5, t_final=1.0, nu=0.0, bc_left="periodic", bc_right="periodic",
        meshes=(10, 20, 40, 80, 160), converge_theta=0.2, t_eval=0.5,
    ),
    "burgers-viscous": dict(
        n_cells=400, theta=0.5, t_final=0.9, nu=0.1, bc_left="dirichlet:0", bc_right="dirichlet:0",
        snapshot_times=(0.1, 0.3, 0.5, 0.7, 0.9), meshes=(100, 200, 400, 800),
    ),
    "euler": dict(
        n_cells=2500, theta=0.6, t_final=5.0, gamma=1.4, bc_left="transmissive",
        bc_right="transmissive", n_ref=25000, meshes=(625, 1250, 2500),
    ),
    "swe": dict(
        n_cells=400, theta=0.6, t_final=0.8, g=9.81, h_left=1.0, h_right=0.1,
        bc_left="transmissive", bc_right="transmissive", meshes=(100, 200, 400, 800),
    ),
}
FULL_SCALE_EULER_CELLS = 12500


def _floats(text):
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(v) for v in str(text).replace(",", " ").split())


def _ints(text):
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    return tuple(int(v) for v in str(text).replace(",", " ").split())


def _schemes(text):
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = str(text).replace(",", " ").split()
    return tuple(SchemeId.parse(s) for s in items)


def _bool(text):
    if isinstance(text, bool):
        return text
    token = str(text).strip().lower()
    if token in ("1", "true", "yes", "on"):
        return True
    if token in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _problem(text):
    token = str(text).strip().lower()
    if token not in PROBLEMS:
        raise ValueError(f"unknown problem {text!r} (expected one of: {', '.join(PROBLEMS)})")
    return token


def _reference(text):
    token = str(text).strip().lower()
    if token not in REFERENCES:
        raise ValueError(f"unknown reference {text!r} (expected one of: {', '.join(REFERENCES)})")
    return token


def _boundary(text):
    return text if isinstance(text, BoundaryKind) else parse_boundary(str(text))


PARSERS = {
    "problem": _problem,
    "scheme": SchemeId.parse,
    "n_cells": int,
    "theta": float,
    "nu": float,
    "gamma": float,
    "g": float,
    "h_left": float,
    "h_right": float,
    "t_final": float,
    "bc_left": _boundary,
    "bc_right": _boundary,
    "output": str,
    "snapshot_times": _floats,
    "reference": _reference,
    "n_terms": int,
    "n_ref": int,
    "cache_dir": str,
    "meshes": _ints,
    "t_eval": float,
    "schemes": _schemes,
    "full_scale": _bool,
}


@dataclass
class RunConfig:
    problem: str = "burgers-inviscid"
    scheme: SchemeId = SchemeId.ADBQUICKEST
    n_cells: int | None = None
    theta: float | None = None
    nu: float | None = None
    gamma: float | None = None
    g: float | None = None
    h_left: float | None = None
    h_right: float | None = None
    t_final: float | None = None
    bc_left: BoundaryKind | None = None
    bc_right: BoundaryKind | None = None
    output: str | None = None
    snapshot_times: tuple | None = None
    reference: str = "auto"
    n_terms: int = 500
    n_ref: int | None = None
    cache_dir: str | None = None
    meshes: tuple | None = None
    t_eval: float | None = None
    schemes: tuple = HIGH_RESOLUTION
    full_scale: bool = False

    def resolve(self, command: str = "run") -> "RunConfig":
        """Fill unset fields with the problem defaults and validate."""
        d = DEFAULTS[self.problem]
        cfg = dataclasses.replace(self)
        for name in ("n_cells", "theta", "nu", "gamma", "g", "h_left", "h_right", "t_final",
                     "n_ref", "meshes", "t_eval", "snapshot_times"):
            if getattr(cfg, name) is None and name in d:
                setattr(cfg, name, d[name])
        if command == "converge" and self.theta is None and "converge_theta" in d:
            cfg.theta = d["converge_theta"]
        if self.problem == "euler" and self.full_scale and self.n_cells is None:
            cfg.n_cells = FULL_SCALE_EULER_CELLS
        if cfg.bc_left is None:
            cfg.bc_left = parse_boundary(d["bc_left"])
        if cfg.bc_right is None:
            cfg.bc_right = parse_boundary(d["bc_right"])
        if cfg.snapshot_times is None:
            cfg.snapshot_times = ()
        if cfg.t_eval is None:
            cfg.t_eval = cfg.t_final
        if cfg.reference == "auto":
            if self.problem == "burgers-inviscid":
                cfg.reference = "characteristics" if command == "converge" else "series"
            else:
                cfg.reference = next(iter(_ALLOWED_REFERENCES[self.problem]), "none")
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.reference not in ("none", "auto") and self.reference not in _ALLOWED_REFERENCES[self.problem]:
            raise ConfigError(f"reference {self.reference!r} is not available for problem {self.problem!r}")
        if self.n_cells is not None and self.n_cells < 5:
            raise ConfigError(f"n_cells must be >= 5, got {self.n_cells}")
        if self.theta is not None and not 0.0 < self.theta <= 1.0:
            raise ConfigError(f"theta must lie in (0, 1], got {self.theta}")
        if self.t_final is not None and self.t_final < 0.0:
            raise ConfigError(f"t_final must be >= 0, got {self.t_final}")
        if self.nu is not None and self.nu < 0.0:
            raise ConfigError(f"nu must be >= 0, got {self.nu}")
        if self.n_terms < 1:
            raise ConfigError("n_terms must be >= 1")
        if self.bc_left is not None and self.bc_right is not None:
            check_boundaries(self.bc_left, self.bc_right)
        if self.t_eval is not None and self.t_eval < 0.0:
            raise ConfigError("t_eval must be >= 0")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key = key.strip().lower().replace("-", "_")
        if key not in PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, str(path))


def make_config(*layers: dict) -> RunConfig:
    """Build a ``RunConfig`` from raw value dicts; later layers win."""
    merged = {}
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            if key not in PARSERS:
                raise ConfigError(f"unknown key {key!r}")
            merged[key] = value
    parsed = {}
    for key, value in merged.items():
        try:
            parsed[key] = PARSERS[key](value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from None
    cfg = RunConfig(**parsed)
    cfg.validate()
    return cfg
