"""Experiment configuration: key=value text or JSON, unknown keys rejected."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, Optional, Tuple

from ..errors import ConfigError, UnknownSuite
from ..funkit.scalar import LIBRARY_NAMES

__all__ = ["ExperimentConfig", "SUITE_NAMES", "ALIASES", "parse_config", "load_config", "canonical_suite"]

SUITE_NAMES = (
    "doi-check",
    "fundamental",
    "moi-check",
    "derivative-check",
    "difference-check",
    "krein",
    "koplienko",
    "pair-lipschitz",
    "commutator",
    "counterexample",
    "holder",
    "singular-decay",
    "besov-norm",
)
ALIASES = {"doi-oracle": "doi-check"}


def canonical_suite(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in SUITE_NAMES:
        raise UnknownSuite(name)
    return name


@dataclass(frozen=True)
class ExperimentConfig:
    suite: str
    n: int = 5
    trials: int = 20
    seed: int = 0
    p: Optional[float] = None
    alpha: Optional[float] = None
    f_name: Optional[str] = None
    Ns: Tuple[int, ...] = (4, 16, 64)
    tolerances: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "suite", canonical_suite(self.suite))
        for key in ("n", "trials", "seed"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"{key} must be an integer, got {v!r}")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.p is not None and not (self.p >= 1):
            raise ConfigError("p must be >= 1 (or inf)")
        if self.alpha is not None and not (0 < self.alpha < 1):
            raise ConfigError("alpha must lie in (0, 1)")
        if self.f_name is not None and self.f_name not in LIBRARY_NAMES:
            raise ConfigError(f"unknown function {self.f_name!r}")
        Ns = tuple(int(x) for x in self.Ns)
        if not Ns or min(Ns) < 2:
            raise ConfigError("Ns must be a nonempty list of integers >= 2")
        object.__setattr__(self, "Ns", Ns)
        tol = {}
        for k, v in dict(self.tolerances).items():
            try:
                tol[str(k)] = float(v)
            except (TypeError, ValueError):
                raise ConfigError(f"tolerance {k!r} is not a number") from None
        object.__setattr__(self, "tolerances", tol)

    def tol(self, key: str, default: float) -> float:
        return self.tolerances.get(key, default)

    def echo(self) -> dict:
        d = asdict(self)
        d["Ns"] = list(self.Ns)
        d["tolerances"] = dict(sorted(self.tolerances.items()))
        return d


_KEYS = {f.name for f in fields(ExperimentConfig)}
_KEY_ALIASES = {"f": "f_name", "N": "Ns"}


def _coerce(key: str, raw):
    try:
        if key in ("n", "trials", "seed"):
            if isinstance(raw, str):
                return int(raw.strip(), 0)
            if isinstance(raw, float) and raw.is_integer():
                return int(raw)
            return raw
        if key in ("p", "alpha"):
            if raw is None:
                return None
            if isinstance(raw, str) and raw.strip().lower() in ("inf", "infinity"):
                return float("inf")
            return float(raw)
        if key == "Ns":
            if isinstance(raw, str):
                return tuple(int(x) for x in raw.replace(",", " ").split())
            return tuple(int(x) for x in raw)
        if key in ("suite", "f_name"):
            return None if raw is None else str(raw).strip()
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw


def _build(items: dict) -> ExperimentConfig:
    kwargs: dict = {}
    tol: dict = dict(items.pop("tolerances", {}) or {})
    for key, raw in items.items():
        if key.startswith("tol."):
            tol[key[4:]] = raw
            continue
        name = _KEY_ALIASES.get(key, key)
        if name not in _KEYS or name == "tolerances":
            raise ConfigError(f"unknown configuration key {key!r}")
        kwargs[name] = _coerce(name, raw)
    if "suite" not in kwargs:
        raise ConfigError("configuration must name a suite")
    return ExperimentConfig(tolerances=tol, **kwargs)


def parse_config(text: str) -> ExperimentConfig:
    """Parse JSON (if the text starts with '{') or key=value lines ('#' comments)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON configuration: {exc}") from None
        if not isinstance(obj, dict):
            raise ConfigError("JSON configuration must be an object")
        return _build(dict(obj))
    items: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in items:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        items[key] = value
    return _build(items)


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())
