"""Structured results shared by checks and experiment suites."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

__all__ = ["Report", "inputs_digest", "to_jsonable"]


def to_jsonable(x: Any) -> Any:
    """Convert numpy containers and scalars into plain JSON values."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return {"re": to_jsonable(x.real.tolist()), "im": to_jsonable(x.imag.tolist())}
        return to_jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def inputs_digest(*arrays) -> str:
    """Short sha256 digest of the raw bytes of the given arrays/values."""
    h = hashlib.sha256()
    for a in arrays:
        if isinstance(a, str):
            h.update(a.encode())
            continue
        arr = np.ascontiguousarray(np.asarray(a, dtype=complex))
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()[:16]


@dataclass
class Report:
    """Two sides of an identity or inequality, their ratio and a residual."""

    operation: str
    inputs_digest: str = ""
    lhs_norm: float = 0.0
    rhs_norm: float = 0.0
    ratio: float = float("nan")
    residual: float = 0.0
    seed: Optional[int] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "operation": self.operation,
            "inputs_digest": self.inputs_digest,
            "lhs_norm": self.lhs_norm,
            "rhs_norm": self.rhs_norm,
            "ratio": self.ratio,
            "residual": self.residual,
            "seed": self.seed,
        }
        if self.extra:
            out["extra"] = self.extra
        return to_jsonable(out)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def safe_ratio(a: float, b: float) -> float:
    if b == 0.0:
        return 0.0 if a == 0.0 else float("inf")
    return float(a / b)
