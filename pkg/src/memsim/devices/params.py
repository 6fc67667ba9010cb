"""Parameter-name resolution shared by all device kinds."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..smoothsafe import ParameterError


def resolve(kind: str, defaults: Mapping[str, float], given: Mapping[str, float] | None) -> dict[str, float]:
    """Merge ``given`` over ``defaults``.

    Names match case-insensitively.  When two defaults differ only by case
    (RRAM's ``V0`` and ``v0``) the exact spelling is required.
    """
    out = dict(defaults)
    if not given:
        return out
    folded: dict[str, list[str]] = {}
    for name in defaults:
        folded.setdefault(name.lower(), []).append(name)
    for key, val in given.items():
        if key in defaults:
            name = key
        else:
            cands = folded.get(key.lower(), [])
            if len(cands) == 1:
                name = cands[0]
            elif cands:
                raise ParameterError(f"{kind}: parameter {key!r} is ambiguous; use one of {cands}")
            else:
                raise ParameterError(f"{kind}: unknown parameter {key!r}")
        val = float(val)
        if not np.isfinite(val):
            raise ParameterError(f"{kind}: parameter {name} must be finite")
        out[name] = val
    return out


def require_positive(kind: str, p: Mapping[str, float], *names: str) -> None:
    for n in names:
        if not p[n] > 0:
            raise ParameterError(f"{kind}: {n} must be > 0, got {p[n]}")
