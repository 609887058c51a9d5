"""Seeding and worst-case bookkeeping shared by the verification suites."""

from __future__ import annotations

import hashlib
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..algebra.elements import AlgebraElement
from ..models import CaseResult

SUITE_TOLERANCE = 1e-9

Trial = Callable[[np.random.Generator, int], Tuple[float, Any]]


def sub_seed(seed: int, name: str) -> int:
    """Stable 64-bit seed for one case, independent of case order."""
    digest = hashlib.sha256(f"{seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def case_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(sub_seed(seed, name))


def relative(lhs, rhs) -> float:
    """‖lhs − rhs‖ / max(1, ‖lhs‖, ‖rhs‖) for elements or forms."""
    return lhs.distance(rhs) / max(1.0, lhs.norm(), rhs.norm())


def worst_case(
    name: str,
    trials: int,
    seed: int,
    trial: Trial,
    tolerance: float,
    serialize: Optional[Callable[[Any], Any]] = None,
    details: Optional[Dict[str, Any]] = None,
) -> CaseResult:
    """Run ``trial(rng, k)`` *trials* times and report the largest residual.

    ``trial`` returns (residual, payload); the payload of the worst trial
    becomes the witness if the case fails.
    """
    rng = case_rng(seed, name)
    worst, payload, worst_k = 0.0, None, -1
    for k in range(trials):
        residual, data = trial(rng, k)
        if residual > worst or worst_k < 0:
            worst, payload, worst_k = residual, data, k
    witness = None
    if payload is not None:
        witness = serialize(payload) if serialize else payload
        if isinstance(witness, dict):
            witness = {**witness, "trial": worst_k}
    info = {"trials": trials, **(details or {})}
    return CaseResult.measure(name, worst, tolerance, witness, info)


def elements_witness(elements) -> list:
    from ..serialization import element_to_json

    return [element_to_json(e) for e in elements if isinstance(e, AlgebraElement)]
