"""Truncation control and the symmetric image-sum engine.

The dual-plate quantities are sums over image index n = ..., -2, -1, 1, 2, ...
(n = 0 excluded). Terms are accumulated in symmetric +n/-n pairs moving
outward; the loop stops once a caller-supplied rigorous tail bound drops below
the requested relative tolerance. The tail bound, not the last term, is what
certifies the truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, DomainError

__all__ = ["SummationControl", "SummationResult", "sum_symmetric_images"]


@dataclass(frozen=True)
class SummationControl:
    """Relative truncation tolerance and the hard cap on the image index."""

    tol: float = 1e-10
    n_max: int = 10**6

    def __post_init__(self) -> None:
        if not 0.0 < self.tol < 1.0:
            raise DomainError(f"tol must lie in (0, 1), got {self.tol!r}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max!r}")


@dataclass(frozen=True)
class SummationResult:
    value: float
    terms_used: int       # largest |n| included
    tail_estimate: float  # certified bound on the dropped tail


def sum_symmetric_images(
    pair_term: Callable[[int], float],
    tail_bound: Callable[[int], float],
    control: SummationControl,
    base: float = 0.0,
    n_min: int = 1,
) -> SummationResult:
    """Sum base + sum_{n>=n_min} pair_term(n) with a certified tail.

    pair_term(n) must return the combined contribution of +n and -n.
    tail_bound(N) must bound sum_{n>N} |pair_term(n)| from above (math.inf
    signals "no valid bound yet at this N", e.g. inside a pole-dominated
    head region).

    Raises ConvergenceError if the bound has not certified tol by n_max.
    """
    parts = [base]
    running = base
    bound = math.inf
    for n in range(n_min, control.n_max + 1):
        term = pair_term(n)
        parts.append(term)
        running += term
        bound = tail_bound(n)
        if bound <= control.tol * abs(running):
            # deterministic compensated accumulation for the returned value
            return SummationResult(value=math.fsum(parts), terms_used=n, tail_estimate=bound)
    raise ConvergenceError(
        f"image sum not certified below relative tolerance {control.tol:g} "
        f"within n_max={control.n_max} terms (last tail bound {bound:.3e})"
    )
