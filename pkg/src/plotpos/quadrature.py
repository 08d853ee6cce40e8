"""Adaptive Simpson quadrature with user-supplied breakpoints.

Integrands with a kink (|u - p| f(u) at u = p) converge slowly when a panel
straddles the kink, so the interval is split at every breakpoint first.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

from .errors import SolverError


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 60,
) -> float:
    """Integrate ``f`` over [a, b] to roughly ``tol`` absolute error."""
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # explicit stack keeps deep refinement off the Python call stack
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    comp = []
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            comp.append(left + right + delta / 15.0)
            continue
        if depth >= max_depth:
            raise SolverError(f"adaptive Simpson exceeded depth {max_depth} on [{a}, {b}]", (a, b))
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))
    return math.fsum(comp)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    points: Iterable[float] = (),
    tol: float = 1e-12,
) -> float:
    """Adaptive Simpson over [a, b], split at every breakpoint inside it."""
    cuts = sorted({float(p) for p in points if a < p < b})
    edges = [a, *cuts, b]
    pieces = len(edges) - 1
    return math.fsum(
        adaptive_simpson(f, lo, hi, tol / pieces) for lo, hi in zip(edges[:-1], edges[1:])
    )
