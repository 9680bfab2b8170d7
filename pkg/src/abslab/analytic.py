"""Scalar functions behind the ABS extremal arguments, and grid checks of their claimed behaviour.

Everything here is plain double precision except the asymptotic-series
checks, which need :mod:`mpmath` because ``thm1_f`` suffers catastrophic
cancellation for large ``s``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath

__all__ = [
    "f_xy",
    "f_partial",
    "g_s",
    "phi",
    "psi_concave",
    "psi_decay",
    "lemma2_f",
    "thm1_f",
    "thm1_series",
    "series_tail",
    "THM1_SERIES_CLAIMED",
    "THM1_SERIES_EXPANDED",
    "h_case",
    "h_case_derivative_mp",
    "h_derivative",
    "ab_identity",
    "ab_polynomial",
    "subcase24_rhs",
    "SUBCASE24_DOMAIN",
    "MonotoneScanReport",
    "SCAN_TARGETS",
    "DEFAULT_GRIDS",
    "scan_monotone",
    "steps",
    "central_difference",
]


def f_xy(x: float, y: float) -> float:
    """ABS edge weight extended to real degrees: ``sqrt(1 - 2/(x+y))``."""
    if x + y < 2:
        raise ValueError(f"f_xy needs x + y >= 2, got x={x}, y={y}")
    return math.sqrt(1.0 - 2.0 / (x + y))


def f_partial(x: float, y: float) -> float:
    """Closed form of both first partials of :func:`f_xy`: ``(x+y-2)^(-1/2) (x+y)^(-3/2)``."""
    u = x + y
    if u <= 2:
        raise ValueError("partial derivative undefined for x + y <= 2")
    return (u - 2) ** -0.5 * u**-1.5


def g_s(s: float, x: float, y: float) -> float:
    """Shifted difference ``f(x+s, y) - f(x, y)``."""
    return f_xy(x + s, y) - f_xy(x, y)


def phi(t: float) -> float:
    if t < 2:
        raise ValueError("phi needs t >= 2")
    return math.sqrt(1.0 - 2.0 / t)


def psi_concave(x: float, y: float, z: float) -> float:
    """``phi(x+y) - phi(x+y+z-2)``: per-neighbour loss when a hub absorbs a degree-z neighbour.

    Not to be confused with :func:`psi_decay`, a different one-variable helper.
    """
    return phi(x + y) - phi(x + y + z - 2)


def psi_decay(t: float) -> float:
    """``1 / (t^(3/2) sqrt(t-2))`` for ``t > 2``."""
    if t <= 2:
        raise ValueError("psi_decay needs t > 2")
    return 1.0 / (t**1.5 * math.sqrt(t - 2))


def lemma2_f(x: float, y: float) -> float:
    """Lower bound on the ABS drop when two adjacent hubs of degrees ``x >= y >= 3`` merge."""
    if y < 3 or x < y:
        raise ValueError(f"lemma2_f needs x >= y >= 3, got x={x}, y={y}")
    inner = phi(x + y - 1)
    return (x - 1) * (phi(x + 1) - inner) + (y - 1) * (phi(y + 1) - inner) + phi(x + y)


# -- one-variable bound for merging equal hubs ----------------------------------

THM1_SERIES_CLAIMED = (
    Fraction(7, 4),
    Fraction(-21, 8),
    Fraction(77, 64),
    Fraction(-271, 128),
    Fraction(283, 512),
    Fraction(-2525, 1024),
)

# coefficients of 1/s .. 1/s^6 obtained by expanding thm1_f at infinity
THM1_SERIES_EXPANDED = (
    Fraction(9, 4),
    Fraction(-9, 4),
    Fraction(105, 64),
    Fraction(-49, 32),
    Fraction(717, 512),
    Fraction(-601, 512),
)


def thm1_f(s, dps: int | None = None):
    """``2(s-1)(sqrt(1-2/(s+1)) - sqrt(1-2/(2s-1))) + sqrt(1-1/s)`` for ``s >= 3``.

    With ``dps`` set the value is computed in :mod:`mpmath` at that many digits
    and returned as an ``mpf``.
    """
    if s < 3:
        raise ValueError(f"thm1_f needs s >= 3, got {s}")
    if dps is None:
        return 2 * (s - 1) * (math.sqrt(1 - 2 / (s + 1)) - math.sqrt(1 - 2 / (2 * s - 1))) + math.sqrt(1 - 1 / s)
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        val = 2 * (s - 1) * (mpmath.sqrt(1 - 2 / (s + 1)) - mpmath.sqrt(1 - 2 / (2 * s - 1))) + mpmath.sqrt(1 - 1 / s)
        return +val


def thm1_series(s, coeffs: Sequence[Fraction] = THM1_SERIES_CLAIMED, dps: int = 60):
    """Truncated expansion ``sum_k coeffs[k] / s^(k+1)`` evaluated in mpmath."""
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        return +mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator / s ** (k + 1) for k, c in enumerate(coeffs))


def series_tail(s, coeffs: Sequence[Fraction] = THM1_SERIES_CLAIMED, dps: int = 60) -> float:
    """``|thm1_f(s) - S(s)| * s^(len(coeffs)+1)``; bounded in ``s`` iff the coefficients are right."""
    with mpmath.workdps(dps):
        diff = abs(thm1_f(s, dps=dps) - thm1_series(s, coeffs, dps=dps))
        return float(diff * mpmath.mpf(s) ** (len(coeffs) + 1))


# -- case functions for the maximum-degree argument --------------------------------


def _h_expr(k: str, t, f):
    if k == "h1":
        return f(3, 3) + f(2, 3) - f(3, t) - f(2, 2) - (t - 2) * (f(3, t) - f(3, t - 1))
    if k == "h2":
        return 2 * f(3, 3) - f(3, t) - f(2, 2) - (t - 2) * (f(3, t) - f(3, t - 1))
    if k == "h3":
        return 2 * f(3, 3) - f(3, t) - f(2, 2) - (t - 1) * (f(3, t) - f(3, t - 1))
    if k == "h4":
        # f(4,t) enters with a minus sign, f(3,3) with a plus sign
        return f(4, 3) - f(4, t) + f(3, 3) - f(2, 2) - (t - 2) * (f(4, t) - f(4, t - 1))
    raise ValueError(f"unknown case function {k!r}")


def h_case(k: str, t: float) -> float:
    """Evaluate one of the four case functions ``h1``..``h4`` at ``t >= 3``."""
    if t < 3:
        raise ValueError(f"h functions need t >= 3, got {t}")
    return _h_expr(k, t, f_xy)


def h_case_derivative_mp(k: str, t: float, dps: int = 40) -> float:
    """Numerical derivative of ``h_case(k, .)`` at ``t``, computed in mpmath at ``dps`` digits."""
    if t <= 3:
        raise ValueError(f"need t > 3 for a two-sided derivative, got {t}")
    with mpmath.workdps(dps):
        f = lambda x, y: mpmath.sqrt(1 - mpmath.mpf(2) / (x + y))  # noqa: E731
        return float(mpmath.diff(lambda x: _h_expr(k, x, f), mpmath.mpf(t)))


def _ab_parts(which: str, t: float) -> tuple[float, float]:
    if which == "case1":
        a = (t * t + 3 * t - 2) * (t + 3) ** 2 * math.sqrt((t + 1) * (t + 2))
        b = (t * t + 5 * t + 2) * (t + 2) ** 2 * math.sqrt(t * (t + 3))
    elif which == "case3":
        a = (t * t + 3 * t - 1) * (t + 3) ** 2 * math.sqrt((t + 1) * (t + 2))
        b = (t * t + 5 * t + 3) * (t + 2) ** 2 * math.sqrt(t * (t + 3))
    else:
        raise ValueError(f"unknown identity {which!r}")
    return a, b


def ab_identity(which: str, t: float) -> float:
    """``A^2 - B^2`` evaluated from the radical definitions of ``A`` and ``B``."""
    if t < 1:
        raise ValueError(f"ab_identity needs t >= 1, got {t}")
    a, b = _ab_parts(which, t)
    return a * a - b * b


def ab_polynomial(which: str, t: float) -> float:
    """Claimed polynomial form of ``A^2 - B^2``, for comparison with :func:`ab_identity`."""
    if which == "case1":
        return -14 * t**5 - 137 * t**4 - 456 * t**3 - 577 * t**2 - 140 * t + 108
    if which == "case3":
        return -(t + 2) * (t + 3) * (10 * t**5 + 97 * t**4 + 328 * t**3 + 447 * t**2 + 180 * t - 27)
    raise ValueError(f"unknown identity {which!r}")


def h_derivative(which: str, t: float) -> float:
    """``(A - B) / (sqrt(t(t+1)) (t+2)^2 (t+3)^2)``, the closed-form derivative of h1 or h3."""
    a, b = _ab_parts(which, t)
    return (a - b) / (math.sqrt(t * (t + 1)) * (t + 2) ** 2 * (t + 3) ** 2)


SUBCASE24_DOMAIN = tuple((dw, k) for dw in (4, 5, 6) for k in range(dw + 1))


def subcase24_rhs(dw: int, k: int) -> float:
    """Right-hand side of the degree-4 hub bound, term for term, on its 18 admissible points."""
    if (dw, k) not in SUBCASE24_DOMAIN:
        raise ValueError(f"(dw, k) = ({dw}, {k}) outside dw in {{4,5,6}}, 0 <= k <= dw")
    f = f_xy
    return (
        (4 * k + 1) * f(3, 3)
        - 3 * k * f(3, 4)
        - k * f(2, 2)
        - f(4, dw)
        - (k - 2) * (f(4, dw) - f(3, dw - 1))
        - (dw - k - 1) * (f(3, dw) - f(3, dw - 1))
    )


def central_difference(fn: Callable[[float], float], x: float, h: float = 1e-5) -> float:
    return (fn(x + h) - fn(x - h)) / (2 * h)


# -- monotonicity scans ------------------------------------------------------------


def steps(start: float, stop: float, h: float) -> tuple[float, ...]:
    """Inclusive arithmetic grid ``start, start+h, ..., stop`` without float drift."""
    count = int(round((stop - start) / h))
    return tuple(start + i * h for i in range(count + 1))


@dataclass(frozen=True)
class _Target:
    fn: Callable[..., float]
    axis: str
    direction: int  # -1 decreasing, +1 increasing
    domain: Callable[..., bool] = lambda **kw: True


SCAN_TARGETS: dict[str, _Target] = {
    "lemma2_f:y": _Target(lambda x, y: lemma2_f(x, y), "y", -1, lambda x, y: 3 <= y <= x),
    "g_s:x": _Target(lambda s, x, y: g_s(s, x, y), "x", -1),
    "g_s:y": _Target(lambda s, x, y: g_s(s, x, y), "y", -1),
    "f_xy:x": _Target(lambda x, y: f_xy(x, y), "x", +1, lambda x, y: y >= 3),
    "h1": _Target(lambda t: h_case("h1", t), "t", -1),
    "h2": _Target(lambda t: h_case("h2", t), "t", -1),
    "h3": _Target(lambda t: h_case("h3", t), "t", -1),
    "h4": _Target(lambda t: h_case("h4", t), "t", -1),
    "thm1_f": _Target(lambda s: thm1_f(s), "s", -1),
    "psi_concave:x": _Target(lambda x, y, z: psi_concave(x, y, z), "x", +1, lambda x, y, z: x >= 1 and min(y, z) >= 3),
    "psi_decay": _Target(lambda t: psi_decay(t), "t", -1, lambda t: t > 2),
}

_HGRID = {"t": steps(3, 100, 0.25)}
DEFAULT_GRIDS: dict[str, dict[str, tuple[float, ...]]] = {
    "lemma2_f:y": {"x": steps(3, 30, 1), "y": steps(3, 30, 0.25)},
    "g_s:x": {"s": (1, 2, 3), "x": steps(1, 40, 0.5), "y": steps(1, 40, 0.5)},
    "g_s:y": {"s": (1, 2, 3), "x": steps(1, 40, 0.5), "y": steps(1, 40, 0.5)},
    "f_xy:x": {"y": steps(3, 10, 1), "x": steps(1, 40, 0.5)},
    "h1": _HGRID,
    "h2": _HGRID,
    "h3": _HGRID,
    "h4": _HGRID,
    "thm1_f": {"s": steps(3, 100, 1)},
    "psi_concave:x": {"x": steps(1, 40, 0.5), "y": steps(3, 10, 1), "z": steps(3, 10, 1)},
    "psi_decay": {"t": steps(2.25, 100, 0.25)},
}


@dataclass
class MonotoneScanReport:
    """Outcome of a grid scan. ``max_margin`` is the worst-case slack (negative when violated)."""

    function_id: str
    grid: dict
    violations: list[dict] = field(default_factory=list)
    max_margin: float = math.inf
    comparisons: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "function_id": self.function_id,
            "grid": self.grid,
            "violations": self.violations,
            "max_margin": self.max_margin,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _describe_grid(grid: Mapping[str, Sequence[float]]) -> dict:
    return {k: {"min": min(v), "max": max(v), "points": len(v)} for k, v in grid.items()}


def scan_monotone(function_id: str, grid: Mapping[str, Sequence[float]] | None = None) -> MonotoneScanReport:
    """Check a claimed strict monotonicity by forward differences along one grid axis.

    For each combination of the other axes, consecutive in-domain points along
    the scan axis are compared; any difference with the wrong sign (or zero) is
    a violation.
    """
    try:
        target = SCAN_TARGETS[function_id]
    except KeyError:
        raise ValueError(f"unknown function id {function_id!r}") from None
    if grid is None:
        grid = DEFAULT_GRIDS[function_id]
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise ValueError("grid must be non-empty on every axis")
    if target.axis not in grid:
        raise ValueError(f"grid lacks scan axis {target.axis!r}")

    report = MonotoneScanReport(function_id, _describe_grid(grid))
    sign = "+" if target.direction > 0 else "-"
    scan_vals = sorted(grid[target.axis])
    others = [k for k in grid if k != target.axis]
    for combo in itertools.product(*(grid[k] for k in others)):
        fixed = dict(zip(others, combo))
        prev_pt = prev_val = None
        for a in scan_vals:
            pt = dict(fixed, **{target.axis: a})
            if not target.domain(**pt):
                continue
            val = target.fn(**pt)
            if prev_pt is not None:
                diff = val - prev_val
                margin = target.direction * diff
                report.comparisons += 1
                report.max_margin = min(report.max_margin, margin)
                if margin <= 0:
                    report.violations.append({"point": prev_pt, "value": diff, "expected_sign": sign})
            prev_pt, prev_val = pt, val
    if report.comparisons == 0:
        raise ValueError("grid produced no in-domain comparisons")
    return report
