"""Exact evaluation of the systematic-length bounds and their predecessors.

Every logarithm floor is computed by integer power comparison so table
output is bit-reproducible; real-valued bound figures are reported
separately with un-floored intermediate logs (rounded to one decimal by the
CLI), alongside the exact integer floors that constrain k.  For partitions
of size lambda that do not divide k the log bound holds strictly; the
single reported value is the non-strict ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParamError


def floor_log_ratio(x: int, num: int, den: int) -> int:
    """Largest i >= 0 with (num/den)^i <= x, by exact power comparison."""
    if x < 1 or den < 1 or num <= den:
        raise ParamError(f"floor_log_ratio needs x >= 1 and num > den >= 1")
    i = 0
    np_, dp = num, den
    while np_ <= x * dp:
        i += 1
        np_ *= num
        dp *= den
    return i


def floor_log_int(base: int, value: int) -> int:
    """Largest c >= 0 with base^c <= value, by exact power comparison."""
    if base < 2 or value < 1:
        raise ParamError("floor_log_int needs base >= 2 and value >= 1")
    c = 0
    power = base
    while power <= value:
        c += 1
        power *= base
    return c


def _check_params(l: int, r: int):
    if r < 2:
        raise ParamError(f"need at least two parity nodes, got r = {r}")
    if l < 1 or l % r != 0:
        raise ParamError(f"r = {r} must divide l = {l}")


def partition_size_t(l: int, r: int) -> int:
    """The threshold t = ceil(r^2 / l)."""
    _check_params(l, r)
    return -(-(r * r) // l)


@dataclass(frozen=True)
class BoundReport:
    """All systematic-length bound values for one (l, r) cell.

    `lambda_int` is the exact partition-size value r when t = r, otherwise
    the integer upper estimate t + 1 + floor(log_{r/(r-1)}((r-t) l / r)).
    The `*_real` figures carry un-floored logs; the `*_floor` figures are
    the exact integer constraints on k.
    """

    l: int
    r: int
    t: int
    lambda_is_exact: bool
    lambda_int: int
    lambda_real: float
    quadratic: Fraction
    rlog_real: float
    rlog_floor: int
    prior_tamo: int
    prior_goparaju_quadratic: int
    prior_goparaju_log_real: float
    prior_goparaju_log_floor: int

    def as_dict(self):
        return {
            "l": self.l,
            "r": self.r,
            "t": self.t,
            "lambda_is_exact": self.lambda_is_exact,
            "lambda_int": self.lambda_int,
            "lambda_real": round(self.lambda_real, 4),
            "quadratic": str(self.quadratic),
            "quadratic_real": round(float(self.quadratic), 1),
            "rlog_real": round(self.rlog_real, 1),
            "rlog_floor": self.rlog_floor,
            "prior_tamo": self.prior_tamo,
            "prior_goparaju_quadratic": self.prior_goparaju_quadratic,
            "prior_goparaju_log_real": round(self.prior_goparaju_log_real, 1),
            "prior_goparaju_log_floor": self.prior_goparaju_log_floor,
        }


def evaluate_bounds(l: int, r: int) -> BoundReport:
    """Evaluate every bound for storage l and r parity nodes."""
    _check_params(l, r)
    t = partition_size_t(l, r)
    base_ratio = math.log(r / (r - 1))
    if t == r:
        lam_exact = True
        lam_int = r
        lam_real = float(r)
    else:
        lam_exact = False
        arg = (r - t) * l // r  # integral: r | l
        lam_int = t + 1 + floor_log_ratio(arg, r, r - 1)
        lam_real = t + 1 + math.log(arg) / base_ratio
    quadratic = Fraction(l * l - 1, r - 1)
    log_r_l = math.log(l) / math.log(r)
    rlog_real = 2.0 * lam_real * log_r_l
    # Exact floor of 2 * lambda_int * log_r(l): largest c with r^c <= l^(2 lambda).
    rlog_floor = floor_log_int(r, l ** (2 * lam_int))
    lam2_int = 1 + floor_log_ratio(l, r, r - 1)
    lam2_real = 1 + math.log(l) / base_ratio
    log2_l = math.log2(l)
    prior_log_real = 2.0 * lam2_real * log2_l
    prior_log_floor = floor_log_int(2, l ** (2 * lam2_int))
    return BoundReport(
        l=l,
        r=r,
        t=t,
        lambda_is_exact=lam_exact,
        lambda_int=lam_int,
        lambda_real=lam_real,
        quadratic=quadratic,
        rlog_real=rlog_real,
        rlog_floor=rlog_floor,
        prior_tamo=l * math.comb(l, l // r),
        prior_goparaju_quadratic=l * l,
        prior_goparaju_log_real=prior_log_real,
        prior_goparaju_log_floor=prior_log_floor,
    )


@dataclass(frozen=True)
class DimBounds:
    """Lower bounds on the dimension of a sum of m repair subspaces."""

    thm_explicit: Fraction
    geometric: Fraction

    def as_dict(self):
        return {
            "explicit": str(self.thm_explicit),
            "geometric": str(self.geometric),
        }


def dim_lower_bound(m: int, l: int, r: int) -> DimBounds:
    """Exact rational dimension bounds for a union of m repair subspaces.

    The explicit bound equals m*l/r for m <= t and
    l - (l/r)(r-t)((r-1)/r)^(m-t) beyond; the geometric bound is
    (1 - ((r-1)/r)^m) * l.  The explicit bound dominates the geometric one.
    """
    _check_params(l, r)
    if m < 1:
        raise ParamError(f"need m >= 1, got {m}")
    t = partition_size_t(l, r)
    beta = Fraction(l, r)
    ratio = Fraction(r - 1, r)
    if m <= t:
        explicit = m * beta
    else:
        e = m - t
        explicit = l - beta * (r - t) * ratio ** e
    geometric = (1 - ratio ** m) * l
    return DimBounds(explicit, geometric)


def bound_grid(l_values, r_values) -> list[BoundReport]:
    """Reports for every (l, r) cell with r dividing l, rows ordered by (l, r)."""
    out = []
    for l in l_values:
        for r in r_values:
            if r >= 2 and l % r == 0:
                out.append(evaluate_bounds(l, r))
    return out
