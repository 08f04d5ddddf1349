"""Two-sided numeric bounds for the one-sided caloric capacity of Cantor
iterates, compared against the reference value (sum theta_j)^{-1}.

Lower bound: with s an estimate of sup (P * mu_k), the measure mu_k / s has
one-sided potential <= 1 at every tested point and mass 1/s, so 1/s
estimates the capacity from below.  The sup search is itself from below, so
the bound is heuristic-certainty and flagged as such.

Upper bound, symmetric route: for any admissible nu, integrating the
pointwise lower envelope m of (Psy * mu_k) over E_k against nu and swapping
the integrals gives nu(E_k) <= 1/m.  The pointwise domination P <= 2 Psy
converts this into an upper bound for the one-sided capacity at the cost of
a factor 2 (the only conversion with an explicit constant).

Upper bound, one-sided route: the same duality with kernel P gives
nu(E_k) <= 1 / inf_{E_k}(P* * mu_k).  For the corner construction this inf
vanishes at the extreme time faces (no mass strictly below the bottom
corner), so the route is vacuous and returns +inf; it is kept because the
symmetry cross-check between the P and P* infima is a cheap engine test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import CantorSpec, Generation, build_generation, theta_sum
from .kernels import TIME_REVERSED
from .measure import CubeUnionMeasure, uniform_on_generation
from .potential import EngineError, ExtremumReport, inf_potential_on_set, sup_potential


class InconclusiveError(EngineError):
    """Upper bound could not be separated from zero at this tolerance."""


def default_tol(k: int) -> float:
    """1e-3 up to generation 4, 1e-2 beyond (leaf counts grow as 2^{k(n+1)})."""
    return 1e-3 if k <= 4 else 1e-2


@dataclass
class CapacityBounds:
    k: int
    lower: float
    upper: float
    theta_sum_inv: float
    ratio_lower: float
    ratio_upper: float
    lower_heuristic: bool = True   # sup search is a lower estimate of the true sup
    reports: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 < self.lower <= self.upper):
            raise EngineError(
                f"bound ordering violated at k={self.k}: lower={self.lower}, upper={self.upper}"
            )

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "theta_sum_inv": self.theta_sum_inv,
            "ratio_lower": self.ratio_lower,
            "ratio_upper": self.ratio_upper,
            "lower_heuristic": self.lower_heuristic,
            "reports": {name: rep.to_json() for name, rep in self.reports.items()},
        }


def lower_bound_for(mu: CubeUnionMeasure, gen: Generation, tol: float,
                    kernel: str = "P") -> tuple[float, ExtremumReport]:
    """1 / (estimated sup of the one-sided potential), heuristic-certainty."""
    rep = sup_potential(mu, kernel, gen, tol)
    if rep.diverged:
        raise EngineError("sup search diverged; measure is too singular for a lower bound")
    s = rep.extremum + rep.err
    if s <= 0:
        raise EngineError("sup estimate vanished; cannot form a lower bound")
    return 1.0 / s, rep


def upper_bound_sym_for(mu: CubeUnionMeasure, gen: Generation,
                        tol: float) -> tuple[float, ExtremumReport]:
    """1 / (inf of Psy * mu over the set, minus its error allowance)."""
    rep = inf_potential_on_set(mu, "Psy", gen, tol)
    m = rep.extremum - rep.err
    if m <= 0:
        raise InconclusiveError(
            f"symmetric potential inf {rep.extremum} not separated from 0 at tol {tol}"
        )
    return 1.0 / m, rep


def upper_bound_onesided_for(mu: CubeUnionMeasure, gen: Generation, tol: float,
                             kernel: str = "P") -> tuple[float, dict]:
    """Duality bound 1 / inf_{E_k}(P* * mu_k); +inf when vacuous.

    Requires a time-symmetric configuration; the infima for the kernel and
    its time reversal are cross-checked against each other.
    """
    rev = TIME_REVERSED[kernel]
    rep_rev = inf_potential_on_set(mu, rev, gen, tol)
    rep_fwd = inf_potential_on_set(mu, kernel, gen, tol)
    gap = abs(rep_rev.extremum - rep_fwd.extremum)
    if gap > 4.0 * tol + rep_rev.err + rep_fwd.err:
        raise EngineError(
            f"time-symmetry cross-check failed: inf({rev})={rep_rev.extremum} vs "
            f"inf({kernel})={rep_fwd.extremum}, gap {gap} > {4 * tol}"
        )
    m = min(rep_rev.extremum - rep_rev.err, rep_fwd.extremum - rep_fwd.err)
    reports = {"inf_reversed": rep_rev, "inf_forward": rep_fwd}
    if m <= 0:
        return math.inf, reports
    return 1.0 / m, reports


def bounds_for(mu: CubeUnionMeasure, gen: Generation, k: int, theta_sum_inv: float,
               tol: float, kernel: str = "P") -> CapacityBounds:
    lower, rep_lo = lower_bound_for(mu, gen, tol, kernel=kernel)
    ub_sym, rep_sym = upper_bound_sym_for(mu, gen, tol)
    ub_one, reps_one = upper_bound_onesided_for(mu, gen, tol, kernel=kernel)
    upper = min(2.0 * ub_sym, ub_one)
    reports = {"sup_onesided": rep_lo, "inf_symmetric": rep_sym}
    reports.update(reps_one)
    return CapacityBounds(
        k=k,
        lower=lower,
        upper=upper,
        theta_sum_inv=theta_sum_inv,
        ratio_lower=lower / theta_sum_inv,
        ratio_upper=upper / theta_sum_inv,
        reports=reports,
    )


def _setup(spec: CantorSpec, k: int):
    gen = build_generation(spec, k)
    return uniform_on_generation(gen), gen


def lower_bound(spec: CantorSpec, k: int, tol: float | None = None) -> float:
    tol = default_tol(k) if tol is None else tol
    mu, gen = _setup(spec, k)
    return lower_bound_for(mu, gen, tol)[0]


def upper_bound_sym(spec: CantorSpec, k: int, tol: float | None = None) -> float:
    tol = default_tol(k) if tol is None else tol
    mu, gen = _setup(spec, k)
    return upper_bound_sym_for(mu, gen, tol)[0]


def upper_bound_onesided(spec: CantorSpec, k: int, tol: float | None = None) -> float:
    tol = default_tol(k) if tol is None else tol
    mu, gen = _setup(spec, k)
    return upper_bound_onesided_for(mu, gen, tol)[0]


def bounds(spec: CantorSpec, k: int, tol: float | None = None) -> CapacityBounds:
    tol = default_tol(k) if tol is None else tol
    mu, gen = _setup(spec, k)
    tsi = 1.0 / theta_sum(spec, k)
    return bounds_for(mu, gen, k, tsi, tol)
