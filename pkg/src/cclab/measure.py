"""Measures supported on cube unions and finite atom sets.

CubeUnionMeasure carries a constant density against (n+1)-dimensional
Lebesgue measure on a finite disjoint cube family.  The reference measure
of generation k is the probability measure with density
1 / (2^{k(n+1)} l_k^{n+1}); every generation-j ancestor cube then carries
mass exactly 2^{-j(n+1)}.  Only finite-depth truncations are ever
represented; the limit measure on the Cantor set itself exists only as the
common extension of these truncations and is never materialized.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Cube, Generation


class GrowthError(ValueError):
    """Measure fed to a consumer that requires growth constant <= 1."""


@dataclass(eq=False)
class CubeUnionMeasure:
    """Uniform-density measure on a disjoint cube family."""

    corners: np.ndarray          # (N, n+1) lower corners
    sides: np.ndarray            # (N,)
    density: float               # mass per unit (n+1)-volume, constant
    generation: Generation | None = None   # set when the family is a generation

    def __post_init__(self):
        self.corners = np.ascontiguousarray(np.atleast_2d(np.asarray(self.corners, dtype=float)))
        self.sides = np.ascontiguousarray(np.atleast_1d(np.asarray(self.sides, dtype=float)))
        if self.sides.shape[0] != self.corners.shape[0]:
            raise ValueError("corners and sides disagree in length")
        # density 0 is allowed only as the zero measure (estimator sanity checks)
        if self.density < 0:
            raise ValueError(f"density must be nonnegative, got {self.density}")
        self.corners.setflags(write=False)
        self.sides.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.corners.shape[1]

    @property
    def n(self) -> int:
        return self.dim - 1

    @property
    def total_mass(self) -> float:
        return self.density * float(np.sum(self.sides**self.dim))

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        lo = self.corners.min(axis=0)
        hi = (self.corners + self.sides[:, None]).max(axis=0)
        return lo, hi

    def scaled_mass(self, factor: float) -> "CubeUnionMeasure":
        """Same support, mass multiplied by `factor`."""
        if factor <= 0:
            raise ValueError(f"mass factor must be positive, got {factor}")
        return CubeUnionMeasure(self.corners, self.sides, self.density * factor, self.generation)

    def to_json(self) -> dict:
        from .geometry import generation_to_json

        doc = {"density": self.density}
        if self.generation is not None:
            doc["generation_ref"] = generation_to_json(self.generation)
        else:
            doc["cubes"] = [
                {"corner": list(c), "side": float(s)}
                for c, s in zip(self.corners.tolist(), self.sides.tolist())
            ]
        return doc


@dataclass(eq=False)
class AtomicMeasure:
    """Finite weighted atom set; the discretization device for segments."""

    points: np.ndarray           # (m, n+1)
    weights: np.ndarray          # (m,) positive

    def __post_init__(self):
        self.points = np.ascontiguousarray(np.atleast_2d(np.asarray(self.points, dtype=float)))
        self.weights = np.ascontiguousarray(np.atleast_1d(np.asarray(self.weights, dtype=float)))
        if self.weights.shape[0] != self.points.shape[0]:
            raise ValueError("points and weights disagree in length")
        if np.any(self.weights <= 0):
            raise ValueError("atom weights must be positive")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points.min(axis=0), self.points.max(axis=0)

    def to_json(self) -> dict:
        return {
            "atoms": [
                {"point": list(p), "weight": float(w)}
                for p, w in zip(self.points.tolist(), self.weights.tolist())
            ]
        }


def uniform_on_generation(gen: Generation) -> CubeUnionMeasure:
    """Probability measure with constant density on a generation."""
    if gen.ncubes == 0:
        raise ValueError("empty generation")
    density = 1.0 / gen.volume()
    sides = np.full(gen.ncubes, gen.side)
    return CubeUnionMeasure(gen.corners, sides, density, generation=gen)


def measure_of_cube(mu, cube) -> float:
    """Exact mass of an axis-aligned cube.

    For cube unions the per-axis overlaps multiply out exactly; for atomic
    measures atoms on the closed cube count.
    """
    if isinstance(cube, Cube):
        qlo = np.asarray(cube.corner, dtype=float)
        qside = cube.side
    else:
        qlo, qside = cube
        qlo = np.asarray(qlo, dtype=float)
    qhi = qlo + qside
    if isinstance(mu, AtomicMeasure):
        inside = np.all((mu.points >= qlo) & (mu.points <= qhi), axis=1)
        return float(mu.weights[inside].sum())
    lo = np.maximum(mu.corners, qlo)
    hi = np.minimum(mu.corners + mu.sides[:, None], qhi)
    overlap = np.clip(hi - lo, 0.0, None)
    return mu.density * float(np.prod(overlap, axis=1).sum())


def _ancestor_cubes(mu: CubeUnionMeasure) -> list[tuple[np.ndarray, float]]:
    """Dyadic ancestor cubes (corners array, side) for every level 0..k.

    These are the extremal cubes of the growth estimate, so they enter the
    growth constant deterministically.  For non-generation supports the
    support cubes themselves are the only candidates.
    """
    gen = mu.generation
    if gen is None:
        return [(mu.corners, float(s)) for s in np.unique(mu.sides)]
    d = gen.dim
    out = [(gen.corners, gen.side)]
    corners = gen.corners
    side = gen.side
    for _ in range(gen.level):
        grouped = corners.reshape(-1, 1 << d, d)
        lo = grouped.min(axis=1)
        hi = (grouped + side).max(axis=1)
        side = float(np.max(hi - lo))
        corners = lo
        out.append((corners, side))
    return out


def growth_constant(mu, d_exp: float, trials: int = 2000, rng_seed: int = 0) -> float:
    """Empirical sup of mu(Q) / side(Q)^d over test cubes.

    Deterministic candidates: every dyadic ancestor cube (sharp for the
    corner construction).  Random candidates: `trials` cubes with centers
    in the 2-neighborhood of the support and sides log-uniform between the
    finest support side and four support widths; ranges are relative to the
    support bounding box so the sampler commutes with translation and
    scaling.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    best = 0.0
    if isinstance(mu, CubeUnionMeasure):
        for corners, side in _ancestor_cubes(mu):
            if side <= 0:
                continue
            for c in corners:
                best = max(best, measure_of_cube(mu, (c, side)) / side**d_exp)
        min_side = float(mu.sides.min())
    else:
        span = float(np.max(mu.bbox()[1] - mu.bbox()[0]))
        min_side = max(span / max(len(mu.weights), 1), 1e-9)
    lo, hi = mu.bbox()
    scale = float(np.max(hi - lo))
    if scale <= 0:
        scale = 1.0
    rng = np.random.default_rng(rng_seed)
    centers = lo - 2.0 * scale + rng.random((trials, len(lo))) * (hi - lo + 4.0 * scale)
    log_lo, log_hi = np.log(min_side), np.log(4.0 * scale)
    sides = np.exp(rng.uniform(log_lo, log_hi, trials))
    for c, s in zip(centers, sides):
        best = max(best, measure_of_cube(mu, (c - s / 2.0, s)) / s**d_exp)
    return best


def frostman_rescale(
    mu: CubeUnionMeasure, d_exp: float, growth: float | None = None,
    trials: int = 2000, rng_seed: int = 0,
) -> CubeUnionMeasure:
    """Scale mu down so its empirical d-growth constant is <= 1.

    Never scales up: a growth constant already below one is left alone
    (admissibility only needs the upper bound).
    """
    if mu.total_mass <= 0:
        raise ValueError("cannot rescale a zero measure")
    g = growth_constant(mu, d_exp, trials=trials, rng_seed=rng_seed) if growth is None else growth
    factor = 1.0 / max(g, 1.0)
    return mu.scaled_mass(factor)


def check_unit_growth(mu: CubeUnionMeasure, d_exp: float, tol: float = 1e-9) -> float:
    """Deterministic growth precheck over ancestor cubes and support cubes.

    Raises GrowthError when the constant exceeds 1 + tol.
    """
    best = 0.0
    for corners, side in _ancestor_cubes(mu):
        if side <= 0:
            continue
        for c in corners:
            best = max(best, measure_of_cube(mu, (c, side)) / side**d_exp)
    best = max(best, float(np.max(mu.density * mu.sides ** (mu.dim - d_exp))))
    if best > 1.0 + tol:
        raise GrowthError(
            f"measure has growth constant {best:.6g} > 1; rescale before estimating seminorms"
        )
    return best


def segment_measure(a, b, m: int) -> AtomicMeasure:
    """m equally weighted atoms at the left endpoints of m equal
    subintervals of [a, b); total mass 1."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if m < 1:
        raise ValueError(f"need at least one atom, got m={m}")
    if np.array_equal(a, b):
        raise ValueError("degenerate segment: endpoints coincide")
    ts = np.arange(m) / m
    points = a[None, :] + ts[:, None] * (b - a)[None, :]
    weights = np.full(m, 1.0 / m)
    return AtomicMeasure(points, weights)
