"""Corner-type Cantor iterates in R^{n+1}.

The ambient space is R^{n+1} with coordinates (x_1, ..., x_n, t); the last
coordinate is time.  Generation k of the construction consists of
2^{k(n+1)} axis-aligned cubes of side l_k = prod_{j<=k} lambda_j, obtained
by placing a shrunken copy of each cube at each of its 2^{n+1} corners.

Coordinates are plain floats.  When every lambda_j is dyadic (e.g. 1/4) all
corner coordinates are exactly representable and the construction is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_DEPTH_BITS = 28          # hard guard: k*(n+1) <= 28
DEFAULT_MAX_CUBES = 1 << 20  # desk-scale default cap on 2^{k(n+1)}


class SpecError(ValueError):
    """Invalid Cantor construction parameters or depth request."""


@dataclass(frozen=True)
class CantorSpec:
    """Parameters of a corner Cantor construction.

    n        spatial dimension (ambient dimension is n+1)
    lambdas  per-generation contraction factors: a single float acts as a
             constant sequence, a tuple/list is an explicit finite sequence
    tau0     uniform upper bound for the factors, lambda_j <= tau0 < 1/2;
             defaults to the largest supplied factor
    """

    n: int
    lambdas: float | tuple
    tau0: float | None = None

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise SpecError(f"spatial dimension must be a positive integer, got {self.n}")
        lams = self.lambdas
        if isinstance(lams, (list, tuple, np.ndarray)):
            lams = tuple(float(v) for v in lams)
            object.__setattr__(self, "lambdas", lams)
            if not lams:
                raise SpecError("empty contraction sequence")
            seq_max = max(lams)
        else:
            object.__setattr__(self, "lambdas", float(lams))
            seq_max = float(lams)
        tau0 = seq_max if self.tau0 is None else float(self.tau0)
        object.__setattr__(self, "tau0", tau0)
        if not (0.0 < tau0 < 0.5):
            raise SpecError(f"tau0 must satisfy 0 < tau0 < 1/2, got {tau0}")
        check = self.lambdas if isinstance(self.lambdas, tuple) else (self.lambdas,)
        for j, lam in enumerate(check, start=1):
            if not (0.0 < lam <= tau0):
                raise SpecError(f"lambda_{j}={lam} violates 0 < lambda_j <= tau0={tau0}")

    @property
    def dim(self) -> int:
        return self.n + 1

    def max_depth(self) -> int | None:
        """Deepest generation the lambda sequence supports (None = unbounded)."""
        if isinstance(self.lambdas, tuple):
            return len(self.lambdas)
        return None

    def lam(self, j: int) -> float:
        """Contraction factor of generation j (1-indexed)."""
        if j < 1:
            raise SpecError(f"generation index must be >= 1, got {j}")
        if isinstance(self.lambdas, tuple):
            if j > len(self.lambdas):
                raise SpecError(
                    f"depth {j} exceeds the supplied sequence of length {len(self.lambdas)}"
                )
            return self.lambdas[j - 1]
        return self.lambdas


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube: lower corner and side length."""

    corner: tuple
    side: float

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError(f"cube side must be positive, got {self.side}")
        object.__setattr__(self, "corner", tuple(float(c) for c in self.corner))

    @property
    def diameter(self) -> float:
        return self.side * np.sqrt(len(self.corner))

    def contains(self, other: "Cube") -> bool:
        lo, hi = np.asarray(self.corner), np.asarray(self.corner) + self.side
        olo, ohi = np.asarray(other.corner), np.asarray(other.corner) + other.side
        return bool(np.all(olo >= lo - 1e-15) and np.all(ohi <= hi + 1e-15))


@dataclass(eq=False)
class Generation:
    """One generation of the construction: 2^{k(n+1)} equal cubes.

    `corners` is a (N, n+1) float array; row order is the deterministic
    child enumeration (bit i of the child index <-> offset in coordinate i,
    parents in their own enumeration order), which downstream tree code
    relies on.
    """

    level: int
    side: float
    corners: np.ndarray

    def __post_init__(self):
        self.corners = np.ascontiguousarray(np.atleast_2d(np.asarray(self.corners, dtype=float)))
        self.corners.setflags(write=False)

    @property
    def n(self) -> int:
        return self.corners.shape[1] - 1

    @property
    def dim(self) -> int:
        return self.corners.shape[1]

    @property
    def ncubes(self) -> int:
        return self.corners.shape[0]

    @property
    def cubes(self) -> list[Cube]:
        return [Cube(tuple(c), self.side) for c in self.corners]

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        """Hull of the family; equals the (transformed) root cube."""
        lo = self.corners.min(axis=0)
        hi = self.corners.max(axis=0) + self.side
        return lo, hi

    def volume(self) -> float:
        return self.ncubes * self.side ** self.dim


def _child_offsets(dim: int) -> np.ndarray:
    """(2^dim, dim) 0/1 matrix, row b has bit i of b in column i."""
    idx = np.arange(1 << dim)
    return ((idx[:, None] >> np.arange(dim)[None, :]) & 1).astype(float)


def build_generation(spec: CantorSpec, k: int, max_cubes: int = DEFAULT_MAX_CUBES) -> Generation:
    """Cubes of generation k inside Q^0 = [0,1]^{n+1}.

    Children of a side-s parent have side lambda_k * s and sit at the
    parent's 2^{n+1} corners.
    """
    if k < 0 or int(k) != k:
        raise SpecError(f"generation index must be a nonnegative integer, got {k}")
    depth = spec.max_depth()
    if depth is not None and k > depth:
        raise SpecError(f"depth {k} exceeds the supplied sequence of length {depth}")
    d = spec.dim
    if k * d > MAX_DEPTH_BITS:
        raise SpecError(f"k(n+1) = {k * d} exceeds the hard depth guard {MAX_DEPTH_BITS}")
    if 1 << (k * d) > max_cubes:
        raise SpecError(f"2^{k * d} cubes exceed the cap of {max_cubes}")
    bits = _child_offsets(d)
    corners = np.zeros((1, d))
    side = 1.0
    for j in range(1, k + 1):
        new_side = side * spec.lam(j)
        offset = side - new_side
        corners = (corners[:, None, :] + offset * bits[None, :, :]).reshape(-1, d)
        side = new_side
    return Generation(level=k, side=side, corners=corners)


def side_length(spec: CantorSpec, k: int) -> float:
    """l_k = prod_{j=1..k} lambda_j; l_0 = 1."""
    if k < 0:
        raise SpecError(f"generation index must be nonnegative, got {k}")
    depth = spec.max_depth()
    if depth is not None and k > depth:
        raise SpecError(f"depth {k} exceeds the supplied sequence of length {depth}")
    out = 1.0
    for j in range(1, k + 1):
        out *= spec.lam(j)
    return out


def theta(spec: CantorSpec, k: int) -> float:
    """Density 1 / (l_k^n 2^{k(n+1)}); equals 1 at k = 0."""
    return 1.0 / (side_length(spec, k) ** spec.n * 2.0 ** (k * spec.dim))


def theta_sum(spec: CantorSpec, k: int) -> float:
    """Partial sum theta_0 + ... + theta_k."""
    return sum(theta(spec, j) for j in range(k + 1))


def translated(gen: Generation, tau) -> Generation:
    tau = np.asarray(tau, dtype=float)
    return Generation(gen.level, gen.side, gen.corners + tau)


def scaled(gen: Generation, lam: float) -> Generation:
    if lam <= 0:
        raise ValueError(f"scale factor must be positive, got {lam}")
    return Generation(gen.level, gen.side * lam, gen.corners * lam)


def reflected(gen: Generation, axis: int, c: float = 0.0) -> Generation:
    """Reflect about the hyperplane {x_axis = c}; axis n+... = dim-1 is time."""
    if not (0 <= axis < gen.dim):
        raise ValueError(f"axis {axis} out of range for dimension {gen.dim}")
    corners = gen.corners.copy()
    corners[:, axis] = 2.0 * c - (corners[:, axis] + gen.side)
    return Generation(gen.level, gen.side, corners)


def time_reflected(gen: Generation, c: float = 0.0) -> Generation:
    return reflected(gen, gen.dim - 1, c)


def generation_to_json(gen: Generation) -> dict:
    return {
        "level": gen.level,
        "side": gen.side,
        "cubes": [{"corner": list(c), "side": gen.side} for c in gen.corners.tolist()],
    }


def generation_from_json(doc: dict) -> Generation:
    corners = np.array([cube["corner"] for cube in doc["cubes"]], dtype=float)
    return Generation(level=int(doc["level"]), side=float(doc["side"]), corners=corners)
