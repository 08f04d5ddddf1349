"""Two-sided Hausdorff-content estimates for Cantor iterates.

Upper bound: the generation-j cubes cover every deeper iterate, so
min_j 2^{j(n+1)} (sqrt(n+1) l_j)^d bounds H^d_infty from above; only these
dyadic covers are searched (general covers are out of reach, and the sharp
covers of the construction are exactly these).

Lower bound: the mass-distribution principle.  If mu has d-growth constant
at most C, any cover {A_i} satisfies sum diam(A_i)^d >= mu(E)/C, so the
total mass of the Frostman-rescaled reference measure is a lower bound.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CantorSpec, build_generation, side_length
from .measure import frostman_rescale, uniform_on_generation


@dataclass
class ContentBracket:
    d: float
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(
                f"content bracket inverted at d={self.d}: [{self.lower}, {self.upper}]"
            )


def content_upper(spec: CantorSpec, k: int, d: float, root_side: float = 1.0) -> float:
    """Best diameter-sum over the generation covers 0..k.

    `root_side` is the side of the root cube (1 for the standard
    construction); content scales as root_side^d.
    """
    if d < 0:
        raise ValueError(f"content exponent must be nonnegative, got {d}")
    diag = np.sqrt(spec.dim)
    best = np.inf
    for j in range(k + 1):
        cover = 2.0 ** (j * spec.dim) * (diag * side_length(spec, j) * root_side) ** d
        best = min(best, cover)
    return best


def content_lower(spec: CantorSpec, k: int, d: float, trials: int = 2000,
                  rng_seed: int = 0, root_side: float = 1.0) -> float:
    """Mass of the d-growth-normalized reference measure; H^0 of a nonempty
    set is 1 by the empty-product convention."""
    if d < 0:
        raise ValueError(f"content exponent must be nonnegative, got {d}")
    if d == 0:
        return 1.0
    gen = build_generation(spec, k)
    if root_side != 1.0:
        from .geometry import scaled

        gen = scaled(gen, root_side)
    mu = uniform_on_generation(gen)
    return frostman_rescale(mu, d, trials=trials, rng_seed=rng_seed).total_mass


def content_bracket(spec: CantorSpec, k: int, d: float, trials: int = 2000,
                    rng_seed: int = 0, root_side: float = 1.0) -> ContentBracket:
    return ContentBracket(
        d=d,
        lower=content_lower(spec, k, d, trials=trials, rng_seed=rng_seed,
                            root_side=root_side),
        upper=content_upper(spec, k, d, root_side=root_side),
    )
