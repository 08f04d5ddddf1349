"""Sampling estimators for BMO and Lip_alpha seminorms of potentials.

Both estimators are sup-from-below samplers: they certify nothing, they
probe.  Acceptance thresholds downstream are recorded empirical budgets.

The inner BMO integral (1/|Q|) int_Q |f - f_Q| is estimated by Monte Carlo
rather than tensor quadrature: the integrand is non-smooth on the zero set
of f - f_Q and adaptive panels would chase that crease pointlessly.  The
statistical error is reported as a 95% half-width next to the value.

Sampler geometry (cube centers, cube sides, pair separations) is expressed
relative to the support bounding box, so reports are covariant under
translating or scaling the whole configuration with the same seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measure import CubeUnionMeasure, check_unit_growth
from .potential import potential_batch


@dataclass
class SeminormReport:
    kind: str                   # "BMO" or "Lip_alpha"
    value: float
    samples: int
    alpha: float | None = None
    err95: float = 0.0
    worst_witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "alpha": self.alpha,
            "value": self.value,
            "samples": self.samples,
            "err95": self.err95,
            "worst_witness": self.worst_witness,
        }


def _support_frame(mu):
    lo, hi = mu.bbox()
    scale = float(np.max(hi - lo))
    if scale <= 0:
        scale = 1.0
    fine = float(mu.sides.min()) if isinstance(mu, CubeUnionMeasure) else scale / 100.0
    return lo, hi, scale, fine


def bmo_estimate(mu: CubeUnionMeasure, cubes: int = 200, nodes_per_cube: int = 256,
                 rng_seed: int = 0, tol: float = 1e-3) -> SeminormReport:
    """Max sampled mean oscillation of f = P * mu over random cubes.

    Requires the n-growth constant of mu to be at most 1 (rescale first);
    the deterministic ancestor-cube check enforces this.
    """
    if nodes_per_cube < 16:
        raise ValueError(f"need at least 16 nodes per cube, got {nodes_per_cube}")
    check_unit_growth(mu, mu.n)
    lo, hi, scale, fine = _support_frame(mu)
    rng = np.random.default_rng(rng_seed)
    if mu.total_mass == 0.0:
        return SeminormReport(kind="BMO", value=0.0, samples=0)
    best = 0.0
    best_err = 0.0
    witness = {}
    samples = 0
    for _ in range(cubes):
        center = lo - 2.0 * scale + rng.random(mu.dim) * (hi - lo + 4.0 * scale)
        side = float(np.exp(rng.uniform(np.log(fine / 4.0), np.log(4.0 * scale))))
        nodes = center - side / 2.0 + rng.random((nodes_per_cube, mu.dim)) * side
        vals, _, _ = potential_batch(mu, "P", nodes, tol)
        f_q = float(vals.mean())
        dev = np.abs(vals - f_q)
        osc = float(dev.mean())
        half = 1.96 * float(dev.std(ddof=1)) / np.sqrt(nodes_per_cube)
        samples += nodes_per_cube
        if osc > best:
            best = osc
            best_err = half
            witness = {"center": [float(c) for c in center], "side": side}
    return SeminormReport(kind="BMO", value=best, samples=samples,
                          err95=best_err, worst_witness=witness)


def lip_alpha_estimate(mu: CubeUnionMeasure, alpha: float, pairs: int = 10_000,
                       rng_seed: int = 0, tol: float = 1e-3) -> SeminormReport:
    """Max sampled ratio |f(x) - f(y)| / |x - y|^alpha for f = P * mu.

    Requires (n+alpha)-growth constant at most 1.  Pair separations are
    log-uniform between a quarter of the finest support side and eight
    support widths; degenerate pairs cannot occur by construction and are
    guarded against anyway.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    check_unit_growth(mu, mu.n + alpha)
    lo, hi, scale, fine = _support_frame(mu)
    rng = np.random.default_rng(rng_seed)
    if mu.total_mass == 0.0:
        return SeminormReport(kind="Lip_alpha", alpha=alpha, value=0.0, samples=0)
    base = lo - 2.0 * scale + rng.random((pairs, mu.dim)) * (hi - lo + 4.0 * scale)
    seps = np.exp(rng.uniform(np.log(fine / 4.0), np.log(8.0 * scale), pairs))
    dirs = rng.normal(size=(pairs, mu.dim))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    other = base + seps[:, None] * dirs
    keep = np.linalg.norm(other - base, axis=1) >= 1e-12 * scale
    base, other, seps = base[keep], other[keep], seps[keep]
    va, _, _ = potential_batch(mu, "P", base, tol)
    vb, _, _ = potential_batch(mu, "P", other, tol)
    ratios = np.abs(va - vb) / seps**alpha
    i = int(np.argmax(ratios))
    return SeminormReport(
        kind="Lip_alpha",
        alpha=alpha,
        value=float(ratios[i]),
        samples=2 * base.shape[0],
        worst_witness={
            "x": [float(v) for v in base[i]],
            "y": [float(v) for v in other[i]],
            "separation": float(seps[i]),
        },
    )
