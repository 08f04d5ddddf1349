"""Kernels of the 1/2-heat operator.

For a space-time offset z = (x, t) in R^{n+1}, |z| the Euclidean norm:

    P(z)    = t / |z|^{n+1}    on {t > 0},  0 elsewhere
    P*(z)   = P(-z)            (time reversal)
    Psy(z)  = (P(z) + P*(z)) / 2 = |t| / (2 |z|^{n+1})

All three are nonnegative, homogeneous of degree -n, and bounded by
|z|^{-n}.  P and P* are continuous away from the origin but have a
gradient kink across {t = 0}; Psy has the same kink.  None is defined at
the origin, which callers must exclude.
"""
from __future__ import annotations

import functools

import numpy as np


class SingularityError(ValueError):
    """Kernel evaluated at the origin."""


KERNEL_TAGS = ("P", "P*", "Psy")

# replacing a kernel by its time reversal
TIME_REVERSED = {"P": "P*", "P*": "P", "Psy": "Psy"}


def kernel_values(tag: str, dz: np.ndarray, n: int) -> np.ndarray:
    """Vectorized kernel evaluation on offsets dz of shape (..., n+1).

    Offsets of norm zero yield +inf rather than raising; bulk callers
    (quadrature, tree traversal) guarantee exclusion of the origin.
    """
    dz = np.asarray(dz, dtype=float)
    t = dz[..., -1]
    r2 = np.einsum("...i,...i->...", dz, dz)
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = r2 ** ((n + 1) / 2.0)
        if tag == "P":
            out = np.where(t > 0, t / denom, 0.0)
        elif tag == "P*":
            out = np.where(t < 0, -t / denom, 0.0)
        elif tag == "Psy":
            out = np.abs(t) / (2.0 * denom)
        else:
            raise ValueError(f"unknown kernel tag {tag!r}; expected one of {KERNEL_TAGS}")
    return np.where(r2 == 0.0, np.inf, out)


def _eval_scalar(tag: str, p, n: int) -> float:
    p = np.asarray(p, dtype=float)
    if p.shape != (n + 1,):
        raise ValueError(f"point must have n+1 = {n + 1} coordinates, got shape {p.shape}")
    # |p|^2 == 0 also catches subnormal points whose norm underflows: the
    # kernel value there overflows double precision either way
    if float(p @ p) == 0.0:
        raise SingularityError("kernel is singular at the origin")
    return float(kernel_values(tag, p, n))


def eval_P(p, n: int) -> float:
    """t / (t^2 + |x|^2)^{(n+1)/2} for t > 0, else 0."""
    return _eval_scalar("P", p, n)


def eval_Pstar(p, n: int) -> float:
    """Time reversal P(-p): -t / |p|^{n+1} on {t < 0}, else 0."""
    return _eval_scalar("P*", p, n)


def eval_Psym(p, n: int) -> float:
    """Symmetrized kernel |t| / (2 |p|^{n+1})."""
    return _eval_scalar("Psy", p, n)


def _base_points(rng, count, dim):
    """Unit-norm base offsets with extra mass on the time axis, where the
    smoothness ratios peak."""
    z = rng.normal(size=(count, dim))
    z /= np.linalg.norm(z, axis=1)[:, None]
    k = count // 4
    z[:k] = 0.0
    z[:k, -1] = rng.choice([-1.0, 1.0], size=k)
    k2 = count // 8
    z[k : k + k2, :-1] *= 0.05  # nearly time-aligned
    z[k : k + k2] /= np.linalg.norm(z[k : k + k2], axis=1)[:, None]
    return z


def estimate_cz_constant(n: int, trials: int = 100_000, seed: int = 20250801) -> float:
    """Empirical first-order smoothness constant of P.

    Samples pairs (z, z') with |z - z'| <= |z|/2 and returns the max of
        |P(z) - P(z')| |z|^{n+1} / |z - z'| .
    By homogeneity the base offset can be fixed at unit norm.  Offsets
    toward the origin and along the time axis are sampled explicitly since
    they realize the extremal ratios.
    """
    rng = np.random.default_rng(seed)
    dim = n + 1
    best = 0.0
    chunks = max(1, trials // 50_000)
    per = trials // chunks
    for _ in range(chunks):
        z = _base_points(rng, per, dim)
        mag = np.exp(rng.uniform(np.log(1e-5), np.log(0.5), per))
        dirs = rng.normal(size=(per, dim))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        ka = per // 3
        dirs[:ka] = -z[:ka]  # straight toward the origin: extremal direction
        kb = 2 * per // 3
        dirs[ka:kb] = 0.0
        dirs[ka:kb, -1] = rng.choice([-1.0, 1.0], size=kb - ka)
        zp = z + dirs * mag[:, None]
        h = np.linalg.norm(z - zp, axis=1)
        ok = (h <= 0.5) & (h > 0)
        ratio = np.abs(kernel_values("P", z[ok], n) - kernel_values("P", zp[ok], n))
        ratio /= h[ok]
        best = max(best, float(np.max(ratio, initial=0.0)))
    return best


def estimate_cz2_constant(n: int, trials: int = 100_000, seed: int = 20250802) -> float:
    """Empirical second-order smoothness constant of P away from the kink.

    Samples symmetric second differences with the whole segment
    [z-h, z+h] on one side of the {t = 0} plane (P is not C^1 across it)
    and |h| <= |z|/4, returning the max of
        |P(z+h) + P(z-h) - 2 P(z)| |z|^{n+2} / |h|^2 .
    The far-field summarizer never collapses a source cube that straddles
    the kink plane, so this regime is exactly the one it relies on.
    """
    rng = np.random.default_rng(seed)
    dim = n + 1
    best = 0.0
    chunks = max(1, trials // 50_000)
    per = trials // chunks
    for _ in range(chunks):
        z = _base_points(rng, per, dim)
        mag = np.exp(rng.uniform(np.log(1e-4), np.log(0.25), per))
        dirs = rng.normal(size=(per, dim))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        ka = per // 3
        dirs[:ka] = -z[:ka]
        h = dirs * mag[:, None]
        same_side = np.sign(z[:, -1] + h[:, -1]) == np.sign(z[:, -1] - h[:, -1])
        ok = same_side & (mag <= 0.25)
        z, h, mag = z[ok], h[ok], mag[ok]
        diff2 = np.abs(
            kernel_values("P", z + h, n) + kernel_values("P", z - h, n)
            - 2.0 * kernel_values("P", z, n)
        )
        ratio = diff2 / mag**2
        best = max(best, float(np.max(ratio, initial=0.0)))
    return best


@functools.lru_cache(maxsize=None)
def cz_constant(n: int) -> float:
    """Calibrated first-order constant used by the far-field error budget
    (empirical max times a safety factor 2)."""
    return 2.0 * estimate_cz_constant(n, trials=40_000)


@functools.lru_cache(maxsize=None)
def cz2_constant(n: int) -> float:
    """Calibrated second-order constant for far-field admissibility."""
    return 2.0 * estimate_cz2_constant(n, trials=40_000)
