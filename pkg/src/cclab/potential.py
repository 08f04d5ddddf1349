"""Kernel potentials of cube-union and atomic measures, and extremum search.

Evaluation strategy for a cube-union measure at a target p:

* near field: per-cube tensor-product Gauss-Legendre quadrature (order 4
  per axis) with recursive dyadic subdivision.  Panels are pre-split at the
  source hyperplane {s = t_p} so the one-sided indicator never cuts through
  a panel, and when p is on or near a cube an axis-aligned box of
  half-width eps around p is removed, its mass bounded analytically by
  density * c_n * eps (c_n conservative, see below).

* far field: the generation hierarchy is walked top down; a node whose
  cube is far and smooth relative to p is collapsed to a point mass at its
  center.  Because every node of a full generation is corner-symmetric,
  its mass centroid is the center, the dipole term cancels, and the true
  collapse error is second order.  Nodes whose time extent straddles t_p
  are never collapsed (the kernels are not C^1 across the kink plane).

Per-cube integrals are normalized by kernel homogeneity to the unit cube
and memoized, which makes repeated evaluations over the self-similar
generation geometry cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import Generation
from .kernels import KERNEL_TAGS, cz_constant, cz2_constant, kernel_values
from .measure import AtomicMeasure, CubeUnionMeasure

GL_ORDER = 4
_MAX_DEPTH = 42
_DIVERGENCE_FACTOR = 50.0  # refinement gain that flags a singular sup
# near a singular edge the error decays slowly, so a refinement discrepancy
# understates the remaining error; accepted panels report SAFETY * disc and
# must meet budget / SAFETY
_QUAD_SAFETY = 5.0


class EngineError(RuntimeError):
    """Numerical-engine failure (cross-checks, inconsistent bounds)."""


@dataclass
class PotentialValue:
    """A potential evaluation with its accounting.

    The true value is believed to lie in
    [value - err, value + err + singular_excluded]; `singular_excluded`
    bounds the mass of the removed singular neighborhood, which only ever
    biases the computed value down.
    """

    value: float
    err: float = 0.0
    singular_excluded: float = 0.0
    coincident_skipped: int = 0


@dataclass
class ExtremumReport:
    extremum: float
    argpoint: np.ndarray
    samples_used: int
    refinement_levels: int
    err: float = 0.0
    on_boundary: bool = False
    diverged: bool = False

    def to_json(self) -> dict:
        return {
            "extremum": self.extremum,
            "argpoint": [float(v) for v in np.asarray(self.argpoint)],
            "samples_used": self.samples_used,
            "refinement_levels": self.refinement_levels,
            "err": self.err,
            "on_boundary": self.on_boundary,
            "diverged": self.diverged,
        }


def singular_bound_constant(n: int) -> float:
    """c_n = 2^{n+2} (n+1)^{(n+1)/2}: dominates the sharp constant
    omega_n sqrt(n+1) in  integral_{box(p, eps)} |z|^{-n} dz <= c_n eps."""
    return 2.0 ** (n + 2) * (n + 1) ** ((n + 1) / 2.0)


@lru_cache(maxsize=None)
def _unit_rule(dim: int):
    """Tensor Gauss-Legendre nodes/weights on [0,1]^dim, weights sum to 1."""
    x, w = np.polynomial.legendre.leggauss(GL_ORDER)
    x = (x + 1.0) / 2.0
    w = w / 2.0
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    wg = np.meshgrid(*([w] * dim), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wg], axis=1), axis=1)
    return nodes, weights


@lru_cache(maxsize=None)
def _child_bits(dim: int) -> np.ndarray:
    idx = np.arange(1 << dim)
    return ((idx[:, None] >> np.arange(dim)[None, :]) & 1).astype(float)


def _box_minus_box(lo, hi, xlo, xhi):
    """Decompose box [lo,hi] minus [xlo,xhi] into disjoint slabs.

    Returns (pieces, removed_nonempty).
    """
    xlo = np.maximum(xlo, lo)
    xhi = np.minimum(xhi, hi)
    if np.any(xlo >= xhi):
        return [(lo, hi)], False
    pieces = []
    cur_lo = lo.copy()
    cur_hi = hi.copy()
    for ax in range(len(lo)):
        if xlo[ax] > cur_lo[ax]:
            plo, phi = cur_lo.copy(), cur_hi.copy()
            phi[ax] = xlo[ax]
            pieces.append((plo, phi))
        if xhi[ax] < cur_hi[ax]:
            plo, phi = cur_lo.copy(), cur_hi.copy()
            plo[ax] = xhi[ax]
            pieces.append((plo, phi))
        cur_lo[ax] = xlo[ax]
        cur_hi[ax] = xhi[ax]
    return pieces, True


def _panel_batch(tag, n, q, los, his):
    """Integrals of K(q - u) over a batch of boxes [los[i], his[i]]."""
    nodes, weights = _unit_rule(n + 1)
    ext = his - los  # (m, d)
    pts = los[:, None, :] + ext[:, None, :] * nodes[None, :, :]
    vals = kernel_values(tag, q[None, None, :] - pts, n)
    vols = np.prod(ext, axis=1)
    return vols * (vals @ weights)


def _adaptive_box(tag, n, q, lo, hi, budget, scale):
    """Adaptive integral of K(q - u) over [lo, hi], breadth first: every
    refinement wave evaluates all open panels in one vectorized call.

    Panels split in half along their longest axis (binary, not 2^d: the
    excision of the singular box leaves slabs of extreme aspect ratio and
    an all-axes split would blow the panel count up geometrically).  The
    budget splits along the subdivision tree; panels whose magnitude or
    refinement discrepancy is below rounding level relative to `scale`
    (the magnitude of the whole surrounding integral) are accepted
    outright, and a hard panel cap stops pathological descent (the overrun
    still lands in err)."""
    d = n + 1
    bits = _child_bits(d)
    nchild = 1 << d

    def measure(plos, phis):
        """Per-panel (refined estimate, refinement discrepancy).

        The estimate is the all-axes dyadic refinement of the order-4 rule;
        the discrepancy against the plain panel value is the error
        indicator.  An all-axes indicator is essential: a binary indicator
        goes blind to variation along the unsplit axes.
        """
        m = plos.shape[0]
        half = (phis - plos) / 2.0
        clos = (plos[:, None, :] + bits[None, :, :] * half[:, None, :]).reshape(-1, d)
        chis = clos + np.repeat(half, nchild, axis=0)
        all_lo = np.concatenate([plos, clos], axis=0)
        all_hi = np.concatenate([phis, chis], axis=0)
        vals = _panel_batch(tag, n, q, all_lo, all_hi)
        plain = vals[:m]
        fine = vals[m:].reshape(m, nchild).sum(axis=1)
        return fine, np.abs(fine - plain)

    los = lo[None, :]
    his = hi[None, :]
    fine, disc = measure(los, his)
    floor = 5e-15 * scale + 1e-300
    panels = 1
    waves = 0
    banked_val = 0.0
    banked_err = 0.0
    while True:
        remaining = float(disc.sum())
        if (
            _QUAD_SAFETY * remaining + banked_err <= budget
            or remaining <= floor * disc.shape[0]
            or panels > 50_000
            or waves >= _MAX_DEPTH * d * 4
        ):
            return banked_val + float(fine.sum()), banked_err + _QUAD_SAFETY * remaining
        # refine the panels carrying the top half of the total discrepancy;
        # everything else stays open untouched (greedy allocation: volume
        # shares would starve the panels hugging the singular excision)
        order = np.argsort(-disc, kind="stable")
        cum = np.cumsum(disc[order])
        take = max(int(np.searchsorted(cum, 0.5 * remaining)) + 1, 1)
        ref = order[:take]
        keep = order[take:]
        rlo, rhi = los[ref], his[ref]
        axis = np.argmax(rhi - rlo, axis=1)
        rows = np.arange(rlo.shape[0])
        mid = rlo.copy()
        mid[rows, axis] = (rlo[rows, axis] + rhi[rows, axis]) / 2.0
        hi1 = rhi.copy()
        hi1[rows, axis] = mid[rows, axis]
        nlo = np.concatenate([rlo, mid], axis=0)
        nhi = np.concatenate([hi1, rhi], axis=0)
        nfine, ndisc = measure(nlo, nhi)
        panels += nlo.shape[0]
        waves += 1
        # children whose whole possible mass is negligible are banked now
        # (K <= dist^{-n} pointwise, positive weights), which keeps the
        # open set from accumulating slab collars around the excision
        gap = np.maximum(np.maximum(nlo - q[None, :], q[None, :] - nhi), 0.0)
        dist = np.sqrt(np.einsum("ij,ij->i", gap, gap))
        with np.errstate(divide="ignore"):
            bound = np.prod(nhi - nlo, axis=1) * np.where(dist > 0, dist**-n, np.inf)
        bank = bound <= budget / 4096.0
        if bank.any():
            banked_val += float(nfine[bank].sum())
            banked_err += float(np.minimum(bound, _QUAD_SAFETY * ndisc)[bank].sum())
        stay = ~bank
        los = np.concatenate([los[keep], nlo[stay]], axis=0)
        his = np.concatenate([his[keep], nhi[stay]], axis=0)
        fine = np.concatenate([fine[keep], nfine[stay]])
        disc = np.concatenate([disc[keep], ndisc[stay]])
        if los.shape[0] == 0:
            return banked_val, banked_err


def _unit_integral(tag, n, q, eps_u, budget_u):
    """Integral of K(q - u) over [0,1]^{n+1} minus the exclusion box of
    half-width eps_u around q (when eps_u > 0), split at the kink plane."""
    d = n + 1
    pieces = [(np.zeros(d), np.ones(d))]
    removed = False
    if eps_u > 0.0:
        xlo = q - eps_u
        xhi = q + eps_u
        out = []
        for lo, hi in pieces:
            sub, cut = _box_minus_box(lo, hi, xlo, xhi)
            out.extend(sub)
            removed = removed or cut
        pieces = out
    tq = q[-1]
    split = []
    for lo, hi in pieces:
        if lo[-1] < tq < hi[-1]:
            mid_hi = hi.copy()
            mid_hi[-1] = tq
            split.append((lo, mid_hi))
            mid_lo = lo.copy()
            mid_lo[-1] = tq
            split.append((mid_lo, hi))
        else:
            split.append((lo, hi))
    if tag == "P":
        split = [(lo, hi) for lo, hi in split if lo[-1] < tq]
    elif tag == "P*":
        split = [(lo, hi) for lo, hi in split if hi[-1] > tq]
    if not split:
        return 0.0, 0.0, removed
    vols = np.array([float(np.prod(hi - lo)) for lo, hi in split])
    vol_tot = vols.sum()
    los = np.stack([lo for lo, _ in split])
    his = np.stack([hi for _, hi in split])
    scale = float(np.abs(_panel_batch(tag, n, q, los, his)).sum())
    total = 0.0
    err = 0.0
    for (lo, hi), vol in zip(split, vols):
        v, e = _adaptive_box(tag, n, q, lo, hi, budget_u * vol / vol_tot, scale)
        total += v
        err += e
    return total, err, removed


_leaf_cache: dict = {}


def clear_caches():
    _leaf_cache.clear()


def _cube_integral(tag, n, corner, side, density, p, budget, eps):
    """density * integral_cube K(p - y) dy, via the homogeneity-normalized
    memoized unit integral.  Returns (value, err, singular_excluded)."""
    q = (p - corner) / side
    gap = np.clip(np.abs(q - 0.5) - 0.5, 0.0, None)
    dist_u = float(np.sqrt((gap * gap).sum()))
    eps_u = eps / side if dist_u <= 0.5 else 0.0
    budget_u = budget / (density * side)
    key = (
        tag,
        n,
        tuple(np.round(q, 9).tolist()),
        round(eps_u, 12),
        float(f"{budget_u:.2g}"),
    )
    hit = _leaf_cache.get(key)
    if hit is None:
        hit = _unit_integral(tag, n, q, eps_u, budget_u)
        if len(_leaf_cache) < 2_000_000:
            _leaf_cache[key] = hit
    val_u, err_u, removed = hit
    scale = density * side
    sing = density * singular_bound_constant(n) * eps if removed else 0.0
    return scale * val_u, scale * err_u, sing


def _validate(tag, tol):
    if tag not in KERNEL_TAGS:
        raise ValueError(f"unknown kernel tag {tag!r}; expected one of {KERNEL_TAGS}")
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")


def potential_direct(mu, kernel: str, p, tol: float = 1e-3) -> PotentialValue:
    """Potential (kernel * mu)(p) by direct summation/quadrature.

    Atomic measures: exact weighted sum; atoms coinciding with p are
    skipped and counted.  Cube unions: per-cube adaptive quadrature with a
    per-cube error budget of tol * (volume share), and singular exclusion
    with density * c_n * eps <= tol/10.
    """
    _validate(kernel, tol)
    p = np.asarray(p, dtype=float)
    if isinstance(mu, AtomicMeasure):
        dz = p[None, :] - mu.points
        r2 = np.einsum("ij,ij->i", dz, dz)
        coinc = r2 == 0.0
        vals = kernel_values(kernel, dz[~coinc], mu.dim - 1)
        value = float((mu.weights[~coinc] * vals).sum())
        return PotentialValue(value, 0.0, 0.0, int(coinc.sum()))
    n = mu.n
    if mu.density == 0.0:
        return PotentialValue(0.0)
    vols = mu.sides**mu.dim
    vol_tot = float(vols.sum())
    eps = tol / (10.0 * singular_bound_constant(n) * mu.density)
    value = err = sing = 0.0
    for corner, side, vol in zip(mu.corners, mu.sides, vols):
        v, e, s = _cube_integral(
            kernel, n, corner, float(side), mu.density, p, tol * vol / vol_tot, eps
        )
        value += v
        err += e
        sing += s
    return PotentialValue(value, err, sing)


# ---------------------------------------------------------------------------
# hierarchical evaluation


class _Tree:
    """Per-level node arrays of a full generation hierarchy."""

    def __init__(self, mu: CubeUnionMeasure):
        gen = mu.generation
        if gen is None:
            raise ValueError("measure is not backed by a generation hierarchy")
        d = gen.dim
        k = gen.level
        if gen.ncubes != 1 << (k * d):
            raise ValueError("generation cube count does not match a full hierarchy")
        corners = gen.corners
        side = gen.side
        levels = [(corners, side)]
        for _ in range(k):
            grouped = corners.reshape(-1, 1 << d, d)
            lo = grouped.min(axis=1)
            hi = (grouped + side).max(axis=1)
            side = float(np.max(hi - lo))
            corners = lo
            levels.append((corners, side))
        levels.reverse()
        self.k = k
        self.dim = d
        self.corners = [lv[0] for lv in levels]
        self.sides = [lv[1] for lv in levels]
        self.centers = [lv[0] + lv[1] / 2.0 for lv in levels]
        leaf_mass = mu.density * gen.side**d
        self.masses = [leaf_mass * 2 ** ((k - j) * d) for j in range(k + 1)]
        self.total_mass = mu.total_mass


def _tree_of(mu: CubeUnionMeasure) -> _Tree:
    tree = getattr(mu, "_tree", None)
    if tree is None:
        tree = _Tree(mu)
        object.__setattr__(mu, "_tree", tree)
    return tree


def _tree_eval_batch(mu, kernel, pts, tol, err_model="second", stats=None):
    """Vectorized hierarchical evaluation at many points.

    err_model 'first' reports the Calderon-Zygmund first-order budget
    C1 * mass * delta / d^{n+1} per collapsed node (always a valid bound);
    'second' reports the centroid-cancellation estimate
    C2 * mass * (delta/2)^2 / d^{n+2}, which is what admissibility uses.
    """
    tree = _tree_of(mu)
    n = mu.n
    d = tree.dim
    sq = np.sqrt(d)
    c1 = cz_constant(n)
    c2 = cz2_constant(n)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    m = pts.shape[0]
    vals = np.zeros(m)
    errs = np.zeros(m)
    sings = np.zeros(m)
    if mu.density == 0.0:
        return vals, errs, sings
    eps = tol / (10.0 * singular_bound_constant(n) * mu.density)
    leaf_budget = tol / (1 << (tree.k * d))
    # scale-free far-field target: tol is an absolute value tolerance, the
    # natural value scale of the potential is total_mass / root_side^n
    rel = tol * tree.sides[0] ** n / tree.total_mass
    t_p = pts[:, -1]

    def visit(level, idx, active):
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + 1
        corner = tree.corners[level][idx]
        side = tree.sides[level]
        center = tree.centers[level][idx]
        mass = tree.masses[level]
        tlo = corner[-1]
        thi = tlo + side
        tp = t_p[active]
        if kernel == "P":
            live = tp > tlo
        elif kernel == "P*":
            live = tp < thi
        else:
            live = np.ones(active.shape[0], dtype=bool)
        active = active[live]
        if active.size == 0:
            return
        dp = pts[active] - center
        dist = np.sqrt(np.einsum("ij,ij->i", dp, dp))
        delta = side * sq
        straddle = (tlo < t_p[active]) & (t_p[active] < thi)
        with np.errstate(divide="ignore"):
            ok2 = c2 * delta**2 <= 4.0 * rel * dist**2
            far = (delta <= dist / 2.0) & ok2 & ~straddle
        fidx = active[far]
        if fidx.size:
            vals[fidx] += kernel_values(kernel, pts[fidx] - center, n) * mass
            dfar = dist[far]
            if err_model == "first":
                errs[fidx] += c1 * mass * delta / dfar ** (n + 1)
            else:
                errs[fidx] += c2 * mass * (delta / 2.0) ** 2 / dfar ** (n + 2)
        nidx = active[~far]
        if nidx.size == 0:
            return
        if level == tree.k:
            if stats is not None:
                stats["leaves"] = stats.get("leaves", 0) + nidx.size
            for i in nidx:
                v, e, s = _cube_integral(
                    kernel, n, corner, side, mu.density, pts[i], leaf_budget, eps
                )
                vals[i] += v
                errs[i] += e
                sings[i] += s
        else:
            base = idx << d
            for child in range(1 << d):
                visit(level + 1, base + child, nidx)

    visit(0, 0, np.arange(m))
    return vals, errs, sings


def potential_tree(mu, kernel: str, p, tol: float = 1e-3, stats=None) -> PotentialValue:
    """Hierarchical potential evaluation; leaves fall back to the direct
    quadrature of the single cube.

    The reported err accumulates, per collapsed node, the conservative
    first-order budget C_emp * mass * delta / d^{n+1} (C_emp is the
    calibrated smoothness constant times a safety factor), plus the leaf
    quadrature discrepancies.  |potential_tree - potential_direct| is
    covered by the two reported errors plus tolerances on all tested
    instances; `tol` also acts as the far-field relative refinement target.
    """
    _validate(kernel, tol)
    if not isinstance(mu, CubeUnionMeasure) or mu.generation is None:
        raise ValueError("potential_tree needs a generation-backed measure; use potential_direct")
    v, e, s = _tree_eval_batch(mu, kernel, np.asarray(p, dtype=float)[None, :], tol,
                               err_model="first", stats=stats)
    return PotentialValue(float(v[0]), float(e[0]), float(s[0]))


def potential_batch(mu, kernel: str, pts, tol: float = 1e-3):
    """(values, errs, singular_excluded) at many points, choosing the
    hierarchical path when available."""
    _validate(kernel, tol)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if isinstance(mu, AtomicMeasure):
        vals = np.empty(pts.shape[0])
        for i, p in enumerate(pts):
            dz = p[None, :] - mu.points
            r2 = np.einsum("ij,ij->i", dz, dz)
            coinc = r2 == 0.0
            kv = kernel_values(kernel, dz[~coinc], mu.dim - 1)
            vals[i] = float((mu.weights[~coinc] * kv).sum())
        return vals, np.zeros_like(vals), np.zeros_like(vals)
    if mu.generation is not None:
        return _tree_eval_batch(mu, kernel, pts, tol, err_model="second")
    out = np.empty(pts.shape[0])
    errs = np.empty(pts.shape[0])
    sings = np.empty(pts.shape[0])
    for i, p in enumerate(pts):
        pv = potential_direct(mu, kernel, p, tol)
        out[i], errs[i], sings[i] = pv.value, pv.err, pv.singular_excluded
    return out, errs, sings


# ---------------------------------------------------------------------------
# extremum search

_GOLDEN = 0.6180339887498949


def _pattern_refine(evalf, p0, v0, step0, box_lo, box_hi, move_tol, sign, max_evals=400):
    """Coordinate pattern search with golden step shrink; deterministic."""
    p = p0.copy()
    v = v0
    step = step0
    levels = 0
    evals = 0
    dim = p.shape[0]
    while step > move_tol and evals < max_evals:
        improved = False
        for ax in range(dim):
            for sgn in (1.0, -1.0):
                cand = p.copy()
                cand[ax] = min(max(p[ax] + sgn * step, box_lo[ax]), box_hi[ax])
                if cand[ax] == p[ax]:
                    continue
                vc = evalf(cand)
                evals += 1
                if sign * vc > sign * v:
                    p, v = cand, vc
                    improved = True
        if not improved:
            step *= _GOLDEN
            levels += 1
    return p, v, evals, levels


def _collar_grid(corners, side, offsets_frac):
    """Grid points at corner + side * offsets per axis, for all cubes."""
    d = corners.shape[1]
    offs = np.asarray(offsets_frac) * side
    grids = np.meshgrid(*([offs] * d), indexing="ij")
    cell = np.stack([g.ravel() for g in grids], axis=1)
    return (corners[:, None, :] + cell[None, :, :]).reshape(-1, d)


def sup_potential(mu, kernel: str, gen: Generation | None = None, tol: float = 1e-3,
                  refine_top: int = 32) -> ExtremumReport:
    """Estimate sup over R^{n+1} of the potential (a lower estimate: found
    by seeded search plus local refinement, never certified from above).

    The search lives in the support bounding box inflated by a margin; the
    margin is recomputed per call from the decay bound
    potential <= total_mass / dist^n so that no excluded point can beat the
    best seeded value.  Seeds cover every hierarchy level with a
    half-side-resolution collar grid.
    """
    _validate(kernel, tol)
    n = mu.dim - 1
    lo, hi = mu.bbox()
    scale = float(np.max(hi - lo))
    if scale <= 0:
        scale = 1.0
    seeds = []
    steps = []
    offsets = np.array([-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0])
    if isinstance(mu, CubeUnionMeasure) and mu.generation is not None:
        tree = _tree_of(mu)
        for j in range(tree.k + 1):
            pts = _collar_grid(tree.corners[j], tree.sides[j], offsets)
            seeds.append(pts)
            steps.append(np.full(pts.shape[0], tree.sides[j] / 2.0))
        rel = tol * tree.sides[0] ** n / tree.total_mass
        # the potential is quadratically flat at an extremum, so a step of
        # sqrt(rel) * side already pins the value to ~rel relative
        move_tol = np.sqrt(rel) * mu.generation.side
    elif isinstance(mu, AtomicMeasure):
        atom_offs = np.array([-0.5, -0.25, 0.25, 0.5]) * scale
        pts = [mu.points]
        for ax in range(mu.dim):
            for o in atom_offs:
                shifted = mu.points.copy()
                shifted[:, ax] += o
                pts.append(shifted)
        seeds.append(np.concatenate(pts, axis=0))
        steps.append(np.full(seeds[-1].shape[0], scale / 4.0))
        move_tol = tol * scale
    else:
        seeds.append(_collar_grid(mu.corners, float(mu.sides.max()), offsets))
        steps.append(np.full(seeds[-1].shape[0], float(mu.sides.max()) / 2.0))
        move_tol = tol * float(mu.sides.min())
    seeds = np.concatenate(seeds, axis=0)
    steps = np.concatenate(steps)
    vals, errs, sings = potential_batch(mu, kernel, seeds, tol)
    samples = seeds.shape[0]
    best = float(vals.max())
    margin = scale
    if best > 0:
        margin = max(margin, (mu.total_mass / best) ** (1.0 / n))
    if margin > scale + 1e-12:
        extra = _collar_grid((lo - margin)[None, :], float(np.max(hi - lo) + 2 * margin),
                             np.linspace(0.0, 1.0, 9))
        ev, ee, es = potential_batch(mu, kernel, extra, tol)
        seeds = np.concatenate([seeds, extra], axis=0)
        steps = np.concatenate([steps, np.full(extra.shape[0], margin / 4.0)])
        vals = np.concatenate([vals, ev])
        errs = np.concatenate([errs, ee])
        sings = np.concatenate([sings, es])
        samples += extra.shape[0]
    box_lo = lo - margin
    box_hi = hi + margin
    order = np.argsort(-vals, kind="stable")[:refine_top]

    def evalf(pt):
        v, _, _ = potential_batch(mu, kernel, pt[None, :], tol)
        return float(v[0])

    best_p = seeds[order[0]].copy()
    best_v = float(vals[order[0]])
    seed_best = best_v
    total_evals = samples
    levels = 0
    diverged = False
    for i in order:
        p, v, ev, lv = _pattern_refine(
            evalf, seeds[i].copy(), float(vals[i]), float(steps[i]),
            box_lo, box_hi, move_tol, sign=+1.0,
        )
        total_evals += ev
        levels = max(levels, lv)
        if v > best_v:
            best_v, best_p = v, p
        if seed_best > 0 and v > _DIVERGENCE_FACTOR * seed_best and isinstance(mu, AtomicMeasure):
            diverged = True
            break
    final = (
        potential_direct(mu, kernel, best_p, tol)
        if isinstance(mu, AtomicMeasure) or mu.generation is None
        else _as_value(mu, kernel, best_p, tol)
    )
    on_boundary = bool(
        np.any(np.abs(best_p - box_lo) <= move_tol) or np.any(np.abs(best_p - box_hi) <= move_tol)
    )
    return ExtremumReport(
        extremum=float(final.value),
        argpoint=best_p,
        samples_used=total_evals,
        refinement_levels=levels,
        err=float(final.err + final.singular_excluded),
        on_boundary=on_boundary,
        diverged=diverged,
    )


def _as_value(mu, kernel, p, tol) -> PotentialValue:
    v, e, s = potential_batch(mu, kernel, p[None, :], tol)
    return PotentialValue(float(v[0]), float(e[0]), float(s[0]))


def inf_potential_on_set(mu: CubeUnionMeasure, kernel: str, gen: Generation,
                         tol: float = 1e-3, refine_top: int = 32) -> ExtremumReport:
    """Estimate inf over the cube union of the potential.

    Seeds a quarter-side grid (corners and center included) in every
    generation cube, refines the best minima inside their own cubes, and
    ranks by the conservative value - err - singular_excluded so the
    reported extremum minus its err is a defensible lower value.
    """
    _validate(kernel, tol)
    if gen is None:
        raise ValueError("inf_potential_on_set needs the supporting generation")
    offsets = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    seeds = _collar_grid(gen.corners, gen.side, offsets)
    vals, errs, sings = potential_batch(mu, kernel, seeds, tol)
    cons = vals - errs - sings
    samples = seeds.shape[0]
    per_cube = offsets.shape[0] ** gen.dim
    order = np.argsort(cons, kind="stable")[:refine_top]
    lo, hi = gen.bbox()
    rel = tol * float(np.max(hi - lo)) ** (gen.dim - 1) / max(mu.total_mass, 1e-300)
    move_tol = np.sqrt(rel) * gen.side

    def evalf(pt):
        v, e, s = potential_batch(mu, kernel, pt[None, :], tol)
        return float(v[0] - e[0] - s[0])

    best_i = order[0]
    best_p = seeds[best_i].copy()
    best_c = float(cons[best_i])
    total_evals = samples
    levels = 0
    for i in order:
        cube_idx = i // per_cube
        clo = gen.corners[cube_idx]
        chi = clo + gen.side
        p, c, ev, lv = _pattern_refine(
            evalf, seeds[i].copy(), float(cons[i]), gen.side / 4.0,
            clo, chi, move_tol, sign=-1.0,
        )
        total_evals += ev
        levels = max(levels, lv)
        if c < best_c:
            best_c, best_p = c, p
    final = _as_value(mu, kernel, best_p, tol)
    return ExtremumReport(
        extremum=float(final.value),
        argpoint=best_p,
        samples_used=total_evals,
        refinement_levels=levels,
        err=float(final.err + final.singular_excluded),
        on_boundary=False,
    )
