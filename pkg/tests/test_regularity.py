import numpy as np
import pytest

from cclab.geometry import CantorSpec, build_generation, scaled, translated
from cclab.measure import CubeUnionMeasure, GrowthError, frostman_rescale, uniform_on_generation
from cclab.regularity import bmo_estimate, lip_alpha_estimate

SPEC = CantorSpec(n=1, lambdas=0.25)


def rescaled_mu(k=2, spec=SPEC, d=None, seed=0):
    mu = uniform_on_generation(build_generation(spec, k))
    return frostman_rescale(mu, spec.n if d is None else d, rng_seed=seed)


def zero_mu():
    gen = build_generation(SPEC, 1)
    return CubeUnionMeasure(gen.corners, np.full(gen.ncubes, gen.side), 0.0, gen)


def test_zero_measure_gives_zero():
    assert bmo_estimate(zero_mu(), cubes=5, nodes_per_cube=16, rng_seed=1).value == 0.0
    assert lip_alpha_estimate(zero_mu(), 0.3, pairs=10, rng_seed=1).value == 0.0


def test_node_minimum():
    with pytest.raises(ValueError):
        bmo_estimate(rescaled_mu(), cubes=2, nodes_per_cube=8)


def test_alpha_range():
    mu = rescaled_mu(d=1.2)
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            lip_alpha_estimate(mu, bad, pairs=10)


def test_growth_precondition_enforced():
    mu = uniform_on_generation(build_generation(SPEC, 2))  # growth ~ up to 16
    loud = mu.scaled_mass(32.0)
    with pytest.raises(GrowthError):
        bmo_estimate(loud, cubes=2, nodes_per_cube=16)
    with pytest.raises(GrowthError):
        lip_alpha_estimate(loud, 0.2, pairs=10)


def test_seed_determinism():
    mu = rescaled_mu()
    a = bmo_estimate(mu, cubes=10, nodes_per_cube=32, rng_seed=7)
    b = bmo_estimate(mu, cubes=10, nodes_per_cube=32, rng_seed=7)
    assert a.value == b.value and a.worst_witness == b.worst_witness
    la = lip_alpha_estimate(rescaled_mu(d=1.2), 0.2, pairs=200, rng_seed=7)
    lb = lip_alpha_estimate(rescaled_mu(d=1.2), 0.2, pairs=200, rng_seed=7)
    assert la.value == lb.value and la.worst_witness == lb.worst_witness


def test_translation_covariance():
    # dyadic shift: sampler and potentials reproduce bit for bit
    gen = build_generation(SPEC, 2)
    mu = frostman_rescale(uniform_on_generation(gen), 1, rng_seed=0)
    gent = translated(gen, (2.5, -1.25))
    mut = frostman_rescale(uniform_on_generation(gent), 1, rng_seed=0)
    a = bmo_estimate(mu, cubes=8, nodes_per_cube=32, rng_seed=3)
    b = bmo_estimate(mut, cubes=8, nodes_per_cube=32, rng_seed=3)
    assert a.value == b.value


def test_lip_scale_invariance():
    # scale space-time by 2 and mass by 2^{n+alpha}: sampled ratios invariant
    alpha = 0.2
    spec = CantorSpec(n=1, lambdas=1 / 3)
    gen = build_generation(spec, 2)
    mu = frostman_rescale(uniform_on_generation(gen), 1 + alpha, rng_seed=0)
    gen2 = scaled(gen, 2.0)
    mu2 = CubeUnionMeasure(
        gen2.corners,
        np.full(gen2.ncubes, gen2.side),
        mu.density * 2.0 ** (alpha - 1.0),
        gen2,
    )
    a = lip_alpha_estimate(mu, alpha, pairs=300, rng_seed=9, tol=1e-3)
    b = lip_alpha_estimate(mu2, alpha, pairs=300, rng_seed=9, tol=1e-3 * 2.0**alpha)
    assert b.value == pytest.approx(a.value, rel=1e-6)


def test_bmo_reports_statistical_halfwidth():
    rep = bmo_estimate(rescaled_mu(), cubes=6, nodes_per_cube=64, rng_seed=2)
    assert rep.value > 0.0
    assert rep.err95 >= 0.0
    assert "center" in rep.worst_witness and "side" in rep.worst_witness


def test_lip_value_sane():
    rep = lip_alpha_estimate(rescaled_mu(d=1.2), 0.2, pairs=500, rng_seed=2)
    assert 0.0 < rep.value < 100.0
    assert rep.samples == 2 * 500
