import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cclab.geometry import (
    CantorSpec,
    SpecError,
    build_generation,
    generation_from_json,
    generation_to_json,
    reflected,
    scaled,
    side_length,
    theta,
    theta_sum,
    time_reflected,
    translated,
)


def test_spec_validation():
    with pytest.raises(SpecError):
        CantorSpec(n=0, lambdas=0.25)
    with pytest.raises(SpecError):
        CantorSpec(n=1, lambdas=0.5)
    with pytest.raises(SpecError):
        CantorSpec(n=1, lambdas=0.6)
    with pytest.raises(SpecError):
        CantorSpec(n=1, lambdas=(0.25, 0.51))
    with pytest.raises(SpecError):
        CantorSpec(n=1, lambdas=0.3, tau0=0.25)  # lambda exceeds tau0
    CantorSpec(n=2, lambdas=(0.25, 0.3), tau0=0.49)


def test_depth_errors():
    spec = CantorSpec(n=1, lambdas=(0.25, 0.25))
    with pytest.raises(SpecError):
        build_generation(spec, 3)
    with pytest.raises(SpecError):
        side_length(spec, 5)
    big = CantorSpec(n=3, lambdas=0.25)
    with pytest.raises(SpecError):
        build_generation(big, 8)  # k(n+1) = 32 > hard guard


def test_generation_k0_is_unit_cube():
    gen = build_generation(CantorSpec(n=2, lambdas=0.3), 0)
    assert gen.ncubes == 1
    assert gen.side == 1.0
    assert np.all(gen.corners == 0.0)


def test_generation_k1_corners():
    gen = build_generation(CantorSpec(n=1, lambdas=0.25), 1)
    assert gen.side == 0.25
    expected = [(0.0, 0.0), (0.75, 0.0), (0.0, 0.75), (0.75, 0.75)]
    assert [tuple(c) for c in gen.corners] == expected


def test_generation_k2_corner_coordinates():
    # enumerated by hand from the recursion
    gen = build_generation(CantorSpec(n=1, lambdas=(0.25, 0.25)), 2)
    assert gen.ncubes == 16
    assert gen.side == 1 / 16
    coords = sorted(set(gen.corners.ravel().tolist()))
    assert coords == [0.0, 3 / 16, 3 / 4, 15 / 16]


def test_side_length_values():
    assert side_length(CantorSpec(n=1, lambdas=0.25), 3) == pytest.approx(1 / 64)
    assert side_length(CantorSpec(n=3, lambdas=0.1), 0) == 1.0
    assert side_length(CantorSpec(n=1, lambdas=(1 / 3, 0.25)), 2) == pytest.approx(1 / 12)


def test_theta_values():
    crit = CantorSpec(n=1, lambdas=0.25)  # critical sequence: theta_j == 1
    for k in range(6):
        assert theta(crit, k) == pytest.approx(1.0)
    assert theta(CantorSpec(n=2, lambdas=0.3), 0) == 1.0
    assert theta(CantorSpec(n=1, lambdas=1 / 3), 2) == pytest.approx(9 / 16)


def test_theta_sum_values():
    assert theta_sum(CantorSpec(n=1, lambdas=0.25), 4) == pytest.approx(5.0)
    assert theta_sum(CantorSpec(n=2, lambdas=0.3), 0) == 1.0
    # geometric series oracle: direct summation to convergence
    spec = CantorSpec(n=1, lambdas=1 / 3)
    total, j = 0.0, 0
    while True:
        term = theta(spec, j)
        total += term
        j += 1
        if term < 1e-15:
            break
    assert total == pytest.approx(4.0, rel=1e-12)
    assert theta_sum(spec, 5) == pytest.approx(3367 / 1024)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 2),
    lam=st.floats(0.05, 0.49),
    k=st.integers(0, 3),
)
def test_generation_invariants(n, lam, k):
    spec = CantorSpec(n=n, lambdas=lam)
    gen = build_generation(spec, k)
    d = n + 1
    assert gen.ncubes == 2 ** (k * d)
    assert gen.side == pytest.approx(lam**k)
    # total volume
    vol = gen.ncubes * gen.side**d
    assert vol == pytest.approx((2**d) ** k * side_length(spec, k) ** d, rel=1e-12)
    # theta identity
    assert theta(spec, k) * side_length(spec, k) ** n * 2 ** (k * d) == pytest.approx(
        1.0, rel=1e-12
    )
    if k >= 1:
        parent = build_generation(spec, k - 1)
        # nesting: each cube lies in exactly one parent cube
        for c in gen.corners:
            inside = np.sum(
                np.all(
                    (parent.corners <= c + 1e-12)
                    & (c + gen.side <= parent.corners + parent.side + 1e-12),
                    axis=1,
                )
            )
            assert inside == 1
        # sibling separation
        gap = parent.side - 2 * gen.side
        assert gap == pytest.approx(side_length(spec, k - 1) * (1 - 2 * lam), rel=1e-9)
        assert gap > 0
        sib = gen.corners[:2**d]
        for i in range(2**d):
            for j in range(i + 1, 2**d):
                axis_gaps = np.abs(sib[i] - sib[j]) - gen.side
                assert axis_gaps.max() >= gap - 1e-12


def test_transforms():
    spec = CantorSpec(n=1, lambdas=0.25)
    g0 = build_generation(spec, 0)
    t = translated(g0, (1.0, 1.0))
    assert tuple(t.corners[0]) == (1.0, 1.0)
    assert t.side == 1.0

    g1 = build_generation(spec, 1)
    s = scaled(g1, 2.0)
    assert s.side == 0.5
    lo, hi = s.bbox()
    assert np.all(lo == 0.0) and np.all(hi == 2.0)
    with pytest.raises(ValueError):
        scaled(g1, -1.0)

    # time reflection about t=1/2 fixes the family setwise
    r = time_reflected(g0, 0.5)
    assert np.allclose(r.corners, g0.corners)
    r1 = time_reflected(g1, 0.5)
    assert sorted(map(tuple, r1.corners)) == sorted(map(tuple, g1.corners))
    rx = reflected(g1, 0, 0.5)
    assert sorted(map(tuple, rx.corners)) == sorted(map(tuple, g1.corners))


def test_json_roundtrip():
    gen = build_generation(CantorSpec(n=1, lambdas=(0.25, 1 / 3)), 2)
    doc = generation_to_json(gen)
    assert doc["level"] == 2
    assert len(doc["cubes"]) == 16
    assert all(c["side"] == doc["side"] for c in doc["cubes"])
    back = generation_from_json(doc)
    assert back.level == gen.level
    assert np.allclose(back.corners, gen.corners)
    assert back.side == gen.side
