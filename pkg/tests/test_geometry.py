import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mtdirac.geometry import (
    Configuration,
    Region,
    classify,
    from_relative,
    interval,
    interval_arrays,
    region_masks,
    sample_spacelike,
    spacelike_margin,
    to_relative,
)

coord = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)


def test_interval_known_value():
    c = Configuration(0.25, 0.0, 0.5, 2.0)
    assert interval(c) == 0.0625 - 4.0 == -3.9375


def test_interval_arrays_matches_scalar():
    rng = np.random.default_rng(0)
    t1, z1, t2, z2 = rng.uniform(-3, 3, (4, 50))
    iv = interval_arrays(t1, z1, t2, z2)
    for k in range(50):
        c = Configuration(t1[k], z1[k], t2[k], z2[k])
        assert iv[k] == interval(c)


def test_classify_each_region():
    assert classify(Configuration(0.0, 0.0, 0.0, 1.0)) is Region.OMEGA1
    assert classify(Configuration(0.0, 1.0, 0.0, 0.0)) is Region.OMEGA2
    assert classify(Configuration(0.3, 0.5, 0.3, 0.5)) is Region.COINCIDENCE
    assert classify(Configuration(0.0, 0.0, 1.0, 1.0)) is Region.LIGHTLIKE
    assert classify(Configuration(0.0, 0.0, 2.0, 1.0)) is Region.TIMELIKE


def test_classify_tolerance_scales_with_coordinates():
    almost = Configuration(100.0, 100.0 + 1e-9, 100.0, 100.0)
    assert classify(almost) is Region.OMEGA2
    assert classify(almost, tol=1e-10) is Region.COINCIDENCE
    with pytest.raises(ValueError):
        classify(almost, tol=-1.0)


def test_nonfinite_coordinates_rejected():
    with pytest.raises(ValueError):
        Configuration(math.nan, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        Configuration(0.0, math.inf, 0.0, 1.0)


def test_swapped_exchanges_labels():
    c = Configuration(0.1, -0.4, 0.2, 0.9)
    assert c.swapped() == Configuration(0.2, 0.9, 0.1, -0.4)
    assert c.swapped().swapped() == c


@given(coord, coord, coord, coord)
def test_relative_round_trip(t1, z1, t2, z2):
    c = Configuration(t1, z1, t2, z2)
    r = to_relative(c)
    back = from_relative(r)
    for a, b in zip(c.as_tuple(), back.as_tuple()):
        assert a == pytest.approx(b, abs=1e-12)
    assert r.z == z1 - z2 and r.T == t1 + t2


@given(coord, coord, coord, coord)
def test_region_masks_agree_with_classify(t1, z1, t2, z2):
    m1, m2, bad = region_masks(t1, z1, t2, z2)
    reg = classify(Configuration(t1, z1, t2, z2))
    assert bool(m1) == (reg is Region.OMEGA1)
    assert bool(m2) == (reg is Region.OMEGA2)
    assert bool(bad) == (reg not in (Region.OMEGA1, Region.OMEGA2))


def test_margin_bounds_perturbations():
    # moving any single coordinate by less than the margin cannot change
    # the region or cross a characteristic seam
    rng = np.random.default_rng(3)
    t1, z1, t2, z2 = sample_spacelike(rng, 200, (-2, 2), (-3, 3), margin=1e-3)
    m1, m2, bad = region_masks(t1, z1, t2, z2)
    assert not bad.any()
    for k in range(t1.size):
        c = Configuration(t1[k], z1[k], t2[k], z2[k])
        m = spacelike_margin(c)
        assert m > 1e-3
        step = 0.9 * m
        for dt1, dz1 in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            moved = Configuration(c.t1 + dt1, c.z1 + dz1, c.t2, c.z2)
            assert classify(moved) is classify(c)


def test_margin_is_zero_on_the_light_cone():
    assert spacelike_margin(Configuration(0.0, 0.0, 1.0, 1.0)) == 0.0
    assert spacelike_margin(Configuration(0.5, 0.0, 0.0, 0.5)) == 0.0


def test_sample_spacelike_respects_region_and_margin():
    rng = np.random.default_rng(11)
    t1, z1, t2, z2 = sample_spacelike(
        rng, 500, (-1, 1), (-2, 2), margin=0.05, region=Region.OMEGA1
    )
    assert t1.shape == (500,)
    m1, _, _ = region_masks(t1, z1, t2, z2)
    assert m1.all()
    for k in range(0, 500, 17):
        c = Configuration(t1[k], z1[k], t2[k], z2[k])
        assert spacelike_margin(c) > 0.05


def test_sample_spacelike_rejects_bad_region():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        sample_spacelike(rng, 10, (-1, 1), (-1, 1), region=Region.TIMELIKE)


def test_sample_spacelike_gives_up_on_impossible_box():
    rng = np.random.default_rng(0)
    with pytest.raises(RuntimeError):
        sample_spacelike(rng, 10, (-1, 1), (-1, 1), margin=10.0)
