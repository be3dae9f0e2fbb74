import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mtdirac.current import (
    coincidence_flux,
    continuity_residual,
    current_at,
    current_form,
    levi_civita_contraction,
    tensor_current,
)
from mtdirac.geometry import Configuration, sample_spacelike
from mtdirac.solver import StencilError

cvals = st.tuples(
    st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False)
).map(lambda p: complex(*p))
spinors = st.tuples(cvals, cvals, cvals, cvals).map(np.array)


def test_basis_spinor_currents():
    e1 = np.array([1, 0, 0, 0], dtype=complex)
    j = tensor_current(e1)
    assert (j.j00, j.j01, j.j10, j.j11) == (1.0, 1.0, 1.0, 1.0)
    e2 = np.array([0, 1, 0, 0], dtype=complex)
    j = tensor_current(e2)
    assert (j.j00, j.j01, j.j10, j.j11) == (1.0, -1.0, 1.0, -1.0)
    assert levi_civita_contraction(j) == -2.0


@given(spinors)
def test_current_diagonal_formulas(psi):
    # each component is a simultaneous velocity eigenstate: particle 1 moves
    # with +1 on psi1/psi2 and -1 on psi3/psi4, particle 2 with +1 on psi1/psi3
    p = np.abs(psi) ** 2
    j = tensor_current(psi)
    assert j.j00 == pytest.approx(p.sum(), abs=1e-12)
    assert j.j01 == pytest.approx(p[0] - p[1] + p[2] - p[3], abs=1e-12)
    assert j.j10 == pytest.approx(p[0] + p[1] - p[2] - p[3], abs=1e-12)
    assert j.j11 == pytest.approx(p[0] - p[1] - p[2] + p[3], abs=1e-12)
    assert levi_civita_contraction(j) == pytest.approx(2 * (p[2] - p[1]), abs=1e-12)


def test_current_batched_and_matrix_layout():
    rng = np.random.default_rng(2)
    psi = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
    j = tensor_current(psi)
    m = j.as_matrix()
    assert m.shape == (2, 2, 6)
    for k in range(6):
        jk = tensor_current(psi[:, k])
        assert np.allclose(m[:, :, k], [[jk.j00, jk.j01], [jk.j10, jk.j11]])
    assert j.component(0, 1) is j.j01


def test_current_rejects_wrong_shape():
    with pytest.raises(ValueError):
        tensor_current(np.ones(3, dtype=complex))


@given(spinors)
def test_current_form_matches_congruence_transform(psi):
    # independent route: write the two-form as an antisymmetric matrix in
    # (t1, z1, t2, z2) and push it through the linear change of coordinates
    # u = A v with v = (tau, zrel, Z, T)
    j = tensor_current(psi)
    w = np.zeros((4, 4))
    w[1, 3] = j.j00  # dz1 ^ dz2
    w[1, 2] = -j.j01  # dz1 ^ dt2
    w[0, 3] = -j.j10  # dt1 ^ dz2
    w[0, 2] = j.j11  # dt1 ^ dt2
    w = w - w.T
    a = 0.5 * np.array(
        [
            [1.0, 0.0, 0.0, 1.0],  # t1 = (T + tau)/2
            [0.0, 1.0, 1.0, 0.0],  # z1 = (Z + zrel)/2
            [-1.0, 0.0, 0.0, 1.0],  # t2 = (T - tau)/2
            [0.0, -1.0, 1.0, 0.0],  # z2 = (Z - zrel)/2
        ]
    )
    wp = a.T @ w @ a
    cf = current_form(psi)
    assert cf.dtau_dz == pytest.approx(wp[0, 1], abs=1e-12)
    assert cf.dtau_dZ == pytest.approx(wp[0, 2], abs=1e-12)
    assert cf.dtau_dT == pytest.approx(wp[0, 3], abs=1e-12)
    assert cf.dz_dZ == pytest.approx(wp[1, 2], abs=1e-12)
    assert cf.dz_dT == pytest.approx(wp[1, 3], abs=1e-12)
    assert cf.dT_dZ == pytest.approx(-wp[2, 3], abs=1e-12)


def test_continuity_residual_small_on_smooth_data(packet, rich):
    rng = np.random.default_rng(17)
    h = 1e-4
    for s in (packet, rich):
        t1, z1, t2, z2 = sample_spacelike(rng, 25, (-1.5, 1.5), (-3.5, 3.5), margin=4 * h)
        worst = 0.0
        for k in range(t1.size):
            d1, d2 = continuity_residual(s, Configuration(t1[k], z1[k], t2[k], z2[k]), h=h)
            worst = max(worst, float(np.abs(d1).max()), float(np.abs(d2).max()))
        assert worst < 1e-5


def test_continuity_residual_guards():
    from mtdirac.scenario import InitialData, Scenario, ZERO2

    s = Scenario(initial=InitialData(half1=(ZERO2,) * 4, half2=(ZERO2,) * 4))
    with pytest.raises(StencilError):
        continuity_residual(s, Configuration(0.0, 0.0, 0.0, 1e-6))
    with pytest.raises(ValueError):
        continuity_residual(s, Configuration(0.0, 0.0, 0.0, 1.0), h=-1.0)


def test_coincidence_flux_cancels_for_phase_jump(packet, rich):
    t = np.linspace(-2.0, 2.0, 33)
    z = np.linspace(-3.0, 3.0, 33)
    for s in (packet, rich):
        for side in (1, 2):
            flux = coincidence_flux(s, t[:, None], z[None, :], side)
            assert np.abs(flux).max() <= 1e-12


def test_coincidence_flux_detects_absorbing_boundary(leaky):
    # with the t > 0 re-emission map zeroed, whatever reaches the diagonal
    # during the overlap epoch is swallowed: strictly incoming flux
    z = np.linspace(-1.5, 1.5, 61)
    flux = coincidence_flux(leaky, 0.7, z, 1)
    assert flux.max() <= 1e-15
    assert flux.min() < -1e-3


def test_current_at_matches_tensor_current_of_fields(packet):
    rng = np.random.default_rng(3)
    t1, z1, t2, z2 = sample_spacelike(rng, 50, (-1, 1), (-3, 3))
    from mtdirac.solver import evaluate_fields

    j = current_at(packet, t1, z1, t2, z2)
    jj = tensor_current(evaluate_fields(packet, t1, z1, t2, z2))
    assert np.array_equal(j.j00, jj.j00) and np.array_equal(j.j11, jj.j11)
