"""Tensor probability current and its conservation identities.

The bilinear j^{mu nu} = adj(psi) gamma_1^mu gamma_2^nu psi (with the
Dirac adjoint adj(psi) = psi^dagger gamma_1^0 gamma_2^0) is real for every
spinor; j^{00} = |psi|^2 is the configuration-space density.  It obeys one
continuity equation per particle, and its antisymmetric contraction
eps_{mu nu} j^{mu nu} = j^{01} - j^{10} is the net probability flux into
the coincidence set, which the jump condition must cancel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Configuration
from .solver import boundary_trace_fields, evaluate_fields, require_stencil_room
from .spin import ADJOINT_METRIC, gamma

_IMAG_TOL = 1e-13


def _current_matrices() -> dict[tuple[int, int], np.ndarray]:
    out = {}
    for mu in range(2):
        for nu in range(2):
            out[(mu, nu)] = ADJOINT_METRIC @ gamma(mu, 1) @ gamma(nu, 2)
    return out


_MATRICES = _current_matrices()


@dataclass(frozen=True)
class TensorCurrent:
    """The four real components j^{mu nu}; scalars or arrays of equal shape."""

    j00: np.ndarray
    j01: np.ndarray
    j10: np.ndarray
    j11: np.ndarray

    def component(self, mu: int, nu: int) -> np.ndarray:
        return getattr(self, f"j{mu}{nu}")

    def as_matrix(self) -> np.ndarray:
        """Stack into shape (2, 2) + value shape, indexed [mu, nu]."""
        return np.stack(
            [np.stack([self.j00, self.j01]), np.stack([self.j10, self.j11])]
        )


def tensor_current(psi: np.ndarray) -> TensorCurrent:
    """j^{mu nu} at one spinor value or a batch with components on axis 0.

    The bilinear is computed from the gamma matrices, not from a
    hand-simplified component formula; a nonvanishing imaginary part
    (relative to |psi|^2) would mean the spinor algebra is inconsistent,
    and raises.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != 4:
        raise ValueError("psi must have 4 components on axis 0")
    scale = float(np.max(np.einsum("i...,i...->...", psi.conj(), psi).real, initial=1.0))
    values = {}
    for (mu, nu), m in _MATRICES.items():
        raw = np.einsum("i...,ij,j...->...", psi.conj(), m, psi)
        worst = float(np.max(np.abs(raw.imag), initial=0.0))
        if worst > _IMAG_TOL * scale:
            raise ArithmeticError(
                f"j^{mu}{nu} has imaginary part {worst:.3e}; spinor algebra broken"
            )
        values[(mu, nu)] = raw.real
    return TensorCurrent(
        j00=values[(0, 0)], j01=values[(0, 1)], j10=values[(1, 0)], j11=values[(1, 1)]
    )


def current_at(s, t1, z1, t2, z2) -> TensorCurrent:
    return tensor_current(evaluate_fields(s, t1, z1, t2, z2))


def levi_civita_contraction(j: TensorCurrent) -> np.ndarray:
    """eps_{mu nu} j^{mu nu} with eps_{01} = +1; equals 2(|psi3|^2 - |psi2|^2)."""
    return j.j01 - j.j10


def continuity_residual(
    s, c: Configuration, h: float = 1e-4
) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference residuals of the two continuity equations at c.

    Returns (d1, d2), each of shape (2,):

        d1[nu] = D_t1 j^{0 nu} + D_z1 j^{1 nu}
        d2[mu] = D_t2 j^{mu 0} + D_z2 j^{mu 1}

    Same stencil admissibility rule and asymmetric steps (h/4 in time, h/8
    in space) as the field residual probe, for the same reason: matched
    steps cancel the truncation term identically on null-structured fields
    and leave only rounding noise.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    require_stencil_room(c, h)
    ht = 0.25 * h
    hz = 0.125 * h
    t1 = c.t1 + np.array([ht, -ht, 0, 0, 0, 0, 0, 0])
    z1 = c.z1 + np.array([0, 0, hz, -hz, 0, 0, 0, 0])
    t2 = c.t2 + np.array([0, 0, 0, 0, ht, -ht, 0, 0])
    z2 = c.z2 + np.array([0, 0, 0, 0, 0, 0, hz, -hz])
    j = current_at(s, t1, z1, t2, z2).as_matrix()  # (mu, nu, stencil)
    d_t1 = (j[:, :, 0] - j[:, :, 1]) / (2 * ht)
    d_z1 = (j[:, :, 2] - j[:, :, 3]) / (2 * hz)
    d_t2 = (j[:, :, 4] - j[:, :, 5]) / (2 * ht)
    d_z2 = (j[:, :, 6] - j[:, :, 7]) / (2 * hz)
    d1 = d_t1[0] + d_z1[1]  # indexed by nu
    d2 = d_t2[:, 0] + d_z2[:, 1]  # indexed by mu
    return d1, d2


def coincidence_flux(s, t, z, side: int) -> np.ndarray:
    """Net flux j^{01} - j^{10} carried by the one-sided trace at (t, z).

    Vanishes for every trace satisfying the modulus-preserving jump
    condition |psi2| = |psi3|; a nonzero value certifies probability
    leaking through the coincidence set.
    """
    tr = boundary_trace_fields(s, t, z, side)
    return levi_civita_contraction(tensor_current(tr.values))


@dataclass(frozen=True)
class CurrentFormCoefficients:
    """Coefficients of the conserved two-form in relative coordinates.

    Coordinates: z = z1 - z2, Z = z1 + z2, tau = t1 - t2, T = t1 + t2.
    Fields name the basis two-form they multiply.
    """

    dz_dZ: np.ndarray
    dtau_dZ: np.ndarray
    dtau_dz: np.ndarray
    dT_dZ: np.ndarray
    dz_dT: np.ndarray
    dtau_dT: np.ndarray


def current_form(psi: np.ndarray) -> CurrentFormCoefficients:
    """Pull the current two-form j^{00} dz1^dz2 - j^{01} dz1^dt2 - j^{10} dt1^dz2
    + j^{11} dt1^dt2 back to relative coordinates."""
    j = tensor_current(psi)
    return CurrentFormCoefficients(
        dz_dZ=0.5 * j.j00,
        dtau_dZ=-0.25 * (j.j10 + j.j01),
        dtau_dz=0.25 * (j.j10 - j.j01),
        dT_dZ=-0.25 * (j.j10 - j.j01),
        dz_dT=-0.25 * (j.j10 + j.j01),
        dtau_dT=0.5 * j.j11,
    )
