"""Closed-form solution of the two-time transport system on space-like pairs.

The two evolution equations

    i d_t1 psi = -i (sigma3 (x) Id) d_z1 psi
    i d_t2 psi = -i (Id (x) sigma3) d_z2 psi

decouple componentwise into one-dimensional transport along null lines, so
each component is constant on a two-parameter family of characteristic
planes:

    psi1 = f1(z1 - t1, z2 - t2)      psi2 = f2(z1 - t1, z2 + t2)
    psi3 = f3(z1 + t1, z2 - t2)      psi4 = f4(z1 + t1, z2 + t2)

On the half-domain Omega1 (z1 < z2) the characteristics of psi1 and psi4
always reach the initial surface t1 = t2 = 0 inside the same half, which
pins f1 = g1, f4 = g4.  For psi2 and psi3 the characteristic either reaches
the initial surface (initial branch) or hits the coincidence set first
(boundary branch); there the value is the datum carried in on the partner
null line, re-emitted with the jump factor exp(-+ i theta).  Omega2 mirrors
this with the particle roles exchanged.  Branch selection is the strict
inequality for the initial branch; ties go to the boundary branch, where
compatible data agree anyway.

Everything here is evaluated pointwise from the scenario data; there is no
grid and no time stepping.  Array arguments broadcast; field values come
back as an array of shape (4,) + broadcast shape, indexed psi1..psi4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    Configuration,
    DomainError,
    Region,
    classify,
    region_masks,
    spacelike_margin,
)
from .scenario import BoundaryMaps, Scenario, boundary_maps
from .spin import SIGMA3, embed


class StencilError(ValueError):
    """A finite-difference stencil would cross a branch seam or leave the domain."""


def _eval_half(
    s: Scenario, maps: BoundaryMaps, half: int, t1, z1, t2, z2
) -> np.ndarray:
    ini = s.initial
    x1m = z1 - t1
    x1p = z1 + t1
    x2m = z2 - t2
    x2p = z2 + t2

    psi1 = ini.component(1, half)(x1m, x2m)
    psi4 = ini.component(4, half)(x1p, x2p)

    # Coincidence-set coordinates of the point where the (psi2, psi3)
    # characteristics cross the diagonal; the sign of t* decides which of
    # the two outgoing maps carries the value.
    t2s = 0.5 * (x2p - x1m)
    z2s = 0.5 * (x1m + x2p)
    t3s = 0.5 * (x1p - x2m)
    z3s = 0.5 * (x1p + x2m)

    if half == 1:
        initial2 = x1m < x2p
        initial3 = x1p < x2m
        bdry2 = maps.h1_minus(t2s, z2s)
        bdry3 = maps.h1_plus(t3s, z3s)
    else:
        initial2 = x1m > x2p
        initial3 = x1p > x2m
        bdry2 = maps.h2_plus(t2s, z2s)
        bdry3 = maps.h2_minus(t3s, z3s)

    psi2 = np.where(initial2, ini.component(2, half)(x1m, x2p), bdry2)
    psi3 = np.where(initial3, ini.component(3, half)(x1p, x2m), bdry3)
    return np.stack([psi1, psi2, psi3, psi4])


def evaluate_fields(s: Scenario, t1, z1, t2, z2) -> np.ndarray:
    """Field values at space-like configurations, shape (4,) + broadcast shape.

    Raises DomainError if any configuration is not space-like (light-like
    and time-like pairs, including coincidence points, are outside the
    domain; one-sided coincidence values come from boundary_trace).
    """
    t1, z1, t2, z2 = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (t1, z1, t2, z2))
    )
    shape = t1.shape
    t1f, z1f, t2f, z2f = (a.reshape(-1) for a in (t1, z1, t2, z2))
    m1, m2, bad = region_masks(t1f, z1f, t2f, z2f)
    if bad.any():
        k = int(np.argmax(bad))
        raise DomainError(
            f"{int(bad.sum())} of {bad.size} configurations are not space-like, "
            f"first at (t1={t1f[k]}, z1={z1f[k]}, t2={t2f[k]}, z2={z2f[k]})"
        )
    maps = boundary_maps(s)
    out = np.zeros((4, t1f.size), dtype=complex)
    for half, mask in ((1, m1), (2, m2)):
        if mask.any():
            out[:, mask] = _eval_half(
                s, maps, half, t1f[mask], z1f[mask], t2f[mask], z2f[mask]
            )
    return out.reshape((4,) + shape)


def evaluate(s: Scenario, c: Configuration) -> np.ndarray:
    """Spinor psi(c) as a shape-(4,) complex array."""
    return evaluate_fields(s, c.t1, c.z1, c.t2, c.z2)


def general_solution_eval(f1, f2, f3, f4, c: Configuration) -> np.ndarray:
    """Evaluate the general componentwise-transport ansatz for given plane data."""
    return np.array(
        [
            f1(c.z1 - c.t1, c.z2 - c.t2),
            f2(c.z1 - c.t1, c.z2 + c.t2),
            f3(c.z1 + c.t1, c.z2 - c.t2),
            f4(c.z1 + c.t1, c.z2 + c.t2),
        ],
        dtype=complex,
    )


# ---------------------------------------------------------------------------
# Boundary traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryTrace:
    """One-sided limit of psi at a coincidence point (t, z).

    side = 1 is the limit from z1 < z2 (evaluation at (t, z - eps, t, z + eps)),
    side = 2 from z1 > z2.  values has shape (4,) + shape(t).
    """

    side: int
    t: np.ndarray
    z: np.ndarray
    values: np.ndarray


def boundary_trace_fields(s: Scenario, t, z, side: int) -> BoundaryTrace:
    """Analytic one-sided coincidence limits (no small epsilon involved)."""
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    t, z = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(z, dtype=float))
    ini = s.initial
    maps = boundary_maps(s)
    zm = z - t
    zp = z + t
    psi1 = ini.component(1, side)(zm, zm)
    psi4 = ini.component(4, side)(zp, zp)
    if side == 1:
        psi2 = np.where(t > 0, ini.component(2, 1)(zm, zp), maps.h1_minus(t, z))
        psi3 = np.where(t < 0, ini.component(3, 1)(zp, zm), maps.h1_plus(t, z))
    else:
        psi2 = np.where(t < 0, ini.component(2, 2)(zm, zp), maps.h2_plus(t, z))
        psi3 = np.where(t > 0, ini.component(3, 2)(zp, zm), maps.h2_minus(t, z))
    return BoundaryTrace(side=side, t=t, z=z, values=np.stack([psi1, psi2, psi3, psi4]))


def boundary_trace(s: Scenario, t: float, z: float, side: int) -> BoundaryTrace:
    return boundary_trace_fields(s, float(t), float(z), side)


def bc_defect(s: Scenario, t, z, side: int) -> np.ndarray:
    """Residual psi2 - exp(-i theta_side) psi3 of the jump condition on a trace."""
    tr = boundary_trace_fields(s, t, z, side)
    theta = s.phase.theta1 if side == 1 else s.phase.theta2
    return tr.values[1] - np.exp(-1j * theta(tr.t, tr.z)) * tr.values[2]


# ---------------------------------------------------------------------------
# Characteristic curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharacteristicCurve:
    """Line tau -> (1-tau) * start + tau * anchor inside one branch.

    The anchored component of psi is constant along it.  case is "initial"
    when the curve begins on the t1 = t2 = 0 surface and "boundary" when it
    begins on the coincidence set.
    """

    component: int
    anchor: Configuration
    start: Configuration
    case: str

    def __call__(self, tau: float) -> Configuration:
        a, s = self.anchor, self.start
        return Configuration(
            t1=s.t1 + tau * (a.t1 - s.t1),
            z1=s.z1 + tau * (a.z1 - s.z1),
            t2=s.t2 + tau * (a.t2 - s.t2),
            z2=s.z2 + tau * (a.z2 - s.z2),
        )

    def points(self, tau) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        tau = np.asarray(tau, dtype=float)
        a, s = self.anchor, self.start
        return (
            s.t1 + tau * (a.t1 - s.t1),
            s.z1 + tau * (a.z1 - s.z1),
            s.t2 + tau * (a.t2 - s.t2),
            s.z2 + tau * (a.z2 - s.z2),
        )


def characteristic_anchor(
    component: int, t1, z1, t2, z2, region_sign
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized start points of the characteristic through each configuration.

    region_sign is -1 on Omega1 and +1 on Omega2 (the sign of z1 - z2).
    Returns (s_t1, s_z1, s_t2, s_z2, boundary_case).
    """
    x1m = z1 - t1
    x1p = z1 + t1
    x2m = z2 - t2
    x2p = z2 + t2
    zero = np.zeros_like(x1m)
    false = np.zeros(np.shape(x1m), dtype=bool)
    if component == 1:
        return zero, x1m, zero, x2m, false
    if component == 4:
        return zero, x1p, zero, x2p, false
    if component == 2:
        boundary = region_sign * (x1m - x2p) <= 0
        ts = 0.5 * (x2p - x1m)
        zs = 0.5 * (x1m + x2p)
        s_t1 = np.where(boundary, ts, 0.0)
        s_z1 = np.where(boundary, zs, x1m)
        s_t2 = np.where(boundary, ts, 0.0)
        s_z2 = np.where(boundary, zs, x2p)
        return s_t1, s_z1, s_t2, s_z2, boundary
    if component == 3:
        boundary = region_sign * (x1p - x2m) <= 0
        ts = 0.5 * (x1p - x2m)
        zs = 0.5 * (x1p + x2m)
        s_t1 = np.where(boundary, ts, 0.0)
        s_z1 = np.where(boundary, zs, x1p)
        s_t2 = np.where(boundary, ts, 0.0)
        s_z2 = np.where(boundary, zs, x2m)
        return s_t1, s_z1, s_t2, s_z2, boundary
    raise ValueError("component must be in 1..4")


def characteristic_curve(c: Configuration, component: int) -> CharacteristicCurve:
    """The characteristic plane section through c on which psi_component is constant."""
    region = classify(c)
    if region not in (Region.OMEGA1, Region.OMEGA2):
        raise DomainError(f"configuration is {region.value}, not space-like")
    sign = -1.0 if region is Region.OMEGA1 else 1.0
    s_t1, s_z1, s_t2, s_z2, boundary = characteristic_anchor(
        component, c.t1, c.z1, c.t2, c.z2, sign
    )
    return CharacteristicCurve(
        component=component,
        anchor=c,
        start=Configuration(float(s_t1), float(s_z1), float(s_t2), float(s_z2)),
        case="boundary" if bool(boundary) else "initial",
    )


# ---------------------------------------------------------------------------
# Finite-difference probes
# ---------------------------------------------------------------------------

_SIGMA3_SLOT1 = embed(SIGMA3, 1)
_SIGMA3_SLOT2 = embed(SIGMA3, 2)


def require_stencil_room(c: Configuration, h: float) -> None:
    """Reject configurations whose 2h-neighborhood crosses a seam or leaves the domain."""
    m = spacelike_margin(c)
    if m <= 2.0 * h:
        raise StencilError(f"margin {m:.3e} too small for stencil step {h:.3e}")


def pde_residual(
    s: Scenario, c: Configuration, h: float = 1e-4
) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference residuals of the two evolution equations at c.

    Returns (r1, r2) with

        r1 = i D_t1 psi + i (sigma3 (x) Id) D_z1 psi
        r2 = i D_t2 psi + i (Id (x) sigma3) D_z2 psi

    where D is the symmetric difference, with step h/4 on the time axes and
    h/8 on the space axes.  Equal steps would make the two truncation terms
    cancel identically along the null directions every exact field follows,
    collapsing the residual to rounding noise that grows as h shrinks;
    unequal steps keep the estimator consistent while its value on exact
    solutions shows the genuine O(h^2) third-derivative scale.  The full
    stencil must stay inside one branch: points closer than 2h to a branch
    seam or to the light-like boundary are rejected.
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
    f = evaluate_fields(s, t1, z1, t2, z2)
    d_t1 = (f[:, 0] - f[:, 1]) / (2 * ht)
    d_z1 = (f[:, 2] - f[:, 3]) / (2 * hz)
    d_t2 = (f[:, 4] - f[:, 5]) / (2 * ht)
    d_z2 = (f[:, 6] - f[:, 7]) / (2 * hz)
    r1 = 1j * d_t1 + 1j * (_SIGMA3_SLOT1 @ d_z1)
    r2 = 1j * d_t2 + 1j * (_SIGMA3_SLOT2 @ d_z2)
    return r1, r2


def seam_mismatch(
    s: Scenario, component: int, half: int, v, order: int = 2, delta: float = 1e-3
) -> np.ndarray:
    """Finite-difference probe of branch matching across the seam, orders 0..order.

    For psi2/psi3 the initial and boundary branches are two closed-form
    functions of the pair of null coordinates that meet along the seam
    x = y.  Both extend smoothly past the seam, so the k-th derivative of
    their difference across it can be probed by central differences at
    seam points (v, v).  Returns an array of shape (order+1,) + shape(v)
    with the absolute mismatch per derivative order.  Zero data give zero;
    compatible smooth data give mismatches at finite-difference error level.
    """
    if component not in (2, 3):
        raise ValueError("only psi2 and psi3 have a branch seam")
    if half not in (1, 2):
        raise ValueError("half must be 1 or 2")
    if order < 0 or order > 4:
        raise ValueError("order must be in 0..4")
    v = np.asarray(v, dtype=float)
    ini = s.initial
    maps = boundary_maps(s)
    g = ini.component(component, half)

    if component == 2:
        hmap = maps.h1_minus if half == 1 else maps.h2_plus

        def branch_b(x, y):
            return hmap(0.5 * (y - x), 0.5 * (x + y))

    else:
        hmap = maps.h1_plus if half == 1 else maps.h2_minus

        def branch_b(x, y):
            return hmap(0.5 * (x - y), 0.5 * (x + y))

    def gap(shift):
        x = v + shift
        y = v - shift
        return g(x, y) - branch_b(x, y)

    # central coefficients for d^k/ds^k on the 5-point stencil {-2h..2h}
    stencils = {
        0: ((0,), (1.0,)),
        1: ((-1, 1), (-0.5, 0.5)),
        2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
        3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
        4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
    }
    rows = []
    for k in range(order + 1):
        offsets, coeffs = stencils[k]
        acc = np.zeros(v.shape, dtype=complex)
        for off, w in zip(offsets, coeffs):
            acc += w * gap(off * delta)
        rows.append(np.abs(acc) / delta**k)
    return np.stack(rows)
