"""Scattering scenarios, equal-time slices and entanglement witnesses.

The head-on packet scenario starts with all amplitude in psi2 (particle 1
right-moving in [a, b], particle 2 left-moving in [c, d], a < b < c < d).
The packets meet at the coincidence set and reappear swapped in psi3 with
the jump phase attached; the closed-form expression for the whole history
is transcribed here independently of the solver for cross-checking.

Equal-time slices collect psi at (t, z_i, t, z_j) over a grid into a
matrix indexed by (spin, position) per particle; its singular values are
the Schmidt coefficients of the state at that time.  A scenario whose
initial slice is a product but develops sigma_2 > 0 under evolution is
certified as interacting; free dynamics preserve product form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import region_masks
from .profiles import Profile1D, smooth_bump
from .scenario import (
    ZERO2,
    BoundaryPhase,
    InitialData,
    Phase,
    Scenario,
    ZERO_HALF,
    parse_phase,
    parse_profile,
    product2,
)
from .solver import evaluate_fields


def wavepacket_scenario(
    a: float,
    b: float,
    c: float,
    d: float,
    phi: Profile1D | None = None,
    chi: Profile1D | None = None,
    theta1: Phase = Phase("constant", 0.0),
) -> Scenario:
    """Head-on scattering data: psi2 = phi(z1) chi(z2) on half 1, rest zero.

    phi must be supported on [a, b] and chi on [c, d] with a < b < c < d;
    omitted profiles default to normalized smooth bumps.  Half 2 is empty
    and stays empty for all times.
    """
    if not a < b < c < d:
        raise ValueError("need a < b < c < d")
    phi = phi if phi is not None else smooth_bump(a, b, normalize=True)
    chi = chi if chi is not None else smooth_bump(c, d, normalize=True)
    if phi.support() != (a, b):
        raise ValueError(f"phi must be supported on [{a}, {b}]")
    if chi.support() != (c, d):
        raise ValueError(f"chi must be supported on [{c}, {d}]")
    half1 = (ZERO2, product2(phi, chi), ZERO2, ZERO2)
    return Scenario(
        initial=InitialData(half1=half1, half2=ZERO_HALF),
        phase=BoundaryPhase(theta1=theta1),
        label="wavepacket",
    )


def wavepacket_scenario_from_config(params: dict) -> Scenario:
    from .scenario import ScenarioConfigError

    try:
        a, b, c, d = (float(params[k]) for k in ("a", "b", "c", "d"))
    except KeyError as err:
        raise ScenarioConfigError("wavepacket preset needs a, b, c, d") from err
    phi = parse_profile(params["phi"], "params.phi") if "phi" in params else None
    chi = parse_profile(params["chi"], "params.chi") if "chi" in params else None
    theta1 = parse_phase(params.get("theta1"), "params.theta1")
    try:
        return wavepacket_scenario(a, b, c, d, phi, chi, theta1)
    except ValueError as err:
        raise ScenarioConfigError(str(err)) from err


def spin_product_scenario(
    a: float,
    b: float,
    c: float,
    d: float,
    phi: tuple[Profile1D, Profile1D] | None = None,
    chi: tuple[Profile1D, Profile1D] | None = None,
    theta1: Phase = Phase("constant", 0.0),
) -> Scenario:
    """Product data phi (x) chi with both spin components per particle.

    phi = (phi_minus, phi_plus) lives on [a, b], chi on [c, d]; component
    g_i is the product matching the spin dictionary (g1 = phi- chi-,
    g2 = phi- chi+, g3 = phi+ chi-, g4 = phi+ chi+).  Because the supports
    are disjoint the coincidence compatibility conditions hold trivially
    and the initial equal-time state is an exact product; evolution through
    the contact interaction entangles it, which is what the interaction
    witness detects.
    """
    if not a < b < c < d:
        raise ValueError("need a < b < c < d")
    if phi is None:
        phi = (
            smooth_bump(a, b, normalize=True),
            smooth_bump(a, b, momentum=1.5, normalize=True),
        )
    if chi is None:
        chi = (
            smooth_bump(c, d, momentum=-1.0, normalize=True),
            smooth_bump(c, d, momentum=0.5, normalize=True),
        )
    for p, (lo, hi), name in ((phi[0], (a, b), "phi[0]"), (phi[1], (a, b), "phi[1]"),
                              (chi[0], (c, d), "chi[0]"), (chi[1], (c, d), "chi[1]")):
        if p.support() != (lo, hi):
            raise ValueError(f"{name} must be supported on [{lo}, {hi}]")
    half1 = (
        product2(phi[0], chi[0]),
        product2(phi[0], chi[1]),
        product2(phi[1], chi[0]),
        product2(phi[1], chi[1]),
    )
    return Scenario(
        initial=InitialData(half1=half1, half2=ZERO_HALF),
        phase=BoundaryPhase(theta1=theta1),
        label="spin_product",
    )


def spin_product_scenario_from_config(params: dict) -> Scenario:
    from .scenario import ScenarioConfigError

    try:
        a, b, c, d = (float(params[k]) for k in ("a", "b", "c", "d"))
    except KeyError as err:
        raise ScenarioConfigError("spin_product preset needs a, b, c, d") from err
    phi = chi = None
    if "phi1" in params or "phi2" in params:
        if not ("phi1" in params and "phi2" in params):
            raise ScenarioConfigError("spin_product preset needs both phi1 and phi2")
        phi = (
            parse_profile(params["phi1"], "params.phi1"),
            parse_profile(params["phi2"], "params.phi2"),
        )
    if "chi1" in params or "chi2" in params:
        if not ("chi1" in params and "chi2" in params):
            raise ScenarioConfigError("spin_product preset needs both chi1 and chi2")
        chi = (
            parse_profile(params["chi1"], "params.chi1"),
            parse_profile(params["chi2"], "params.chi2"),
        )
    theta1 = parse_phase(params.get("theta1"), "params.theta1")
    try:
        return spin_product_scenario(a, b, c, d, phi, chi, theta1)
    except (ValueError, KeyError) as err:
        raise ScenarioConfigError(str(err)) from err


def closed_form_packet(
    phi: Profile1D,
    chi: Profile1D,
    theta1: Phase,
    t1,
    z1,
    t2,
    z2,
    heaviside: bool = True,
) -> np.ndarray:
    """Direct transcription of the scattering solution for cross-checks.

    Independent of the solver's branch machinery: indicator factors and
    step functions are applied literally.  With heaviside=False the step
    factors are dropped; the result must not change, since they only kill
    points where the profile factors vanish anyway.
    """
    a, b = phi.support()
    c, d = chi.support()
    t1, z1, t2, z2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (t1, z1, t2, z2))
    )
    m1, m2, bad = region_masks(t1, z1, t2, z2)
    if bad.any():
        raise ValueError("closed form defined on space-like configurations only")

    def ind(lo, hi, x):
        return ((x >= lo) & (x <= hi)).astype(float)

    psi2 = (
        phi(z1 - t1)
        * chi(z2 + t2)
        * ind(a + t1, b + t1, z1)
        * ind(c - t2, d - t2, z2)
    )
    ts = 0.5 * (z1 - z2 + t1 + t2)
    zs = 0.5 * (z1 + z2 + t1 - t2)
    psi3 = (
        np.exp(1j * theta1(ts, zs))
        * phi(z2 - t2)
        * chi(z1 + t1)
        * ind(a + t2, b + t2, z2)
        * ind(c - t1, d - t1, z1)
    )
    if heaviside:
        psi2 = psi2 * np.where(-z1 + t1 + z2 + t2 >= 0, 1.0, 0.0)
        psi3 = psi3 * np.where(z1 + t1 - z2 + t2 >= 0, 1.0, 0.0)
    zero = np.zeros_like(psi2)
    out = np.stack([zero, psi2, psi3, zero])
    out[:, m2] = 0.0
    return out


# ---------------------------------------------------------------------------
# Equal-time slices and Schmidt spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceGrid:
    """Uniform grid for equal-time slices; n points on [lo, hi]."""

    n: int = 256
    lo: float = -8.0
    hi: float = 8.0

    def __post_init__(self) -> None:
        if self.n < 2 or not self.lo < self.hi:
            raise ValueError("need n >= 2 and lo < hi")

    @property
    def dz(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


def default_slice_grid(s: Scenario, times, n: int = 256) -> SliceGrid:
    """Grid covering the support propagated to the largest |t| requested."""
    hull = s.initial.support_hull()
    if hull is None:
        return SliceGrid(n=n)
    reach = max((abs(float(t)) for t in np.atleast_1d(times)), default=0.0)
    pad = reach + (hull[1] - hull[0]) / (n - 1)
    return SliceGrid(n=n, lo=hull[0] - pad, hi=hull[1] + pad)


@dataclass(frozen=True, eq=False)
class SingleTimeSlice:
    """psi sampled at (t, z_i, t, z_j) arranged as a (spin, z) x (spin, z) matrix.

    Row index s1 * n + i with s1 = 0 for spin -1 and 1 for spin +1; columns
    likewise for particle 2.  Diagonal pairs z_i = z_j are not space-like
    and their entries are zero; the mask records them.
    """

    t: float
    grid: SliceGrid
    matrix: np.ndarray
    diagonal_mask: np.ndarray

    def component_block(self, index: int) -> np.ndarray:
        """n x n block of psi_index, index in 1..4."""
        n = self.grid.n
        r, c = divmod(index - 1, 2)
        return self.matrix[r * n : (r + 1) * n, c * n : (c + 1) * n]

    def component_mass_estimate(self, s: Scenario | None = None) -> np.ndarray:
        """Riemann-sum component masses dz^2 sum |psi_i|^2.

        The excluded diagonal cells are refilled with the mean of the two
        one-sided trace values when the scenario is supplied; without it
        they count as zero, which biases low by O(dz) during epochs with
        mass at the diagonal.
        """
        from .solver import boundary_trace_fields

        n = self.grid.n
        masses = np.empty(4)
        corr = np.zeros((4, n))
        if s is not None:
            z = self.grid.points()
            tr1 = boundary_trace_fields(s, np.full(n, self.t), z, 1).values
            tr2 = boundary_trace_fields(s, np.full(n, self.t), z, 2).values
            corr = 0.5 * (np.abs(tr1) ** 2 + np.abs(tr2) ** 2)
        for i in range(1, 5):
            block = self.component_block(i)
            masses[i - 1] = (np.sum(np.abs(block) ** 2) + np.sum(corr[i - 1])) * (
                self.grid.dz**2
            )
        return masses


def single_time_slice(s: Scenario, t: float, grid: SliceGrid) -> SingleTimeSlice:
    z = grid.points()
    n = grid.n
    z1 = np.broadcast_to(z[:, None], (n, n))
    z2 = np.broadcast_to(z[None, :], (n, n))
    off = ~np.eye(n, dtype=bool)
    vals = np.zeros((4, n, n), dtype=complex)
    psi = evaluate_fields(s, float(t), z1[off], float(t), z2[off])
    for k in range(4):
        vals[k][off] = psi[k]
    matrix = np.block(
        [[vals[0], vals[1]], [vals[2], vals[3]]]
    )
    return SingleTimeSlice(
        t=float(t), grid=grid, matrix=matrix, diagonal_mask=np.eye(n, dtype=bool)
    )


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Normalized singular values (descending, sum of squares 1)."""

    values: np.ndarray

    @property
    def sigma1(self) -> float:
        return float(self.values[0])

    @property
    def sigma2(self) -> float:
        return float(self.values[1])

    @property
    def ratio(self) -> float:
        return self.sigma2 / self.sigma1

    def entropy(self) -> float:
        p = self.values**2
        p = p[p > 0]
        return float(-np.sum(p * np.log(p)))


def schmidt_spectrum(sl: SingleTimeSlice) -> SchmidtSpectrum:
    norm = float(np.linalg.norm(sl.matrix))
    if norm == 0.0:
        raise ValueError("slice is identically zero; no Schmidt spectrum")
    sigma = np.linalg.svd(sl.matrix / norm, compute_uv=False)
    return SchmidtSpectrum(values=sigma)


@dataclass(frozen=True)
class InteractionVerdict:
    interacting: bool
    witness_time: float | None
    initial_sigma2: float
    max_sigma2: float
    max_ratio: float


def is_interacting(
    s: Scenario,
    times,
    grid: SliceGrid | None = None,
    tol: float = 1e-8,
    initial_time: float = 0.0,
) -> InteractionVerdict:
    """Certify interaction: product initial slice, entangled later slice.

    Requires the slice at initial_time to be a product within tol
    (sigma2 <= tol), else the criterion does not apply and a ValueError is
    raised.  The verdict is positive iff some sampled time has sigma2 > tol;
    the first such time is reported together with the largest sigma2 and
    sigma2/sigma1 encountered.
    """
    times = [float(t) for t in np.atleast_1d(times)]
    if grid is None:
        grid = default_slice_grid(s, [initial_time, *times])
    first = schmidt_spectrum(single_time_slice(s, initial_time, grid))
    if first.sigma2 > tol:
        raise ValueError(
            f"initial slice is not a product state (sigma2 = {first.sigma2:.3e})"
        )
    witness = None
    max_sigma2 = 0.0
    max_ratio = 0.0
    for t in times:
        spec = schmidt_spectrum(single_time_slice(s, t, grid))
        if spec.sigma2 > max_sigma2:
            max_sigma2 = spec.sigma2
            max_ratio = spec.ratio
        if witness is None and spec.sigma2 > tol:
            witness = t
    return InteractionVerdict(
        interacting=witness is not None,
        witness_time=witness,
        initial_sigma2=first.sigma2,
        max_sigma2=max_sigma2,
        max_ratio=max_ratio,
    )


def mass_series(
    s: Scenario, times, q=None
) -> tuple[np.ndarray, np.ndarray]:
    """Component masses over a list of times via the conserving quadrature.

    Returns (times array, masses array of shape (len(times), 4)).
    """
    from .conservation import QuadratureSpec, component_masses

    q = q if q is not None else QuadratureSpec()
    times = np.atleast_1d(np.asarray(times, dtype=float))
    masses = np.stack([component_masses(s, float(t), q) for t in times])
    return times, masses
