"""Normalization integrals over space-like hypersurface pairs.

The conserved quantity is the integral of the current two-form over the
set of pairs (x1, x2) of points on a common space-like graph hypersurface
t = f(z), |f'| < 1.  Pulled back to the (z1, z2) parameter plane it reads

    F(z1, z2) = j00 - j01 f'(z2) - j10 f'(z1) + j11 f'(z1) f'(z2),

integrated over z1 != z2.  The integrand is smooth on each half z1 < z2
and z1 > z2 of a compliant scenario but generally jumps across the
diagonal, so panels are never allowed to straddle it: diagonal panels are
split into two triangles, each mapped to a square by a collapsing (Duffy)
transform whose nodes stay strictly off the diagonal.

Truncation is lossless: data vanish exactly outside their support boxes,
and the two null coordinates z -+ f(z) of a graph point are strictly
increasing in z, so inverting them at the support hull endpoints yields a
box outside which the integrand is exactly zero.  Panel contributions are
accumulated with math.fsum, so the result is independent of chunking and
thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .current import tensor_current
from .geometry import region_masks
from .scenario import Scenario
from .solver import boundary_trace_fields, evaluate_fields

MAX_SLOPE = 1.0 - 1e-6


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """Space-like graph t = f(z) with uniformly bounded slope.

    s_max is an upper bound for |f'|; construction fails if it exceeds
    1 - 1e-6.  The bound is what makes every off-diagonal pair of surface
    points space-like: |f(z1) - f(z2)| <= s_max |z1 - z2| < |z1 - z2|.
    """

    f: Callable[[np.ndarray], np.ndarray]
    fprime: Callable[[np.ndarray], np.ndarray]
    s_max: float
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.s_max <= MAX_SLOPE:
            raise ValueError(
                f"slope bound {self.s_max} outside [0, {MAX_SLOPE}]; surface too steep"
            )

    def normal_covector(self, z) -> np.ndarray:
        """Future-directed unit conormal n_mu = (1, -f'(z)) / sqrt(1 - f'^2)."""
        fp = np.asarray(self.fprime(np.asarray(z, dtype=float)))
        root = np.sqrt(1.0 - fp * fp)
        return np.stack([np.ones_like(fp), -fp]) / root


def flat(t0: float) -> Hypersurface:
    t0 = float(t0)
    return Hypersurface(
        f=lambda z: np.full_like(np.asarray(z, dtype=float), t0),
        fprime=lambda z: np.zeros_like(np.asarray(z, dtype=float)),
        s_max=0.0,
        label="flat",
        params={"t0": t0},
    )


def boosted_flat(beta: float, t0: float = 0.0) -> Hypersurface:
    """Image of the flat surface t = t0 under a boost of rapidity beta."""
    beta = float(beta)
    t0 = float(t0)
    slope = math.tanh(beta)
    offset = t0 / math.cosh(beta)
    return Hypersurface(
        f=lambda z: offset + slope * np.asarray(z, dtype=float),
        fprime=lambda z: np.full_like(np.asarray(z, dtype=float), slope),
        s_max=abs(slope),
        label="boosted_flat",
        params={"beta": beta, "t0": t0},
    )


def bump_surface(center: float, height: float, width: float) -> Hypersurface:
    """Flat surface with a smooth compactly supported bump of given height."""
    center = float(center)
    height = float(height)
    width = float(width)
    if width <= 0:
        raise ValueError("width must be positive")
    half = 0.5 * width

    def shape(z):
        u = (np.asarray(z, dtype=float) - center) / half
        out = np.zeros_like(u)
        inner = np.abs(u) < 1.0
        ui = u[inner]
        out[inner] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
        return out

    def shape_prime(z):
        u = (np.asarray(z, dtype=float) - center) / half
        out = np.zeros_like(u)
        inner = np.abs(u) < 1.0
        ui = u[inner]
        d = 1.0 - ui * ui
        out[inner] = np.exp(1.0 - 1.0 / d) * (-2.0 * ui / (d * d)) / half
        return out

    u = np.linspace(-1.0, 1.0, 20001)[1:-1]
    d = 1.0 - u * u
    s_max = abs(height) / half * float(np.max(np.abs(np.exp(1.0 - 1.0 / d) * 2.0 * u / (d * d))))
    return Hypersurface(
        f=lambda z: height * shape(z),
        fprime=lambda z: height * shape_prime(z),
        s_max=1.001 * s_max,  # dense-sampling bound with a safety factor
        label="bump",
        params={"center": center, "height": height, "width": width},
    )


def custom_surface(f, fprime, slope_bound: float | None = None, label: str = "custom") -> Hypersurface:
    if slope_bound is None:
        z = np.linspace(-50.0, 50.0, 200001)
        slope_bound = 1.001 * float(np.max(np.abs(fprime(z))))
    return Hypersurface(f=f, fprime=fprime, s_max=float(slope_bound), label=label)


@dataclass(frozen=True)
class QuadratureSpec:
    """Panelized product quadrature on the truncation box.

    rule "gauss" uses Gauss-Legendre nodes of the given order per panel and
    axis; "simpson" uses the 3-node Simpson rule per panel.  Diagonal panels
    always use Gauss nodes under the triangle-collapsing map regardless of
    rule, because Simpson nodes would land exactly on the diagonal.  box
    overrides the automatic support truncation.
    """

    rule: str = "gauss"
    order: int = 8
    panels: int = 64
    box: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.rule not in ("gauss", "simpson"):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.order < 2 or self.panels < 1:
            raise ValueError("need order >= 2 and panels >= 1")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(self.rule, self.order, 2 * self.panels, self.box)


def _invert_increasing(u: Callable, target: float) -> float:
    """Solve u(z) = target for a strictly increasing scalar map by bisection."""
    lo, hi = -1.0, 1.0
    span = 1.0
    while u(lo) > target:
        lo -= span
        span *= 2.0
    span = 1.0
    while u(hi) < target:
        hi += span
        span *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if u(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def truncation_box(s: Scenario, surf: Hypersurface) -> tuple[float, float] | None:
    """Interval of z outside which the integrand vanishes exactly.

    A surface point contributes only if one of its null coordinates
    z - f(z) or z + f(z) lands in the support hull of the data; both maps
    are strictly increasing, so inverting them at the hull endpoints bounds
    the contributing window.  None means the data are identically zero.
    """
    hull = s.initial.support_hull()
    if hull is None:
        return None

    def u_minus(z: float) -> float:
        return z - float(surf.f(np.asarray(z)))

    def u_plus(z: float) -> float:
        return z + float(surf.f(np.asarray(z)))

    lo = min(_invert_increasing(u_minus, hull[0]), _invert_increasing(u_plus, hull[0]))
    hi = max(_invert_increasing(u_minus, hull[1]), _invert_increasing(u_plus, hull[1]))
    pad = 1e-9 * max(1.0, abs(lo), abs(hi))
    return (lo - pad, hi + pad)


def worker_count() -> int:
    """Thread cap from MTDIRAC_THREADS (default 1); results never depend on it."""
    raw = os.environ.get("MTDIRAC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _axis_nodes(edges: np.ndarray, q: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-panel nodes and weights, shapes (panels, m)."""
    a = edges[:-1, None]
    b = edges[1:, None]
    if q.rule == "gauss":
        x, w = np.polynomial.legendre.leggauss(q.order)
        nodes = 0.5 * (a + b) + 0.5 * (b - a) * x[None, :]
        weights = 0.5 * (b - a) * w[None, :]
    else:
        nodes = np.concatenate([a, 0.5 * (a + b), b], axis=1)
        weights = (b - a) / 6.0 * np.array([1.0, 4.0, 1.0])[None, :]
    return nodes, weights


def _chunked_field_eval(s: Scenario, t1, z1, t2, z2) -> np.ndarray:
    """evaluate_fields over flat arrays, split across worker threads."""
    workers = worker_count()
    n = z1.size
    if workers == 1 or n < 4096:
        return evaluate_fields(s, t1, z1, t2, z2)
    bounds = np.linspace(0, n, workers + 1).astype(int)
    pieces = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda sl: evaluate_fields(s, t1[sl], z1[sl], t2[sl], z2[sl]), pieces
            )
        )
    return np.concatenate(parts, axis=1)


def _values_on_surface(
    s: Scenario,
    surf: Hypersurface,
    z1: np.ndarray,
    z2: np.ndarray,
    side_hint: np.ndarray | None = None,
) -> tuple[np.ndarray, int]:
    """psi at graph pairs, shape (4, n).

    Exact-diagonal points (possible only for panel-edge rules) take the
    one-sided trace of the half their panel lies in, passed via side_hint.
    Returns the field values and the count of excluded (non-space-like,
    off-diagonal) pairs, which the slope bound makes provably zero.
    """
    t1 = surf.f(z1)
    t2 = surf.f(z2)
    on_diag = z1 == z2
    m1, m2, bad = region_masks(t1, z1, t2, z2)
    ok = m1 | m2
    excluded = int(np.count_nonzero(bad & ~on_diag))
    if excluded == 0 and not on_diag.any():
        return _chunked_field_eval(s, t1, z1, t2, z2), 0
    out = np.zeros((4, z1.size), dtype=complex)
    if ok.any():
        out[:, ok] = _chunked_field_eval(s, t1[ok], z1[ok], t2[ok], z2[ok])
    if on_diag.any():
        if side_hint is None:
            raise ValueError("diagonal nodes need a side hint")
        for side in (1, 2):
            sel = on_diag & (side_hint == side)
            if sel.any():
                out[:, sel] = boundary_trace_fields(s, t1[sel], z1[sel], side).values
    return out, excluded


def _pullback_reduce(
    psi: np.ndarray, fp1: np.ndarray, fp2: np.ndarray
) -> np.ndarray:
    j = tensor_current(psi)
    return (j.j00 - j.j01 * fp2 - j.j10 * fp1 + j.j11 * fp1 * fp2)[None, :]


def _component_density_reduce(psi: np.ndarray, fp1, fp2) -> np.ndarray:
    return psi.real**2 + psi.imag**2


def _integrate(
    s: Scenario,
    surf: Hypersurface,
    q: QuadratureSpec,
    reducer: Callable,
    k_out: int,
) -> tuple[np.ndarray, int, tuple[float, float] | None, int]:
    box = q.box if q.box is not None else truncation_box(s, surf)
    if box is None:
        return np.zeros(k_out), 0, None, 0
    edges = np.linspace(box[0], box[1], q.panels + 1)
    nodes, weights = _axis_nodes(edges, q)  # (panels, m)
    p, m = nodes.shape

    # off-diagonal panel blocks in one batch
    z1g = np.broadcast_to(nodes[:, :, None, None], (p, m, p, m))
    z2g = np.broadcast_to(nodes[None, None, :, :], (p, m, p, m))
    panel_rel = np.sign(np.arange(p)[:, None] - np.arange(p)[None, :])
    offdiag = np.broadcast_to((panel_rel != 0)[:, None, :, None], (p, m, p, m))
    # side hint: z1-panel below z2-panel means the panel sits in z1 < z2
    sides = np.broadcast_to(
        np.where(panel_rel < 0, 1, 2)[:, None, :, None], (p, m, p, m)
    )
    z1f = z1g[offdiag]
    z2f = z2g[offdiag]
    psi, excluded = _values_on_surface(s, surf, z1f, z2f, sides[offdiag])
    flat = np.zeros((k_out, p * m * p * m))
    flat[:, offdiag.reshape(-1)] = reducer(psi, surf.fprime(z1f), surf.fprime(z2f))
    vals = flat.reshape(k_out, p, m, p, m)
    block = np.einsum("io,jp,kiojp->kij", weights, weights, vals)

    # diagonal panels: two collapsed triangles each, Gauss nodes only
    x, w = np.polynomial.legendre.leggauss(max(q.order, 4))
    u = 0.5 * (x + 1.0)
    wu = 0.5 * w
    U = u[:, None]
    V = u[None, :]
    WUV = (wu[:, None] * wu[None, :]) * U  # collapse jacobian factor u
    a = edges[:-1]
    width = edges[1:] - edges[:-1]
    tri = {}
    uu = np.broadcast_to(U, (u.size, u.size))
    for lower in (False, True):
        # lower triangle: z2 <= z1 (half 2); upper: z1 <= z2 (half 1)
        zu = a[:, None, None] + width[:, None, None] * uu[None, :, :]
        zv = a[:, None, None] + width[:, None, None] * (U * V)[None, :, :]
        z1t = (zu if lower else zv).reshape(-1)
        z2t = (zv if lower else zu).reshape(-1)
        psi_t, exc_t = _values_on_surface(s, surf, z1t, z2t)
        excluded += exc_t
        red = reducer(psi_t, surf.fprime(z1t), surf.fprime(z2t))
        red = red.reshape(k_out, p, u.size, u.size)
        tri[lower] = np.einsum("uv,kpuv->kp", WUV, red) * (width * width)[None, :]

    totals = np.empty(k_out)
    node_count = z1f.size + 2 * p * u.size * u.size
    for k in range(k_out):
        contributions = (
            list(block[k].reshape(-1)) + list(tri[False][k]) + list(tri[True][k])
        )
        totals[k] = math.fsum(contributions)
    return totals, excluded, box, node_count


@dataclass(frozen=True)
class SurfaceIntegral:
    value: float
    excluded_pairs: int
    box: tuple[float, float] | None
    node_count: int


def normalization_report(
    s: Scenario, surf: Hypersurface, q: QuadratureSpec = QuadratureSpec()
) -> SurfaceIntegral:
    totals, excluded, box, nodes = _integrate(s, surf, q, _pullback_reduce, 1)
    return SurfaceIntegral(
        value=float(totals[0]), excluded_pairs=excluded, box=box, node_count=nodes
    )


def normalization_integral(
    s: Scenario, surf: Hypersurface, q: QuadratureSpec = QuadratureSpec()
) -> float:
    """Integral of the current form over off-diagonal pairs on the surface."""
    return normalization_report(s, surf, q).value


def component_masses(
    s: Scenario, t: float, q: QuadratureSpec = QuadratureSpec()
) -> np.ndarray:
    """Equal-time masses (integral of |psi_i|^2 dz1 dz2) per component at time t.

    Uses the same diagonal-splitting quadrature as the normalization
    integral, whose value equals the sum of the four masses on a flat
    surface.
    """
    totals, _, _, _ = _integrate(s, flat(t), q, _component_density_reduce, 4)
    return totals


def pullback_integrand(s: Scenario, surf: Hypersurface, z1, z2) -> np.ndarray:
    """F(z1, z2) as the coordinate pullback of the current form."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    psi = evaluate_fields(s, surf.f(z1), z1, surf.f(z2), z2)
    return _pullback_reduce(psi, surf.fprime(z1), surf.fprime(z2))[0]


def covector_integrand(s: Scenario, surf: Hypersurface, z1, z2) -> np.ndarray:
    """The same density written as n_mu(x1) n_nu(x2) j^{mu nu} times the
    induced length factors sqrt(1 - f'(z)^2) of both legs."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    psi = evaluate_fields(s, surf.f(z1), z1, surf.f(z2), z2)
    j = tensor_current(psi).as_matrix()
    n1 = surf.normal_covector(z1)
    n2 = surf.normal_covector(z2)
    fp1 = surf.fprime(z1)
    fp2 = surf.fprime(z2)
    dens = np.einsum("m...,mn...,n...->...", n1, j, n2)
    return dens * np.sqrt(1.0 - fp1 * fp1) * np.sqrt(1.0 - fp2 * fp2)


@dataclass(frozen=True)
class SurfaceComparison:
    value_a: float
    value_b: float

    @property
    def difference(self) -> float:
        return abs(self.value_a - self.value_b)


def compare_surfaces(
    s: Scenario,
    surf_a: Hypersurface,
    surf_b: Hypersurface,
    q: QuadratureSpec = QuadratureSpec(),
) -> SurfaceComparison:
    """Normalization integrals of one scenario on two surfaces, same spec."""
    return SurfaceComparison(
        value_a=normalization_integral(s, surf_a, q),
        value_b=normalization_integral(s, surf_b, q),
    )


def flux_violation_probe(
    s: Scenario,
    surf_a: Hypersurface,
    surf_b: Hypersurface,
    q: QuadratureSpec = QuadratureSpec(),
) -> SurfaceComparison:
    """compare_surfaces for scenarios meant to break conservation.

    Intended for raw boundary overrides that do not preserve |psi2| = |psi3|
    on the coincidence set; the returned difference is the detected drift.
    """
    return compare_surfaces(s, surf_a, surf_b, q)


def acceptance_family() -> list[Hypersurface]:
    """The standard five-surface comparison family."""
    return [
        flat(0.0),
        flat(0.7),
        boosted_flat(0.3),
        boosted_flat(-0.5),
        bump_surface(0.0, 0.3, 5.0),
    ]
