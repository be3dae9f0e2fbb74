"""Scenario data model: initial data on both halves, boundary phase, flags.

A scenario bundles everything that determines a solution:

  * initial data g_i^(h): four complex functions of two real variables per
    half-domain h (h = 1 is z1 < z2, h = 2 is z1 > z2), each with a
    declared compact support box;
  * the boundary phase functions theta_1, theta_2 on the coincidence set;
  * an antisymmetry flag (half 2 derived from half 1 by particle exchange);
  * optionally, raw boundary maps that override the ones derived from the
    initial data and the phase.  Overrides exist for negative controls and
    for exercising the pure initial-boundary-value problem; compliant
    scenarios never set them.

The module also owns the JSON scenario-config format used by the CLI.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .profiles import Profile1D, poly_bump, smooth_bump

Fn2 = Callable[[np.ndarray, np.ndarray], np.ndarray]
PhaseFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

Box = tuple[tuple[float, float], tuple[float, float]]


class ScenarioConfigError(ValueError):
    """Malformed scenario configuration."""


@dataclass(frozen=True, eq=False)
class Component2D:
    """One g_i^(h): complex function of (x, y) with compact support box.

    fn is None for the identically-zero component.  The box is the closed
    rectangle outside which the function vanishes exactly; it feeds support
    truncation, so it must be honest.
    """

    fn: Fn2 | None = None
    box: Box | None = None
    smoothness: int | None = None
    label: str = "zero"

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        shape = np.broadcast_shapes(x.shape, y.shape)
        if self.fn is None:
            return np.zeros(shape, dtype=complex)
        xb = np.broadcast_to(x, shape)
        yb = np.broadcast_to(y, shape)
        return np.asarray(self.fn(xb, yb), dtype=complex)

    @property
    def is_zero(self) -> bool:
        return self.fn is None


ZERO2 = Component2D()


def product2(px: Profile1D, py: Profile1D) -> Component2D:
    """Separable component g(x, y) = px(x) * py(y)."""

    def fn(x, y):
        return px(x) * py(y)

    sm = _min_smoothness(px.smoothness, py.smoothness)
    return Component2D(
        fn=fn, box=(px.support(), py.support()), smoothness=sm, label="product"
    )


def custom2(
    fn: Fn2, box: Box | None, smoothness: int | None = None, label: str = "custom"
) -> Component2D:
    return Component2D(fn=fn, box=box, smoothness=smoothness, label=label)


def _min_smoothness(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class Phase:
    """Boundary phase theta(t, z) on the coincidence set.

    Presets: constant theta = value; plus_i and minus_i fix the jump factor
    exp(-i theta) to +i and -i (theta = -pi/2 and +pi/2).
    """

    kind: str = "constant"
    value: float = 0.0
    fn: PhaseFn | None = None

    def __call__(self, t, z) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=float)
        shape = np.broadcast_shapes(t.shape, z.shape)
        if self.kind == "constant":
            return np.full(shape, self.value)
        if self.kind == "plus_i":
            return np.full(shape, -0.5 * math.pi)
        if self.kind == "minus_i":
            return np.full(shape, 0.5 * math.pi)
        if self.kind == "custom":
            tb = np.broadcast_to(t, shape)
            zb = np.broadcast_to(z, shape)
            return np.asarray(self.fn(tb, zb), dtype=float)
        raise ValueError(f"unknown phase kind {self.kind!r}")

    def negated(self) -> "Phase":
        if self.kind == "constant":
            return Phase("constant", -self.value)
        if self.kind == "plus_i":
            return Phase("minus_i")
        if self.kind == "minus_i":
            return Phase("plus_i")
        fn = self.fn
        return Phase("custom", fn=lambda t, z: -fn(t, z))


@dataclass(frozen=True, eq=False)
class BoundaryPhase:
    theta1: Phase = Phase("constant", 0.0)
    theta2: Phase = Phase("constant", 0.0)


@dataclass(frozen=True, eq=False)
class InitialData:
    """The eight data functions (g1..g4 on each half) plus support metadata."""

    half1: tuple[Component2D, Component2D, Component2D, Component2D]
    half2: tuple[Component2D, Component2D, Component2D, Component2D]

    def component(self, index: int, half: int) -> Component2D:
        """g_index on the given half; index in 1..4, half in {1, 2}."""
        if index not in (1, 2, 3, 4) or half not in (1, 2):
            raise ValueError(f"no component g{index}^({half})")
        return (self.half1 if half == 1 else self.half2)[index - 1]

    def support_hull(self) -> tuple[float, float] | None:
        """Smallest interval containing every box edge on both axes.

        Every component of the solution evaluates the data at arguments
        drawn from the null coordinates zterm +- t of the two particles, so a
        particle coordinate contributes only when one of its null coordinates
        lands in this hull.  None means all data vanish identically.
        """
        lo = math.inf
        hi = -math.inf
        for comp in (*self.half1, *self.half2):
            if comp.box is None:
                continue
            for axis in comp.box:
                lo = min(lo, axis[0])
                hi = max(hi, axis[1])
        if lo > hi:
            return None
        return (lo, hi)

    def smoothness(self) -> int | None:
        out: int | None = None
        for comp in (*self.half1, *self.half2):
            if not comp.is_zero:
                out = _min_smoothness(out, comp.smoothness)
        return out


ZERO_HALF = (ZERO2, ZERO2, ZERO2, ZERO2)


@dataclass(frozen=True, eq=False)
class BoundaryMaps:
    """Values fed onto a half from the coincidence set along outgoing nulls.

    Each map is a function of (t, z) on the coincidence set.  plus maps are
    consumed at t >= 0, minus maps at t < 0.
    """

    h1_plus: Fn2
    h1_minus: Fn2
    h2_plus: Fn2
    h2_minus: Fn2


@dataclass(frozen=True, eq=False)
class Scenario:
    initial: InitialData
    phase: BoundaryPhase = field(default_factory=BoundaryPhase)
    antisymmetric: bool = False
    boundary_override: BoundaryMaps | None = None
    label: str = ""


def boundary_maps(s: Scenario) -> BoundaryMaps:
    """The boundary maps in force: the override if set, else derived ones.

    The derived maps re-emit the datum arriving at the coincidence set on
    the incoming characteristic, multiplied by the jump factor exp(-+ i theta):
    on half 1 the pair (psi2, psi3) satisfies psi2 = exp(-i theta1) psi3, on
    half 2 psi3 = exp(-i theta2) psi2.
    """
    if s.boundary_override is not None:
        return s.boundary_override
    g2_1 = s.initial.component(2, 1)
    g3_1 = s.initial.component(3, 1)
    g2_2 = s.initial.component(2, 2)
    g3_2 = s.initial.component(3, 2)
    th1 = s.phase.theta1
    th2 = s.phase.theta2

    def h1_plus(t, z):
        return np.exp(1j * th1(t, z)) * g2_1(z - t, z + t)

    def h1_minus(t, z):
        return np.exp(-1j * th1(t, z)) * g3_1(z + t, z - t)

    def h2_plus(t, z):
        return np.exp(-1j * th2(t, z)) * g3_2(z + t, z - t)

    def h2_minus(t, z):
        return np.exp(1j * th2(t, z)) * g2_2(z - t, z + t)

    return BoundaryMaps(h1_plus, h1_minus, h2_plus, h2_minus)


def exchanged_component(comp: Component2D, sign: float = -1.0) -> Component2D:
    """sign * comp with swapped arguments; support box transposed."""
    if comp.is_zero:
        return ZERO2
    fn = comp.fn
    box = (comp.box[1], comp.box[0]) if comp.box is not None else None
    return Component2D(
        fn=lambda x, y: sign * fn(y, x),
        box=box,
        smoothness=comp.smoothness,
        label=f"exchanged({comp.label})",
    )


def antisymmetric_extension(
    half1: tuple[Component2D, Component2D, Component2D, Component2D],
    theta1: Phase,
) -> Scenario:
    """Scenario whose half-2 data make the solution antisymmetric under exchange.

    Exchanging both particle labels and spin slots maps half 1 onto half 2;
    requiring psi -> -psi fixes g^(2) from g^(1) (with components 2 and 3
    trading places) and theta2 = -theta1.
    """
    g1, g2, g3, g4 = half1
    half2 = (
        exchanged_component(g1),
        exchanged_component(g3),
        exchanged_component(g2),
        exchanged_component(g4),
    )
    return Scenario(
        initial=InitialData(half1=half1, half2=half2),
        phase=BoundaryPhase(theta1=theta1, theta2=theta1.negated()),
        antisymmetric=True,
    )


def phase_mirrored(source: Component2D, theta: Phase, target: int) -> Component2D:
    """The partner component that joins the boundary branch smoothly.

    For target g3 (from a given g2) this is the unique choice making the
    initial and boundary branches of psi3 one global function,

        g3(x, y) = exp(+i theta((x-y)/2, (x+y)/2)) g2(y, x),

    and symmetrically for target g2 from g3 with exp(-i theta((y-x)/2, ...)).
    The same formulas serve both halves with that half's theta.  Data built
    this way satisfy the coincidence compatibility conditions exactly and
    keep the full smoothness of the source.
    """
    if target not in (2, 3):
        raise ValueError("target must be 2 or 3")
    if source.is_zero:
        return ZERO2
    fn = source.fn
    if target == 3:

        def mirrored(x, y):
            return np.exp(1j * theta(0.5 * (x - y), 0.5 * (x + y))) * fn(y, x)

    else:

        def mirrored(x, y):
            return np.exp(-1j * theta(0.5 * (y - x), 0.5 * (x + y))) * fn(y, x)

    box = (source.box[1], source.box[0]) if source.box is not None else None
    return Component2D(
        fn=mirrored,
        box=box,
        smoothness=source.smoothness,
        label=f"phase_mirror(g{5 - target})",
    )


@dataclass(frozen=True)
class CompatibilityReport:
    """Result of sampling the coincidence compatibility conditions."""

    max_violation: float
    condition_maxima: dict[str, float]
    worst: list[tuple[str, float, float]]  # (condition, z, |violation|)

    @property
    def compatible(self) -> bool:
        return self.max_violation <= 1e-12


def check_compatibility(s: Scenario, samples: int = 512) -> CompatibilityReport:
    """Sample the four matching conditions between data and boundary maps.

    On half 1 the outgoing boundary values at t = 0 must splice onto the
    initial data: g3(z, z) = h1_plus(0, z) and g2(z, z) = h1_minus(0, z);
    half 2 analogously with h2_plus/h2_minus and components 2/3 swapped.
    Violations are reported, never raised: incompatible data still define
    branchwise values and the flag is the caller's to act on.
    """
    hull = s.initial.support_hull()
    if hull is None:
        return CompatibilityReport(0.0, {}, [])
    pad = 0.05 * (hull[1] - hull[0])
    z = np.linspace(hull[0] - pad, hull[1] + pad, samples)
    t0 = np.zeros_like(z)
    maps = boundary_maps(s)
    ini = s.initial
    conditions = {
        "g3_half1_vs_h1_plus": ini.component(3, 1)(z, z) - maps.h1_plus(t0, z),
        "g2_half1_vs_h1_minus": ini.component(2, 1)(z, z) - maps.h1_minus(t0, z),
        "g2_half2_vs_h2_plus": ini.component(2, 2)(z, z) - maps.h2_plus(t0, z),
        "g3_half2_vs_h2_minus": ini.component(3, 2)(z, z) - maps.h2_minus(t0, z),
    }
    maxima: dict[str, float] = {}
    worst: list[tuple[str, float, float]] = []
    for name, diff in conditions.items():
        mag = np.abs(diff)
        k = int(np.argmax(mag))
        maxima[name] = float(mag[k])
        if mag[k] > 1e-12:
            worst.append((name, float(z[k]), float(mag[k])))
    worst.sort(key=lambda item: -item[2])
    return CompatibilityReport(
        max_violation=max(maxima.values()), condition_maxima=maxima, worst=worst
    )


# ---------------------------------------------------------------------------
# JSON scenario configs
# ---------------------------------------------------------------------------


def _parse_amplitude(raw) -> complex:
    if isinstance(raw, (int, float)):
        return complex(raw)
    if (
        isinstance(raw, (list, tuple))
        and len(raw) == 2
        and all(isinstance(v, (int, float)) for v in raw)
    ):
        return complex(raw[0], raw[1])
    raise ScenarioConfigError(f"amplitude must be a number or [re, im], got {raw!r}")


def parse_profile(spec: dict, where: str) -> Profile1D:
    if not isinstance(spec, dict):
        raise ScenarioConfigError(f"{where}: profile spec must be an object")
    shape = spec.get("shape", "smooth_bump")
    try:
        lo = float(spec["lo"])
        hi = float(spec["hi"])
    except KeyError as err:
        raise ScenarioConfigError(f"{where}: profile needs lo and hi") from err
    amp = _parse_amplitude(spec.get("amplitude", 1.0))
    momentum = float(spec.get("momentum", 0.0))
    normalize = bool(spec.get("normalize", False))
    if shape == "smooth_bump":
        return smooth_bump(lo, hi, amplitude=amp, momentum=momentum, normalize=normalize)
    if shape == "poly_bump":
        k = int(spec.get("smoothness", 2))
        return poly_bump(
            lo, hi, smoothness=k, amplitude=amp, momentum=momentum, normalize=normalize
        )
    raise ScenarioConfigError(f"{where}: unknown profile shape {shape!r}")


def parse_phase(spec, where: str) -> Phase:
    if spec is None:
        return Phase("constant", 0.0)
    if not isinstance(spec, dict):
        raise ScenarioConfigError(f"{where}: phase spec must be an object")
    preset = spec.get("preset", "constant")
    if preset == "constant":
        return Phase("constant", float(spec.get("value", 0.0)))
    if preset in ("plus_i", "minus_i"):
        return Phase(preset)
    raise ScenarioConfigError(f"{where}: unknown phase preset {preset!r}")


def _parse_component(spec, theta: Phase, parsed: dict, where: str) -> Component2D:
    if spec is None:
        return ZERO2
    if not isinstance(spec, dict):
        raise ScenarioConfigError(f"{where}: component spec must be an object")
    preset = spec.get("preset", "zero")
    if preset == "zero":
        return ZERO2
    if preset == "product":
        params = spec.get("params", {})
        px = parse_profile(params.get("x"), f"{where}.params.x")
        py = parse_profile(params.get("y"), f"{where}.params.y")
        comp = product2(px, py)
    elif preset in ("mirror_of_g2", "mirror_of_g3"):
        src_key = "g2" if preset == "mirror_of_g2" else "g3"
        src = parsed.get(src_key)
        if src is None or src.is_zero:
            raise ScenarioConfigError(
                f"{where}: {preset} needs a nonzero {src_key} parsed first"
            )
        comp = phase_mirrored(src, theta, target=3 if src_key == "g2" else 2)
    else:
        raise ScenarioConfigError(f"{where}: unknown component preset {preset!r}")
    if "support" in spec:
        raw = spec["support"]
        try:
            box = ((float(raw[0][0]), float(raw[0][1])), (float(raw[1][0]), float(raw[1][1])))
        except (TypeError, IndexError, ValueError) as err:
            raise ScenarioConfigError(
                f"{where}: support must be [[xlo, xhi], [ylo, yhi]]"
            ) from err
        comp = Component2D(comp.fn, box, comp.smoothness, comp.label)
    return comp


def _scenario_from_full_config(cfg: dict) -> Scenario:
    antisym = bool(cfg.get("antisymmetric", False))
    phase_cfg = cfg.get("phase", {})
    theta1 = parse_phase(phase_cfg.get("theta1"), "phase.theta1")
    theta2 = parse_phase(phase_cfg.get("theta2"), "phase.theta2")
    initial_cfg = cfg.get("initial", {})
    if not isinstance(initial_cfg, dict):
        raise ScenarioConfigError("initial must be an object")
    unknown = set(initial_cfg) - {"g1", "g2", "g3", "g4"}
    if unknown:
        raise ScenarioConfigError(f"unknown initial keys {sorted(unknown)}")

    halves: dict[int, tuple] = {}
    for half, theta in ((1, theta1), (2, theta2)):
        key = f"omega{half}"
        parsed: dict[str, Component2D] = {}
        for name in ("g1", "g2", "g4", "g3"):  # g3 last so mirrors can see g2
            entry = initial_cfg.get(name, {})
            if not isinstance(entry, dict):
                raise ScenarioConfigError(f"initial.{name} must be an object")
            parsed[name] = _parse_component(
                entry.get(key), theta, parsed, f"initial.{name}.{key}"
            )
        halves[half] = (parsed["g1"], parsed["g2"], parsed["g3"], parsed["g4"])

    if antisym:
        for comp in halves[2]:
            if not comp.is_zero:
                raise ScenarioConfigError(
                    "antisymmetric scenarios must not give omega2 data explicitly"
                )
        return antisymmetric_extension(halves[1], theta1)
    return Scenario(
        initial=InitialData(half1=halves[1], half2=halves[2]),
        phase=BoundaryPhase(theta1=theta1, theta2=theta2),
        label=str(cfg.get("label", "")),
    )


def scenario_from_dict(cfg: dict) -> Scenario:
    if not isinstance(cfg, dict):
        raise ScenarioConfigError("scenario config must be a JSON object")
    if "preset" in cfg:
        # scattering presets live next to their closed forms; import lazily
        # to keep this module free of a cycle
        from .interaction import (
            spin_product_scenario_from_config,
            wavepacket_scenario_from_config,
        )

        preset = cfg["preset"]
        params = cfg.get("params", {})
        if preset == "wavepacket":
            return wavepacket_scenario_from_config(params)
        if preset == "spin_product":
            return spin_product_scenario_from_config(params)
        raise ScenarioConfigError(f"unknown scenario preset {preset!r}")
    return _scenario_from_full_config(cfg)


def load_scenario(text: str) -> tuple[Scenario, str]:
    """Parse a JSON scenario config; returns the scenario and the raw text."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioConfigError(f"config is not valid JSON: {err}") from err
    return scenario_from_dict(cfg), text
