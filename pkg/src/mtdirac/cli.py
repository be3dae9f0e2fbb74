"""mtdirac command line: evaluate fields, verify invariants, run scattering.

Subcommands
-----------
evaluate  field values at configurations from --points or an equal-time --grid
verify    run every invariant check on a scenario, JSON report + exit code
scatter   equal-time mass and Schmidt time series for a scattering scenario

Outputs are deterministic: a fixed scenario file, options and --seed yield
byte-identical files (floats printed with %.17g, LF line endings, raw
config echoed in headers).  MTDIRAC_THREADS caps evaluation threads and
never changes results.  Exit codes: 0 success / all checks pass, 1 at
least one verification failure, 2 usage or config errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import conservation, interaction, lorentz
from .geometry import Region, classify, Configuration, sample_spacelike
from .scenario import Scenario, ScenarioConfigError, check_compatibility, load_scenario
from .solver import bc_defect, evaluate_fields, pde_residual, seam_mismatch
from .current import coincidence_flux, continuity_residual
from .spin import exchange


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _echo_lines(command: str, raw: str, seed: int) -> list[str]:
    return [
        f"# mtdirac {command}",
        f"# config: {json.dumps(raw)}",
        f"# seed: {seed}",
    ]


def _read_points(path: Path) -> list[tuple[float, float, float, float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = ("t1", "z1", "t2", "z2")
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in cols):
            raise ScenarioConfigError(f"points file needs columns {cols}")
        try:
            return [tuple(float(row[c]) for c in cols) for row in reader]
        except (TypeError, ValueError) as err:
            raise ScenarioConfigError(f"bad points file: {err}") from err


def _grid_points(s: Scenario, n: int, t: float) -> list[tuple[float, float, float, float]]:
    grid = interaction.default_slice_grid(s, [t], n=n)
    z = grid.points()
    return [(t, z[i], t, z[j]) for i in range(n) for j in range(n)]


def cmd_evaluate(args: argparse.Namespace) -> int:
    s, raw = _load(args.scenario)
    if args.points is not None:
        pts = _read_points(Path(args.points))
    else:
        pts = _grid_points(s, args.grid, args.time)
    t1 = np.array([p[0] for p in pts])
    z1 = np.array([p[1] for p in pts])
    t2 = np.array([p[2] for p in pts])
    z2 = np.array([p[3] for p in pts])
    regions = [classify(Configuration(*p)) for p in pts]
    ok = np.array([r in (Region.OMEGA1, Region.OMEGA2) for r in regions])
    psi = np.zeros((4, len(pts)), dtype=complex)
    if ok.any():
        psi[:, ok] = evaluate_fields(s, t1[ok], z1[ok], t2[ok], z2[ok])

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "fields.csv"
    with open(dest, "w", newline="\n") as fh:
        for line in _echo_lines("evaluate", raw, args.seed):
            fh.write(line + "\n")
        header = ["t1", "z1", "t2", "z2", "region"]
        for i in range(1, 5):
            header += [f"re_psi{i}", f"im_psi{i}"]
        fh.write(",".join(header) + "\n")
        for k in range(len(pts)):
            row = [_fmt(v) for v in pts[k]] + [regions[k].value]
            if ok[k]:
                for i in range(4):
                    row += [_fmt(psi[i, k].real), _fmt(psi[i, k].imag)]
            else:
                row += [""] * 8
            fh.write(",".join(row) + "\n")
    flagged = int((~ok).sum())
    print(f"wrote {dest} ({len(pts)} rows, {flagged} outside the space-like domain)")
    return 0


def _check(value: float, tol: float, **extra) -> dict:
    entry = {"value": float(value), "tolerance": float(tol), "pass": bool(value <= tol)}
    entry.update(extra)
    return entry


def _sample_box(s: Scenario) -> tuple[tuple[float, float], tuple[float, float]]:
    """(t_span, z_span) covering where the evolved field can be nonzero."""
    hull = s.initial.support_hull() or (-1.0, 1.0)
    w = hull[1] - hull[0]
    t_half = 0.5 * w + 1.0
    return (-t_half, t_half), (hull[0] - 1.0, hull[1] + 1.0)


def cmd_verify(args: argparse.Namespace) -> int:
    s, raw = _load(args.scenario)
    rng = np.random.default_rng(args.seed)
    q = conservation.QuadratureSpec(panels=args.panels)
    checks: dict[str, dict] = {}

    def run(name: str, fn) -> None:
        # module errors count as failures but never abort the report
        try:
            checks[name] = fn()
        except Exception as err:
            checks[name] = {"pass": False, "error": f"{type(err).__name__}: {err}"}

    def compatibility() -> dict:
        rep = check_compatibility(s)
        return _check(rep.max_violation, 1e-12, conditions=rep.condition_maxima)

    run("compatibility", compatibility)

    hull = s.initial.support_hull()
    if hull is not None:
        def seams() -> np.ndarray:
            vs = np.linspace(hull[0], hull[1], 101)
            worst = np.zeros(3)
            for comp in (2, 3):
                for half in (1, 2):
                    worst = np.maximum(
                        worst, seam_mismatch(s, comp, half, vs).max(axis=1)
                    )
            return worst

        try:
            seam = seams()
            checks["seam_c0"] = _check(seam[0], 1e-10)
            checks["seam_c1"] = _check(seam[1], 1e-5)
            checks["seam_c2"] = _check(seam[2], 1e-2)
        except Exception as err:
            checks["seam_c0"] = {"pass": False, "error": f"{type(err).__name__}: {err}"}

    h = 1e-4
    t_span, z_span = _sample_box(s)
    t1, z1, t2, z2 = sample_spacelike(rng, 64, t_span, z_span, margin=4 * h)

    def residuals() -> tuple[float, float]:
        pde_max = 0.0
        cont_max = 0.0
        for k in range(t1.size):
            c = Configuration(t1[k], z1[k], t2[k], z2[k])
            r1, r2 = pde_residual(s, c, h)
            pde_max = max(
                pde_max, float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))
            )
            d1, d2 = continuity_residual(s, c, h)
            cont_max = max(
                cont_max, float(np.max(np.abs(d1))), float(np.max(np.abs(d2)))
            )
        return pde_max, cont_max

    try:
        pde_max, cont_max = residuals()
        checks["pde_residuals"] = _check(pde_max, 1e-6, h=h, samples=int(t1.size))
        checks["continuity"] = _check(cont_max, 1e-5, h=h, samples=int(t1.size))
    except Exception as err:
        checks["pde_residuals"] = {
            "pass": False, "error": f"{type(err).__name__}: {err}"
        }

    tt = rng.uniform(t_span[0], t_span[1], 1000)
    zz = rng.uniform(z_span[0], z_span[1], 1000)
    run(
        "boundary_condition",
        lambda: _check(
            max(
                float(np.max(np.abs(bc_defect(s, tt, zz, 1)))),
                float(np.max(np.abs(bc_defect(s, tt, zz, 2)))),
            ),
            1e-13,
            samples=1000,
        ),
    )
    run(
        "coincidence_flux",
        lambda: _check(
            max(
                float(np.max(np.abs(coincidence_flux(s, tt, zz, 1)))),
                float(np.max(np.abs(coincidence_flux(s, tt, zz, 2)))),
            ),
            1e-12,
            samples=1000,
        ),
    )

    def conservation_diffs() -> dict:
        family = conservation.acceptance_family()
        reports = [conservation.normalization_report(s, surf, q) for surf in family]
        values = [r.value for r in reports]
        drift = max(values) - min(values) if values else 0.0
        entry = _check(
            drift,
            1e-6,
            surfaces=[surf.label for surf in family],
            values=values,
            excluded_pairs=int(sum(r.excluded_pairs for r in reports)),
        )
        if all(r.box is None for r in reports):
            entry["degenerate"] = True  # zero scenario, integral vanishes
        return entry

    run("conservation_diffs", conservation_diffs)
    if "error" not in checks["conservation_diffs"]:
        checks["excluded_pairs"] = _check(
            float(checks["conservation_diffs"]["excluded_pairs"]), 0.0
        )

    b = lorentz.Boost(0.5)

    def covariance() -> dict:
        cov = lorentz.covariance_report(s, b, samples=32, seed=args.seed)
        tc1, zc1, tc2, zc2 = sample_spacelike(rng, 256, t_span, z_span)
        parts = {
            "pde": _check(cov.pde_max, 1e-6),
            "boundary": _check(cov.bc_max, 1e-12),
            "commutation": _check(lorentz.commutation_defect(b), 1e-13),
            "current": _check(
                lorentz.current_covariance_defect(s, b, tc1, zc1, tc2, zc2), 1e-12
            ),
        }
        worst = max(p["value"] / p["tolerance"] for p in parts.values())
        return {
            "value": worst,
            "tolerance": 1.0,
            "pass": all(p["pass"] for p in parts.values()),
            "beta": b.beta,
            "parts": parts,
        }

    run("covariance", covariance)

    for side, phase in ((1, s.phase.theta1), (2, s.phase.theta2)):
        if phase.kind in ("plus_i", "minus_i"):
            run(
                f"manifest_form_side{side}",
                lambda side=side: _check(
                    float(np.max(np.abs(lorentz.manifest_defect(s, tt, zz, side)))),
                    1e-13,
                ),
            )

    if s.antisymmetric:
        def antisymmetry() -> dict:
            psi = evaluate_fields(s, t1, z1, t2, z2)
            swapped = exchange(evaluate_fields(s, t2, z2, t1, z1))
            return _check(
                float(np.max(np.abs(psi + swapped))), 1e-13, samples=int(t1.size)
            )

        run("antisymmetry", antisymmetry)

    if hull is not None:
        def schmidt() -> dict:
            grid = interaction.default_slice_grid(s, [0.0], n=args.grid)
            spec = interaction.schmidt_spectrum(
                interaction.single_time_slice(s, 0.0, grid)
            )
            top = [float(v) for v in spec.values[:4]]
            return _check(
                abs(float(np.sum(spec.values**2)) - 1.0), 1e-12, top_values=top
            )

        try:
            checks["schmidt"] = schmidt()
        except ValueError:
            pass  # slice identically zero at t = 0

    all_pass = all(entry["pass"] for entry in checks.values())
    report = {
        "command": "verify",
        "seed": args.seed,
        "panels": args.panels,
        "config_echo": raw,
        "checks": checks,
        "all_pass": all_pass,
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "verify.json"
    with open(dest, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name, entry in checks.items():
        status = "PASS" if entry["pass"] else "FAIL"
        if "error" in entry:
            print(f"{status} {name}: {entry['error']}")
        else:
            print(f"{status} {name}: {entry['value']:.3e} (tol {entry['tolerance']:.1e})")
    print(f"report: {dest}")
    if all_pass:
        print("all checks passed")
        return 0
    print("verification FAILED")
    return 1


def _parse_times(spec: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        return np.linspace(float(start), float(stop), int(count))
    except ValueError as err:
        raise ScenarioConfigError("--times must be start:stop:count") from err


def cmd_scatter(args: argparse.Namespace) -> int:
    s, raw = _load(args.scenario)
    hull = s.initial.support_hull()
    if hull is None:
        raise ScenarioConfigError("scatter needs a scenario with nonzero data")
    if args.times is not None:
        times = _parse_times(args.times)
    else:
        horizon = 0.5 * (hull[1] - hull[0]) + 1.0
        times = np.linspace(0.0, horizon, 17)
    q = conservation.QuadratureSpec(panels=args.panels)
    grid = interaction.default_slice_grid(s, times, n=args.grid)

    rows = []
    for t in times:
        masses = conservation.component_masses(s, float(t), q)
        sl = interaction.single_time_slice(s, float(t), grid)
        try:
            sigma = interaction.schmidt_spectrum(sl).values[:4]
        except ValueError:
            sigma = np.zeros(4)
        rows.append((float(t), masses, np.asarray(sigma)))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "scatter.csv"
    with open(dest, "w", newline="\n") as fh:
        for line in _echo_lines("scatter", raw, args.seed):
            fh.write(line + "\n")
        header = (
            ["t"]
            + [f"mass{i}" for i in range(1, 5)]
            + ["mass_total"]
            + [f"sigma{i}" for i in range(1, 5)]
        )
        fh.write(",".join(header) + "\n")
        for t, masses, sigma in rows:
            cells = [_fmt(t)]
            cells += [_fmt(m) for m in masses]
            cells += [_fmt(float(np.sum(masses)))]
            cells += [_fmt(v) for v in np.pad(sigma, (0, max(0, 4 - sigma.size)))[:4]]
            fh.write(",".join(cells) + "\n")

    totals = [float(np.sum(m)) for _, m, _ in rows]
    print(f"wrote {dest} ({len(rows)} times)")
    print(
        f"total mass min {min(totals):.12f} max {max(totals):.12f} "
        f"drift {max(totals) - min(totals):.3e}"
    )
    return 0


def _load(path: str) -> tuple[Scenario, str]:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ScenarioConfigError(f"cannot read scenario file: {err}") from err
    return load_scenario(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtdirac",
        description="two-particle multi-time transport with contact interaction",
        epilog="MTDIRAC_THREADS caps evaluation threads (default 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario config JSON file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0, help="sampling seed")
        p.add_argument("--panels", type=int, default=64, help="quadrature panels per axis")
        p.add_argument("--grid", type=int, default=256, help="slice grid points")

    p_eval = sub.add_parser("evaluate", help="field values at configurations")
    common(p_eval)
    p_eval.add_argument("--points", help="CSV file with columns t1,z1,t2,z2")
    p_eval.add_argument("--time", type=float, default=0.0, help="grid slice time")
    p_eval.set_defaults(fn=cmd_evaluate)

    p_verify = sub.add_parser("verify", help="run all invariant checks")
    common(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    p_scatter = sub.add_parser("scatter", help="mass and Schmidt time series")
    common(p_scatter)
    p_scatter.add_argument("--times", help="time samples as start:stop:count")
    p_scatter.set_defaults(fn=cmd_scatter)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
