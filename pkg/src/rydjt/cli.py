"""Command-line front end: ``rydjt {spectrum,bo,jt,physical,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure. Every file written carries the run configuration as a ``#`` JSON
header line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import born_oppenheimer as bo
from . import observables as obs
from . import perturbation as pt
from . import physical as phys
from .operators import ModelParams, build_h_res
from .spectra import (
    DEFAULT_SEED,
    FORMAT_VERSION,
    ConvergenceError,
    SweepError,
    lowest_eigenpairs,
    resolve_threads,
    spectrum_sweep,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _snapshot(args, command: str) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "threads")}
    cfg.update(command=command, format=FORMAT_VERSION)
    return cfg


def _fmt(x: float) -> str:
    return "nan" if x is None or not math.isfinite(x) else f"{x:.12g}"


def _write_csv(path, header: dict, columns: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(v)) for v in row) + "\n")


def _grid(args) -> np.ndarray:
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if args.steps > 1 and not args.rabi_max > args.rabi_min:
        raise UsageError("--rabi-max must exceed --rabi-min")
    if args.rabi_min < 0:
        raise UsageError("--rabi-min must be non-negative")
    return np.linspace(args.rabi_min, args.rabi_max, args.steps)


def _check_trap(args) -> None:
    if not args.omega > 0:
        raise UsageError("--omega must be positive")


# -- commands ---------------------------------------------------------------


def pt_overlays(kappa: float, trap: float, rabi: float) -> tuple[float, float]:
    """Weak-coupling and weak-driving ground-energy estimates (nan outside their domain)."""
    gs = -2 * rabi + pt.e_gs2(kappa, trap, rabi) if rabi > 0 else math.nan
    jt = pt.jt_unperturbed_energy(kappa, trap) + pt.e_jt2_gamma(kappa, trap, rabi) if kappa else math.nan
    return gs, jt


def cmd_spectrum(args) -> int:
    _check_trap(args)
    if args.nmax < 0 or args.levels < 1:
        raise UsageError("--nmax must be >= 0 and --levels >= 1")
    grid = _grid(args)
    params = ModelParams(rabi=0.0, trap=args.omega, coupling=args.kappa, n_max=args.nmax)
    table = spectrum_sweep(params, grid, args.levels, seed=args.seed, threads=args.threads)
    over = np.array([pt_overlays(args.kappa, args.omega, r) for r in grid])
    cols = ["rabi"] + [f"level_{i}" for i in range(args.levels)] + ["pt_gs", "pt_jt"]
    rows = np.column_stack([grid, table.levels, over])
    _write_csv(args.out, _snapshot(args, "spectrum"), cols, rows)
    return EXIT_OK


def cmd_bo(args) -> int:
    _check_trap(args)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    grid = _grid(args)
    rows = bo.transition_sweep(args.kappa, args.omega, grid, threads=resolve_threads(args.threads))
    head = _snapshot(args, "bo")
    prefix = Path(args.out_prefix)
    _write_csv(
        f"{prefix}_transition.csv",
        head,
        ["rabi", "e_min", "q_min_norm", "multiplicity"],
        [(r.rabi, r.e_min, r.q_min_norm, r.multiplicity) for r in rows],
    )
    extent = args.extent or 3.0 * max(abs(args.kappa) / args.omega, 1 / 3)
    axis = np.linspace(-extent, extent, args.grid)
    for i, r in enumerate(rows):
        surf = bo.bo_surface_grid(r.q_min[0], args.kappa, args.omega, r.rabi, axis, axis)
        _write_csv(
            f"{prefix}_surface_{i:03d}.csv",
            {**head, "slice_rabi": r.rabi, "slice_q1": float(r.q_min[0])},
            ["q2", "q3", "e0"],
            surf,
        )
    return EXIT_OK


def ground_cluster(params: ModelParams, k: int = 7, cluster_tol: float = 1e-8):
    """Lowest ED level and an orthonormal basis of its (possibly degenerate) eigenspace."""
    h = build_h_res(params)
    res = lowest_eigenpairs(h, min(k, h.dim), 1e-12)
    vals = res.eigenvalues
    n = int(np.sum(vals - vals[0] <= cluster_tol * max(1.0, abs(vals[0]))))
    return vals[0], res.eigenvectors[:, :n]


def jt_report(kappa: float, trap: float, rabi: float, n_max: int) -> dict:
    ansatz = obs.build_jt_ansatz(kappa, trap, n_max)
    rho = obs.spin_reduced_density(ansatz)
    e0, ground = ground_cluster(ModelParams(rabi=rabi, trap=trap, coupling=kappa, n_max=n_max))
    overlaps = ground.T @ ansatz.amplitudes
    w = obs.electronic_weights(ansatz)
    return {
        "entropy_nats": obs.entanglement_entropy(ansatz),
        "gram_offdiagonal": 3.0 * rho[0, 2],
        "fidelity_vs_ed": float(overlaps @ overlaps),
        "ground_degeneracy": int(ground.shape[1]),
        "ed_ground_energy": float(e0),
        "branch_probabilities": {str(i + 1): float(p) for i, p in enumerate(w)},
        "displacements": dict(zip(("a1", "a2", "a3", "b1", "b2", "b3"),
                                  map(float, obs.mode_displacements(ansatz)))),
    }


def cmd_jt(args) -> int:
    _check_trap(args)
    if args.nmax < 0:
        raise UsageError("--nmax must be non-negative")
    out = {"config": _snapshot(args, "jt"), **jt_report(args.kappa, args.omega, args.rabi, args.nmax)}
    _emit_json(out, args.out)
    return EXIT_OK


PHYSICAL_KEYS = ("trap_hz", "spacing_um", "c6_ghz_um6")


def cmd_physical(args) -> int:
    try:
        cfg = json.loads(Path(args.params).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read parameter file {args.params}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("parameter file must hold a JSON object")
    if args.species:
        cfg["species"] = args.species
    for key in PHYSICAL_KEYS:
        if key not in cfg:
            raise UsageError(f"missing key {key!r} in parameter file")
    if "mass_kg" not in cfg and "species" not in cfg:
        raise UsageError("missing key 'mass_kg' (or 'species') in parameter file")
    try:
        p = phys.PhysicalParams.from_lab(
            trap_hz=float(cfg["trap_hz"]),
            spacing_um=float(cfg["spacing_um"]),
            c6_ghz_um6=float(cfg["c6_ghz_um6"]),
            species=cfg.get("species"),
            mass_kg=cfg.get("mass_kg"),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    _emit_json({"config": {**cfg, "format": FORMAT_VERSION}, **phys.report(p)}, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    t0 = time.time()
    results = run_checks(quick=args.quick)
    ok = all(r["passed"] for r in results)
    if args.json:
        print(json.dumps({"passed": ok, "checks": results, "seconds": time.time() - t0},
                         indent=2, sort_keys=True))
    else:
        for r in results:
            print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']}: {r['detail']}")
        print(f"{sum(r['passed'] for r in results)}/{len(results)} checks passed "
              f"in {time.time() - t0:.1f} s")
    return EXIT_OK if ok else EXIT_VERIFY


def _emit_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rydjt", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None,
                        help="worker pool size (RYDJT_THREADS overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    def sweep_flags(p):
        p.add_argument("--kappa", type=float, required=True)
        p.add_argument("--omega", type=float, default=1.0, help="trap frequency")
        p.add_argument("--rabi-min", type=float, default=0.0)
        p.add_argument("--rabi-max", type=float, default=2.0)
        p.add_argument("--steps", type=int, default=41)

    p = sub.add_parser("spectrum", help="low-lying levels of H_res versus rabi frequency")
    sweep_flags(p)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bo", help="Born-Oppenheimer minima sweep and surface slices")
    sweep_flags(p)
    p.add_argument("--grid", type=int, default=81)
    p.add_argument("--extent", type=float, default=None, help="half-width of the (q2, q3) window")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_bo)

    p = sub.add_parser("jt", help="Jahn-Teller ansatz report (JSON)")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--rabi", type=float, required=True)
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_jt)

    p = sub.add_parser("physical", help="convert lab parameters into model couplings")
    p.add_argument("params", help="JSON file with trap_hz, spacing_um, c6_ghz_um6, mass_kg|species")
    p.add_argument("--species", default=None, help="fill the mass from the species table (e.g. K39)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_physical)

    p = sub.add_parser("verify", help="run the cross-module oracle checks")
    p.add_argument("--quick", action="store_true", help="skip the n_max=8 checks")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rydjt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except obs.TruncationError as exc:
        print(f"rydjt {args.command}: {exc} (try a larger --nmax)", file=sys.stderr)
        return EXIT_NUMERIC
    except (SweepError, ConvergenceError, pt.DomainError, RuntimeError) as exc:
        print(f"rydjt {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
