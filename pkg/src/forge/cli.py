"""Command line entry point: ``forge run | reproduce | mesh``.

Exit codes: 0 success, 2 data or configuration error, 3 numerical failure
or inconclusive verdict, 4 consistency failure.

The conformal type of an end is not detected: every punctured-disk model is
taken to be of punctured type (an input flag of the scenario class).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from . import __version__
from .ends import end_report, theorem_consistency
from .errors import ConfigError, DataError, ForgeError, InconclusiveInput, NumericalError
from .report import ReportDocument, Timer, write_outputs
from .scenario import ScenarioConfig, build_model, load_scenario
from .surfaces import model_mesh, write_obj

EXIT_OK, EXIT_DATA, EXIT_NUMERICAL, EXIT_CONSISTENCY = 0, 2, 3, 4

SCENARIO_DIR = Path(__file__).parent / "scenarios"


def _exit_for(exc):
    if isinstance(exc, DataError):
        return EXIT_DATA
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_DATA


def apply_overrides(cfg: ScenarioConfig, rays=None, rmin=None, grid=None, tol=None) -> ScenarioConfig:
    """``--rmin`` sets the number of truncation decades so that the last ``eps`` is ``rmin``."""
    o = cfg.options
    if rays is not None:
        o["rays"] = int(rays)
    if grid is not None:
        o["grid"] = int(grid)
    if tol is not None:
        o["tol"] = float(tol)
    if rmin is not None:
        if not 0 < rmin < o["r0"]:
            raise ConfigError(f"--rmin must lie in (0, r0 = {o['r0']:g})")
        o["decades"] = max(3, int(round(math.log10(o["r0"] / rmin))))
    return cfg


def _end_config(options):
    return {"n_rays": options["rays"], "r_check": options["r_check"], "grid": options["grid"],
            "tol": options["tol"], "decades": options["decades"], "floor": options["floor"]}


def run_scenario(cfg: ScenarioConfig) -> ReportDocument:
    """build -> metrics -> singular set -> end report -> consistency; errors are embedded."""
    t0 = time.perf_counter()
    timer = Timer()
    doc = ReportDocument(cfg.echo())
    doc.tolerances = {"path_length_abs": cfg.options["tol"], "divergence_floor": cfg.options["floor"],
                      "decades": cfg.options["decades"], "grid": cfg.options["grid"],
                      "r_check_fraction": cfg.options["r_check"],
                      "pole_slope_tol": 0.1, "pole_residual_bound": 0.1}
    try:
        with timer("build"):
            model = build_model(cfg)
        with timer("end_report"):
            rep = end_report(model, _end_config(cfg.options))
    except ForgeError as exc:
        doc.errors.append({"type": type(exc).__name__, "message": str(exc)})
        doc.exit_code = _exit_for(exc)
        doc.timing = {**timer.t, "total": time.perf_counter() - t0}
        return doc
    doc.ends.append(rep.as_dict())
    doc.inequality_suites = {rep.end_id: rep.checks}
    doc.singular_curves = {rep.end_id: rep.singular}
    doc.tables = {f"{rep.end_id}.{name}": rows for name, rows in rep.tables.items()}
    try:
        c = theorem_consistency(rep)
        doc.consistency.append({"end_id": rep.end_id, "passed": c.passed,
                                "explanation": c.explanation, "checks": c.checks})
        doc.exit_code = EXIT_OK if c.passed else EXIT_CONSISTENCY
    except InconclusiveInput as exc:
        doc.consistency.append({"end_id": rep.end_id, "passed": None, "explanation": str(exc)})
        doc.exit_code = EXIT_NUMERICAL
    doc.timing = {**timer.t, "total": time.perf_counter() - t0}
    return doc


def resolve_scenario(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (SCENARIO_DIR / path, SCENARIO_DIR / f"{path}.scn"):
        if cand.exists():
            return cand
    return p  # load_scenario reports the missing file


def _summary_lines(doc: ReportDocument):
    lines = [f"scenario {doc.scenario.get('name')} ({doc.scenario.get('class')})"]
    for e in doc.errors:
        lines.append(f"  error {e['type']}: {e['message']}")
    for end in doc.ends:
        lines.append(f"  end {end['end_id']}: weakly_complete={end['weakly_complete']} "
                     f"complete={end['complete']} singular_set_compact={end['singular_set_compact']} "
                     f"weak={end['weak_growth']} strong={end['strong_growth']}"
                     + (" exempt" if end["exempt"] else "") + (" INCONCLUSIVE" if end["inconclusive"] else ""))
    for c in doc.consistency:
        state = {True: "pass", False: "FAIL", None: "inconclusive"}[c["passed"]]
        lines.append(f"  consistency: {state} ({c['explanation']})")
    if doc.ends:
        lines.append(f"  note: {doc.ends[0]['evidence_note']}")
    lines.append(f"  exit {doc.exit_code}")
    return lines


def _add_overrides(p):
    p.add_argument("--rays", type=int, help="number of radial rays (default 8)")
    p.add_argument("--rmin", type=float, help="innermost truncation radius (sets the decade count)")
    p.add_argument("--grid", type=int, help="singular-set grid size (default 256)")
    p.add_argument("--tol", type=float, help="path-length tolerance (default 1e-9)")


def build_parser():
    ap = argparse.ArgumentParser(prog="forge", description="Completeness analysis of ends of "
                                 "surfaces with singularities built from holomorphic data.")
    ap.add_argument("--version", action="version", version=f"forge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("file", help="scenario file, or the name of a bundled scenario")
    r.add_argument("--out", help="directory for <name>.report.json and CSV tables")
    r.add_argument("--json", action="store_true", help="print the full report JSON to stdout")
    _add_overrides(r)
    rp = sub.add_parser("reproduce", help="run a built-in example and check its criteria")
    from .reproduce import EXAMPLES
    rp.add_argument("example", choices=sorted(EXAMPLES))
    rp.add_argument("--out", help="directory for the report JSON")
    m = sub.add_parser("mesh", help="export a mesh of the surface as OBJ")
    m.add_argument("file")
    m.add_argument("--obj", required=True, help="output OBJ path")
    m.add_argument("--n", type=int, default=64, help="radial resolution for disk models")
    return ap


def _load(args):
    cfg = load_scenario(resolve_scenario(args.file))
    return apply_overrides(cfg, getattr(args, "rays", None), getattr(args, "rmin", None),
                           getattr(args, "grid", None), getattr(args, "tol", None))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            doc = run_scenario(_load(args))
            for line in _summary_lines(doc):
                print(line)
            if args.out:
                for p in write_outputs(doc, args.out):
                    print(f"  wrote {p}")
            if args.json:
                print(doc.to_json())
            return doc.exit_code
        if args.command == "reproduce":
            from .reproduce import reproduce
            crit, doc = reproduce(args.example)
            for c in crit:
                print(c.line())
            if args.out:
                write_outputs(doc, args.out)
            return doc.exit_code
        cfg = _load(args)
        model = build_model(cfg)
        V, header = model_mesh(model, n=args.n)
        n = write_obj(args.obj, V, [f"forge {__version__} scenario {cfg.name}", *header])
        print(f"wrote {n} vertices to {args.obj}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"forge: config error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ForgeError as exc:
        print(f"forge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_for(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
