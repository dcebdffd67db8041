"""ep-lab command line.

Exit codes: 0 ok, 2 usage/config error, 3 numeric failure, 4 no convergence.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ep_locator import ep_newton, no_ep_certificate
from .errors import ConfigError, EpLabError, FamilyMismatch, NoConvergence
from .plot import gnuplot_files, sweep_svg
from .scenario import PRESETS, ScenarioConfig, preset
from .smatrix import ResonanceSet, cross_section, line_shape_features, s_double_pole, s_matrix
from .spectral import eigenvalues
from .sweep import COLUMNS, run_sweep

log = logging.getLogger("ep_lab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_NO_CONVERGENCE = 0, 2, 3, 4


def format_number(x) -> str:
    # 12 significant digits; "+ 0.0" folds -0.0 into 0.0
    return f"{float(x) + 0.0:.11e}"


def write_csv(path: Path, header, rows, int_columns=()) -> None:
    int_idx = {header.index(c) for c in int_columns}
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(str(int(v)) if i in int_idx else format_number(v) for i, v in enumerate(row))
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def sweep_csv_rows(result):
    cols = result.columns()
    return zip(*(cols[k] for k in COLUMNS))


def load_config(args) -> ScenarioConfig | None:
    cfg = None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        cfg = ScenarioConfig.from_dict(data)
    if args.preset:
        if cfg is not None:
            log.warning("both --preset and --config given; using preset %s", args.preset)
        cfg = preset(args.preset)
    if cfg is not None and args.grid is not None:
        cfg = cfg.with_count(args.grid)
    return cfg


def require_config(args) -> ScenarioConfig:
    cfg = load_config(args)
    if cfg is None:
        raise ConfigError("a scenario is required: use --preset NAME or --config PATH")
    return cfg


def prepare_outdir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".ep_lab_write_test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from None
    return out


def write_manifest(out: Path, command: str, config: dict | None, options: dict, outputs: list[str]) -> None:
    manifest = {
        "command": command,
        "config": config,
        "options": options,
        "outputs": outputs,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


# --- commands ------------------------------------------------------------------


def cmd_sweep(args) -> int:
    cfg = require_config(args)
    out = prepare_outdir(args.output)
    result = run_sweep(cfg)
    write_csv(out / "sweep.csv", list(COLUMNS), sweep_csv_rows(result), int_columns=("defect",))
    outputs = ["sweep.csv"]
    if args.gnuplot:
        data, script = gnuplot_files(result)
        (out / "sweep.dat").write_text(data, encoding="utf-8")
        (out / "sweep.gp").write_text(script, encoding="utf-8")
        outputs += ["sweep.dat", "sweep.gp"]
    else:
        (out / "plot.svg").write_text(sweep_svg(result), encoding="utf-8")
        outputs.append("plot.svg")
    write_manifest(out, "sweep", cfg.to_dict(), {"gnuplot": bool(args.gnuplot)}, outputs)
    print(f"wrote {', '.join(str(out / o) for o in outputs)}")
    return EXIT_OK


def _parse_pairs(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise ConfigError(f"{what}: expected {n} numbers, got {len(vals)}")
    return vals


def _parse_assignments(items, what: str) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"{what}: expected NAME=VALUE, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"{what}: {item!r} is not numeric") from None
    return out


def cmd_find_ep(args) -> int:
    cfg = require_config(args)
    unknowns = tuple(u.strip() for u in args.unknowns.split(",") if u.strip())
    box = _parse_pairs(args.box, 4, "--box") if args.box else None
    seed = _parse_pairs(args.seed, 2, "--seed") if args.seed else None
    fixed = _parse_assignments(args.fix, "--fix")
    try:
        sol = ep_newton(cfg, unknowns, seed=seed, box=box, fixed=fixed, max_iter=args.max_iter)
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        try:
            cert = no_ep_certificate(cfg)
        except FamilyMismatch:
            cert = None
        if cert is not None:
            print(f"certificate: {cert.text()}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    report = sol.to_dict()
    print(json.dumps(report))
    if args.output:
        out = prepare_outdir(args.output)
        (out / "ep.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        write_manifest(
            out,
            "find-ep",
            cfg.to_dict(),
            {"unknowns": list(unknowns), "box": box, "seed": seed, "fix": fixed},
            ["ep.json"],
        )
    return EXIT_OK


def _energy_grid(args, centres, widths) -> np.ndarray:
    if args.energy:
        start, stop, count = args.energy
        count = int(count)
        if count < 2 or not stop > start:
            raise ConfigError(f"empty energy range {start}..{stop} ({count} points)")
        return np.linspace(start, stop, count)
    span = (max(centres) - min(centres)) + 10 * max(max(abs(w) for w in widths), 1e-3)
    mid = 0.5 * (max(centres) + min(centres))
    return np.linspace(mid - span, mid + span, 2001)


def cmd_smatrix(args) -> int:
    config = None
    if args.double_pole:
        kv = _parse_assignments(args.double_pole, "--double-pole")
        if set(kv) != {"E_d", "G_d"}:
            raise ConfigError("--double-pole needs E_d=VALUE G_d=VALUE")
        e_d, g_d = kv["E_d"], kv["G_d"]
        if g_d == 0:
            raise ConfigError("--double-pole needs G_d != 0")
        grid = _energy_grid(args, [e_d], [g_d])

        def sampler(E):
            return s_double_pole(e_d, g_d, E)

        source = {"double_pole": {"E_d": e_d, "G_d": g_d}}
    else:
        if args.from_sweep is not None:
            cfg = require_config(args)
            spec = eigenvalues(cfg.system_at(args.from_sweep))
            res = [(spec.ev1.real, 2 * spec.ev1.imag), (spec.ev2.real, 2 * spec.ev2.imag)]
            config = cfg.to_dict()
        elif args.resonance:
            res = [_parse_pairs(r, 2, "--resonance") for r in args.resonance]
        else:
            raise ConfigError("give --resonance E,G (once or twice), --double-pole or --from-sweep A")
        res = ResonanceSet(res)
        grid = _energy_grid(args, [r.energy for r in res], [r.width for r in res])

        def sampler(E):
            return s_matrix(res, E)

        source = {"resonances": [[r.energy, r.width] for r in res]}
        if args.from_sweep is not None:
            source["from_sweep"] = args.from_sweep

    out = prepare_outdir(args.output)
    xs = cross_section(sampler, grid)
    write_csv(out / "sigma.csv", ["E", "sigma", "S_re", "S_im"], xs.rows())
    outputs = ["sigma.csv"]
    if args.features:
        feats = line_shape_features(xs.energy, xs.sigma)
        (out / "features.json").write_text(json.dumps(feats, indent=2) + "\n", encoding="utf-8")
        outputs.append("features.json")
    options = {**source, "energy": [float(grid[0]), float(grid[-1]), len(grid)]}
    write_manifest(out, "smatrix", config, options, outputs)
    print(f"wrote {', '.join(str(out / o) for o in outputs)}")
    return EXIT_OK


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS), help="built-in figure scenario")
    common.add_argument("--config", help="scenario JSON (or a manifest.json from an earlier run)")
    common.add_argument("-o", "--output", help="output directory")
    common.add_argument("--grid", type=int, help="number of grid points in a")
    common.add_argument("--gnuplot", action="store_true", help="emit sweep.dat + sweep.gp instead of plot.svg")

    parser = argparse.ArgumentParser(prog="ep-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ep-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", parents=[common], help="sweep a scenario and write sweep.csv/plot.svg")
    p.set_defaults(func=cmd_sweep, output="out")

    p = sub.add_parser("find-ep", parents=[common], help="locate an EP by damped Newton")
    p.add_argument("--unknowns", default="a,omega_r", help="two of a, omega_r, omega_i, omega_abs")
    p.add_argument("--box", help="lo1,hi1,lo2,hi2")
    p.add_argument("--seed", help="x1,x2 (default: grid minimum of |Z^2|)")
    p.add_argument("--fix", action="append", metavar="NAME=VALUE", help="fix a parameter, e.g. a=0.5")
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_find_ep)

    p = sub.add_parser("smatrix", parents=[common], help="S-matrix and cross section on an energy grid")
    p.add_argument("--resonance", action="append", metavar="E,G", help="resonance energy and signed width")
    p.add_argument("--double-pole", nargs=2, metavar=("E_d=..", "G_d=.."))
    p.add_argument("--from-sweep", type=float, metavar="A", help="use the eigenvalues of the scenario at a=A")
    p.add_argument("--energy", nargs=3, type=float, metavar=("START", "STOP", "N"))
    p.add_argument("--features", action="store_true", help="also write features.json")
    p.set_defaults(func=cmd_smatrix, output="out")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="ep-lab: %(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"ep-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"ep-lab: no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (EpLabError, ArithmeticError) as exc:
        print(f"ep-lab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
