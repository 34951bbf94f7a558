"""Command-line entry point.

Subcommands: ``simulate``, ``check``, ``fig3``, ``poles`` and
``reproduce-all``.  Exit status is 0 on success, 2 for a bad configuration
and 3 for a file-system failure; errors are reported as one line on stderr.
"""

import argparse
import sys
from pathlib import Path

from . import experiments as ex
from . import report
from .errors import LookaheadError

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3

PROG = "lookahead-hrde"

EXTRA_PRESETS = {
    "bg-grid": {
        "condition": ["BG-Cond"],
        "k": ["2", "3", "4", "5", "6"],
        "alpha": [f"0.{i}" for i in range(1, 10)],
    },
    "qd-potential": {
        "condition": ["QD-Cond"],
        "game": ["potential:1"],
        "k": ["5"],
        "alpha": ["0.5"],
        "gamma": ["0.1", "0.2", "0.3", "0.4", "0.5", "0.6"],
    },
    "poles-gd": {"model": ["gd"], "game": ["bg:2"], "gamma": ["0.01", "0.1", "0.5", "1.0"]},
    "poles-la-bg": {
        "model": ["la-bg"],
        "game": ["bg:2"],
        "k": ["5"],
        "alpha": ["0.5", "0.9"],
        "gamma": ["0.1"],
    },
}
ALL_PRESETS = {**ex.PRESETS, **EXTRA_PRESETS}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _build_parser():
    parser = _Parser(prog=PROG, description="Lookahead min-max analysis experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (
        ("simulate", "run Lookahead-GDA over a (k, alpha, gamma) grid"),
        ("check", "evaluate a convergence condition over a grid"),
        ("fig3", "condition error across the beta game family"),
        ("poles", "dominant poles and Routh verdicts per mode"),
        ("reproduce-all", "run every preset into subdirectories of --out"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", type=Path, help="flat key = value config file")
        p.add_argument("--preset", choices=sorted(ALL_PRESETS), help="built-in configuration")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--svg", action="store_true", help="also write an SVG line chart")
        p.add_argument("--seed", type=int, help="random unit-sphere start point")
    return parser


def _load(args, default_preset=None):
    raw = {}
    preset = args.preset or default_preset
    if preset:
        raw.update({k: list(v) for k, v in ALL_PRESETS[preset].items()})
    if args.config is not None:
        # Keys from the file replace the preset's keys wholesale.
        raw.update(ex.parse_config_text(args.config.read_text(encoding="utf-8")))
    return ex.build_config(raw, seed=args.seed)


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(path)


def run_simulate(cfg, out, svg):
    game, results = ex.simulate(cfg)
    header = report.trajectory_header(game.half_dim)
    for res in results:
        _write(out / f"trajectory_{res.run_id}.csv", report.render_csv(header, report.trajectory_rows(res.run_id, res.record)))
    summary = [report.summary_row(r, cfg.n_outer) for r in results]
    _write(out / "summary.csv", report.render_csv(report.SUMMARY_HEADER, summary))
    if svg:
        series = {
            f"k={r.k} alpha={r.alpha:g} gamma={r.gamma:g}": (
                list(range(len(r.record.distances))),
                [float(d) for d in r.record.distances],
            )
            for r in results
        }
        chart = report.line_chart(series, "Distance to equilibrium", "outer iteration", "distance")
        _write(out / "simulate.svg", chart)


def run_check(cfg, out, svg):
    reports = ex.check(cfg)
    _write(out / "conditions.csv", report.render_csv(report.CONDITIONS_HEADER, map(report.condition_row, reports)))


def run_fig3(cfg, out, svg):
    rows = ex.fig3(cfg)
    _write(out / "fig3.csv", report.render_csv(report.FIG3_HEADER, map(report.fig3_row, rows)))
    if svg:
        series = {}
        for r in rows:
            xs, ys = series.setdefault(r.condition, ([], []))
            xs.append(r.beta)
            ys.append(r.error)
        chart = report.line_chart(series, "Condition error", "beta", "d(gamma) - d(1.5 gamma)")
        _write(out / "fig3.svg", chart)


def run_poles(cfg, out, svg):
    rows = ex.poles(cfg)
    _write(out / "stability.csv", report.render_csv(report.STABILITY_HEADER, map(report.pole_row, rows)))


RUNNERS = {"simulate": run_simulate, "check": run_check, "fig3": run_fig3, "poles": run_poles}

REPRODUCE = (
    ("fig2-left", "simulate"),
    ("fig2-right", "simulate"),
    ("fig3", "fig3"),
    ("bg-grid", "check"),
    ("qd-potential", "check"),
    ("poles-gd", "poles"),
    ("poles-la-bg", "poles"),
)


def _dispatch(args):
    if args.command == "reproduce-all":
        for preset, command in REPRODUCE:
            sub = argparse.Namespace(**{**vars(args), "preset": preset, "config": None})
            RUNNERS[command](_load(sub), args.out / preset, args.svg)
        return
    default = "fig3" if args.command == "fig3" else None
    RUNNERS[args.command](_load(args, default), args.out, args.svg)


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
        _dispatch(args)
    except _Usage as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LookaheadError, ValueError) as exc:
        print(f"{PROG}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"{PROG}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
