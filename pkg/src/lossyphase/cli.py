"""Command-line front end.

Every subcommand writes CSV or JSON to stdout (or ``--output``).  Exit codes:
0 success, 1 a ``reproduce`` check failed, 2 invalid arguments, 3 a
numerical-domain error.  Errors are a single ``error: kind=... message=...``
line on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from . import analytic, gaussian, imperfect, network
from .channels import DomainError, LossyPhase
from .reproduce import TARGETS, reproduce
from .specfun import constants

OUTPUT_DIR_ENV = "LOSSYPHASE_OUTPUT_DIR"
SIG_DIGITS = 12

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- formatting -------------------------------------------------------------


def fmt_number(x: Any) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        s = format(float(x), f".{SIG_DIGITS}g")
        if not any(ch in s for ch in ".en"):
            s += ".0"
        return s
    return str(x.value if hasattr(x, "value") else x)


def _json_value(x: Any) -> Any:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), f".{SIG_DIGITS}g"))
    return x.value if hasattr(x, "value") else x


def render(rows: Sequence[dict], columns: Sequence[str], fmt: str, single: bool = False) -> str:
    if fmt == "json":
        data = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        return json.dumps(data[0] if single and len(data) == 1 else data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt_number(r.get(c)) for c in columns])
    return buf.getvalue()


# -- argument helpers -------------------------------------------------------


def parse_grid(text: str) -> list[float]:
    """``a:b:n`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return [float(v) for v in np.round(np.linspace(float(a), float(b), int(n)), 12)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: expected a:b:n or a comma list") from exc


def _etas(args) -> list[float]:
    if getattr(args, "grid", None):
        return args.grid
    if args.eta is None:
        raise UsageError("either --eta or --grid is required")
    return [args.eta]


# -- subcommand handlers ----------------------------------------------------
# Each returns (rows, columns, single_record).

ANALYTIC_COLUMNS = ("eta", "strategy", "k", "fisher_per_lost", "normalized_precision")


def cmd_constants(args):
    return [constants().as_dict()], tuple(constants().as_dict()), True


def cmd_classical_mp(args):
    rows = []
    for eta in _etas(args):
        limit = analytic.quantum_bound_limit(eta, args.mode)
        if args.k is not None:
            k, value = args.k, analytic.classical_fpl(eta, args.k, args.mode)
        else:
            ev = analytic.classical_fpl_opt(eta, args.mode, args.discrete)
            k, value = ev.k, ev.fisher_per_lost
        rows.append({"eta": eta, "strategy": "classical_mp", "k": k, "fisher_per_lost": value,
                     "normalized_precision": math.sqrt(value / limit)})
    return rows, ANALYTIC_COLUMNS, len(rows) == 1


def cmd_quantum_bound(args):
    rows = []
    for eta in _etas(args):
        limit = analytic.quantum_bound_limit(eta, args.mode)
        if args.k is not None:
            row = {"strategy": "quantum_bound_mp", "k": args.k,
                   "fisher_per_lost": analytic.quantum_bound_fpl(eta, args.k, args.mode)}
        elif args.discrete:
            ev = analytic.quantum_bound_discrete_opt(eta, args.mode)
            row = {"strategy": "quantum_bound_mp", "k": ev.k, "fisher_per_lost": ev.fisher_per_lost}
        else:
            row = {"strategy": "quantum_bound_limit", "k": None, "fisher_per_lost": limit}
        row.update(eta=eta, normalized_precision=math.sqrt(row["fisher_per_lost"] / limit))
        rows.append(row)
    return rows, ANALYTIC_COLUMNS, len(rows) == 1


def cmd_advantage(args):
    rows = []
    for eta in _etas(args):
        ratio = analytic.advantage_ratio(eta, args.discrete, args.normalization)
        rows.append({"eta": eta, "discrete": args.discrete, "normalization": args.normalization,
                     "ratio": ratio, "rmse_reduction": 1.0 - ratio})
    return rows, ("eta", "discrete", "normalization", "ratio", "rmse_reduction"), len(rows) == 1


def cmd_fig2a(args):
    grid = args.grid or parse_grid("0.01:0.99:99")
    rows = analytic.fig2a_scan(grid, args.strategies, args.mode, args.quantum_k, args.h_max)
    return [asdict(r) for r in rows], ANALYTIC_COLUMNS, False


def cmd_gaussian_fisher(args):
    eta = args.eta
    if args.nsq is not None:
        value = gaussian.scheme_fpl_limit(args.nsq, eta)
        row = {"eta": eta, "n_sq": args.nsq, "fisher_per_lost_limit": value,
               "ratio_to_qsm": value / network.q_sm_single_pass(eta)}
        return [row], tuple(row), True
    if args.n is not None:
        opt = gaussian.optimal_nsq_fixed_n(eta, args.n)
        row = {"eta": eta, "n": args.n, "n_sq": opt.n_sq, "fisher": opt.fisher}
        return [row], tuple(row), True
    if args.alpha is None or args.r is None:
        raise UsageError("gaussian-fisher needs --nsq, --n, or both --alpha and --r")
    params = gaussian.GaussianSchemeParams(args.alpha, args.r)
    fisher = gaussian.scheme_fisher(args.alpha, args.r, eta)
    lost = params.n_total * (1.0 - eta)
    row = {"eta": eta, "alpha": args.alpha, "r": args.r, "n_sq": params.n_sq,
           "n_total": params.n_total, "fisher": fisher,
           "fisher_per_lost": fisher / lost if lost > 0 else None}
    return [row], tuple(row), True


def cmd_fig2b(args):
    grid = args.grid or parse_grid("0.1:0.9:9")
    rows = []
    for eta in grid:
        req = gaussian.required_squeezing_db(eta)
        rows.append({"eta": eta, "n_sq": req and req.n_sq, "r": req and req.r,
                     "squeezing_db": req and req.squeezing_db})
    return rows, ("eta", "n_sq", "r", "squeezing_db"), False


def cmd_network_eval(args):
    cfg = network.NetworkConfig(h=args.h, k=args.k, xi=args.xi, phi_control=args.phi, eta=args.eta)
    value = network.network_fpl(cfg, args.theta)
    row = {"eta": cfg.eta, "h": cfg.h, "k": cfg.k, "xi": cfg.xi, "phi": cfg.phi_control,
           "fisher_per_lost": value, "ratio": value / network.q_sm_single_pass(cfg.eta)}
    return [row], tuple(row), True


def cmd_network_opt(args):
    if args.continuous:
        h_max = args.h_max or 2048
        res = network.optimize_network_continuous(
            h_grid=network.default_h_grid(h_max, args.h_points), xi_min=args.xi_min
        )
        row = {"gamma": res.gamma, "h": res.h, "h_xi": res.h_xi, "ratio": res.ratio_to_qsm_limit}
        return [row], ("gamma", "h", "h_xi", "ratio"), True
    rows = []
    for eta in _etas(args):
        res = network.optimize_network(
            eta, h_max=args.h_max or 64, xi_min=args.xi_min, search=args.search, free_phi=args.free_phi
        )
        rows.append({"eta": eta, "h": res.cfg.h, "h_xi": res.h_xi if res.cfg.h > 1 else None,
                     "phi": res.cfg.phi_control, "ratio": res.ratio_to_qsm})
    return rows, ("eta", "h", "h_xi", "ratio", "phi"), len(rows) == 1


def cmd_imperfect_advantage(args):
    b = imperfect.ImperfectionBudget(args.eta_p, args.eta_r, args.eta_m)
    res = imperfect.advantage(args.eta, b)
    row = {"eta": args.eta, "eta_p": b.eta_p, "eta_r": b.eta_r, "eta_m": b.eta_m, **asdict(res)}
    return [row], tuple(row), True


def cmd_fig4_surface(args):
    n = 150 if args.full else args.grid_n
    axis = imperfect.default_surface_axis(n)
    cells = imperfect.surface_grid(axis, axis, args.precision)
    return [asdict(c) for c in cells], ("eta", "eta_pm", "threshold_eta_r"), False


def cmd_reproduce(args):
    options = {"grid_n": args.grid_n} if args.target == "fig4" else {}
    report = reproduce(args.target, **options)
    out_dir = Path(args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or ".")
    if report.rows and not args.no_data:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{args.target}.csv").write_text(render(report.rows, report.columns, "csv"))
    lines = [c.line() for c in report.checks]
    lines.append(f"{'PASS' if report.passed else 'FAIL'} {args.target} "
                 f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks")
    return report, "\n".join(lines) + "\n"


# -- parser -----------------------------------------------------------------


@dataclass
class RunConfig:
    """A fully specified invocation; replaying it reproduces the output exactly."""

    subcommand: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_format: Optional[str] = None
    output_path: Optional[str] = None


_HANDLERS = {}


def _sub(subparsers, name, handler, help_, fmt_default="csv"):
    p = subparsers.add_parser(name, help=help_, description=help_)
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default, help="output format")
    p.add_argument("--output", help=f"output file (relative paths resolve against ${OUTPUT_DIR_ENV})")
    p.add_argument("--dump-config", action="store_true", help="print the run config as JSON and exit")
    _HANDLERS[name] = handler
    return p


def _eta_args(p, grid=True):
    p.add_argument("--eta", type=float, help="intrinsic per-pass transmissivity")
    if grid:
        p.add_argument("--grid", type=parse_grid, help="eta grid, a:b:n or comma list")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lossyphase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    _sub(sub, "constants", cmd_constants, "Lambert-W constants of the classical optimum", "json")

    p = _sub(sub, "classical-mp", cmd_classical_mp, "classical multi-pass QFI per lost photon")
    _eta_args(p)
    p.add_argument("--k", type=float, help="pass count (default: optimal)")
    p.add_argument("--mode", choices=("sm", "tm"), default="tm")
    p.add_argument("--discrete", action="store_true", help="restrict the optimum to integer k")

    p = _sub(sub, "quantum-bound", cmd_quantum_bound, "quantum bound on QFI per lost photon")
    _eta_args(p)
    p.add_argument("--k", type=float, help="pass count (default: the k -> 0 limit)")
    p.add_argument("--mode", choices=("sm", "tm"), default="tm")
    p.add_argument("--discrete", action="store_true", help="best integer k instead of the limit")

    p = _sub(sub, "advantage", cmd_advantage, "quantum/classical RMSE ratio")
    _eta_args(p)
    p.add_argument("--discrete", action="store_true")
    p.add_argument("--normalization", choices=("continuous", "discrete"), default="continuous",
                   help="quantum reference for --discrete")

    p = _sub(sub, "fig2a", cmd_fig2a, "normalized precision of each strategy over an eta grid")
    p.add_argument("--grid", type=parse_grid, help="eta grid (default 0.01:0.99:99)")
    p.add_argument("--mode", choices=("sm", "tm"), default="sm")
    p.add_argument("--strategies", type=lambda s: [x for x in s.split(",") if x],
                   default=["classical_continuous", "classical_discrete", "quantum_discrete"],
                   help=f"comma list from {','.join(analytic.FIG2A_STRATEGIES)}")
    p.add_argument("--quantum-k", type=int, default=1)
    p.add_argument("--h-max", type=int, default=64, help="h range for the network strategy")

    p = _sub(sub, "gaussian-fisher", cmd_gaussian_fisher, "homodyne Fisher information of the squeezed probe", "json")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--nsq", type=float, help="squeezing photons; large-N per-lost-photon limit")
    p.add_argument("--n", type=float, help="total photons; optimal squeezing share")

    p = _sub(sub, "fig2b", cmd_fig2b, "squeezing needed to match the classical optimum")
    p.add_argument("--grid", type=parse_grid, help="eta grid (default 0.1:0.9:9)")

    p = _sub(sub, "network-eval", cmd_network_eval, "QFI per lost photon of one interferometer", "json")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--xi", type=float, required=True, help="beam-splitter angle (rad)")
    p.add_argument("--phi", type=float, default=0.0, help="control phase (rad)")
    p.add_argument("--theta", type=float, default=0.0, help="per-pass phase (rad)")

    p = _sub(sub, "network-opt", cmd_network_opt, "optimize the interferometer", "json")
    _eta_args(p)
    p.add_argument("--h-max", type=int, help="largest h (default 64, or 2048 with --continuous)")
    p.add_argument("--h-points", type=int, default=48, help="h grid size for --continuous")
    p.add_argument("--continuous", action="store_true", help="optimize over continuous total transmissivity")
    p.add_argument("--free-phi", action="store_true", help="optimize the control phase too")
    p.add_argument("--xi-min", type=float, default=network.XI_MIN_TABLE, help="lower edge of h*xi")
    p.add_argument("--search", choices=network.SEARCH_MODES, default="small-mixing")

    p = _sub(sub, "imperfect-advantage", cmd_imperfect_advantage, "advantage with extra losses", "json")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--eta-p", type=float, default=1.0)
    p.add_argument("--eta-r", type=float, default=1.0)
    p.add_argument("--eta-m", type=float, default=1.0)

    p = _sub(sub, "fig4-surface", cmd_fig4_surface, "round-trip threshold surface")
    p.add_argument("--grid-n", type=int, default=10)
    p.add_argument("--full", action="store_true", help="150x150 grid (tens of minutes)")
    p.add_argument("--precision", type=float, default=imperfect.DEFAULT_PRECISION)

    p = _sub(sub, "reproduce", cmd_reproduce, "re-run a campaign and check it against golden values")
    p.add_argument("target", choices=TARGETS)
    p.add_argument("--grid-n", type=int, default=10, help="fig4 grid size")
    p.add_argument("--output-dir", help=f"where data files go (default ${OUTPUT_DIR_ENV} or .)")
    p.add_argument("--no-data", action="store_true", help="skip writing the data file")

    p = sub.add_parser("run", help="replay a JSON run config", description="replay a JSON run config")
    p.add_argument("config", help="path to a JSON RunConfig")
    return parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102
        raise UsageError(message)


_SKIP = {"subcommand", "format", "output", "dump_config"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(args).items() if k not in _SKIP}
    return RunConfig(args.subcommand, params, args.format, args.output)


def args_from_config(cfg: RunConfig, parser: argparse.ArgumentParser) -> argparse.Namespace:
    sub = _subparser(parser, cfg.subcommand)
    known = {a.dest for a in sub._actions} - {"help"} - _SKIP
    unknown = set(cfg.parameters) - known
    if unknown:
        raise UsageError(f"unknown parameters for {cfg.subcommand}: {sorted(unknown)}")
    argv = [cfg.subcommand]
    positional = [a for a in sub._actions if not a.option_strings and a.dest in cfg.parameters]
    for a in positional:
        argv.append(str(cfg.parameters[a.dest]))
    ns = parser.parse_args(argv + _required_placeholders(sub, cfg.parameters))
    for key, value in cfg.parameters.items():
        setattr(ns, key, value)
    if cfg.output_format is not None:
        ns.format = cfg.output_format
    ns.output = cfg.output_path
    return ns


def _required_placeholders(sub, params) -> list[str]:
    out = []
    for a in sub._actions:
        if a.required and a.option_strings and a.dest in params:
            out += [a.option_strings[0], "0"]
        elif a.required and a.option_strings:
            raise UsageError(f"missing parameter {a.dest}")
    return out


def _subparser(parser, name):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            if name not in action.choices or name == "run":
                raise UsageError(f"unknown subcommand {name!r}")
            return action.choices[name]
    raise UsageError("parser has no subcommands")


def load_config(path: str) -> RunConfig:
    data = json.loads(Path(path).read_text())
    allowed = {"subcommand", "parameters", "output_format", "output_path"}
    extra = set(data) - allowed
    if extra:
        raise UsageError(f"unknown config keys: {sorted(extra)}")
    if "subcommand" not in data:
        raise UsageError("config lacks 'subcommand'")
    return RunConfig(**data)


def _write(text: str, output: Optional[str]) -> None:
    if not output:
        sys.stdout.write(text)
        return
    path = Path(output)
    if not path.is_absolute() and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def run(args: argparse.Namespace) -> int:
    if getattr(args, "dump_config", False):
        _write(json.dumps(asdict(config_from_args(args)), indent=2, sort_keys=True) + "\n", None)
        return EXIT_OK
    handler = _HANDLERS[args.subcommand]
    if args.subcommand == "reproduce":
        report, text = handler(args)
        _write(text, args.output)
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED
    rows, columns, single = handler(args)
    _write(render(rows, columns, args.format, single), args.output)
    return EXIT_OK


def _fail(kind: str, message: str, code: int) -> int:
    msg = " ".join(str(message).split())
    sys.stderr.write(f"error: kind={kind} message={json.dumps(msg)}\n")
    return code


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
        if args.subcommand == "run":
            args = args_from_config(load_config(args.config), parser)
        return run(args)
    except UsageError as exc:
        return _fail("validation", str(exc), EXIT_USAGE)
    except DomainError as exc:
        return _fail("domain", str(exc), EXIT_DOMAIN)
    except (ValueError, TypeError, json.JSONDecodeError, OSError) as exc:
        return _fail("validation", str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
