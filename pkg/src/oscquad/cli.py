"""Command-line entry point.

Exit status: 0 on success, 1 on invalid arguments, 2 on numeric failure.
Data goes to stdout (or ``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import pipelines
from .engine import SUMMATIONS, TAILS, PanelScheme
from .errors import InvalidArgumentError, NumericError
from .rules import gauss_legendre
from .sweep import STDOUT, emit_report, load_spec, make_row, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

_INNER = {"closed": "closed-form", "prefix": "quadrature-prefix"}
_INNER_MODE = {"exact": "exact-prefix", "emulate": "slot-boundary-emulation"}
_DEFAULT_UMAX = {
    "dirichlet": 2e6,
    "fresnel": 1e6,
    "bracket": 1e6,
    "identity": 1e5,
    "in": {1: 1e5, 2: 1e6, 3: 1e5},
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--umax", type=float, default=None, help="truncation bound of the half-line")
    p.add_argument("--order", type=int, default=10, help="Gauss-Legendre order per panel (1-64)")
    p.add_argument("--panel-width", type=float, default=1.0)
    p.add_argument("--summation", choices=SUMMATIONS, default="compensated")
    p.add_argument("--tail", choices=TAILS, default="truncate")
    p.add_argument("--inner", choices=sorted(_INNER), default="prefix", help="source of inner integrals")
    p.add_argument("--inner-mode", choices=sorted(_INNER_MODE), default="exact")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None, help="output path, '-' for stdout")
    p.add_argument("--timing", action="store_true", help="record wall-clock time in elapsed_ms")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oscquad", description="Composite Gauss-Legendre evaluation of oscillatory integrals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    shared = _shared()

    rules = sub.add_parser("rules", help="print Gauss-Legendre nodes and weights")
    rules.add_argument("--order", type=int, required=True)
    rules.add_argument("--format", choices=("csv", "json"), default="csv")
    rules.add_argument("--out", default=STDOUT)

    sub.add_parser("dirichlet", parents=[shared], help="integral of sin(u)/u")
    sub.add_parser("fresnel", parents=[shared], help="integral of sin(w^2/4)/w")
    ident = sub.add_parser("identity", parents=[shared], help="two-term triangular identity")
    ident.add_argument("--form", choices=("A", "B"), default="A")
    sub.add_parser("bracket", parents=[shared], help="product of the two curly brackets")
    tier = sub.add_parser("in", parents=[shared], help="tier I_n for n in 1, 2, 3")
    tier.add_argument("--n", type=int, required=True, choices=(1, 2, 3))
    sweep = sub.add_parser("sweep", parents=[shared], help="run a convergence sweep from a spec file")
    sweep.add_argument("--spec", required=True, help="path of a key = value sweep spec")
    return parser


def _write(text: str, out: str) -> None:
    if out in (None, STDOUT):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _cmd_rules(args) -> None:
    rule = gauss_legendre(args.order)
    if args.format == "json":
        text = json.dumps({"order": rule.order, "nodes": rule.nodes.tolist(), "weights": rule.weights.tolist()}, indent=2)
        _write(text + "\n", args.out)
        return
    lines = ["index,node,weight"]
    lines += [f"{i},{x:.17g},{w:.17g}" for i, (x, w) in enumerate(zip(rule.nodes, rule.weights))]
    _write("\n".join(lines) + "\n", args.out)


def _single(args) -> None:
    command = args.command
    default = _DEFAULT_UMAX[command]
    if command == "in":
        default = default[args.n]
    u_max = args.umax if args.umax is not None else default
    scheme = PanelScheme(
        u_max=u_max,
        panel_width=args.panel_width,
        rule_order=args.order,
        summation=args.summation,
        tail=args.tail,
    )
    cfg = pipelines.PipelineConfig(scheme, inner_source=_INNER[args.inner], inner_mode=_INNER_MODE[args.inner_mode])
    form = None
    if command == "dirichlet":
        pid, result = "dirichlet", pipelines.dirichlet(cfg)
    elif command == "fresnel":
        pid, result = "fresnel_quarter", pipelines.fresnel_quarter(cfg)
    elif command == "bracket":
        pid, result = "bracket_product", pipelines.bracket_product(cfg)
    elif command == "identity":
        form = args.form
        pid, result = f"identity_form_{form.lower()}", pipelines.identity(cfg, form)
    else:
        pid, result = f"i{args.n}", pipelines.i_n(args.n, cfg)
    triangular = pid in ("identity_form_a", "identity_form_b", "i3") and cfg.inner_source == "quadrature-prefix"
    row = make_row(pid, u_max, args.order, form, cfg.inner_mode if triangular else None, result, args.timing)
    emit_report([row], args.format or "csv", args.out or STDOUT)


def _cmd_sweep(args) -> None:
    spec = load_spec(args.spec)
    overrides = {}
    if args.timing:
        overrides["timing"] = True
    rows = run_sweep(spec if not overrides else type(spec)(**{**spec.__dict__, **overrides}))
    emit_report(rows, args.format or spec.output, args.out or spec.output_path)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "rules":
            _cmd_rules(args)
        elif args.command == "sweep":
            _cmd_sweep(args)
        else:
            _single(args)
    except _UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (InvalidArgumentError, OSError) as exc:
        print(f"oscquad: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, FloatingPointError, OverflowError) as exc:
        print(f"oscquad: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
