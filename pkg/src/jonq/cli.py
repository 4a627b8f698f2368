"""Command-line entry point.

    jonq sequence    INSTANCE   print h_1..h_L with bidegrees
    jonq rees        INSTANCE   print every generator of the Rees ideal
    jonq implicitize INSTANCE   print the implicit equation (or 'dominant')
    jonq betti       INSTANCE   print the Betti table of the symmetric algebra
    jonq report      INSTANCE   print the dimension/depth/CM report
    jonq verify      INSTANCE   run the full identity suite
    jonq oracle OP   INSTANCE   run gb | saturate | eliminate | dim | colon
                                on a named generator set (--set, --by)

Instance files are line-oriented `key = value` (mode, n, field, f, g).
Exit codes: 0 success, 1 validation error, 2 verification failure,
3 resource limit.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import analysis, downgrade, maps, oracle
from .errors import (
    InstanceFormatError,
    InternalInvariantViolation,
    JonqError,
    NotPrincipal,
    ResourceLimit,
)
from .poly import GF, QQ, RingSpec, format_poly, parse_poly

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_RESOURCE = 3

_VERBS = ("sequence", "rees", "implicitize", "betti", "report", "verify", "oracle")
_ORACLE_OPS = ("gb", "saturate", "eliminate", "dim", "colon")
_SET_NAMES = ("minors", "L", "J", "K", "m")


@dataclass(frozen=True)
class Command:
    verb: str
    path: str
    field_override: str | None = None
    seed: int = 0
    budget: int | None = None
    json_output: bool = False
    corrupt: bool = False
    oracle_op: str | None = None
    set_name: str = "J"
    by_name: str = "m"
    order_kind: str = "grevlex"


@dataclass
class RunResult:
    exit_code: int
    document: str = ""
    diagnostics: str = ""


def _parse_field(text):
    text = text.strip()
    if text == "Q":
        return QQ
    if text.startswith("Fp"):
        rest = text[2:].lstrip("= ").strip()
        if not rest.isdigit():
            raise ValueError(f"bad field spec {text!r}")
        return GF(int(rest))
    raise ValueError(f"bad field spec {text!r}")


def load_instance(path, field_override=None):
    """Read and validate a line-oriented instance file."""
    keys = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InstanceFormatError(f"expected 'key = value', got {line!r}", lineno)
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in ("mode", "n", "field", "f", "g"):
                raise InstanceFormatError(f"unknown key {key!r}", lineno)
            if key in keys:
                raise InstanceFormatError(f"duplicate key {key!r}", lineno)
            keys[key] = (value, lineno)
    for required in ("mode", "n", "field", "f", "g"):
        if required not in keys:
            raise InstanceFormatError(f"missing `{required} =` line", 0)
    mode = keys["mode"][0]
    if mode not in ("standard", "generalized"):
        raise InstanceFormatError(f"mode must be standard|generalized, got {mode!r}", keys["mode"][1])
    if not keys["n"][0].isdigit():
        raise InstanceFormatError(f"n must be an integer, got {keys['n'][0]!r}", keys["n"][1])
    n = int(keys["n"][0])
    try:
        fld = _parse_field(field_override or keys["field"][0])
    except ValueError as exc:
        raise InstanceFormatError(str(exc), keys["field"][1]) from None
    ring = RingSpec(mode, n, fld)
    f = parse_poly(keys["f"][0], ring)
    g = parse_poly(keys["g"][0], ring)
    return maps.validate_map(ring, f, g)


def _named_set(name, map_):
    if name == "minors":
        return downgrade.minors_generators(map_.ring)
    if name == "L":
        return downgrade.symmetric_ideal(map_)
    if name == "J":
        return downgrade.rees_ideal(map_)
    if name == "K":
        return downgrade.k_ideal(map_.ring)
    if name == "m":
        return downgrade.maximal_ideal(map_.ring)
    raise ValueError(f"unknown generator set {name!r}")


def _budget(cmd):
    if cmd.budget is None:
        return oracle.Budget()
    return oracle.Budget(max_pairs=cmd.budget)


def run(cmd):
    """Execute one command; never raises for expected error classes."""
    try:
        return _dispatch(cmd)
    except ResourceLimit as exc:
        return RunResult(EXIT_RESOURCE, diagnostics=f"resource-limit: {exc}")
    except (InternalInvariantViolation, NotPrincipal) as exc:
        return RunResult(EXIT_VERIFICATION, diagnostics=f"identity-failure: {exc}")
    except (JonqError, OSError, ValueError) as exc:
        return RunResult(EXIT_VALIDATION, diagnostics=f"invalid: {exc}")


def _dispatch(cmd):
    map_ = load_instance(cmd.path, cmd.field_override)
    if cmd.verb == "sequence":
        return _run_sequence(cmd, map_)
    if cmd.verb == "rees":
        return _run_rees(cmd, map_)
    if cmd.verb == "implicitize":
        return _run_implicitize(cmd, map_)
    if cmd.verb == "betti":
        return _run_betti(cmd, map_)
    if cmd.verb == "report":
        return _run_report(cmd, map_)
    if cmd.verb == "verify":
        return _run_verify(cmd, map_)
    if cmd.verb == "oracle":
        return _run_oracle(cmd, map_)
    raise ValueError(f"unknown verb {cmd.verb!r}")


def _run_sequence(cmd, map_):
    seq = downgrade.downgraded_sequence(map_)
    if cmd.json_output:
        doc = [
            {"i": i, "bidegree": [map_.d - i, i], "poly": format_poly(h)}
            for i, h in enumerate(seq, start=1)
        ]
        return RunResult(EXIT_OK, json.dumps({"sequence": doc}, indent=2))
    lines = [
        f"h{i} ({map_.d - i},{i}) = {format_poly(h)}" for i, h in enumerate(seq, start=1)
    ]
    return RunResult(EXIT_OK, "\n".join(lines))


def _run_rees(cmd, map_):
    gens = downgrade.rees_ideal(map_).gens
    if cmd.json_output:
        return RunResult(EXIT_OK, json.dumps({"generators": [format_poly(g) for g in gens]}, indent=2))
    return RunResult(EXIT_OK, "\n".join(format_poly(g) for g in gens))


def _run_implicitize(cmd, map_):
    eq = downgrade.implicit_equation(map_)
    text = eq if eq == downgrade.DOMINANT else format_poly(eq)
    if cmd.json_output:
        return RunResult(EXIT_OK, json.dumps({"implicit_equation": text}))
    return RunResult(EXIT_OK, text)


def _run_betti(cmd, map_):
    if map_.ring.mode != "standard":
        return RunResult(
            EXIT_VALIDATION,
            diagnostics="invalid: the Betti table formula applies to standard mode only",
        )
    table = analysis.betti_table(map_.ring.n, map_.d)
    if cmd.json_output:
        doc = [
            {"i": e.index, "rank": e.rank, "shift": list(e.shift)} for e in table.entries
        ]
        return RunResult(EXIT_OK, json.dumps({"betti": doc}, indent=2))
    lines = []
    for i in range(table.n + 1):
        parts = [
            f"B({e.shift[0]},{e.shift[1]})" + (f"^{e.rank}" if e.rank > 1 else "")
            for e in table.entries
            if e.index == i
        ]
        lines.append(f"F_{i} = " + " + ".join(parts))
    ranks = [table.rank(i) for i in range(table.n + 1)]
    lines.append("ranks: " + " ".join(map(str, ranks)))
    lines.append(f"alternating sum: {table.alternating_sum()}")
    return RunResult(EXIT_OK, "\n".join(lines))


def _run_report(cmd, map_):
    rep = analysis.cm_report(map_)
    if cmd.json_output:
        return RunResult(
            EXIT_OK,
            json.dumps(
                {
                    "mode": rep.mode,
                    "n": rep.n,
                    "d": rep.d,
                    "dim": rep.dim_rees,
                    "depth": rep.depth_rees,
                    "cm": rep.is_cm,
                    "almost_cm": rep.is_almost_cm,
                    "source": rep.source,
                },
                indent=2,
            ),
        )
    bound = rep.n if rep.mode == "standard" else rep.n + 1
    rel = "<=" if rep.is_cm else ">"
    text = (
        f"dim={rep.dim_rees} depth={rep.depth_rees} CM={'yes' if rep.is_cm else 'no'} "
        f"(d={rep.d} {rel} {'n' if rep.mode == 'standard' else 'n+1'}={bound}) "
        f"almostCM=yes [{rep.source}]"
    )
    return RunResult(EXIT_OK, text)


def _run_verify(cmd, map_):
    report = analysis.verify_suite(
        map_, seed=cmd.seed, budget=_budget(cmd), corrupt=cmd.corrupt
    )
    if cmd.json_output:
        doc = json.dumps(report.as_document(), indent=2)
    else:
        doc = report.as_text()
    if report.failed:
        return RunResult(EXIT_VERIFICATION, doc)
    if report.resource_limited:
        return RunResult(EXIT_RESOURCE, doc)
    return RunResult(EXIT_OK, doc)


def _run_oracle(cmd, map_):
    budget = _budget(cmd)
    base = oracle.as_handle(_named_set(cmd.set_name, map_))
    if cmd.oracle_op == "gb":
        gb = base.groebner_basis(oracle.TermOrder(cmd.order_kind), budget)
        return RunResult(EXIT_OK, "\n".join(format_poly(g) for g in gb.basis))
    if cmd.oracle_op == "saturate":
        by = oracle.as_handle(_named_set(cmd.by_name, map_))
        sat, steps = oracle.saturate(base, by, budget)
        lines = [f"steps = {steps}"] + [format_poly(g) for g in sat.gens]
        return RunResult(EXIT_OK, "\n".join(lines))
    if cmd.oracle_op == "eliminate":
        elim = oracle.eliminate_x(base, budget)
        if not elim.gens:
            return RunResult(EXIT_OK, "0")
        return RunResult(EXIT_OK, "\n".join(format_poly(g) for g in elim.gens))
    if cmd.oracle_op == "dim":
        return RunResult(EXIT_OK, str(oracle.krull_dimension(base, budget)))
    if cmd.oracle_op == "colon":
        by = oracle.as_handle(_named_set(cmd.by_name, map_))
        result = oracle.colon_ideal(base, by, budget)
        return RunResult(EXIT_OK, "\n".join(format_poly(g) for g in result.gens))
    raise ValueError(f"unknown oracle computation {cmd.oracle_op!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jonq",
        description="Implicitization of de Jonquieres maps via downgraded sequences.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in _VERBS:
        sp = sub.add_parser(verb)
        if verb == "oracle":
            sp.add_argument("oracle_op", choices=_ORACLE_OPS)
            sp.add_argument("--set", dest="set_name", choices=_SET_NAMES, default="J")
            sp.add_argument("--by", dest="by_name", choices=_SET_NAMES, default="m")
            sp.add_argument(
                "--order",
                dest="order_kind",
                choices=("grevlex", "lex", "block_eliminate_x"),
                default="grevlex",
            )
        sp.add_argument("instance", help="path to a .jonq instance file")
        sp.add_argument("--field", dest="field_override", default=None,
                        help="override the instance field: Q or Fp=<prime>")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=None,
                        help="pair-reduction budget for oracle computations")
        sp.add_argument("--json", dest="json_output", action="store_true")
        if verb == "verify":
            sp.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    return parser


def command_from_args(argv):
    args = build_parser().parse_args(argv)
    return Command(
        verb=args.verb,
        path=args.instance,
        field_override=args.field_override,
        seed=args.seed,
        budget=args.budget,
        json_output=args.json_output,
        corrupt=getattr(args, "corrupt", False),
        oracle_op=getattr(args, "oracle_op", None),
        set_name=getattr(args, "set_name", "J"),
        by_name=getattr(args, "by_name", "m"),
        order_kind=getattr(args, "order_kind", "grevlex"),
    )


def main(argv=None):
    cmd = command_from_args(argv if argv is not None else sys.argv[1:])
    result = run(cmd)
    if result.document:
        print(result.document)
    if result.diagnostics:
        print(result.diagnostics, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
