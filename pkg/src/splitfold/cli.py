"""Command line entry point: ``splitfold <command> ...``.

Exit codes: 0 success, 2 parse or validation error, 3 resource limit,
4 property violation (including oracle disagreements).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import folds, protoforest, traintrack
from .core import FreeSplitting, format_path, parse_path
from .errors import (InapplicableError, NoWitnessError, PropertyViolation, ResourceLimitError,
                     SplitfoldError, UnsupportedConfiguration, ValidationError)
from .fixture import Fixture, emit_map, emit_splitting, load
from .oracles import SUITES

EXIT_OK, EXIT_INPUT, EXIT_LIMIT, EXIT_VIOLATION = 0, 2, 3, 4


def _fmt_word(split: FreeSplitting, w) -> str:
    return split.basis.format(w)


def _gens(split: FreeSplitting, H) -> list:
    return [_fmt_word(split, g) for g in H.generators()]


def _witness(split: FreeSplitting, w) -> dict:
    if w is None:
        return None
    U = w.expansion.total
    return {
        "kind": w.expansion.kind,
        "expansion": "\n".join(emit_splitting("U", U)),
        "lifted": format_path(w.lifted),
        "missed_natural_edge": format_path(w.missed_edge),
    }


# ---------------------------------------------------------------------------
# commands


def cmd_fill_check(args, fx: Fixture) -> dict:
    split, path = fx.path(args.path)
    rep = protoforest.fills(split, path, witness=not args.no_witness)
    nat = rep.crossing.natural.natural_edges
    return {
        "fills": rep.fills,
        "crossing_ok": rep.crossing_ok,
        "missing_natural_edges": [format_path(nat[i]) for i in rep.crossing.missing],
        "kurosh_rank": rep.kurosh,
        "rank": rep.rank,
        "support": _gens(split, rep.support.factor),
        "witness": _witness(split, rep.witness),
    }


def cmd_filling_support(args, fx: Fixture) -> dict:
    split, path = fx.path(args.path)
    sup = protoforest.filling_support(split, path)
    return {
        "support": _gens(split, sup.factor),
        "kurosh_rank": sup.kurosh,
        "overlap_subgroup": _gens(split, sup.overlap.subgroup),
        "overlap_subgroup_is_support": sup.factor == sup.overlap.subgroup,
        "certificate": sup.support.certificate,
    }


def cmd_overlap_gens(args, fx: Fixture) -> dict:
    split, path = fx.path(args.path)
    od = protoforest.overlap_generators(split, path)
    elems = od.elements()
    out = {
        "generators": _gens(split, od.subgroup),
        "rank": od.subgroup.rank,
        "overlap_set_size": len(elems),
    }
    if args.all:
        out["overlap_set"] = [_fmt_word(split, g.word) for g in elems]
    return out


def cmd_fold_factorize(args, fx: Fixture) -> dict:
    f = fx.map(args.map)
    seq = folds.fold_factorize(f)
    lines = emit_splitting("D", FreeSplitting(f.domain))
    for i, G in enumerate(seq.graphs):
        lines += emit_splitting(f"S{i}", FreeSplitting(G))
    lines += emit_splitting("C", FreeSplitting(f.codomain))
    lines += emit_map("refine", "D", "S0", seq.refine)
    for i, fold in enumerate(seq.folds, start=1):
        lines += emit_map(f"f{i}", f"S{i - 1}", f"S{i}", fold)
    lines += emit_map("final", f"S{seq.length}", "C", seq.final)
    return {"length": seq.length, "fixture": "\n".join(lines)}


def cmd_kr_trace(args, fx: Fixture) -> dict:
    f = fx.map(args.map)
    g = traintrack.map_power(f, args.iterate) if args.iterate > 1 else f
    seq = folds.fold_factorize(g)
    edge = parse_path(args.edge) if args.edge else FreeSplitting(f.domain).natural_structure().natural_edges[0]
    trace = folds.push_tile(seq, edge)
    return {
        "edge": format_path(edge),
        "iterate": args.iterate,
        "entries": [{"index": e.index, "tile": format_path(e.tile), "support_rank": e.support_rank,
                     "kurosh_rank": e.kurosh, "fills": e.fills} for e in trace.entries],
        "breakpoints": trace.breakpoints,
        "final_tile": format_path(trace.entries[-1].tile),
    }


def _fraction(x: Fraction) -> str:
    return str(x)


def cmd_tt_analyze(args, fx: Fixture) -> dict:
    f = fx.map(args.map)
    nu = Fraction(args.nu)
    res = traintrack.validate_tt(f)
    if isinstance(res, traintrack.IllegalTurn):
        return {"train_track": False, "illegal_turn": [format_path([o]) for o in res.taken],
                "steps": res.steps, "vertex": res.vertex}
    rep = traintrack.analyze(f)
    return {
        "train_track": True,
        "edges": sorted(f.domain.edge_names),
        "transition_matrix": rep.matrix,
        "lambda": {"lower": _fraction(rep.lam.lower), "upper": _fraction(rep.lam.upper),
                   "approx": round(rep.lam.approx, 12)},
        "kappa": rep.kappa,
        "omega": rep.omega,
        "first_filling": {format_path(E): k for E, k in rep.first_filling.items()},
        "mu": rep.mu,
        "nu": str(nu),
        "tau_lower": _fraction(rep.tau_lower(nu)),
        "uniform_crossing": traintrack.uniform_crossing_check(f, rep.kappa),
    }


def cmd_tt_improve(args, fx: Fixture) -> dict:
    f = fx.map(args.map)
    g, steps = traintrack.improve(f)
    lines = emit_splitting("G", FreeSplitting(g.domain)) + emit_map("improved", "G", "G", g)
    return {"steps": [[kind, what] for kind, what in steps], "fixture": "\n".join(lines)}


def cmd_expansion_search(args, fx: Fixture) -> dict:
    split, path = fx.path(args.path)
    path = split.check_canonical(path)
    stream = protoforest.expansion_enumerate(split, args.budget, args.limit)
    found = None
    for exp in stream:
        lifted, missed = exp.missed(path)
        if missed:
            found = protoforest.Witness(exp, lifted, missed[0])
            break
    return {"budget": args.budget, "examined": stream.count, "truncated": stream.truncated,
            "witness": _witness(split, found)}


def cmd_blowup_witness(args, fx: Fixture) -> dict:
    split, path = fx.path(args.path)
    w = protoforest.blowup_witness(split, path)
    return {"witness": _witness(split, w)}


def cmd_bool_exponent(args, fx: Fixture) -> dict:
    b = traintrack.bool_exponent(args.m)
    return {"m": b.m, "kappa2": b.kappa2, "kappa1": b.kappa1, "matrix": b.matrix,
            "wielandt_bound": (b.m - 1) ** 2 + 1}


def cmd_oracle_suite(args, fx: Fixture) -> dict:
    kinds = list(SUITES) if args.kind == "all" else [args.kind]
    results = []
    for k in kinds:
        fn = SUITES[k]
        kw = {"count": args.count} if args.count else {}
        if k in ("fill", "overlap", "nesting"):
            if args.n:
                kw["max_rank"] = args.n
            if args.len:
                kw["max_len"] = args.len
        results.append(fn(args.seed, **kw).as_dict())
    return {"seed": args.seed, "suites": results, "ok": all(r["ok"] for r in results)}


COMMANDS = {
    "fill-check": cmd_fill_check,
    "filling-support": cmd_filling_support,
    "overlap-gens": cmd_overlap_gens,
    "fold-factorize": cmd_fold_factorize,
    "kr-trace": cmd_kr_trace,
    "tt-analyze": cmd_tt_analyze,
    "tt-improve": cmd_tt_improve,
    "expansion-search": cmd_expansion_search,
    "blowup-witness": cmd_blowup_witness,
    "bool-exponent": cmd_bool_exponent,
    "oracle-suite": cmd_oracle_suite,
}

NO_FIXTURE = {"bool-exponent", "oracle-suite"}


PATH_HELP = {
    "fill-check": "decide whether a path fills, with a witness expansion when it does not",
    "filling-support": "free factor support of a path and its Kurosh rank",
    "overlap-gens": "group elements moving a path onto an overlapping translate",
    "blowup-witness": "expansion in which the lifted path misses a natural edge",
    "expansion-search": "enumerate small expansions and test the path in each",
}
MAP_HELP = {
    "fold-factorize": "factor a map into Stallings folds (prints a fixture)",
    "kr-trace": "Kurosh rank of a tile pushed through the fold factorization",
    "tt-analyze": "transition matrix, PF and filling exponents of a train track map",
    "tt-improve": "valence-two and invariant forest moves toward a train track",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="splitfold", description="Filling paths in free splittings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, fixture=True):
        p = sub.add_parser(name, help=help_text)
        if fixture:
            p.add_argument("fixture", nargs="*", help="fixture files (bundled corpus names also work)")
            p.add_argument("--file", action="append", default=[], help="additional fixture file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--timing", action="store_true", help="include wall-clock timing")
        return p

    for name in ("fill-check", "filling-support", "overlap-gens", "blowup-witness", "expansion-search"):
        p = add(name, PATH_HELP[name])
        p.add_argument("--path", help="path name (optional when the fixture has one path)")
        if name == "fill-check":
            p.add_argument("--no-witness", action="store_true")
        if name == "overlap-gens":
            p.add_argument("--all", action="store_true", help="list the whole overlap set")
        if name == "expansion-search":
            p.add_argument("--budget", type=int, default=2)
            p.add_argument("--limit", type=int, default=20000)
    for name in ("fold-factorize", "kr-trace", "tt-analyze", "tt-improve"):
        p = add(name, MAP_HELP[name])
        p.add_argument("--map", help="map name, or a fixture file holding one map")
        if name == "kr-trace":
            p.add_argument("--edge", help="edge path in the domain (default: first natural edge)")
            p.add_argument("--iterate", type=int, default=1)
        if name == "tt-analyze":
            p.add_argument("--nu", required=True, help="positive rational parameter")
    p = add("bool-exponent", "largest primitivity exponent of m x m Boolean matrices", fixture=False)
    p.add_argument("--m", type=int, required=True)
    p = add("oracle-suite", "randomized oracle comparisons", fixture=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="maximum rank")
    p.add_argument("--len", type=int, default=None, help="maximum path length")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--kind", choices=["all"] + list(SUITES), default="all")
    return parser


def _render(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_render(v, indent + 1))
        elif isinstance(v, str) and "\n" in v:
            lines.append(f"{pad}{k}:")
            lines.extend(pad + "  " + ln for ln in v.splitlines())
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(_render(item, indent + 1))
                lines.append("")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(ln for ln in lines if ln is not None)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    code = EXIT_OK
    try:
        fx = Fixture()
        if args.command not in NO_FIXTURE:
            files = list(args.fixture) + list(args.file)
            # --map also accepts a fixture file holding a single map
            if getattr(args, "map", None) and (args.map.endswith(".sfd") or Path(args.map).exists()):
                files.append(args.map)
                args.map = None
            if not files:
                raise ValidationError("no fixture file given")
            fx = load(files)
        result = COMMANDS[args.command](args, fx)
        if args.command == "oracle-suite" and not result["ok"]:
            code = EXIT_VIOLATION
        report = {"command": args.command, "result": result}
    except (ValidationError, InapplicableError, NoWitnessError, UnsupportedConfiguration) as exc:
        report, code = {"command": args.command, "error": str(exc), "kind": type(exc).__name__}, EXIT_INPUT
    except ResourceLimitError as exc:
        report, code = {"command": args.command, "error": str(exc), "kind": type(exc).__name__}, EXIT_LIMIT
    except (PropertyViolation, SplitfoldError) as exc:
        report, code = {"command": args.command, "error": str(exc), "kind": type(exc).__name__}, EXIT_VIOLATION
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    if args.json:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    elif "error" in report:
        out.write(f"error ({report['kind']}): {report['error']}\n")
    else:
        out.write(_render(report["result"]) + "\n")
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
