"""Command line entry point.

Exit status: 0 success, 1 inconsistent or rejected input, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import enumeration
from .bench import METHODS, parse_method, run_bench
from .bnb import SolverConfig, solve
from .encoders import (encode_atom, encode_mip, encode_symbol_binary, encode_symbol_unary,
                       encode_wcsp, to_pseudo_boolean, write_model)
from .instances import (CatalogueSpec, FspError, Instance, SubscriptionSpec, format_relaxation,
                        gen_catalogue, gen_subscription, manifest, parse_relaxation, read_fsp,
                        write_fsp)
from .model import (InconsistentError, MalformedError, anti_subscription, is_consistent,
                    partial_completion, verify_relaxation)
from .oracle import GuardError, brute_force_optimal
from .rng import derive_seed

OK, REJECTED, USAGE = 0, 1, 2

ENCODINGS = ("wcnf-atom", "wcnf-unary", "wcnf-binary", "opb", "lp", "wcsp")


class UsageError(Exception):
    pass


def _ints(text: str, what: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) < 3:
        raise UsageError(f"{what} needs three comma separated fields, got {text!r}")
    return parts


def _catalogue_spec(text: str) -> CatalogueSpec:
    f, b, *types = _ints(text, "--catalogue")
    try:
        return CatalogueSpec(int(f), int(b), tuple(t for t in types if t))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sub_spec(text: str) -> SubscriptionSpec:
    parts = _ints(text, "--sub")
    try:
        return SubscriptionSpec(*(int(p) for p in parts[:3]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt_order(order) -> str:
    return " ".join(map(str, order))


def cmd_gen(args) -> int:
    cspec, sspec = _catalogue_spec(args.catalogue), _sub_spec(args.sub)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cat = gen_catalogue(cspec, args.seed)
    try:
        sspec.check(cat)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for k in range(args.count):
        seed = derive_seed(args.seed, k + 1)
        name = f"inst_{k:03d}"
        sub = gen_subscription(cat, sspec, seed)
        (out / f"{name}.fsp").write_text(write_fsp(Instance(sub, name=name)))
        (out / f"{name}.manifest").write_text(manifest(cspec, sspec, args.seed, seed))
    print(f"wrote {args.count} instances to {out}")
    return OK


def cmd_check(args) -> int:
    ok, order = is_consistent(read_fsp(args.file).subscription)
    if not ok:
        print("inconsistent")
        return REJECTED
    print("consistent")
    print("order " + _fmt_order(order))
    return OK


def cmd_complete(args) -> int:
    sub = read_fsp(args.file).subscription
    closure = partial_completion(sub)
    for i, j in sorted(closure - sub.hard - sub.user):
        print(f"implied {i} {j}")
    print("order " + _fmt_order(is_consistent(sub)[1]))
    return OK


def cmd_antisub(args) -> int:
    anti = anti_subscription(read_fsp(args.file).subscription)
    print(" ".join(["features", *map(str, sorted(anti.features))]))
    for i, j in sorted(anti.precs):
        print(f"prec {i} {j}")
    return OK


def cmd_enumerate(args) -> int:
    inst = read_fsp(args.file)
    bi = inst.to_bi()
    pairs = enumeration.get_solutions(bi, args.limit)
    if args.rank:
        pairs = enumeration.rank_pairs(inst.subscription.catalogue, bi, pairs)
    count = 0
    for p in pairs:
        print(f"source {_fmt_order(p.source_order)} | target {_fmt_order(p.target_order)}")
        count += 1
    print(f"# {count} pairs")
    return OK


def cmd_relax(args) -> int:
    sub = read_fsp(args.file).subscription
    if args.method == "oracle":
        _, relax = brute_force_optimal(sub)
        done = True
    else:
        relax, stats = solve(sub, SolverConfig(args.method, args.heuristic, args.time_limit))
        done = stats.completed
    text = format_relaxation(relax)
    if not done:
        text = "# search stopped at the limit; best found so far\n" + text
    sys.stdout.write(text)
    return OK


def cmd_verify(args) -> int:
    sub = read_fsp(args.file).subscription
    relax = parse_relaxation(Path(args.relaxation).read_text())
    ok, info = verify_relaxation(sub, relax)
    if not ok:
        print(f"invalid: {info}")
        return REJECTED
    if info != relax.value:
        print(f"invalid: stated value {relax.value} but the relaxation is worth {info}")
        return REJECTED
    print(f"valid value {info}")
    return OK


def build_model(sub, target: str, reduced: bool):
    if target == "wcnf-atom":
        return encode_atom(sub, reduced), "wcnf"
    if target == "wcnf-unary":
        return encode_symbol_unary(sub), "wcnf"
    if target == "wcnf-binary":
        return encode_symbol_binary(sub), "wcnf"
    if target == "opb":
        return to_pseudo_boolean(encode_atom(sub, reduced)), "opb"
    if target == "lp":
        return encode_mip(sub), "lp"
    return encode_wcsp(sub), "wcsp"


def cmd_encode(args) -> int:
    sub = read_fsp(args.file).subscription
    model, fmt = build_model(sub, args.to, args.reduced)
    Path(args.out).write_bytes(write_model(model, fmt))
    return OK


def cmd_bench(args) -> int:
    methods = [m for m in args.methods.split(",") if m]
    try:
        for m in methods:
            parse_method(m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not methods:
        raise UsageError("no methods given")
    if not any(Path(args.dir).glob("*.fsp")):
        raise UsageError(f"no .fsp files in {args.dir}")
    report = run_bench(args.dir, methods, args.time_limit)
    Path(args.report).write_text(report.to_csv())
    for r in report.means:
        print(f"{r.method:8} {r.heuristic:9} mean nodes {r.nodes:10.1f}  mean ms {r.ms:9.2f}")
    if not report.agree:
        print("optimum disagreement on: " + ", ".join(report.disagreements))
        return REJECTED
    return OK


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="featsub", description="Feature subscription toolkit")
    sp = p.add_subparsers(dest="command", required=True)

    g = sp.add_parser("gen", help="generate random instances")
    g.add_argument("--catalogue", required=True, help="f,B,types e.g. 50,250,<,>")
    g.add_argument("--sub", required=True, help="f,p,w e.g. 20,10,4")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_gen)

    for name, fn, helptext in [("check", cmd_check, "consistency check with a witness order"),
                               ("complete", cmd_complete, "implied precedences and a total order"),
                               ("antisub", cmd_antisub, "anti-subscription of a consistent instance")]:
        c = sp.add_parser(name, help=helptext)
        c.add_argument("file")
        c.set_defaults(fn=fn)

    e = sp.add_parser("enumerate", help="compatible source/target order pairs")
    e.add_argument("file")
    e.add_argument("--limit", type=int)
    e.add_argument("--rank", action="store_true")
    e.set_defaults(fn=cmd_enumerate)

    r = sp.add_parser("relax", help="optimal relaxation")
    r.add_argument("file")
    r.add_argument("--method", choices=METHODS, default="rsac")
    r.add_argument("--heuristic", choices=("dom-deg", "dom-wdeg"), default="dom-wdeg")
    r.add_argument("--time-limit", type=float, default=60.0)
    r.set_defaults(fn=cmd_relax)

    v = sp.add_parser("verify", help="check a relaxation file against an instance")
    v.add_argument("file")
    v.add_argument("relaxation")
    v.set_defaults(fn=cmd_verify)

    en = sp.add_parser("encode", help="write a solver input file")
    en.add_argument("file")
    en.add_argument("--to", required=True, choices=ENCODINGS)
    en.add_argument("--reduced", action="store_true")
    en.add_argument("--out", required=True)
    en.set_defaults(fn=cmd_encode)

    b = sp.add_parser("bench", help="run methods over a directory of .fsp files")
    b.add_argument("dir")
    b.add_argument("--methods", default="ac,rsac,sac,softprec")
    b.add_argument("--report", required=True)
    b.add_argument("--time-limit", type=float, default=60.0)
    b.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"featsub: {exc}", file=sys.stderr)
        return USAGE
    except (FspError, MalformedError, GuardError, OSError) as exc:
        print(f"featsub: {exc}", file=sys.stderr)
        return USAGE
    except InconsistentError as exc:
        print(f"inconsistent: {exc}")
        return REJECTED


if __name__ == "__main__":
    sys.exit(main())
