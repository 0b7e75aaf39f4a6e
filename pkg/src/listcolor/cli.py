"""Command-line front end.

Exit status is 0 when every validation passes, 1 on a failed validation or
protocol error, and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import lemmas
from .combinatorics import DEFAULT_BUDGET, cover_free_bound, greedy_cover_free, verify_cover_free
from .errors import ListColorError, ParameterError
from .generators import PROTOCOLS, synthetic_instance
from .graph_model import Instance, instance_to_dict, load_instance
from .list_framework import OVERRIDE_KEYS, Mode, derive_parameters
from .protocols import (
    RunResult,
    defective_color,
    defective_desk_parameters,
    defective_list_color,
    deg_plus_one_list_color,
    linial_for_lists,
    linial_reduce,
    lists_desk_parameters,
)
from .simulator import Accounting


def _dump(doc: object) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _overrides(args: argparse.Namespace) -> dict[str, int] | None:
    given = {key: getattr(args, key) for key in OVERRIDE_KEYS if getattr(args, key) is not None}
    if not given:
        return None
    missing = [key for key in OVERRIDE_KEYS if key not in given]
    if missing:
        raise ParameterError(f"parameter overrides need all of {', '.join(OVERRIDE_KEYS)}; missing {', '.join(missing)}")
    return given


def _types(instance: Instance) -> int:
    return len(set(zip(instance.graph.psi, instance.lists.lists)))


def _need_lists(instance: Instance, protocol: str) -> None:
    if instance.lists is None or instance.colorspace is None:
        raise ParameterError(f"{protocol} needs lists and a colorspace in the input document")


def _run_protocol(args: argparse.Namespace, instance: Instance) -> RunResult:
    protocol = args.protocol
    g = instance.graph
    common = {"accounting": args.accounting, "order_seed": args.order_seed}
    overrides = _overrides(args)
    mode = Mode(args.mode)
    if protocol == "linial-reduce":
        return linial_reduce(g, **common)
    if protocol == "defective":
        return defective_color(g, args.d, delta=args.delta, budget=args.budget, **common)
    _need_lists(instance, protocol)
    csize = instance.colorspace.size
    shortest = min(len(x) for x in instance.lists.lists)
    if protocol == "linial-lists":
        if not g.oriented:
            raise ParameterError("linial-lists needs an oriented graph")
        beta = args.beta if args.beta is not None else max(1, g.max_outdegree)
        if mode is Mode.PAPER:
            params = derive_parameters(beta, g.m, csize, Mode.PAPER)
        elif overrides is not None:
            params = derive_parameters(beta, g.m, csize, Mode.DESK, overrides)
        else:
            params = lists_desk_parameters(beta, g.m, csize, _types(instance), l0_max=shortest,
                                           budget=args.budget)
        return linial_for_lists(g, instance.lists, params, restrict_types=True, budget=args.budget, **common)
    if protocol == "defective-list":
        delta = args.delta if args.delta is not None else g.max_degree
        if mode is Mode.PAPER:
            params = derive_parameters(max(1, delta), g.m, csize, Mode.PAPER)
        elif overrides is not None:
            params = derive_parameters(max(1, delta), g.m, csize, Mode.DESK, overrides)
        else:
            params = defective_desk_parameters(delta, args.d, g.m, csize, _types(instance), l0_max=shortest)
        return defective_list_color(g, instance.lists, args.d, params, restrict_types=True, budget=args.budget,
                                    **common)
    return deg_plus_one_list_color(g, instance.lists, instance.colorspace, mode=mode,
                                   x_override=args.x_override, overrides=overrides,
                                   budget=args.budget, **common)


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "out"}
    return {k: (v.value if hasattr(v, "value") else v) for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_cover_free(args: argparse.Namespace) -> int:
    family = greedy_cover_free(args.m, args.delta, args.budget, seed=args.seed)
    report = verify_cover_free(family.sets, args.delta)
    bound = cover_free_bound(args.m, args.delta)
    ok = report.cover_free and report.max_intersection < family.z and len(family.sets) == args.m
    doc = {
        "family": family.to_dict(),
        "bound": bound,
        "verification": {
            "exhaustive": report.exhaustive,
            "coverFree": report.cover_free,
            "maxIntersection": report.max_intersection,
            "minResidual": report.min_residual,
            "witness": report.witness,
        },
    }
    if args.out:
        _write(Path(args.out), _dump(doc))
    how = "exhaustively" if report.exhaustive else "by sampling"
    print(f"universe {family.universe_size} bound {bound:.3f}")
    print(f"sets {len(family.sets)} z {family.z} max intersection {report.max_intersection}")
    print(f"cover-free {'verified' if report.cover_free else 'VIOLATED'} {how}")
    return 0 if ok else 1


def _instance(args: argparse.Namespace) -> Instance:
    if args.input:
        return load_instance(args.input)
    return synthetic_instance(args.protocol, n=args.n, seed=args.seed, delta=args.target_delta,
                              beta=args.target_beta, colorspace_size=args.colors, slack=args.slack,
                              list_size=args.list_size, pool=args.pool)


def cmd_run(args: argparse.Namespace) -> int:
    instance = _instance(args)
    try:
        result = _run_protocol(args, instance)
    except ListColorError as exc:
        print(f"verdict FAIL: {type(exc).__name__}: {exc}")
        return 1
    passed = result.report.ok and result.report.complete and result.trace.completed
    doc = result.to_dict()
    doc["config"] = _config(args)
    doc["protocol"] = args.protocol
    doc["verdict"] = "PASS" if passed else "FAIL"
    if args.out:
        out = Path(args.out)
        _write(out / "coloring.json", _dump(doc))
        _write(out / "trace.json", result.trace.to_json() + "\n")
        _write(out / "trace.csv", result.trace.to_csv())
        if not args.input:
            _write(out / "instance.json", _dump(instance_to_dict(instance.graph, instance.colorspace,
                                                                 instance.lists)))
    print(f"verdict {doc['verdict']}")
    print(f"rounds {result.trace.n_rounds}")
    print(f"max bits per node per round {result.trace.max_bits}")
    if result.palette_size is not None:
        print(f"palette {result.palette_size}")
    if not passed:
        print(f"validation {json.dumps(result.report.to_dict(), sort_keys=True)}")
    return 0 if passed else 1


def cmd_verify_lemmas(args: argparse.Namespace) -> int:
    names = list(lemmas.SUITES) if args.scope == "all" else [args.scope]
    results = lemmas.run_suites(names, args.budget)
    doc = {"suites": [r.to_dict() for r in results], "ok": all(r.ok for r in results)}
    if args.out:
        _write(Path(args.out), _dump(doc))
    for r in results:
        line = f"{r.name}: {'pass' if r.ok else 'FAIL'} ({r.checked} checks)"
        if not r.ok:
            line += f" witness {json.dumps(r.witness, sort_keys=True, default=str)}"
        print(line)
    return 0 if doc["ok"] else 1


def cmd_gen(args: argparse.Namespace) -> int:
    instance = synthetic_instance(args.kind, n=args.n, seed=args.seed, delta=args.target_delta,
                                  beta=args.target_beta, colorspace_size=args.colors, slack=args.slack,
                                  list_size=args.list_size, pool=args.pool)
    text = _dump(instance_to_dict(instance.graph, instance.colorspace, instance.lists))
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def _add_generation(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("synthetic instances")
    g.add_argument("--seed", type=int, default=0, help="seed for synthetic instances")
    g.add_argument("--n", type=_positive, default=64, help="number of vertices")
    g.add_argument("--target-delta", type=_positive, default=4, help="degree cap of random graphs")
    g.add_argument("--target-beta", type=_positive, default=2, help="outdegree cap of oriented graphs")
    g.add_argument("--colors", type=_positive, default=None,
                   help="colorspace size |C| (default 64, 256 for defective-list)")
    g.add_argument("--slack", type=int, default=12, help="extra colors beyond deg + 1 (deg-plus-one)")
    g.add_argument("--list-size", type=_positive, default=None,
                   help="size of pooled lists (default 12; 16 for linial-lists, 160 for defective-list)")
    g.add_argument("--pool", type=_positive, default=2, help="number of distinct pooled lists")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="listcolor", description="Distributed list coloring toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cover-free", help="build and verify a cover-free family")
    p.add_argument("--m", type=int, required=True, help="number of sets (>= 3)")
    p.add_argument("--delta", type=int, required=True, help="cover-freeness (>= 2)")
    p.add_argument("--seed", type=int, default=0, help="seed of the candidate stream")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--out", help="family document path")
    p.set_defaults(func=cmd_cover_free)

    p = sub.add_parser("run", help="run a protocol on the simulator")
    p.add_argument("protocol", choices=PROTOCOLS)
    p.add_argument("--input", help="instance file (JSON or edge list); random instance if omitted")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.DESK.value)
    p.add_argument("--desk", dest="mode", action="store_const", const=Mode.DESK.value, help="same as --mode desk")
    p.add_argument("--paper", dest="mode", action="store_const", const=Mode.PAPER.value,
                   help="same as --mode paper")
    p.add_argument("--accounting", choices=[a.value for a in Accounting], default=Accounting.FORMULA.value)
    p.add_argument("--order-seed", type=int, default=None, help="shuffle node evaluation order")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--out", help="output directory")
    p.add_argument("--d", type=int, default=0, help="defect (defective protocols)")
    p.add_argument("--delta", type=int, default=None, help="degree bound known to the nodes")
    p.add_argument("--beta", type=int, default=None, help="outdegree bound (linial-lists)")
    p.add_argument("--tau", type=int)
    p.add_argument("--tau-prime", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--k-prime", type=int)
    p.add_argument("--l0", type=int)
    p.add_argument("--x-override", type=float, help="replace X in beta_j = sqrt(delta_j / (2X))")
    _add_generation(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify-lemmas", help="run oracle verification suites")
    p.add_argument("--scope", choices=["all", *lemmas.SUITES], default="all")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.add_argument("--out", help="report path")
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("gen", help="write a synthetic instance")
    p.add_argument("--kind", choices=PROTOCOLS, default="deg-plus-one")
    p.add_argument("--out", help="instance path (stdout if omitted)")
    _add_generation(p)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "cover-free" and (args.m < 3 or args.delta < 2):
        parser.error(f"cover-free needs m >= 3 and delta >= 2 (got m = {args.m}, delta = {args.delta})")
    if args.command == "run" and args.input and not Path(args.input).is_file():
        parser.error(f"input file not found: {args.input}")
    try:
        return args.func(args)
    except ListColorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
