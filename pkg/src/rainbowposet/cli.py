"""Command-line entry point.

Subcommands cover construction, catalog dumps, forcing queries, minimal
forcer searches, tree embeddings, Boolean-lattice statistics and the
verification suite. JSON payloads carry a versioned schema field; output
is byte-identical for identical configuration (timings are opt-in).

Exit codes: 0 success/verified, 1 a verified property failed, 2 usage
error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import constructions
from .catalog import dump_catalog
from .errors import ForcingTimeout, RainbowPosetError
from .families import (
    family_from_text,
    la_rainbow_star,
    la_star,
    la_star_bracket,
    lubell_mass,
    minmax_partition,
    sigma,
)
from .forcing import (
    is_minimal_forcing,
    m_value,
    proper_colorings,
    rainbow_forces,
    random_proper_coloring,
    search_M,
)
from .poset import canonical_key, poset_from_text, poset_to_text
from .treeembed import embed_universal, verify_certificate
from .verify import run_suite

SCHEMA = 1


@dataclass(frozen=True)
class RunConfig:
    """Run-wide knobs; the defaults reproduce the verification suite."""

    seed: int = 0
    cap: int = 7
    budget_s: float = 900.0
    fmt: str = "json"
    workers: int = 1


def config_from(args) -> RunConfig:
    return RunConfig(
        seed=getattr(args, "seed", 0),
        cap=getattr(args, "cap", 7),
        budget_s=getattr(args, "budget", 900.0),
        fmt="text" if getattr(args, "text", False) else "json",
        workers=args.workers,
    )


BUILDERS = {
    "chain": (constructions.chain, 1),
    "antichain": (constructions.antichain, 1),
    "organ": (constructions.organ, 1),
    "harp": (constructions.harp, 1),
    "vee": (constructions.vee, 0),
    "wedge": (constructions.wedge, 0),
    "jay": (constructions.jay, 0),
    "diamond": (constructions.diamond, 0),
    "downtree": (constructions.downtree, 2),
    "uptree": (constructions.uptree, 2),
    "djk": (constructions.d_jk, 2),
    "ojk": (constructions.o_jk, 2),
    "a3-witness": (constructions.a3_witness, 0),
}


def _read_poset(path):
    with open(path, encoding="utf-8") as fh:
        return poset_from_text(fh.read())


def _read_family(path):
    with open(path, encoding="utf-8") as fh:
        return family_from_text(fh.read())


def _emit_json(payload, args):
    payload = {"schema": SCHEMA, **payload}
    if getattr(args, "timings", False) and "_elapsed_ms" in payload:
        payload["elapsed_ms"] = payload.pop("_elapsed_ms")
    else:
        payload.pop("_elapsed_ms", None)
    if config_from(args).fmt == "text":
        for key in sorted(payload):
            if key != "schema":
                print(f"{key}: {json.dumps(payload[key], sort_keys=True)}")
    else:
        print(json.dumps(payload, sort_keys=True))


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def cmd_construct(args):
    name = args.name
    if name == "multilevel":
        poset = constructions.complete_multilevel([int(p) for p in args.params])
    elif name == "universal-tree":
        poset = constructions.universal_tree(int(args.params[0])).poset
    elif name == "blowup":
        base = _read_poset(args.params[0])
        pi = [int(x) for x in args.params[1].split(",")]
        poset = constructions.blowup(base, pi)
    elif name in BUILDERS:
        builder, arity = BUILDERS[name]
        if len(args.params) != arity:
            raise SystemExit(f"{name} takes {arity} parameter(s)")
        poset = builder(*[int(p) for p in args.params])
    else:
        raise SystemExit(f"unknown construction {name!r}")
    text = poset_to_text(poset)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args):
    manifest = dump_catalog(args.out, args.max_size, cap=max(args.max_size, 7))
    _emit_json({"counts": manifest["counts"], "directory": args.out}, args)
    return 0


def cmd_forces(args):
    host = _read_poset(args.host)
    pattern = _read_poset(args.pattern)
    start = time.monotonic()
    verdict = rainbow_forces(host, pattern, budget_s=args.budget)
    payload = {
        "forces": verdict.forces,
        "_elapsed_ms": int((time.monotonic() - start) * 1000),
    }
    if verdict.refutation is not None:
        payload["refutation"] = list(verdict.refutation.colors)
    _emit_json(payload, args)
    return 0


def cmd_minimal(args):
    host = _read_poset(args.host)
    pattern = _read_poset(args.pattern)
    start = time.monotonic()
    minimal = is_minimal_forcing(host, pattern, budget_s=args.budget)
    _emit_json(
        {"minimal": minimal, "_elapsed_ms": int((time.monotonic() - start) * 1000)},
        args,
    )
    return 0


def cmd_search_m(args):
    pattern = _read_poset(args.pattern)
    start = time.monotonic()
    found = search_M(pattern, args.max_size, cap=max(args.max_size, 7))
    payload = {
        "count": len(found),
        "max_size": args.max_size,  # minimality certified within this bound only
        "forcers": [
            {
                "n": p.n,
                "covers": [list(c) for c in p.cover_pairs()],
                "key": canonical_key(p).hex(),
            }
            for p in found
        ],
        "_elapsed_ms": int((time.monotonic() - start) * 1000),
    }
    _emit_json(payload, args)
    return 0


def cmd_m_value(args):
    pattern = _read_poset(args.pattern)
    start = time.monotonic()
    mv = m_value(pattern, cap=args.cap)
    payload = {
        "lower": mv.lower,
        "upper": mv.upper,
        "exact": mv.exact,
        "_elapsed_ms": int((time.monotonic() - start) * 1000),
    }
    if mv.value is not None:
        payload["value"] = mv.value
    _emit_json(payload, args)
    return 0


def cmd_embed(args):
    tree = _read_poset(args.tree)
    k = args.k if args.k else tree.n
    ut = constructions.universal_tree(k)
    if args.exhaustive:
        total = 0
        for coloring in proper_colorings(ut.poset):
            cert = embed_universal(tree, ut, coloring)
            if not verify_certificate(ut.poset, coloring, tree, cert):
                print("verified: false")
                return 1
            total += 1
        print(f"embedded under all {total} proper colorings")
        print("verified: true")
        return 0
    rng = random.Random(args.seed)
    coloring = random_proper_coloring(ut.poset, rng)
    cert = embed_universal(tree, ut, coloring)
    ok = verify_certificate(ut.poset, coloring, tree, cert)
    for i, (img, col) in enumerate(zip(cert.mapping, cert.colors)):
        print(f"{i} -> {img} ({col})")
    print(f"verified: {'true' if ok else 'false'}")
    return 0 if ok else 1


def cmd_lubell(args):
    fam = _read_family(args.family)
    _emit_json({"value": _fraction_str(lubell_mass(fam))}, args)
    return 0


def cmd_sigma(args):
    _emit_json({"value": sigma(args.n, args.k)}, args)
    return 0


def cmd_la_star(args):
    patterns = [_read_poset(p) for p in args.patterns]
    start = time.monotonic()
    if args.bracket:
        lower, upper = la_star_bracket(args.n, patterns, node_budget=args.node_budget)
        _emit_json(
            {
                "lower": lower,
                "upper": upper,
                "exact": lower == upper,
                "_elapsed_ms": int((time.monotonic() - start) * 1000),
            },
            args,
        )
        return 0
    res = la_star(args.n, patterns)
    _emit_json(
        {
            "value": res.value,
            "witness": [sorted(s) for s in res.witness.members()],
            "_elapsed_ms": int((time.monotonic() - start) * 1000),
        },
        args,
    )
    return 0


def cmd_lar_star(args):
    pattern = _read_poset(args.pattern)
    start = time.monotonic()
    res = la_rainbow_star(args.n, pattern)
    _emit_json(
        {
            "value": res.value,
            "witness": [sorted(s) for s in res.witness.members()],
            "witness_coloring": list(res.coloring.colors),
            "_elapsed_ms": int((time.monotonic() - start) * 1000),
        },
        args,
    )
    return 0


def cmd_minmax(args):
    fam = _read_family(args.family)
    rep = minmax_partition(fam)
    _emit_json(
        {
            "mass": _fraction_str(rep.mass),
            "average": _fraction_str(rep.average),
            "identity_holds": rep.identity_holds,
            "two_hit_classes": len(rep.classes),
            "leftover_chains": rep.leftover_count,
        },
        args,
    )
    return 0


def cmd_verify(args):
    results = run_suite(full=args.full)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.seconds:.1f}s): {r.detail}")
        if not r.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rainbowposet",
        description="Exact rainbow-forcing searches on small posets and cubes",
    )
    parser.add_argument(
        "--timings", action="store_true", help="include elapsed_ms in JSON output"
    )
    parser.add_argument(
        "--text", action="store_true", help="key:value lines instead of JSON"
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=int(os.environ.get("RAINBOWPOSET_WORKERS", "1")),
        help="worker count (searches currently run sequentially regardless)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit a named poset in text format")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--out")
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("gen", help="dump the poset catalog to a directory")
    p.add_argument("--max-size", type=int, default=7)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("forces", help="decide rainbow forcing host vs pattern")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--budget", type=float, default=900.0)
    p.set_defaults(fn=cmd_forces)

    p = sub.add_parser("minimal", help="decide deletion-minimal forcing")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--budget", type=float, default=900.0)
    p.set_defaults(fn=cmd_minimal)

    p = sub.add_parser("search-m", help="all minimal forcers up to a size bound")
    p.add_argument("pattern")
    p.add_argument("--max-size", type=int, required=True)
    p.set_defaults(fn=cmd_search_m)

    p = sub.add_parser("m-value", help="minimum forcing size (or bracket)")
    p.add_argument("pattern")
    p.add_argument("--cap", type=int, default=7)
    p.set_defaults(fn=cmd_m_value)

    p = sub.add_parser("embed", help="rainbow-embed a tree into a universal tree")
    p.add_argument("--tree", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("lubell", help="exact mass of a family")
    p.add_argument("family")
    p.set_defaults(fn=cmd_lubell)

    p = sub.add_parser("sigma", help="sum of the k largest binomials")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(fn=cmd_sigma)

    p = sub.add_parser("la-star", help="largest pattern-free family size")
    p.add_argument("n", type=int)
    p.add_argument("--pattern", dest="patterns", action="append", required=True)
    p.add_argument("--bracket", action="store_true", help="budgeted bounds (n=5)")
    p.add_argument("--node-budget", type=int, default=500_000)
    p.set_defaults(fn=cmd_la_star)

    p = sub.add_parser("lar-star", help="largest rainbow-refutable family size")
    p.add_argument("n", type=int)
    p.add_argument("pattern")
    p.set_defaults(fn=cmd_lar_star)

    p = sub.add_parser("minmax", help="chain statistics of a family")
    p.add_argument("family")
    p.set_defaults(fn=cmd_minmax)

    p = sub.add_parser("verify-paper", help="run the verification suite")
    tier = p.add_mutually_exclusive_group()
    tier.add_argument("--quick", action="store_true")
    tier.add_argument("--full", action="store_true")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ForcingTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RainbowPosetError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
