"""Command-line surface: generation, analysis, construction, verification.

Every randomized command requires an explicit --seed, reports are JSON with
stable field order, and the exit code is 0 only when the requested
verification passed (2 = usage/precondition error, 3 = construction
certificate)."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import hosts
from .classic import moon_ham_cycle
from .constants import audit_constants
from .core import Path, Tournament, is_strongly_connected, strong_connectivity
from .domination import build_dominator, large_degree_vertices, verify_dominator
from .linkage import build_connector, canonical_linker, verify_connector, verify_linker
from .linkbuild import build_linkers
from .oracle import (
    GeneratorSpec,
    brute_disjoint_paths,
    brute_ham_cycle,
    brute_ham_path,
    generate,
    independence_number,
)
from .pipeline import edge_disjoint_ham_cycles, link_pairs, verify_decomposition
from .profiles import ParamProfile, paper_profile, pipeline_profile
from .report import ConstructionError
from .rng import SplitMix64
from . import serialize

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CERTIFICATE = 3


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2))


def _load_tournament(path: str) -> Tournament:
    with open(path) as fh:
        return Tournament.from_text(fh.read())


def _parse_range(text: str) -> frozenset[int]:
    if not text:
        return frozenset()
    a, b = text.split(":")
    return frozenset(range(int(a), int(b)))


def _profile_from_args(args) -> ParamProfile:
    if args.profile == "paper":
        return paper_profile()
    return pipeline_profile(
        t=args.t,
        connector_budget=args.budget,
        large_fraction=Fraction(1, 2),
    )


def cmd_gen(args) -> int:
    if args.model == "ladder":
        spec = hosts.LadderHostSpec(
            blocks=args.blocks, gap=args.gap, elevators=args.elevators,
            block_size=args.block_size, seed=args.seed,
        ).generator_spec()
    else:
        base = _load_tournament(args.base) if args.base else None
        blocks = tuple(int(x) for x in args.blocks_list.split(",")) if args.blocks_list else ()
        spec = GeneratorSpec(args.model, args.n, seed=args.seed, base=base, blocks=blocks)
    t = generate(spec)
    with open(args.out, "w") as fh:
        fh.write(t.to_text())
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(t.to_dot())
    _emit({"command": "gen", "model": spec.model, "n": t.n, "seed": args.seed, "out": args.out})
    return EXIT_OK


def cmd_analyze(args) -> int:
    t = _load_tournament(args.tournament)
    out_degrees = [t.out_degree(v) for v in range(t.n)]
    report = {
        "command": "analyze",
        "n": t.n,
        "strongly_connected": is_strongly_connected(t),
        "min_out_degree": min(out_degrees),
        "max_out_degree": max(out_degrees),
        "large_out": len(large_degree_vertices(t, "out")),
        "large_in": len(large_degree_vertices(t, "in")),
    }
    if not args.no_connectivity:
        report["strong_connectivity"] = strong_connectivity(t)
    _emit(report)
    return EXIT_OK


def cmd_dominate(args) -> int:
    t = _load_tournament(args.tournament)
    try:
        dom = build_dominator(
            t, args.orientation, set(), args.m, args.M, args.L, args.p,
            large_fraction=Fraction(1, args.fraction_den),
        )
    except ConstructionError as e:
        _emit({"command": "dominate", "certificate": e.certificate.to_json()})
        return EXIT_CERTIFICATE
    rep = verify_dominator(t, dom)
    payload = serialize.dominator_to_json(dom)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    _emit({"command": "dominate", "verified": rep.passed, "report": rep.to_json()})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_connect(args) -> int:
    t = _load_tournament(args.tournament)
    rng = SplitMix64(args.seed)
    frac = Fraction(1, args.fraction_den)
    xs = sorted(large_degree_vertices(t, "out", frac))
    ys = sorted(large_degree_vertices(t, "in", frac))
    rng.shuffle(xs)
    rng.shuffle(ys)
    ys = [y for y in ys if y not in set(xs[: args.budget])]
    try:
        conn = build_connector(t, set(), xs[: args.budget], ys[: args.budget],
                               args.budget, fraction=frac, seed=args.seed)
    except ConstructionError as e:
        _emit({"command": "connect", "certificate": e.certificate.to_json()})
        return EXIT_CERTIFICATE
    rep = verify_connector(t, conn)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(serialize.connector_to_json(conn), fh, indent=2)
    _emit({"command": "connect", "verified": rep.passed, "vertices": len(conn.vertices)})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_linker(args) -> int:
    t = _load_tournament(args.tournament)
    profile = _profile_from_args(args)
    try:
        linkers, x = build_linkers(
            t, args.count, profile, seed=args.seed, reserve=_parse_range(args.reserve)
        )
    except ConstructionError as e:
        _emit({"command": "linker", "certificate": e.certificate.to_json()})
        return EXIT_CERTIFICATE
    reports = [verify_linker(t, linker) for linker in linkers]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([serialize.linker_to_json(linker) for linker in linkers], fh, indent=2)
    ok = all(r.passed for r in reports)
    _emit({
        "command": "linker",
        "count": len(linkers),
        "common_exceptional": len(x),
        "verified": ok,
        "summaries": [r.summary() for r in reports],
    })
    return EXIT_OK if ok else EXIT_FAIL


def cmd_hamdecomp(args) -> int:
    t = _load_tournament(args.tournament)
    profile = _profile_from_args(args)
    try:
        cycles = edge_disjoint_ham_cycles(
            t, args.k, profile, seed=args.seed,
            family_size=args.family_size,
            reserve=_parse_range(args.reserve),
        )
    except ConstructionError as e:
        _emit({"command": "hamdecomp", "certificate": e.certificate.to_json()})
        return EXIT_CERTIFICATE
    rep = verify_decomposition(t, cycles)
    payload = serialize.decomposition_to_json(cycles)
    payload["verification"] = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    _emit({"command": "hamdecomp", "k": args.k, "verified": rep.passed})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_moon(args) -> int:
    t = _load_tournament(args.tournament)
    cycle = moon_ham_cycle(t)
    ok = cycle is not None and cycle.is_valid_in(t) and t.has_arc(cycle.end, cycle.start)
    _emit({
        "command": "moon",
        "hamiltonian": cycle is not None,
        "verified": bool(ok) if cycle else None,
    })
    return EXIT_OK


def cmd_linkpairs(args) -> int:
    t = _load_tournament(args.tournament)
    pairs = []
    for chunk in args.pairs.split(","):
        a, b = chunk.split(":")
        pairs.append((int(a), int(b)))
    profile = _profile_from_args(args)
    try:
        ps = link_pairs(t, pairs, profile, seed=args.seed, reserve=_parse_range(args.reserve))
    except ConstructionError as e:
        _emit({"command": "linkpairs", "certificate": e.certificate.to_json()})
        return EXIT_CERTIFICATE
    _emit({
        "command": "linkpairs",
        "paths": [list(p.vertices) for p in ps.paths],
        "verified": True,
    })
    return EXIT_OK


def cmd_audit(args) -> int:
    audit = audit_constants(args.k)
    _emit(audit.to_json())
    return EXIT_OK if audit.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    t = _load_tournament(args.tournament)
    with open(args.structure) as fh:
        obj = json.load(fh)
    objs = obj if isinstance(obj, list) else [obj]
    reports = []
    for item in objs:
        struct = serialize.structure_from_json(item)
        kind = item["kind"]
        if kind == "dominator":
            reports.append(verify_dominator(t, struct))
        elif kind == "connector":
            reports.append(verify_connector(t, struct))
        elif kind == "linker":
            reports.append(verify_linker(t, struct))
        elif kind == "decomposition":
            reports.append(verify_decomposition(t, struct))
    ok = all(r.passed for r in reports)
    _emit({
        "command": "verify",
        "verified": ok,
        "reports": [r.to_json() for r in reports],
    })
    return EXIT_OK if ok else EXIT_FAIL


def cmd_canonical(args) -> int:
    host, linker = canonical_linker(args.t, seed=args.seed)
    rep = verify_linker(host, linker)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(host.to_text())
    if args.structure:
        with open(args.structure, "w") as fh:
            json.dump(serialize.linker_to_json(linker), fh, indent=2)
    _emit({"command": "canonical", "t": args.t, "n": host.n, "verified": rep.passed})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_oracle(args) -> int:
    t = _load_tournament(args.tournament)
    if args.query == "hampath":
        res = brute_ham_path(t, args.x, args.y)
        _emit({"command": "oracle", "query": "hampath",
               "path": list(res.vertices) if res else None})
    elif args.query == "hamcycle":
        res = brute_ham_cycle(t)
        _emit({"command": "oracle", "query": "hamcycle",
               "cycle": list(res.vertices) if res else None})
    elif args.query == "independence":
        _emit({"command": "oracle", "query": "independence",
               "value": independence_number(t)})
    elif args.query == "disjoint-paths":
        _emit({"command": "oracle", "query": "disjoint-paths",
               "value": brute_disjoint_paths(t, args.x, args.y, args.max_len)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hamlink", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a tournament file")
    g.add_argument("--model", choices=["uniform", "paley", "blowup", "ladder"], required=True)
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--base", help="base tournament file for the blowup model")
    g.add_argument("--blocks-list", help="comma-separated block sizes for blowup")
    g.add_argument("--blocks", type=int, default=120, help="ladder: staircase blocks")
    g.add_argument("--gap", type=int, default=2, help="ladder: backward band width")
    g.add_argument("--elevators", type=int, default=4, help="ladder: routing blocks")
    g.add_argument("--block-size", type=int, default=50, help="ladder: vertices per block")
    g.add_argument("--dot", help="also write a DOT rendering")
    g.set_defaults(fn=cmd_gen)

    a = sub.add_parser("analyze", help="connectivity and degree report")
    a.add_argument("tournament")
    a.add_argument("--no-connectivity", action="store_true")
    a.set_defaults(fn=cmd_analyze)

    d = sub.add_parser("dominate", help="build and verify a dominator")
    d.add_argument("tournament")
    d.add_argument("--orientation", choices=["in", "out"], default="in")
    d.add_argument("--m", type=int, default=2)
    d.add_argument("--M", type=int, default=5)
    d.add_argument("--L", type=int, default=1024)
    d.add_argument("--p", type=int, default=2)
    d.add_argument("--fraction-den", type=int, default=25)
    d.add_argument("--out")
    d.set_defaults(fn=cmd_dominate)

    c = sub.add_parser("connect", help="build and verify a connector")
    c.add_argument("tournament")
    c.add_argument("--budget", type=int, default=16)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--fraction-den", type=int, default=2)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_connect)

    for name, fn in (("linker", cmd_linker), ("hamdecomp", cmd_hamdecomp), ("linkpairs", cmd_linkpairs)):
        s = sub.add_parser(name)
        s.add_argument("tournament")
        s.add_argument("--seed", type=int, required=True)
        s.add_argument("--profile", choices=["desk", "paper"], default="desk")
        s.add_argument("--t", type=int, default=1)
        s.add_argument("--budget", type=int, default=16)
        s.add_argument("--reserve", default="", help="vertex range a:b kept out of linker material")
        s.add_argument("--out")
        if name == "linker":
            s.add_argument("--count", type=int, default=1)
        if name == "hamdecomp":
            s.add_argument("--k", type=int, required=True)
            s.add_argument("--family-size", type=int, default=None)
        if name == "linkpairs":
            s.add_argument("--pairs", required=True, help="x1:y1,x2:y2,...")
        s.set_defaults(fn=fn)

    m = sub.add_parser("moon", help="insertion-built Hamiltonian cycle (outside the linker pipeline)")
    m.add_argument("tournament")
    m.set_defaults(fn=cmd_moon)

    au = sub.add_parser("audit", help="big-integer constants audit")
    au.add_argument("--k", type=int, default=1)
    au.set_defaults(fn=cmd_audit)

    v = sub.add_parser("verify", help="re-verify a serialized structure")
    v.add_argument("structure")
    v.add_argument("--tournament", required=True)
    v.set_defaults(fn=cmd_verify)

    cn = sub.add_parser("canonical", help="synthesize a canonical linker fixture")
    cn.add_argument("--t", type=int, default=1)
    cn.add_argument("--seed", type=int, required=True)
    cn.add_argument("--out")
    cn.add_argument("--structure")
    cn.set_defaults(fn=cmd_canonical)

    o = sub.add_parser("oracle", help="exhaustive small-scale oracles")
    o.add_argument("query", choices=["hampath", "hamcycle", "independence", "disjoint-paths"])
    o.add_argument("tournament")
    o.add_argument("--x", type=int, default=0)
    o.add_argument("--y", type=int, default=1)
    o.add_argument("--max-len", type=int, default=3)
    o.set_defaults(fn=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as e:
        _emit({"certificate": e.certificate.to_json()})
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
