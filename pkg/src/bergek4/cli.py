"""Command-line front end.

Exit codes: 0 success, 1 a mathematical negative (configuration found,
claim refuted, check failed), 2 usage or input error, 3 search budget
exhausted before the answer was certified.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from .core import K3, K4, ParseError, balanced_3partite, discrepancy_report, parse, serialize
from .detect import DetectMode, find_berge, find_berge_triangle_anchored, AnchoredTriangle
from .search import (
    BergeMinusExpansion,
    BergePattern,
    GraphClique,
    SearchConfig,
    certify_extremal,
    max_edges,
)
from .trace import (
    bound_report,
    check_multiplicity_props,
    check_no_sdr,
    check_toomany,
    components,
    trace,
    z_partition,
)

EXIT_OK, EXIT_FOUND, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

PATTERNS = {"k3": K3, "k4": K4}
MODES = {"any": DetectMode.ANY, "non-expansion": DetectMode.NON_EXPANSION}


class UsageError(Exception):
    pass


def _read_system(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"{path}:{exc}") from None


def _spec(args):
    pattern = PATTERNS[args.pattern]
    if args.spec == "berge":
        return BergePattern(pattern)
    if args.spec == "berge-minus-expansion":
        return BergeMinusExpansion(pattern)
    return GraphClique(pattern.k)


def _config(args) -> SearchConfig:
    return SearchConfig(workers=args.workers, node_budget=args.node_budget)


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def cmd_construct(args) -> int:
    H = balanced_3partite(args.n)
    payload = {"n": H.n, "m": len(H), "triples": [list(t) for t in H.sorted_edges()]}
    if args.json:
        print(json.dumps(payload))
    else:
        sys.stdout.write(serialize(H))
    return EXIT_OK


def cmd_detect(args) -> int:
    H = _read_system(args.input)
    emb = find_berge(H, PATTERNS[args.pattern], MODES[args.mode])
    if emb is None:
        _emit(args, None, f"no Berge-{args.pattern.upper()} ({args.mode}) in {len(H)} triples")
        return EXIT_OK
    lines = [f"Berge-{args.pattern.upper()} found, core {list(emb.core)}"]
    lines += [f"  {p[0]}{p[1]} -> {' '.join(map(str, t))}" for p, t in sorted(emb.assignment)]
    _emit(args, emb.to_json(), "\n".join(lines))
    return EXIT_FOUND


def _parse_core(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--core expects comma-separated vertices, got {text!r}") from None


def _anchor_on(H, core: list[int]) -> Optional[AnchoredTriangle]:
    """An anchored triangle whose first triple is exactly ``core``, preferring ``x == y``."""
    from .detect import anchored_triangles

    target = tuple(sorted(core))
    return next((a for a in anchored_triangles(H) if a.core == target), None)


def cmd_trace(args) -> int:
    H = _read_system(args.input)
    if args.core is None:
        anchor = find_berge_triangle_anchored(H)
        if anchor is None:
            raise UsageError("no --core given and the system has no Berge-triangle to anchor on")
        core = list(anchor.labels)
    else:
        core = _parse_core(args.core)
        anchor = _anchor_on(H, core) if len(core) == 3 else None
    if any(not 0 <= v < H.n for v in core) or len(set(core)) != len(core):
        raise UsageError(f"--core {core} is not a set of vertices of the system")
    try:
        T = trace(H, core)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"trace": T.to_json()}
    lines = [f"trace on core {list(T.core)}: {len(T.loops)} loops, {len(T.links)} links"]
    lines += [f"  loop  {v}  label {list(lab)}" for v, lab in T.loops]
    lines += [f"  link  {u}-{v}  label {list(lab)}" for u, v, lab in T.links]
    for c in components(T):
        lines.append(f"  component {sorted(c.vertices)} surplus {c.surplus}{' BAD' if c.bad else ''}")
    status = EXIT_OK
    if anchor is not None:
        sdr = check_no_sdr(H, T, anchor)
        mult = check_multiplicity_props(H, T, anchor)
        rep = bound_report(H, anchor)
        zp = z_partition(T, anchor.x, anchor.y)
        payload.update(
            anchor={"labels": list(anchor.labels), "x": anchor.x, "y": anchor.y},
            z_partition={",".join(map(str, sorted(k))): sorted(v) for k, v in zp.items() if v},
            violations=[{"rule": v.rule, "vertex": v.vertex, "detail": v.detail} for v in sdr + mult],
            bound_report=rep.to_json(),
        )
        lines.append(f"anchored triangle labels {list(anchor.labels)} x={anchor.x} y={anchor.y}")
        for k, v in sorted(zp.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
            if v:
                lines.append(f"  Z{sorted(k)}: {sorted(v)}")
        lines.append(f"  no-SDR violations: {len(sdr)}; multiplicity violations: {len(mult)}")
        lines.append(f"  s(G)={rep.surplus} m={rep.m} p={rep.p} q={rep.q} alpha={rep.alpha} |U|={len(rep.U)} M={rep.M}")
        if sdr or mult:
            status = EXIT_FOUND
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_extremal(args) -> int:
    spec = _spec(args)
    res = max_edges(args.n, spec, _config(args))
    text = f"{spec.label} n={args.n}: {res.value} ({'certified' if res.exhausted else 'budget exhausted'}), " \
           f"{res.stats.nodes} nodes, {res.stats.wall_time:.2f}s"
    _emit(args, res.to_json(), text)
    return EXIT_OK if res.exhausted else EXIT_BUDGET


def cmd_certify(args) -> int:
    cert = certify_extremal(args.n, _spec(args), args.claimed, _config(args))
    _emit(args, cert.to_json(), cert.message)
    if cert.status == "inconclusive":
        return EXIT_BUDGET
    return EXIT_OK if cert.ok else EXIT_FOUND


def cmd_inequality(args) -> int:
    t0 = time.perf_counter()
    ok = check_toomany(args.n)
    gaps = discrepancy_report(args.n)
    elapsed = time.perf_counter() - t0
    payload = {
        "n_max": args.n,
        "toomany_nonnegative": ok,
        "discrepancies": [{"n": n, "table": t, "direct": d} for n, t, d in gaps],
        "seconds": elapsed,
    }
    lines = [f"toomany >= 0 on [6, {args.n}]: {'yes' if ok else 'NO'} ({elapsed:.3f}s)",
             f"table vs direct f(n)-f(n-1): {len(gaps)} mismatches"]
    lines += [f"  n={n}: table {t} vs direct {d}" for n, t, d in gaps[:10]]
    if len(gaps) > 10:
        lines.append(f"  ... {len(gaps) - 10} more, all at n = 0 mod 3")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FOUND


def reproduce_rows(fast: bool = False, config: SearchConfig = SearchConfig()):
    """``(label, n, expected, result)`` for every row of the reproduction table."""
    rows = []
    k4 = {3: 1, 4: 4, 5: 5, 6: 8, 7: 12}
    for n, exp in k4.items():
        if fast and n == 7:
            continue
        rows.append(("berge(K4)", n, exp, max_edges(n, BergePattern(K4), config)))
    for n in range(3, 8):
        rows.append(("berge(K3)", n, n * n // 8, max_edges(n, BergePattern(K3), config)))
    rows.append(("berge-minus-expansion(K4)", 6, 8, max_edges(6, BergeMinusExpansion(K4), config)))
    for m in range(4, 9):
        rows.append(("graph-clique(K4)", m, m * m // 3, max_edges(m, GraphClique(4), config)))
    return rows


def cmd_reproduce(args) -> int:
    rows = reproduce_rows(args.fast, _config(args))
    good = all(r.exhausted and r.value == exp for _, _, exp, r in rows)
    payload = [
        {"spec": lab, "n": n, "expected": exp, "value": r.value, "exhausted": r.exhausted,
         "nodes": r.stats.nodes, "seconds": r.stats.wall_time}
        for lab, n, exp, r in rows
    ]
    lines = [f"{'spec':<28}{'n':>3}{'expected':>10}{'value':>7}  status     nodes   seconds"]
    for lab, n, exp, r in rows:
        status = "ok" if r.exhausted and r.value == exp else ("BUDGET" if not r.exhausted else "MISMATCH")
        lines.append(f"{lab:<28}{n:>3}{exp:>10}{r.value:>7}  {status:<8}{r.stats.nodes:>8}{r.stats.wall_time:>10.2f}")
    _emit(args, payload, "\n".join(lines))
    if not all(r.exhausted for *_, r in rows):
        return EXIT_BUDGET
    return EXIT_OK if good else EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergek4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, search=False):
        p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
        if search:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--spec", choices=["berge", "berge-minus-expansion", "graph-clique"], default="berge")
            p.add_argument("--pattern", choices=sorted(PATTERNS), default="k4")
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--node-budget", type=int, default=SearchConfig.node_budget)

    p = sub.add_parser("construct", help="balanced complete 3-partite triple system")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("detect", help="look for a Berge copy of a pattern")
    p.add_argument("--input", required=True)
    p.add_argument("--pattern", choices=sorted(PATTERNS), default="k4")
    p.add_argument("--mode", choices=sorted(MODES), default="any")
    common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("trace", help="trace multigraph on a core set, with the triangle checks")
    p.add_argument("--input", required=True)
    p.add_argument("--core", help="comma-separated core vertices (default: an anchored triangle)")
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("extremal", help="exact extremal number by exhaustive search")
    common(p, search=True)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("certify", help="certify or refute a claimed extremal number")
    common(p, search=True)
    p.add_argument("--claimed", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("inequality", help="counting inequality and the difference-table comparison")
    p.add_argument("--n", type=int, default=300, help="largest n to check")
    common(p)
    p.set_defaults(func=cmd_inequality)

    p = sub.add_parser("reproduce", help="recompute the table of small extremal numbers")
    p.add_argument("--fast", action="store_true", help="skip the n=7 Berge-K4 row")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--node-budget", type=int, default=SearchConfig.node_budget)
    common(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
