"""Exact extremal numbers by exhaustive branch and bound.

The engine works on a ground set of *items* (all triples of ``range(n)``, or
all pairs for the graph Turán subroutine), encoded as bits of a Python int.
A node carries the chosen set ``C`` and the set ``R`` of undecided items that
can still be added to ``C`` one at a time without creating a forbidden
configuration. The node is pruned when ``|C| + |R|`` cannot beat the best
value known so far. Branching takes the first item of ``R`` (lexicographic
order by default): include it, then filter ``R`` with the detector's
must-use-this-item test; or skip it.

Isomorph rejection has two parts. The first included item is fixed, since
every nonempty system has an isomorphic copy containing it. Below that, nodes
with at most ``iso_depth`` chosen items are memoised by the canonical form of
the pair ``(C, R)``: the best completion of a node depends on that pair only up
to isomorphism, and the bound only rises, so a repeated class can be dropped.
"""

from __future__ import annotations

import itertools
import json
import logging
import multiprocessing as mp
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

from .canonical import MAX_CANONICAL_N, canonical_bytes, canonical_form  # noqa: F401
from .core import K4, PatternGraph, TripleSystem, all_triples, balanced_3partite
from .detect import BergeDetector, DetectMode

log = logging.getLogger(__name__)

MAX_CERTIFIED_N = 10
MAX_GRAPH_M = 12


@dataclass(frozen=True)
class BergePattern:
    graph: PatternGraph = K4

    @property
    def label(self) -> str:
        return f"berge({_graph_name(self.graph)})"


@dataclass(frozen=True)
class BergeMinusExpansion:
    graph: PatternGraph = K4

    @property
    def label(self) -> str:
        return f"berge-minus-expansion({_graph_name(self.graph)})"


@dataclass(frozen=True)
class ExplicitPatterns:
    patterns: tuple[TripleSystem, ...]

    @property
    def label(self) -> str:
        return "explicit(" + ";".join(",".join(map(str, p.sorted_edges())) for p in self.patterns) + ")"


@dataclass(frozen=True)
class GraphClique:
    r: int

    @property
    def label(self) -> str:
        return f"graph-clique(K{self.r})"


ForbiddenSpec = Union[BergePattern, BergeMinusExpansion, ExplicitPatterns, GraphClique]


def _graph_name(G: PatternGraph) -> str:
    if len(G.pattern_edges) == G.k * (G.k - 1) // 2:
        return f"K{G.k}"
    return "G[" + ",".join(f"{a}{b}" for a, b in G.sorted_edges()) + "]"


@dataclass(frozen=True)
class SearchConfig:
    iso_depth: int = 4
    workers: int = 1
    node_budget: int = 50_000_000
    seed: Optional[TripleSystem] = None
    auto_seed: bool = True
    bound_pruning: bool = True
    iso_rejection: bool = True
    ordering: str = "lex"
    split_depth: int = 6

    def __post_init__(self):
        if self.iso_depth < 0:
            raise ValueError("iso_depth must be >= 0")
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.ordering not in ("lex", "degree"):
            raise ValueError("ordering must be 'lex' or 'degree'")

    def to_json(self) -> dict:
        d = asdict(self)
        d["seed"] = None if self.seed is None else [list(t) for t in self.seed.sorted_edges()]
        return d


@dataclass
class SearchStats:
    nodes: int = 0
    bound_prunes: int = 0
    iso_prunes: int = 0
    leaves: int = 0
    wall_time: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.bound_prunes += other.bound_prunes
        self.iso_prunes += other.iso_prunes
        self.leaves += other.leaves


@dataclass
class SearchResult:
    n: int
    spec: str
    value: int
    witness: Union[TripleSystem, frozenset, None]
    exhausted: bool
    stats: SearchStats = field(default_factory=SearchStats)
    config: Optional[SearchConfig] = None

    def witness_list(self) -> list[list[int]]:
        if self.witness is None:
            return []
        items = self.witness.sorted_edges() if isinstance(self.witness, TripleSystem) else sorted(self.witness)
        return [list(e) for e in items]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "spec": self.spec,
            "value": self.value,
            "witness": self.witness_list(),
            "exhausted": self.exhausted,
            "nodes": self.stats.nodes,
            "stats": asdict(self.stats),
            "config": self.config.to_json() if self.config else None,
        }


class BudgetExceeded(RuntimeError):
    pass


class _CliqueDetector:
    """Fixed sub-structures (item masks) indexed by the items they use."""

    def __init__(self, n_items: int, images: list[int]):
        self.images = sorted(set(images))
        self.by_item: list[list[int]] = [[] for _ in range(n_items)]
        for img in self.images:
            m = img
            while m:
                low = m & -m
                self.by_item[low.bit_length() - 1].append(img)
                m ^= low

    def contains(self, mask: int) -> bool:
        return any(img & mask == img for img in self.images)

    def contains_with(self, mask: int, t: int) -> bool:
        mask |= 1 << t
        return any(img & mask == img for img in self.by_item[t])


def _pattern_images(n: int, pattern: TripleSystem) -> list[int]:
    """Masks of every copy of ``pattern`` (as a subsystem) inside the complete system on ``n``."""
    from .core import triple_index

    index = triple_index(n)
    out = set()
    if pattern.n > n:
        return []
    for phi in itertools.permutations(range(n), pattern.n):
        m = 0
        for t in pattern.edges:
            m |= 1 << index[tuple(sorted(phi[v] for v in t))]
        out.add(m)
    return sorted(out)


def _problem(n: int, spec: ForbiddenSpec):
    """Ground items, vertex tuples of the items, and the detector for ``spec``."""
    if isinstance(spec, GraphClique):
        items = list(itertools.combinations(range(n), 2))
        index = {p: i for i, p in enumerate(items)}
        images = []
        if spec.r <= n:
            for S in itertools.combinations(range(n), spec.r):
                m = 0
                for p in itertools.combinations(S, 2):
                    m |= 1 << index[p]
                images.append(m)
        return items, 2, _CliqueDetector(len(items), images)
    items = all_triples(n)
    if isinstance(spec, BergePattern):
        return items, 3, BergeDetector(n, spec.graph, DetectMode.ANY)
    if isinstance(spec, BergeMinusExpansion):
        return items, 3, BergeDetector(n, spec.graph, DetectMode.NON_EXPANSION)
    if isinstance(spec, ExplicitPatterns):
        images = [img for p in spec.patterns for img in _pattern_images(n, p)]
        return items, 3, _CliqueDetector(len(items), images)
    raise TypeError(f"unknown forbidden spec {spec!r}")


def _default_seed(n: int, spec: ForbiddenSpec) -> Optional[TripleSystem]:
    if isinstance(spec, (BergePattern, BergeMinusExpansion)) and spec.graph == K4:
        return balanced_3partite(n)
    return None


class _Engine:
    def __init__(self, n: int, items, arity: int, detector, config: SearchConfig, best: int, best_mask: int,
                 shared_best=None):
        self.n = n
        self.items = items
        self.arity = arity
        self.detector = detector
        self.config = config
        self.best = best
        self.best_mask = best_mask
        self.shared = shared_best
        self.stats = SearchStats()
        self.seen: set[bytes] = set()
        self.iso = config.iso_rejection and n <= MAX_CANONICAL_N

    def _bits(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def _key(self, C: int, R: int) -> bytes:
        items = self.items
        return canonical_bytes(self.n, [[items[i] for i in self._bits(C)], [items[i] for i in self._bits(R)]],
                               self.arity)

    def _pick(self, C: int, R: int) -> int:
        if self.config.ordering == "lex":
            return (R & -R).bit_length() - 1
        deg = [0] * self.n
        for i in self._bits(C):
            for v in self.items[i]:
                deg[v] += 1
        return max(self._bits(R), key=lambda i: (sum(deg[v] for v in self.items[i]), -i))

    def _filter(self, C: int, R: int) -> int:
        out = R
        m = R
        while m:
            low = m & -m
            m ^= low
            if self.detector.contains_with(C, low.bit_length() - 1):
                out ^= low
        return out

    def _sync_best(self) -> None:
        if self.shared is not None and self.shared.value > self.best:
            self.best = self.shared.value

    def _record(self, C: int, c: int) -> None:
        if self.detector.contains(C):
            raise AssertionError("incremental detection accepted a forbidden system")
        self.best, self.best_mask = c, C
        if self.shared is not None:
            with self.shared.get_lock():
                if c > self.shared.value:
                    self.shared.value = c
        log.debug("new best %d", c)

    def children(self, C: int, R: int, c: int, first: bool):
        """The (include, skip) successors of a node; skip is dropped at the root by symmetry."""
        t = self._pick(C, R)
        bit = 1 << t
        C1 = C | bit
        out = [(C1, self._filter(C1, R ^ bit), c + 1)]
        if not (first and self.config.iso_rejection):
            out.append((C, R ^ bit, c))
        return out

    def run(self, C: int, R: int, c: int) -> None:
        stats = self.stats
        stats.nodes += 1
        if stats.nodes > self.config.node_budget:
            raise BudgetExceeded
        if stats.nodes & 1023 == 0:
            self._sync_best()
        if self.config.bound_pruning and c + R.bit_count() <= self.best:
            stats.bound_prunes += 1
            return
        if not R:
            stats.leaves += 1
            if c > self.best:
                self._record(C, c)
            return
        if self.iso and 0 < c <= self.config.iso_depth:
            key = self._key(C, R)
            if key in self.seen:
                stats.iso_prunes += 1
                return
            self.seen.add(key)
        for child in self.children(C, R, c, first=(c == 0)):
            self.run(*child)


_worker_state: dict = {}


def _worker_init(n, spec, config, shared):
    items, arity, detector = _problem(n, spec)
    _worker_state.update(n=n, items=items, arity=arity, detector=detector, config=config, shared=shared)


def _worker_run(task):
    C, R, c = task
    s = _worker_state
    eng = _Engine(s["n"], s["items"], s["arity"], s["detector"], s["config"], s["shared"].value, 0, s["shared"])
    start = eng.best
    exhausted = True
    try:
        eng.run(C, R, c)
    except BudgetExceeded:
        exhausted = False
    found = eng.best_mask if eng.best > start and eng.best_mask else None
    return exhausted, (eng.best if found else -1), found, eng.stats


def _explore(n: int, spec: ForbiddenSpec, config: SearchConfig, seed_value: int, seed_mask: int):
    items, arity, detector = _problem(n, spec)
    full = (1 << len(items)) - 1
    root_R = full
    for i in range(len(items)):
        if detector.contains_with(0, i):
            root_R &= ~(1 << i)
    if config.workers == 1:
        eng = _Engine(n, items, arity, detector, config, seed_value, seed_mask)
        try:
            eng.run(0, root_R, 0)
            exhausted = True
        except BudgetExceeded:
            exhausted = False
        return eng.best, eng.best_mask, exhausted, eng.stats, items

    # Split the tree at a fixed depth in the parent, then hand the frontier to a pool.
    shared = mp.Value("i", seed_value)
    eng = _Engine(n, items, arity, detector, config, seed_value, seed_mask)
    frontier = [(0, root_R, 0)]
    for depth in range(config.split_depth):
        nxt = []
        for C, R, c in frontier:
            eng.stats.nodes += 1
            if config.bound_pruning and c + R.bit_count() <= eng.best:
                eng.stats.bound_prunes += 1
                continue
            if not R:
                if c > eng.best:
                    eng._record(C, c)
                continue
            nxt.extend(eng.children(C, R, c, first=(depth == 0)))
        frontier = nxt
    shared.value = eng.best
    best, best_mask, exhausted = eng.best, eng.best_mask, True
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    with ctx.Pool(config.workers, initializer=_worker_init, initargs=(n, spec, config, shared)) as pool:
        for ok, value, mask, stats in pool.imap_unordered(_worker_run, frontier):
            eng.stats.merge(stats)
            exhausted = exhausted and ok
            if mask is not None and value > best:
                best, best_mask = value, mask
    return best, best_mask, exhausted, eng.stats, items


def _as_witness(n: int, spec: ForbiddenSpec, items, mask: int):
    chosen = [items[i] for i in range(len(items)) if mask >> i & 1]
    if isinstance(spec, GraphClique):
        return frozenset(chosen)
    return TripleSystem(n, frozenset(chosen))


def _canonical_witness(W: TripleSystem) -> TripleSystem:
    """Relabel a witness deterministically: the isomorphic copy with the smallest bitstring."""
    from .canonical import canonical_key

    key = canonical_key(W.n, [W.sorted_edges()])[0]
    ts = all_triples(W.n)
    total = len(ts)
    return TripleSystem(W.n, frozenset(ts[total - 1 - i] for i in range(total) if key >> i & 1))


def is_spec_free(system, spec: ForbiddenSpec, n: Optional[int] = None) -> bool:
    """Full (non-incremental) check of a triple system, or of a graph edge set for :class:`GraphClique`."""
    if isinstance(spec, GraphClique):
        if n is None:
            raise ValueError("graph checks need the vertex count")
        items, _, det = _problem(n, spec)
        index = {p: i for i, p in enumerate(items)}
        mask = 0
        for p in system:
            mask |= 1 << index[tuple(sorted(p))]
        return not det.contains(mask)
    _, _, det = _problem(system.n, spec)
    return not det.contains(system.to_mask())


def max_edges(n: int, spec: ForbiddenSpec = BergePattern(), config: SearchConfig = SearchConfig()) -> SearchResult:
    """Largest number of triples (edges, for graph specs) on ``n`` vertices avoiding ``spec``.

    ``exhausted=True`` certifies the value. When the node budget runs out the
    best system found so far is returned with ``exhausted=False``.
    """
    limit = MAX_GRAPH_M if isinstance(spec, GraphClique) else MAX_CERTIFIED_N
    if n > limit:
        raise ValueError(f"n={n} is beyond the certified range (<= {limit})")
    if n < 0:
        raise ValueError("n must be non-negative")
    t0 = time.perf_counter()
    seed = config.seed
    if seed is None and config.auto_seed:
        seed = _default_seed(n, spec)
    seed_value, seed_mask = 0, 0
    if seed is not None and not isinstance(spec, GraphClique):
        if seed.n != n:
            raise ValueError("seed system has the wrong vertex count")
        if not is_spec_free(seed, spec):
            raise ValueError("seed system is not free of the forbidden configurations")
        seed_value, seed_mask = len(seed), seed.to_mask()
    best, best_mask, exhausted, stats, items = _explore(n, spec, config, seed_value, seed_mask)
    stats.wall_time = time.perf_counter() - t0
    witness = _as_witness(n, spec, items, best_mask)
    if isinstance(witness, TripleSystem):
        witness = _canonical_witness(witness)
        if not is_spec_free(witness, spec):
            raise AssertionError("search produced an invalid witness")
    elif not is_spec_free(witness, spec, n):
        raise AssertionError("search produced an invalid witness")
    return SearchResult(n, spec.label, best, witness, exhausted, stats, config)


def graph_max_edges(m: int, r: int, config: SearchConfig = SearchConfig()) -> SearchResult:
    """Turán number ``ex(m, K_r)`` for simple graphs, by the same engine."""
    if r < 3:
        raise ValueError("r must be at least 3")
    if m > MAX_GRAPH_M:
        raise ValueError(f"m={m} is beyond the certified range (<= {MAX_GRAPH_M})")
    return max_edges(m, GraphClique(r), config)


@dataclass
class Certification:
    n: int
    spec: str
    claimed: int
    status: str  # "certified", "refuted-larger", "refuted-smaller" or "inconclusive"
    result: SearchResult

    @property
    def ok(self) -> bool:
        return self.status == "certified"

    @property
    def message(self) -> str:
        r = self.result
        if self.status == "certified":
            return f"ex({self.n}) = {self.claimed} certified for {self.spec}"
        if self.status == "refuted-larger":
            return f"claim {self.claimed} refuted: a {r.value}-edge system exists"
        if self.status == "refuted-smaller":
            return f"claim {self.claimed} refuted: no {self.claimed}-edge witness (maximum is {r.value})"
        return f"search budget exhausted at best {r.value}; claim {self.claimed} undecided"

    def to_json(self) -> dict:
        d = self.result.to_json()
        d.update(claimed=self.claimed, status=self.status)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def certify_extremal(n: int, spec: ForbiddenSpec, claimed: int, config: SearchConfig = SearchConfig()) -> Certification:
    """Check a claimed extremal value: a witness of that size exists and nothing larger does."""
    res = max_edges(n, spec, config)
    if res.value > claimed:
        status = "refuted-larger"
    elif not res.exhausted:
        status = "inconclusive"
    elif res.value < claimed:
        status = "refuted-smaller"
    else:
        status = "certified"
    return Certification(n, spec.label, claimed, status, res)
