"""Berge-G containment with explicit certificates.

A Berge copy of a pattern graph ``G`` in a triple system ``H`` is an
injective placement of the pattern vertices (the *core*) together with a
bijection sending each pattern edge ``{i, j}`` to a distinct triple of ``H``
that contains ``{core[i], core[j]}``.

:func:`find_berge` is the general routine: for every core placement (up to
automorphisms of ``G``) it solves a small bipartite matching between pattern
edges and the host triples containing their images. :class:`BergeDetector`
answers the same question on bitmask-encoded systems and is what the
exhaustive search calls in its inner loop.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .core import (
    Pair,
    PatternGraph,
    Triple,
    TripleSystem,
    all_triples,
    triple_index,
)

MAX_PATTERN_K = 8


class DetectMode(enum.Enum):
    ANY = "any"
    NON_EXPANSION = "non-expansion"


@dataclass(frozen=True)
class BergeEmbedding:
    core: tuple[int, ...]
    assignment: tuple[tuple[Pair, Triple], ...]

    def as_dict(self) -> dict[Pair, Triple]:
        return dict(self.assignment)

    def triples(self) -> list[Triple]:
        return [t for _, t in self.assignment]

    def to_json(self) -> dict:
        return {
            "core": list(self.core),
            "assignment": [
                {"pair": list(p), "triple": list(t)} for p, t in sorted(self.assignment)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "BergeEmbedding":
        assignment = tuple(
            (tuple(sorted(a["pair"])), tuple(sorted(a["triple"]))) for a in data["assignment"]
        )
        return cls(tuple(data["core"]), tuple(sorted(assignment)))


def _make_embedding(core: tuple[int, ...], pattern_edges: list[Pair], triples) -> BergeEmbedding:
    return BergeEmbedding(core, tuple(sorted(zip(pattern_edges, triples))))


@lru_cache(maxsize=None)
def automorphisms(G: PatternGraph) -> tuple[tuple[int, ...], ...]:
    """All vertex permutations of ``G`` preserving its edge set (brute force)."""
    if G.k > MAX_PATTERN_K:
        raise ValueError(f"patterns are limited to {MAX_PATTERN_K} vertices")
    edges = G.pattern_edges
    auts = []
    for p in itertools.permutations(range(G.k)):
        if all(tuple(sorted((p[a], p[b]))) in edges for a, b in edges):
            auts.append(p)
    return tuple(auts)


@lru_cache(maxsize=None)
def core_placements(G: PatternGraph, n: int) -> tuple[tuple[int, ...], ...]:
    """Injections ``range(k) -> range(n)``, one per orbit of ``Aut(G)``.

    Two placements differing by an automorphism of ``G`` admit the same Berge
    copies, so only the lexicographically smallest of each orbit is kept.
    """
    auts = automorphisms(G)
    out = []
    for phi in itertools.permutations(range(n), G.k):
        if all(phi <= tuple(phi[s[i]] for i in range(G.k)) for s in auts):
            out.append(phi)
    return tuple(out)


def _augment(u: int, cands: list[list[int]], match_right: dict[int, int], seen: set[int]) -> bool:
    for t in cands[u]:
        if t in seen:
            continue
        seen.add(t)
        if t not in match_right or _augment(match_right[t], cands, match_right, seen):
            match_right[t] = u
            return True
    return False


def bipartite_matching(cands: list[list[int]]) -> Optional[list[int]]:
    """Left-perfect matching by augmenting paths, or None.

    ``cands[u]`` lists the right vertices allowed for left vertex ``u``.
    Returns ``choice`` with ``choice[u]`` the right vertex matched to ``u``.
    """
    match_right: dict[int, int] = {}
    for u in range(len(cands)):
        if not _augment(u, cands, match_right, set()):
            return None
    choice = [0] * len(cands)
    for t, u in match_right.items():
        choice[u] = t
    return choice


def _perfect_matchings(cands: list[list[int]]):
    """Yield every left-perfect matching, branching on the fewest-candidate vertex first."""
    k = len(cands)
    choice: list[Optional[int]] = [None] * k
    used: set[int] = set()

    def rec(remaining: int):
        if remaining == 0:
            yield list(choice)
            return
        best_u, best_opts = -1, None
        for u in range(k):
            if choice[u] is None:
                opts = [t for t in cands[u] if t not in used]
                if best_opts is None or len(opts) < len(best_opts):
                    best_u, best_opts = u, opts
                    if not opts:
                        return
        for t in best_opts:
            choice[best_u] = t
            used.add(t)
            yield from rec(remaining - 1)
            used.discard(t)
        choice[best_u] = None

    yield from rec(k)


def is_expansion(emb: BergeEmbedding) -> bool:
    """True when every assigned triple is its pair plus a private vertex outside the core."""
    core = set(emb.core)
    extra = []
    for (i, j), t in emb.assignment:
        rest = [v for v in t if v not in (emb.core[i], emb.core[j])]
        if len(rest) != 1 or rest[0] in core:
            return False
        extra.append(rest[0])
    return len(set(extra)) == len(extra)


def _pair_table(H: TripleSystem) -> dict[Pair, list[Triple]]:
    table: dict[Pair, list[Triple]] = {}
    for t in H.sorted_edges():
        a, b, c = t
        for p in ((a, b), (a, c), (b, c)):
            table.setdefault(p, []).append(t)
    return table


def _check_pattern(G: PatternGraph) -> None:
    if G.k > MAX_PATTERN_K:
        raise ValueError(f"patterns are limited to {MAX_PATTERN_K} vertices")


def iter_berge(H: TripleSystem, G: PatternGraph, mode: DetectMode = DetectMode.ANY,
               must_use: Optional[Iterable[int]] = None):
    """Yield Berge copies of ``G`` in ``H``, at most one per core placement.

    With ``must_use`` set, only copies assigning that triple to some pattern
    edge are considered.
    """
    _check_pattern(G)
    pedges = G.sorted_edges()
    if len(pedges) > len(H.edges) or G.k > H.n:
        return
    forced: Optional[Triple] = None
    if must_use is not None:
        forced = tuple(sorted(must_use))
        if forced not in H.edges:
            return
    by_pair = _pair_table(H)
    ids = {t: i for i, t in enumerate(H.sorted_edges())}
    triples = H.sorted_edges()
    for phi in core_placements(G, H.n):
        images = [tuple(sorted((phi[a], phi[b]))) for a, b in pedges]
        cands = [[ids[t] for t in by_pair.get(p, ())] for p in images]
        if any(not c for c in cands):
            continue
        if forced is None:
            slots = [None]
        else:
            fid = ids[forced]
            slots = [i for i, p in enumerate(images) if fid in cands[i]]
        for slot in slots:
            if slot is None:
                sub = cands
            else:
                sub = [[fid] if i == slot else [t for t in c if t != fid] for i, c in enumerate(cands)]
            if mode is DetectMode.ANY:
                choice = bipartite_matching(sub)
                if choice is not None:
                    yield _make_embedding(phi, pedges, [triples[t] for t in choice])
                    break
            else:
                found = None
                for choice in _perfect_matchings(sub):
                    emb = _make_embedding(phi, pedges, [triples[t] for t in choice])
                    if not is_expansion(emb):
                        found = emb
                        break
                if found is not None:
                    yield found
                    break


def find_berge(H: TripleSystem, G: PatternGraph, mode: DetectMode = DetectMode.ANY,
               must_use: Optional[Iterable[int]] = None) -> Optional[BergeEmbedding]:
    """Some Berge copy of ``G`` in ``H``, or None.

    In ``NON_EXPANSION`` mode the copy returned is guaranteed not to be an
    exact expansion of ``G``; None then means every copy (if any) is one.
    """
    return next(iter_berge(H, G, mode, must_use), None)


def is_berge_free(H: TripleSystem, G: PatternGraph, mode: DetectMode = DetectMode.ANY) -> bool:
    return find_berge(H, G, mode) is None


def verify_embedding(H: TripleSystem, G: PatternGraph, emb: BergeEmbedding) -> bool:
    core = emb.core
    if len(core) != G.k or len(set(core)) != G.k:
        return False
    if any(not 0 <= v < H.n for v in core):
        return False
    assignment = emb.as_dict()
    if len(assignment) != len(emb.assignment) or set(assignment) != set(G.pattern_edges):
        return False
    used = list(assignment.values())
    if len(set(used)) != len(used):
        return False
    for (i, j), t in assignment.items():
        if t not in H.edges:
            return False
        if core[i] not in t or core[j] not in t:
            return False
    return True


def expansion_of(G: PatternGraph) -> TripleSystem:
    """Each pattern edge ``e`` becomes ``e + {v_e}`` with a fresh vertex ``v_e``."""
    triples = [(a, b, G.k + i) for i, (a, b) in enumerate(G.sorted_edges())]
    return TripleSystem(G.k + len(triples), frozenset(triples))


def expansion_embedding(G: PatternGraph) -> BergeEmbedding:
    """The obvious copy of ``G`` inside :func:`expansion_of`."""
    pedges = G.sorted_edges()
    return _make_embedding(tuple(range(G.k)), pedges, [(a, b, G.k + i) for i, (a, b) in enumerate(pedges)])


@dataclass(frozen=True)
class K43MinusE:
    vertices: tuple[int, int, int, int]
    triples: tuple[Triple, Triple, Triple]


def find_k43_minus_e(H: TripleSystem) -> Optional[K43MinusE]:
    """A 4-set spanning at least three triples of ``H``."""
    for S in itertools.combinations(range(H.n), 4):
        inside = [t for t in itertools.combinations(S, 3) if t in H.edges]
        if len(inside) >= 3:
            return K43MinusE(S, tuple(inside[:3]))
    return None


def find_tight_path(H: TripleSystem) -> Optional[tuple[int, int, int, int, int]]:
    """Distinct ``a, b, c, d, e`` with ``abc``, ``bcd`` and ``cde`` all in ``H``."""
    edges = H.edges
    key = lambda *vs: tuple(sorted(vs))  # noqa: E731
    for t1 in H.sorted_edges():
        for a, b, c in itertools.permutations(t1):
            for d in range(H.n):
                if d in t1 or key(b, c, d) not in edges:
                    continue
                for e in range(H.n):
                    if e in t1 or e == d:
                        continue
                    if key(c, d, e) in edges:
                        return (a, b, c, d, e)
    return None


@dataclass(frozen=True)
class AnchoredTriangle:
    """Berge-triangle ``{123, 12x, 23y}``; ``labels`` holds the host vertices playing 1, 2, 3."""

    labels: tuple[int, int, int]
    x: int
    y: int

    @property
    def triples(self) -> tuple[Triple, Triple, Triple]:
        v1, v2, v3 = self.labels
        key = lambda *vs: tuple(sorted(vs))  # noqa: E731
        return (key(v1, v2, v3), key(v1, v2, self.x), key(v2, v3, self.y))

    @property
    def core(self) -> tuple[int, int, int]:
        return tuple(sorted(self.labels))  # type: ignore[return-value]

    def is_valid(self, H: TripleSystem) -> bool:
        if len(set(self.labels)) != 3 or self.x in self.labels or self.y in self.labels:
            return False
        return all(t in H.edges for t in self.triples)


def anchored_triangles(H: TripleSystem):
    """Every anchored Berge-triangle of ``H``: all ``x == y`` ones first, then the rest."""
    key = lambda *vs: tuple(sorted(vs))  # noqa: E731
    found_equal, found_distinct = [], []
    for t1 in H.sorted_edges():
        for v1, v2, v3 in itertools.permutations(t1):
            if v1 > v3:
                continue  # 123 and 321 give the same triangle
            xs = [x for x in range(H.n) if x not in t1 and key(v1, v2, x) in H.edges]
            ys = [y for y in range(H.n) if y not in t1 and key(v2, v3, y) in H.edges]
            for x in xs:
                for y in ys:
                    tri = AnchoredTriangle((v1, v2, v3), x, y)
                    (found_equal if x == y else found_distinct).append(tri)
    yield from found_equal
    yield from found_distinct


def find_berge_triangle_anchored(H: TripleSystem) -> Optional[AnchoredTriangle]:
    """A Berge-triangle ``{123, 12x, 23y}``, with ``x == y`` whenever a K4^3-e allows it."""
    return next(anchored_triangles(H), None)


class BergeDetector:
    """Berge-G test on triple systems encoded as bitmasks over :func:`all_triples`.

    For a fixed core placement, a host triple meeting exactly one image pair
    is private to that pattern edge, so any edge with a private triple can be
    satisfied independently. Only the remaining (deficient) edges compete for
    the shared triples lying inside the core image; that small matching is
    decided once per (deficient set, shared-present set) and memoised.
    """

    def __init__(self, n: int, G: PatternGraph, mode: DetectMode = DetectMode.ANY):
        _check_pattern(G)
        self.n = n
        self.G = G
        self.mode = mode
        # An expansion needs k + |E| vertices; below that every copy is a non-expansion.
        self.exact = mode is DetectMode.ANY or n < G.k + len(G.pattern_edges)
        triples = all_triples(n)
        index = triple_index(n)
        self.triples = triples
        pedges = G.sorted_edges()
        self.placements: list[tuple[list[int], list[int], list[tuple[int, ...]]]] = []
        self.by_triple: list[list[int]] = [[] for _ in triples]
        self._memo: dict[tuple[int, int, int], bool] = {}
        if G.k > n or not pedges:
            return
        for phi in core_placements(G, n):
            images = [tuple(sorted((phi[a], phi[b]))) for a, b in pedges]
            where = {p: i for i, p in enumerate(images)}
            private = [0] * len(images)
            shared: list[int] = []
            shared_cover: list[tuple[int, ...]] = []
            for i, (a, b) in enumerate(images):
                for w in range(n):
                    if w == a or w == b:
                        continue
                    t = tuple(sorted((a, b, w)))
                    covers = tuple(where[q] for q in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])) if q in where)
                    if len(covers) == 1:
                        private[i] |= 1 << index[t]
                    elif covers[0] == i:
                        shared.append(index[t])
                        shared_cover.append(covers)
            pid = len(self.placements)
            self.placements.append((private, shared, shared_cover))
            touched = set(shared)
            for m in private:
                while m:
                    low = m & -m
                    touched.add(low.bit_length() - 1)
                    m ^= low
            for t in touched:
                self.by_triple[t].append(pid)

    def _placement_hit(self, pid: int, mask: int) -> bool:
        private, shared, cover = self.placements[pid]
        deficient = 0
        for i, m in enumerate(private):
            if not mask & m:
                deficient |= 1 << i
        if not deficient:
            return True
        present = 0
        for j, t in enumerate(shared):
            if mask >> t & 1:
                present |= 1 << j
        if deficient.bit_count() > present.bit_count():
            return False
        key = (pid, deficient, present)
        hit = self._memo.get(key)
        if hit is None:
            rows = [i for i in range(len(private)) if deficient >> i & 1]
            cands = [[j for j in range(len(shared)) if present >> j & 1 and i in cover[j]] for i in rows]
            hit = bipartite_matching(cands) is not None
            self._memo[key] = hit
        return hit

    def contains(self, mask: int) -> bool:
        """Does the system ``mask`` contain a forbidden copy?"""
        if not self.exact:
            return find_berge(TripleSystem.from_mask(self.n, mask), self.G, self.mode) is not None
        return any(self._placement_hit(pid, mask) for pid in range(len(self.placements)))

    def contains_with(self, mask: int, t: int) -> bool:
        """Like :meth:`contains` for ``mask | bit t``, but only copies that use triple ``t``.

        When ``mask`` itself is free this is exactly the test for ``mask | bit t``.
        """
        mask |= 1 << t
        if not self.exact:
            H = TripleSystem.from_mask(self.n, mask)
            return find_berge(H, self.G, self.mode, must_use=self.triples[t]) is not None
        return any(self._placement_hit(pid, mask) for pid in self.by_triple[t])


def random_berge_free(n: int, G: PatternGraph, rng, mode: DetectMode = DetectMode.ANY,
                      max_edges: Optional[int] = None) -> TripleSystem:
    """Greedy insertion of triples in random order, rejecting any that creates a copy of ``G``.

    ``rng`` is a :class:`random.Random`; without ``max_edges`` the result is a
    maximal Berge-G-free system.
    """
    det = BergeDetector(n, G, mode)
    order = list(range(len(det.triples)))
    rng.shuffle(order)
    mask = 0
    count = 0
    for t in order:
        if max_edges is not None and count >= max_edges:
            break
        if not det.contains_with(mask, t):
            mask |= 1 << t
            count += 1
    return TripleSystem.from_mask(n, mask)
