"""Triple systems, pattern graphs and the balanced 3-partite construction.

Vertices are the integers ``0 .. n-1``. A triple is stored as a strictly
increasing 3-tuple, and a :class:`TripleSystem` keeps its triples in a
frozenset, so two systems compare equal exactly when they have the same
vertex count and the same triples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator

Triple = tuple[int, int, int]
Pair = tuple[int, int]

# Stored systems are manipulated through bitmasks and permutations.
MAX_STORED_N = 64
# Formula operations stay within exact machine-size integers up to here.
MAX_FORMULA_N = 10**6


class ParseError(ValueError):
    """Malformed triple-system text. ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _as_triple(t: Iterable[int], n: int) -> Triple:
    vs = tuple(sorted(int(v) for v in t))
    if len(vs) != 3:
        raise ValueError(f"triple {tuple(t)!r} does not have 3 vertices")
    if vs[0] == vs[1] or vs[1] == vs[2]:
        raise ValueError(f"triple {vs!r} repeats a vertex")
    if vs[0] < 0 or vs[2] >= n:
        raise ValueError(f"triple {vs!r} has a vertex outside [0, {n})")
    return vs  # type: ignore[return-value]


def _as_pair(p: Iterable[int]) -> Pair:
    a, b = sorted(int(v) for v in p)
    return (a, b)


@dataclass(frozen=True)
class TripleSystem:
    """A 3-uniform hypergraph on the vertex set ``range(n)``."""

    n: int
    edges: frozenset[Triple] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if self.n > MAX_STORED_N:
            raise ValueError(f"stored systems support n <= {MAX_STORED_N}")
        edges = frozenset(_as_triple(t, self.n) for t in self.edges)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Iterable[int]]) -> "TripleSystem":
        """Build a system, rejecting duplicate triples (unlike the constructor)."""
        seen: set[Triple] = set()
        for t in triples:
            tt = _as_triple(t, n)
            if tt in seen:
                raise ValueError(f"duplicate triple {tt!r}")
            seen.add(tt)
        return cls(n, frozenset(seen))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self.edges))

    def __contains__(self, t) -> bool:
        return tuple(sorted(t)) in self.edges

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[Triple]:
        return sorted(self.edges)

    def add(self, t: Iterable[int]) -> "TripleSystem":
        return TripleSystem(self.n, self.edges | {_as_triple(t, self.n)})

    def remove(self, t: Iterable[int]) -> "TripleSystem":
        return TripleSystem(self.n, self.edges - {_as_triple(t, self.n)})

    def relabel(self, perm: Iterable[int]) -> "TripleSystem":
        """Image of the system under ``v -> perm[v]``."""
        p = list(perm)
        if sorted(p) != list(range(self.n)):
            raise ValueError("relabeling must be a permutation of range(n)")
        return TripleSystem(self.n, frozenset(tuple(sorted(p[v] for v in t)) for t in self.edges))

    def delete_vertex(self, v: int) -> "TripleSystem":
        """Drop ``v`` and its triples; vertices above ``v`` shift down by one."""
        _check_vertex(self, v)
        shift = lambda u: u - 1 if u > v else u  # noqa: E731
        kept = (t for t in self.edges if v not in t)
        return TripleSystem(self.n - 1, frozenset(tuple(shift(u) for u in t) for t in kept))

    def induced(self, vertices: Iterable[int]) -> "TripleSystem":
        """Subsystem induced on ``vertices``, relabeled to ``0..k-1`` in sorted order."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        kept = (t for t in self.edges if all(u in pos for u in t))
        return TripleSystem(len(vs), frozenset(tuple(pos[u] for u in t) for t in kept))

    def to_mask(self) -> int:
        """Bitmask over triples in lexicographic order of ``itertools.combinations``."""
        index = triple_index(self.n)
        m = 0
        for t in self.edges:
            m |= 1 << index[t]
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "TripleSystem":
        ts = all_triples(n)
        return cls(n, frozenset(ts[i] for i in range(len(ts)) if mask >> i & 1))


_TRIPLES_CACHE: dict[int, tuple[list[Triple], dict[Triple, int]]] = {}


def all_triples(n: int) -> list[Triple]:
    """All triples of ``range(n)`` in lexicographic order."""
    if n not in _TRIPLES_CACHE:
        ts = list(itertools.combinations(range(n), 3))
        _TRIPLES_CACHE[n] = (ts, {t: i for i, t in enumerate(ts)})
    return _TRIPLES_CACHE[n][0]


def triple_index(n: int) -> dict[Triple, int]:
    all_triples(n)
    return _TRIPLES_CACHE[n][1]


def complete_system(n: int) -> TripleSystem:
    return TripleSystem(n, frozenset(all_triples(n)))


@dataclass(frozen=True)
class PatternGraph:
    """A simple graph on ``range(k)``, the target of Berge containment."""

    k: int
    pattern_edges: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("vertex count must be non-negative")
        pairs = set()
        for e in self.pattern_edges:
            a, b = _as_pair(e)
            if a == b:
                raise ValueError(f"loop {e!r} in pattern graph")
            if a < 0 or b >= self.k:
                raise ValueError(f"pattern edge {e!r} outside [0, {self.k})")
            pairs.add((a, b))
        object.__setattr__(self, "pattern_edges", frozenset(pairs))

    @classmethod
    def complete(cls, k: int) -> "PatternGraph":
        return cls(k, frozenset(itertools.combinations(range(k), 2)))

    def sorted_edges(self) -> list[Pair]:
        return sorted(self.pattern_edges)

    def __len__(self) -> int:
        return len(self.pattern_edges)


K3 = PatternGraph.complete(3)
K4 = PatternGraph.complete(4)


@dataclass(frozen=True)
class Partition3:
    """Three disjoint vertex sets covering ``range(n)``, sizes as balanced as possible."""

    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        n = len(self.A) + len(self.B) + len(self.C)
        if (self.A | self.B | self.C) != frozenset(range(n)):
            raise ValueError("parts must be disjoint and cover range(n)")
        if not (n // 3 == len(self.A) <= len(self.B) <= len(self.C) == -(-n // 3)):
            raise ValueError("parts are not balanced")

    @property
    def n(self) -> int:
        return len(self.A) + len(self.B) + len(self.C)

    def parts(self) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        return (self.A, self.B, self.C)

    @classmethod
    def canonical(cls, n: int) -> "Partition3":
        """Balanced partition with the lowest ids in ``A`` and the highest in ``C``."""
        a, b = n // 3, (n + 1) // 3
        return cls(frozenset(range(a)), frozenset(range(a, a + b)), frozenset(range(a + b, n)))


def _check_formula_n(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    if n > MAX_FORMULA_N:
        raise OverflowError(f"n={n} exceeds the supported range (<= {MAX_FORMULA_N})")


def f(n: int) -> int:
    """Number of triples of the balanced complete 3-partite system on ``n`` vertices."""
    _check_formula_n(n)
    return (n // 3) * ((n + 1) // 3) * ((n + 2) // 3)


def diff(n: int) -> int:
    """``f(n) - f(n-1)``, evaluated from :func:`f` directly."""
    if n < 1:
        raise ValueError("diff needs n >= 1")
    return f(n) - f(n - 1)


def observation2_table(n: int) -> int:
    """The published piecewise value for ``f(n) - f(n-1)``.

    Kept only for side-by-side comparison with :func:`diff`; the two
    disagree by 2 whenever ``n`` is a multiple of 3.
    """
    _check_formula_n(n)
    if n < 1:
        raise ValueError("observation2_table needs n >= 1")
    k, r = divmod(n, 3)
    if r == 0:
        return k * k + 2
    if r == 1:
        return k * k
    return k * k + k


def discrepancy_report(n_max: int = 300) -> list[tuple[int, int, int]]:
    """``(n, table, direct)`` for every ``n <= n_max`` where the table and :func:`diff` differ."""
    return [
        (n, observation2_table(n), diff(n))
        for n in range(1, n_max + 1)
        if observation2_table(n) != diff(n)
    ]


def complete_3partite(partition: Partition3) -> TripleSystem:
    edges = frozenset(
        tuple(sorted(t)) for t in itertools.product(partition.A, partition.B, partition.C)
    )
    return TripleSystem(partition.n, edges)


def balanced_3partite(n: int) -> TripleSystem:
    """The balanced complete 3-partite triple system on the canonical partition."""
    return complete_3partite(Partition3.canonical(n))


def _check_vertex(H: TripleSystem, v: int) -> None:
    if not 0 <= v < H.n:
        raise ValueError(f"vertex {v} out of range for n={H.n}")


def degree(H: TripleSystem, v: int) -> int:
    _check_vertex(H, v)
    return sum(1 for t in H.edges if v in t)


def degrees(H: TripleSystem) -> list[int]:
    d = [0] * H.n
    for t in H.edges:
        for v in t:
            d[v] += 1
    return d


def min_degree(H: TripleSystem) -> int:
    return min(degrees(H), default=0)


def max_degree(H: TripleSystem) -> int:
    return max(degrees(H), default=0)


def codegree(H: TripleSystem, pair: Iterable[int]) -> int:
    a, b = _as_pair(pair)
    if a == b:
        raise ValueError(f"pair {pair!r} needs two distinct vertices")
    _check_vertex(H, a)
    _check_vertex(H, b)
    return sum(1 for t in H.edges if a in t and b in t)


def codegrees(H: TripleSystem) -> dict[Pair, int]:
    """Codegree of every pair of ``range(n)``, uncovered pairs included."""
    cd = {p: 0 for p in itertools.combinations(range(H.n), 2)}
    for a, b, c in H.edges:
        cd[(a, b)] += 1
        cd[(a, c)] += 1
        cd[(b, c)] += 1
    return cd


def uncovered_graph(H: TripleSystem):
    """Graph on ``range(n)`` whose edges are the pairs lying in no triple."""
    import networkx as nx

    W = nx.Graph()
    W.add_nodes_from(range(H.n))
    W.add_edges_from(p for p, c in codegrees(H).items() if c == 0)
    return W


def serialize(H: TripleSystem) -> str:
    lines = [f"{H.n} {len(H.edges)}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in H.sorted_edges())
    return "\n".join(lines) + "\n"


def parse(text: str) -> TripleSystem:
    """Read the ``"n m"`` header followed by ``m`` lines ``"a b c"``.

    Triples must be written increasing (``a < b < c``); the input is strict
    so that a round trip through :func:`serialize` is the identity.
    """
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, toks) for i, toks in lines if toks]
    if not lines:
        raise ParseError("empty input", 1)
    head_line, head = lines[0]
    if len(head) != 2:
        raise ParseError("header must be 'n m'", head_line)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError("header must contain two integers", head_line) from None
    if n < 0 or m < 0:
        raise ParseError("negative count in header", head_line)
    if n > MAX_STORED_N:
        raise ParseError(f"n={n} exceeds {MAX_STORED_N}", head_line)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] + 1 if body else head_line + 1)
        raise ParseError(f"expected {m} triples, found {len(body)}", where)
    seen: set[Triple] = set()
    for i, toks in body:
        if len(toks) != 3:
            raise ParseError("a triple line needs exactly 3 vertices", i)
        try:
            a, b, c = (int(x) for x in toks)
        except ValueError:
            raise ParseError("vertices must be integers", i) from None
        if a == b or b == c or a == c:
            raise ParseError("repeated vertex in triple", i)
        if not a < b < c:
            raise ParseError("vertices must be listed in increasing order", i)
        if a < 0 or c >= n:
            raise ParseError(f"vertex out of range [0, {n})", i)
        if (a, b, c) in seen:
            raise ParseError("duplicate triple", i)
        seen.add((a, b, c))
    return TripleSystem(n, frozenset(seen))


def max_possible_edges(n: int) -> int:
    return comb(n, 3)
