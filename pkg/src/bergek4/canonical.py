"""Canonical forms for small colored uniform hypergraphs.

The structures handled here are lists of edge sets ("colors") over a common
vertex set ``range(n)``; every edge in one call has the same size. A plain
triple system is the one-color case, and the search engine canonicalises
(chosen, still-available) pairs as two colors.

Vertices are first split by iterated color refinement; the remaining ties are
broken by individualisation, skipping vertices that are interchangeable by a
transposition. The form is the smallest relabeled bitstring over the leaves of
that search tree, so it is an isomorphism invariant and separates
non-isomorphic inputs.
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Sequence

from .core import TripleSystem

MAX_CANONICAL_N = 10


def _refine(n: int, colors: Sequence[Sequence[tuple[int, ...]]], cell: list[int]) -> list[int]:
    """Stable vertex coloring refined from ``cell`` (equal values = same cell)."""
    incidence: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(n)]
    for ci, edges in enumerate(colors):
        for e in edges:
            for v in e:
                incidence[v].append((ci, tuple(u for u in e if u != v)))
    current = list(cell)
    while True:
        sigs = [
            (current[v], tuple(sorted((ci, tuple(sorted(current[u] for u in rest))) for ci, rest in incidence[v])))
            for v in range(n)
        ]
        order = sorted(set(sigs))
        rank = {s: i for i, s in enumerate(order)}
        new = [rank[s] for s in sigs]
        if len(order) == len(set(current)):
            return new
        current = new


def _is_transposition_automorphism(sets: list[frozenset], u: int, v: int) -> bool:
    def swap(e):
        return tuple(sorted(v if w == u else u if w == v else w for w in e))
    return all(swap(e) in s for s in sets for e in s if (u in e) != (v in e))


def _encode(n: int, r: int, colors, position: list[int]) -> tuple[int, ...]:
    index = {e: i for i, e in enumerate(itertools.combinations(range(n), r))}
    total = comb(n, r)
    key = []
    for edges in colors:
        m = 0
        for e in edges:
            m |= 1 << (total - 1 - index[tuple(sorted(position[v] for v in e))])
        key.append(m)
    return tuple(key)


def canonical_key(n: int, colors: Sequence[Sequence[tuple[int, ...]]], r: int = 3) -> tuple[int, ...]:
    """Minimal relabeled bitstrings (as integers, first edge most significant)."""
    if n > MAX_CANONICAL_N:
        raise ValueError(f"canonical forms are limited to n <= {MAX_CANONICAL_N}")
    colors = [[tuple(sorted(e)) for e in edges] for edges in colors]
    sets = [frozenset(edges) for edges in colors]
    best: list = [None]

    def search(cell: list[int]):
        cell = _refine(n, colors, cell)
        if len(set(cell)) == n:
            key = _encode(n, r, colors, cell)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        sizes: dict[int, list[int]] = {}
        for v, c in enumerate(cell):
            sizes.setdefault(c, []).append(v)
        target = min(c for c, vs in sizes.items() if len(vs) > 1)
        members = sizes[target]
        reps: list[int] = []
        for v in members:
            if not any(_is_transposition_automorphism(sets, u, v) for u in reps):
                reps.append(v)
        for v in reps:
            # Individualised vertex goes first within its old cell.
            nxt = [2 * c + (0 if u == v else 1) if c == target else 2 * c for u, c in enumerate(cell)]
            search(nxt)

    search([0] * n)
    return best[0] if best[0] is not None else tuple(0 for _ in colors)


def canonical_bytes(n: int, colors, r: int = 3) -> bytes:
    key = canonical_key(n, colors, r)
    width = (comb(n, r) + 7) // 8
    return bytes([n, r, len(key)]) + b"".join(k.to_bytes(width, "big") for k in key)


def canonical_form(H: TripleSystem) -> bytes:
    """Byte string equal for two systems exactly when they are isomorphic."""
    return canonical_bytes(H.n, [H.sorted_edges()])


def are_isomorphic(H1: TripleSystem, H2: TripleSystem) -> bool:
    return H1.n == H2.n and len(H1) == len(H2) and canonical_form(H1) == canonical_form(H2)
