"""Labeled trace multigraphs and the surplus/block bookkeeping built on them.

For a triple system ``H`` and a core set ``A``, the trace lives on the
vertices outside ``A``. A triple meeting ``A`` in two vertices ``{a, b}`` is a
loop at its third vertex labeled ``(a, b)``; a triple meeting ``A`` in one
vertex ``a`` is a link between its other two vertices labeled ``(a,)``. Every
loop and link therefore corresponds to exactly one triple of ``H``.

The structural checks (``check_no_sdr``, ``check_multiplicity_props``) take a
trace whose core is an anchored Berge-triangle ``{123, 12x, 23y}`` and report
violations as data instead of raising, so they can be run on arbitrary input.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

import networkx as nx

from .core import TripleSystem, diff
from .detect import AnchoredTriangle

Label = tuple[int, ...]
Loop = tuple[int, Label]
Link = tuple[int, int, Label]


@dataclass(frozen=True)
class TraceMultigraph:
    """Multigraph with labeled loops and links; parallel copies are listed separately."""

    core: tuple[int, ...]
    vertices: tuple[int, ...]
    loops: tuple[Loop, ...] = ()
    links: tuple[Link, ...] = ()

    def __post_init__(self):
        vs = set(self.vertices)
        loops = tuple(sorted((v, tuple(sorted(lab))) for v, lab in self.loops))
        links = tuple(sorted((*sorted((u, v)), tuple(sorted(lab))) for u, v, lab in self.links))
        for v, _ in loops:
            if v not in vs:
                raise ValueError(f"loop at unknown vertex {v}")
        for u, v, _ in links:
            if u == v:
                raise ValueError("use a loop, not a link, for u == v")
            if u not in vs or v not in vs:
                raise ValueError(f"link {u}-{v} leaves the vertex set")
        object.__setattr__(self, "core", tuple(sorted(self.core)))
        object.__setattr__(self, "vertices", tuple(sorted(vs)))
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "links", links)

    @property
    def size(self) -> int:
        """Number of loops plus links, counted with multiplicity."""
        return len(self.loops) + len(self.links)

    def loop_multiplicity(self, v: int) -> int:
        return sum(1 for w, _ in self.loops if w == v)

    def link_multiplicity(self, u: int, v: int) -> int:
        a, b = sorted((u, v))
        return sum(1 for x, y, _ in self.links if (x, y) == (a, b))

    def link_counts(self) -> Counter:
        return Counter((u, v) for u, v, _ in self.links)

    def loop_counts(self) -> Counter:
        return Counter(v for v, _ in self.loops)

    def incident(self, v: int) -> list[tuple[str, int, Label]]:
        """Loops and links at ``v`` as ``(kind, other end, label)``; a loop's other end is ``v``."""
        out = [("loop", v, lab) for w, lab in self.loops if w == v]
        out += [("link", b if a == v else a, lab) for a, b, lab in self.links if v in (a, b)]
        return out

    def restrict(self, vertices: Iterable[int]) -> "TraceMultigraph":
        vs = set(vertices)
        return TraceMultigraph(
            self.core,
            tuple(vs),
            tuple(lp for lp in self.loops if lp[0] in vs),
            tuple(lk for lk in self.links if lk[0] in vs and lk[1] in vs),
        )

    def to_json(self) -> dict:
        return {
            "core": list(self.core),
            "vertices": list(self.vertices),
            "loops": [{"v": v, "label": list(lab)} for v, lab in self.loops],
            "links": [{"u": u, "v": v, "label": list(lab)} for u, v, lab in self.links],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "TraceMultigraph":
        return cls(
            tuple(data["core"]),
            tuple(data["vertices"]),
            tuple((d["v"], tuple(d["label"])) for d in data["loops"]),
            tuple((d["u"], d["v"], tuple(d["label"])) for d in data["links"]),
        )


def trace(H: TripleSystem, A: Iterable[int]) -> TraceMultigraph:
    core = frozenset(A)
    if not core or not core < frozenset(range(H.n)):
        raise ValueError("the core must be a proper nonempty subset of the vertices")
    loops, links = [], []
    for t in H.sorted_edges():
        inside = tuple(v for v in t if v in core)
        outside = [v for v in t if v not in core]
        if len(inside) == 2:
            loops.append((outside[0], inside))
        elif len(inside) == 1:
            links.append((outside[0], outside[1], inside))
    rest = tuple(v for v in range(H.n) if v not in core)
    return TraceMultigraph(tuple(core), rest, tuple(loops), tuple(links))


def surplus(T: TraceMultigraph, vertices: Optional[Iterable[int]] = None) -> int:
    """Loops plus excess parallel links, optionally on the sub-multigraph induced by ``vertices``."""
    if vertices is not None:
        T = T.restrict(vertices)
    return len(T.loops) + sum(mu - 1 for mu in T.link_counts().values())


def simple_reduction(T: TraceMultigraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(T.vertices)
    G.add_edges_from(T.link_counts())
    return G


def surplus_subgraph(T: TraceMultigraph) -> TraceMultigraph:
    """All loops and all copies of multiple links, on the full vertex set."""
    multi = {e for e, mu in T.link_counts().items() if mu >= 2}
    return TraceMultigraph(T.core, T.vertices, T.loops, tuple(lk for lk in T.links if (lk[0], lk[1]) in multi))


@dataclass(frozen=True)
class Component:
    vertices: frozenset[int]
    surplus: int

    @property
    def bad(self) -> bool:
        return self.surplus > len(self.vertices)


def components(T: TraceMultigraph) -> list[Component]:
    """Connected components (loops and parallel copies do not matter), each with its surplus."""
    G = simple_reduction(T)
    comps = [frozenset(c) for c in nx.connected_components(G)]
    comps.sort(key=min)
    return [Component(c, surplus(T, c)) for c in comps]


def blocks(T: TraceMultigraph) -> list[Component]:
    """Components of the surplus subgraph of ``T``."""
    return components(surplus_subgraph(T))


def check_bad_components_have_bad_block(T: TraceMultigraph) -> bool:
    bad_blocks = [b.vertices for b in blocks(T) if b.bad]
    return all(any(b <= c.vertices for b in bad_blocks) for c in components(T) if c.bad)


class BadKind(enum.Enum):
    TRIPLE_LOOP = "triple-loop"
    M_STAR = "m-star"
    DOUBLE_LOOP = "double-loop"
    DUMBBELL = "dumbbell"
    OTHER = "other"


@dataclass(frozen=True)
class BadComponentClass:
    kind: BadKind
    m: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.kind.value}({self.m})" if self.kind is BadKind.M_STAR else self.kind.value


def classify_bad_component(T: TraceMultigraph, C: Union[Component, Iterable[int]], x: int, y: int) -> BadComponentClass:
    """Match a bad component against the four shapes that can occur in an extremal counterexample."""
    vs = C.vertices if isinstance(C, Component) else frozenset(C)
    sub = T.restrict(vs)
    loops = sub.loop_counts()
    links = sub.link_counts()
    s = surplus(sub)
    if len(vs) == 1:
        (v,) = vs
        if loops[v] == 3 and v == x:
            return BadComponentClass(BadKind.TRIPLE_LOOP)
        if loops[v] == 2:
            return BadComponentClass(BadKind.DOUBLE_LOOP)
        return BadComponentClass(BadKind.OTHER)
    if len(vs) == 2 and len(links) == 1 and list(links.values()) == [2]:
        u, v = sorted(vs)
        if sorted((loops[u], loops[v])) in ([1, 1], [0, 2]) and s == 3:
            return BadComponentClass(BadKind.DUMBBELL)
        return BadComponentClass(BadKind.OTHER)
    if x in vs and len(vs) >= 3 and loops[x] == 2 and len(loops) == 1:
        leaves = vs - {x}
        star = all(links.get(tuple(sorted((x, z)))) == 2 for z in leaves) and len(links) == len(leaves)
        # Independence is judged in the whole trace, not only inside the component.
        independent = not any(a in leaves and b in leaves for a, b, _ in T.links)
        if star and independent and s == len(vs) + 1:
            return BadComponentClass(BadKind.M_STAR, len(vs))
    return BadComponentClass(BadKind.OTHER)


def _z_set(T: TraceMultigraph, anchor: AnchoredTriangle) -> list[int]:
    return [v for v in T.vertices if v not in (anchor.x, anchor.y)]


def _check_core(T: TraceMultigraph, anchor: Optional[AnchoredTriangle] = None) -> None:
    if len(T.core) != 3:
        raise ValueError("this check needs a trace on a 3-vertex core")
    if anchor is not None and tuple(sorted(anchor.labels)) != T.core:
        raise ValueError("the anchor's triangle is not the trace core")


def vertex_class(T: TraceMultigraph, v: int) -> frozenset[int]:
    """Union of the labels on all loops and links at ``v``."""
    return frozenset(u for _, _, lab in T.incident(v) for u in lab)


def z_partition(T: TraceMultigraph, x: int, y: int) -> dict[frozenset[int], frozenset[int]]:
    """Classes ``Z_I`` for every subset ``I`` of the core, with ``x`` and ``y`` left out."""
    _check_core(T)
    out: dict[frozenset[int], set[int]] = {
        frozenset(I): set() for r in range(4) for I in itertools.combinations(T.core, r)
    }
    for v in T.vertices:
        if v in (x, y):
            continue
        out[vertex_class(T, v)].add(v)
    return {k: frozenset(v) for k, v in out.items()}


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: int
    items: tuple = ()
    detail: str = ""


def _has_sdr(labels: list[Label]) -> bool:
    return any(len(set(pick)) == len(pick) for pick in itertools.product(*labels))


def check_no_sdr(H: Optional[TripleSystem], T: TraceMultigraph, anchor: AnchoredTriangle) -> list[Violation]:
    """Every three loops/links at a vertex of ``Z`` whose labels admit distinct representatives.

    Each such triple, together with the anchored triangle, spans a Berge-K4,
    so a Berge-K4-free ``H`` yields an empty list. ``H`` may be None for a
    hand-built trace, in which case the anchor is not validated.
    """
    _check_core(T, anchor)
    if H is not None and not anchor.is_valid(H):
        raise ValueError("anchor is not a Berge-triangle of H")
    out = []
    for z in _z_set(T, anchor):
        inc = T.incident(z)
        for trio in itertools.combinations(range(len(inc)), 3):
            labels = [inc[i][2] for i in trio]
            if _has_sdr(labels):
                out.append(Violation("no-sdr", z, tuple(inc[i] for i in trio)))
    return out


def check_multiplicity_props(H: Optional[TripleSystem], T: TraceMultigraph, anchor: AnchoredTriangle) -> list[Violation]:
    """The four multiplicity consequences of the no-SDR property, as a list of violations."""
    _check_core(T, anchor)
    if H is not None and not anchor.is_valid(H):
        raise ValueError("anchor is not a Berge-triangle of H")
    Z = set(_z_set(T, anchor))
    loops = T.loop_counts()
    links = T.link_counts()
    cls = {v: vertex_class(T, v) for v in Z}
    out: list[Violation] = []

    # 1. multiplicity at most two for loops and links touching Z
    for v in sorted(Z):
        if loops[v] >= 3:
            out.append(Violation("mult-1", v, (("loop", loops[v]),), "loop multiplicity above two"))
    for (u, v), mu in sorted(links.items()):
        if mu >= 3 and (u in Z or v in Z):
            out.append(Violation("mult-1", u if u in Z else v, ((u, v), mu), "link multiplicity above two"))

    # 2. a double loop is a one-vertex component inside Z_123
    for v in sorted(Z):
        if loops[v] >= 2:
            if any(v in e for e in links):
                out.append(Violation("mult-2", v, (), "double loop with a link attached"))
            if cls[v] != frozenset(T.core):
                out.append(Violation("mult-2", v, tuple(sorted(cls[v])), "double loop outside Z_123"))

    # 3. multiple links inside Z stay within a single Z_ij
    for (u, v), mu in sorted(links.items()):
        if mu >= 2 and u in Z and v in Z and not (cls[u] == cls[v] and len(cls[u]) == 2):
            out.append(Violation("mult-3", u, ((u, v), tuple(sorted(cls[u])), tuple(sorted(cls[v])))))

    # 4. ends of two consecutive double links in one Z_ij carry nothing else
    for v2 in sorted(Z):
        if len(cls[v2]) != 2:
            continue
        nbrs = sorted(
            w for (a, b), mu in links.items() if mu >= 2 and v2 in (a, b)
            for w in [b if a == v2 else a] if w in Z and cls[w] == cls[v2]
        )
        if len(nbrs) < 2:
            continue
        for v1, v3 in itertools.combinations(nbrs, 2):
            for end in (v1, v3):
                extra = [inc for inc in T.incident(end) if not (inc[0] == "link" and inc[1] == v2)]
                if extra:
                    out.append(Violation("mult-4", end, (v1, v2, v3), f"{len(extra)} further loops/links"))
    return out


@dataclass
class BoundReport:
    n: int
    anchor: AnchoredTriangle
    surplus: int
    bad_surplus: int
    m: int
    p: int
    q: int
    other: int
    rho: int
    alpha: Fraction
    U: tuple[int, ...]
    M: int
    edges: int
    edges_star: int
    edges_star_U: int
    classes: list[tuple[tuple[int, ...], str]] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def star_surplus(self) -> int:
        """Surplus carried by the component at ``x``: 3 for a triple loop, m+1 for an m-star."""
        if self.m == 0:
            return 0
        return 3 if self.m == 1 else self.m + 1

    @property
    def turan_lhs(self) -> int:
        return self.M

    @property
    def turan_rhs(self) -> Fraction:
        return Fraction(len(self.U) ** 2, 3)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "anchor": {"labels": list(self.anchor.labels), "x": self.anchor.x, "y": self.anchor.y},
            "surplus": self.surplus,
            "bad_surplus": self.bad_surplus,
            "star_surplus": self.star_surplus,
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "other": self.other,
            "rho": self.rho,
            "alpha": str(self.alpha),
            "U": list(self.U),
            "M": self.M,
            "edges": self.edges,
            "edges_star": self.edges_star,
            "edges_star_U": self.edges_star_U,
            "turan_lhs": self.turan_lhs,
            "turan_rhs": str(self.turan_rhs),
            "classes": [{"vertices": list(v), "class": c} for v, c in self.classes],
            "checks": dict(self.checks),
        }


def bound_report(H: TripleSystem, anchor: AnchoredTriangle) -> BoundReport:
    """Surplus accounting and the counting bounds for the trace on an anchored triangle.

    Nothing here is asserted: on an arbitrary system the inequalities can fail,
    and ``checks`` records which ones hold.
    """
    if not anchor.is_valid(H):
        raise ValueError("anchor is not a Berge-triangle of H")
    n = H.n
    if n < 4:
        raise ValueError("need at least one vertex outside the triangle")
    T = trace(H, anchor.labels)
    comps = components(T)
    x, y = anchor.x, anchor.y
    m = p = q = other = 0
    covered: set[int] = set()
    classes = []
    for c in comps:
        if not c.bad:
            continue
        kind = classify_bad_component(T, c, x, y)
        classes.append((tuple(sorted(c.vertices)), str(kind)))
        covered |= c.vertices
        if kind.kind is BadKind.TRIPLE_LOOP:
            m = 1
        elif kind.kind is BadKind.M_STAR:
            m = kind.m
        elif kind.kind is BadKind.DOUBLE_LOOP:
            p += 1
        elif kind.kind is BadKind.DUMBBELL:
            q += 1
        else:
            other += len(c.vertices)
    rho = 2 if m == 1 else 1
    covered_count = m + p + 2 * q
    alpha = Fraction(covered_count, n - 3)
    U = tuple(v for v in T.vertices if v not in covered)
    s_total = surplus(T)
    bad_s = sum(c.surplus for c in comps if c.bad)
    d = diff(n)
    M = 3 * d - (n - 3 + (m - 1 + rho + p + 2 * q))
    Gstar = simple_reduction(T)
    e_star_U = Gstar.subgraph(U).number_of_edges()
    checks = {
        "surplus_split": s_total <= bad_s + len(U),
        "surplus_bound": s_total <= n - 3 + rho + p + q,
        "edge_lower_bound": Gstar.number_of_edges() >= 3 * d - (n - 3 + rho + p + q),
        "M_bound": e_star_U >= M,
        "turan": Fraction(M) >= Fraction(len(U) ** 2, 3),
        "taxonomy_complete": other == 0,
        "alpha_in_range": 0 <= alpha <= 1,
    }
    return BoundReport(n, anchor, s_total, bad_s, m, p, q, other, rho, alpha, U, M, T.size,
                       Gstar.number_of_edges(), e_star_U, classes, checks)


def toomany(n: int, alpha: Union[Fraction, int, str]) -> Fraction:
    """``9 diff(n) - 3(1+a)(n-3) - (1-a)^2 (n-3)^2 - 3`` in exact arithmetic."""
    a = Fraction(alpha)
    if n < 6:
        raise ValueError("toomany needs n >= 6")
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    k = n - 3
    return 9 * diff(n) - 3 * (1 + a) * k - (1 - a) ** 2 * k * k - 3


def _toomany_scaled(n: int, i: int, grid: int) -> int:
    """``grid**2 * toomany(n, i/grid)`` with integers only."""
    k = n - 3
    return grid * grid * (9 * diff(n) - 3) - 3 * grid * (grid + i) * k - (grid - i) ** 2 * k * k


def check_toomany(n_max: int, grid: int = 100) -> bool:
    """Non-negativity on ``[6, n_max]`` from the endpoints, cross-checked on a grid.

    The expression is a quadratic in alpha with leading coefficient
    ``-(n-3)^2``, hence concave, so its minimum over ``[0, 1]`` sits at an
    endpoint; the grid pass confirms no interior point goes lower.
    """
    for n in range(6, n_max + 1):
        ends = min(toomany(n, 0), toomany(n, 1))
        if ends < 0:
            return False
        if min(_toomany_scaled(n, i, grid) for i in range(grid + 1)) < ends * grid * grid:
            return False
    return True
