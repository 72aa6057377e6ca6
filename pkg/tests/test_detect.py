import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from bergek4.core import K3, K4, PatternGraph, TripleSystem, all_triples, balanced_3partite, complete_system
from bergek4.detect import (
    AnchoredTriangle,
    BergeDetector,
    BergeEmbedding,
    DetectMode,
    automorphisms,
    core_placements,
    expansion_embedding,
    expansion_of,
    find_berge,
    find_berge_triangle_anchored,
    find_k43_minus_e,
    find_tight_path,
    is_berge_free,
    is_expansion,
    random_berge_free,
    verify_embedding,
)

from conftest import paper_labels, random_system
from oracles import brute_berge, brute_berge_k4, brute_berge_k4_fast

SIX_TRIPLES = ["134", "145", "135", "234", "235", "245"]


def test_six_triple_assignment():
    H = paper_labels(5, SIX_TRIPLES)
    emb = find_berge(H, K4)
    assert emb is not None and verify_embedding(H, K4, emb)
    # labels 1..5 are vertices 0..4; core 1,3,4,5 -> 0,2,3,4
    assert emb.core == (0, 2, 3, 4)
    expected = {(0, 1): "134", (0, 2): "145", (0, 3): "135", (1, 2): "234", (1, 3): "235", (2, 3): "245"}
    assert emb.as_dict() == {p: tuple(int(c) - 1 for c in t) for p, t in expected.items()}


def test_case_i1_alternative_assignment():
    H = paper_labels(5, [t for t in SIX_TRIPLES if t != "234"] + ["345"])
    emb = BergeEmbedding((0, 2, 3, 4), tuple(sorted({
        (0, 1): (0, 2, 3), (0, 2): (0, 3, 4), (0, 3): (0, 2, 4),
        (1, 2): (2, 3, 4), (1, 3): (1, 2, 4), (2, 3): (1, 3, 4),
    }.items())))
    assert verify_embedding(H, K4, emb)


def test_verify_rejects_reused_triple():
    H = paper_labels(5, SIX_TRIPLES)
    good = find_berge(H, K4)
    d = good.as_dict()
    d[(2, 3)] = d[(1, 2)]
    bad = BergeEmbedding(good.core, tuple(sorted(d.items())))
    assert not verify_embedding(H, K4, bad)


def test_verify_rejects_broken_core_and_missing_triples():
    H = paper_labels(5, SIX_TRIPLES)
    good = find_berge(H, K4)
    assert not verify_embedding(H, K4, BergeEmbedding((0, 0, 3, 4), good.assignment))
    assert not verify_embedding(TripleSystem(5, frozenset(list(H.edges)[:5])), K4, good)
    assert not verify_embedding(H, K4, BergeEmbedding(good.core, good.assignment[:5]))


@pytest.mark.parametrize("n", [6, 7, 8, 9])
def test_construction_is_free(n):
    assert find_berge(balanced_3partite(n), K4) is None
    assert is_berge_free(balanced_3partite(n), K4)


def test_complete_k4_3_has_too_few_triples():
    assert find_berge(complete_system(4), K4) is None


def test_five_triples_never_suffice(rng):
    for _ in range(100):
        n = rng.randint(4, 8)
        assert is_berge_free(random_system(rng, n, rng.randint(0, 5)), K4)


def _all_embeddings(H, G):
    """Every (core, assignment) by brute force, no matching and no symmetry reduction."""
    pedges = G.sorted_edges()
    for phi in itertools.permutations(range(H.n), G.k):
        pools = [[t for t in H.sorted_edges() if phi[a] in t and phi[b] in t] for a, b in pedges]
        for pick in itertools.product(*pools):
            if len(set(pick)) == len(pick):
                yield BergeEmbedding(phi, tuple(sorted(zip(pedges, pick))))


def test_expansion_has_only_expansion_copies():
    X = expansion_of(K4)
    embs = list(_all_embeddings(X, K4))
    assert embs and all(is_expansion(e) for e in embs)
    assert find_berge(X, K4, DetectMode.NON_EXPANSION) is None
    assert find_berge(X, K4) is not None


def test_non_expansion_found_after_extra_triple():
    X = expansion_of(K4).add((0, 1, 9))
    emb = find_berge(X, K4, DetectMode.NON_EXPANSION)
    assert emb is not None and not is_expansion(emb) and verify_embedding(X, K4, emb)
    det = BergeDetector(10, K4, DetectMode.NON_EXPANSION)
    assert det.contains(X.to_mask())
    assert not det.contains(expansion_of(K4).to_mask())


def test_doubly_covered_four_set_against_oracle():
    # six triples on six vertices covering every pair of {0,1,2,3} at least twice
    ts = all_triples(6)
    S = (0, 1, 2, 3)
    seen = 0
    for six in itertools.combinations(ts, 6):
        if all(sum(a in t and b in t for t in six) >= 2 for a, b in itertools.combinations(S, 2)):
            H = TripleSystem(6, frozenset(six))
            assert is_berge_free(H, K4) == (not brute_berge_k4(H.edges, 6))
            seen += 1
            if seen >= 40:
                break
    assert seen > 0


def test_expansion_of_sizes():
    X = expansion_of(K4)
    assert (X.n, len(X)) == (10, 6)
    assert (expansion_of(K3).n, len(expansion_of(K3))) == (6, 3)
    edge = PatternGraph(2, frozenset({(0, 1)}))
    assert expansion_of(edge) == TripleSystem(3, {(0, 1, 2)})
    for G in (K3, K4, edge):
        assert verify_embedding(expansion_of(G), G, expansion_embedding(G))


def test_k43_minus_e():
    H = TripleSystem(4, {(0, 1, 2), (0, 1, 3), (0, 2, 3)})
    assert find_k43_minus_e(H).vertices == (0, 1, 2, 3)
    assert find_k43_minus_e(complete_system(4)) is not None
    B = balanced_3partite(6)
    assert find_k43_minus_e(B) is None
    # brute force: every 4-set spans at most two triples of the construction
    assert max(sum(t in B.edges for t in itertools.combinations(S, 3))
               for S in itertools.combinations(range(6), 4)) == 2


def test_tight_path():
    assert find_tight_path(TripleSystem(5, {(0, 1, 2), (1, 2, 3), (2, 3, 4)})) == (0, 1, 2, 3, 4)
    assert find_tight_path(TripleSystem(6, {(0, 1, 2), (3, 4, 5)})) is None
    a, b, c, d, e = find_tight_path(balanced_3partite(9))
    H = balanced_3partite(9)
    assert len({a, b, c, d, e}) == 5
    assert all(tuple(sorted(t)) in H.edges for t in ((a, b, c), (b, c, d), (c, d, e)))


def test_anchored_triangle_prefers_equal_ends():
    H = TripleSystem(4, {(0, 1, 2), (0, 1, 3), (0, 2, 3)})
    tri = find_berge_triangle_anchored(H)
    assert tri.x == tri.y and tri.is_valid(H)


def test_anchored_triangle_from_tight_path():
    H = TripleSystem(5, {(0, 1, 2), (1, 2, 3), (2, 3, 4)})
    tri = find_berge_triangle_anchored(H)
    assert tri.x != tri.y and tri.is_valid(H)
    assert find_berge_triangle_anchored(TripleSystem(3, {(0, 1, 2)})) is None


def test_anchor_validity_rules():
    H = TripleSystem(5, {(0, 1, 2), (1, 2, 3), (2, 3, 4)})
    assert AnchoredTriangle((1, 2, 3), 0, 4).is_valid(H)
    assert not AnchoredTriangle((1, 2, 3), 4, 0).is_valid(H)
    assert not AnchoredTriangle((1, 2, 3), 3, 4).is_valid(H)
    assert AnchoredTriangle((1, 2, 3), 0, 4).triples == ((1, 2, 3), (0, 1, 2), (2, 3, 4))


def test_automorphism_counts():
    assert len(automorphisms(K4)) == 24
    assert len(automorphisms(K3)) == 6
    assert len(core_placements(K4, 6)) == 15


def test_embedding_json_round_trip():
    H = paper_labels(5, SIX_TRIPLES)
    emb = find_berge(H, K4)
    data = json.loads(emb.dumps())
    assert set(data) == {"core", "assignment"}
    assert all(set(a) == {"pair", "triple"} for a in data["assignment"])
    assert BergeEmbedding.from_json(data) == emb


small_systems = st.integers(min_value=4, max_value=7).flatmap(
    lambda n: st.sets(st.sampled_from(all_triples(n)), max_size=11).map(lambda s: TripleSystem(n, frozenset(s)))
)


@given(small_systems)
@settings(max_examples=150, deadline=None)
def test_detection_properties(H):
    emb = find_berge(H, K4)
    assert (emb is not None) == brute_berge_k4_fast(H.edges, H.n)
    if emb is not None:
        assert verify_embedding(H, K4, emb)
    det = BergeDetector(H.n, K4)
    assert det.contains(H.to_mask()) == (emb is not None)
    non = find_berge(H, K4, DetectMode.NON_EXPANSION)
    if non is not None:
        assert emb is not None
    # fewer than 10 vertices: no copy can be an expansion
    assert (non is None) == (emb is None)


@given(small_systems, st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_isomorphism_invariance(H, r):
    perm = list(range(H.n))
    r.shuffle(perm)
    assert (find_berge(H, K4) is None) == (find_berge(H.relabel(perm), K4) is None)
    assert (find_berge(H, K3) is None) == (find_berge(H.relabel(perm), K3) is None)


@given(small_systems)
@settings(max_examples=100, deadline=None)
def test_must_use_hook(H):
    det = BergeDetector(H.n, K4)
    index = {t: i for i, t in enumerate(all_triples(H.n))}
    for t in H.sorted_edges():
        rest = H.remove(t)
        if find_berge(rest, K4) is None:
            forced = find_berge(H, K4, must_use=t)
            assert (forced is not None) == (find_berge(H, K4) is not None)
            if forced is not None:
                assert t in forced.triples()
            assert det.contains_with(rest.to_mask(), index[t]) == (forced is not None)


@pytest.mark.parametrize("G", [K3, PatternGraph(4, frozenset({(0, 1), (1, 2), (2, 3)})),
                               PatternGraph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))])
def test_general_patterns_against_oracle(G, rng):
    for _ in range(60):
        n = rng.randint(G.k, 6)
        H = random_system(rng, n, rng.randint(0, 8))
        emb = find_berge(H, G)
        assert (emb is not None) == brute_berge(H.edges, n, G.pattern_edges, G.k)
        if emb is not None:
            assert verify_embedding(H, G, emb)
        assert BergeDetector(n, G).contains(H.to_mask()) == (emb is not None)


def test_random_free_systems_are_free(rng):
    for n in range(4, 10):
        H = random_berge_free(n, K4, rng)
        assert is_berge_free(H, K4)
        # maximal: no further triple can be added
        assert all(find_berge(H.add(t), K4) is not None for t in all_triples(n) if t not in H.edges)
