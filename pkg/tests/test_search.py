import json

import pytest

from bergek4.core import K3, K4, TripleSystem, balanced_3partite
from bergek4.detect import find_k43_minus_e, is_berge_free
from bergek4.search import (
    BergeMinusExpansion,
    BergePattern,
    ExplicitPatterns,
    GraphClique,
    SearchConfig,
    certify_extremal,
    graph_max_edges,
    is_spec_free,
    max_edges,
)

from oracles import brute_berge, brute_extremal, has_clique

NO_SHORTCUTS = SearchConfig(bound_pruning=False, iso_rejection=False, auto_seed=False)


@pytest.mark.parametrize("n, expected", [(3, 1), (4, 4), (5, 5), (6, 8)])
def test_berge_k4_small(n, expected):
    res = max_edges(n, BergePattern(K4))
    assert res.exhausted and res.value == expected
    assert len(res.witness) == expected and is_berge_free(res.witness, K4)


@pytest.mark.parametrize("n", range(3, 8))
def test_berge_k3_matches_quadratic(n):
    res = max_edges(n, BergePattern(K3))
    assert res.exhausted and res.value == n * n // 8
    assert is_berge_free(res.witness, K3)


def test_corollary_value():
    res = max_edges(6, BergeMinusExpansion(K4))
    assert res.exhausted and res.value == 8


@pytest.mark.parametrize("m, expected", [(6, 12), (5, 8), (3, 3)])
def test_turan_examples(m, expected):
    res = graph_max_edges(m, 4)
    assert res.exhausted and res.value == expected
    assert len(res.witness) == expected and not has_clique(res.witness, m, 4)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_agrees_with_subset_enumeration(n):
    def free(chosen):
        return not brute_berge(chosen, n, K4.pattern_edges, 4)
    assert max_edges(n, BergePattern(K4)).value == brute_extremal(n, free)


@pytest.mark.parametrize("spec", [BergePattern(K4), BergePattern(K3), BergeMinusExpansion(K4)])
@pytest.mark.parametrize("n", [4, 5])
def test_pruning_soundness(spec, n):
    assert max_edges(n, spec, NO_SHORTCUTS).value == max_edges(n, spec).value


def test_pruning_soundness_graphs():
    for m in range(3, 7):
        assert graph_max_edges(m, 4, NO_SHORTCUTS).value == graph_max_edges(m, 4).value == m * m // 3


def test_explicit_patterns_against_enumeration():
    k43e = TripleSystem(4, {(0, 1, 2), (0, 1, 3), (0, 2, 3)})
    path = TripleSystem(5, {(0, 1, 2), (1, 2, 3), (2, 3, 4)})
    for n in (4, 5):
        got = max_edges(n, ExplicitPatterns((k43e,))).value
        want = brute_extremal(n, lambda ch: find_k43_minus_e(TripleSystem(n, frozenset(ch))) is None)
        assert got == want
    res = max_edges(6, ExplicitPatterns((k43e, path)))
    assert res.exhausted and find_k43_minus_e(res.witness) is None


def test_monotone_and_sandwich():
    prev = 0
    for n in range(3, 8):
        b = max_edges(n, BergePattern(K4)).value
        assert b >= prev
        prev = b
        if n <= 6:
            assert max_edges(n, BergeMinusExpansion(K4)).value >= b


def test_value_independent_of_workers_and_ordering():
    base = max_edges(6, BergePattern(K4))
    for cfg in (SearchConfig(workers=2, split_depth=4), SearchConfig(ordering="degree"),
                SearchConfig(iso_depth=0), SearchConfig(auto_seed=False)):
        res = max_edges(6, BergePattern(K4), cfg)
        assert (res.value, res.exhausted) == (base.value, base.exhausted)
        assert is_berge_free(res.witness, K4)


def test_budget_exhaustion_returns_best_so_far():
    res = max_edges(7, BergePattern(K4), SearchConfig(node_budget=5, auto_seed=False))
    assert not res.exhausted
    assert len(res.witness) == res.value and is_berge_free(res.witness, K4)


def test_seed_is_validated():
    with pytest.raises(ValueError):
        max_edges(6, BergePattern(K4), SearchConfig(seed=balanced_3partite(5)))
    dense = TripleSystem(5, frozenset((a, b, c) for a in range(5) for b in range(a + 1, 5) for c in range(b + 1, 5)))
    with pytest.raises(ValueError):
        max_edges(5, BergePattern(K4), SearchConfig(seed=dense))


def test_range_limits():
    with pytest.raises(ValueError):
        max_edges(11, BergePattern(K4))
    with pytest.raises(ValueError):
        graph_max_edges(13, 4)
    with pytest.raises(ValueError):
        graph_max_edges(5, 2)
    with pytest.raises(ValueError):
        SearchConfig(node_budget=0)


def test_is_spec_free_for_graphs():
    assert is_spec_free([(0, 1), (1, 2), (0, 2)], GraphClique(4), 4)
    k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    assert not is_spec_free(k4, GraphClique(4), 4)


def test_certify_success():
    cert = certify_extremal(5, BergePattern(K4), 5)
    assert cert.ok and cert.status == "certified"
    rec = json.loads(cert.dumps())
    for key in ("n", "spec", "value", "witness", "exhausted", "nodes", "config"):
        assert key in rec
    assert rec["value"] == 5 and rec["exhausted"] and len(rec["witness"]) == 5


def test_certify_refutes_too_high():
    cert = certify_extremal(6, BergePattern(K4), 9)
    assert cert.status == "refuted-smaller" and "no 9-edge witness" in cert.message


def test_certify_refutes_too_low():
    cert = certify_extremal(6, BergePattern(K4), 7)
    assert cert.status == "refuted-larger" and cert.result.value == 8


def test_certify_inconclusive_on_budget():
    cert = certify_extremal(7, BergePattern(K4), 12, SearchConfig(node_budget=3, auto_seed=False))
    assert cert.status == "inconclusive"


def test_result_json_has_schema_fields():
    rec = max_edges(4, BergePattern(K4)).to_json()
    assert rec["spec"] == "berge(K4)"
    assert rec["witness"] == sorted(rec["witness"])
    assert set(rec["config"]) >= {"iso_depth", "workers", "node_budget", "seed"}
