import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from reference import expand_trace

from pclique.graph import Graph, degree_permute, random_graph
from pclique.instances import complete, small_example, generate
from pclique.search import (Deadline, SearchNodeLabel, brute_force_omega, max_clique,
                            record_location, replay)


def permuted(g):
    return degree_permute(g)[0]


def test_small_example():
    g = permuted(small_example())
    inc, stats = max_clique(g)
    assert inc.members == (1, 3, 6, 8) and inc.size == 4
    assert stats.nodes == 4 and inc.found_at_label == SearchNodeLabel((1, 1, 1, 1))
    assert brute_force_omega(g) == 4
    empty, primed = max_clique(g, 4)
    assert empty.empty and primed.nodes == 1


def test_trivial_graphs():
    assert max_clique(permuted(complete(6)))[0].size == 6
    inc, stats = max_clique(Graph.from_dense(np.zeros((0, 0), bool)))
    assert inc.size == 0 and stats.nodes == 1
    assert brute_force_omega(Graph.from_edges(5, [])) == 1


def test_prime_at_n_prunes_at_root():
    g = permuted(random_graph(40, 0.5, 3))
    inc, stats = max_clique(g, g.n)
    assert inc.empty and stats.nodes == 1


@pytest.mark.parametrize("name, omega, total, prove", [
    ("c-fat200-2", 24, 24, 1),
    ("MANN_a9", 16, 71, 60),
])
def test_reference_rows(name, omega, total, prove):
    g = permuted(generate(name))
    inc, stats = max_clique(g)
    assert (inc.size, stats.nodes) == (omega, total)
    empty, primed = max_clique(g, omega)
    assert empty.empty and primed.nodes == prove
    assert max_clique(g, omega - 1)[0].size == omega


def test_hamming_location():
    inc, _ = max_clique(permuted(generate("hamming6-2")))
    assert inc.found_at_label.path == (1,) * 32
    assert inc.found_at_label.render() == "1×32"


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 40), st.floats(0.1, 0.95), st.integers(0, 2**32))
def test_agrees_with_reference(n, p, seed):
    g = permuted(random_graph(n, p, seed))
    size, clique, label, nodes, _ = expand_trace(g)
    inc, stats = max_clique(g)
    assert inc.size == size and stats.nodes == nodes
    assert inc.found_at_label.path == label
    assert inc.members == tuple(g.label_set(clique))
    assert g.is_clique([g.index_of(v) for v in inc.members])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 50), st.floats(0.2, 0.95), st.integers(0, 2**32))
def test_primed_properties(n, p, seed):
    g = permuted(random_graph(n, p, seed))
    inc, full = max_clique(g)
    empty, primed = max_clique(g, inc.size)
    assert empty.empty and primed.nodes <= full.nodes
    assert primed.nodes == expand_trace(g, inc.size)[3]
    assert max_clique(g, inc.size - 1)[0].size == inc.size
    chosen = replay(g, inc.found_at_label)
    assert len(chosen) == inc.size and g.is_clique(chosen)


def test_timeline_and_determinism():
    g = permuted(random_graph(120, 0.6, 11))
    a, sa = max_clique(g)
    b, sb = max_clique(g)
    sizes = [e.size for e in sa.incumbent_timeline]
    assert sizes == sorted(set(sizes)) and sizes[-1] == a.size
    assert sa.nodes >= len(sizes)
    assert sa.nodes == sb.nodes
    assert [(e.size, e.found_at_label) for e in sa.incumbent_timeline] == \
           [(e.size, e.found_at_label) for e in sb.incumbent_timeline]


def test_small_budget_gives_same_search():
    g = permuted(random_graph(90, 0.7, 8))
    a, sa = max_clique(g)
    b, sb = max_clique(g, budget=3)
    assert (a.size, a.found_at_label, sa.nodes) == (b.size, b.found_at_label, sb.nodes)


def test_timeout_returns_incomplete():
    g = permuted(random_graph(200, 0.9, 1))
    inc, stats = max_clique(g, timeout=0.05, budget=256)
    assert not stats.complete
    assert inc.size > 0 and g.is_clique([g.index_of(v) for v in inc.members])


def test_cancel_flag_stops_kernel():
    g = permuted(random_graph(150, 0.9, 2))
    d = Deadline()
    d.cancel()
    _, stats = max_clique(g, deadline=d)
    assert not stats.complete and stats.nodes <= 2


def test_negative_bound_rejected():
    with pytest.raises(ValueError):
        max_clique(small_example(), -1)


def test_brute_force_refuses_large():
    with pytest.raises(ValueError):
        brute_force_omega(random_graph(25, 0.5, 0))


def test_label_render_and_parse():
    lab = SearchNodeLabel((22, 4, 10, 6) + (1,) * 17)
    assert lab.render() == "22, 4, 10, 6, 1×17"
    assert str(SearchNodeLabel((5, 1, 1))) == "(5, 1, 1)"
    assert SearchNodeLabel((1,) * 6 + (3,) + (1,) * 119).render() == "1×6, 3, 1×119"
    assert SearchNodeLabel.parse("10 7 1x10") == SearchNodeLabel((10, 7) + (1,) * 10)
    assert SearchNodeLabel().depth == 0 and str(SearchNodeLabel()) == "()"
    with pytest.raises(ValueError):
        SearchNodeLabel((0,))
    assert record_location([3, 2, 1, 9], 2) == SearchNodeLabel((3, 2))


def test_replay_rejects_missing_branch():
    g = permuted(small_example())
    with pytest.raises(ValueError):
        replay(g, (50,))
