import pytest
from reference_rows import EXTRA, REFERENCE

from pclique.analysis import (IncompleteAnalysis, InstanceAnalysis, analyze_instance, balance_report,
                              incumbent_timeline)
from pclique.graph import degree_permute, random_graph
from pclique.instances import complete, small_example, generate
from pclique.parallel import ParallelStats, Resplit, StaticDepth, solve_parallel
from pclique.search import SearchNodeLabel, max_clique, replay


def permuted(g):
    return degree_permute(g)[0]


def test_c_fat200_1_row():
    a = analyze_instance(permuted(generate("c-fat200-1")))
    assert (a.omega, a.total_nodes, a.prove_nodes) == (12, 24, 3)
    assert a.row() == "c-fat200-1,12,24,3,87.5,5 1×11"


def test_hamming6_2_row():
    a = analyze_instance(permuted(generate("hamming6-2")))
    assert a.row() == "hamming6-2,32,32,1,96.9,1×32"


def test_complete_graph_regression():
    a = analyze_instance(permuted(complete(8)))
    assert a.omega == 8 and a.location.render() == "1×8"
    assert (a.total_nodes, a.prove_nodes) == (8, 1)


@pytest.mark.parametrize("name", EXTRA)
def test_constructible_rows_match_reference(name):
    """Rows outside the named criteria: omega exact, counts within the reference rounding."""
    g = permuted(generate(name))
    a = analyze_instance(g)
    row = REFERENCE[name]
    assert a.omega == row.omega
    assert abs(a.total_nodes - row.total) <= 0.01 * row.total
    assert abs(a.prove_nodes - row.prove) <= 0.01 * row.prove
    assert a.location.render() == row.location
    assert g.is_clique(replay(g, a.location))


def test_analysis_invariants():
    with pytest.raises(ValueError):
        InstanceAnalysis("x", 3, 5, 6, SearchNodeLabel())
    with pytest.raises(ValueError):
        InstanceAnalysis("x", 0, 0, 0, SearchNodeLabel())
    a = InstanceAnalysis("x", 3, 8, 2, SearchNodeLabel((2, 1, 1)))
    assert a.avoid_fraction == 0.75 and a.row() == "x,3,8,2,75.0,2 1 1"


def test_timeout_propagates():
    with pytest.raises(IncompleteAnalysis):
        analyze_instance(permuted(random_graph(300, 0.9, 0)), timeout=0.05)


def test_balance_report_worked_example():
    stats = ParallelStats(per_thread_runtime=[107.0, 79.0, 60.0], wall_time=107.0)
    rep = balance_report(stats, 438.0)
    assert (rep.minimum, rep.maximum) == (60.0, 107.0)
    assert round(rep.cap, 1) == 4.1 and rep.speedup <= rep.cap


def test_balance_report_perfect_balance():
    rep = balance_report(ParallelStats(per_thread_runtime=[2.0] * 4, wall_time=2.0), 8.0)
    assert rep.speedup == pytest.approx(4.0)
    rep = balance_report(ParallelStats(per_thread_runtime=[1.0], wall_time=1.0), 1.0)
    assert rep.speedup == pytest.approx(1.0)


def test_balance_report_live_single_thread():
    g = permuted(random_graph(200, 0.75, 9))
    _, seq = max_clique(g)
    _, stats = solve_parallel(g, 1, StaticDepth(1))
    rep = balance_report(stats, seq.wall_time)
    assert 0.5 < rep.speedup <= rep.cap + 1e-12


def test_incumbent_timelines():
    g = permuted(small_example())
    inc, stats = max_clique(g)
    events = incumbent_timeline(stats)
    assert events[-1].size == 4 and events[-1].label == inc.found_at_label
    _, primed = max_clique(g, 4)
    assert incumbent_timeline(primed) == []
    h = permuted(random_graph(120, 0.8, 1))
    omega = max_clique(h)[0].size
    _, par = solve_parallel(h, 4, Resplit())
    events = incumbent_timeline(par)
    assert events[-1].size == omega
    assert all(a.size < b.size and a.elapsed <= b.elapsed for a, b in zip(events, events[1:]))
