import time
from functools import lru_cache

import numpy as np
import pytest

from commgraph.corpus import parse_entry, quaternion8_element
from commgraph.graph import (
    BALANCED,
    DIAM_GT4,
    INFINITY,
    NEITHER,
    UNREACHED,
    BalancedWitness,
    CommGraph,
    DegeneratePairError,
)
from commgraph.group import OrderCapExceeded, center
from commgraph.oracle import (
    naive_balanced_pairs,
    naive_distance_matrix,
    naive_product_table,
    naive_verdict,
    oracle_diff,
    verify_witness,
)

CORPUS = [
    "z6",
    "s3",
    "s4",
    "d12",
    "q8",
    "a4",
    "a5",
    "psl2_4",
    "psl2_5",
    "psl2_7",
    "psl2_8",
    "psl2_9",
    "psl2_11",
    "psl2_13",
    "a6",
    "s5",
    "s6",
]

SIMPLE = ["a5", "a6", "psl2_4", "psl2_5", "psl2_7", "psl2_8", "psl2_11", "psl2_13"]


@lru_cache(maxsize=None)
def graph(name, workers=1):
    return CommGraph(parse_entry(name).build(), {"workers": workers})


def q8_index(g, name):
    return g.group.index_of(quaternion8_element(name))


def test_q8_neighbors_and_distances():
    g = graph("q8")
    i, j = q8_index(g, "i"), q8_index(g, "j")
    minus_one, minus_i = q8_index(g, "-1"), q8_index(g, "-i")
    assert sorted(g.neighbors(i).tolist()) == sorted([minus_one, minus_i])
    assert g.distance(i, j) == 2
    assert g.distance(i, minus_i) == 1
    assert g.distance(i, i) == 0
    assert g.bfs_from(i)[j] == 2


@pytest.mark.parametrize(
    "name,components,diameter",
    [
        ("q8", 1, 2),
        ("s3", 4, INFINITY),
        ("a5", 21, INFINITY),
        ("z6", 1, 1),
    ],
)
def test_structural_goldens(name, components, diameter):
    g = graph(name)
    assert len(g.components()) == components
    assert g.diameter() == diameter


def test_a5_verdict():
    verdict, witness = graph("a5").hypothesis_check()
    assert verdict == DIAM_GT4
    assert witness is None


@pytest.mark.parametrize("name", ["q8", "z6"])
def test_neither(name):
    assert graph(name).hypothesis_check() == (NEITHER, None)


def test_a5_disconnected_classes():
    g = graph("a5")
    five = next(e for e in range(1, 60) if g.group.element(e).order == 5)
    three = next(e for e in range(1, 60) if g.group.element(e).order == 3)
    assert g.distance(five, three) == INFINITY
    assert g.eccentricity(five) == INFINITY


def test_identity_is_not_a_vertex():
    g = graph("s3")
    with pytest.raises(ValueError):
        g.distance(0, 1)
    with pytest.raises(ValueError):
        g.bfs_from(0)
    with pytest.raises(ValueError):
        g.neighbors(0)
    with pytest.raises(ValueError):
        g.bfs_from(1)[0]
    with pytest.raises(ValueError):
        g.distance(1, 6)


def test_degenerate_pairs():
    g = graph("q8")
    i, minus_i = q8_index(g, "i"), q8_index(g, "-i")
    with pytest.raises(DegeneratePairError):
        g.is_balanced_pair(i, minus_i)
    with pytest.raises(DegeneratePairError):
        g.is_balanced_pair(i, i)


def test_skipped_pairs_in_cyclic_group():
    # each x skips y = x and y = x^-1, which coincide for the involution
    g = graph("z6")
    assert g.find_balanced_pair() is None
    assert g.skipped_pairs == 9


def test_balanced_witness():
    w = BalancedWitness(1, 2, [4, INFINITY, 5, UNREACHED, 4])
    assert w.is_balanced
    assert w.d_x_xinvy == INFINITY
    assert w.to_dict() == {"x": 1, "y": 2, "distances": [4, INFINITY, 5, INFINITY, 4]}
    assert not BalancedWitness(1, 2, [4, 3, 5, 5, 4]).is_balanced


def test_report():
    report = CommGraph(parse_entry("a5").build(), {"timing": False}).report()
    d = report.to_dict()
    assert d["group"] == "A5"
    assert d["order"] == 60
    assert d["classes"] == 5
    assert d["components"] == 21
    assert d["diameter"] == INFINITY
    assert d["verdict"] == DIAM_GT4
    assert d["simple"] is True
    assert "witness" not in d
    assert "millis" not in d

    timed = CommGraph(parse_entry("z6").build()).report()
    assert timed.millis is not None
    assert timed.csv_row()["name"] == "Z6"


def test_unknown_setting():
    with pytest.raises(ValueError):
        CommGraph(parse_entry("z6").build(), {"threads": 2})
    with pytest.raises(ValueError):
        CommGraph(parse_entry("z6").build(), {"workers": -1})


def test_threaded_rows_match():
    serial = graph("psl2_7")
    threaded = graph("psl2_7", workers=4)
    for a, b in zip(serial.rows[1:], threaded.rows[1:]):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("name", CORPUS)
def test_oracle_equivalence(name):
    diff = oracle_diff(graph(name))
    print(name, diff.to_dict()["mismatch_count"])
    assert diff.passed
    assert diff.mismatches == []


def test_oracle_cap():
    with pytest.raises(OrderCapExceeded):
        oracle_diff(graph("s5"), cap=100)


def test_engine_is_faster_than_oracle():
    g = CommGraph(parse_entry("psl2_11").build())

    engine_start = time.perf_counter()
    g.diameter()
    engine_time = time.perf_counter() - engine_start

    naive_start = time.perf_counter()
    naive = naive_distance_matrix(g.group)
    naive_time = time.perf_counter() - naive_start

    print("Class-reduced BFS took:", engine_time, "seconds")
    print("Brute-force APSP took:", naive_time, "seconds")
    assert np.array_equal(g.distance_matrix(), naive)


@pytest.mark.parametrize("name", SIMPLE)
def test_verdict_matches_brute_force(name):
    g = graph(name)
    verdict, witness = g.hypothesis_check()
    assert verdict == naive_verdict(g.group)
    if verdict == BALANCED:
        assert verify_witness(g.group, witness)


@pytest.mark.parametrize("name", ["s4", "a5", "d12", "psl2_7"])
def test_balanced_search_matches_brute_force(name):
    g = graph(name)
    matrix = naive_distance_matrix(g.group)
    products = naive_product_table(g.group)
    pairs = naive_balanced_pairs(g.group, matrix, products)
    witness = g.find_balanced_pair()
    assert (witness is None) == (len(pairs) == 0)
    if witness is not None:
        assert (witness.x, witness.y) in pairs
        assert verify_witness(g.group, witness, matrix, products)


@pytest.mark.parametrize("name", ["s3", "s4", "d12", "q8", "a4", "a5", "s5", "psl2_7"])
def test_conjugation_invariance(name):
    g = graph(name)
    group = g.group
    engine = g.distance_matrix()
    naive = naive_distance_matrix(group)
    for h in range(group.order):
        p = group.conjugate_all(h)
        assert np.array_equal(naive[np.ix_(p, p)], naive)
        assert np.array_equal(engine[np.ix_(p, p)], engine)


SMALL = ["z6", "s3", "s4", "d12", "q8", "a4", "a5", "psl2_4", "psl2_5", "psl2_7", "s5"]


def five_distance_tensor(g):
    """t[k, x, y] is the k-th of the five balanced-pair distances of (x, y)."""
    group = g.group
    d = g.distance_matrix()
    products = naive_product_table(group)
    xinvy = products[group.inverse_index]
    xs = np.arange(group.order)[:, None]
    ys = np.arange(group.order)[None, :]
    return np.stack(
        [d, d[xs, products], d[ys, products], d[xs, xinvy], d[ys, xinvy]]
    )


def nondegenerate_pairs(group):
    products = naive_product_table(group)
    for x in range(1, group.order):
        for y in range(1, group.order):
            if x != y and products[x, y] != 0:
                yield x, y


@pytest.mark.parametrize("name", ["z6", "s3", "s4", "d12", "q8", "a4"])
def test_balanced_pair_conjugation_invariance(name):
    g = graph(name)
    group = g.group
    for x, y in nondegenerate_pairs(group):
        ok, witness = g.is_balanced_pair(x, y)
        for h in range(group.order):
            ok2, witness2 = g.is_balanced_pair(
                group.conjugate(x, h), group.conjugate(y, h)
            )
            assert ok == ok2
            assert witness.distances == witness2.distances


@pytest.mark.parametrize("name", SMALL)
def test_five_distances_are_conjugation_invariant(name):
    g = graph(name)
    group = g.group
    t = five_distance_tensor(g)
    for h in range(group.order):
        p = group.conjugate_all(h)
        assert np.array_equal(t[:, p[:, None], p[None, :]], t)

    expected = np.where(t == UNREACHED, INFINITY, t)
    for x, y in nondegenerate_pairs(group):
        ok, witness = g.is_balanced_pair(x, y)
        assert witness.distances == tuple(expected[:, x, y])
        assert ok == bool((t[:, x, y] > 3).all())


@pytest.mark.parametrize("name", ["s3", "s4", "d12", "q8", "a4", "a5", "psl2_7"])
def test_distance_matrix_is_a_metric(name):
    g = graph(name)
    n = g.group.order
    d = g.distance_matrix()[1:, 1:].astype(float)
    d[d == UNREACHED] = np.inf
    assert np.array_equal(d, d.T)
    assert (np.diag(d) == 0).all()
    assert (d[~np.eye(n - 1, dtype=bool)] >= 1).all()
    for y in range(n - 1):
        assert (d <= d[:, y][:, None] + d[y, :][None, :]).all()


@pytest.mark.parametrize("name", ["q8", "d12", "z6"])
def test_nontrivial_center_gives_small_diameter(name):
    g = graph(name)
    assert len(center(g.group)) > 1
    assert len(g.components()) == 1
    assert g.diameter() <= 2


def test_components_partition_vertices():
    g = graph("s4")
    members = np.sort(np.concatenate(g.components()))
    assert np.array_equal(members, np.arange(1, 24))
    firsts = [c[0] for c in g.components()]
    assert firsts == sorted(firsts)


@pytest.mark.parametrize("name", ["z2", "z5"])
def test_abelian_simple_groups_do_not_warn(name, caplog):
    report = CommGraph(parse_entry(name).build(), {"timing": False}).report()
    assert report.simple is True
    assert report.verdict == NEITHER
    assert not [r for r in caplog.records if r.levelname == "WARNING"]


def test_flush_cache():
    with CommGraph(parse_entry("s4").build()) as g:
        first = g.distance_matrix().copy()
        assert hasattr(g, "_matrix")
        assert hasattr(g.group, "_centralizers")
    assert not hasattr(g, "_matrix")
    assert not hasattr(g, "_rows")
    assert np.array_equal(g.distance_matrix(), first)

    g.group.flush_cache()
    assert not hasattr(g.group, "_centralizers")
    assert np.array_equal(g.distance_matrix(), first)
