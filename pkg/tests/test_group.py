import json
from functools import lru_cache

import numpy as np
import pytest

from commgraph.corpus import parse_entry, symmetric
from commgraph.group import (
    GroupSpec,
    InvalidGroupSpec,
    OrderCapExceeded,
    Permutation,
    center,
    check_closure,
    compose,
    enumerate_group,
    invert,
    is_normal_subset,
    is_simple,
    is_subgroup,
    normal_closure,
    normal_subset_stabilizer,
    subgroup_closure,
)
from commgraph.oracle import naive_commute_matrix


@lru_cache(maxsize=None)
def build(name):
    return parse_entry(name).build()


def test_compose_applies_left_first():
    p = Permutation([1, 0, 2])
    q = Permutation([0, 2, 1])
    assert compose(p, q).images == (2, 0, 1)
    assert (p * q).images == (2, 0, 1)
    assert (q * p).images == (1, 2, 0)


def test_permutation_basics():
    p = Permutation.from_cycles([(0, 1, 2), (3, 4)], 5)
    assert p.images == (1, 2, 0, 4, 3)
    assert p.cycles == [(0, 1, 2), (3, 4)]
    assert p.order == 6
    assert (p * invert(p)).is_identity()
    assert ~p == invert(p)
    assert Permutation.identity(4).order == 1


@pytest.mark.parametrize("images", [[0, 0, 1], [0, 3, 1], []])
def test_permutation_rejects_non_bijections(images):
    with pytest.raises(InvalidGroupSpec):
        Permutation(images)


def test_compose_rejects_mixed_degree():
    with pytest.raises(InvalidGroupSpec):
        compose(Permutation([1, 0]), Permutation([0, 2, 1]))


def test_spec_validation():
    with pytest.raises(InvalidGroupSpec):
        GroupSpec("empty", [])
    with pytest.raises(InvalidGroupSpec):
        GroupSpec("mixed", [Permutation([1, 0]), Permutation([1, 2, 0])])


def test_spec_from_dict_names_the_field():
    data = {"name": "bad", "degree": 3, "generators": [[1, 2, 0], [0, 1]]}
    with pytest.raises(InvalidGroupSpec, match=r"generators\[1\]"):
        GroupSpec.from_dict(data)

    data = {"name": "bad", "degree": 3, "generators": [[1, 1, 0]]}
    with pytest.raises(InvalidGroupSpec, match="not a bijection"):
        GroupSpec.from_dict(data)

    with pytest.raises(InvalidGroupSpec, match="'degree'"):
        GroupSpec.from_dict({"name": "bad", "generators": [[0]]})

    for cap in ("x", 0, 2.5, True):
        data = {"name": "bad", "degree": 2, "generators": [[1, 0]], "max_order": cap}
        with pytest.raises(InvalidGroupSpec, match="'max_order'"):
            GroupSpec.from_dict(data)


def test_spec_load(tmp_path):
    path = tmp_path / "s3.json"
    path.write_text(
        json.dumps({"name": "S3", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    )
    spec = GroupSpec.load(path)
    assert spec.name == "S3"
    assert enumerate_group(spec).order == 6

    broken = tmp_path / "broken.json"
    broken.write_text('{"name": "x",\n "degree": 3,\n}')
    with pytest.raises(InvalidGroupSpec, match=":3:"):
        GroupSpec.load(broken)


def test_enumeration_is_canonical():
    g = build("s4")
    assert g.order == 24
    assert np.array_equal(g.images[0], np.arange(4))
    rows = [tuple(r) for r in g.images.tolist()]
    assert rows == sorted(rows)

    # generator order does not change the element list
    gens = symmetric(4).generators
    flipped = enumerate_group(GroupSpec("S4", gens[::-1]))
    assert np.array_equal(flipped.images, g.images)


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        enumerate_group(symmetric(5), max_order=100)
    assert enumerate_group(symmetric(5), max_order=120).order == 120
    with pytest.raises(OrderCapExceeded):
        enumerate_group(symmetric(3), max_order=0)

    capped = GroupSpec("S4", symmetric(4).generators, max_order=10)
    with pytest.raises(OrderCapExceeded):
        enumerate_group(capped)
    with pytest.raises(OrderCapExceeded):
        enumerate_group(capped, max_order=1000)
    small = GroupSpec("S3", symmetric(3).generators, max_order=10)
    assert enumerate_group(small).order == 6


def test_lookup_and_mul():
    g = build("s4")
    for i in range(g.order):
        assert g.index_of(g.element(i)) == i
        assert g.mul(i, int(g.inverse_index[i])) == 0
    x, y = 5, 17
    expected = g.element(x) * g.element(y)
    assert g.element(g.mul(x, y)) == expected
    assert np.array_equal(
        g.left_multiply_all(x), [g.mul(x, j) for j in range(g.order)]
    )
    assert np.array_equal(
        g.right_multiply_all(x), [g.mul(j, x) for j in range(g.order)]
    )


def test_lookup_without_int64_keys():
    # degree 20 is past the mixed-radix key range
    g = build("z20")
    assert g._index is not None
    assert g.order == 20
    for i in range(g.order):
        assert g.index_of(g.element(i)) == i
    assert check_closure(g) == []


def test_index_of_rejects_outsiders():
    g = build("a4")
    with pytest.raises(ValueError):
        g.index_of(Permutation([1, 0, 2, 3]))
    with pytest.raises(InvalidGroupSpec):
        g.index_of(Permutation([1, 0, 2]))


@pytest.mark.parametrize(
    "name,sizes",
    [
        ("s3", [1, 2, 3]),
        ("a5", [1, 12, 12, 15, 20]),
        ("q8", [1, 1, 2, 2, 2]),
        ("z6", [1] * 6),
    ],
)
def test_class_sizes(name, sizes):
    g = build(name)
    assert sorted(g.class_sizes.tolist()) == sizes
    assert g.class_of[0] == 0
    assert g.class_reps[0] == 0


@pytest.mark.parametrize("name", ["s4", "d12", "q8", "a5", "psl2_7"])
def test_conjugator_witnesses(name):
    g = build(name)
    for e in range(g.order):
        c = g.class_of[e]
        rep = int(g.class_reps[c])
        assert rep == g.class_members(c)[0]
        assert g.conjugate(e, int(g.conjugator[e])) == rep
    assert g.conjugator[0] == 0
    assert (g.order % g.class_sizes == 0).all()


@pytest.mark.parametrize("name", ["s4", "q8", "d12", "a5"])
def test_centralizers_match_naive(name):
    g = build(name)
    commute = naive_commute_matrix(g)
    for x in range(g.order):
        assert np.array_equal(g.centralizer(x), np.flatnonzero(commute[x]))


def test_center():
    assert len(center(build("q8"))) == 2
    assert len(center(build("d12"))) == 2
    assert center(build("s3")).tolist() == [0]
    assert len(center(build("z6"))) == 6


def test_subgroups():
    g = build("s4")
    four_cycle = g.index_of(Permutation([1, 2, 3, 0]))
    cyclic = subgroup_closure(g, [four_cycle])
    assert len(cyclic) == 4
    assert is_subgroup(g, cyclic)
    assert not is_normal_subset(g, cyclic)
    assert len(normal_closure(g, [four_cycle])) == 24
    assert not is_subgroup(g, [0, four_cycle])


@pytest.mark.parametrize(
    "name,simple",
    [("a5", True), ("psl2_7", True), ("z5", True), ("s4", False), ("z6", False), ("q8", False)],
)
def test_is_simple(name, simple):
    assert is_simple(build(name)) == simple


def test_stabilizer_of_normal_subset():
    g = build("s4")
    klein = [e for e in range(g.order) if g.element(e).order <= 2 and g.class_sizes[g.class_of[e]] == 3]
    subset = [0] + klein
    x = normal_subset_stabilizer(g, subset)
    assert sorted(x.tolist()) == sorted(subset)
    assert is_subgroup(g, x)
    assert is_normal_subset(g, x)


def test_stabilizer_is_trivial_in_simple_groups():
    g = build("a5")
    for c in range(1, g.class_count):
        x = normal_subset_stabilizer(g, g.class_members(c))
        assert x.tolist() == [0]


def test_stabilizer_rejects_bad_subsets():
    g = build("s3")
    with pytest.raises(ValueError):
        normal_subset_stabilizer(g, [])
    with pytest.raises(ValueError):
        normal_subset_stabilizer(g, range(g.order))
    with pytest.raises(ValueError):
        normal_subset_stabilizer(g, [1])


@pytest.mark.parametrize("name", ["a5", "psl2_8", "q8", "d12"])
def test_closure(name):
    g = build(name)
    assert check_closure(g) == []
    assert check_closure(g, samples=500, seed=3) == []


def test_group_to_dict():
    d = build("s3").to_dict()
    assert d["order"] == 6
    assert d["degree"] == 3
    assert sum(c["size"] for c in d["classes"]) == 6
    assert sorted(c["element_order"] for c in d["classes"]) == [1, 2, 3]


@pytest.mark.parametrize("name", ["q8", "d12", "s4"])
def test_center_is_intersection_of_centralizers(name):
    g = build(name)
    common = np.arange(g.order)
    for x in range(g.order):
        common = np.intersect1d(common, g.centralizer(x))
    assert np.array_equal(center(g), common)
