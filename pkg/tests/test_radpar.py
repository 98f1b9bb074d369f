import itertools
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import invertible
from ringline.projline import enumerate_points
from ringline.radpar import (compare_relations, is_equivalence, is_local_ring, is_parallel_def,
                             is_parallel_quot, parallel_classes, parallel_matrix, proper_subset_witness,
                             quotient_parallel_matrix, relation_witness)
from ringline.rings import build_ring, jacobson_radical

LOCAL = ["zmod(4)", "zmod(8)", "zmod(9)", "gf(5)", "dual(gf(2))", "dual(gf(3))", "trunc(gf(3),3)",
         "trunc(gf(2),4)", "anormal(gf(2))"]
NONLOCAL = ["zmod(6)", "zmod(12)", "anormal(gf(3))", "upper2(gf(2))", "upper2(gf(3))", "mat2(gf(2))",
            "product(gf(2),gf(4))", "product(zmod(3),dual(gf(3)))"]


def neighbourhoods(R, line):
    """Sets of points distant from each point, via the inverse search."""
    return [frozenset(q.index for q in line.points if invertible(R, p.canonical + q.canonical))
            for p in line.points]


@pytest.mark.parametrize("desc", ["zmod(4)", "zmod(6)", "dual(gf(2))", "anormal(gf(2))", "upper2(gf(2))"])
def test_parallel_by_set_inclusion(ring, desc):
    R = ring(desc)
    line = enumerate_points(R)
    nb = neighbourhoods(R, line)
    P = parallel_matrix(line)
    for i, j in itertools.product(range(len(line)), repeat=2):
        assert P[i, j] == (nb[i] <= nb[j])


@pytest.mark.parametrize("desc", LOCAL + NONLOCAL)
def test_definition_agrees_with_quotient(ring, desc):
    line = enumerate_points(ring(desc))
    assert (parallel_matrix(line) == quotient_parallel_matrix(line)).all()


@pytest.mark.parametrize("desc", LOCAL + NONLOCAL)
def test_classes(ring, desc):
    R = ring(desc)
    rep = parallel_classes(R)
    assert rep.is_equivalence and rep.agrees_with_quotient
    assert rep.class_size == len(jacobson_radical(R))
    assert sum(len(c) for c in rep.classes) == len(rep.line)
    assert rep.cor2_witness is None


@pytest.mark.parametrize("desc", LOCAL)
def test_local_rings_parallel_is_nondistant(ring, desc):
    R = ring(desc)
    assert is_local_ring(R)
    line = enumerate_points(R)
    assert compare_relations(line) and relation_witness(line) is None


@pytest.mark.parametrize("desc", NONLOCAL)
def test_nonlocal_rings_have_witness(ring, desc):
    R = ring(desc)
    assert not is_local_ring(R)
    line = enumerate_points(R)
    assert not compare_relations(line)
    p, q = relation_witness(line)
    assert not line.adjacency[p.index, q.index]
    assert not is_parallel_def(line, p, q)


def test_locality_by_nonunits(ring):
    # local iff the nonunits form an ideal; checked with python sets
    for d in LOCAL + NONLOCAL:
        R = ring(d)
        nonunits = set(R.elements) - set(R.units)
        closed = all(int(R.add[x, y]) in nonunits for x in nonunits for y in nonunits)
        assert closed == is_local_ring(R), d


def test_parallel_class_of_infinity(ring):
    R = ring("dual(gf(3))")
    line = enumerate_points(R)
    inf = line.infinity.index
    cls = set(np.flatnonzero(parallel_matrix(line)[inf]).tolist())
    assert cls == {line.lookup[R.one, b] for b in jacobson_radical(R)}


def test_is_equivalence_rejects_non_transitive():
    rel = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=bool)
    assert not is_equivalence(rel)
    assert is_equivalence(np.eye(3, dtype=bool))


def test_proper_subset_detected():
    # hand-made adjacency: row 0 has no neighbours, so its (empty) set is inside row 1's
    line = enumerate_points(build_ring("zmod(2)"))
    fake = SimpleNamespace(ring=SimpleNamespace(_cache={}), points=line.points,
                           adjacency=np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=bool))
    p, q = proper_subset_witness(fake)
    assert (p.index, q.index) == (0, 1)


def test_report_dict(ring):
    rep = parallel_classes(ring("zmod(6)"))
    doc = rep.as_dict()
    assert doc["points"] == 12 and doc["classes"] == 12 and doc["class_size"] == 1
    assert doc["local"] is False and doc["witness"] is not None


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["zmod(8)", "dual(gf(3))", "upper2(gf(2))", "zmod(12)", "trunc(gf(2),3)"]), st.data())
def test_parallel_points_are_not_distant(desc, data):
    line = enumerate_points(build_ring(desc))
    i = data.draw(st.integers(0, len(line) - 1))
    j = data.draw(st.integers(0, len(line) - 1))
    if i != j and is_parallel_def(line, i, j):
        assert not line.adjacency[i, j]
    assert is_parallel_def(line, i, j) == is_parallel_quot(line, i, j)
