import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import invertible
from ringline import chaintrafo as ct
from ringline.projline import Matrix2, enumerate_points, point_of, point_permutation
from ringline.radpar import parallel_matrix
from ringline.rings import RingError, jacobson_radical


@pytest.fixture(scope="module")
def alg():
    cache = {}

    def get(desc):
        if desc not in cache:
            cache[desc] = ct.algebra_of(desc)
        return cache[desc]
    return get


def induced_by_hand(R, m, z):
    """(zb + d)^-1 (za + c) via a unit search, or None when zb + d is not a unit."""
    a, b, c, d = m
    den = int(R.add[R.mul[z, b], d])
    num = int(R.add[R.mul[z, a], c])
    inv = [u for u in range(R.size) if R.mul[u, den] == R.one and R.mul[den, u] == R.one]
    return int(R.mul[inv[0], num]) if inv else None


def test_algebra_metadata(alg):
    A = alg("upper2(gf(3))")
    assert A.dim == 3 and A.rad_dim == 1 and A.nil_exp == 2
    assert A.descriptor == "upper2(gf(3))@gf(3)"
    B = alg("trunc(gf(3),3)")
    assert B.rad_dim == 2 and B.nil_exp == 3
    C = alg("gf(4)@gf(2)")
    assert C.dim == 2 and C.rad_dim == 0


@pytest.mark.parametrize("bad", ["zmod(6)", "gf(3)", "dual(gf(3))@gf(2)"])
def test_algebra_errors(bad):
    with pytest.raises(RingError):
        ct.algebra_of(bad)


@pytest.mark.parametrize("desc", ["dual(gf(3))", "upper2(gf(2))", "trunc(gf(2),3)", "anormal(gf(3))"])
def test_iota_image_is_neighbourhood_of_infinity(alg, desc):
    A = alg(desc)
    line = A.line
    nb = set(np.flatnonzero(line.adjacency[line.infinity.index]).tolist())
    assert set(A.iota_points.tolist()) == nb
    assert len(nb) == A.ring.size


def test_anormal_counterexample(alg):
    A = alg("anormal(gf(3))")
    R, line = A.ring, A.line
    p = point_of(R, ("1+2j", "1+j"))
    q = point_of(R, ("0", "1"))
    assert not line.adjacency[p.index, q.index]
    assert not invertible(R, (R.index("1+2j"), R.index("1+j"), R.zero, R.one))
    assert p.index not in set(A.iota_points.tolist())
    assert R.index("1+j") not in R.units


@pytest.mark.parametrize("desc", ["dual(gf(2))", "anormal(gf(2))", "gf(4)@gf(2)"])
def test_totality_exhaustive_by_hand(alg, desc):
    A = alg(desc)
    R = A.ring
    rad = jacobson_radical(R).members
    mism = 0
    for m in itertools.product(range(R.size), repeat=4):
        total = invertible(R, m) and all(induced_by_hand(R, m, z) is not None for z in R.elements)
        cond = m[0] in R.units and m[3] in R.units and m[1] in rad
        mism += total != cond
    assert mism == 0
    assert ct.totality_sweep(A).agrees


def test_totality_counts_dual_gf3(alg):
    A = alg("dual(gf(3))")
    sw = ct.totality_sweep(A)
    # |GL2(dual(K))| = |GL2(K)| * q^4 = 48 * 81; total = |R*|^2 * #rad * |R|
    assert (sw.matrices, sw.invertible, sw.total, sw.condition) == (6561, 3888, 972, 972)
    assert sw.agrees


def test_sweep_reports_mismatch_free_on_random_batch(alg):
    A = alg("upper2(gf(3))")
    rng = np.random.default_rng(5)
    sw = ct.totality_sweep(A, rng.integers(0, 27, size=(2000, 4)))
    assert sw.agrees and sw.matrices == 2000


@pytest.mark.parametrize("desc", ["dual(gf(3))", "trunc(gf(2),3)"])
def test_table_equals_closed_form(alg, desc):
    A = alg(desc)
    R = A.ring
    for m in [(1, 0, 0, 1), (R.one, R.index(sorted(jacobson_radical(R).members)[1]), 2, R.one), (0, 1, 1, 0)]:
        M = Matrix2(R, *m)
        table = ct.gamma_table(A, M)
        for z in R.elements:
            expected = induced_by_hand(R, M.entries, z)
            assert table[z] == (-1 if expected is None else expected)


def test_factorization_dual_gf3(alg):
    A = alg("dual(gf(3))")
    R = A.ring
    rad = sorted(jacobson_radical(R).members)
    for a, b, c, d in itertools.product(sorted(R.units), rad, R.elements, sorted(R.units)):
        m = Matrix2(R, a, b, c, d)
        f1, f2, f3 = ct.factorization(A, m)
        assert f1 * f2 * f3 == m
    with pytest.raises(ValueError):
        ct.factorization(A, Matrix2(R, 0, 1, 1, 0))


def is_affine_by_hand(A, table):
    R = A.ring
    g = [int(R.add[table[z], R.neg[table[R.zero]]]) for z in R.elements]
    return all(g[R.add[x, y]] == R.add[g[x], g[y]] for x in R.elements for y in R.elements) and \
        all(g[R.mul[k, z]] == R.mul[k, g[z]] for k in A.scalars for z in R.elements)


def test_affine_iff_b_zero_gf3(alg):
    A = alg("dual(gf(3))")
    R = A.ring
    rad = sorted(jacobson_radical(R).members)
    for a, b, c, d in itertools.product(sorted(R.units), rad, R.elements, sorted(R.units)):
        table = ct.gamma_table(A, Matrix2(R, a, b, c, d))
        assert sorted(table.tolist()) == list(R.elements)
        assert ct.is_affine_map(A, table) == (b == R.zero)
    t = ct.gamma_table(A, Matrix2(R, 1, R.index("e"), 0, 1))
    assert ct.is_affine_map(A, t) == is_affine_by_hand(A, t)


def test_gf2_affine_exceptions(alg):
    A = alg("dual(gf(2))")
    R = A.ring
    exc = ct.affine_exceptions(A)
    by_hand = [m for m in itertools.product(sorted(R.units), [R.index("e")], R.elements, sorted(R.units))
               if is_affine_by_hand(A, ct.gamma_table(A, Matrix2(R, *m)))]
    assert len(exc) == len(by_hand) == 16


def test_delta_swaps_two_points(alg):
    A = alg("dual(gf(2))")
    R, line = A.ring, A.line
    delta = Matrix2(R, "1", "e", "0", "1+e")
    assert ct.is_total(A, delta)
    np.testing.assert_array_equal(ct.gamma_table(A, delta), np.arange(4))
    perm = point_permutation(line, delta)
    inf, p = line.infinity.index, point_of(R, ("1", "e")).index
    assert perm[inf] == p and perm[p] == inf
    assert sum(perm[i] == i for i in range(len(line))) == 4


@pytest.mark.parametrize("desc,n_size", [("dual(gf(3))", 9), ("trunc(gf(3),3)", 9), ("upper2(gf(3))", 9),
                                         ("dual(gf(4))", 16), ("trunc(gf(2),3)", 4)])
def test_group_sizes(alg, desc, n_size):
    A = alg(desc)
    R = A.ring
    assert len(ct.group_B(A)) == len(jacobson_radical(R))
    assert len(ct.group_T(A)) == R.size
    assert len(ct.group_N(A)) == n_size
    for g in (ct.group_B(A), ct.group_N(A)):
        assert g.is_closed() and g.is_commutative()


@pytest.mark.parametrize("desc", ["dual(gf(3))", "trunc(gf(3),3)", "upper2(gf(3))"])
def test_group_laws(alg, desc):
    A = alg(desc)
    R = A.ring
    B, T, N = ct.group_B(A), ct.group_T(A), ct.group_N(A)
    cls = ct.parallel_class_of_infinity(A)
    assert ct.acts_regularly(A, B, cls)
    for tau in T.members:
        table = ct.gamma_table(A, tau)
        assert all(table[z] == R.add[z, tau.c] for z in R.elements)
    assert all(ct.commutes(A, nu, beta) for nu in N.members for beta in B.members)
    for nu in N.members:
        perm = point_permutation(A.line, nu)
        assert all(perm[p] == p for p in cls)


@pytest.mark.parametrize("desc", ["dual(gf(3))", "trunc(gf(3),3)", "upper2(gf(3))"])
def test_fixed_point_law(alg, desc):
    A = alg(desc)
    R, line = A.ring, A.line
    for c in R.elements:
        perm = point_permutation(line, Matrix2(R, R.one, R.zero, c, R.one))
        for b in jacobson_radical(R):
            p = line.lookup[R.one, b]
            geometric = perm[p] == p
            assert geometric == (R.mul[R.mul[b, c], b] == R.zero)
            assert ct.tau_fixes(A, c, b) == geometric


def test_commutes_rejects_outsiders(alg):
    A = alg("dual(gf(3))")
    with pytest.raises(ValueError):
        ct.commutes(A, ct.tau_matrix(A, 1), ct.group_B(A).members[0])


@pytest.mark.parametrize("desc", ["dual(gf(3))", "trunc(gf(3),3)", "trunc(gf(2),4)", "upper2(gf(2))"])
def test_beta_polynomial(alg, desc):
    A = alg(desc)
    R = A.ring
    for b in jacobson_radical(R):
        table = ct.gamma_table(A, ct.beta_matrix(A, b))
        for z in R.elements:
            assert ct.beta_polynomial(A, b, z) == table[z]
    if A.nil_exp > 2:
        with pytest.raises(ValueError):
            ct.beta_polynomial(A, next(iter(jacobson_radical(R))), 0, s=0)


@pytest.mark.parametrize("desc", ["dual(gf(3))", "upper2(gf(3))", "dual(gf(4))"])
def test_regular_lines(alg, desc):
    A = alg(desc)
    R, q = A.ring, A.field.size
    lines = ct.regular_lines(A)
    assert len(lines) == len(R.units) // (q - 1) * (R.size // q)
    assert all(len(L) == q for L in lines)


def test_affine_traces(alg):
    A = alg("dual(gf(3))")
    R, line = A.ring, A.line
    zero = line.lookup[R.zero, R.one]
    par = np.flatnonzero(parallel_matrix(line)[zero])
    assert ct.affine_trace(A, par) == jacobson_radical(R).members
    nondist = np.flatnonzero(~line.adjacency[zero])
    assert ct.affine_trace(A, nondist) == frozenset(R.elements) - R.units


def test_collinear(alg):
    A = alg("dual(gf(3))")
    R = A.ring
    assert ct.collinear(A, "0", "1", "2")
    assert ct.collinear(A, "0", "e", "2e")
    assert not ct.collinear(A, "0", "1", "e")


def test_outside_domain(alg):
    A = alg("dual(gf(3))")
    R = A.ring
    m = Matrix2(R, 0, 1, 1, 0)  # z -> z^-1
    tr = ct.transform(A, m)
    assert tr.domain == R.units
    with pytest.raises(ct.OutsideDomain):
        tr(R.zero)
    assert ct.gamma_apply(A, m, "2") == R.index("2")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["dual(gf(3))", "upper2(gf(2))", "trunc(gf(3),3)", "anormal(gf(2))"]), st.data())
def test_total_matrices_give_bijections(desc, data):
    A = ct.algebra_of(desc)
    R = A.ring
    a = data.draw(st.sampled_from(sorted(R.units)))
    d = data.draw(st.sampled_from(sorted(R.units)))
    b = data.draw(st.sampled_from(sorted(jacobson_radical(R).members)))
    c = data.draw(st.integers(0, R.size - 1))
    m = Matrix2(R, a, b, c, d)
    table = ct.gamma_table(A, m)
    assert sorted(table.tolist()) == list(R.elements)
    assert all(table[z] == induced_by_hand(R, m.entries, z) for z in R.elements)


def test_line_cache_shared(alg):
    A = alg("dual(gf(3))")
    assert A.line is enumerate_points(A.ring)
