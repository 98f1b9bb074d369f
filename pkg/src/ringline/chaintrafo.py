"""K-algebras, the embedding z -> R(z,1) and the partial maps induced by GL2(R).

``R`` is viewed as an affine space over a central subfield ``K``.  A matrix
``gamma`` acts on the projective line; conjugating by the embedding gives a
partial map ``R -> R`` defined on the points that stay distant from
``inf = R(1,0)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .projline import (Matrix2, NotInvertible, Point, ProjectiveLine, enumerate_points,
                       invertible_mask, is_invertible, matrix_inverse, point_permutation)
from .radpar import parallel_matrix
from .rings import (Ring, RingError, RingHom, annihilator, build_ring,
                    inverse, jacobson_radical, nil_exponent)


class AlgebraError(RingError):
    pass


class OutsideDomain(ValueError):
    pass


class VerificationError(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class KAlgebra:
    ring: Ring
    field: Ring
    embedding: RingHom
    basis: tuple[int, ...]
    coords: np.ndarray
    nil_exp: int
    rad_dim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def kind(self) -> str:
        return self.ring.kind

    @property
    def descriptor(self) -> str:
        return f"{self.ring.descriptor}@{self.field.descriptor}"

    @cached_property
    def scalars(self) -> np.ndarray:
        """Embedded field elements, indexed like the field."""
        return np.asarray(self.embedding.image)

    @cached_property
    def _code_to_element(self) -> np.ndarray:
        q = self.field.size
        codes = self.coords @ (q ** np.arange(self.dim))
        out = np.empty(q ** self.dim, dtype=np.int64)
        out[codes] = np.arange(self.ring.size)
        return out

    def coords_of(self, z) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coords[self.ring.index(z)])

    def element(self, coords) -> int:
        q = self.field.size
        code = sum(int(c) * q ** i for i, c in enumerate(coords))
        return int(self._code_to_element[code])

    def scalar(self, k) -> int:
        return int(self.scalars[self.field.index(k)])

    @property
    def line(self) -> ProjectiveLine:
        return enumerate_points(self.ring)

    @cached_property
    def iota_points(self) -> np.ndarray:
        """Point index of R(z,1) for each z."""
        R = self.ring
        return np.asarray(self.line.lookup[:, R.one], dtype=np.int64)

    @cached_property
    def iota_inverse(self) -> np.ndarray:
        """For each point index, the z with R(z,1) = point, or -1."""
        out = np.full(len(self.line), -1, dtype=np.int64)
        out[self.iota_points] = np.arange(self.ring.size)
        return out

    @cached_property
    def radical_mask(self) -> np.ndarray:
        m = np.zeros(self.ring.size, dtype=bool)
        m[sorted(jacobson_radical(self.ring).members)] = True
        return m


def make_algebra(ring: Ring, field: Ring, embedding: RingHom, basis) -> KAlgebra:
    """Validate the K-algebra structure exhaustively and precompute coordinates."""
    if embedding.source is not field or embedding.target is not ring:
        raise AlgebraError("embedding must map the field into the ring")
    if not field.is_field():
        raise AlgebraError(f"{field.descriptor} is not a field")
    if not embedding.check():
        raise AlgebraError("embedding is not a unital ring homomorphism")
    img = np.asarray(embedding.image)
    if len(set(img.tolist())) != field.size:
        raise AlgebraError("embedding is not injective")
    if not all((ring.mul[k, :] == ring.mul[:, k]).all() for k in img):
        raise AlgebraError("embedded field is not central")
    basis = tuple(ring.index(b) for b in basis)
    m, q = len(basis), field.size
    if q ** m != ring.size:
        raise AlgebraError(f"basis of length {m} cannot span a ring of size {ring.size}")
    combos = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64)[:, ::-1]
    values = np.full(len(combos), ring.zero, dtype=np.int64)
    for i, b in enumerate(basis):
        values = ring.add[values, ring.mul[img[combos[:, i]], b]]
    if len(set(values.tolist())) != ring.size:
        raise AlgebraError("basis is not free over the field")
    if m == 1:
        raise AlgebraError("the field must be a proper subring (K != R)")
    coords = np.empty((ring.size, m), dtype=np.int64)
    coords[values] = combos
    coords.setflags(write=False)
    rad = len(jacobson_radical(ring))
    rad_dim = round(np.log(rad) / np.log(q))
    return KAlgebra(ring, field, embedding, basis, coords, nil_exponent(ring), rad_dim)


def _prime_embedding(ring: Ring, field: Ring) -> RingHom:
    img, x = [], ring.zero
    for _ in range(field.size):
        img.append(x)
        x = int(ring.add[x, ring.one])
    return RingHom(field, ring, np.array(img))


def _greedy_basis(ring: Ring, scalars: np.ndarray) -> list[int]:
    span = np.zeros(ring.size, dtype=bool)
    span[ring.zero] = True
    basis = []
    for x in ring.elements:
        if span[x]:
            continue
        basis.append(x)
        multiples = ring.mul[scalars, x]
        members = np.flatnonzero(span)
        span[ring.add[members[:, None], multiples[None, :]].ravel()] = True
    return basis


def algebra_of(descriptor, field: Ring | str | None = None) -> KAlgebra:
    """KAlgebra from a ring (or ``'ring@field'`` descriptor) using catalog metadata.

    Without metadata a prime field is embedded as multiples of 1 and a basis is
    chosen greedily in index order.
    """
    if isinstance(descriptor, str):
        if "@" in descriptor:
            descriptor, fdesc = descriptor.rsplit("@", 1)
            field = fdesc if field is None else field
        ring = build_ring(descriptor)
    else:
        ring = descriptor
    if isinstance(field, str):
        field = build_ring(field)
    if field is None:
        field = ring.field
    if field is None:
        raise AlgebraError(f"{ring.descriptor} carries no field; pass one explicitly")
    key = ("algebra", field.descriptor)
    if key in ring._cache:
        return ring._cache[key]
    meta = ring.field
    if meta is not None and meta.descriptor == field.descriptor and ring.coords is not None:
        field = meta
        q = field.size
        one = ring.coords[ring.one]
        codes = field.mul[np.arange(q)[:, None], one[None, :]] @ (q ** np.arange(len(one)))
        lookup = np.empty(ring.size, dtype=np.int64)
        lookup[ring.coords @ (q ** np.arange(len(one)))] = np.arange(ring.size)
        embedding = RingHom(field, ring, lookup[codes])
        basis = ring.basis
    elif field.kind == "gf" and field.size in (2, 3, 5, 7, 11, 13):
        embedding = _prime_embedding(ring, field)
        basis = _greedy_basis(ring, np.asarray(embedding.image))
    else:
        raise AlgebraError(f"cannot view {ring.descriptor} as an algebra over {field.descriptor}")
    alg = make_algebra(ring, field, embedding, basis)
    ring._cache[key] = alg
    return alg


# ---------------------------------------------------------------------------
# embedding and affine traces


def iota(alg: KAlgebra, z) -> Point:
    return alg.line.points[alg.iota_points[alg.ring.index(z)]]


def affine_trace(alg: KAlgebra, points) -> frozenset[int]:
    idx = [alg.line.index(p) for p in points]
    zs = alg.iota_inverse[idx] if idx else np.array([], dtype=np.int64)
    return frozenset(int(z) for z in zs if z >= 0)


def regular_lines(alg: KAlgebra) -> list[frozenset[int]]:
    """All sets ``K u + v`` with ``u`` a unit, deduplicated."""
    R, k = alg.ring, alg.scalars
    seen = set()
    for u in sorted(R.units):
        ku = R.mul[k, u]
        for v in R.elements:
            seen.add(frozenset(R.add[ku, v].tolist()))
    return sorted(seen, key=lambda s: sorted(s))


def affine_lines(alg: KAlgebra) -> list[frozenset[int]]:
    """All lines ``K u + v`` of the affine space, ``u != 0``."""
    R, k = alg.ring, alg.scalars
    seen = set()
    for u in R.elements:
        if u == R.zero:
            continue
        ku = R.mul[k, u]
        for v in R.elements:
            seen.add(frozenset(R.add[ku, v].tolist()))
    return sorted(seen, key=lambda s: sorted(s))


def collinear(alg: KAlgebra, x, y, z) -> bool:
    R = alg.ring
    x, y, z = (R.index(t) for t in (x, y, z))
    u, w = R.sub(y, x), R.sub(z, x)
    if u == R.zero:
        return True
    return bool((R.mul[alg.scalars, u] == w).any())


# ---------------------------------------------------------------------------
# induced partial maps


@dataclass(frozen=True, eq=False)
class TransformDescriptor:
    matrix: Matrix2
    domain: frozenset[int]
    map_table: np.ndarray  # -1 outside the domain

    def __call__(self, z: int) -> int:
        w = int(self.map_table[z])
        if w < 0:
            raise OutsideDomain(f"{self.matrix.ring.labels[z]} is outside the domain")
        return w

    @property
    def is_total(self) -> bool:
        return len(self.domain) == len(self.map_table)


def gamma_table(alg: KAlgebra, matrix: Matrix2) -> np.ndarray:
    """``z -> iota^-1(iota(z)^gamma)`` with -1 where the image leaves P(R)_inf."""
    if not is_invertible(matrix):
        raise NotInvertible(f"{matrix!r} is not invertible")
    R, line = alg.ring, alg.line
    z = np.arange(R.size)
    x = R.add[R.mul[z, matrix.a], matrix.c]
    y = R.add[R.mul[z, matrix.b], matrix.d]
    pidx = line.lookup[x, y]
    inside = line.adjacency[line.infinity.index][pidx]
    values = alg.iota_inverse[pidx]
    if ((values >= 0) != inside).any():
        raise VerificationError("image of iota differs from the neighbourhood of infinity")
    return np.where(inside, values, -1)


def transform(alg: KAlgebra, matrix: Matrix2) -> TransformDescriptor:
    table = gamma_table(alg, matrix)
    table.setflags(write=False)
    return TransformDescriptor(matrix, frozenset(np.flatnonzero(table >= 0).tolist()), table)


def gamma_domain(alg: KAlgebra, matrix: Matrix2) -> frozenset[int]:
    return transform(alg, matrix).domain


def gamma_apply(alg: KAlgebra, matrix: Matrix2, z) -> int:
    return transform(alg, matrix)(alg.ring.index(z))


def gamma_formula(alg: KAlgebra, matrix: Matrix2, z) -> int:
    """Closed form ``(zb + d)^-1 (za + c)``; raises NotAUnit off the domain."""
    R = alg.ring
    z = R.index(z)
    den = int(R.add[R.mul[z, matrix.b], matrix.d])
    num = int(R.add[R.mul[z, matrix.a], matrix.c])
    return int(R.mul[inverse(R, den), num])


def satisfies_total_condition(alg: KAlgebra, matrix: Matrix2) -> bool:
    R = alg.ring
    return bool(R.unit_mask[matrix.a] and R.unit_mask[matrix.d] and alg.radical_mask[matrix.b])


def is_total(alg: KAlgebra, matrix: Matrix2) -> bool:
    return is_invertible(matrix) and gamma_domain(alg, matrix) == frozenset(alg.ring.elements)


def factorization(alg: KAlgebra, matrix: Matrix2) -> tuple[Matrix2, Matrix2, Matrix2]:
    """``diag(-1, d) * [[1, -b], [0, 1]] * [[-a + b d^-1 c, 0], [d^-1 c, 1]]``."""
    if not satisfies_total_condition(alg, matrix):
        raise ValueError(f"{matrix!r} violates a, d in R*, b in rad R")
    R = alg.ring
    a, b, c, d = matrix.entries
    dinv = inverse(R, d)
    dc = int(R.mul[dinv, c])
    schur = R.sub(a, int(R.mul[b, dc]))
    if not R.unit_mask[schur]:
        raise VerificationError("a - b d^-1 c is not a unit")
    return (Matrix2(R, R.neg[R.one], R.zero, R.zero, d),
            Matrix2(R, R.one, R.neg[b], R.zero, R.one),
            Matrix2(R, R.neg[schur], R.zero, dc, R.one))


@dataclass
class SweepResult:
    matrices: int
    invertible: int
    total: int
    condition: int
    mismatches: list

    @property
    def agrees(self) -> bool:
        return not self.mismatches


def totality_sweep(alg: KAlgebra, matrices=None, *, chunk: int = 4096) -> SweepResult:
    """Compare (invertible and total) with the entry condition over a batch.

    ``matrices`` is an ``(M, 4)`` array of entry indices; by default every
    matrix over the ring.
    """
    R, line = alg.ring, alg.line
    n = R.size
    if matrices is None:
        matrices = np.array(list(itertools.product(range(n), repeat=4)), dtype=np.int64)
    matrices = np.asarray(matrices, dtype=np.int64).reshape(-1, 4)
    near_inf = line.adjacency[line.infinity.index]
    z = np.arange(n)[None, :]
    counts = np.zeros(3, dtype=np.int64)
    mismatches = []
    for s in range(0, len(matrices), chunk):
        A, B, C, D = matrices[s:s + chunk].T
        inv = invertible_mask(R, A, B, C, D)
        x = R.add[R.mul[z, A[:, None]], C[:, None]]
        y = R.add[R.mul[z, B[:, None]], D[:, None]]
        pidx = line.lookup[x, y]
        total = inv & np.where(pidx >= 0, near_inf[pidx], False).all(axis=1)
        cond = R.unit_mask[A] & R.unit_mask[D] & alg.radical_mask[B]
        counts += [inv.sum(), total.sum(), cond.sum()]
        for i in np.flatnonzero(total != cond):
            mismatches.append(tuple(int(e) for e in matrices[s + i]))
    return SweepResult(len(matrices), int(counts[0]), int(counts[1]), int(counts[2]), mismatches)


def is_affine_map(alg: KAlgebra, f) -> bool:
    """``z -> f(z) - f(0)`` is K-linear (checked on the full table)."""
    R = alg.ring
    table = np.asarray([f(z) for z in R.elements] if callable(f) else f, dtype=np.int64)
    if (table < 0).any():
        return False
    g = R.add[table, R.neg[table[R.zero]]]
    additive = (g[R.add] == R.add[g[:, None], g[None, :]]).all()
    k = alg.scalars[:, None]
    homogeneous = (g[R.mul[k, np.arange(R.size)[None, :]]] == R.mul[k, g[None, :]]).all()
    return bool(additive and homogeneous)


def affine_exceptions(alg: KAlgebra) -> list[Matrix2]:
    """Total-condition matrices with b != 0 whose induced map is nevertheless affine."""
    R = alg.ring
    out = []
    rad = [b for b in sorted(jacobson_radical(R).members) if b != R.zero]
    for a, b, c, d in itertools.product(sorted(R.units), rad, R.elements, sorted(R.units)):
        m = Matrix2(R, a, b, c, d)
        if is_affine_map(alg, gamma_table(alg, m)):
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# the groups B, T, N


def beta_matrix(alg: KAlgebra, b) -> Matrix2:
    R = alg.ring
    b = R.index(b)
    if not alg.radical_mask[b]:
        raise ValueError(f"{R.labels[b]} is not in the radical")
    return Matrix2(R, R.one, R.neg[b], R.zero, R.one)


def tau_matrix(alg: KAlgebra, c) -> Matrix2:
    R = alg.ring
    return Matrix2(R, R.one, R.zero, c, R.one)


def nu_space(alg: KAlgebra) -> list[int]:
    """``ann(rad R) & rad R``."""
    rad = jacobson_radical(alg.ring).members
    return sorted(annihilator(alg.ring, rad) & rad)


def nu_matrix(alg: KAlgebra, n1, n2) -> Matrix2:
    R = alg.ring
    n1, n2 = R.index(n1), R.index(n2)
    allowed = set(nu_space(alg))
    if n1 not in allowed or n2 not in allowed:
        raise ValueError("N parameters must lie in ann(rad R) & rad R")
    return Matrix2(R, R.add[R.one, n1], R.zero, n2, R.one)


def beta_polynomial(alg: KAlgebra, b, z, s: int | None = None) -> int:
    """``(1 + zb + ... + (zb)^s) z`` for ``b`` in the radical."""
    R = alg.ring
    b, z = R.index(b), R.index(z)
    if not alg.radical_mask[b]:
        raise ValueError(f"{R.labels[b]} is not in the radical")
    s = alg.rad_dim if s is None else s
    if s + 1 < alg.nil_exp:
        raise ValueError(f"series length {s} is too short for nil exponent {alg.nil_exp}")
    zb = int(R.mul[z, b])
    term, total = R.one, R.one
    for _ in range(s):
        term = int(R.mul[term, zb])
        total = int(R.add[total, term])
    return int(R.mul[total, z])


@dataclass(frozen=True, eq=False)
class MatrixGroup:
    label: str
    members: tuple[Matrix2, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, m) -> bool:
        return m in set(self.members)

    def is_closed(self) -> bool:
        s = set(self.members)
        return all(x * y in s for x in self.members for y in self.members) and \
            all(matrix_inverse(x) in s for x in self.members)

    def is_commutative(self) -> bool:
        return all(x * y == y * x for x in self.members for y in self.members)


def group_B(alg: KAlgebra) -> MatrixGroup:
    return MatrixGroup("B", tuple(beta_matrix(alg, b) for b in sorted(jacobson_radical(alg.ring).members)))


def group_T(alg: KAlgebra) -> MatrixGroup:
    return MatrixGroup("T", tuple(tau_matrix(alg, c) for c in alg.ring.elements))


def group_N(alg: KAlgebra) -> MatrixGroup:
    space = nu_space(alg)
    return MatrixGroup("N", tuple(nu_matrix(alg, n1, n2) for n1 in space for n2 in space))


def acts_regularly(alg: KAlgebra, group: MatrixGroup, points) -> bool:
    """Every element maps ``points`` into itself and each orbit map is a bijection."""
    idx = sorted({alg.line.index(p) for p in points})
    perms = np.array([point_permutation(alg.line, g)[idx] for g in group.members])
    if not set(perms.ravel().tolist()) <= set(idx) or len(group) != len(idx):
        return False
    return all(len(set(perms[:, j].tolist())) == len(idx) for j in range(len(idx)))


def parallel_class_of_infinity(alg: KAlgebra) -> list[int]:
    line = alg.line
    return np.flatnonzero(parallel_matrix(line)[line.infinity.index]).tolist()


def tau_fixes_algebraic(alg: KAlgebra, c, b) -> bool:
    R = alg.ring
    c, b = R.index(c), R.index(b)
    return int(R.mul[R.mul[b, c], b]) == R.zero


def tau_fixes_geometric(alg: KAlgebra, c, b) -> bool:
    R, line = alg.ring, alg.line
    p = line.lookup[R.one, R.index(b)]
    return bool(point_permutation(line, tau_matrix(alg, c))[p] == p)


def tau_fixes(alg: KAlgebra, c, b) -> bool:
    """Whether the T-matrix of ``c`` fixes ``R(1, b)``; both derivations must agree."""
    if not alg.radical_mask[alg.ring.index(b)]:
        raise ValueError("b must lie in the radical")
    alg_side = tau_fixes_algebraic(alg, c, b)
    if alg_side != tau_fixes_geometric(alg, c, b):
        raise VerificationError(f"fixed-point law fails for c={c}, b={b}")
    return alg_side


def commutes(alg: KAlgebra, nu: Matrix2, beta: Matrix2) -> bool:
    if nu not in group_N(alg):
        raise ValueError(f"{nu!r} is not in N")
    if beta not in group_B(alg):
        raise ValueError(f"{beta!r} is not in B")
    return nu * beta == beta * nu

