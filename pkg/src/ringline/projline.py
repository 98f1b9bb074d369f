"""The projective line over a finite ring and its distant graph.

Points are unit orbits ``R(a, b) = {(ua, ub) : u in R*}`` of admissible pairs;
each orbit is stored with its lexicographically least member as canonical
representative.  Matrices act on row vectors from the right.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .rings import ForeignElementError, Ring, RingError, RingHom, jacobson_radical

_CHUNK = 1 << 22  # cap on booleans materialized per batch


class NotInvertible(ArithmeticError):
    pass


class NotAdmissible(RingError):
    pass


class ForeignPointError(RingError):
    pass


class Matrix2:
    """2x2 matrix over a finite ring, row-major entries ``a b / c d``."""

    __slots__ = ("ring", "a", "b", "c", "d")

    def __init__(self, ring: Ring, a, b, c, d):
        self.ring = ring
        self.a, self.b, self.c, self.d = (ring.index(x) for x in (a, b, c, d))

    @classmethod
    def identity(cls, ring: Ring) -> Matrix2:
        return cls(ring, ring.one, ring.zero, ring.zero, ring.one)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def __mul__(self, other: Matrix2) -> Matrix2:
        if other.ring is not self.ring:
            raise ForeignElementError("matrices over different rings")
        R = self.ring
        ad, mu = R.add, R.mul
        return Matrix2(R,
                       ad[mu[self.a, other.a], mu[self.b, other.c]],
                       ad[mu[self.a, other.b], mu[self.b, other.d]],
                       ad[mu[self.c, other.a], mu[self.d, other.c]],
                       ad[mu[self.c, other.b], mu[self.d, other.d]])

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix2) and other.ring is self.ring and other.entries == self.entries

    def __hash__(self) -> int:
        return hash((id(self.ring), self.entries))

    def __repr__(self) -> str:
        L = self.ring.labels
        return f"[[{L[self.a]}, {L[self.b]}], [{L[self.c]}, {L[self.d]}]]"


def invertible_mask(ring: Ring, a, b, c, d) -> np.ndarray:
    """Vectorized invertibility test for a batch of matrices.

    ``v -> v M`` is an additive endomorphism of R^2, so it is bijective iff its
    kernel is trivial.
    """
    a, b, c, d = (np.atleast_1d(np.asarray(x, dtype=np.int64)) for x in (a, b, c, d))
    n = ring.size
    out = np.empty(len(a), dtype=bool)
    step = max(1, _CHUNK // (n * n))
    ad, mu, z = ring.add, ring.mul, ring.zero
    x = np.arange(n)[None, :, None]
    y = np.arange(n)[None, None, :]
    for s in range(0, len(a), step):
        sl = slice(s, s + step)
        first = ad[mu[x, a[sl, None, None]], mu[y, c[sl, None, None]]]
        second = ad[mu[x, b[sl, None, None]], mu[y, d[sl, None, None]]]
        kernel = ((first == z) & (second == z)).sum(axis=(1, 2))
        out[sl] = kernel == 1
    return out


def is_invertible(matrix: Matrix2) -> bool:
    return bool(invertible_mask(matrix.ring, *matrix.entries)[0])


def matrix_inverse(matrix: Matrix2) -> Matrix2:
    """Rows of the inverse are the preimages of (1,0) and (0,1) under ``v -> v M``."""
    if not is_invertible(matrix):
        raise NotInvertible(f"{matrix!r} is not invertible")
    R = matrix.ring
    ad, mu = R.add, R.mul
    x = np.arange(R.size)[:, None]
    y = np.arange(R.size)[None, :]
    first = ad[mu[x, matrix.a], mu[y, matrix.c]]
    second = ad[mu[x, matrix.b], mu[y, matrix.d]]

    def preimage(u, v):
        i, j = np.argwhere((first == u) & (second == v))[0]
        return int(i), int(j)

    (p, q), (r, s) = preimage(R.one, R.zero), preimage(R.zero, R.one)
    inv = Matrix2(R, p, q, r, s)
    ident = Matrix2.identity(R)
    if inv * matrix != ident or matrix * inv != ident:
        raise NotInvertible(f"{matrix!r} has only a one-sided inverse")
    return inv


# ---------------------------------------------------------------------------
# admissible pairs


def unimodular_pairs(ring: Ring) -> np.ndarray:
    """Boolean table ``U[a, b]``: there are a', b' with aa' + bb' = 1."""
    if "unimodular" not in ring._cache:
        n = ring.size
        rows = np.arange(n)[:, None]
        right_ideal = np.zeros((n, n), dtype=bool)  # right_ideal[a, x]: x in aR
        right_ideal[rows, ring.mul] = True
        shifted = np.zeros((n, n), dtype=bool)  # shifted[b, y]: 1 - y in bR
        shifted[rows, ring.add[ring.one, ring.neg[ring.mul]]] = True
        U = (right_ideal.astype(np.int32) @ shifted.T.astype(np.int32)) > 0
        U.setflags(write=False)
        ring._cache["unimodular"] = U
    return ring._cache["unimodular"]


def completable_pairs(ring: Ring) -> np.ndarray:
    """Oracle: ``C[a, b]`` iff some (c, d) completes (a, b) to an invertible matrix."""
    if "completable" not in ring._cache:
        n = ring.size
        c, d = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), indexing="ij"))
        C = np.zeros((n, n), dtype=bool)
        for a in range(n):
            for b in range(n):
                C[a, b] = invertible_mask(ring, np.full(n * n, a), np.full(n * n, b), c, d).any()
        C.setflags(write=False)
        ring._cache["completable"] = C
    return ring._cache["completable"]


def is_admissible(ring: Ring, pair, *, oracle: bool = False) -> bool:
    a, b = (ring.index(x) for x in pair)
    table = completable_pairs(ring) if oracle else unimodular_pairs(ring)
    return bool(table[a, b])


def check_admissibility(ring: Ring) -> None:
    """Raise if unimodularity and completability disagree anywhere."""
    bad = np.argwhere(unimodular_pairs(ring) != completable_pairs(ring))
    if len(bad):
        a, b = bad[0]
        raise RingError(f"admissibility mismatch at ({ring.labels[a]},{ring.labels[b]}) in {ring.descriptor}")


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class Point:
    index: int
    canonical: tuple[int, int]
    orbit: frozenset[tuple[int, int]]
    label: str

    def __repr__(self) -> str:
        return f"R{self.label}"


class ProjectiveLine:
    def __init__(self, ring: Ring, points: list[Point], lookup: np.ndarray):
        self.ring = ring
        self.points = tuple(points)
        lookup.setflags(write=False)
        self.lookup = lookup

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __repr__(self) -> str:
        return f"ProjectiveLine({self.ring.descriptor}, {len(self)} points)"

    def index(self, p) -> int:
        """Point index of a Point, an int index, or a representing pair."""
        if isinstance(p, Point):
            if 0 <= p.index < len(self.points) and self.points[p.index] is p:
                return p.index
            raise ForeignPointError(f"{p!r} is not a point of {self!r}")
        if isinstance(p, (int, np.integer)) and not isinstance(p, bool):
            if 0 <= p < len(self.points):
                return int(p)
            raise ForeignPointError(f"no point with index {p}")
        return point_of(self.ring, p).index

    def point(self, p) -> Point:
        return self.points[self.index(p)]

    @property
    def infinity(self) -> Point:
        R = self.ring
        return self.points[self.lookup[R.one, R.zero]]

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = distant_graph(self).adjacency
        return A

    def pair_label(self, a: int, b: int) -> str:
        return f"({self.ring.labels[a]},{self.ring.labels[b]})"


def enumerate_points(ring: Ring) -> ProjectiveLine:
    """All unit orbits of admissible pairs, cached on the ring."""
    if "line" in ring._cache:
        return ring._cache["line"]
    n = ring.size
    adm = unimodular_pairs(ring)
    units = np.array(sorted(ring.units))
    lookup = np.full((n, n), -1, dtype=np.int32)
    points = []
    for a, b in np.argwhere(adm):  # lexicographic order, so the first hit is the canonical pair
        if lookup[a, b] >= 0:
            continue
        ua, ub = ring.mul[units, a], ring.mul[units, b]
        k = len(points)
        lookup[ua, ub] = k
        orbit = frozenset(zip(ua.tolist(), ub.tolist()))
        points.append(Point(k, (int(a), int(b)), orbit, f"({ring.labels[a]},{ring.labels[b]})"))
    line = ProjectiveLine(ring, points, lookup)
    ring._cache["line"] = line
    return line


def point_of(ring: Ring, pair) -> Point:
    a, b = (ring.index(x) for x in pair)
    if not unimodular_pairs(ring)[a, b]:
        raise NotAdmissible(f"({ring.labels[a]},{ring.labels[b]}) is not admissible over {ring.descriptor}")
    line = enumerate_points(ring)
    return line.points[line.lookup[a, b]]


def is_distant(line: ProjectiveLine, p, q) -> bool:
    (a, b), (c, d) = line.point(p).canonical, line.point(q).canonical
    return is_invertible(Matrix2(line.ring, a, b, c, d))


def neighbourhood(line: ProjectiveLine, p) -> frozenset[Point]:
    row = line.adjacency[line.index(p)]
    return frozenset(line.points[i] for i in np.flatnonzero(row))


def apply_matrix(line: ProjectiveLine, p, matrix: Matrix2) -> Point:
    """``p^gamma``: the point of ``rep * matrix``."""
    if matrix.ring is not line.ring:
        raise ForeignElementError("matrix and line are over different rings")
    if not is_invertible(matrix):
        raise NotInvertible(f"{matrix!r} is not invertible")
    return line.points[_image_indices(line, matrix)[line.index(p)]]


def _image_indices(line: ProjectiveLine, matrix: Matrix2) -> np.ndarray:
    """Point index of p^gamma for every point p (gamma assumed invertible)."""
    R = line.ring
    reps = np.array([p.canonical for p in line.points])
    x, y = reps[:, 0], reps[:, 1]
    u = R.add[R.mul[x, matrix.a], R.mul[y, matrix.c]]
    v = R.add[R.mul[x, matrix.b], R.mul[y, matrix.d]]
    return line.lookup[u, v]


def point_permutation(line: ProjectiveLine, matrix: Matrix2) -> np.ndarray:
    if not is_invertible(matrix):
        raise NotInvertible(f"{matrix!r} is not invertible")
    return _image_indices(line, matrix)


# ---------------------------------------------------------------------------
# projection to a quotient line


def _validate_projection(hom: RingHom) -> None:
    key = ("projection-ok", id(hom))
    cache = hom.source._cache
    if cache.get(key) is hom:
        return
    if not hom.check() or not hom.is_surjective():
        raise RingError("projection must be a surjective ring homomorphism")
    if not hom.kernel() <= jacobson_radical(hom.source).members:
        raise RingError("projection kernel is not contained in the radical")
    cache[key] = hom


def project_point(line: ProjectiveLine, p, hom: RingHom) -> Point:
    """``R(a,b) -> Rbar(abar, bbar)`` for a quotient map with kernel inside rad R."""
    if hom.source is not line.ring:
        raise ForeignElementError("homomorphism source differs from the line's ring")
    _validate_projection(hom)
    a, b = line.point(p).canonical
    return point_of(hom.target, (hom.image[a], hom.image[b]))


def projection_indices(line: ProjectiveLine, hom: RingHom) -> np.ndarray:
    """Vector of target point indices, one per point of ``line``."""
    _validate_projection(hom)
    target = enumerate_points(hom.target)
    reps = np.array([p.canonical for p in line.points])
    img = np.asarray(hom.image)
    return target.lookup[img[reps[:, 0]], img[reps[:, 1]]]


# ---------------------------------------------------------------------------
# distant graph


@dataclass(frozen=True, eq=False)
class DistantGraph:
    line: ProjectiveLine
    adjacency: np.ndarray

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    def to_dot(self) -> str:
        labels = [p.label for p in self.line.points]
        out = [f'graph "{self.line.ring.descriptor}" {{']
        out += [f'  "{s}";' for s in labels]
        out += [f'  "{labels[i]}" -- "{labels[j]}";' for i, j in self.edges()]
        out.append("}")
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {"ring": self.line.ring.descriptor,
               "points": [p.label for p in self.line.points],
               "edges": [list(e) for e in self.edges()]}
        return json.dumps(doc, sort_keys=True) + "\n"


def distant_graph(line: ProjectiveLine) -> DistantGraph:
    cache = line.ring._cache
    if "graph" not in cache:
        reps = np.array([p.canonical for p in line.points])
        n = len(reps)
        # full sweep (diagonal included) so symmetry and anti-reflexivity are checked, not assumed
        i, j = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), indexing="ij"))
        A = invertible_mask(line.ring, reps[i, 0], reps[i, 1], reps[j, 0], reps[j, 1]).reshape(n, n)
        A.setflags(write=False)
        cache["graph"] = DistantGraph(line, A)
    return cache["graph"]

