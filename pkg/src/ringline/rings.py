"""Finite unital rings stored as dense Cayley tables.

Elements of a ring of size ``n`` are the integers ``0..n-1``.  Addition and
multiplication are materialized as ``n x n`` tables, so every exhaustive check
in the package reduces to table lookups.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_SIZE = 4096
FIELD_ORDERS = (2, 3, 4, 5, 7, 11, 13)


class RingError(ValueError):
    pass


class DescriptorError(RingError):
    pass


class ForeignElementError(RingError):
    pass


class NotAnIdeal(RingError):
    pass


class NotAUnit(ArithmeticError):
    pass


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int32)
    a.setflags(write=False)
    return a


class Ring:
    """A finite unital ring given by its operation tables.

    Optional K-algebra metadata (``field``, ``basis``, ``coords``) is attached
    by the catalog constructors; ``coords[x]`` holds the coordinates of ``x``
    with respect to ``basis`` as indices into ``field``.
    """

    def __init__(self, add, mul, zero: int, one: int, labels: Sequence[str],
                 descriptor: str, *, kind: str = "custom", field: Ring | None = None,
                 basis: Sequence[int] | None = None, coords=None,
                 basis_names: Sequence[str] | None = None):
        self.add = _frozen(add)
        self.mul = _frozen(mul)
        n = self.add.shape[0]
        if self.add.shape != (n, n) or self.mul.shape != (n, n):
            raise RingError("operation tables must be square and of equal size")
        self.size = n
        self.zero = int(zero)
        self.one = int(one)
        if self.zero == self.one:
            raise RingError("the zero ring is excluded (1 == 0)")
        self.labels = tuple(labels)
        if len(set(self.labels)) != n:
            raise RingError("element labels must be unique")
        self._label_index = {s: i for i, s in enumerate(self.labels)}
        self.descriptor = descriptor
        self.kind = kind
        self.field = self if field == "self" else field
        self.basis = None if basis is None else tuple(int(b) for b in basis)
        self.basis_names = None if basis_names is None else tuple(basis_names)
        self.coords = None if coords is None else _frozen(coords)
        self.neg = _frozen(np.argmax(self.add == self.zero, axis=1))
        # two-sided inverse search
        hit = (self.mul == self.one) & (self.mul.T == self.one)
        self.unit_mask = hit.any(axis=1)
        self.unit_mask.setflags(write=False)
        self.inv = _frozen(np.where(self.unit_mask, np.argmax(hit, axis=1), -1))
        self.units = frozenset(int(u) for u in np.flatnonzero(self.unit_mask))
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"Ring({self.descriptor!r}, size={self.size})"

    def __len__(self) -> int:
        return self.size

    def __call__(self, x) -> Element:
        return Element(self, self.index(x))

    @property
    def elements(self) -> range:
        return range(self.size)

    def index(self, x) -> int:
        """Normalize ``x`` (Element, int index or label string) to an index."""
        if isinstance(x, Element):
            if x.ring is not self:
                raise ForeignElementError(f"{x!r} belongs to {x.ring.descriptor}, not {self.descriptor}")
            return x.index
        if isinstance(x, str):
            try:
                return self._label_index[x.replace(" ", "")]
            except KeyError:
                raise ForeignElementError(f"no element labelled {x!r} in {self.descriptor}") from None
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if 0 <= x < self.size:
                return int(x)
        raise ForeignElementError(f"{x!r} is not an element of {self.descriptor}")

    def label(self, x) -> str:
        return self.labels[self.index(x)]

    def sub(self, x: int, y: int) -> int:
        return int(self.add[x, self.neg[y]])

    def power(self, x: int, e: int) -> int:
        r = self.one
        for _ in range(e):
            r = int(self.mul[r, x])
        return r

    def is_commutative(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    def is_field(self) -> bool:
        return self.is_commutative() and len(self.units) == self.size - 1

    @property
    def characteristic(self) -> int:
        x, k = self.one, 1
        while x != self.zero:
            x = int(self.add[x, self.one])
            k += 1
        return k


@dataclass(frozen=True, eq=True)
class Element:
    """Convenience wrapper binding an index to its ring; supports + - * ~."""

    ring: Ring
    index: int

    def _other(self, y) -> int:
        return self.ring.index(y)

    def __add__(self, y):
        return Element(self.ring, int(self.ring.add[self.index, self._other(y)]))

    def __sub__(self, y):
        return Element(self.ring, self.ring.sub(self.index, self._other(y)))

    def __mul__(self, y):
        return Element(self.ring, int(self.ring.mul[self.index, self._other(y)]))

    def __neg__(self):
        return Element(self.ring, int(self.ring.neg[self.index]))

    def __invert__(self):
        return Element(self.ring, inverse(self.ring, self.index))

    def __repr__(self) -> str:
        return self.ring.labels[self.index]


# ---------------------------------------------------------------------------
# elementary operations


def is_unit(ring: Ring, x) -> bool:
    return bool(ring.unit_mask[ring.index(x)])


def inverse(ring: Ring, x) -> int:
    i = ring.index(x)
    if not ring.unit_mask[i]:
        raise NotAUnit(f"{ring.labels[i]} is not a unit of {ring.descriptor}")
    return int(ring.inv[i])


def jacobson_radical(ring: Ring, side: str = "left") -> Ideal:
    """All ``b`` such that ``1 - ab`` (or ``1 - ba`` for ``side='right'``) is a unit for every ``a``."""
    key = ("rad", side)
    if key not in ring._cache:
        prod = ring.mul if side == "left" else ring.mul.T  # prod[a, b] = ab  or  ba
        one_minus = ring.add[ring.one, ring.neg[prod]]
        members = np.flatnonzero(ring.unit_mask[one_minus].all(axis=0))
        ring._cache[key] = Ideal(ring, members)
    return ring._cache[key]


def annihilator(ring: Ring, subset: Iterable) -> frozenset[int]:
    s = np.array(sorted({ring.index(x) for x in subset}), dtype=np.int64)
    if s.size == 0:
        return frozenset(ring.elements)
    ok = (ring.mul[:, s] == ring.zero).all(axis=1) & (ring.mul[s, :] == ring.zero).all(axis=0)
    return frozenset(int(a) for a in np.flatnonzero(ok))


def nil_exponent(ring: Ring) -> int:
    """Least ``e >= 1`` with ``y**e == 0`` for every radical element ``y``."""
    rad = np.array(sorted(jacobson_radical(ring).members))
    if len(rad) == 1:
        return 1
    powers = rad.copy()
    e = 1
    while (powers != ring.zero).any():
        powers = ring.mul[powers, rad]
        e += 1
        if e > ring.size:
            raise RingError("radical element is not nilpotent")
    return e


# ---------------------------------------------------------------------------
# ideals, homomorphisms, quotients


class Ideal:
    """A two-sided ideal, validated on construction."""

    def __init__(self, ring: Ring, members: Iterable):
        self.ring = ring
        self.members = frozenset(ring.index(x) for x in members)
        m = np.array(sorted(self.members), dtype=np.int64)
        inside = np.zeros(ring.size, dtype=bool)
        inside[m] = True
        if not inside[ring.zero] or not inside[ring.add[np.ix_(m, m)]].all() or not inside[ring.neg[m]].all():
            raise NotAnIdeal(f"{self.labels()} is not an additive subgroup of {ring.descriptor}")
        if not inside[ring.mul[:, m]].all() or not inside[ring.mul[m, :]].all():
            raise NotAnIdeal(f"{self.labels()} is not a two-sided ideal of {ring.descriptor}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return self.ring.index(x) in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and other.ring is self.ring and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.ring), self.members))

    def labels(self) -> list[str]:
        return [self.ring.labels[i] for i in sorted(self.members)]

    def __repr__(self) -> str:
        return "{" + ", ".join(self.labels()) + "}"


@dataclass(frozen=True, eq=False)
class RingHom:
    source: Ring
    target: Ring
    image: np.ndarray

    def __call__(self, x) -> int:
        return int(self.image[self.source.index(x)])

    def check(self) -> bool:
        """True iff the table preserves 0, 1, + and * (exhaustive)."""
        s, t, f = self.source, self.target, np.asarray(self.image)
        if f.shape != (s.size,) or f.min() < 0 or f.max() >= t.size:
            return False
        if f[s.zero] != t.zero or f[s.one] != t.one:
            return False
        fx, fy = f[:, None], f[None, :]
        return bool((f[s.add] == t.add[fx, fy]).all() and (f[s.mul] == t.mul[fx, fy]).all())

    def kernel(self) -> frozenset[int]:
        return frozenset(int(x) for x in np.flatnonzero(np.asarray(self.image) == self.target.zero))

    def is_surjective(self) -> bool:
        return len(set(np.asarray(self.image).tolist())) == self.target.size


def quotient_ring(ring: Ring, ideal: Ideal | Iterable, *, descriptor: str | None = None) -> tuple[Ring, RingHom]:
    """``R/I`` with cosets represented by their least index, plus the projection."""
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ring, ideal)
    if ideal.ring is not ring:
        raise ForeignElementError("ideal belongs to a different ring")
    m = np.array(sorted(ideal.members))
    rep = ring.add[:, m].min(axis=1)
    reps = np.unique(rep)
    new = np.full(ring.size, -1, dtype=np.int64)
    new[reps] = np.arange(len(reps))
    proj = new[rep]
    add = proj[ring.add[np.ix_(reps, reps)]]
    mul = proj[ring.mul[np.ix_(reps, reps)]]
    if descriptor is None:
        if ideal.members == jacobson_radical(ring).members:
            descriptor = f"quotient({ring.descriptor},rad)"
        else:
            descriptor = f"quotient({ring.descriptor},{{{','.join(str(i) for i in sorted(ideal.members))}}})"
    labels = [f"[{ring.labels[r]}]" for r in reps] if len(m) > 1 else ring.labels
    q = Ring(add, mul, proj[ring.zero], proj[ring.one], labels, descriptor, kind="quotient")
    return q, RingHom(ring, q, _frozen(proj))


# ---------------------------------------------------------------------------
# catalog constructors


def _check_size(n: int, max_size: int) -> None:
    if n > max_size:
        raise RingError(f"ring of size {n} exceeds the configured bound {max_size}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def zmod(n: int) -> Ring:
    if not 2 <= n <= 256:
        raise DescriptorError(f"zmod(n) needs 2 <= n <= 256, got {n}")
    r = np.arange(n)
    return Ring((r[:, None] + r) % n, (r[:, None] * r) % n, 0, 1,
                [str(i) for i in range(n)], f"zmod({n})", kind="zmod")


def gf(q: int) -> Ring:
    if q == 4:
        # 0, 1, w, w+1 encoded as bit vectors over GF(2) with w^2 = w + 1
        r = np.arange(4)
        mul = np.zeros((4, 4), dtype=np.int64)
        for x, y in itertools.product(range(4), repeat=2):
            a0, a1, b0, b1 = x & 1, x >> 1, y & 1, y >> 1
            c0 = (a0 * b0 + a1 * b1) % 2
            c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2
            mul[x, y] = c0 | (c1 << 1)
        return Ring(r[:, None] ^ r, mul, 0, 1, ["0", "1", "w", "w+1"], "gf(4)",
                    kind="gf", field="self", basis=[1], coords=r[:, None], basis_names=["1"])
    if not _is_prime(q):
        raise DescriptorError(f"gf(p) needs a prime p (or 4), got {q}")
    if q > 13:
        raise DescriptorError(f"gf(p) is limited to p <= 13, got {q}")
    r = np.arange(q)
    return Ring((r[:, None] + r) % q, (r[:, None] * r) % q, 0, 1, [str(i) for i in range(q)],
                f"gf({q})", kind="gf", field="self", basis=[1], coords=r[:, None], basis_names=["1"])


def _term(coef: str, name: str) -> str:
    if name == "1":
        return coef
    if coef == "1":
        return name
    if "+" in coef:
        coef = f"({coef})"
    return coef + name


def structure_algebra(field: Ring, names: Sequence[str], struct: dict, descriptor: str, *,
                      kind: str = "custom", max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    """Algebra over ``field`` from basis products.

    ``struct[(i, j)]`` maps basis index pairs to the product ``b_i b_j`` as a
    dict ``{k: coefficient}`` with coefficients given as field indices; missing
    pairs multiply to zero.  Element index is ``sum(c_i * q**i)``.
    """
    q, m = field.size, len(names)
    n = q ** m
    _check_size(n, max_size)
    coords = np.array(list(itertools.product(range(q), repeat=m)), dtype=np.int64)[:, ::-1]
    weights = q ** np.arange(m)

    def encode(c):
        return (c * weights).sum(axis=-1)

    fa, fm = field.add, field.mul
    add = encode(fa[coords[:, None, :], coords[None, :, :]])
    prod = np.zeros((n, n, m), dtype=np.int64)
    for (i, j), terms in struct.items():
        xy = fm[coords[:, None, i], coords[None, :, j]]
        for k, c in terms.items():
            prod[:, :, k] = fa[prod[:, :, k], fm[xy, c]]
    mul = encode(prod)
    r = np.arange(n)
    ones = [u for u in r if (mul[u] == r).all() and (mul[:, u] == r).all()]
    if len(ones) != 1:
        raise RingError(f"{descriptor}: structure constants give no two-sided identity")
    labels = []
    for c in coords:
        terms = [_term(field.labels[ci], nm) for ci, nm in zip(c, names) if ci != field.zero]
        labels.append("+".join(terms) if terms else "0")
    basis = [int(q ** i) for i in range(m)]
    return Ring(add, mul, 0, ones[0], labels, descriptor, kind=kind, field=field,
                basis=basis, coords=coords, basis_names=names)


def _require_field(k: Ring) -> Ring:
    if k.kind != "gf":
        raise DescriptorError(f"{k.descriptor} is not a catalog field")
    return k


def dual(k: Ring, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    _require_field(k)
    s = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    return structure_algebra(k, ["1", "e"], s, f"dual({k.descriptor})", kind="dual", max_size=max_size)


def anormal(k: Ring, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    _require_field(k)
    s = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}
    return structure_algebra(k, ["1", "j"], s, f"anormal({k.descriptor})", kind="anormal", max_size=max_size)


def trunc(k: Ring, n: int, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    _require_field(k)
    if not 1 <= n <= 4:
        raise DescriptorError(f"trunc(K,n) needs 1 <= n <= 4, got {n}")
    names = ["1", "x", "x^2", "x^3"][:n]
    s = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    return structure_algebra(k, names, s, f"trunc({k.descriptor},{n})", kind="trunc", max_size=max_size)


def upper2(k: Ring, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    _require_field(k)
    # basis j1 = E11, j2 = E22, e = E12
    s = {(0, 0): {0: 1}, (1, 1): {1: 1}, (0, 2): {2: 1}, (2, 1): {2: 1}}
    return structure_algebra(k, ["j1", "j2", "e"], s, f"upper2({k.descriptor})", kind="upper2", max_size=max_size)


def mat2(k: Ring, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    _require_field(k)
    units = [(0, 0), (0, 1), (1, 0), (1, 1)]
    s = {}
    for x, (i, j) in enumerate(units):
        for y, (jj, l) in enumerate(units):
            if j == jj:
                s[(x, y)] = {units.index((i, l)): 1}
    return structure_algebra(k, ["e11", "e12", "e21", "e22"], s, f"mat2({k.descriptor})", kind="mat2",
                             max_size=max_size)


def product(r1: Ring, r2: Ring, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    n1, n2 = r1.size, r2.size
    _check_size(n1 * n2, max_size)
    i, j = np.divmod(np.arange(n1 * n2), n2)
    add = r1.add[i[:, None], i[None, :]] * n2 + r2.add[j[:, None], j[None, :]]
    mul = r1.mul[i[:, None], i[None, :]] * n2 + r2.mul[j[:, None], j[None, :]]
    labels = [f"({r1.labels[a]},{r2.labels[b]})" for a, b in zip(i, j)]
    meta = {}
    f1, f2 = r1.field, r2.field
    if f1 is not None and f2 is not None and f1.descriptor == f2.descriptor and r1.coords is not None \
            and r2.coords is not None:
        # coordinates over the common field: basis of the first factor, then the second
        meta = dict(field=f1,
                    basis=[b * n2 + r2.zero for b in r1.basis] + [r1.zero * n2 + b for b in r2.basis],
                    coords=np.concatenate([r1.coords[i], r2.coords[j]], axis=1),
                    basis_names=[f"({nm},0)" for nm in r1.basis_names] + [f"(0,{nm})" for nm in r2.basis_names])
    return Ring(add, mul, r1.zero * n2 + r2.zero, r1.one * n2 + r2.one, labels,
                f"product({r1.descriptor},{r2.descriptor})", kind="product", **meta)


# ---------------------------------------------------------------------------
# descriptor grammar:  name | name(arg, ...)  with arg = descriptor | int | rad | {i, j, ...}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1):
            out.append(("int", m.group(1)))
        elif m.group(2):
            out.append(("name", m.group(2)))
        elif m.group(3).strip():
            out.append(("sym", m.group(3)))
    return out


def parse_descriptor(text: str):
    """Parse e.g. ``'quotient(zmod(8),rad)'`` into nested tuples."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise DescriptorError(f"malformed ring descriptor {text!r}")
        pos += 1
        return tok[1]

    def arg():
        kind, val = peek()
        if kind == "int":
            return int(take())
        if kind == "sym" and val == "{":
            take()
            items = []
            while peek() != ("sym", "}"):
                items.append(int(take("int")))
                if peek() == ("sym", ","):
                    take()
            take("sym", "}")
            return frozenset(items)
        return desc()

    def desc():
        name = take("name")
        if peek() != ("sym", "("):
            return (name,)
        take("sym", "(")
        args = [arg()]
        while peek() == ("sym", ","):
            take()
            args.append(arg())
        take("sym", ")")
        return (name, *args)

    tree = desc()
    if pos != len(toks):
        raise DescriptorError(f"trailing input in ring descriptor {text!r}")
    return tree


def _build(tree, max_size: int) -> Ring:
    name, *args = tree
    ints = [a for a in args if isinstance(a, int)]
    subs = [a for a in args if isinstance(a, tuple)]

    def need(n_int, n_sub):
        if len(ints) != n_int or len(subs) != n_sub or len(args) != n_int + n_sub:
            raise DescriptorError(f"wrong arguments for {name}: {args}")

    if name == "rad":
        raise DescriptorError("'rad' is only valid as the ideal argument of quotient()")
    if name == "gf4":
        need(0, 0)
        return gf(4)
    if name in ("zmod", "gf"):
        need(1, 0)
        return zmod(ints[0]) if name == "zmod" else gf(ints[0])
    if name in ("dual", "anormal", "upper2", "mat2"):
        need(0, 1)
        k = _build(subs[0], max_size)
        return {"dual": dual, "anormal": anormal, "upper2": upper2, "mat2": mat2}[name](k, max_size=max_size)
    if name == "trunc":
        if len(args) != 2 or not isinstance(args[0], tuple) or not isinstance(args[1], int):
            raise DescriptorError(f"wrong arguments for trunc: {args}")
        return trunc(_build(args[0], max_size), args[1], max_size=max_size)
    if name == "product":
        need(0, 2)
        return product(_build(subs[0], max_size), _build(subs[1], max_size), max_size=max_size)
    if name == "quotient":
        if len(args) != 2 or not isinstance(args[0], tuple):
            raise DescriptorError(f"wrong arguments for quotient: {args}")
        base = _build(args[0], max_size)
        if args[1] == ("rad",):
            return quotient_ring(base, jacobson_radical(base))[0]
        if isinstance(args[1], frozenset):
            return quotient_ring(base, Ideal(base, args[1]))[0]
        raise DescriptorError("quotient() ideal must be 'rad' or a set {i,j,...} of element indices")
    raise DescriptorError(f"unknown ring constructor {name!r}")


def build_ring(descriptor, *, max_size: int = DEFAULT_MAX_SIZE) -> Ring:
    """Construct a catalog ring from a descriptor string or parsed tuple.

    >>> sorted(build_ring("zmod(4)").units)
    [1, 3]
    """
    tree = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    return _build(tree, max_size)
