"""Non-linear "parabola models" over the dual numbers and the ternions.

Points of the affine space ``R`` are handled as coordinate tuples over ``K``
(``(z1, z2)`` for ``K + K e``, ``(z1, z2, z3)`` for ``K j1 + K j2 + K e``).
Everything here is exact over finite fields except :func:`export_figure_data`,
which samples the real curves for plotting.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .chaintrafo import (AlgebraError, KAlgebra, VerificationError, affine_lines, beta_matrix,
                         gamma_table, group_N)
from .rings import Ring

Coords = tuple[int, ...]


@dataclass(frozen=True)
class ModelCurve:
    kind: str  # vertical | line | parabola | paraboloid-patch | line-in-H | other
    coefficients: tuple
    points: frozenset[Coords]


@dataclass
class ModelLineSet:
    example: str
    field: str
    t: int
    lines: list[tuple[frozenset[int], str]]

    def point_sets(self) -> set[frozenset[int]]:
        return {s for s, _ in self.lines}

    def tag_counts(self) -> dict[str, int]:
        return dict(sorted(Counter(tag for _, tag in self.lines).items()))


# ---------------------------------------------------------------------------
# field helpers


def _require(alg: KAlgebra, kind: str) -> Ring:
    if alg.kind != kind:
        raise AlgebraError(f"expected a {kind} algebra, got {alg.ring.descriptor}")
    return alg.field


def _nonzero_t(F: Ring, t) -> int:
    t = F.index(t)
    if t == F.zero:
        raise ValueError("t must be nonzero")
    return t


def _poly_mul_linear(F: Ring, poly: list[int], root: int) -> list[int]:
    # poly * (x - root)
    out = [F.zero] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] = int(F.add[out[i + 1], c])
        out[i] = int(F.add[out[i], F.neg[F.mul[c, root]]])
    return out


def interpolate(F: Ring, xs: Iterable[int], ys: Iterable[int]) -> list[int]:
    """Coefficients (low degree first, trailing zeros trimmed) of the Lagrange polynomial."""
    xs, ys = list(xs), list(ys)
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    coeffs = [F.zero] * max(1, len(xs))
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis, denom = [F.one], F.one
        for j, xj in enumerate(xs):
            if j != i:
                basis = _poly_mul_linear(F, basis, xj)
                denom = int(F.mul[denom, F.sub(xi, xj)])
        scale = int(F.mul[yi, F.inv[denom]])
        for k, c in enumerate(basis):
            coeffs[k] = int(F.add[coeffs[k], F.mul[scale, c]])
    while len(coeffs) > 1 and coeffs[-1] == F.zero:
        coeffs.pop()
    return coeffs


def _degree(coeffs: list[int], F: Ring) -> int:
    return -1 if coeffs == [F.zero] else len(coeffs) - 1


# ---------------------------------------------------------------------------
# coordinate formulas


def dual_beta(alg: KAlgebra, t, point: Coords) -> Coords:
    """``(z1, z2) -> (z1, t z1^2 + z2)``."""
    F = _require(alg, "dual")
    t = F.index(t)
    z1, z2 = point
    return z1, int(F.add[F.mul[t, F.mul[z1, z1]], z2])


def dual_nu(alg: KAlgebra, l1, l2, point: Coords) -> Coords:
    """``(z1, z2) -> (z1, z1 l1 + z2 + l2)``: shear with vertical axis, or vertical translation."""
    F = _require(alg, "dual")
    l1, l2 = F.index(l1), F.index(l2)
    z1, z2 = point
    return z1, int(F.add[F.add[F.mul[z1, l1], z2], l2])


def ternion_beta(alg: KAlgebra, t, point: Coords) -> Coords:
    """``(z1, z2, z3) -> (z1, z2, z3 + t z1 z2)``."""
    F = _require(alg, "upper2")
    t = F.index(t)
    z1, z2, z3 = point
    return z1, z2, int(F.add[z3, F.mul[t, F.mul[z1, z2]]])


def ternion_nu(alg: KAlgebra, l1, l2, point: Coords) -> Coords:
    F = _require(alg, "upper2")
    l1, l2 = F.index(l1), F.index(l2)
    z1, z2, z3 = point
    return z1, z2, int(F.add[F.add[F.mul[z1, l1], z3], l2])


def _epsilon(alg: KAlgebra) -> int:
    # the radical is K e in both examples; e is the last basis element
    return alg.basis[-1]


def beta_table(alg: KAlgebra, t) -> np.ndarray:
    """Generic induced map of the B-matrix for ``b = t e``, as an element table."""
    b = int(alg.ring.mul[alg.scalar(t), _epsilon(alg)])
    return gamma_table(alg, beta_matrix(alg, b))


def coordinate_table(alg: KAlgebra, fn: Callable[[Coords], Coords]) -> np.ndarray:
    return np.array([alg.element(fn(alg.coords_of(z))) for z in alg.ring.elements])


# ---------------------------------------------------------------------------
# curve classification


def classify_points(alg: KAlgebra, points: Iterable[Coords]) -> ModelCurve:
    """Classify a planar point set by exact interpolation of ``z2`` over ``z1``."""
    F = alg.field
    pts = frozenset(tuple(int(c) for c in p) for p in points)
    if alg.dim != 2:
        return ModelCurve("other", (), pts)
    xs = [p[0] for p in pts]
    if len(set(xs)) == 1:
        return ModelCurve("vertical", (xs[0],), pts)
    if len(set(xs)) != len(xs) or len(xs) != F.size:
        return ModelCurve("other", (), pts)
    ordered = sorted(pts)
    coeffs = interpolate(F, [p[0] for p in ordered], [p[1] for p in ordered])
    deg = _degree(coeffs, F)
    padded = (coeffs + [F.zero] * 3)[:3]
    if deg <= 1:
        return ModelCurve("line", (padded[1], padded[0]), pts)
    if deg == 2:
        return ModelCurve("parabola", (padded[2], padded[1], padded[0]), pts)  # z2 = a z1^2 + b z1 + c
    return ModelCurve("other", tuple(coeffs), pts)


def _parametrize(alg: KAlgebra, line: frozenset[int]) -> tuple[int, int]:
    R = alg.ring
    v = min(line)
    u = R.sub(min(x for x in line if x != v), v)
    if frozenset(R.add[R.mul[alg.scalars, u], v].tolist()) != line:
        raise ValueError("point set is not an affine line")
    return u, v


def image_of_line(alg: KAlgebra, f, line: Iterable) -> ModelCurve:
    """Image of an affine line under ``f`` (callable or element table), classified.

    Planar images are classified as graphs over ``z1``.  In dimension 3 the
    image is parametrized through the line and each coordinate interpolated
    as a polynomial in the parameter: degree <= 1 gives a line, degree 2 a
    parabola.
    """
    R, F = alg.ring, alg.field
    line = frozenset(R.index(x) for x in line)
    table = f if not callable(f) else np.array([f(z) for z in R.elements])
    image = [int(table[z]) for z in sorted(line)]
    pts = [alg.coords_of(w) for w in image]
    if alg.dim == 2:
        return classify_points(alg, pts)
    u, v = _parametrize(alg, line)
    ks = list(range(F.size))
    img = [alg.coords_of(table[R.add[R.mul[alg.scalars[k], u], v]]) for k in ks]
    per_coord = [interpolate(F, ks, [p[i] for p in img]) for i in range(alg.dim)]
    deg = max(_degree(c, F) for c in per_coord)
    coeffs = tuple(tuple((c + [F.zero] * 3)[:3]) for c in per_coord)
    pts = frozenset(img)
    if deg <= 1:
        radical_only = all(c[1] == F.zero for c in coeffs[:-1])
        return ModelCurve("vertical" if radical_only else "line", coeffs, pts)
    if deg == 2:
        return ModelCurve("parabola", coeffs, pts)
    return ModelCurve("other", coeffs, pts)


# ---------------------------------------------------------------------------
# orbits of the standard parabola (dual numbers)


def standard_parabola(alg: KAlgebra, t) -> ModelCurve:
    """Image of the line ``K`` under the B-map with ``b = t e``."""
    table = beta_table(alg, t)
    return image_of_line(alg, table, alg.scalars.tolist())


def _apply_to_points(alg: KAlgebra, table: np.ndarray, pts) -> frozenset[Coords]:
    return frozenset(alg.coords_of(table[alg.element(p)]) for p in pts)


def _translate(alg: KAlgebra, pts, c: int) -> frozenset[Coords]:
    R = alg.ring
    return frozenset(alg.coords_of(R.add[alg.element(p), c]) for p in pts)


def orbit_N(alg: KAlgebra, curve: ModelCurve) -> list[ModelCurve]:
    sets = {_apply_to_points(alg, gamma_table(alg, nu), curve.points) for nu in group_N(alg).members}
    return [classify_points(alg, s) for s in sorted(sets, key=sorted)]


def orbit_T(alg: KAlgebra, curve: ModelCurve) -> list[ModelCurve]:
    sets = {_translate(alg, curve.points, c) for c in alg.ring.elements}
    return [classify_points(alg, s) for s in sorted(sets, key=sorted)]


@dataclass
class OrbitComparison:
    field: str
    t: int
    n_orbit: int
    t_orbit: int
    t_subset_of_n: bool

    @property
    def equal(self) -> bool:
        return self.t_subset_of_n and self.n_orbit == self.t_orbit


def orbit_comparison(alg: KAlgebra, t) -> OrbitComparison:
    _require(alg, "dual")
    t = _nonzero_t(alg.field, t)
    C = standard_parabola(alg, t)
    N = {c.points for c in orbit_N(alg, C)}
    T = {c.points for c in orbit_T(alg, C)}
    return OrbitComparison(alg.field.descriptor, t, len(N), len(T), T <= N)


def compare_orbits(alg: KAlgebra, t) -> bool:
    """Whether the translates of C are exactly its N'-orbit (raises if not even a subset)."""
    cmp = orbit_comparison(alg, t)
    if not cmp.t_subset_of_n:
        raise VerificationError("translate family of C is not contained in its N'-orbit")
    return cmp.equal


# ---------------------------------------------------------------------------
# ternions


def cone_of_singularity(alg_or_ring) -> frozenset[int]:
    R = alg_or_ring.ring if isinstance(alg_or_ring, KAlgebra) else alg_or_ring
    return frozenset(int(x) for x in np.flatnonzero(~R.unit_mask))


def _plane(alg: KAlgebra, axis: int, value: int) -> list[int]:
    return [z for z in alg.ring.elements if alg.coords[z, axis] == value]


def _affine_on_plane(alg: KAlgebra, base: int, dirs: tuple[int, int], table: np.ndarray) -> bool:
    R, k = alg.ring, alg.scalars
    f0 = int(table[base])
    images = [R.sub(int(table[R.add[base, d]]), f0) for d in dirs]
    for x in k:
        for y in k:
            p = R.add[R.add[base, R.mul[x, dirs[0]]], R.mul[y, dirs[1]]]
            expected = R.add[R.add[f0, R.mul[x, images[0]]], R.mul[y, images[1]]]
            if table[p] != expected:
                return False
    return True


def is_planar_shear(alg: KAlgebra, plane: list[int], table: np.ndarray, axis: int) -> bool:
    """Affine on the plane, fixes a line pointwise (or everything) and moves points parallel to it."""
    R = alg.ring
    plane_set = set(plane)
    if not all(int(table[z]) in plane_set for z in plane):
        return False
    other = 1 - axis
    dirs = (alg.basis[other], alg.basis[2])
    if not _affine_on_plane(alg, plane[0], dirs, table):
        return False
    fixed = [z for z in plane if table[z] == z]
    if len(fixed) == len(plane):
        return True
    moves = {R.sub(int(table[z]), z) for z in plane if table[z] != z}
    along_e = all(alg.coords[m][:2].tolist() == [0, 0] for m in moves)
    fixed_is_line = len(fixed) == alg.field.size and all(
        alg.coords[R.sub(z, fixed[0])][:2].tolist() == [0, 0] for z in fixed)
    return bool(along_e and fixed_is_line)


@dataclass
class TernionReport:
    field: str
    t: int
    checks: list[tuple[str, bool]] = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(flag for _, flag in self.checks)


def _translation_classes(alg: KAlgebra, sets: Iterable[frozenset[int]]) -> set[frozenset[frozenset[int]]]:
    R = alg.ring
    return {frozenset(frozenset(R.add[list(s), c].tolist()) for c in R.elements) for s in sets}


def ternion_classify(alg: KAlgebra, t) -> TernionReport:
    F = _require(alg, "upper2")
    t = _nonzero_t(F, t)
    R = alg.ring
    table = beta_table(alg, t)
    coord_table = coordinate_table(alg, lambda p: ternion_beta(alg, t, p))
    rep = TernionReport(F.descriptor, t)
    rep.checks.append(("coordinate formula matches induced map", bool((table == coord_table).all())))

    lines = affine_lines(alg)
    e = _epsilon(alg)
    vertical = [L for L in lines if R.sub(max(L), min(L)) in set(R.mul[alg.scalars, e].tolist())]
    rep.checks.append(("vertical lines invariant",
                       all(frozenset(table[list(L)].tolist()) == L for L in vertical)))
    cone = cone_of_singularity(alg)
    rep.checks.append(("cone fixed pointwise", all(table[z] == z for z in cone)))
    for axis, name in ((0, "z1"), (1, "z2")):
        ok = all(is_planar_shear(alg, _plane(alg, axis, c), table, axis) for c in F.elements)
        rep.checks.append((f"planar shear on every plane {name} = const", ok))

    P = _plane(alg, 2, F.zero)
    H = {(z1, z2, int(F.mul[t, F.mul[z1, z2]])) for z1 in F.elements for z2 in F.elements}
    rep.checks.append(("plane z3 = 0 maps onto z3 = t z1 z2",
                       {alg.coords_of(table[z]) for z in P} == H))

    in_plane = [L for L in lines if L <= set(P)]
    regular = [L for L in in_plane if R.unit_mask[_parametrize(alg, L)[0]]]
    rulings = [L for L in in_plane if not R.unit_mask[_parametrize(alg, L)[0]]]
    reg_images = [image_of_line(alg, table, L) for L in regular]
    ruling_images = [image_of_line(alg, table, L) for L in rulings]
    rep.checks.append(("regular lines of z3 = 0 map to parabolas in H",
                       all(c.kind == "parabola" and c.points <= H for c in reg_images)))
    rep.checks.append(("ruling lines of z3 = 0 map to lines in H",
                       all(c.kind == "line" and c.points <= H for c in ruling_images)))
    rep.counts.update(parabolas_in_H=len({c.points for c in reg_images}),
                      rulings_in_H=len({c.points for c in ruling_images}))

    # translate dichotomy for the vertical planes parallel to the one through C = image of K
    C = frozenset(int(table[k]) for k in alg.scalars)
    V = frozenset(R.add[np.asarray(sorted(alg.scalars))[:, None], R.mul[alg.scalars, e][None, :]].ravel().tolist())
    H_el = frozenset(alg.element(h) for h in H)
    family = {frozenset(R.add[list(V), c].tolist()) & H_el for c in R.elements}
    translates = {frozenset(R.add[list(C), c].tolist()) for c in R.elements}
    n_translates = sum(1 for s in family if s in translates)
    rep.counts.update(family=len(family), family_translates_of_C=n_translates)
    if F.characteristic == 2:
        rep.checks.append(("no member of the vertical-plane family besides C is a translate of C",
                           n_translates == 1))
    else:
        rep.checks.append(("every member of the vertical-plane family is a translate of C",
                           n_translates == len(family)))
    n_orbit = {frozenset(gamma_table(alg, nu)[list(C)].tolist()) for nu in group_N(alg).members}
    rep.checks.append(("family and N'-orbit of C agree up to translation",
                       _translation_classes(alg, family) == _translation_classes(alg, n_orbit)))
    all_regular = [L for L in lines if R.unit_mask[_parametrize(alg, L)[0]]]
    images = [frozenset(table[list(L)].tolist()) for L in all_regular]
    hcal = [frozenset(alg.element(p) for p in c.points) for c in reg_images]
    rep.checks.append(("images of regular lines are the parabolas in H up to translation",
                       _translation_classes(alg, images) == _translation_classes(alg, hcal)))
    return rep


# ---------------------------------------------------------------------------
# model line sets


def model_line_set(alg: KAlgebra, t, example: str | None = None) -> ModelLineSet:
    """New lines of the parabola model, tagged by where they come from."""
    example = example or {"dual": "dual", "upper2": "ternion"}.get(alg.kind, alg.kind)
    kind = {"dual": "dual", "ternion": "upper2"}.get(example)
    if kind is None:
        raise ValueError(f"unknown example {example!r}")
    F = _require(alg, kind)
    if F.size == 2:
        raise ValueError("parabola models are not defined over GF(2)")
    t = _nonzero_t(F, t)
    R = alg.ring
    table = beta_table(alg, t)
    lines = affine_lines(alg)
    out: list[tuple[frozenset[int], str]] = []
    if example == "dual":
        e_line = set(R.mul[alg.scalars, _epsilon(alg)].tolist())
        out += [(L, "vertical") for L in lines if R.sub(max(L), min(L)) in e_line]
        C = frozenset(int(table[k]) for k in alg.scalars)
        if F.characteristic != 2:
            fam = {frozenset(R.add[list(C), c].tolist()) for c in R.elements}
            tag = "translate-of-C"
        else:
            fam = {frozenset(gamma_table(alg, nu)[list(C)].tolist()) for nu in group_N(alg).members}
            tag = "N-orbit member"
        out += [(s, tag) for s in sorted(fam, key=sorted)]
    else:
        out += [(L, "non-regular image") for L in lines if not R.unit_mask[_parametrize(alg, L)[0]]]
        P = set(_plane(alg, 2, F.zero))
        hcal = {frozenset(table[list(L)].tolist()) for L in lines
                if L <= P and R.unit_mask[_parametrize(alg, L)[0]]}
        fam = {frozenset(R.add[list(s), c].tolist()) for s in hcal for c in R.elements}
        out += [(s, "translate-of-parabola-in-H") for s in sorted(fam, key=sorted)]
    return ModelLineSet(example, F.descriptor, t, out)


def image_line_set(alg: KAlgebra, t) -> set[frozenset[int]]:
    """Images of all affine lines under the B-map with ``b = t e``."""
    table = beta_table(alg, t)
    return {frozenset(table[list(L)].tolist()) for L in affine_lines(alg)}


def is_linear_space(lines: Iterable[frozenset[int]], n_points: int) -> bool:
    """Any two distinct points lie on exactly one of ``lines``."""
    count = np.zeros((n_points, n_points), dtype=np.int64)
    for L in lines:
        idx = np.array(sorted(L))
        count[np.ix_(idx, idx)] += 1
    off = ~np.eye(n_points, dtype=bool)
    return bool((count[off] == 1).all())


# ---------------------------------------------------------------------------
# real-valued samples for plotting


def parse_range(text: str) -> tuple[float, float, float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValueError(f"malformed range {text!r}; expected a:b:step") from None
    if step <= 0:
        raise ValueError("range step must be positive")
    return a, b, step


def _samples(a: float, b: float, step: float) -> np.ndarray:
    if b < a:
        return np.array([])
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def export_figure_data(example: str, t: float, sampling, path: str | Path | None = None) -> str:
    """CSV samples of the real curves (parabolas, or the saddle H) for plotting."""
    a, b, step = parse_range(sampling) if isinstance(sampling, str) else sampling
    if step <= 0:
        raise ValueError("range step must be positive")
    s = _samples(a, b, step)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if example == "dual":
        w.writerow(["curve_id", "param", "x", "y"])
        # C: z2 = t z1^2; the shear with l1 = -2t, l2 = t + 1 gives t (z1 - 1)^2 + 1,
        # which is also the translate of C by (1, 1)
        for x in s:
            w.writerow(["C", f"{x:.6g}", f"{x:.6g}", f"{t * x * x:.6g}"])
        for x in s:
            w.writerow(["C_nu", f"{x:.6g}", f"{x:.6g}", f"{t * x * x - 2 * t * x + t + 1:.6g}"])
        for x in s:
            w.writerow(["C_tau", f"{x:.6g}", f"{x + 1:.6g}", f"{t * x * x + 1:.6g}"])
    elif example == "ternion":
        w.writerow(["curve_id", "param", "x", "y", "z"])
        for u in s:
            for v in s:
                w.writerow([f"H:z1={u:.6g}", f"{v:.6g}", f"{u:.6g}", f"{v:.6g}", f"{t * u * v:.6g}"])
        for v in s:
            for u in s:
                w.writerow([f"H:z2={v:.6g}", f"{u:.6g}", f"{u:.6g}", f"{v:.6g}", f"{t * u * v:.6g}"])
    else:
        raise ValueError(f"unknown example {example!r}")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text
