"""Verification suites composing the library checks into reports."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import chaintrafo as ct
from . import models
from .projline import (Matrix2, check_admissibility, distant_graph, enumerate_points, is_invertible,
                       point_permutation, projection_indices)
from .radpar import (is_local_ring, nondistant_matrix, parallel_classes, parallel_matrix,
                     quotient_parallel_matrix)
from .rings import Ring, RingError, build_ring, jacobson_radical, quotient_ring

DEFAULT_SEED = 1729
RANDOM_MATRICES = 10_000

RING_CATALOG = (
    *(f"zmod({n})" for n in range(2, 28)), "zmod(32)", "zmod(36)", "zmod(64)",
    "gf(2)", "gf(3)", "gf(4)", "gf(5)", "gf(7)", "gf(11)", "gf(13)",
    "dual(gf(2))", "dual(gf(3))", "dual(gf(4))", "dual(gf(5))", "dual(gf(7))",
    "anormal(gf(2))", "anormal(gf(3))", "anormal(gf(5))",
    "trunc(gf(2),3)", "trunc(gf(2),4)", "trunc(gf(3),3)", "trunc(gf(4),3)",
    "upper2(gf(2))", "upper2(gf(3))", "upper2(gf(4))", "mat2(gf(2))",
    "product(zmod(2),zmod(2))", "product(zmod(2),zmod(3))", "product(zmod(4),zmod(2))",
    "product(gf(2),gf(4))", "product(gf(3),gf(3))", "product(dual(gf(2)),gf(2))",
    "product(zmod(3),dual(gf(3)))",
    "quotient(zmod(8),rad)", "quotient(zmod(12),{0,6})", "quotient(upper2(gf(3)),rad)",
    "quotient(trunc(gf(2),4),rad)",
)

ALGEBRA_CATALOG = (
    "dual(gf(2))", "dual(gf(3))", "dual(gf(4))", "dual(gf(5))",
    "anormal(gf(2))", "anormal(gf(3))", "gf(4)@gf(2)",
    "trunc(gf(2),3)", "trunc(gf(2),4)", "trunc(gf(3),3)",
    "upper2(gf(2))", "upper2(gf(3))", "mat2(gf(2))",
    "product(gf(3),gf(3))", "product(gf(2),gf(4))@gf(2)", "product(dual(gf(2)),gf(2))",
)

MODEL_CATALOG = (
    ("dual", "gf(3)"), ("dual", "gf(4)"), ("dual", "gf(5)"), ("ternion", "gf(3)"),
)

_SIZES: dict[str, int] = {}


def ring_size(desc: str) -> int:
    if desc not in _SIZES:
        _SIZES[desc] = build_ring(desc.split("@")[0]).size
    return _SIZES[desc]


def catalog(max_size: int | None = None, max_points: int | None = None) -> list[str]:
    out = []
    for d in RING_CATALOG:
        if max_size is not None and ring_size(d) > max_size:
            continue
        if max_points is not None and len(enumerate_points(build_ring(d))) > max_points:
            continue
        out.append(d)
    return out


def algebra_catalog(max_size: int | None = None) -> list[str]:
    return [d for d in ALGEBRA_CATALOG if max_size is None or ring_size(d) <= max_size]


def sampling_seed() -> int:
    return int(os.environ.get("RINGLINE_SEED", DEFAULT_SEED))


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None


@dataclass
class VerificationReport:
    suite: str
    descriptor: str
    checks: list[Check] = field(default_factory=list)
    elapsed: float = 0.0  # milliseconds
    summary: dict = field(default_factory=dict)

    def add(self, name: str, passed, witness=None) -> None:
        passed = bool(passed)
        if not passed and witness is None:
            witness = "no witness recorded"
        self.checks.append(Check(name, passed, None if witness is None else str(witness)))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self, timing: bool = False) -> dict:
        doc = {"schema": 1, "suite": self.suite, "descriptor": self.descriptor, "ok": self.ok,
               "summary": self.summary,
               "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness} for c in self.checks]}
        if timing:
            doc["elapsed_ms"] = round(self.elapsed, 1)
        return doc

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True)

    def to_text(self, timing: bool = False) -> str:
        head = f"[{'PASS' if self.ok else 'FAIL'}] {self.suite} {self.descriptor}"
        if timing:
            head += f" ({self.elapsed:.0f} ms)"
        lines = [head]
        lines += [f"  {k}: {_fmt(v)}" for k, v in self.summary.items()]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            tail = f" -- {c.witness}" if c.witness else ""
            lines.append(f"  {mark} {c.name}{tail}")
        return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = (time.perf_counter() - t0) * 1000
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# ring


def ring_axioms_witness(R: Ring):
    """First violated axiom as a string, or None."""
    n, ad, mu = R.size, R.add, R.mul
    r = np.arange(n)
    if not (ad == ad.T).all():
        return "addition not commutative"
    if not (ad[R.zero] == r).all():
        return "zero is not an additive identity"
    if not (ad[r, R.neg] == R.zero).all():
        return "missing additive inverse"
    if not (mu[R.one] == r).all() or not (mu[:, R.one] == r).all():
        return "one is not a two-sided identity"
    if n <= 64:
        x, y, z = r[:, None, None], r[None, :, None], r[None, None, :]
        if not (ad[ad[x, y], z] == ad[x, ad[y, z]]).all():
            return "addition not associative"
        if not (mu[mu[x, y], z] == mu[x, mu[y, z]]).all():
            return "multiplication not associative"
        if not (mu[x, ad[y, z]] == ad[mu[x, y], mu[x, z]]).all():
            return "left distributivity fails"
        if not (mu[ad[x, y], z] == ad[mu[x, z], mu[y, z]]).all():
            return "right distributivity fails"
    return None


@_timed
def ring_suite(desc: str) -> VerificationReport:
    R = build_ring(desc)
    rep = VerificationReport("ring", R.descriptor)
    bad = ring_axioms_witness(R)
    rep.add("ring axioms", bad is None, bad)
    ok_units = all(((R.mul[u] == R.one) & (R.mul[:, u] == R.one)).any() == (u in R.units) for u in R.elements)
    rep.add("units are exactly the two-sided invertible elements", ok_units)
    rad = jacobson_radical(R)
    rep.add("left and right radical criteria agree", rad == jacobson_radical(R, "right"))
    nil = [y for y in rad if R.power(y, R.size) != R.zero]
    rep.add("radical elements are nilpotent", not nil, nil[:1])
    Q, hom = quotient_ring(R, rad)
    rep.add("quotient by the radical has zero radical", len(jacobson_radical(Q)) == 1)
    lift = [a for a in R.elements if (a in R.units) != (hom(a) in Q.units)]
    rep.add("unit lifting modulo the radical", not lift, [R.labels[a] for a in lift[:1]])
    if is_local_ring(R):
        rep.add("local ring: radical equals the nonunits", rad.members == frozenset(R.elements) - R.units)
    return rep


# ---------------------------------------------------------------------------
# projective line and parallelism


@_timed
def parallelism_suite(desc: str) -> VerificationReport:
    R = build_ring(desc)
    rep = VerificationReport("parallelism", R.descriptor)
    line = enumerate_points(R)
    if R.size <= 16:
        try:
            check_admissibility(R)
            rep.add("unimodular pairs are exactly the completable pairs", True)
        except RingError as exc:
            rep.add("unimodular pairs are exactly the completable pairs", False, exc)
    G = distant_graph(line).adjacency
    rep.add("distant relation symmetric", (G == G.T).all())
    rep.add("distant relation anti-reflexive", not G.diagonal().any())
    deg = set(G.sum(axis=1).tolist())
    rep.add("every neighbourhood has |R| points", deg == {R.size}, sorted(deg))
    rad = jacobson_radical(R)
    Q, hom = quotient_ring(R, rad)
    qline = enumerate_points(Q)
    rep.add("|P(R)| = #rad R * |P(R/rad R)|", len(line) == len(rad) * len(qline),
            f"{len(line)} vs {len(rad)}*{len(qline)}")
    proj = projection_indices(line, hom)
    qG = distant_graph(qline).adjacency
    rep.add("projection is surjective", set(proj.tolist()) == set(range(len(qline))))
    rep.add("projection preserves and reflects distance", (G == qG[np.ix_(proj, proj)]).all())

    report = parallel_classes(line)
    rep.summary = {k: v for k, v in report.as_dict().items() if k != "ring"}
    P = parallel_matrix(line)
    rep.add("radical parallelism is an equivalence relation", report.is_equivalence)
    rep.add("definition agrees with equal images mod rad R", (P == quotient_parallel_matrix(line)).all())
    rep.add("every parallel class has #rad R points", report.class_size == len(rad),
            f"class size {report.class_size}, #rad {len(rad)}")
    rep.add("no neighbourhood properly contains another", report.cor2_witness is None, report.cor2_witness)
    off = P & ~np.eye(len(line), dtype=bool)
    rep.add("parallel distinct points are non-distant", not (off & G).any())
    inf = line.infinity.index
    expected = {line.lookup[R.one, b] for b in rad}
    got = set(np.flatnonzero(P[inf]).tolist())
    rep.add("points parallel to R(1,0) are the R(1,b), b in rad R", got == expected)
    local = is_local_ring(R)
    same = report.relation_equal_to_nondistant
    rep.add("parallel equals non-distant iff R is local", same == local,
            f"local={local}, equal={same}, witness={report.witness}")
    if not same:
        p, q = report.witness
        rep.add("witness is non-distant and not parallel", nondistant_matrix(line)[p.index, q.index]
                and not P[p.index, q.index], report.witness)
    return rep


# ---------------------------------------------------------------------------
# transformations


def _total_condition_matrices(alg: ct.KAlgebra) -> np.ndarray:
    R = alg.ring
    U = sorted(R.units)
    rad = sorted(jacobson_radical(R).members)
    grids = np.meshgrid(U, rad, np.arange(R.size), U, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


@_timed
def trafo_suite(desc: str, seed: int | None = None, exhaustive_limit: int = 70_000) -> VerificationReport:
    alg = ct.algebra_of(desc)
    R, line = alg.ring, alg.line
    n = R.size
    rep = VerificationReport("trafo", alg.descriptor)
    seed = sampling_seed() if seed is None else seed
    rng = np.random.default_rng(seed)

    elements = frozenset(R.elements)
    rep.add("image of z -> R(z,1) is the neighbourhood of infinity",
            set(alg.iota_points.tolist()) == set(np.flatnonzero(line.adjacency[line.infinity.index]).tolist()))
    rep.add("z -> R(z,1) is injective", len(set(alg.iota_points.tolist())) == n)
    zero_pt = line.lookup[R.zero, R.one]
    par0 = np.flatnonzero(parallel_matrix(line)[zero_pt])
    rep.add("affine trace of the class of R(0,1) is rad R",
            ct.affine_trace(alg, par0) == jacobson_radical(R).members)
    nd0 = np.flatnonzero(nondistant_matrix(line)[zero_pt])
    rep.add("affine trace of the points non-distant to R(0,1) is R minus R*",
            ct.affine_trace(alg, nd0) == elements - R.units)

    # totality: condition vs defined everywhere
    if n ** 4 <= exhaustive_limit:
        sweep = ct.totality_sweep(alg)
        label = f"all {n ** 4} matrices"
    else:
        groups = [ct.group_B(alg), ct.group_T(alg), ct.group_N(alg)]
        mats = [m.entries for g in groups for m in g.members]
        mats += rng.integers(0, n, size=(RANDOM_MATRICES, 4)).tolist()
        sweep = ct.totality_sweep(alg, np.array(mats))
        label = f"B, T, N and {RANDOM_MATRICES} random matrices (seed {seed})"
    rep.summary = {"matrices": sweep.matrices, "invertible": sweep.invertible, "total": sweep.total,
                   "condition": sweep.condition}
    rep.add(f"invertible and total iff a, d units and b in rad ({label})", sweep.agrees,
            sweep.mismatches[:1])

    total = _total_condition_matrices(alg)
    if len(total) > 3000:
        keep = rng.choice(len(total), 3000, replace=False)
        keep = np.union1d(keep, np.flatnonzero(total[:, 1] != R.zero)[:200])
        total = total[np.sort(keep)]
    bad_fact, bad_bij, bad_formula, affine_b = [], [], [], []
    for a, b, c, d in total.tolist():
        m = Matrix2(R, a, b, c, d)
        f1, f2, f3 = ct.factorization(alg, m)
        if f1 * f2 * f3 != m:
            bad_fact.append(m)
        table = ct.gamma_table(alg, m)
        if sorted(table.tolist()) != list(range(n)):
            bad_bij.append(m)
        if any(ct.gamma_formula(alg, m, z) != table[z] for z in range(n)):
            bad_formula.append(m)
        affine_b.append((b, ct.is_affine_map(alg, table), m))
    rep.add(f"factorization reproduces each total matrix ({len(total)} checked)", not bad_fact, bad_fact[:1])
    rep.add("induced map of each total matrix is a bijection of R", not bad_bij, bad_bij[:1])
    rep.add("induced map equals (zb+d)^-1 (za+c)", not bad_formula, bad_formula[:1])
    nonaffine_b0 = [m for b, aff, m in affine_b if b == R.zero and not aff]
    rep.add("b = 0 gives an affine map", not nonaffine_b0, nonaffine_b0[:1])
    exceptions = [m for b, aff, m in affine_b if b != R.zero and aff]
    if alg.field.size == 2:
        rep.add(f"GF(2): affine maps with b != 0 observed: {len(exceptions)}", True)
    else:
        rep.add("b != 0 gives a non-affine map", not exceptions, exceptions[:1])

    # groups
    B, T, N = ct.group_B(alg), ct.group_T(alg), ct.group_N(alg)
    rep.add("|B| = #rad R and B commutative", len(B) == len(jacobson_radical(R)) and B.is_commutative())
    rep.add("B acts regularly on the parallel class of infinity",
            ct.acts_regularly(alg, B, ct.parallel_class_of_infinity(alg)))
    trans = all((ct.gamma_table(alg, tau) == R.add[np.arange(n), tau.c]).all() for tau in T.members)
    rep.add("T induces exactly the translations z -> z + c", trans and len(T) == n)
    rep.add("N is a commutative group", N.is_closed() and N.is_commutative())
    rep.add("nu beta = beta nu for all nu in N, beta in B",
            all(ct.commutes(alg, nu, beta) for nu in N.members for beta in B.members))
    cls = ct.parallel_class_of_infinity(alg)
    fixed = all((point_permutation(line, nu)[cls] == cls).all() for nu in N.members)
    rep.add("N fixes every point parallel to infinity", fixed)
    rad = sorted(jacobson_radical(R).members)
    law = [(c, b) for c in R.elements for b in rad
           if ct.tau_fixes_geometric(alg, c, b) != ct.tau_fixes_algebraic(alg, c, b)]
    rep.add("R(1,b) fixed by tau_c iff bcb = 0", not law, law[:1])
    poly = [(b, z) for b in rad for z in R.elements
            if ct.beta_polynomial(alg, b, z) != ct.gamma_table(alg, ct.beta_matrix(alg, b))[z]]
    rep.add("polynomial form of the B-maps", not poly, poly[:1])
    rep.add("every total matrix is invertible", all(is_invertible(Matrix2(R, *m)) for m in total[:50].tolist()))
    if R.descriptor == "dual(gf(2))":
        delta = Matrix2(R, "1", "e", "0", "1+e")
        perm = point_permutation(line, delta)
        inf, p1e = line.infinity.index, line.lookup[R.one, R.index("e")]
        others = [i for i in range(len(line)) if i not in (inf, p1e)]
        swap = perm[inf] == p1e and perm[p1e] == inf and all(perm[i] == i for i in others)
        rep.add("delta swaps infinity and R(1,e) and fixes the other four points", swap)
        rep.add("delta' is the identity of R", (ct.gamma_table(alg, delta) == np.arange(n)).all())
    return rep


# ---------------------------------------------------------------------------
# models


@_timed
def model_suite(example: str, field_desc: str, t: int = 1) -> VerificationReport:
    kind = {"dual": "dual", "ternion": "upper2"}[example]
    alg = ct.algebra_of(f"{kind}({field_desc})")
    F = alg.field
    rep = VerificationReport("model", f"{example} over {F.descriptor}, t={F.labels[t]}")
    R = alg.ring
    table = models.beta_table(alg, t)
    if example == "dual":
        coord = models.coordinate_table(alg, lambda p: models.dual_beta(alg, t, p))
        rep.add("coordinate formula equals the induced B-map", (coord == table).all())
        C = models.standard_parabola(alg, t)
        rep.add("image of K is the parabola z2 = t z1^2", C.kind == "parabola" and C.coefficients == (t, 0, 0),
                C.coefficients)
        cmp = models.orbit_comparison(alg, t)
        rep.add("translates of C lie in its N'-orbit", cmp.t_subset_of_n)
        q = F.size
        expect_equal = F.characteristic != 2
        rep.add(f"translates = N'-orbit iff char K != 2 ({cmp.t_orbit} vs {cmp.n_orbit})",
                cmp.equal == expect_equal and cmp.n_orbit == q * q)
        e_line = set(R.mul[alg.scalars, alg.basis[-1]].tolist())
        vertical = [L for L in ct.affine_lines(alg) if R.sub(max(L), min(L)) in e_line]
        rep.add("vertical lines invariant", all(frozenset(table[list(L)].tolist()) == L for L in vertical))
    else:
        tr = models.ternion_classify(alg, t)
        rep.summary.update(tr.counts)
        for name, ok in tr.checks:
            rep.add(name, ok)
    if F.size > 2:
        model = models.model_line_set(alg, t)
        lines = model.point_sets()
        rep.summary.update(model.tag_counts())
        rep.add(f"model lines are the images of all affine lines ({len(lines)})",
                lines == models.image_line_set(alg, t))
        rep.add("two points lie on exactly one model line", models.is_linear_space(lines, R.size))
    return rep


# ---------------------------------------------------------------------------


def _run_item(item):
    kind, args = item
    fn = {"ring": ring_suite, "parallelism": parallelism_suite, "trafo": trafo_suite, "model": model_suite}[kind]
    return fn(*args)


def verify_all(max_size: int = 27, jobs: int = 1) -> list[VerificationReport]:
    items = [("ring", (d,)) for d in catalog(max_size)]
    items += [("parallelism", (d,)) for d in catalog(max_size)]
    items += [("trafo", (d,)) for d in algebra_catalog(max_size)]
    for example, fd in MODEL_CATALOG:
        kind = {"dual": "dual", "ternion": "upper2"}[example]
        if ring_size(f"{kind}({fd})") <= max_size:
            items.append(("model", (example, fd, 1)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_item, items))
    return [_run_item(it) for it in items]
