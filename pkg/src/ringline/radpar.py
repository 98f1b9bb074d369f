"""Radical parallelism on the projective line.

``p || q`` is defined by inclusion of neighbourhoods in the distant graph.  The
same relation is recomputed independently as equality of images on the line
over ``R / rad R``; the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .projline import ProjectiveLine, enumerate_points, projection_indices
from .rings import Ring, jacobson_radical, quotient_ring


def parallel_matrix(line: ProjectiveLine) -> np.ndarray:
    """``P[p, q]`` iff every point distant from p is distant from q."""
    cache = line.ring._cache
    if "parallel" not in cache:
        A = line.adjacency.astype(np.int32)
        escapes = A @ (1 - A).T  # number of x with x D p but not x D q
        P = escapes == 0
        P.setflags(write=False)
        cache["parallel"] = P
    return cache["parallel"]


def radical_projection(line: ProjectiveLine) -> np.ndarray:
    """Index on the line over R/rad R of the image of every point."""
    cache = line.ring._cache
    if "radproj" not in cache:
        _, hom = quotient_ring(line.ring, jacobson_radical(line.ring))
        cache["radproj"] = projection_indices(line, hom)
    return cache["radproj"]


def quotient_parallel_matrix(line: ProjectiveLine) -> np.ndarray:
    proj = radical_projection(line)
    return proj[:, None] == proj[None, :]


def is_parallel_def(line: ProjectiveLine, p, q) -> bool:
    return bool(parallel_matrix(line)[line.index(p), line.index(q)])


def is_parallel_quot(line: ProjectiveLine, p, q) -> bool:
    proj = radical_projection(line)
    return bool(proj[line.index(p)] == proj[line.index(q)])


def is_local_ring(ring: Ring) -> bool:
    """Nonunits closed under addition (equivalently R minus R* equals rad R)."""
    nonunits = np.flatnonzero(~ring.unit_mask)
    return bool((~ring.unit_mask[ring.add[np.ix_(nonunits, nonunits)]]).all())


def is_equivalence(rel: np.ndarray) -> bool:
    r = rel.astype(np.int32)
    reflexive = rel.diagonal().all()
    symmetric = (rel == rel.T).all()
    transitive = not ((r @ r > 0) & ~rel).any()
    return bool(reflexive and symmetric and transitive)


def nondistant_matrix(line: ProjectiveLine) -> np.ndarray:
    # distant is anti-reflexive, so this relation contains the diagonal
    return ~line.adjacency


def relation_witness(line: ProjectiveLine):
    """First pair (p, q) that is non-distant but not radically parallel, else None."""
    diff = nondistant_matrix(line) & ~parallel_matrix(line)
    hits = np.argwhere(diff)
    if len(hits) == 0:
        return None
    p, q = hits[0]
    return line.points[p], line.points[q]


def compare_relations(line: ProjectiveLine) -> bool:
    """True iff radical parallelism coincides with non-distance."""
    return bool((nondistant_matrix(line) == parallel_matrix(line)).all())


def proper_subset_witness(line: ProjectiveLine):
    """A pair whose neighbourhoods are in strict inclusion, or None."""
    subset = parallel_matrix(line)
    strict = subset & ~subset.T
    hits = np.argwhere(strict)
    return None if len(hits) == 0 else (line.points[hits[0][0]], line.points[hits[0][1]])


@dataclass
class ParallelismReport:
    line: ProjectiveLine
    classes: list[tuple[int, ...]]
    class_size: int | None
    radical_size: int
    is_equivalence: bool
    relation_equal_to_nondistant: bool
    is_local: bool
    witness: tuple | None = None
    cor2_witness: tuple | None = None
    agrees_with_quotient: bool = True

    def as_dict(self) -> dict:
        R = self.line.ring
        return {
            "ring": R.descriptor,
            "points": len(self.line),
            "classes": len(self.classes),
            "class_size": self.class_size,
            "radical_size": self.radical_size,
            "equivalence": self.is_equivalence,
            "agrees_with_quotient": self.agrees_with_quotient,
            "no_proper_neighbourhood_inclusion": self.cor2_witness is None,
            "parallel_equals_nondistant": self.relation_equal_to_nondistant,
            "local": self.is_local,
            "witness": None if self.witness is None else [p.label for p in self.witness],
        }


def parallel_classes(line: ProjectiveLine | Ring) -> ParallelismReport:
    if isinstance(line, Ring):
        line = enumerate_points(line)
    P = parallel_matrix(line)
    equiv = is_equivalence(P)
    classes, seen = [], np.zeros(len(line), dtype=bool)
    for p in range(len(line)):
        if not seen[p]:
            members = np.flatnonzero(P[p])
            seen[members] = True
            classes.append(tuple(int(m) for m in members))
    sizes = {len(c) for c in classes}
    return ParallelismReport(
        line=line,
        classes=classes,
        class_size=sizes.pop() if len(sizes) == 1 else None,
        radical_size=len(jacobson_radical(line.ring)),
        is_equivalence=equiv,
        relation_equal_to_nondistant=compare_relations(line),
        is_local=is_local_ring(line.ring),
        witness=relation_witness(line),
        cor2_witness=proper_subset_witness(line),
        agrees_with_quotient=bool((P == quotient_parallel_matrix(line)).all()),
    )
