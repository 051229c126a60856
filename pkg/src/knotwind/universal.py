"""The universal parity group presented by a recorded move trace.

Every parity must factor through one fixed group: take one generator per
(diagram, crossing) pair of the trace plus a distinguished generator ``1``,
and impose one relation per move event:

* type 1  a surviving crossing keeps its generator;
* type 2  the two crossings of a bigon move are identified;
* type 3  the triangle relation ``g1 - g2 + g3 = 0``;
* type 4  a crossing change along the circle gives ``g' + g - 1 = 0``;
* type 5  a kink crossing's generator vanishes.

The group itself is computed on a collapsed basis: types 1 and 2 are plain
identifications, so they are merged by union-find first and only the
remaining relations go through the Smith reduction.  The quotient is the
same group; the raw relation list is kept and is what the factorization
check walks, so a parity violating an identification is still caught and
named.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .abelian import FgAbelianGroup, GroupElement, Hom, solve_hom
from .errors import IncompatibleGroupsError, MalformedTraceError
from .moves import COMPOSITE, M4PRIME, MoveTrace, R1_ADD, R1_REMOVE, R2_ADD, R2_REMOVE, R3
from .parity import ParityAssignment, resolve_parity

UNIT = 0  # generator index of the distinguished element 1


@dataclass(frozen=True)
class Relation:
    rtype: int
    step: int
    coeffs: tuple[tuple[int, int], ...]  # (generator index, coefficient)

    def describe(self, generators) -> str:
        terms = " ".join(f"{c:+d}*[{_label(generators[g])}]" for g, c in self.coeffs)
        return f"type {self.rtype} relation from step {self.step}: {terms} = 0"


def _label(gen) -> str:
    return "1" if gen == "1" else f"d{gen[0]}:c{gen[1]}"


@dataclass(frozen=True)
class UniversalPresentation:
    generators: tuple  # "1" at index 0, then (diagram index, crossing id)
    relations: tuple[Relation, ...]
    group: FgAbelianGroup
    class_of: tuple[int, ...]  # generator index -> coordinate of ``group``
    classes: Mapping[tuple[int, int], GroupElement]
    one_class: GroupElement


@dataclass(frozen=True)
class InconsistencyWitness:
    relation: Relation
    image: GroupElement
    generators: tuple

    def __str__(self):
        return f"{self.relation.describe(self.generators)}; image {self.image} is nonzero"


def build_universal(trace: MoveTrace) -> UniversalPresentation:
    """Harvest the presentation spanned by a trace and compute its group."""
    diagrams = trace.diagrams()
    generators: list = ["1"]
    index: dict[tuple[int, int], int] = {}
    for di, d in enumerate(diagrams):
        for c in d.crossings():
            index[(di, c)] = len(generators)
            generators.append((di, c))

    relations: list[Relation] = []

    def emit(rtype: int, step: int, coeffs: dict[int, int]):
        relations.append(Relation(rtype, step, tuple(sorted(coeffs.items()))))

    for i, step in enumerate(trace.steps):
        corr = step.correspondence
        kind = step.move.kind
        for v, w in sorted(corr.surviving.items()):
            if v == corr.m4_target:
                continue
            emit(1, i, {index[(i + 1, w)]: 1, index[(i, v)]: -1})
        if kind == R1_REMOVE:
            (v,) = corr.destroyed
            emit(5, i, {index[(i, v)]: 1})
        elif kind == R1_ADD:
            (v,) = corr.created
            emit(5, i, {index[(i + 1, v)]: 1})
        elif kind == R2_REMOVE:
            a, b = sorted(corr.destroyed)
            emit(2, i, {index[(i, a)]: 1, index[(i, b)]: -1})
        elif kind == R2_ADD:
            a, b = sorted(corr.created)
            emit(2, i, {index[(i + 1, a)]: 1, index[(i + 1, b)]: -1})
        elif kind == R3:
            if corr.r3_roles is None:
                raise MalformedTraceError(f"step {i}: triangle move without recorded roles")
            v1, v2, v3 = corr.r3_roles
            emit(
                3,
                i,
                {index[(i + 1, v1)]: 1, index[(i + 1, v2)]: -1, index[(i + 1, v3)]: 1},
            )
        if kind in (M4PRIME, COMPOSITE) and corr.m4_target is not None:
            c = corr.m4_target
            emit(4, i, {index[(i + 1, c)]: 1, index[(i, c)]: 1, UNIT: -1})

    # collapse the pure identifications (types 1 and 2) by union-find
    parent = list(range(len(generators)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rel in relations:
        if rel.rtype in (1, 2):
            (g1, _), (g2, _) = rel.coeffs
            r1, r2 = find(g1), find(g2)
            if r1 != r2:
                parent[max(r1, r2)] = min(r1, r2)

    class_of: list[int] = []
    class_index: dict[int, int] = {}
    for g in range(len(generators)):
        root = find(g)
        if root not in class_index:
            class_index[root] = len(class_index)
        class_of.append(class_index[root])
    n_classes = len(class_index)

    projected = []
    for rel in relations:
        if rel.rtype in (1, 2):
            continue
        vec = [0] * n_classes
        for g, coeff in rel.coeffs:
            vec[class_of[g]] += coeff
        if any(vec):
            projected.append(tuple(vec))
    group = FgAbelianGroup(n_classes, projected)

    def unit_vec(cls: int):
        return tuple(1 if j == cls else 0 for j in range(n_classes))

    classes = {
        gen: group.canonical(unit_vec(class_of[g]))
        for g, gen in enumerate(generators)
        if gen != "1"
    }
    return UniversalPresentation(
        tuple(generators),
        tuple(relations),
        group,
        tuple(class_of),
        classes,
        group.canonical(unit_vec(class_of[UNIT])),
    )


def factor(
    u: UniversalPresentation,
    trace: MoveTrace,
    parity: str | Callable,
) -> Hom | InconsistencyWitness:
    """The unique homomorphism sending each crossing's class to its parity
    value and ``1`` to the fixed element, or the first relation that bars it.

    Every harvested relation is evaluated directly against the parity, so a
    violated identification is reported even though the group was built on
    the collapsed basis.
    """
    fn = resolve_parity(parity) if isinstance(parity, str) else parity
    assignments: list[ParityAssignment] = [fn(d) for d in trace.diagrams()]
    if not assignments:
        raise MalformedTraceError("empty trace")
    target = assignments[0].group
    fixed = assignments[0].fixed
    for i, asg in enumerate(assignments):
        if asg.group != target or asg.fixed != fixed:
            raise IncompatibleGroupsError(
                f"coefficient group or fixed element changed at trace diagram {i}"
            )

    def image_of(g: int) -> GroupElement:
        if g == UNIT:
            return fixed
        di, c = u.generators[g]
        return assignments[di].values[c]

    for rel in u.relations:
        acc = [0] * target.rank
        for g, coeff in rel.coeffs:
            rep = image_of(g).rep
            for k in range(target.rank):
                acc[k] += coeff * rep[k]
        val = target.canonical(acc)
        if not val.is_zero:
            return InconsistencyWitness(rel, val, u.generators)

    class_images: list[GroupElement | None] = [None] * u.group.rank
    for g in range(len(u.generators)):
        cls = u.class_of[g]
        if class_images[cls] is None:
            class_images[cls] = image_of(g)
    hom = solve_hom(u.group, target, class_images)
    if not isinstance(hom, Hom):
        raise AssertionError(f"collapsed relation unexpectedly violated: {hom}")
    return hom


def presentation_report(u: UniversalPresentation) -> dict:
    """A JSON-ready summary: generator table, group shape, per-crossing classes."""
    return {
        "generators": [
            {"index": i, "label": _label(g)} for i, g in enumerate(u.generators)
        ],
        "relation_counts": {
            str(t): sum(1 for r in u.relations if r.rtype == t) for t in (1, 2, 3, 4, 5)
        },
        "ambient_rank": u.group.rank,
        "invariant_factors": list(u.group.invariant_factors),
        "free_rank": u.group.free_rank,
        "group": u.group.describe(),
        "one_class": list(u.one_class.rep),
        "classes": {
            f"d{di}:c{c}": list(e.rep) for (di, c), e in sorted(u.classes.items())
        },
    }
