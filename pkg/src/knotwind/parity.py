"""Crossing parities valued in abelian groups, and the executable move axioms.

A parity assigns each crossing of a diagram an element of a coefficient
group, together with a distinguished *fixed element* ``a`` that governs
crossing changes along the circle factor.  The move axioms checked here:

* A1  surviving crossings keep their value across a move;
* A2  a crossing created or removed by a kink move has value zero;
* A3  the two crossings of a bigon move have equal values;
* A4  the three crossings of a triangle move satisfy
      ``p(v1) - p(v2) + p(v3) = 0`` where v1, v3 sit on the middle strand;
* A5  a crossing change along the circle sends the value ``i`` to
      ``a - i``, i.e. ``i + j = a``.

Built-in parities:

* the label parity: reduced crossing labels in Z modulo the degree, with
  ``a = -1``;
* its further reductions mod n (n must divide the degree);
* the Gaussian parity: interleaving counts mod 2, ``a = 0``;
* the homology-valued parity: the class of the crossing's half-curve in
  H_1 of the ambient space modulo the knot's own class, with ``a`` the
  negative of the fiber circle's class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .abelian import FgAbelianGroup, GroupElement
from .diagram import Diagram, Jump
from .errors import (
    BadModulusError,
    IncompatibleGroupsError,
    NonzeroFixedElementError,
    NotHomologicalError,
    UnknownCrossingError,
    UnknownParityKindError,
)
from .moves import (
    COMPOSITE,
    M4PRIME,
    MoveTrace,
    R1_ADD,
    R1_REMOVE,
    R2_ADD,
    R2_REMOVE,
    R3,
)

LABEL = "label"
GAUSS = "gauss"
HOMOLOGICAL = "homological"
HOMOLOGICAL_S1 = "homological-s1"
HOMOLOGICAL_SG = "homological-sg"
HOMOLOGICAL_SG_ORIENTED = "homological-sg-oriented"

#: kinds accepted by the CLI and the axiom checker (label-mod:<n> also works)
PARITY_KINDS = (
    LABEL,
    "label-mod:<n>",
    GAUSS,
    HOMOLOGICAL,
    HOMOLOGICAL_S1,
    HOMOLOGICAL_SG_ORIENTED,
)


@dataclass(frozen=True)
class ParityAssignment:
    kind: str
    group: FgAbelianGroup
    fixed: GroupElement
    values: Mapping[int, GroupElement]

    def value(self, crossing: int) -> GroupElement:
        if crossing not in self.values:
            raise UnknownCrossingError(f"no crossing {crossing} in this assignment")
        return self.values[crossing]


def _jump_prefix(d: Diagram) -> list[int]:
    pre = [0]
    for sym in d.code:
        pre.append(pre[-1] + (sym.direction if isinstance(sym, Jump) else 0))
    return pre


def _between(pre: list[int], n: int, u: int, o: int) -> int:
    """Sum of prefix weights at positions strictly between u and o, cyclically."""
    if u < o:
        return pre[o] - pre[u + 1]
    return (pre[n] - pre[u + 1]) + pre[o]


def _raw_labels(d: Diagram) -> dict[int, int]:
    pre = _jump_prefix(d)
    n = len(d.code)
    out = {}
    for c in d.crossings():
        over, under = d.positions(c)
        out[c] = _between(pre, n, under, over)
    return out


def label_parity(d: Diagram) -> ParityAssignment:
    """Reduced crossing labels in Z/degree with fixed element -1."""
    group = d.label_group()
    values = {c: group.canonical((raw,)) for c, raw in _raw_labels(d).items()}
    return ParityAssignment(LABEL, group, group.canonical((-1,)), values)


def label_parity_mod(d: Diagram, n: int) -> ParityAssignment:
    """Crossing labels reduced mod n; n must divide the degree."""
    if n < 1:
        raise BadModulusError(f"modulus must be positive, got {n}")
    if d.degree() % n != 0:
        raise BadModulusError(
            f"{n} does not divide the degree {d.degree()}; the reduction is not move-stable"
        )
    group = FgAbelianGroup(1, ((n,),))
    values = {c: group.canonical((raw,)) for c, raw in _raw_labels(d).items()}
    return ParityAssignment(f"label-mod:{n}", group, group.canonical((-1,)), values)


def gaussian_parity(d: Diagram) -> ParityAssignment:
    """Interleaving counts mod 2 with fixed element 0."""
    group = FgAbelianGroup(1, ((2,),))
    spans = {}
    for c in d.crossings():
        over, under = d.positions(c)
        spans[c] = (min(over, under), max(over, under))
    values = {}
    for c, (lo, hi) in spans.items():
        count = 0
        for other, (a, b) in spans.items():
            if other == c:
                continue
            count += (lo < a < hi) != (lo < b < hi)
        values[c] = group.canonical((count,))
    return ParityAssignment(GAUSS, group, group.zero, values)


def homological_parity(d: Diagram) -> ParityAssignment:
    """Half-curve classes in H_1(surface x circle) modulo the knot's class.

    The fixed element is the negative of the fiber circle's class.
    """
    rank = 2 * d.genus + 1
    group = FgAbelianGroup(rank, (d.knot_class(),))
    values = {c: group.canonical(d.half_curve_class(c).vector) for c in d.crossings()}
    fixed = group.canonical((0,) * (rank - 1) + (-1,))
    return ParityAssignment(HOMOLOGICAL, group, fixed, values)


def project_s1(p: ParityAssignment) -> ParityAssignment:
    """Keep only the circle winding of a homology-valued parity.

    The result equals the label parity of the same diagram, element for
    element.
    """
    if p.kind != HOMOLOGICAL:
        raise NotHomologicalError(f"cannot project a {p.kind!r} assignment")
    (relation,) = p.group.relations
    group = FgAbelianGroup(1, ((relation[-1],),))
    values = {c: group.canonical((e.rep[-1],)) for c, e in p.values.items()}
    return ParityAssignment(HOMOLOGICAL_S1, group, group.canonical((p.fixed.rep[-1],)), values)


def project_sg(p: ParityAssignment) -> ParityAssignment:
    """Keep only the surface part of a homology-valued parity; its fixed
    element is zero, so the sign-twisted construction applies."""
    if p.kind != HOMOLOGICAL:
        raise NotHomologicalError(f"cannot project a {p.kind!r} assignment")
    (relation,) = p.group.relations
    group = FgAbelianGroup(len(relation) - 1, (relation[:-1],))
    values = {c: group.canonical(e.rep[:-1]) for c, e in p.values.items()}
    return ParityAssignment(HOMOLOGICAL_SG, group, group.canonical(p.fixed.rep[:-1]), values)


def oriented_from(p: ParityAssignment, d: Diagram) -> ParityAssignment:
    """Twist a zero-fixed-element parity by the writhe signs of the diagram."""
    if not p.fixed.is_zero:
        raise NonzeroFixedElementError(
            "the sign-twisted construction needs a parity with fixed element 0"
        )
    values = {
        c: (v if d.crossing_sign(c) > 0 else -v) for c, v in p.values.items()
    }
    return ParityAssignment(p.kind + "-oriented", p.group, p.fixed, values)


def is_even(d: Diagram, crossing: int) -> bool:
    """True when the reduced crossing label vanishes (the weak-parity split)."""
    return d.crossing_label(crossing).reduced.is_zero


_MOD_RE = re.compile(r"^label-mod:([0-9]+)$")

ParityFn = Callable[[Diagram], ParityAssignment]


def resolve_parity(kind: str) -> ParityFn:
    """Map a parity kind name to its constructor."""
    if kind == LABEL:
        return label_parity
    if kind == GAUSS:
        return gaussian_parity
    if kind == HOMOLOGICAL:
        return homological_parity
    if kind == HOMOLOGICAL_S1:
        return lambda d: project_s1(homological_parity(d))
    if kind == HOMOLOGICAL_SG:
        return lambda d: project_sg(homological_parity(d))
    if kind == HOMOLOGICAL_SG_ORIENTED:
        return lambda d: oriented_from(project_sg(homological_parity(d)), d)
    m = _MOD_RE.match(kind)
    if m:
        n = int(m.group(1))
        return lambda d: label_parity_mod(d, n)
    raise UnknownParityKindError(f"unknown parity kind {kind!r}")


#: kinds whose assignments satisfy the winding axioms A1-A5
WINDING_KINDS_RE = re.compile(r"^(label|gauss|homological|homological-s1|label-mod:[0-9]+)$")


@dataclass
class Counterexample:
    step: int
    axiom: str
    crossings: tuple[int, ...]
    expected: str
    actual: str

    def __str__(self):
        who = ",".join(str(c) for c in self.crossings)
        return (
            f"step {self.step} axiom {self.axiom} crossings [{who}]: "
            f"expected {self.expected}, got {self.actual}"
        )


@dataclass
class AxiomReport:
    parity: str
    passes: dict[str, int] = field(default_factory=dict)
    failures: dict[str, int] = field(default_factory=dict)
    counterexamples: list[Counterexample] = field(default_factory=list)

    def _record(self, ok: bool, step: int, axiom: str, crossings, expected, actual):
        if ok:
            self.passes[axiom] = self.passes.get(axiom, 0) + 1
        else:
            self.failures[axiom] = self.failures.get(axiom, 0) + 1
            self.counterexamples.append(
                Counterexample(step, axiom, tuple(crossings), str(expected), str(actual))
            )

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def check_axioms(trace: MoveTrace, parity: str | ParityFn) -> AxiomReport:
    """Recompute the parity on every diagram of a trace and check A1-A5.

    ``parity`` is a winding parity kind name, or any callable producing an
    assignment per diagram (the callable is invoked once per trace diagram,
    in order).  Each axiom's pass/fail counts and all counterexamples are
    collected; nothing raises on a violation.
    """
    if callable(parity):
        fn = parity
        name = getattr(parity, "__name__", "custom")
    else:
        if not WINDING_KINDS_RE.match(parity):
            raise UnknownParityKindError(
                f"{parity!r} is not a winding parity kind; axioms do not apply"
            )
        fn = resolve_parity(parity)
        name = parity
    assignments = [fn(dd) for dd in trace.diagrams()]
    report = AxiomReport(name)
    for i, step in enumerate(trace.steps):
        src, dst = assignments[i], assignments[i + 1]
        if src.group != dst.group:
            raise IncompatibleGroupsError(
                f"coefficient group changed across step {i}: "
                f"{src.group.describe()} vs {dst.group.describe()}"
            )
        corr = step.correspondence
        kind = step.move.kind
        for v, w in sorted(corr.surviving.items()):
            if v == corr.m4_target:
                continue
            report._record(
                src.values[v] == dst.values[w], i, "A1", (v,), src.values[v], dst.values[w]
            )
        if kind == R1_REMOVE:
            (v,) = corr.destroyed
            report._record(src.values[v].is_zero, i, "A2", (v,), src.group.zero, src.values[v])
        elif kind == R1_ADD:
            (v,) = corr.created
            report._record(dst.values[v].is_zero, i, "A2", (v,), dst.group.zero, dst.values[v])
        elif kind == R2_REMOVE:
            a, b = sorted(corr.destroyed)
            report._record(
                src.values[a] == src.values[b], i, "A3", (a, b), src.values[a], src.values[b]
            )
        elif kind == R2_ADD:
            a, b = sorted(corr.created)
            report._record(
                dst.values[a] == dst.values[b], i, "A3", (a, b), dst.values[a], dst.values[b]
            )
        elif kind == R3:
            v1, v2, v3 = corr.r3_roles
            total = dst.values[v1] - dst.values[v2] + dst.values[v3]
            report._record(total.is_zero, i, "A4", (v1, v2, v3), dst.group.zero, total)
        if kind in (M4PRIME, COMPOSITE) and corr.m4_target is not None:
            c = corr.m4_target
            want = src.fixed - src.values[c]
            report._record(dst.values[c] == want, i, "A5", (c,), want, dst.values[c])
    return report
