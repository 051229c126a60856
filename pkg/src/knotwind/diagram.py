"""Plane diagrams of knots in (genus-g surface) x (circle), as marked Gauss codes.

A diagram is a cyclic word of symbols.  A ``Passage`` records one of the two
visits to a classical crossing (over or under, with the writhe sign); a
``Jump`` records a double line, i.e. a transversal pass of the knot through
the cut fiber, with direction +1 when the lift level increases along the
knot orientation.  Virtual crossings are not recorded: detour moves are
identities on this representation.

Edges are indexed by the symbol they follow: edge ``i`` is the strand
segment between symbol ``i`` and symbol ``i+1`` (cyclically).  A code of n
symbols has n edges; the empty code has the single edge 0.  Each edge may
carry a *mark*, an integer vector of length 2g giving its signed
intersection count with a fixed dual basis of curves on the surface.
Absent marks mean the zero vector.  Marks are user-supplied data; whether
they are realizable by an actual embedding is not checked.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .abelian import FgAbelianGroup, GroupElement
from .errors import (
    DiagramSyntaxError,
    MarkError,
    StructureError,
    UnknownCrossingError,
)

OVER = "O"
UNDER = "U"


@dataclass(frozen=True)
class Passage:
    crossing: int
    role: str  # OVER or UNDER
    sign: int  # +1 or -1

    def token(self) -> str:
        return f"{self.role}{self.crossing}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class Jump:
    direction: int  # +1 or -1

    def token(self) -> str:
        return "J+" if self.direction > 0 else "J-"


Symbol = Passage | Jump

_TOKEN_RE = re.compile(r"^(?:([OU])([1-9][0-9]*)([+-])|J([+-]))$")


def parse_symbol(token: str) -> Symbol:
    m = _TOKEN_RE.match(token)
    if m is None:
        raise DiagramSyntaxError(f"bad symbol token {token!r}")
    if m.group(4) is not None:
        return Jump(1 if m.group(4) == "+" else -1)
    role, ident, sign = m.group(1), int(m.group(2)), m.group(3)
    return Passage(ident, role, 1 if sign == "+" else -1)


class CrossingLabel(NamedTuple):
    """A crossing label, both as a plain integer and reduced mod the degree."""

    raw: int
    reduced: GroupElement


@dataclass(frozen=True)
class HalfCurveClass:
    """Homology coordinates of the closed-up half of a crossing.

    ``vector`` has length 2g+1: the surface part first, then the circle
    winding.  The last coordinate always equals the raw crossing label.
    """

    vector: tuple[int, ...]


@dataclass(frozen=True, eq=True)
class Diagram:
    genus: int
    code: tuple[Symbol, ...] = ()
    marks: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise StructureError(f"genus must be a non-negative integer, got {self.genus!r}")
        code = tuple(self.code)
        object.__setattr__(self, "code", code)
        seen: dict[int, list[Passage]] = {}
        for sym in code:
            if isinstance(sym, Passage):
                if sym.role not in (OVER, UNDER):
                    raise StructureError(f"bad role {sym.role!r}")
                if sym.sign not in (1, -1):
                    raise StructureError(f"bad sign {sym.sign!r} at crossing {sym.crossing}")
                if not isinstance(sym.crossing, int) or sym.crossing < 1:
                    raise StructureError(f"crossing id must be a positive integer, got {sym.crossing!r}")
                seen.setdefault(sym.crossing, []).append(sym)
            elif isinstance(sym, Jump):
                if sym.direction not in (1, -1):
                    raise StructureError(f"bad jump direction {sym.direction!r}")
            else:
                raise StructureError(f"not a symbol: {sym!r}")
        for ident, passages in seen.items():
            if len(passages) != 2:
                raise StructureError(
                    f"crossing {ident} appears {len(passages)} time(s), expected exactly 2"
                )
            a, b = passages
            if {a.role, b.role} != {OVER, UNDER}:
                raise StructureError(f"crossing {ident} must have one over and one under passage")
            if a.sign != b.sign:
                raise StructureError(f"crossing {ident} has mismatched signs at its passages")
        width = 2 * self.genus
        n_edges = max(len(code), 1)
        clean: dict[int, tuple[int, ...]] = {}
        for edge, value in self.marks.items():
            if not isinstance(edge, int) or not 0 <= edge < n_edges:
                raise MarkError(f"mark on edge {edge!r}, but edges run 0..{n_edges - 1}")
            try:
                vec = tuple(int(x) for x in value)
            except (TypeError, ValueError):
                raise MarkError(f"mark on edge {edge} is not an integer vector: {value!r}") from None
            if len(vec) != width:
                raise MarkError(
                    f"mark on edge {edge} has length {len(vec)}, expected {width}"
                )
            if any(vec):
                clean[edge] = vec
        object.__setattr__(self, "marks", {e: clean[e] for e in sorted(clean)})

    # -- basic geometry -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return max(len(self.code), 1)

    def mark(self, edge: int) -> tuple[int, ...]:
        return self.marks.get(edge, (0,) * (2 * self.genus))

    def crossings(self) -> tuple[int, ...]:
        return tuple(sorted({s.crossing for s in self.code if isinstance(s, Passage)}))

    def positions(self, crossing: int) -> tuple[int, int]:
        """Return (over position, under position) of a crossing."""
        over = under = None
        for i, sym in enumerate(self.code):
            if isinstance(sym, Passage) and sym.crossing == crossing:
                if sym.role == OVER:
                    over = i
                else:
                    under = i
        if over is None or under is None:
            raise UnknownCrossingError(f"no crossing {crossing} in diagram")
        return over, under

    def crossing_sign(self, crossing: int) -> int:
        over, _ = self.positions(crossing)
        return self.code[over].sign

    # -- degree and labels ------------------------------------------------

    def degree(self) -> int:
        """Net winding of the knot along the circle factor: the sum of jump directions."""
        return sum(s.direction for s in self.code if isinstance(s, Jump))

    def arc_labels(self) -> dict[int, int]:
        """Lift level of every edge, with the base edge pinned to 0.

        The base edge is the edge preceding symbol 0, i.e. the last edge.
        Walking the code in orientation order, the running level changes by
        the direction of every jump crossed; each edge receives the running
        level.  The base edge keeps 0; the wrap-around discrepancy equals
        the degree.
        """
        n = len(self.code)
        if n == 0:
            return {0: 0}
        labels: dict[int, int] = {}
        level = 0
        for i, sym in enumerate(self.code):
            if isinstance(sym, Jump):
                level += sym.direction
            labels[i] = level
        labels[n - 1] = 0
        return labels

    def crossing_label(self, crossing: int) -> CrossingLabel:
        """Label i = b - a of a crossing, raw and reduced mod the degree.

        The raw value is the sum of jump directions met walking the code
        cyclically from just after the under passage to just before the
        over passage.  It does not depend on where the code starts.
        """
        over, under = self.positions(crossing)
        n = len(self.code)
        raw = 0
        i = (under + 1) % n
        while i != over:
            sym = self.code[i]
            if isinstance(sym, Jump):
                raw += sym.direction
            i = (i + 1) % n
        return CrossingLabel(raw, self.label_group().canonical((raw,)))

    def label_group(self) -> FgAbelianGroup:
        """Z modulo the degree; the coefficient group of reduced labels."""
        return FgAbelianGroup(1, ((self.degree(),),))

    # -- homology ---------------------------------------------------------

    def half_curve_class(self, crossing: int) -> HalfCurveClass:
        """Integer homology coordinates of the crossing's closed-up half.

        The surface part sums the marks of every edge traversed from the
        under passage to the over passage; the vertical chord through the
        crossing contributes nothing.  The last coordinate is the raw label.
        """
        over, under = self.positions(crossing)
        n = len(self.code)
        acc = [0] * (2 * self.genus)
        winding = 0
        e = under
        while e != over:
            for k, x in enumerate(self.mark(e)):
                acc[k] += x
            nxt = (e + 1) % n
            if nxt != over:
                sym = self.code[nxt]
                if isinstance(sym, Jump):
                    winding += sym.direction
            e = nxt
        return HalfCurveClass(tuple(acc) + (winding,))

    def knot_class(self) -> tuple[int, ...]:
        """Homology coordinates of the whole knot: total marks, then the degree."""
        acc = [0] * (2 * self.genus)
        for vec in self.marks.values():
            for k, x in enumerate(vec):
                acc[k] += x
        return tuple(acc) + (self.degree(),)


# -- text codec -----------------------------------------------------------


def parse(text: str) -> Diagram:
    """Parse the line-oriented diagram format.

    Grammar: a ``genus <g>`` line, then a ``code <sym> ...`` line, then any
    number of ``mark <edge> <2g ints>`` lines.  ``#`` starts a comment.
    """
    genus: int | None = None
    code: tuple[Symbol, ...] | None = None
    marks: dict[int, tuple[int, ...]] = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if genus is None:
            if fields[0] != "genus" or len(fields) != 2 or not fields[1].isdigit():
                raise DiagramSyntaxError(f"line {lineno}: expected 'genus <g>' first, got {line!r}")
            genus = int(fields[1])
        elif code is None:
            if fields[0] != "code":
                raise DiagramSyntaxError(f"line {lineno}: expected 'code ...', got {line!r}")
            code = tuple(parse_symbol(tok) for tok in fields[1:])
        elif fields[0] == "mark":
            try:
                edge = int(fields[1])
                vec = tuple(int(x) for x in fields[2:])
            except (IndexError, ValueError):
                raise DiagramSyntaxError(f"line {lineno}: bad mark line {line!r}") from None
            if edge in marks:
                raise MarkError(f"line {lineno}: duplicate mark for edge {edge}")
            marks[edge] = vec
        else:
            raise DiagramSyntaxError(f"line {lineno}: unexpected line {line!r}")
    if genus is None:
        raise DiagramSyntaxError("missing 'genus' line")
    if code is None:
        raise DiagramSyntaxError("missing 'code' line")
    return Diagram(genus, code, marks)


def serialize(d: Diagram) -> str:
    """Canonical text of a diagram; ``parse(serialize(d))`` equals ``d``.

    Zero marks are omitted and mark lines are sorted by edge index.
    """
    lines = [f"genus {d.genus}"]
    if d.code:
        lines.append("code " + " ".join(sym.token() for sym in d.code))
    else:
        lines.append("code")
    for edge in sorted(d.marks):
        lines.append(f"mark {edge} " + " ".join(str(x) for x in d.marks[edge]))
    return "\n".join(lines)
