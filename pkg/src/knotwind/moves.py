"""The local move calculus on diagrams.

Move kinds:

* ``r1_add`` / ``r1_remove``     kink insertion / deletion
* ``r2_add`` / ``r2_remove``     bigon insertion / deletion (opposite signs)
* ``r3``                         triangle move: swap three adjacent passage pairs
* ``m4prime``                    crossing change along the circle factor: swap
                                 over/under, negate the sign, and wrap a
                                 cancelling jump pair around the formerly-over
                                 passage (``J+`` before, ``J-`` after)
* ``jcancel_add`` / ``jcancel_remove``   insert / delete an adjacent pair of
                                 opposite jumps on one strand
* ``jslide``                     slide a crossing through the cut fiber: the
                                 jumps sitting just before both passages (equal
                                 direction) move to just after them, or back
* ``composite``                  a recorded sequence of the above

Locality: kink loops, bigon sides and triangle sides must carry zero marks
(the move happens in a disc where edges are null-homologous); the jumps of a
cancelling pair or a slide must touch their neighbour across a zero-marked
edge.  Insertions are applicable everywhere: new interior edges are created
unmarked and the host edge's mark is split around the insertion point.

Sites are positions or crossing ids of the diagram the move is applied to.
Insertions accept a ``wrap`` parameter: the inserted block may straddle the
code's starting point (its first ``wrap`` symbols land at the end of the
code).  This never matters for the knot, but it is what makes every removal
exactly invertible as a structural value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .diagram import Diagram, Jump, OVER, Passage, UNDER
from .errors import NotApplicableError, UnknownCrossingError

R1_ADD = "r1_add"
R1_REMOVE = "r1_remove"
R2_ADD = "r2_add"
R2_REMOVE = "r2_remove"
R3 = "r3"
M4PRIME = "m4prime"
JCANCEL_ADD = "jcancel_add"
JCANCEL_REMOVE = "jcancel_remove"
JSLIDE = "jslide"
COMPOSITE = "composite"

REMOVE_KINDS = frozenset({R1_REMOVE, R2_REMOVE, JCANCEL_REMOVE})
ALL_KINDS = frozenset(
    {R1_ADD, R1_REMOVE, R2_ADD, R2_REMOVE, R3, M4PRIME, JCANCEL_ADD, JCANCEL_REMOVE, JSLIDE, COMPOSITE}
)


@dataclass(frozen=True)
class Move:
    kind: str
    site: tuple[int, ...] = ()
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "site", tuple(int(x) for x in self.site))
        object.__setattr__(self, "params", dict(self.params))

    def to_json(self) -> dict:
        return {"kind": self.kind, "site": list(self.site), "params": _jsonable(self.params)}

    @staticmethod
    def from_json(obj: Mapping) -> "Move":
        return Move(str(obj["kind"]), tuple(obj.get("site", ())), dict(obj.get("params", {})))


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class Correspondence:
    """How crossings of the source diagram map to the target diagram.

    Crossing ids are stable under every move, so ``surviving`` is always an
    identity map on the ids that persist.  ``source`` and ``target`` are
    kept so the move can be inverted exactly; they are not serialized.
    """

    surviving: dict[int, int]
    created: frozenset[int] = frozenset()
    destroyed: frozenset[int] = frozenset()
    r3_roles: tuple[int, int, int] | None = None
    m4_target: int | None = None
    source: Diagram | None = None
    target: Diagram | None = None
    subs: tuple = ()

    def check(self):
        src = set(self.source.crossings()) if self.source is not None else None
        tgt = set(self.target.crossings()) if self.target is not None else None
        if src is not None and set(self.surviving) | set(self.destroyed) != src:
            raise NotApplicableError("correspondence does not cover the source crossings")
        if tgt is not None and set(self.surviving.values()) | set(self.created) != tgt:
            raise NotApplicableError("correspondence does not cover the target crossings")


@dataclass
class TraceStep:
    move: Move
    correspondence: Correspondence
    result: Diagram


@dataclass
class MoveTrace:
    """A replayable sequence of moves; every intermediate diagram is retained."""

    start: Diagram
    steps: list[TraceStep] = field(default_factory=list)

    def diagrams(self) -> list[Diagram]:
        return [self.start] + [s.result for s in self.steps]


# -- low-level code surgery -------------------------------------------------


def _zero(d: Diagram) -> tuple[int, ...]:
    return (0,) * (2 * d.genus)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _pairs(d: Diagram) -> list[tuple]:
    z = _zero(d)
    return [(sym, d.marks.get(i, z)) for i, sym in enumerate(d.code)]


def _build(genus: int, pairs: list[tuple]) -> Diagram:
    code = tuple(sym for sym, _ in pairs)
    marks = {i: m for i, (_, m) in enumerate(pairs) if any(m)}
    return Diagram(genus, code, marks)


def _coerce_split(genus: int, mark_before) -> tuple[int, ...] | None:
    if mark_before is None:
        return None
    vec = tuple(int(x) for x in mark_before)
    if len(vec) != 2 * genus:
        raise NotApplicableError("mark_before has the wrong length")
    return vec


def _splice(pairs: list[tuple], edge: int, block: list[tuple], mark_before, wrap: int) -> list[tuple]:
    """Insert ``block`` (symbol, interior-mark pairs) into ``edge`` of a
    nonempty pair list.

    The host mark splits into ``mark_before`` (stays before the block) and
    the remainder (lands after the block's last symbol).  ``wrap`` places
    that many of the block's trailing symbols at the head of the code, so
    the block straddles or follows the code's starting point; it requires
    the host to be the last edge.
    """
    k = len(block)
    if not 0 <= edge < len(pairs):
        raise NotApplicableError(f"edge {edge} out of range")
    if not 0 <= wrap <= k:
        raise NotApplicableError(f"wrap {wrap} out of range for a block of {k} symbols")
    if wrap and edge != len(pairs) - 1:
        raise NotApplicableError("a wrapped insertion must target the last edge")
    hsym, host = pairs[edge]
    before = host if mark_before is None else mark_before
    rest = _vsub(host, before)
    entries = [(sym, tuple(m)) for sym, m in block]
    entries[-1] = (entries[-1][0], _vadd(entries[-1][1], rest))
    if wrap:
        return entries[k - wrap :] + pairs[:edge] + [(hsym, before)] + entries[: k - wrap]
    return pairs[:edge] + [(hsym, before)] + entries + pairs[edge + 1 :]


def _insert(d: Diagram, edge: int, block: list[tuple], mark_before=None, wrap: int = 0) -> Diagram:
    """Insert a block into one edge of a diagram; see ``_splice``.

    Inserting into the empty diagram puts the whole circle mark on the
    block's outer edge (the one following its last symbol in walk order).
    """
    split = _coerce_split(d.genus, mark_before)
    if not d.code:
        if edge != 0:
            raise NotApplicableError(f"edge {edge} out of range")
        k = len(block)
        if not 0 <= wrap <= k:
            raise NotApplicableError(f"wrap {wrap} out of range for a block of {k} symbols")
        entries = [(sym, tuple(m)) for sym, m in block]
        entries[-1] = (entries[-1][0], _vadd(entries[-1][1], d.mark(0)))
        return _build(d.genus, entries[k - wrap :] + entries[: k - wrap] if wrap else entries)
    return _build(d.genus, _splice(_pairs(d), edge, block, split, wrap))


def _delete(d: Diagram, positions: Iterable[int]) -> Diagram:
    """Delete symbols; each deleted edge's mark rolls back onto the nearest
    preceding surviving edge (their union is one strand segment)."""
    pairs = _pairs(d)
    n = len(pairs)
    gone = set(positions)
    kept = [i for i in range(n) if i not in gone]
    if not kept:
        total = _zero(d)
        for _, m in pairs:
            total = _vadd(total, m)
        return Diagram(d.genus, (), {0: total} if any(total) else {})
    keptset = set(kept)
    extra = {i: _zero(d) for i in kept}
    for p in gone:
        q = (p - 1) % n
        while q not in keptset:
            q = (q - 1) % n
        extra[q] = _vadd(extra[q], pairs[p][1])
    return _build(d.genus, [(pairs[i][0], _vadd(pairs[i][1], extra[i])) for i in kept])


def _kept_index(n: int, gone: set[int], position: int) -> int:
    """Index of ``position`` in the post-deletion code."""
    return sum(1 for i in range(position) if i not in gone)


def _positions(d: Diagram, crossing: int) -> tuple[int, int]:
    try:
        return d.positions(crossing)
    except UnknownCrossingError as exc:
        raise NotApplicableError(str(exc)) from None


def _identity_corr(d: Diagram) -> Correspondence:
    return Correspondence({c: c for c in d.crossings()}, source=d, target=d)


def _fresh_ids(d: Diagram, count: int) -> list[int]:
    existing = d.crossings()
    base = max(existing) if existing else 0
    return [base + 1 + i for i in range(count)]


# -- move application --------------------------------------------------------


def _mark_param(d: Diagram, params: Mapping, key: str):
    value = params.get(key)
    return None if value is None else tuple(int(x) for x in value)


def _apply_r1_add(d: Diagram, m: Move):
    (edge,) = _site(m, 1)
    sign = int(m.params.get("sign", 1))
    chir = m.params.get("chirality", "ou")
    if sign not in (1, -1):
        raise NotApplicableError(f"bad sign {sign}")
    if chir not in ("ou", "uo"):
        raise NotApplicableError(f"bad chirality {chir!r}")
    ident = m.params.get("id")
    ident = _fresh_ids(d, 1)[0] if ident is None else int(ident)
    if ident < 1 or ident in d.crossings():
        raise NotApplicableError(f"crossing id {ident} is not fresh")
    z = _zero(d)
    first, second = (OVER, UNDER) if chir == "ou" else (UNDER, OVER)
    block = [(Passage(ident, first, sign), z), (Passage(ident, second, sign), z)]
    target = _insert(d, edge, block, _mark_param(d, m.params, "mark_before"), int(m.params.get("wrap", 0)))
    corr = Correspondence({c: c for c in d.crossings()}, created=frozenset({ident}))
    return target, corr


def _r1_loop_edges(d: Diagram, crossing: int) -> list[int]:
    over, under = _positions(d, crossing)
    n = len(d.code)
    loops = []
    if (over + 1) % n == under:
        loops.append(over)
    if (under + 1) % n == over:
        loops.append(under)
    return sorted(loops)


def _default_loop(d: Diagram, crossing: int) -> int:
    loops = _r1_loop_edges(d, crossing)
    if not loops:
        raise NotApplicableError(f"passages of crossing {crossing} are not adjacent")
    clean = [e for e in loops if not any(d.mark(e))]
    return (clean or loops)[0]


def _apply_r1_remove(d: Diagram, m: Move):
    (crossing,) = _site(m, 1)
    loops = _r1_loop_edges(d, crossing)
    if not loops:
        raise NotApplicableError(f"passages of crossing {crossing} are not adjacent")
    loop = int(m.params.get("loop_edge", _default_loop(d, crossing)))
    if loop not in loops:
        raise NotApplicableError(f"edge {loop} is not a kink loop of crossing {crossing}")
    if any(d.mark(loop)):
        raise NotApplicableError("kink loop edge carries a nonzero mark")
    n = len(d.code)
    target = _delete(d, {loop, (loop + 1) % n})
    corr = Correspondence(
        {c: c for c in d.crossings() if c != crossing}, destroyed=frozenset({crossing})
    )
    return target, corr


def _apply_r2_add(d: Diagram, m: Move):
    over_edge, under_edge = _site(m, 2)
    sign = int(m.params.get("sign", 1))
    order = m.params.get("under_order", "reversed")
    if sign not in (1, -1):
        raise NotApplicableError(f"bad sign {sign}")
    if order not in ("reversed", "parallel"):
        raise NotApplicableError(f"bad under_order {order!r}")
    ids = m.params.get("ids")
    a, b = _fresh_ids(d, 2) if ids is None else (int(ids[0]), int(ids[1]))
    if a == b or a < 1 or b < 1 or a in d.crossings() or b in d.crossings():
        raise NotApplicableError(f"crossing ids {a}, {b} are not fresh")
    z = _zero(d)
    over_block = [(Passage(a, OVER, sign), z), (Passage(b, OVER, -sign), z)]
    unders = [Passage(a, UNDER, sign), Passage(b, UNDER, -sign)]
    if order == "reversed":
        unders.reverse()
    under_block = [(sym, z) for sym in unders]
    under_first = bool(m.params.get("under_first", False))
    created = frozenset({a, b})
    corr = Correspondence({c: c for c in d.crossings()}, created=created)
    if over_edge == under_edge:
        block = under_block + over_block if under_first else over_block + under_block
        split = _mark_param(d, m.params, "under_mark_before" if under_first else "over_mark_before")
        target = _insert(d, over_edge, block, split, int(m.params.get("wrap", 0)))
        return target, corr
    if under_first:
        raise NotApplicableError("under_first only applies when both blocks share an edge")
    over_wrap = int(m.params.get("over_wrap", 0))
    under_wrap = int(m.params.get("under_wrap", 0))
    if over_wrap and under_wrap:
        raise NotApplicableError("at most one block can straddle the starting point")
    over_split = _coerce_split(d.genus, m.params.get("over_mark_before"))
    under_split = _coerce_split(d.genus, m.params.get("under_mark_before"))
    if not 0 <= over_edge < d.num_edges or not 0 <= under_edge < d.num_edges:
        raise NotApplicableError("insertion edge out of range")
    pairs = _pairs(d)
    if over_wrap:
        pairs = _splice(pairs, under_edge, under_block, under_split, 0)
        pairs = _splice(pairs, len(pairs) - 1, over_block, over_split, over_wrap)
    elif under_wrap:
        pairs = _splice(pairs, over_edge, over_block, over_split, 0)
        pairs = _splice(pairs, len(pairs) - 1, under_block, under_split, under_wrap)
    elif over_edge > under_edge:
        pairs = _splice(pairs, over_edge, over_block, over_split, 0)
        pairs = _splice(pairs, under_edge, under_block, under_split, 0)
    else:
        pairs = _splice(pairs, under_edge, under_block, under_split, 0)
        pairs = _splice(pairs, over_edge, over_block, over_split, 0)
    return _build(d.genus, pairs), corr


def _adjacent_pair_start(d: Diagram, p1: int, p2: int) -> int | None:
    """Return the pair start if positions p1, p2 are cyclically adjacent."""
    n = len(d.code)
    if (p1 + 1) % n == p2:
        return p1
    if (p2 + 1) % n == p1:
        return p2
    return None


def _apply_r2_remove(d: Diagram, m: Move):
    a, b = _site(m, 2)
    if a == b:
        raise NotApplicableError("a bigon involves two distinct crossings")
    oa, ua = _positions(d, a)
    ob, ub = _positions(d, b)
    opair = _adjacent_pair_start(d, oa, ob)
    upair = _adjacent_pair_start(d, ua, ub)
    if opair is None:
        raise NotApplicableError("over passages are not adjacent")
    if upair is None:
        raise NotApplicableError("under passages are not adjacent")
    if d.crossing_sign(a) != -d.crossing_sign(b):
        raise NotApplicableError("bigon crossings must have opposite signs")
    if any(d.mark(opair)) or any(d.mark(upair)):
        raise NotApplicableError("bigon side carries a nonzero mark")
    target = _delete(d, {oa, ob, ua, ub})
    corr = Correspondence(
        {c: c for c in d.crossings() if c not in (a, b)}, destroyed=frozenset({a, b})
    )
    return target, corr


def _r3_classify(d: Diagram, starts: tuple[int, int, int]):
    """Check the triangle pattern at three pair starts; return (v1, v2, v3).

    One pair carries two over passages (the top strand), one two under
    passages (the bottom strand), one is mixed (the middle strand).  v2 is
    the crossing between top and bottom; v1 and v3 sit on the middle
    strand, v1 through its under passage and v3 through its over passage.
    """
    n = len(d.code)
    positions = []
    pairs = []
    for p in starts:
        if not 0 <= p < n:
            raise NotApplicableError(f"position {p} out of range")
        q = (p + 1) % n
        s1, s2 = d.code[p], d.code[q]
        if not (isinstance(s1, Passage) and isinstance(s2, Passage)):
            raise NotApplicableError(f"positions {p},{q} do not hold a passage pair")
        if s1.crossing == s2.crossing:
            raise NotApplicableError(f"pair at {p} belongs to a single crossing")
        positions += [p, q]
        pairs.append((p, s1, s2))
    if len(set(positions)) != 6:
        raise NotApplicableError("triangle pairs overlap")
    oo = uu = mixed = None
    for p, s1, s2 in pairs:
        roles = {s1.role, s2.role}
        if roles == {OVER}:
            oo = (p, s1, s2) if oo is None else _dup(p)
        elif roles == {UNDER}:
            uu = (p, s1, s2) if uu is None else _dup(p)
        else:
            mixed = (p, s1, s2) if mixed is None else _dup(p)
    if oo is None or uu is None or mixed is None:
        raise NotApplicableError("triangle needs one over-over, one under-under and one mixed pair")
    oo_ids = {oo[1].crossing, oo[2].crossing}
    uu_ids = {uu[1].crossing, uu[2].crossing}
    mix_under = next(s for s in mixed[1:] if s.role == UNDER).crossing
    mix_over = next(s for s in mixed[1:] if s.role == OVER).crossing
    v1, v3 = mix_under, mix_over
    rest = oo_ids & uu_ids
    if len(rest) != 1 or v1 not in oo_ids or v3 not in uu_ids:
        raise NotApplicableError("pairs do not close up into a triangle")
    v2 = rest.pop()
    if len({v1, v2, v3}) != 3:
        raise NotApplicableError("triangle crossings are not distinct")
    for p, _, _ in pairs:
        if any(d.mark(p)):
            raise NotApplicableError("triangle side carries a nonzero mark")
    return v1, v2, v3


def _dup(p):
    raise NotApplicableError(f"duplicate pair role at position {p}")


def _apply_r3(d: Diagram, m: Move):
    starts = _site(m, 3)
    v1, v2, v3 = _r3_classify(d, starts)
    n = len(d.code)
    pairs = _pairs(d)
    syms = [sym for sym, _ in pairs]
    for p in starts:
        q = (p + 1) % n
        syms[p], syms[q] = syms[q], syms[p]
    target = _build(d.genus, [(syms[i], pairs[i][1]) for i in range(n)])
    corr = Correspondence({c: c for c in d.crossings()}, r3_roles=(v1, v2, v3))
    return target, corr


def _apply_m4prime(d: Diagram, m: Move):
    (crossing,) = _site(m, 1)
    over, under = _positions(d, crossing)
    sign = d.crossing_sign(crossing)
    z = _zero(d)
    newpairs = []
    for i, (sym, mark) in enumerate(_pairs(d)):
        if i == over:
            newpairs.append((Jump(1), z))
            newpairs.append((Passage(crossing, UNDER, -sign), z))
            newpairs.append((Jump(-1), mark))
        elif i == under:
            newpairs.append((Passage(crossing, OVER, -sign), mark))
        else:
            newpairs.append((sym, mark))
    target = _build(d.genus, newpairs)
    corr = Correspondence({c: c for c in d.crossings()}, m4_target=crossing)
    return target, corr


def _apply_jcancel_add(d: Diagram, m: Move):
    (edge,) = _site(m, 1)
    order = m.params.get("order", "+-")
    if order not in ("+-", "-+"):
        raise NotApplicableError(f"bad order {order!r}")
    z = _zero(d)
    first = 1 if order == "+-" else -1
    block = [(Jump(first), z), (Jump(-first), z)]
    target = _insert(d, edge, block, _mark_param(d, m.params, "mark_before"), int(m.params.get("wrap", 0)))
    corr = Correspondence({c: c for c in d.crossings()})
    return target, corr


def _apply_jcancel_remove(d: Diagram, m: Move):
    (pos,) = _site(m, 1)
    n = len(d.code)
    if not 0 <= pos < n:
        raise NotApplicableError(f"position {pos} out of range")
    nxt = (pos + 1) % n
    s1, s2 = d.code[pos], d.code[nxt]
    if nxt == pos or not (isinstance(s1, Jump) and isinstance(s2, Jump)):
        raise NotApplicableError("site does not hold an adjacent jump pair")
    if s1.direction != -s2.direction:
        raise NotApplicableError("adjacent jumps do not have opposite directions")
    if any(d.mark(pos)):
        raise NotApplicableError("edge between the jumps carries a nonzero mark")
    target = _delete(d, {pos, nxt})
    corr = Correspondence({c: c for c in d.crossings()})
    return target, corr


def _jslide_sites(d: Diagram, crossing: int, direction: str):
    """Return (jump-at-over, jump-at-under) positions, or a failure reason."""
    over, under = _positions(d, crossing)
    n = len(d.code)
    if direction == "forward":
        j_o, j_u = (over - 1) % n, (under - 1) % n
        edges = (j_o, j_u)
    elif direction == "backward":
        j_o, j_u = (over + 1) % n, (under + 1) % n
        edges = (over, under)
    else:
        raise NotApplicableError(f"bad direction {direction!r}")
    s_o, s_u = d.code[j_o], d.code[j_u]
    if not (isinstance(s_o, Jump) and isinstance(s_u, Jump)):
        return None, "both passages need an adjacent jump"
    if s_o.direction != s_u.direction:
        return None, "the two jumps must have equal directions"
    if any(d.mark(edges[0])) or any(d.mark(edges[1])):
        return None, "edge between jump and passage carries a nonzero mark"
    return ((j_o, over), (j_u, under)), None


def _apply_jslide(d: Diagram, m: Move):
    (crossing,) = _site(m, 1)
    direction = m.params.get("direction", "forward")
    sites, reason = _jslide_sites(d, crossing, direction)
    if sites is None:
        raise NotApplicableError(reason)
    pairs = _pairs(d)
    syms = [sym for sym, _ in pairs]
    for j, p in sites:
        syms[j], syms[p] = syms[p], syms[j]
    target = _build(d.genus, [(syms[i], pairs[i][1]) for i in range(len(syms))])
    corr = Correspondence({c: c for c in d.crossings()})
    return target, corr


def _compose(c1: Correspondence, c2: Correspondence) -> Correspondence:
    surviving = {a: c2.surviving[b] for a, b in c1.surviving.items() if b in c2.surviving}
    destroyed = set(c1.destroyed) | {a for a, b in c1.surviving.items() if b in c2.destroyed}
    created = set(c2.created) | {c2.surviving[b] for b in c1.created if b in c2.surviving}
    targets = {t for t in (c1.m4_target, c2.m4_target) if t is not None}
    return Correspondence(
        surviving,
        created=frozenset(created),
        destroyed=frozenset(destroyed),
        m4_target=targets.pop() if len(targets) == 1 else None,
    )


def _apply_composite(d: Diagram, m: Move):
    subs = m.params.get("moves", ())
    cur = d
    corr = Correspondence({c: c for c in d.crossings()})
    recorded = []
    for obj in subs:
        sub = obj if isinstance(obj, Move) else Move.from_json(obj)
        cur, c2 = apply(cur, sub)
        recorded.append((sub, c2))
        corr = _compose(corr, c2)
    corr.subs = tuple(recorded)
    return cur, corr


_APPLY = {
    R1_ADD: _apply_r1_add,
    R1_REMOVE: _apply_r1_remove,
    R2_ADD: _apply_r2_add,
    R2_REMOVE: _apply_r2_remove,
    R3: _apply_r3,
    M4PRIME: _apply_m4prime,
    JCANCEL_ADD: _apply_jcancel_add,
    JCANCEL_REMOVE: _apply_jcancel_remove,
    JSLIDE: _apply_jslide,
    COMPOSITE: _apply_composite,
}


def _site(m: Move, arity: int) -> tuple[int, ...]:
    if len(m.site) != arity:
        raise NotApplicableError(f"{m.kind} expects a site of {arity} value(s), got {m.site}")
    return m.site


def apply(d: Diagram, m: Move) -> tuple[Diagram, Correspondence]:
    """Apply a move, returning the rewritten diagram and the correspondence."""
    fn = _APPLY.get(m.kind)
    if fn is None:
        raise NotApplicableError(f"unknown move kind {m.kind!r}")
    target, corr = fn(d, m)
    corr.source = d
    corr.target = target
    corr.check()
    return target, corr


# -- move enumeration ---------------------------------------------------------


def _scan_moves(d: Diagram) -> list[Move]:
    """All applicable non-insertion moves, in a fixed deterministic order."""
    out: list[Move] = []
    n = len(d.code)
    code = d.code
    crossings = d.crossings()
    for c in crossings:
        for loop in _r1_loop_edges(d, c):
            if not any(d.mark(loop)):
                out.append(Move(R1_REMOVE, (c,), {"loop_edge": loop}))
    for p in range(n):
        s1, s2 = code[p], code[(p + 1) % n]
        if (
            isinstance(s1, Passage)
            and isinstance(s2, Passage)
            and s1.role == OVER
            and s2.role == OVER
            and s1.crossing != s2.crossing
        ):
            move = Move(R2_REMOVE, (s1.crossing, s2.crossing))
            try:
                _apply_r2_remove(d, move)
            except NotApplicableError:
                continue
            out.append(move)
    out.extend(_r3_moves(d))
    for c in crossings:
        out.append(Move(M4PRIME, (c,)))
    for p in range(n):
        nxt = (p + 1) % n
        if nxt == p:
            continue
        s1, s2 = code[p], code[nxt]
        if (
            isinstance(s1, Jump)
            and isinstance(s2, Jump)
            and s1.direction == -s2.direction
            and not any(d.mark(p))
        ):
            out.append(Move(JCANCEL_REMOVE, (p,)))
    for c in crossings:
        for direction in ("forward", "backward"):
            sites, _ = _jslide_sites(d, c, direction)
            if sites is not None:
                out.append(Move(JSLIDE, (c,), {"direction": direction}))
    return out


def _r3_moves(d: Diagram) -> list[Move]:
    n = len(d.code)
    by_ids: dict[frozenset, list[int]] = {}
    for p in range(n):
        s1, s2 = d.code[p], d.code[(p + 1) % n]
        if isinstance(s1, Passage) and isinstance(s2, Passage) and s1.crossing != s2.crossing:
            by_ids.setdefault(frozenset({s1.crossing, s2.crossing}), []).append(p)
    idsets = sorted(by_ids, key=lambda s: tuple(sorted(s)))
    out = []
    for i in range(len(idsets)):
        for j in range(i + 1, len(idsets)):
            if not idsets[i] & idsets[j]:
                continue
            for k in range(j + 1, len(idsets)):
                if len(idsets[i] | idsets[j] | idsets[k]) != 3:
                    continue
                if not (idsets[i] & idsets[k] and idsets[j] & idsets[k]):
                    continue
                for p in by_ids[idsets[i]]:
                    for q in by_ids[idsets[j]]:
                        for r in by_ids[idsets[k]]:
                            starts = tuple(sorted((p, q, r)))
                            try:
                                _r3_classify(d, starts)
                            except NotApplicableError:
                                continue
                            out.append(Move(R3, starts))
    return sorted(out, key=lambda mv: mv.site)


def _r1_add_at(d: Diagram, idx: int) -> Move:
    edge, rem = divmod(idx, 4)
    return Move(
        R1_ADD,
        (edge,),
        {"sign": 1 if rem < 2 else -1, "chirality": ("ou", "uo")[rem % 2]},
    )


def _r2_add_at(d: Diagram, idx: int) -> Move:
    pos, rem = divmod(idx, 4)
    over_edge, under_edge = divmod(pos, d.num_edges)
    return Move(
        R2_ADD,
        (over_edge, under_edge),
        {"sign": 1 if rem < 2 else -1, "under_order": ("reversed", "parallel")[rem % 2]},
    )


def _jcancel_add_at(d: Diagram, idx: int) -> Move:
    edge, rem = divmod(idx, 2)
    return Move(JCANCEL_ADD, (edge,), {"order": ("+-", "-+")[rem]})


def list_moves(d: Diagram) -> list[Move]:
    """Every applicable move: all removal/slide sites, and every insertion
    site with its canonical parameter choices."""
    out = _scan_moves(d)
    e = d.num_edges
    out.extend(_r1_add_at(d, i) for i in range(4 * e))
    out.extend(_r2_add_at(d, i) for i in range(4 * e * e))
    out.extend(_jcancel_add_at(d, i) for i in range(2 * e))
    return out


# -- random walks -------------------------------------------------------------


def _sample_move(d: Diagram, rng: random.Random, size_cap: int) -> Move:
    """Uniform choice over ``list_moves(d)`` without materializing the
    insertion blocks; prefers removals once the code exceeds the cap."""
    scanned = _scan_moves(d)
    if len(d.code) > size_cap:
        removals = [m for m in scanned if m.kind in REMOVE_KINDS]
        if removals:
            return removals[rng.randrange(len(removals))]
    e = d.num_edges
    n1, n2, n3 = 4 * e, 4 * e * e, 2 * e
    k = rng.randrange(len(scanned) + n1 + n2 + n3)
    if k < len(scanned):
        return scanned[k]
    k -= len(scanned)
    if k < n1:
        return _r1_add_at(d, k)
    k -= n1
    if k < n2:
        return _r2_add_at(d, k)
    return _jcancel_add_at(d, k - n2)


def random_walk(d: Diagram, steps: int, seed: int, size_cap: int = 40) -> MoveTrace:
    """A deterministic random move sequence of exactly ``steps`` steps."""
    rng = random.Random(seed)
    trace = MoveTrace(d)
    cur = d
    for _ in range(steps):
        move = _sample_move(cur, rng, size_cap)
        cur, corr = apply(cur, move)
        trace.steps.append(TraceStep(move, corr, cur))
    return trace


# -- inversion ----------------------------------------------------------------


def invert(m: Move, corr: Correspondence) -> Move:
    """The move that undoes ``m`` exactly, source and target swapped.

    ``corr`` must come from ``apply``: exact inversion needs the source
    diagram's mark layout, which the correspondence retains.
    """
    if corr.source is None or corr.target is None:
        raise NotApplicableError("correspondence lacks its source/target diagrams")
    src, tgt = corr.source, corr.target
    kind = m.kind
    if kind == R1_ADD:
        (ident,) = corr.created
        wrap = int(m.params.get("wrap", 0))
        if wrap == 1:
            loop = tgt.num_edges - 1
        elif wrap == 2:
            loop = 0
        else:
            loop = m.site[0] + 1 if src.code else 0
        return Move(R1_REMOVE, (ident,), {"loop_edge": loop})
    if kind == R1_REMOVE:
        (ident,) = corr.destroyed
        loop = int(m.params.get("loop_edge", _default_loop(src, ident)))
        return _invert_block_removal(src, R1_ADD, loop, 2, _r1_add_params(src, loop, ident))
    if kind == R2_ADD:
        a, b = sorted(corr.created)
        first = next(
            s.crossing
            for s in tgt.code
            if isinstance(s, Passage) and s.role == OVER and s.crossing in (a, b)
        )
        second = b if first == a else a
        return Move(R2_REMOVE, (first, second))
    if kind == R2_REMOVE:
        return _invert_r2_remove(src, m)
    if kind == R3:
        return Move(R3, m.site)
    if kind == M4PRIME:
        return _invert_m4prime(m.site[0], tgt)
    if kind == JCANCEL_ADD:
        wrap = int(m.params.get("wrap", 0))
        if wrap == 1:
            pos = len(tgt.code) - 1
        elif wrap == 2:
            pos = 0
        else:
            pos = m.site[0] + 1 if src.code else 0
        return Move(JCANCEL_REMOVE, (pos,))
    if kind == JCANCEL_REMOVE:
        pos = m.site[0]
        order = "+-" if src.code[pos].direction > 0 else "-+"
        return _invert_block_removal(src, JCANCEL_ADD, pos, 2, {"order": order})
    if kind == JSLIDE:
        direction = m.params.get("direction", "forward")
        flipped = "backward" if direction == "forward" else "forward"
        return Move(JSLIDE, m.site, {"direction": flipped})
    if kind == COMPOSITE:
        parts = [invert(sm, sc) for sm, sc in reversed(corr.subs)]
        return Move(COMPOSITE, (), {"moves": tuple(p.to_json() for p in parts)})
    raise NotApplicableError(f"unknown move kind {kind!r}")


def _r1_add_params(src: Diagram, loop: int, ident: int) -> dict:
    sym = src.code[loop]
    return {
        "sign": sym.sign,
        "chirality": "ou" if sym.role == OVER else "uo",
        "id": ident,
    }


def _reinsertion_site(n: int, gone: set[int], start: int, length: int) -> tuple[int, int]:
    """Target edge and wrap for re-inserting a deleted cyclic run.

    A run that contains or follows the code's starting point must go back
    with that many trailing symbols at the head of the code.
    """
    kept = sorted(set(range(n)) - gone)
    if not kept:
        return 0, 0
    if start == 0:
        wrap = length
    elif start + length > n:
        wrap = start + length - n
    else:
        wrap = 0
    if wrap:
        return len(kept) - 1, wrap
    return _kept_index(n, gone, (start - 1) % n), 0


def _invert_block_removal(src: Diagram, kind: str, start: int, length: int, params: dict) -> Move:
    """Re-insertion move for a deleted cyclic run starting at ``start``."""
    n = len(src.code)
    gone = {(start + i) % n for i in range(length)}
    params = dict(params)
    params["mark_before"] = src.mark((start - 1) % n)
    edge, wrap = _reinsertion_site(n, gone, start, length)
    if wrap:
        params["wrap"] = wrap
    return Move(kind, (edge,), params)


def _invert_r2_remove(src: Diagram, m: Move) -> Move:
    a, b = m.site
    oa, ua = src.positions(a)
    ob, ub = src.positions(b)
    opair = _adjacent_pair_start(src, oa, ob)
    upair = _adjacent_pair_start(src, ua, ub)
    n = len(src.code)
    gone = {oa, ob, ua, ub}
    kept = sorted(set(range(n)) - gone)
    first_over = src.code[opair]
    first_id = first_over.crossing
    second_id = b if first_id == a else a
    sign = src.crossing_sign(first_id)
    under_syms = (src.code[upair], src.code[(upair + 1) % n])
    order = "reversed" if under_syms[0].crossing == second_id else "parallel"
    params: dict = {"sign": sign, "under_order": order, "ids": (first_id, second_id)}
    contiguous = (opair + 2) % n == upair or (upair + 2) % n == opair or not kept
    if contiguous:
        run = 0 if not kept else (opair if (opair + 2) % n == upair else upair)
        under_first = src.code[run].role == UNDER
        params["under_first"] = under_first
        key = "under_mark_before" if under_first else "over_mark_before"
        params[key] = src.mark((run - 1) % n)
        edge, wrap = _reinsertion_site(n, gone, run, 4)
        if wrap:
            params["wrap"] = wrap
        return Move(R2_ADD, (edge, edge), params)
    params["over_mark_before"] = src.mark((opair - 1) % n)
    params["under_mark_before"] = src.mark((upair - 1) % n)
    over_edge, over_wrap = _reinsertion_site(n, gone, opair, 2)
    under_edge, under_wrap = _reinsertion_site(n, gone, upair, 2)
    if over_wrap:
        params["over_wrap"] = over_wrap
    if under_wrap:
        params["under_wrap"] = under_wrap
    return Move(R2_ADD, (over_edge, under_edge), params)


def _invert_m4prime(crossing: int, tgt: Diagram) -> Move:
    """A crossing change undoes as: change again, slide the crossing through
    the fiber, then cancel the two jump pairs that come together."""
    t2, _ = apply(tgt, Move(M4PRIME, (crossing,)))
    t3, _ = apply(t2, Move(JSLIDE, (crossing,), {"direction": "forward"}))
    over, _ = t3.positions(crossing)
    first = Move(JCANCEL_REMOVE, ((over + 1) % len(t3.code),))
    t4, _ = apply(t3, first)
    _, under = t4.positions(crossing)
    second = Move(JCANCEL_REMOVE, ((under + 1) % len(t4.code),))
    parts = [
        Move(M4PRIME, (crossing,)),
        Move(JSLIDE, (crossing,), {"direction": "forward"}),
        first,
        second,
    ]
    return Move(COMPOSITE, (), {"moves": tuple(p.to_json() for p in parts)})
