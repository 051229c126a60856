"""Exact integer linear algebra for finitely generated abelian groups.

Everything here runs on plain Python integers, so there is no overflow:
intermediate entries of a Smith reduction can exceed any fixed word size.
Matrices are lists of row lists.  ``FgAbelianGroup`` presents a quotient
of Z^r by a lattice of relation vectors and gives every coset a canonical
representative, so equality of group elements is equality of tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DimensionMismatchError, GroupMismatchError

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    inner = len(a[0]) if a else 0
    if inner != len(b):
        raise DimensionMismatchError("matrix shapes do not compose")
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


def mat_vec(a: IntMatrix, v: list[int] | tuple[int, ...]) -> list[int]:
    if a and len(a[0]) != len(v):
        raise DimensionMismatchError("matrix and vector shapes do not match")
    return [sum(row[k] * v[k] for k in range(len(v))) for row in a]


def check_matrix(a) -> tuple[int, int]:
    """Validate rectangularity and integrality; return (rows, cols)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    for row in a:
        if len(row) != cols:
            raise DimensionMismatchError("matrix is not rectangular")
        for x in row:
            if not isinstance(x, int):
                raise DimensionMismatchError(f"non-integer entry {x!r}")
    return rows, cols


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n, m = check_matrix(a)
    if n != m:
        raise DimensionMismatchError("determinant of a non-square matrix")
    if n == 0:
        return 1
    w = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if w[k][k] == 0:
            for i in range(k + 1, n):
                if w[i][k]:
                    w[k], w[i] = w[i], w[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) // prev
        prev = w[k][k]
    return sign * w[n - 1][n - 1]


def _snf_tracked(a: IntMatrix):
    """Diagonalize ``a`` with tracked unimodular transforms.

    Returns (u, d, v, uinv) with u @ a @ v == d, the diagonal of d
    non-negative with each entry dividing the next, and uinv @ u == I.
    Pivoting takes the smallest nonzero entry by absolute value, which
    keeps intermediate growth tolerable at this scale.
    """
    rows, cols = check_matrix(a)
    m = [row[:] for row in a]
    u = identity(rows)
    uinv = identity(rows)
    v = identity(cols)

    def swap_rows(i, k):
        m[i], m[k] = m[k], m[i]
        u[i], u[k] = u[k], u[i]
        for r in range(rows):  # inverse of a row swap is the column swap
            uinv[r][i], uinv[r][k] = uinv[r][k], uinv[r][i]

    def add_row(i, k, q):
        # row_i -= q * row_k
        mi, mk = m[i], m[k]
        for j in range(cols):
            mi[j] -= q * mk[j]
        ui, uk = u[i], u[k]
        for j in range(rows):
            ui[j] -= q * uk[j]
        for r in range(rows):  # uinv: col_k += q * col_i
            uinv[r][k] += q * uinv[r][i]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]
        for r in range(rows):
            uinv[r][i] = -uinv[r][i]

    def swap_cols(j, k):
        for r in range(rows):
            m[r][j], m[r][k] = m[r][k], m[r][j]
        for r in range(cols):
            v[r][j], v[r][k] = v[r][k], v[r][j]

    def add_col(j, k, q):
        # col_j -= q * col_k
        for r in range(rows):
            m[r][j] -= q * m[r][k]
        for r in range(cols):
            v[r][j] -= q * v[r][k]

    t = 0
    bound = min(rows, cols)
    while t < bound:
        # pick the smallest nonzero entry of the trailing block as pivot
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = m[i][j]
                if x and (best is None or abs(x) < best):
                    piv, best = (i, j), abs(x)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(piv[0], t)
        if piv[1] != t:
            swap_cols(piv[1], t)

        while True:
            if m[t][t] < 0:
                negate_row(t)
            p = m[t][t]
            # clear the column; a nonzero remainder becomes a smaller pivot
            restart = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // p
                    if q:
                        add_row(i, t, q)
                    if m[i][t]:
                        swap_rows(i, t)
                        restart = True
                        break
            if restart:
                continue
            restart = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // p
                    if q:
                        add_col(j, t, q)
                    if m[t][j]:
                        swap_cols(j, t)
                        restart = True
                        break
            if restart:
                continue
            # pivot divides everything below-right, or we fold the offending
            # row into row t and reduce again
            p = m[t][t]
            viol = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if m[i][j] % p:
                        viol = i
                        break
                if viol is not None:
                    break
            if viol is None:
                break
            add_row(t, viol, -1)
        t += 1
    return u, m, v, uinv


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form of an integer matrix.

    Returns (u, d, v) with ``u @ a @ v == d``, u and v unimodular, and d
    diagonal with non-negative entries d_1 | d_2 | ...
    """
    u, d, v, _ = _snf_tracked(a)
    return u, d, v


@dataclass(frozen=True)
class GroupElement:
    """A coset with its canonical representative; equal cosets have equal reps."""

    group: "FgAbelianGroup"
    rep: tuple[int, ...]

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or self.group != other.group:
            raise GroupMismatchError("elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.canonical([x + y for x, y in zip(self.rep, other.rep)])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.canonical([x - y for x, y in zip(self.rep, other.rep)])

    def __neg__(self) -> "GroupElement":
        return self.group.canonical([-x for x in self.rep])

    def __mul__(self, k: int) -> "GroupElement":
        return self.group.canonical([k * x for x in self.rep])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.group != other.group:
            raise GroupMismatchError("elements belong to different groups")
        return self.rep == other.rep

    def __hash__(self):
        return hash((self.group, self.rep))

    @property
    def is_zero(self) -> bool:
        return not any(self.rep)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.rep) + ")"


class FgAbelianGroup:
    """Z^rank modulo the lattice spanned by the given relation vectors.

    The Smith form of the relation matrix (relations as columns) is
    computed eagerly and cached; it fixes the canonical coset
    representative, so the group is immutable and safe to share.
    """

    __slots__ = ("rank", "relations", "_u", "_uinv", "_v", "_diag", "_d")

    def __init__(self, rank: int, relations: Iterable = ()):
        if not isinstance(rank, int) or rank < 0:
            raise DimensionMismatchError(f"bad rank {rank!r}")
        rels = tuple(tuple(int(x) for x in rel) for rel in relations)
        for rel in rels:
            if len(rel) != rank:
                raise DimensionMismatchError(
                    f"relation of length {len(rel)} in a rank-{rank} group"
                )
        self.rank = rank
        self.relations = rels
        a = [[rel[i] for rel in rels] for i in range(rank)]
        if rels and rank:
            u, d, v, uinv = _snf_tracked(a)
        else:
            u, uinv = identity(rank), identity(rank)
            d, v = a, identity(len(rels))
        self._u, self._uinv, self._v, self._d = u, uinv, v, d
        ncols = len(rels)
        self._diag = tuple(
            d[i][i] if i < ncols else 0 for i in range(rank)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FgAbelianGroup):
            return NotImplemented
        return self.rank == other.rank and self.relations == other.relations

    def __hash__(self):
        return hash((self.rank, self.relations))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """The nontrivial torsion factors d with 1 < d, in divisibility order."""
        return tuple(d for d in self._diag if d > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self._diag if d == 0)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def canonical(self, vector) -> GroupElement:
        """Canonical representative of the coset of ``vector``.

        Transport into the Smith basis, reduce each torsion coordinate into
        [0, d_i), leave free coordinates alone, transport back.
        """
        vec = [int(x) for x in vector]
        if len(vec) != self.rank:
            raise DimensionMismatchError(
                f"vector of length {len(vec)} in a rank-{self.rank} group"
            )
        w = mat_vec(self._u, vec)
        for i, d in enumerate(self._diag):
            if d:
                w[i] %= d
        return GroupElement(self, tuple(mat_vec(self._uinv, w)))

    @property
    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def contains(self, vector) -> bool:
        """Is ``vector`` in the relation lattice (i.e. the coset of zero)?"""
        vec = [int(x) for x in vector]
        if len(vec) != self.rank:
            raise DimensionMismatchError(
                f"vector of length {len(vec)} in a rank-{self.rank} group"
            )
        w = mat_vec(self._u, vec)
        return all((x % d == 0) if d else (x == 0) for x, d in zip(w, self._diag))

    def __repr__(self):
        return f"FgAbelianGroup(rank={self.rank}, {self.describe()})"


def quotient(rank: int, relations) -> FgAbelianGroup:
    """Z^rank modulo the given relation vectors."""
    return FgAbelianGroup(rank, relations)


@dataclass(frozen=True)
class Hom:
    """Group homomorphism fixed by its images on the ambient basis."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    images: tuple[GroupElement, ...]

    def __call__(self, x) -> GroupElement:
        vec = x.rep if isinstance(x, GroupElement) else tuple(int(t) for t in x)
        if len(vec) != self.source.rank:
            raise DimensionMismatchError("argument does not live in the source group")
        acc = [0] * self.target.rank
        for coeff, img in zip(vec, self.images):
            if coeff:
                for k, val in enumerate(img.rep):
                    acc[k] += coeff * val
        return self.target.canonical(acc)


@dataclass(frozen=True)
class InconsistencyWitness:
    """A relation whose image is nonzero: the requested map is not a homomorphism."""

    relation_index: int
    relation: tuple[int, ...]
    image: GroupElement

    def __str__(self):
        return (
            f"relation #{self.relation_index} {self.relation} maps to the "
            f"nonzero element {self.image}"
        )


def solve_hom(source: FgAbelianGroup, target: FgAbelianGroup, images) -> Hom | InconsistencyWitness:
    """Extend generator images to a homomorphism, or exhibit the obstruction.

    ``images`` lists one target element per ambient generator of the source.
    The map descends to the quotient iff every source relation maps to zero;
    the first violating relation is returned otherwise.
    """
    imgs = tuple(images)
    if len(imgs) != source.rank:
        raise DimensionMismatchError(
            f"{len(imgs)} images for a rank-{source.rank} source"
        )
    for img in imgs:
        if not isinstance(img, GroupElement) or img.group != target:
            raise GroupMismatchError("images must be elements of the target group")
    cand = Hom(source, target, imgs)
    for idx, rel in enumerate(source.relations):
        val = cand(rel)
        if not val.is_zero:
            return InconsistencyWitness(idx, rel, val)
    return cand
