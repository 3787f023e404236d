"""Quadratic forms over a number field at the Witt level.

Diagonal forms carry the Witt-group operations; Gram matrices are the input
convenience and are reduced by exact symmetric congruence.  Witt classes are
represented by diagonal forms with syntactic cancellation of <a, -a> pairs
only; no isotropy decision beyond signatures is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FieldMismatchError
from .field import (
    QQ,
    FieldElement,
    NumberField,
    Ordering,
    sign_at,
)


def _as_element(field: NumberField, v) -> FieldElement:
    if isinstance(v, FieldElement):
        if v.field != field:
            raise FieldMismatchError("entry from a different field")
        return v
    return field.element(v)


class QuadraticForm:
    """Diagonal form <d_1, ..., d_k>; the empty list is the zero form."""

    def __init__(self, field: NumberField, entries: Iterable):
        self.field = field
        self.entries: tuple[FieldElement, ...] = tuple(_as_element(field, e) for e in entries)
        if any(e.is_zero() for e in self.entries):
            raise ValueError("diagonal entries must be nonzero")

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuadraticForm) and other.field == self.field
                and other.entries == self.entries)

    def __hash__(self) -> int:
        return hash((self.field, self.entries))

    def __repr__(self) -> str:
        return f"QuadraticForm({list(self.entries)!r})"


class GramQuadraticForm:
    """Symmetric Gram matrix over the field; possibly degenerate."""

    def __init__(self, field: NumberField, rows: Sequence[Sequence]):
        self.field = field
        self.rows: tuple[tuple[FieldElement, ...], ...] = tuple(
            tuple(_as_element(field, v) for v in row) for row in rows
        )
        k = len(self.rows)
        if any(len(row) != k for row in self.rows):
            raise ValueError("Gram matrix must be square")
        for i in range(k):
            for j in range(i):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError(f"Gram matrix not symmetric at ({i}, {j})")

    @property
    def size(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"GramQuadraticForm({self.size}x{self.size})"


@dataclass
class Diagonalization:
    """Result of symmetric congruence reduction: S^t G S = diag(d, ..., 0)."""

    form: QuadraticForm
    radical_dim: int
    transform: tuple[tuple[FieldElement, ...], ...]


def diagonalize(gram: GramQuadraticForm) -> Diagonalization:
    """Symmetric Gaussian elimination by congruence.

    Pivot rule: first nonzero diagonal entry; if the remaining diagonal is
    zero but the block is not, the leading 2x2 hyperbolic block [[0, c],
    [c, 0]] is replaced by diag(c, -c) via the congruence with columns
    (e_i + e_j/2, e_i - e_j/2).  Zero rows are reported as the radical.
    """
    field = gram.field
    k = gram.size
    m = [list(row) for row in gram.rows]
    zero, one = field.zero, field.one
    s = [[one if i == j else zero for j in range(k)] for i in range(k)]

    def col_op(dst: int, src: int, c: FieldElement) -> None:
        # column_dst += c * column_src, mirrored on rows; S tracks columns.
        for r in range(k):
            m[r][dst] = m[r][dst] + c * m[r][src]
        for r in range(k):
            m[dst][r] = m[dst][r] + c * m[src][r]
        for r in range(k):
            s[r][dst] = s[r][dst] + c * s[r][src]

    def col_swap(i: int, j: int) -> None:
        for r in range(k):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        m[i], m[j] = m[j], m[i]
        for r in range(k):
            s[r][i], s[r][j] = s[r][j], s[r][i]

    def col_scale(i: int, c: FieldElement) -> None:
        for r in range(k):
            m[r][i] = m[r][i] * c
        for r in range(k):
            m[i][r] = m[i][r] * c
        for r in range(k):
            s[r][i] = s[r][i] * c

    diag: list[FieldElement] = []
    for p in range(k):
        pivot = next((i for i in range(p, k) if not m[i][i].is_zero()), None)
        if pivot is None:
            off = next(((i, j) for i in range(p, k) for j in range(i + 1, k)
                        if not m[i][j].is_zero()), None)
            if off is None:
                break
            i, j = off
            if i != p:
                col_swap(p, i)
                j = i if j == p else j
            # columns (p, j) <- (c_p + c_j/2, c_p - c_j/2): block becomes
            # diag(c, -c) for the off-diagonal entry c.
            half = field.element(Fraction(1, 2))
            for r in range(k):
                cp, cj = m[r][p], m[r][j]
                m[r][p], m[r][j] = cp + half * cj, cp - half * cj
            mp, mj = m[p], m[j]
            m[p] = [a + half * b for a, b in zip(mp, mj)]
            m[j] = [a - half * b for a, b in zip(mp, mj)]
            for r in range(k):
                cp, cj = s[r][p], s[r][j]
                s[r][p], s[r][j] = cp + half * cj, cp - half * cj
            pivot = p
        if pivot != p:
            col_swap(p, pivot)
        d = m[p][p]
        inv = d.inverse()
        for r in range(p + 1, k):
            if not m[p][r].is_zero():
                col_op(r, p, -(m[p][r] * inv))
        diag.append(m[p][p])

    radical = k - len(diag)
    transform = tuple(tuple(row) for row in s)
    return Diagonalization(QuadraticForm(field, diag), radical, transform)


def signature_q(form: QuadraticForm | GramQuadraticForm, ordering: Ordering) -> int:
    """Sylvester signature at one ordering."""
    if isinstance(form, GramQuadraticForm):
        form = diagonalize(form).form
    if form.field != ordering.field:
        raise FieldMismatchError("form and ordering belong to different fields")
    return sum(sign_at(d, ordering) for d in form.entries)


def total_signature_q(form: QuadraticForm | GramQuadraticForm) -> list[tuple[Ordering, int]]:
    if isinstance(form, GramQuadraticForm):
        form = diagonalize(form).form
    return [(p, signature_q(form, p)) for p in form.field.orderings]


def pfister(field: NumberField, slots: Sequence) -> QuadraticForm:
    """<<b_1, ..., b_t>> = tensor of <1, b_i>: all subset products, 2^t entries."""
    elems = [_as_element(field, b) for b in slots]
    if any(b.is_zero() for b in elems):
        raise ValueError("Pfister slots must be nonzero")
    entries = []
    for mask in range(1 << len(elems)):
        prod = field.one
        for i, b in enumerate(elems):
            if mask >> i & 1:
                prod = prod * b
        entries.append(prod)
    return QuadraticForm(field, entries)


def harrison_set(field: NumberField, slots: Sequence) -> list[Ordering]:
    """Orderings at which every slot is positive; all of X_F for no slots."""
    elems = [_as_element(field, b) for b in slots]
    if any(b.is_zero() for b in elems):
        raise ValueError("Harrison slots must be nonzero")
    return [p for p in field.orderings if all(sign_at(b, p) > 0 for b in elems)]


def torsion_test_q(form: QuadraticForm) -> bool:
    """Local-global: torsion iff the signature vanishes at every ordering."""
    return all(signature_q(form, p) == 0 for p in form.field.orderings)


def witt_cancel(entries: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    """Drop matched <a, -a> pairs (first-match order); a normalization
    convenience, not a Witt-class decision procedure."""
    out = list(entries)
    i = 0
    while i < len(out):
        j = next((j for j in range(i + 1, len(out)) if out[j] == -out[i]), None)
        if j is None:
            i += 1
        else:
            del out[j]
            del out[i]
    return tuple(out)


def witt_sum(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    if f.field != g.field:
        raise FieldMismatchError("forms over different fields")
    return QuadraticForm(f.field, witt_cancel(f.entries + g.entries))


def witt_tensor(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    if f.field != g.field:
        raise FieldMismatchError("forms over different fields")
    prods = [a * b for a in f.entries for b in g.entries]
    return QuadraticForm(f.field, witt_cancel(prods))


def field_trace(e: FieldElement) -> Fraction:
    """Tr_{L/Q}(e): trace of the multiplication-by-e matrix."""
    d = e.field.degree
    t = Fraction(0)
    for j in range(d):
        basis_j = e.field.element([0] * j + [1])
        cs = (e * basis_j).coeffs
        t += cs[j] if j < len(cs) else Fraction(0)
    return t


def transfer(form: QuadraticForm) -> GramQuadraticForm:
    """Scharlau transfer along Tr_{L/Q}: the Gram matrix over Q of
    (x, y) -> Tr(d x y) in the power basis, one block per diagonal entry."""
    field = form.field
    d = field.degree
    k = form.rank
    size = k * d
    zero = Fraction(0)
    rows = [[zero] * size for _ in range(size)]
    for slot, entry in enumerate(form.entries):
        for i in range(d):
            for j in range(i, d):
                basis_i = field.element([0] * i + [1])
                basis_j = field.element([0] * j + [1])
                v = field_trace(entry * basis_i * basis_j)
                rows[slot * d + i][slot * d + j] = v
                rows[slot * d + j][slot * d + i] = v
    return GramQuadraticForm(QQ, [[Fraction(v) for v in row] for row in rows])


def knebusch_identity_holds(form: QuadraticForm) -> bool:
    """Both sides of the trace formula for a form over L, base Q."""
    lhs = signature_q(transfer(form), QQ.orderings[0])
    rhs = sum(signature_q(form, q) for q in form.field.orderings)
    return lhs == rhs
