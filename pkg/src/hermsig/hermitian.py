"""Hermitian forms over catalogue algebras and their signatures.

A form of rank k over (M_n(D), -) is stored at entry level: a kn x kn
matrix over the entry ring D, conj-transpose symmetric (skew for the
quat_skew family, whose Grams are skew-hermitian data for the orthogonal
involutions Int(u) o conj).  Signatures are computed through exact trace
forms over F at the Morita-collapsed level and divided by the per-family
constant (validated against independent oracles in the test suite); the
sign ambiguity of the Morita reduction is fixed by a reference form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebras import (
    AlgebraElement,
    AlgebraWithInvolution,
    SplitIsomorphism,
    is_invertible,
)
from .errors import (
    AlgebraMismatchError,
    InvariantError,
    SearchExhaustedError,
    UnsupportedError,
)
from .field import QQ, FieldElement, NumberField, Ordering, sign_at
from .quadforms import (
    GramQuadraticForm,
    QuadraticForm,
    diagonalize,
    field_trace,
    signature_q,
)

#: Trace-form divisor at the collapsed (n = 1) level, per family.
TRACE_DIVISOR = {"split_orth": 1, "unitary": 2, "quat_symp": 4, "quat_skew": 2}


class HermitianForm:
    """Gram matrix over the entry ring; rank k = size / n over the algebra."""

    def __init__(self, algebra: AlgebraWithInvolution, rows: Sequence[Sequence]):
        self.algebra = algebra
        gram = tuple(tuple(algebra.entry(v) for v in row) for row in rows)
        size = len(gram)
        if any(len(row) != size for row in gram):
            raise ValueError("Gram matrix must be square")
        if size % algebra.n != 0:
            raise ValueError("Gram size must be a multiple of the matrix degree n")
        self.gram = gram
        self.size = size
        self._trace_diag_cache: dict = {}
        sign = -1 if algebra.skew_gram else 1
        for r in range(size):
            for c in range(r, size):
                lhs = algebra.entry_conj(gram[c][r])
                rhs = gram[r][c] if sign == 1 else -gram[r][c]
                if lhs != rhs:
                    kind = "skew-hermitian" if sign == -1 else "hermitian"
                    raise ValueError(f"Gram matrix is not {kind} at ({r}, {c})")

    @classmethod
    def diagonal(cls, algebra: AlgebraWithInvolution, values: Iterable) -> "HermitianForm":
        """<a_1, ..., a_k> as a block-diagonal entry Gram."""
        blocks = []
        for v in values:
            if isinstance(v, AlgebraElement):
                if v.algebra != algebra:
                    raise AlgebraMismatchError("diagonal entry from a different algebra")
                blocks.append(v.rows)
            else:
                blocks.append(algebra.scalar_element(v).rows)
        n = algebra.n
        size = n * len(blocks)
        z = algebra.entry_zero
        rows = [[z] * size for _ in range(size)]
        for b, block in enumerate(blocks):
            for r in range(n):
                for c in range(n):
                    rows[b * n + r][b * n + c] = block[r][c]
        return cls(algebra, rows)

    @property
    def rank(self) -> int:
        return self.size // self.algebra.n

    def perp(self, other: "HermitianForm") -> "HermitianForm":
        if other.algebra != self.algebra:
            raise AlgebraMismatchError("forms over different algebras")
        z = self.algebra.entry_zero
        s1, s2 = self.size, other.size
        rows = [[z] * (s1 + s2) for _ in range(s1 + s2)]
        for r in range(s1):
            for c in range(s1):
                rows[r][c] = self.gram[r][c]
        for r in range(s2):
            for c in range(s2):
                rows[s1 + r][s1 + c] = other.gram[r][c]
        return HermitianForm(self.algebra, rows)

    def neg(self) -> "HermitianForm":
        return HermitianForm(self.algebra, [[-v for v in row] for row in self.gram])

    def hyperbolic_double(self) -> "HermitianForm":
        return self.perp(self.neg())

    def __eq__(self, other) -> bool:
        return (isinstance(other, HermitianForm) and other.algebra == self.algebra
                and other.gram == self.gram)

    def __repr__(self) -> str:
        return f"HermitianForm({self.algebra.family}, rank={self.rank})"


def witt_perp_h(h1: HermitianForm, h2: HermitianForm) -> HermitianForm:
    return h1.perp(h2)


def witt_neg_h(h: HermitianForm) -> HermitianForm:
    return h.neg()


def scale_by_quadratic(q: QuadraticForm, h: HermitianForm) -> HermitianForm:
    """q . h: the Gram tensor of a diagonal quadratic form with h."""
    if q.field != h.algebra.field:
        raise AlgebraMismatchError("quadratic factor over a different field")
    alg = h.algebra
    z = alg.entry_zero
    s = h.size
    size = s * q.rank
    rows = [[z] * size for _ in range(size)]
    for b, d in enumerate(q.entries):
        for r in range(s):
            for c in range(s):
                rows[b * s + r][b * s + c] = alg.entry_scale(d, h.gram[r][c])
    return HermitianForm(alg, rows)


def unit_form(algebra: AlgebraWithInvolution) -> HermitianForm:
    """<1>_sigma; for quat_skew the scaled skew Gram <(1/a) i> representing
    the unit form of the modeled involution Int(i) o conj."""
    if algebra.family != "quat_skew":
        return HermitianForm.diagonal(algebra, [algebra.one_element])
    quat = algebra.quat
    w_inv = quat.i.inverse()
    return HermitianForm.diagonal(
        algebra, [algebra.scalar_element(w_inv)])


# ---------------------------------------------------------------------------
# Trace forms and raw signatures.


def _entry_trace_rows(h: HermitianForm, twist=None) -> list[list[FieldElement]]:
    alg = h.algebra
    tau = alg.trace_structure(twist)
    ed = alg.entry_dim
    zero = alg.field.zero
    dim = h.size * ed
    rows = [[zero] * dim for _ in range(dim)]
    for r in range(h.size):
        for t in range(h.size):
            g = h.gram[r][t]
            coords = alg.entry_coords(g)
            if all(c.is_zero() for c in coords):
                continue
            for u in range(ed):
                for v in range(ed):
                    acc = zero
                    for w, gw in enumerate(coords):
                        if not gw.is_zero():
                            tw = tau[u][v][w]
                            if not tw.is_zero():
                                acc = acc + gw * tw
                    rows[r * ed + u][t * ed + v] = acc
    return rows


def _default_twist(alg: AlgebraWithInvolution):
    return alg.quat.i if alg.family == "quat_skew" else None


def trace_form(h: HermitianForm) -> GramQuadraticForm:
    """The quadratic form x -> Trd(sigma(x)^t G x) on A^k over F, of
    dimension rank(h) * dim_F A (n orthogonal copies of the collapsed one).

    For quat_skew the involution convention is Int(i) o conj, so the Gram
    is paired with the fixed twist i.  Signature computations instead use
    the ordering-dependent twist with positive norm (see raw_signature).
    """
    entry_rows = _entry_trace_rows(h, _default_twist(h.algebra))
    n = h.algebra.n
    base = len(entry_rows)
    zero = h.algebra.field.zero
    dim = base * n
    rows = [[zero] * dim for _ in range(dim)]
    for copy in range(n):
        for r in range(base):
            for c in range(base):
                rows[copy * base + r][copy * base + c] = entry_rows[r][c]
    return GramQuadraticForm(h.algebra.field, rows)


def _trace_diag(h: HermitianForm, twist=None) -> list[FieldElement]:
    key = None if twist is None else twist.coords()
    diag = h._trace_diag_cache.get(key)
    if diag is None:
        gram = GramQuadraticForm(h.algebra.field, _entry_trace_rows(h, twist))
        diag = list(diagonalize(gram).form.entries)
        h._trace_diag_cache[key] = diag
    return diag


def raw_signature(h: HermitianForm, ordering: Ordering) -> int:
    """s_P(h): zero at nil orderings; otherwise the collapsed trace-form
    signature divided by the family constant, which must be exact.

    quat_skew uses the positive-norm twist at the ordering; the resulting
    per-ordering Morita choice is normalized by the reference form.
    """
    alg = h.algebra
    if alg.field != ordering.field:
        raise AlgebraMismatchError("ordering belongs to a different field")
    if alg.is_nil(ordering):
        return 0
    twist = alg.skew_twist_at(ordering) if alg.family == "quat_skew" else None
    total = sum(sign_at(d, ordering) for d in _trace_diag(h, twist))
    div = TRACE_DIVISOR[alg.family]
    if total % div != 0:
        raise InvariantError(
            f"trace-form signature {total} not divisible by {div} for "
            f"{alg.family}; the normalization invariant is broken")
    return total // div


def is_nondegenerate(h: HermitianForm) -> bool:
    """Nondegeneracy via the trace form: its radical is trivial exactly
    when the Gram is invertible over the algebra."""
    twist = _default_twist(h.algebra)
    return len(_trace_diag(h, twist)) == h.size * h.algebra.entry_dim


def witt_rank(h: HermitianForm) -> int:
    """Rank of the nondegenerate part (the Witt-class rank)."""
    twist = _default_twist(h.algebra)
    nd = len(_trace_diag(h, twist))
    ed = h.algebra.entry_dim
    if nd % (ed * h.algebra.n) != 0:
        raise InvariantError("degenerate part is not a free-module form; "
                             "width is not an algebra rank")
    return nd // (ed * h.algebra.n)


def rank1_max_signature(algebra: AlgebraWithInvolution, ordering: Ordering) -> int:
    """Largest rank-1 signature at the ordering: 0 at nil orderings, n for
    the hermitian families, 2n for quat_skew (confirmed by basis search)."""
    if algebra.is_nil(ordering):
        return 0
    if algebra.family != "quat_skew":
        return algebra.n
    return _skew_max_signature(algebra, ordering)


def _skew_max_signature(algebra: AlgebraWithInvolution, ordering: Ordering) -> int:
    quat = algebra.quat
    for q in (quat.k, quat.i, quat.j):
        # the rank-1 form <q I_n>; one of the basis pures is definite at P
        cand = HermitianForm.diagonal(algebra, [algebra.scalar_element(q)])
        if abs(raw_signature(cand, ordering)) == 2 * algebra.n:
            return 2 * algebra.n
    raise InvariantError("no definite pure quaternion among i, j, k at a "
                         "non-nil ordering")


# ---------------------------------------------------------------------------
# Reference forms and normalized signatures.


@dataclass
class ReferenceForm:
    """A diagonal form with nonzero raw signature on every non-nil ordering."""

    form: HermitianForm
    certificate: dict[Ordering, int]

    def __post_init__(self):
        if any(v == 0 for v in self.certificate.values()):
            raise InvariantError("reference certificate entries must be nonzero")

    @property
    def algebra(self) -> AlgebraWithInvolution:
        return self.form.algebra


_REFERENCE_CACHE: dict[AlgebraWithInvolution, ReferenceForm] = {}


def _reference_candidates(algebra: AlgebraWithInvolution, bound: int):
    if algebra.family == "quat_skew":
        quat = algebra.quat
        for q in (quat.i, quat.j, quat.k, -quat.i, -quat.j, -quat.k):
            yield algebra.scalar_element(q)
    else:
        yield algebra.one_element
    basis = algebra.sym_basis()
    m = len(basis)
    for height in range(1, bound + 1):
        vals = [0] + [s * k for k in range(1, height + 1) for s in (1, -1)]
        for vec in itertools.product(vals, repeat=m):
            if not vec or max(abs(v) for v in vec) != height:
                continue
            elt = algebra.zero_element
            for c, b in zip(vec, basis):
                if c:
                    elt = elt + b.scale(algebra.field.element(c))
            yield elt


def find_reference_form(algebra: AlgebraWithInvolution, bound: int = 2) -> ReferenceForm:
    """Deterministic search for a reference form: diagonal <s> candidates
    over sym_basis with coordinates up to the bound, first hit wins."""
    nonnil = algebra.nonnil_orderings()
    for cand in _reference_candidates(algebra, bound):
        if cand.is_zero() or not is_invertible(cand):
            continue
        form = HermitianForm.diagonal(algebra, [cand])
        cert = {}
        for p in nonnil:
            s = raw_signature(form, p)
            if s == 0:
                break
            cert[p] = s
        else:
            return ReferenceForm(form, cert)
    raise SearchExhaustedError(
        f"no reference form found within bound {bound} for {algebra!r}")


def reference_form(algebra: AlgebraWithInvolution, bound: int = 2) -> ReferenceForm:
    """Cached reference form for the algebra."""
    ref = _REFERENCE_CACHE.get(algebra)
    if ref is None:
        ref = find_reference_form(algebra, bound)
        _REFERENCE_CACHE[algebra] = ref
    return ref


def signature(h: HermitianForm, ordering: Ordering, reference: ReferenceForm) -> int:
    """sign^eta_P h = sgn(s_P(eta)) * s_P(h); zero at nil orderings."""
    if reference.algebra != h.algebra:
        raise AlgebraMismatchError("reference form over a different algebra")
    if h.algebra.is_nil(ordering):
        return 0
    sign = 1 if reference.certificate[ordering] > 0 else -1
    return sign * raw_signature(h, ordering)


def total_signature_h(h: HermitianForm,
                      reference: ReferenceForm) -> list[tuple[Ordering, int]]:
    return [(p, signature(h, p, reference)) for p in h.algebra.field.orderings]


def torsion_test_h(h: HermitianForm, reference: ReferenceForm) -> bool:
    """Local-global: torsion iff the full signature table vanishes."""
    return all(v == 0 for _, v in total_signature_h(h, reference))


# ---------------------------------------------------------------------------
# Morita collapse and expansion.


def morita_collapse(h: HermitianForm) -> HermitianForm:
    """Reread a k x k Gram over M_n(D) as an nk x nk Gram over D."""
    collapsed = h.algebra.collapsed()
    if collapsed is h.algebra:
        return h
    return HermitianForm(collapsed, h.gram)


def morita_expand(h: HermitianForm, n: int) -> HermitianForm:
    """Inverse reread onto the degree-n member of the same family."""
    alg = h.algebra
    if alg.n != 1:
        raise UnsupportedError("expand starts from a collapsed (n = 1) form")
    if h.size % n != 0:
        raise ValueError(f"rank {h.size} is not a multiple of {n}")
    if alg.family == "split_orth":
        target = AlgebraWithInvolution(alg.field, "split_orth", n)
    elif alg.family == "unitary":
        target = AlgebraWithInvolution(alg.field, "unitary", n, delta=alg.ext.delta)
    else:
        target = AlgebraWithInvolution(alg.field, alg.family, n,
                                       a=alg.quat.a, b=alg.quat.b)
    return HermitianForm(target, h.gram)


def transport_reference(reference: ReferenceForm,
                        target: AlgebraWithInvolution) -> ReferenceForm:
    """zeta(eta) along collapse/expand: same entry Gram, certificate
    recomputed (raw signatures are collapse-invariant)."""
    alg = reference.algebra
    if target.n == 1 and alg.n != 1:
        form = morita_collapse(reference.form)
    elif alg.n == 1 and target.n != 1:
        form = morita_expand(reference.form, target.n)
        if form.algebra != target:
            raise AlgebraMismatchError("expansion target mismatch")
    elif alg == target:
        return reference
    else:
        raise AlgebraMismatchError("transport requires Morita-related members")
    cert = {p: raw_signature(form, p) for p in target.nonnil_orderings()}
    return ReferenceForm(form, cert)


# ---------------------------------------------------------------------------
# Going-up and the trace-formula transfer.


def _lift_field_element(e: FieldElement, ext: NumberField) -> FieldElement:
    return ext.element(e.as_fraction())


def going_up_algebra(algebra: AlgebraWithInvolution, ext: NumberField) -> AlgebraWithInvolution:
    if algebra.field.degree != 1:
        raise UnsupportedError("going-up supports base field Q only")
    if algebra.family == "split_orth":
        return AlgebraWithInvolution(ext, "split_orth", algebra.n)
    if algebra.family == "unitary":
        return AlgebraWithInvolution(
            ext, "unitary", algebra.n,
            delta=_lift_field_element(algebra.ext.delta, ext))
    return AlgebraWithInvolution(
        ext, algebra.family, algebra.n,
        a=_lift_field_element(algebra.quat.a, ext),
        b=_lift_field_element(algebra.quat.b, ext))


def going_up(h: HermitianForm, ext: NumberField) -> HermitianForm:
    """Reinterpret the structure constants and Gram entries over L."""
    target = going_up_algebra(h.algebra, ext)
    rows = []
    for row in h.gram:
        out = []
        for entry in row:
            coords = [_lift_field_element(c, ext)
                      for c in h.algebra.entry_coords(entry)]
            out.append(target.entry_from_coords(coords))
        rows.append(out)
    return HermitianForm(target, rows)


def _descend_algebra(algebra: AlgebraWithInvolution) -> AlgebraWithInvolution:
    def descend(e: FieldElement) -> FieldElement:
        return QQ.element(e.as_fraction())

    if algebra.family == "split_orth":
        return AlgebraWithInvolution(QQ, "split_orth", algebra.n)
    if algebra.family == "unitary":
        return AlgebraWithInvolution(QQ, "unitary", algebra.n,
                                     delta=descend(algebra.ext.delta))
    return AlgebraWithInvolution(QQ, algebra.family, algebra.n,
                                 a=descend(algebra.quat.a),
                                 b=descend(algebra.quat.b))


def scharlau_transfer(h: HermitianForm) -> HermitianForm:
    """Transfer along id_A (x) Tr_{L/Q} in the power basis of L; the
    algebra's structure constants must be rational."""
    ext = h.algebra.field
    try:
        base_alg = _descend_algebra(h.algebra)
    except ValueError as exc:
        raise UnsupportedError("transfer requires rational structure constants") from exc
    d = ext.degree
    powers = [ext.element([0] * i + [1]) for i in range(d)]
    size = h.size * d
    z = base_alg.entry_zero
    rows = [[z] * size for _ in range(size)]
    for s in range(h.size):
        for t in range(h.size):
            g = h.gram[s][t]
            coords = h.algebra.entry_coords(g)
            for alpha in range(d):
                for beta in range(d):
                    scaled = [field_trace(c * powers[alpha] * powers[beta])
                              for c in coords]
                    rows[s * d + alpha][t * d + beta] = base_alg.entry_from_coords(
                        [QQ.element(v) for v in scaled])
    return HermitianForm(base_alg, rows)


@dataclass
class KnebuschReport:
    holds: bool
    transfer_side: int
    sum_side: int


def knebusch_check(h: HermitianForm,
                   base_reference: ReferenceForm | None = None) -> KnebuschReport:
    """Both sides of the trace formula for a form over A (x) L, base Q."""
    ext = h.algebra.field
    base_alg = _descend_algebra(h.algebra)
    eta = base_reference if base_reference is not None else reference_form(base_alg)
    if eta.algebra != base_alg:
        raise AlgebraMismatchError("base reference over the wrong algebra")
    eta_up_form = going_up(eta.form, ext)
    up_alg = eta_up_form.algebra
    cert = {}
    for q in up_alg.nonnil_orderings():
        s = raw_signature(eta_up_form, q)
        if s == 0:
            raise InvariantError("lifted reference form lost its certificate")
        cert[q] = s
    eta_up = ReferenceForm(eta_up_form, cert)
    if h.algebra != up_alg:
        raise AlgebraMismatchError("form is not over the lifted algebra")
    transferred = scharlau_transfer(h)
    p0 = QQ.orderings[0]
    lhs = signature(transferred, p0, eta)
    rhs = sum(signature(h, q, eta_up) for q in ext.orderings)
    return KnebuschReport(lhs == rhs, lhs, rhs)


# ---------------------------------------------------------------------------
# Hermitian congruence diagonalization (division-at-P scope).


def _scalar_part(algebra: AlgebraWithInvolution, entry) -> FieldElement:
    if algebra.family == "split_orth":
        return entry
    coords = algebra.entry_coords(entry)
    if any(not c.is_zero() for c in coords[1:]):
        raise InvariantError("diagonal pivot is not a scalar")
    return coords[0]


def hermitian_diagonalize(h: HermitianForm) -> tuple[list[FieldElement], int]:
    """Diagonalize by hermitian congruence; diagonal pivots are F-scalars
    for the hermitian families.  Returns (pivots, radical dimension)."""
    alg = h.algebra
    if alg.skew_gram:
        raise UnsupportedError("skew Grams have pure-quaternion diagonals; "
                               "use the trace-form route")
    s = h.size
    m = [list(row) for row in h.gram]

    def swap(i, j):
        for r in range(s):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        m[i], m[j] = m[j], m[i]

    diag: list[FieldElement] = []
    for p in range(s):
        pivot = next((i for i in range(p, s)
                      if not alg.entry_is_zero(m[i][i])), None)
        if pivot is None:
            off = next(((i, j) for i in range(p, s) for j in range(i + 1, s)
                        if not alg.entry_is_zero(m[i][j])), None)
            if off is None:
                break
            i, j = off
            lam = next(b for b in alg.entry_basis
                       if not alg.entry_is_zero(
                           m[i][j] * b + alg.entry_conj(m[i][j] * b)))
            # e_i <- e_i + e_j lam
            for r in range(s):
                m[r][i] = m[r][i] + m[r][j] * lam
            lam_c = alg.entry_conj(lam)
            for r in range(s):
                m[i][r] = m[i][r] + lam_c * m[j][r]
            pivot = i
        if pivot != p:
            swap(p, pivot)
        f = _scalar_part(alg, m[p][p])
        inv = f.inverse()
        for r in range(p + 1, s):
            if alg.entry_is_zero(m[p][r]):
                continue
            c = alg.entry_scale(inv, m[p][r])
            c_conj = alg.entry_conj(c)
            for x in range(s):
                m[x][r] = m[x][r] - m[x][p] * c
            for x in range(s):
                m[r][x] = m[r][x] - c_conj * m[p][x]
        diag.append(f)
    return diag, s - len(diag)


@dataclass
class SylvesterDecomposition:
    """n_P^2 x <u_1..u_t> (x) h ~ <a_1..a_r> perp <b_1..b_s> with t = 1,
    u_1 = 1 in the division-at-P scope; value = (r - s) / (n_P t)."""

    weights: tuple[FieldElement, ...]
    positive: list[FieldElement]
    negative: list[FieldElement]
    radical_dim: int

    @property
    def value(self) -> int:
        return len(self.positive) - len(self.negative)


def sylvester_decompose(h: HermitianForm, cone) -> SylvesterDecomposition:
    """Decompose against a positive cone (orientation epsilon over P).

    Scope: n = 1 and A (x) F_P division (n_P = 1), i.e. the split_orth,
    unitary and quat_symp families at a non-nil P.
    """
    alg = h.algebra
    if cone.algebra != alg:
        raise AlgebraMismatchError("cone over a different algebra")
    if alg.n != 1:
        raise UnsupportedError("apply morita_collapse first: decomposition "
                               "is defined at the n = 1 level")
    if alg.family == "quat_skew":
        raise UnsupportedError("non-division scope violation: A (x) F_P is "
                               "a full matrix algebra for quat_skew")
    p = cone.ordering
    if alg.is_nil(p):
        raise ValueError("cone ordering must be non-nil")
    pivots, radical = hermitian_diagonalize(h)
    orient = cone.orientation * (1 if cone.reference.certificate[p] > 0 else -1)
    pos, neg = [], []
    for d in pivots:
        side = orient * sign_at(d, p)
        if side > 0:
            pos.append(d)
        elif side < 0:
            neg.append(d)
        else:
            raise InvariantError("invertible diagonal entry on no side")
    return SylvesterDecomposition((alg.field.one,), pos, neg, radical)


# ---------------------------------------------------------------------------
# Split-isomorphism oracle.


def split_oracle_signature(h: HermitianForm, ordering: Ordering) -> int:
    """Independent signature via the explicit split D = (1, b)_F -> M_2(F).

    quat_symp Grams become alternating bilinear forms (Witt-trivial), so the
    oracle value is 0; quat_skew Grams G map to the symmetric matrix
    (I (x) J) phi(G) whose Sylvester signature is the oracle value.
    """
    alg = h.algebra
    if alg.family not in ("quat_symp", "quat_skew"):
        raise UnsupportedError("oracle applies to the quaternion families")
    phi = SplitIsomorphism(alg.quat)
    if alg.family == "quat_symp":
        return 0
    big = phi.apply_gram(h.gram)
    field = alg.field
    size = 2 * h.size
    rows = [[field.zero] * size for _ in range(size)]
    for r in range(h.size):
        # left-multiply each 2x2 block row by J = [[0, 1], [-1, 0]]
        for c in range(size):
            rows[2 * r][c] = big[2 * r + 1][c]
            rows[2 * r + 1][c] = -big[2 * r][c]
    return signature_q(GramQuadraticForm(field, rows), ordering)


def sylvester_count_oracle(h: HermitianForm, ordering: Ordering) -> int:
    """Independent signature for division-at-P instances: diagonalize over
    the algebra and count entry signs directly."""
    pivots, _ = hermitian_diagonalize(h)
    return sum(sign_at(d, ordering) for d in pivots)
