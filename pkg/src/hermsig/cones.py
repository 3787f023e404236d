"""Positive cones on catalogue algebras and sums-of-hermitian-squares.

Cones are intensional: an ordering P, an orientation, and a membership
procedure; they are never materialized.  Membership reduces to exact
positive-semidefiniteness of the trace carrier of the rank-1 form <m>,
which for the hermitian families is literally the diagonal sign rule of
the congruence reduction, and for quat_skew covers the split-at-P cases
where algebra-level pivoting can fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebras import AlgebraElement, AlgebraWithInvolution, is_invertible
from .errors import AlgebraMismatchError, SearchExhaustedError
from .field import FieldElement, Ordering, four_square_decomposition, sign_at
from .hermitian import (
    HermitianForm,
    ReferenceForm,
    _trace_diag,
    rank1_max_signature,
    raw_signature,
    reference_form,
    signature,
    unit_form,
)
from .quadforms import GramQuadraticForm, diagonalize, harrison_set


class PositiveCone:
    """A maximal cone: base ordering, orientation, reference for the sign."""

    def __init__(self, algebra: AlgebraWithInvolution, ordering: Ordering,
                 orientation: int, reference: ReferenceForm | None = None):
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if algebra.is_nil(ordering):
            raise ValueError("positive cones exist over non-nil orderings only")
        self.algebra = algebra
        self.ordering = ordering
        self.orientation = orientation
        self.reference = reference if reference is not None else reference_form(algebra)
        if self.reference.algebra != algebra:
            raise AlgebraMismatchError("reference form over a different algebra")

    def _oriented_sign(self) -> int:
        cert = self.reference.certificate[self.ordering]
        return self.orientation * (1 if cert > 0 else -1)

    def contains(self, element: AlgebraElement) -> bool:
        """Membership by congruence reduction of <element>: every diagonal
        value of the trace carrier must lie on the oriented side (zero
        pivots impose no constraint; 0 is always a member)."""
        alg = self.algebra
        if element.algebra != alg:
            raise AlgebraMismatchError("element of a different algebra")
        if not alg.is_symmetric_element(element):
            raise ValueError("cone membership is defined for symmetric elements")
        form = HermitianForm(alg, element.rows)
        twist = alg.skew_twist_at(self.ordering) if alg.family == "quat_skew" else None
        want = self._oriented_sign()
        return all(want * sign_at(d, self.ordering) >= 0
                   for d in _trace_diag(form, twist))

    def sample_member(self, rng, terms: int = 2, height: int = 2) -> AlgebraElement:
        """A random member: sum of weighted sandwiches of the oriented
        maximal generator (axioms (P2)+(P3) closure applied to it)."""
        alg = self.algebra
        if not hasattr(self, "_max_gen"):
            self._max_gen = maximal_generator(self)
        total = alg.zero_element
        for _ in range(rng.randint(1, terms)):
            x = _random_element(alg, rng, height)
            while x.is_zero():
                x = _random_element(alg, rng, height)
            u = _random_positive_scalar(alg, self.ordering, rng, height)
            total = total + (x.conj_transpose() * self._max_gen * x).scale(u)
        return total

    def id_pair(self) -> tuple[int, int]:
        return (self.ordering.index, self.orientation)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PositiveCone) and other.algebra == self.algebra
                and other.ordering == self.ordering
                and other.orientation == self.orientation)

    def __hash__(self) -> int:
        return hash((self.algebra, self.ordering, self.orientation))

    def __repr__(self) -> str:
        sign = "+" if self.orientation > 0 else "-"
        return f"PositiveCone(P{self.ordering.index}, {sign})"


def _random_element(alg: AlgebraWithInvolution, rng, height: int) -> AlgebraElement:
    ed = alg.entry_dim
    rows = []
    for _ in range(alg.n):
        row = []
        for _ in range(alg.n):
            coords = [rng.randint(-height, height) for _ in range(ed)]
            row.append(alg.entry(coords if ed > 1 else coords[0]))
        rows.append(row)
    return AlgebraElement(alg, rows)


def _random_positive_scalar(alg: AlgebraWithInvolution, ordering: Ordering,
                            rng, height: int) -> FieldElement:
    fld = alg.field
    while True:
        e = fld.element([rng.randint(-height, height) for _ in range(fld.degree)])
        if not e.is_zero() and sign_at(e, ordering) > 0:
            return e


def cone_membership(element: AlgebraElement, cone: PositiveCone) -> bool:
    return cone.contains(element)


def maximal_generator(cone: PositiveCone) -> AlgebraElement:
    """An invertible element of the cone with maximal rank-1 signature."""
    alg = cone.algebra
    p = cone.ordering
    want = cone._oriented_sign()
    if alg.family != "quat_skew":
        c = alg.field.element(want)
        return alg.scalar_element(c)
    quat = alg.quat
    for q in (quat.k, quat.i, quat.j, -quat.k, -quat.i, -quat.j):
        cand = alg.scalar_element(q)
        form = HermitianForm(alg, cand.rows)
        if raw_signature(form, p) == want * 2 * alg.n:
            return cand
    raise SearchExhaustedError("no definite pure generator found")


def eta_maximal(element: AlgebraElement, ordering: Ordering,
                reference: ReferenceForm) -> bool:
    """Maximal rank-1 signature at the ordering, with positive sign; at a
    nil ordering every invertible symmetric element is vacuously maximal."""
    alg = element.algebra
    if not alg.is_symmetric_element(element):
        raise ValueError("eta-maximality is defined for symmetric elements")
    if not is_invertible(element):
        raise ValueError("eta-maximality is defined for invertible elements")
    form = HermitianForm(alg, element.rows)
    return signature(form, ordering, reference) == rank1_max_signature(alg, ordering)


def enumerate_positive_cones(algebra: AlgebraWithInvolution,
                             reference: ReferenceForm | None = None) -> list[PositiveCone]:
    """Two cones per non-nil ordering; empty iff the algebra is not
    formally real."""
    ref = reference if reference is not None else reference_form(algebra)
    cones = []
    for p in algebra.nonnil_orderings():
        for eps in (1, -1):
            cones.append(PositiveCone(algebra, p, eps, ref))
    return cones


def formally_real(algebra: AlgebraWithInvolution) -> bool:
    return bool(algebra.nonnil_orderings())


def strongly_anisotropic_flag(h: HermitianForm, reference: ReferenceForm) -> bool:
    """Sufficient criterion for strong anisotropy: the signature attains
    rank times the maximal rank-1 value at some ordering (the form is
    definite there, so no multiple has a nontrivial zero).  False is
    inconclusive, not a refutation."""
    alg = h.algebra
    for p in alg.nonnil_orderings():
        top = rank1_max_signature(alg, p) * h.rank
        if top and abs(signature(h, p, reference)) == top:
            return True
    return False


@dataclass
class PositivityReport:
    x_sigma: list[Ordering]
    x_tilde: list[Ordering]
    ps_prime_holds: bool
    ps_sufficient: bool


def positivity_sets(algebra: AlgebraWithInvolution) -> PositivityReport:
    """X_sigma by the PSD test of the unit trace form at each ordering;
    (PS') holds iff X_sigma equals the non-nil set, which is also the
    sufficient condition for (PS)."""
    unit = unit_form(algebra)
    twist = algebra.quat.i if algebra.family == "quat_skew" else None
    diag = _trace_diag(unit, twist)
    x_sigma = [p for p in algebra.field.orderings
               if all(sign_at(d, p) >= 0 for d in diag)]
    x_tilde = algebra.nonnil_orderings()
    same = set(x_sigma) == set(x_tilde)
    return PositivityReport(x_sigma, x_tilde, same, same)


# ---------------------------------------------------------------------------
# Prepositive-cone axiom sampling.


class SymmetricSetCandidate:
    """The whole of Sym(A, sigma); fails properness."""

    def __init__(self, algebra: AlgebraWithInvolution):
        self.algebra = algebra
        self._basis = algebra.sym_basis()

    def contains(self, element: AlgebraElement) -> bool:
        return self.algebra.is_symmetric_element(element)

    def sample_member(self, rng, **_) -> AlgebraElement:
        total = self.algebra.zero_element
        for b in self._basis:
            c = rng.randint(-2, 2)
            if c:
                total = total + b.scale(self.algebra.field.element(c))
        return total


class UnionCandidate:
    """P union -P; fails additive closure on mixed-signature witnesses."""

    def __init__(self, cone: PositiveCone):
        self.cone = cone
        self.algebra = cone.algebra
        self._flip = -1

    def contains(self, element: AlgebraElement) -> bool:
        return self.cone.contains(element) or self.cone.contains(-element)

    def sample_member(self, rng, **kw) -> AlgebraElement:
        self._flip = -self._flip
        m = self.cone.sample_member(rng, **kw)
        return m if self._flip > 0 else -m


@dataclass
class AxiomReport:
    passed: bool
    failed_axiom: str | None = None
    witness: str | None = None


def prepositive_axiom_check(candidate, ordering: Ordering, rng,
                            trials: int = 40) -> AxiomReport:
    """Sampled check of the prepositive-cone axioms.

    (P1) nonempty (0 belongs), (P2) closed under addition, (P3) closed
    under conj(x)^t . m . x, (P5) proper, (P4) the weight stabilizer is
    exactly the base ordering.  Properness is checked before the
    stabilizer; the first counterexample is reported.
    """
    alg = candidate.algebra
    if not candidate.contains(alg.zero_element):
        return AxiomReport(False, "P1", "0 is not a member")
    members = [candidate.sample_member(rng) for _ in range(max(4, trials // 4))]
    for m1, m2 in itertools.islice(itertools.product(members, repeat=2), trials):
        if not candidate.contains(m1 + m2):
            return AxiomReport(False, "P2", "sum of two members escapes the set")
    for m in members[: max(2, trials // 8)]:
        for _ in range(4):
            x = _random_element(alg, rng, 2)
            if not candidate.contains(x.conj_transpose() * m * x):
                return AxiomReport(False, "P3", "sandwich of a member escapes the set")
    for m in members:
        if not m.is_zero() and candidate.contains(-m):
            return AxiomReport(False, "P5", "nonzero element in both the set and its negative")
    for _ in range(trials):
        u = _random_nonzero_scalar(alg, rng)
        stays = all(candidate.contains(m.scale(u)) for m in members)
        positive = sign_at(u, ordering) > 0
        if stays != positive:
            return AxiomReport(False, "P4",
                               "weight stabilizer differs from the base ordering")
    return AxiomReport(True)


def _random_nonzero_scalar(alg: AlgebraWithInvolution, rng) -> FieldElement:
    fld = alg.field
    while True:
        e = fld.element([rng.randint(-3, 3) for _ in range(fld.degree)])
        if not e.is_zero():
            return e


# ---------------------------------------------------------------------------
# Sums-of-hermitian-squares certificates.


@dataclass
class CertTerm:
    """weight = prod of the chosen Pfister slots times a square; the
    generator index points into the diagonal of copies x <<b_1..b_t>> <a>."""

    weight_subset: tuple[int, ...]
    weight_root: FieldElement
    vector: AlgebraElement
    generator_index: int


@dataclass
class SquareCertificate:
    terms: list[CertTerm]


@dataclass
class Refutation:
    ordering: Ordering
    witness: FieldElement


@dataclass
class SosSearchResult:
    status: str  # "certificate" | "refuted" | "unknown"
    certificate: SquareCertificate | None = None
    refutation: Refutation | None = None


def _subset_product(alg: AlgebraWithInvolution, slots: Sequence[FieldElement],
                    subset: Iterable[int]) -> FieldElement:
    prod = alg.field.one
    for i in subset:
        prod = prod * slots[i]
    return prod


def verify_certificate(u: AlgebraElement, a: AlgebraElement,
                       slots: Sequence[FieldElement], copies: int,
                       cert: SquareCertificate) -> bool:
    """Exact re-evaluation: sum of w_i sigma(x_i)^t g_i x_i must equal u,
    with g_i the designated diagonal generator of copies x <<b>> <a>."""
    alg = u.algebra
    if a.algebra != alg:
        raise AlgebraMismatchError("generator over a different algebra")
    t = len(slots)
    width = copies * (1 << t)
    seen = set()
    total = alg.zero_element
    for term in cert.terms:
        idx = term.generator_index
        if not 0 <= idx < width:
            raise ValueError(f"generator index {idx} out of range for "
                             f"{copies} copies of a {1 << t}-slot Pfister block")
        if idx in seen:
            raise ValueError("each generator slot may be used once")
        seen.add(idx)
        if any(not 0 <= i < t for i in term.weight_subset):
            raise ValueError("weight subset indexes an absent Pfister slot")
        if term.weight_root.is_zero():
            raise ValueError("weight roots must be nonzero")
        if term.vector.algebra != alg:
            raise AlgebraMismatchError("certificate vector over a different algebra")
        weight = _subset_product(alg, slots, term.weight_subset) \
            * term.weight_root * term.weight_root
        pf = 1 << t
        mask = idx % pf
        gen_scalar = _subset_product(alg, slots,
                                     [i for i in range(t) if mask >> i & 1])
        x = term.vector
        piece = (x.conj_transpose() * a * x).scale(weight * gen_scalar)
        total = total + piece
    return total == u


def _invert_matrix(field, rows):
    k = len(rows)
    m = [list(r) + [field.one if i == j else field.zero for j in range(k)]
         for i, r in enumerate(rows)]
    for c in range(k):
        piv = next(r for r in range(c, k) if not m[r][c].is_zero())
        m[c], m[piv] = m[piv], m[c]
        inv = m[c][c].inverse()
        m[c] = [v * inv for v in m[c]]
        for r in range(k):
            if r != c and not m[r][c].is_zero():
                f = m[r][c]
                m[r] = [v - f * w for v, w in zip(m[r], m[c])]
    return [row[k:] for row in m]


def _split_orth_constructive(u: AlgebraElement) -> SquareCertificate:
    """u PSD over (M_n(Q), t): u = L^t D L gives u as a sum of at most 4n
    rank-1 squares via the four-square decomposition of each pivot."""
    alg = u.algebra
    field = alg.field
    gram = GramQuadraticForm(field, [list(r) for r in u.rows])
    dec = diagonalize(gram)
    s_inv = _invert_matrix(field, dec.transform)
    terms = []
    for p, d in enumerate(dec.form.entries):
        dv = d.as_fraction()
        row = s_inv[p]
        for c in four_square_decomposition(dv):
            if c == 0:
                continue
            vec_rows = [[field.element(c) * row[j] for j in range(alg.n)]]
            vec_rows += [[field.zero] * alg.n for _ in range(alg.n - 1)]
            terms.append(CertTerm((), field.one,
                                  AlgebraElement(alg, vec_rows), len(terms)))
    return SquareCertificate(terms)


def _search_pool(alg: AlgebraWithInvolution, slots, height: int):
    """Deterministic term pool for the bounded search: canonical vectors x
    (first nonzero coordinate positive) by height, crossed with Pfister
    subsets for the weight and the generator slot."""
    ed = alg.entry_dim
    t = len(slots)
    vectors = []
    vals = list(range(-height, height + 1))
    for coords in itertools.product(vals, repeat=ed):
        if all(c == 0 for c in coords):
            continue
        lead = next(c for c in coords if c != 0)
        if lead < 0:
            continue
        if max(abs(c) for c in coords) > height:
            continue
        vectors.append(coords)
    vectors.sort(key=lambda cs: (max(abs(c) for c in cs), cs))
    subsets = [tuple(i for i in range(t) if mask >> i & 1) for mask in range(1 << t)]
    pool = []
    for coords in vectors:
        x = alg.element([[coords if ed > 1 else coords[0]]])
        for wsub in subsets:
            for gmask in range(1 << t):
                pool.append((coords, wsub, gmask, x))
    return pool


def find_sos_certificate(u: AlgebraElement, a: AlgebraElement | None = None,
                         slots: Sequence = (), *, height: int = 3,
                         max_terms: int = 6) -> SosSearchResult:
    """Certificate that u is a weighted sum of hermitian squares of the
    generator form, a refutation ordering, or unknown at exhaustion.

    Constructive for split_orth over Q with a = 1 (congruence reduction
    plus four squares, at most 4n vectors); bounded deterministic search
    otherwise (n = 1 members), returning the first certificate at minimal
    height.
    """
    alg = u.algebra
    fld = alg.field
    if a is None:
        a = maximal_generator(PositiveCone(alg, alg.nonnil_orderings()[0], 1)) \
            if alg.family == "quat_skew" and alg.nonnil_orderings() else alg.one_element
    if not alg.is_symmetric_element(u):
        raise ValueError("the target must be a symmetric element")
    if not alg.is_symmetric_element(a) or not is_invertible(a):
        raise ValueError("the generator a must be symmetric and invertible")
    slot_elems = [e if isinstance(e, FieldElement) else fld.element(e) for e in slots]
    y_set = harrison_set(fld, slot_elems)
    eta = reference_form(alg)
    a_form = HermitianForm(alg, a.rows)
    for p in y_set:
        if signature(a_form, p, eta) != rank1_max_signature(alg, p):
            raise ValueError("a is not eta-maximal on the Harrison set")

    # necessary-condition gate: u must lie in the positively-oriented cone
    # at every ordering of Y
    for p in y_set:
        cone = PositiveCone(alg, p, 1, eta)
        if not cone.contains(u):
            twist = alg.skew_twist_at(p) if alg.family == "quat_skew" else None
            want = cone._oriented_sign()
            form = HermitianForm(alg, u.rows)
            witness = next(d for d in _trace_diag(form, twist)
                           if want * sign_at(d, p) < 0)
            return SosSearchResult("refuted", refutation=Refutation(p, witness))

    if alg.family == "split_orth" and fld.degree == 1 and a == alg.one_element:
        cert = _split_orth_constructive(u)
        return SosSearchResult("certificate", certificate=cert)

    if alg.n != 1:
        return SosSearchResult("unknown")

    cones = [PositiveCone(alg, p, 1, eta) for p in y_set]

    def representable(rem: AlgebraElement) -> bool:
        return all(c.contains(rem) for c in cones)

    for h in range(1, height + 1):
        pool = _search_pool(alg, slot_elems, h)
        values = []
        for coords, wsub, gmask, x in pool:
            w = _subset_product(alg, slot_elems, wsub)
            g = _subset_product(alg, slot_elems,
                                [i for i in range(len(slot_elems)) if gmask >> i & 1])
            val = (x.conj_transpose() * a * x).scale(w * g)
            if val.is_zero():
                continue
            values.append((wsub, gmask, x, val))

        def dfs(rem: AlgebraElement, start: int, chosen: list) -> list | None:
            if rem.is_zero():
                return list(chosen)
            if len(chosen) >= max_terms:
                return None
            if not representable(rem):
                return None
            for idx in range(start, len(values)):
                wsub, gmask, x, val = values[idx]
                chosen.append((wsub, gmask, x))
                got = dfs(rem - val, idx, chosen)
                if got is not None:
                    return got
                chosen.pop()
            return None

        found = dfs(u, 0, [])
        if found is not None:
            t = len(slot_elems)
            terms = [CertTerm(wsub, fld.one, x, i * (1 << t) + gmask)
                     for i, (wsub, gmask, x) in enumerate(found)]
            return SosSearchResult("certificate", certificate=SquareCertificate(terms))
    return SosSearchResult("unknown")
