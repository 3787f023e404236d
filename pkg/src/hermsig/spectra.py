"""Prime ideal pairs of the Witt module, signature morphisms, and the
finite topology of the positive-cone space.

Ordering spaces of number fields are finite, so the cone space is a finite
set and its generated topology is computed literally: subbasic sets from a
deterministic pool of symmetric generators, closed under intersection and
union.  Prime-pair membership is decided on signature-visible invariants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebras import AlgebraElement, AlgebraWithInvolution, is_invertible
from .cones import enumerate_positive_cones
from .errors import AlgebraMismatchError, InvariantError, SearchExhaustedError
from .field import Ordering
from .hermitian import (
    HermitianForm,
    ReferenceForm,
    is_nondegenerate,
    reference_form,
    signature,
    transport_reference,
    witt_rank,
)
from .quadforms import QuadraticForm, signature_q


def image_generator(algebra: AlgebraWithInvolution) -> int:
    """Generator of im(sign^eta_P) in Z: quadratic Morita ranks are even
    multiples for even n and for quat_skew, so the image is 2Z there."""
    if algebra.family == "quat_skew" or algebra.n % 2 == 0:
        return 2
    return 1


@dataclass
class FundamentalDescriptor:
    """N-descriptor for 2-in-I pairs: a finite generator list; membership
    on (rank, signature table) invariants.  The closed mode reduces mod 2,
    so I(F) W(A, sigma) maps to zero and is automatically contained; the
    raw mode decides by rational-span membership of the integer table and
    deliberately omits the closure (fabricated descriptors then fail the
    ideal axiom, detectably)."""

    generators: list[HermitianForm]
    closed: bool = True


@dataclass
class PrimeIdealPair:
    kind: str  # "signature" | "mod_p" | "fundamental"
    algebra: AlgebraWithInvolution
    reference: ReferenceForm
    ordering: Ordering | None = None
    p: int | None = None
    descriptor: FundamentalDescriptor | None = None

    def __post_init__(self):
        if self.kind not in ("signature", "mod_p", "fundamental"):
            raise ValueError(f"unknown prime-pair kind {self.kind!r}")
        if self.kind in ("signature", "mod_p"):
            if self.ordering is None:
                raise ValueError("an ordering is required")
            if self.algebra.is_nil(self.ordering):
                raise ValueError("prime pairs live over non-nil orderings")
        if self.kind == "mod_p":
            if self.p is None or self.p <= 2 or not _is_prime(self.p):
                raise ValueError("the residue characteristic must be an odd prime")
        if self.kind == "fundamental" and self.descriptor is None:
            raise ValueError("a fundamental pair needs an explicit N-descriptor")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n ** 0.5) + 1):
        if n % d == 0:
            return False
    return True


def _inv_vector(h: HermitianForm, reference: ReferenceForm,
                nonnil: list[Ordering]) -> tuple[int, ...]:
    # Witt classes carry the rank of the nondegenerate part
    return (witt_rank(h),) + tuple(signature(h, p, reference) for p in nonnil)


def _f2_span_contains(vectors: list[tuple[int, ...]], target: tuple[int, ...]) -> bool:
    rows = [[v % 2 for v in vec] for vec in vectors]
    t = [v % 2 for v in target]
    cols = len(t)
    pivot_col = 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        if t[c]:
            t = [(a + b) % 2 for a, b in zip(t, rows[r])]
        r += 1
    return not any(t)


def _q_span_contains(vectors: list[tuple[int, ...]], target: tuple[int, ...]) -> bool:
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    t = [Fraction(v) for v in target]
    r = 0
    for c in range(len(t)):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        if t[c] != 0:
            f = t[c]
            t = [a - f * b for a, b in zip(t, rows[r])]
        r += 1
    return not any(t)


def _descriptor_contains(pair: PrimeIdealPair, h: HermitianForm) -> bool:
    desc = pair.descriptor
    nonnil = pair.algebra.nonnil_orderings()
    vecs = [_inv_vector(g, pair.reference, nonnil) for g in desc.generators]
    target = _inv_vector(h, pair.reference, nonnil)
    if desc.closed:
        return _f2_span_contains(vecs, target)
    return _q_span_contains(vecs, target)


def _q_in_ideal(pair: PrimeIdealPair, q: QuadraticForm) -> bool:
    if pair.kind == "signature":
        return signature_q(q, pair.ordering) == 0
    if pair.kind == "mod_p":
        return signature_q(q, pair.ordering) % pair.p == 0
    return q.rank % 2 == 0


def _h_in_submodule(pair: PrimeIdealPair, h: HermitianForm) -> bool:
    if h.algebra != pair.algebra:
        raise AlgebraMismatchError("form over a different algebra")
    if pair.kind == "signature":
        return signature(h, pair.ordering, pair.reference) == 0
    if pair.kind == "mod_p":
        c = image_generator(pair.algebra)
        sig_h = signature(h, pair.ordering, pair.reference)
        if sig_h % c != 0:
            raise InvariantError("signature outside the expected image subgroup")
        return (sig_h // c) % pair.p == 0
    return _descriptor_contains(pair, h)


def ideal_membership(q: QuadraticForm, h: HermitianForm,
                     pair: PrimeIdealPair) -> tuple[bool, bool]:
    """(q in I, h in N) for the pair."""
    return (_q_in_ideal(pair, q), _h_in_submodule(pair, h))


@dataclass
class PrimeSampleReport:
    passed: bool
    failed_axiom: str | None = None  # "proper" | "ideal" | "prime"
    witness_q: QuadraticForm | None = None
    witness_h: HermitianForm | None = None


def prime_property_sample(pair: PrimeIdealPair, rng, trials: int = 40) -> PrimeSampleReport:
    """Sampled module-theoretic checks: N proper (some sampled form stays
    outside), I.M inside N, and r m in N implies r in I or m in N.
    Reports the first counterexample."""
    from .hermitian import scale_by_quadratic

    alg = pair.algebra
    fld = alg.field

    def random_q(k: int | None = None) -> QuadraticForm:
        k = k if k is not None else rng.choice([1, 2, 3])
        entries = []
        while len(entries) < k:
            e = fld.element([rng.randint(-3, 3) for _ in range(fld.degree)])
            if not e.is_zero():
                entries.append(e)
        return QuadraticForm(fld, entries)

    def random_q_in_ideal() -> QuadraticForm:
        # constructive member q' perp -q' belongs to every ideal kind;
        # mix in rejection samples for variety
        for _ in range(20):
            q = random_q()
            if _q_in_ideal(pair, q):
                return q
        q = random_q(rng.choice([1, 2]))
        doubled = QuadraticForm(fld, q.entries + tuple(-e for e in q.entries))
        return doubled

    def random_h() -> HermitianForm:
        while True:
            k = rng.choice([1, 2])
            ed = alg.entry_dim
            s = k * alg.n
            rows = [[alg.entry([rng.randint(-2, 2) for _ in range(ed)])
                     if ed > 1 else alg.entry(rng.randint(-2, 2))
                     for _ in range(s)] for _ in range(s)]
            ct = [[alg.entry_conj(rows[c][r]) for c in range(s)] for r in range(s)]
            if alg.skew_gram:
                gram = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(rows, ct)]
            else:
                gram = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(rows, ct)]
            form = HermitianForm(alg, gram)
            if is_nondegenerate(form):
                return form

    candidates = [pair.reference.form] + [random_h() for _ in range(trials)]
    if all(_h_in_submodule(pair, h) for h in candidates):
        return PrimeSampleReport(False, "proper", None, candidates[0])
    for _ in range(trials):
        q = random_q_in_ideal()
        h = random_h()
        if not _h_in_submodule(pair, scale_by_quadratic(q, h)):
            return PrimeSampleReport(False, "ideal", q, h)
    for _ in range(trials):
        q = random_q()
        h = random_h()
        if not _h_in_submodule(pair, scale_by_quadratic(q, h)):
            continue
        if not _q_in_ideal(pair, q) and not _h_in_submodule(pair, h):
            return PrimeSampleReport(False, "prime", q, h)
    return PrimeSampleReport(True)


# ---------------------------------------------------------------------------
# Signature morphisms.


@dataclass
class SignatureMorphismPair:
    """(sign_P, sign^eta_P) as a module morphism; trivial iff P is nil."""

    ordering: Ordering
    trivial: bool


def morphism_for(algebra: AlgebraWithInvolution, ordering: Ordering) -> SignatureMorphismPair:
    return SignatureMorphismPair(ordering, algebra.is_nil(ordering))


@dataclass
class MorphismComparison:
    equivalent: bool
    witness: HermitianForm | None = None


def _witness_candidates(algebra: AlgebraWithInvolution):
    fld = algebra.field
    scalars = [fld.one]
    if fld.degree > 1:
        theta = fld.gen
        scalars += [theta, fld.one + theta, fld.one - theta]
        scalars += [theta * theta] if fld.degree > 2 else []
    basis = algebra.sym_basis()
    singles = []
    if algebra.family != "quat_skew":
        singles.append(algebra.one_element)
    singles.extend(basis)
    for b1, b2 in itertools.combinations(basis, 2):
        singles.append(b1 + b2)
    for c in scalars:
        for s in singles:
            yield s.scale(c)


def morphism_distinctness(algebra: AlgebraWithInvolution, p: Ordering, q: Ordering,
                          reference: ReferenceForm | None = None) -> MorphismComparison:
    """A diagonal form separating the two signature morphisms, or
    `equivalent` when the orderings coincide."""
    if p == q:
        return MorphismComparison(True)
    ref = reference if reference is not None else reference_form(algebra)
    for s in _witness_candidates(algebra):
        if s.is_zero():
            continue
        form = HermitianForm(algebra, s.rows)
        if signature(form, p, ref) != signature(form, q, ref):
            return MorphismComparison(False, form)
    raise SearchExhaustedError("no separating diagonal form within the bound")


# ---------------------------------------------------------------------------
# The cone space and its topology.


class ConeSpace:
    """All positive cones of an algebra with a subbasis cache of H-sets."""

    def __init__(self, algebra: AlgebraWithInvolution,
                 reference: ReferenceForm | None = None):
        self.algebra = algebra
        self.reference = reference if reference is not None else reference_form(algebra)
        self.cones = enumerate_positive_cones(algebra, self.reference)
        self._h_cache: dict = {}

    def __len__(self) -> int:
        return len(self.cones)

    def _h_single(self, element: AlgebraElement) -> frozenset[int]:
        key = element.coords()
        got = self._h_cache.get(key)
        if got is None:
            got = frozenset(i for i, cone in enumerate(self.cones)
                            if cone.contains(element))
            self._h_cache[key] = got
        return got

    def basic_open(self, elements) -> frozenset[int]:
        """H_sigma(a_1, ..., a_k): indices of cones containing every a_i;
        the whole space for no arguments."""
        out = frozenset(range(len(self.cones)))
        for a in elements:
            out &= self._h_single(a)
        return out

    def labels(self, subset) -> list[tuple[int, int]]:
        return sorted(self.cones[i].id_pair() for i in subset)


def generate_topology(size: int, subbasic: list[frozenset]) -> set[frozenset]:
    """The topology on a finite space generated by the given sets."""
    whole = frozenset(range(size))
    basis = {whole}
    pool = set(subbasic)
    while True:
        new = {a & b for a in pool | basis for b in pool} - (pool | basis)
        if not new:
            break
        pool |= new
    basis |= pool
    topo = {frozenset(), whole} | basis
    while True:
        new = {a | b for a in topo for b in topo} - topo
        if not new:
            break
        topo |= new
    return topo


def _generator_pool(algebra: AlgebraWithInvolution) -> list[AlgebraElement]:
    fld = algebra.field
    scalars = [fld.one, -fld.one]
    if fld.degree > 1:
        theta = fld.gen
        for c in (theta, fld.one + theta, fld.one - theta):
            scalars += [c, -c]
    basis = algebra.sym_basis()
    seeds = list(basis)
    if algebra.family != "quat_skew":
        seeds.append(algebra.one_element)
    else:
        quat = algebra.quat
        for pure in (quat.i, quat.j, quat.k):
            seeds.append(algebra.scalar_element(pure))
    # mixed-scalar pairs realize singletons on multi-ordering fields
    # (e.g. diag(1, 1 + theta) is definite at one ordering only)
    for b1, b2 in itertools.combinations(basis, 2):
        for c in scalars:
            seeds.append(b1 + b2.scale(c))
    pool = []
    seen = set()
    for c in scalars:
        for s in seeds:
            e = s.scale(c)
            if e.is_zero():
                continue
            key = e.coords()
            if key not in seen:
                seen.add(key)
                pool.append(e)
    return pool


def topology_compare(algebra: AlgebraWithInvolution,
                     reference: ReferenceForm | None = None) -> bool:
    """Generate the cone-space topology from all sampled symmetric
    generators and from the invertible ones only; the two must agree."""
    space = ConeSpace(algebra, reference)
    pool = _generator_pool(algebra)
    all_sets = [space._h_single(a) for a in pool]
    inv_sets = [space._h_single(a) for a in pool if is_invertible(a)]
    t_all = generate_topology(len(space), all_sets)
    t_inv = generate_topology(len(space), inv_sets)
    return t_all == t_inv


def cone_space_topology(algebra: AlgebraWithInvolution,
                        reference: ReferenceForm | None = None) -> tuple[ConeSpace, set]:
    space = ConeSpace(algebra, reference)
    pool = _generator_pool(algebra)
    sets = [space._h_single(a) for a in pool]
    return space, generate_topology(len(space), sets)


def is_t0(size: int, topology: set) -> bool:
    for i in range(size):
        for j in range(i + 1, size):
            if not any((i in u) != (j in u) for u in topology):
                return False
    return True


# ---------------------------------------------------------------------------
# Morita compatibility of cone spaces.


@dataclass
class MoritaConeReport:
    pairs: list[tuple[tuple[int, int], tuple[int, int]]]
    trace_ok: bool
    values_ok: bool
    pullback_ok: bool

    @property
    def ok(self) -> bool:
        return self.trace_ok and self.values_ok and self.pullback_ok


def morita_cone_maps(algebra: AlgebraWithInvolution, rng,
                     reference: ReferenceForm | None = None,
                     samples: int = 10) -> MoritaConeReport:
    """The bijection (P, eps) <-> (P, eps) between the cone spaces of
    M_n(D) and D, with trace/value membership checks on sampled members
    and a finite pullback check of subbasic opens."""
    ref_up = reference if reference is not None else reference_form(algebra)
    down_alg = algebra.collapsed()
    ref_down = transport_reference(ref_up, down_alg)
    up = ConeSpace(algebra, ref_up)
    down = ConeSpace(down_alg, ref_down)
    pairs = [(c.id_pair(), d.id_pair()) for c, d in zip(up.cones, down.cones)]
    trace_ok = values_ok = True
    n = algebra.n
    for cone_up, cone_down in zip(up.cones, down.cones):
        for _ in range(samples):
            m = cone_up.sample_member(rng)
            tr = down_alg.element([[m.trace()]])
            if not cone_down.contains(tr):
                trace_ok = False
            # a random column vector X as a matrix supported on one column
            ed = algebra.entry_dim
            col = [[algebra.entry([rng.randint(-2, 2) for _ in range(ed)])
                    if ed > 1 else algebra.entry(rng.randint(-2, 2))]
                   for _ in range(n)]
            x = algebra.element([[col[r][0] if c == 0 else algebra.entry_zero
                                  for c in range(n)] for r in range(n)])
            value = (x.conj_transpose() * m * x).rows[0][0]
            if not cone_down.contains(down_alg.element([[value]])):
                values_ok = False
    pullback_ok = True
    for a_down in _generator_pool(down_alg)[:16]:
        h_down = down._h_single(a_down)
        entry = a_down.rows[0][0]
        rows = [[entry if r == c == 0 else algebra.entry_zero
                 for c in range(n)] for r in range(n)]
        embedded = algebra.element(rows)
        h_up = up._h_single(embedded)
        if h_up != h_down:
            pullback_ok = False
    return MoritaConeReport(pairs, trace_ok, values_ok, pullback_ok)
