"""Exact arithmetic in real number fields.

A field is Q[x]/(m) for a monic squarefree m over Q.  Its orderings are in
bijection with the real roots of m; each ordering is stored as an isolating
interval with dyadic rational endpoints, certified by a Sturm count of 1.
All sign decisions are exact: zero tests go through a gcd with the minimal
polynomial and nonzero signs through interval refinement.  No floating
point anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import FieldMismatchError

RationalLike = Union[int, str, Fraction]

# ---------------------------------------------------------------------------
# Dense polynomials over Q: tuples of Fractions, constant term first,
# trailing zeros stripped; () is the zero polynomial.


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def poly_from(coeffs: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return _trim([Fraction(c) for c in coeffs])


def poly_add(p: tuple, q: tuple) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def poly_neg(p: tuple) -> tuple:
    return tuple(-c for c in p)


def poly_sub(p: tuple, q: tuple) -> tuple:
    return poly_add(p, poly_neg(q))


def poly_mul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return _trim(out)


def poly_scale(p: tuple, c: Fraction) -> tuple:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def poly_divmod(p: tuple, q: tuple) -> tuple[tuple, tuple]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    lead = q[-1]
    for k in range(len(p) - len(q), -1, -1):
        c = rem[k + len(q) - 1] / lead
        if c:
            quo[k] = c
            for j, b in enumerate(q):
                rem[k + j] -= c * b
    return _trim(quo), _trim(rem)


def poly_gcd(p: tuple, q: tuple) -> tuple:
    """Monic gcd via the Euclidean algorithm."""
    a, b = p, q
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return ()
    return poly_scale(a, 1 / a[-1])


def poly_deriv(p: tuple) -> tuple:
    return _trim([i * c for i, c in enumerate(p)][1:])


def poly_eval(p: tuple, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_interval(p: tuple, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact interval Horner evaluation of p over [lo, hi]."""
    alo = ahi = Fraction(0)
    for c in reversed(p):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def sturm_chain(p: tuple) -> list[tuple]:
    chain = [p]
    if len(p) > 1:
        chain.append(poly_deriv(p))
        while len(chain[-1]) > 1:
            rem = poly_divmod(chain[-2], chain[-1])[1]
            if not rem:
                break
            chain.append(poly_neg(rem))
    return chain


def _sign_variations(chain: list[tuple], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: list[tuple], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]; exact for squarefree p."""
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def cauchy_bound(p: tuple) -> Fraction:
    """Integer B with every real root of p strictly inside (-B, B)."""
    lead = p[-1]
    m = max((abs(c / lead) for c in p[:-1]), default=Fraction(0))
    return Fraction(math.floor(1 + m) + 1)


def isolate_real_roots(p: tuple) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots of a squarefree polynomial.

    Repeated bisection from the Cauchy bound; all endpoints are dyadic and
    never roots, so the output is reproducible.  Intervals are sorted.
    """
    chain = sturm_chain(p)
    bound = cauchy_bound(p)
    done: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(chain, lo, hi)
        if n == 0:
            continue
        if n == 1:
            done.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if poly_eval(p, mid) != 0:
            stack.append((lo, mid))
            stack.append((mid, hi))
        else:
            # Rational root exactly at the bisection point; carve out a
            # dyadic window that isolates it and recurse on the rest.
            delta = (hi - lo) / 4
            while (poly_eval(p, mid - delta) == 0 or poly_eval(p, mid + delta) == 0
                   or count_roots(chain, mid - delta, mid + delta) != 1):
                delta /= 2
            done.append((mid - delta, mid + delta))
            stack.append((lo, mid - delta))
            stack.append((mid + delta, hi))
    done.sort(key=lambda iv: iv[0] + iv[1])
    return done


# ---------------------------------------------------------------------------
# Number fields, elements, orderings.


class NumberField:
    """Q[x]/(m) for monic squarefree m; d = 1 gives Q itself."""

    def __init__(self, min_poly: Iterable[RationalLike]):
        coeffs = poly_from(min_poly)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            coeffs = poly_scale(coeffs, 1 / coeffs[-1])
        g = poly_gcd(coeffs, poly_deriv(coeffs))
        if len(g) > 1:
            raise ValueError("minimal polynomial must be squarefree")
        self.min_poly: tuple[Fraction, ...] = coeffs
        self.degree: int = len(coeffs) - 1

    @cached_property
    def sturm(self) -> list[tuple]:
        return sturm_chain(self.min_poly)

    @cached_property
    def orderings(self) -> tuple["Ordering", ...]:
        intervals = isolate_real_roots(self.min_poly)
        return tuple(Ordering(self, lo, hi, i) for i, (lo, hi) in enumerate(intervals))

    def element(self, coeffs: Union[RationalLike, Iterable[RationalLike]]) -> "FieldElement":
        if isinstance(coeffs, (int, str, Fraction)):
            coeffs = [coeffs]
        vec = [Fraction(c) for c in coeffs]
        rem = poly_divmod(tuple(vec), self.min_poly)[1] if len(vec) > self.degree else _trim(vec)
        return FieldElement(self, rem)

    @cached_property
    def zero(self) -> "FieldElement":
        return FieldElement(self, ())

    @cached_property
    def one(self) -> "FieldElement":
        return FieldElement(self, (Fraction(1),))

    @cached_property
    def gen(self) -> "FieldElement":
        """The class of x; for d = 1 this is a rational number."""
        return self.element([0, 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __repr__(self) -> str:
        return f"NumberField({[str(c) for c in self.min_poly]})"


#: The rationals as the degree-1 field Q[x]/(x).
QQ = NumberField([0, 1])


class FieldElement:
    """Element of a NumberField, stored as its reduced representative."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Sequence[Fraction]):
        self.field = field
        self.coeffs = _trim(coeffs)

    # -- coercion -----------------------------------------------------------
    def _lift(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, (Fraction(other),))
        return None

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def as_fraction(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if len(self.coeffs) > 1:
            raise ValueError("element is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, poly_add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, poly_neg(self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, poly_sub(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        prod = poly_mul(self.coeffs, o.coeffs)
        if len(prod) > self.field.degree:
            prod = poly_divmod(prod, self.field.min_poly)[1]
        return FieldElement(self.field, prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Extended gcd of the representative and the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        r0, r1 = self.field.min_poly, self.coeffs
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        if len(r0) > 1:
            raise ZeroDivisionError("element is a zero divisor, not invertible")
        return FieldElement(self.field, poly_scale(s0, 1 / r0[0]))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = FieldElement(self.field, (Fraction(other),))
        return (isinstance(other, FieldElement) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __hash__(self) -> int:
        return hash((self.field.min_poly, self.coeffs))

    def __repr__(self) -> str:
        return f"<{render_element(self)}>"


def render_element(a: FieldElement, gen: str = "x") -> str:
    """Canonical human/machine string: polynomial in the generator."""
    if a.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(a.coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
            continue
        mono = gen if i == 1 else f"{gen}^{i}"
        if c == 1:
            term = mono
        elif c == -1:
            term = f"-{mono}"
        else:
            term = f"{c}*{mono}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


class Ordering:
    """An ordering of a number field: an isolated real root of min_poly.

    The defining interval is immutable (it is the identity of the ordering);
    sign queries refine a private copy monotonically, which never changes
    any result, only the amount of work later queries do.
    """

    def __init__(self, field: NumberField, lo: Fraction, hi: Fraction, index: int):
        self.field = field
        self.lo = lo
        self.hi = hi
        self.index = index
        self._cur_lo = lo
        self._cur_hi = hi
        self._exact_root: Fraction | None = None
        if poly_eval(field.min_poly, lo) == 0 or poly_eval(field.min_poly, hi) == 0:
            raise ValueError("isolating interval endpoints must not be roots")

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def _refine_once(self) -> None:
        if self._exact_root is not None:
            return
        m = self.field.min_poly
        mid = (self._cur_lo + self._cur_hi) / 2
        v = poly_eval(m, mid)
        if v == 0:
            self._exact_root = mid
            return
        lo_sign = poly_eval(m, self._cur_lo) > 0
        if (v > 0) == lo_sign:
            self._cur_lo = mid
        else:
            self._cur_hi = mid

    def __eq__(self, other) -> bool:
        return (isinstance(other, Ordering) and other.field == self.field
                and (other.lo, other.hi) == (self.lo, self.hi))

    def __hash__(self) -> int:
        return hash((self.field.min_poly, self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Ordering#{self.index}({self.lo}, {self.hi})"


def enumerate_orderings(field: NumberField) -> list[Ordering]:
    """One ordering per real root of min_poly, sorted by interval midpoint."""
    return list(field.orderings)


def sign_at(a: FieldElement, ordering: Ordering) -> int:
    """Exact sign of a at the ordering: -1, 0 or +1.

    Zero is decided by the gcd test (never by refinement, which cannot
    terminate on true zeros); nonzero signs by interval evaluation with
    bisection refinement of the root interval.
    """
    if a.field != ordering.field:
        raise FieldMismatchError("element and ordering belong to different fields")
    if a.is_zero():
        return 0
    if a.field.degree == 1 or len(a.coeffs) == 1:
        c = a.coeffs[0]
        return 1 if c > 0 else -1
    m = a.field.min_poly
    g = poly_gcd(a.coeffs, m)
    if len(g) > 1 and count_roots(sturm_chain(g), ordering.lo, ordering.hi) >= 1:
        return 0
    while True:
        if ordering._exact_root is not None:
            v = poly_eval(a.coeffs, ordering._exact_root)
            return 1 if v > 0 else -1
        vlo, vhi = poly_eval_interval(a.coeffs, ordering._cur_lo, ordering._cur_hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        ordering._refine_once()


def evaluate_poly(coeffs: Iterable[RationalLike], a: FieldElement) -> FieldElement:
    """Evaluate a polynomial with rational coefficients (constant first)
    at a field element, by Horner's rule."""
    acc = a.field.zero
    for c in reversed([Fraction(c) for c in coeffs]):
        acc = acc * a + c
    return acc


def four_square_decomposition(r: RationalLike) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Write r > 0 exactly as a sum of four rational squares.

    r = pq/q^2 with integers p, q > 0; pq is decomposed into four integer
    squares by descending bounded search, then divided by q.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("input must be positive")
    n = r.numerator * r.denominator
    q = r.denominator
    for a in range(math.isqrt(n), -1, -1):
        ra = n - a * a
        for b in range(min(a, math.isqrt(ra)), -1, -1):
            rb = ra - b * b
            for c in range(min(b, math.isqrt(rb)), -1, -1):
                rc = rb - c * c
                d = math.isqrt(rc)
                if d * d == rc and d <= c:
                    return (Fraction(a, q), Fraction(b, q), Fraction(c, q), Fraction(d, q))
    raise AssertionError("unreachable: Lagrange guarantees a decomposition")
