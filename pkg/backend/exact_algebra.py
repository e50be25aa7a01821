"""Exact coefficient arithmetic.

Every coefficient lives in K = Q(zeta_inf)(q^(1/2))(x), where q is the residue
cardinality of the session. The types below are immutable:

  Cyclotomic   element of Q(zeta_inf) in its minimal cyclotomic field
  LaurentPoly  Laurent polynomial in x over Q
  Scalar       monomial  zeta^a * (opaque units) * q^(h/2) * P(x)
  ScalarSum    finite sum of Scalars (the general coefficient ring)
  PolyT        polynomial in T with ScalarSum coefficients
  RatFuncT     reduced quotient of two PolyT
  TruncSeriesT Laurent series in T known up to a truncation bound
"""
import logging
from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import lcm

from sympy import Poly, QQ, Rational, cyclotomic_poly, factorint, integer_nthroot, primefactors, symbols

from config import Config
from errors import DomainError, NotInvertibleError, UnsupportedEvaluationError

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
_X = symbols('X')
_session_q = ContextVar('residue_cardinality', default=None)


# ---------------------------------------------------------------------------
# Session handling

@lru_cache(maxsize=None)
def validate_q(q):
    """Return q as an int, checking that it is a prime power > 1."""
    try:
        value = int(q)
    except (TypeError, ValueError):
        raise DomainError(f'residue cardinality must be an integer, got {q!r}')
    if value < 2 or len(factorint(value)) != 1:
        raise DomainError(f'residue cardinality must be a prime power > 1, got {value}')
    return value


@lru_cache(maxsize=None)
def _q_structure(q):
    """(p, f, sqrt(q) or None) for q = p^f."""
    ((p, f),) = factorint(q).items()
    root, exact = integer_nthroot(q, 2)
    return int(p), int(f), (int(root) if exact else None)


def current_q():
    q = _session_q.get()
    if q is None:
        return validate_q(Config.RESIDUE_CARDINALITY)
    return q


def enter_session(q):
    return _session_q.set(validate_q(q))


def exit_session(token):
    _session_q.reset(token)


@contextmanager
def session(q):
    """Fix the residue cardinality for every Scalar built inside the block."""
    token = enter_session(q)
    try:
        yield _session_q.get()
    finally:
        exit_session(token)


def _check_same_q(a, b):
    if a != b:
        raise DomainError(f'cannot mix residue cardinalities {a} and {b} in one computation')


def to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError('booleans are not scalars')
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise DomainError(f'not a rational number: {value!r}')
    raise DomainError(f'not a rational number: {value!r}')


def _vp(n, p):
    n = abs(n)
    count = 0
    while n and n % p == 0:
        n //= p
        count += 1
    return count


def _merge_words(pairs):
    """Normal form of an opaque-unit word: sorted (symbol, exponent), no zeros."""
    acc = Counter()
    for symbol, exponent in pairs:
        acc[symbol] += exponent
    return tuple(sorted((s, e) for s, e in acc.items() if e))


def _join_signed(parts):
    text = parts[0]
    for part in parts[1:]:
        if part.startswith('-'):
            text += ' - ' + part[1:]
        else:
            text += ' + ' + part
    return text


# ---------------------------------------------------------------------------
# Cyclotomic numbers

@lru_cache(maxsize=None)
def _phi_coeffs(n):
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(n, _X, polys=True).all_coeffs()))


def _reduce_mod_phi(coeffs, n):
    phi = _phi_coeffs(n)
    d = len(phi) - 1
    c = list(coeffs) + [Fraction(0)] * max(0, d - len(coeffs))
    for i in range(len(c) - 1, d - 1, -1):
        lead = c[i]
        if lead:
            shift = i - d
            for k in range(d):
                if phi[k]:
                    c[shift + k] -= lead * phi[k]
            c[i] = Fraction(0)
    return tuple(c[:d])


def _root_exponent(turn):
    """Write exp(2 pi i turn) as sign * zeta_N^a with N not 2 mod 4."""
    a, n = turn.numerator, turn.denominator
    if n % 4 == 2:
        m = n // 2
        return (a * (m + 1) // 2) % m, m, -1
    return a, n, 1


class Cyclotomic:
    """Element of Q(zeta_L), stored in the power basis of its minimal field."""
    __slots__ = ('conductor', 'coeffs')

    def __init__(self, conductor, coeffs):
        self.conductor = conductor
        self.coeffs = coeffs

    @classmethod
    def rational(cls, value):
        return cls(1, (to_fraction(value),))

    @classmethod
    def root(cls, turn):
        return cls.from_terms({Fraction(turn) % 1: Fraction(1)})

    @classmethod
    def from_terms(cls, terms):
        """Sum of c * exp(2 pi i turn) over a mapping turn -> c."""
        items = []
        for turn, c in terms.items():
            if c:
                items.append(_root_exponent(Fraction(turn) % 1) + (Fraction(c),))
        if not items:
            return ZERO_C
        conductor = lcm(*(n for _, n, _, _ in items))
        if conductor == 1:
            return cls(1, (sum((sign * c for _, _, sign, c in items), Fraction(0)),))
        coeffs = [Fraction(0)] * conductor
        for a, n, sign, c in items:
            coeffs[a * (conductor // n)] += sign * c
        return cls._canonical(conductor, _reduce_mod_phi(coeffs, conductor))

    @classmethod
    def _canonical(cls, conductor, coords):
        if not any(coords):
            return ZERO_C
        if conductor == 1:
            return cls(1, tuple(coords))
        for p in primefactors(conductor):
            smaller = cls._descend(conductor, coords, p)
            if smaller is not None:
                logger.debug('cyclotomic descent %s -> %s', conductor, smaller.conductor)
                return smaller
        return cls(conductor, tuple(coords))

    @classmethod
    def _descend(cls, conductor, coords, p):
        """The same number in Q(zeta_{conductor/p}), or None."""
        m = conductor // p
        if m % p == 0:
            # Phi_L(X) = Phi_m(X^p): the subfield is spanned by exponents divisible by p
            if any(c for i, c in enumerate(coords) if i % p):
                return None
            return cls.from_terms({Fraction(j, m): c for j, c in enumerate(coords[::p]) if c})
        w = pow(p, -1, m) if m > 1 else 0
        terms = {}
        for i, c in enumerate(coords):
            if c:
                trace = Fraction(p - 1) if i % p == 0 else Fraction(-1)
                key = Fraction((w * i) % m, m) if m > 1 else Fraction(0)
                terms[key] = terms.get(key, Fraction(0)) + c * trace / (p - 1)
        candidate = cls.from_terms(terms)
        if candidate._coords_at(conductor) == tuple(coords):
            return candidate
        return None

    def _coords_at(self, conductor):
        if conductor == self.conductor:
            return self.coeffs
        step = conductor // self.conductor
        coeffs = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for j, c in enumerate(self.coeffs):
            coeffs[j * step] = c
        return _reduce_mod_phi(coeffs, conductor)

    def is_zero(self):
        return self.conductor == 1 and not self.coeffs[0]

    def is_rational(self):
        return self.conductor == 1

    @property
    def value(self):
        if self.conductor != 1:
            raise UnsupportedEvaluationError(f'{self!r} is not rational')
        return self.coeffs[0]

    def __add__(self, other):
        if self.conductor == 1 and other.conductor == 1:
            return Cyclotomic(1, (self.coeffs[0] + other.coeffs[0],))
        conductor = lcm(self.conductor, other.conductor)
        a, b = self._coords_at(conductor), other._coords_at(conductor)
        return Cyclotomic._canonical(conductor, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return Cyclotomic(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO_C
            return Cyclotomic(self.conductor, tuple(c * other for c in self.coeffs))
        if self.conductor == 1 and other.conductor == 1:
            return Cyclotomic(1, (self.coeffs[0] * other.coeffs[0],))
        conductor = lcm(self.conductor, other.conductor)
        a, b = self._coords_at(conductor), other._coords_at(conductor)
        product = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        product[i + j] += x * y
        return Cyclotomic._canonical(conductor, _reduce_mod_phi(product, conductor))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise NotInvertibleError('zero has no inverse')
        if self.conductor == 1:
            return Cyclotomic(1, (1 / self.coeffs[0],))
        n = self.conductor
        modulus = Poly(list(reversed(_phi_coeffs(n))), _X, domain=QQ)
        element = Poly([Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], _X, domain=QQ)
        inverse = element.invert(modulus)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inverse.all_coeffs())]
        return Cyclotomic._canonical(n, _reduce_mod_phi(coeffs, n))

    def as_root_multiple(self):
        """(turn, r) with self = r * exp(2 pi i turn), or None."""
        if self.conductor == 1:
            return Fraction(0), self.coeffs[0]
        n = self.conductor
        for j in range(n):
            rotated = self * Cyclotomic.root(Fraction(-j, n))
            if rotated.conductor == 1:
                return Fraction(j, n), rotated.coeffs[0]
        return None

    def power_basis_terms(self):
        """List of (turn, rational) whose sum is self, as short as the basis allows."""
        found = self.as_root_multiple()
        if found is not None:
            return [found] if found[1] else []
        n = self.conductor
        return [(Fraction(j, n), c) for j, c in enumerate(self.coeffs) if c]

    def sort_key(self):
        return (self.conductor, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.conductor, self.coeffs))

    def __repr__(self):
        if self.conductor == 1:
            return f'Cyclotomic({self.coeffs[0]})'
        return f'Cyclotomic(L={self.conductor}, {list(map(str, self.coeffs))})'


ZERO_C = Cyclotomic(1, (Fraction(0),))


# ---------------------------------------------------------------------------
# Laurent polynomials in x

class LaurentPoly:
    """Laurent polynomial in x with rational coefficients."""
    __slots__ = ('terms',)

    def __init__(self, terms=None):
        acc = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for exponent, c in items:
            c = to_fraction(c)
            if c:
                acc[int(exponent)] = acc.get(int(exponent), Fraction(0)) + c
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, c, exponent):
        return cls({exponent: c})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def is_monomial(self):
        return len(self.terms) == 1

    def constant_value(self):
        if not self.is_constant():
            raise UnsupportedEvaluationError(f'{self.render()} depends on x')
        return self.terms[0][1] if self.terms else Fraction(0)

    def degree(self):
        return self.terms[-1][0]

    def low_degree(self):
        return self.terms[0][0]

    def leading_coefficient(self):
        return self.terms[-1][1]

    def scale(self, c):
        c = to_fraction(c)
        return LaurentPoly({e: a * c for e, a in self.terms})

    def __add__(self, other):
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, Fraction(0)) + c
        return LaurentPoly(acc)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[e1 + e2] = acc.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(acc)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def inverse(self):
        if not self.is_monomial():
            raise NotInvertibleError(f'{self.render()} is not a unit in Q[x, 1/x]')
        ((e, c),) = self.terms
        return LaurentPoly({-e: 1 / c})

    def __call__(self, point):
        point = to_fraction(point)
        total = Fraction(0)
        for e, c in self.terms:
            if e < 0 and not point:
                raise NotInvertibleError(f'{self.render()} has a pole at x = 0')
            total += c * point ** e
        return total

    def min_valuation(self, p):
        return min(_vp(c.numerator, p) - _vp(c.denominator, p) for _, c in self.terms)

    def sort_key(self):
        return self.terms

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def render(self, var='x'):
        if not self.terms:
            return '0'
        parts = []
        for e, c in reversed(self.terms):
            if e == 0:
                parts.append(str(c))
                continue
            mono = var if e == 1 else f'{var}^{e}'
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append('-' + mono)
            else:
                parts.append(f'{c}*{mono}')
        return _join_signed(parts)

    def __repr__(self):
        return f'LaurentPoly({self.render()})'


# ---------------------------------------------------------------------------
# Scalars

class Scalar:
    """Monomial zeta * (opaque units) * q^(q2/2) * P(x).

    Normal form: the root of unity is a turn in [0, 1), the opaque word is
    sorted, P has positive leading coefficient and its rational content is
    free of whole powers of q (for square q the half power folds into P).
    """
    __slots__ = ('q', 'turn', 'word', 'q2', 'xpoly')

    def __init__(self, value=1, turn=0, q2=0, word=(), xpoly=None, q=None):
        q = current_q() if q is None else validate_q(q)
        poly = LaurentPoly.constant(1) if xpoly is None else xpoly
        if not isinstance(poly, LaurentPoly):
            poly = LaurentPoly(poly)
        poly = poly.scale(to_fraction(value))
        q2 = Fraction(q2)
        if q2.denominator != 1:
            raise DomainError(f'q exponent must be a half integer, got {q2 / 2}')
        q2 = int(q2)
        turn = Fraction(turn) % 1
        word = _merge_words(word)
        if poly.is_zero():
            turn, q2, word = Fraction(0), 0, ()
        else:
            if poly.leading_coefficient() < 0:
                poly = -poly
                turn = (turn + HALF) % 1
            p, f, root = _q_structure(q)
            if root is not None:
                if q2:
                    poly = poly.scale(Fraction(root) ** q2)
                    q2 = 0
            else:
                k = poly.min_valuation(p) // f
                if k:
                    poly = poly.scale(Fraction(q) ** -k)
                    q2 += 2 * k
        self.q = q
        self.turn = turn
        self.word = word
        self.q2 = q2
        self.xpoly = poly

    @classmethod
    def root(cls, a, n, q=None):
        return cls(turn=Fraction(a, n), q=q)

    @classmethod
    def q_power(cls, exponent, q=None):
        return cls(q2=Fraction(exponent) * 2, q=q)

    @classmethod
    def x_power(cls, k=1, q=None):
        return cls(xpoly=LaurentPoly.monomial(1, k), q=q)

    @classmethod
    def opaque(cls, symbol, q=None):
        return cls(word=((symbol, 1),), q=q)

    @classmethod
    def coerce(cls, value, q=None):
        if isinstance(value, Scalar):
            return value
        if isinstance(value, ScalarSum):
            scalar = value.as_scalar()
            if scalar is None:
                raise DomainError(f'{value.render()} is not a monomial scalar')
            return scalar
        return cls(value, q=q)

    @property
    def qhalf_exp(self):
        return Fraction(self.q2, 2)

    def is_zero(self):
        return self.xpoly.is_zero()

    def has_opaque(self):
        return bool(self.word)

    def has_x(self):
        return not self.xpoly.is_constant()

    def is_rational(self):
        return (not self.word and self.q2 % 2 == 0 and self.xpoly.is_constant()
                and self.turn in (0, HALF))

    def rational_value(self):
        if not self.is_rational():
            raise UnsupportedEvaluationError(f'{self.render()} is not a rational number')
        value = self.xpoly.constant_value() * Fraction(self.q) ** (self.q2 // 2)
        return -value if self.turn == HALF else value

    def is_invertible(self):
        return self.xpoly.is_monomial()

    def _with(self, **changes):
        fields = dict(turn=self.turn, q2=self.q2, word=self.word, xpoly=self.xpoly, q=self.q)
        fields.update(changes)
        return Scalar(**fields)

    def inverse(self):
        if not self.is_invertible():
            raise NotInvertibleError(f'{self.render()} is not invertible')
        return self._with(turn=-self.turn, q2=-self.q2,
                          word=tuple((s, -e) for s, e in self.word), xpoly=self.xpoly.inverse())

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._with(xpoly=self.xpoly.scale(other))
        if isinstance(other, Scalar):
            _check_same_q(self.q, other.q)
            return Scalar(turn=self.turn + other.turn, q2=self.q2 + other.q2,
                          word=self.word + other.word, xpoly=self.xpoly * other.xpoly, q=self.q)
        if isinstance(other, ScalarSum):
            return self.to_sum() * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return Scalar(other, q=self.q) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return self._with(turn=self.turn * n, q2=self.q2 * n,
                          word=tuple((s, e * n) for s, e in self.word), xpoly=self.xpoly ** n)

    def __neg__(self):
        return self._with(turn=self.turn + HALF)

    def __add__(self, other):
        return self.to_sum() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.to_sum() - other

    def __rsub__(self, other):
        return ScalarSum.coerce(other, self.q) - self

    def to_sum(self):
        return ScalarSum.from_scalar(self)

    def weight(self):
        """Rational w with |self| = q^(w/2) in every complex embedding, or None."""
        if self.word:
            raise UnsupportedEvaluationError(f'weight of the opaque unit {self.render()} is undefined')
        if self.has_x():
            raise UnsupportedEvaluationError('weight is undefined before x is specialized')
        if self.is_zero():
            raise NotInvertibleError('zero has no weight')
        p, f, _ = _q_structure(self.q)
        c = abs(self.xpoly.constant_value())
        v = _vp(c.numerator, p) - _vp(c.denominator, p)
        if c != Fraction(p) ** v:
            return None
        return Fraction(self.q2) + Fraction(2 * v, f)

    def specialize(self, point):
        """Substitute x -> point (a rational or a constant Scalar)."""
        if not self.has_x():
            return self
        if isinstance(point, Scalar):
            total = ScalarSum.zero(self.q)
            for e, c in self.xpoly.terms:
                total = total + (point ** e) * c
            result = (total * self._with(xpoly=LaurentPoly.constant(1))).as_scalar()
            if result is None:
                raise DomainError(f'{self.render()} at x = {point.render()} is not a monomial scalar')
            return result
        return self._with(xpoly=LaurentPoly.constant(self.xpoly(point)))

    def sort_key(self):
        return (self.word, self.q2, self.xpoly.sort_key(), self.turn)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other, q=self.q)
        elif isinstance(other, ScalarSum):
            return self.to_sum() == other
        if not isinstance(other, Scalar):
            return NotImplemented
        return ((self.q, self.turn, self.word, self.q2, self.xpoly)
                == (other.q, other.turn, other.word, other.q2, other.xpoly))

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.turn, self.word, self.q2, self.xpoly))

    def render(self):
        if self.is_zero():
            return '0'
        parts = []
        sign = ''
        if self.turn == HALF:
            sign = '-'
        elif self.turn:
            parts.append(f'zeta({self.turn.numerator},{self.turn.denominator})')
        for symbol, e in self.word:
            parts.append(symbol if e == 1 else f'{symbol}^({e})')
        if self.q2:
            e = Fraction(self.q2, 2)
            parts.append('q' if e == 1 else f'q^{e}' if e.denominator == 1 else f'q^({e})')
        if not (self.xpoly == LaurentPoly.constant(1) and parts):
            text = self.xpoly.render()
            parts.append(f'({text})' if len(self.xpoly.terms) > 1 else text)
        return sign + '*'.join(parts)

    __str__ = render

    def __repr__(self):
        return f'Scalar({self.render()})'


def _q_log(c, q):
    """k with q^k = c, or None."""
    p, f, _ = _q_structure(q)
    v = _vp(c.numerator, p) - _vp(c.denominator, p)
    if v % f or c != Fraction(p) ** v:
        return None
    return v // f


def twist_offset(a, b, f=1):
    """s with b = a * q^-s * zeta for some zeta in mu_f, or None."""
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    _check_same_q(a.q, b.q)
    if a.is_zero() or b.is_zero() or a.word != b.word:
        return None
    c = b.xpoly.leading_coefficient() / a.xpoly.leading_coefficient()
    if a.xpoly.scale(c) != b.xpoly:
        return None
    k = _q_log(c, a.q)
    if k is None:
        return None
    doubled = b.q2 - a.q2 + 2 * k
    if doubled % 2 or ((b.turn - a.turn) * f).denominator != 1:
        return None
    return -doubled // 2


# ---------------------------------------------------------------------------
# Sums of scalars

class ScalarSum:
    """Element of the coefficient ring, keyed by (opaque word, q^(1/2) parity, x exponent)."""
    __slots__ = ('q', 'terms')

    def __init__(self, terms=None, q=None):
        self.q = current_q() if q is None else q
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def zero(cls, q=None):
        return cls({}, q)

    @classmethod
    def one(cls, q=None):
        return cls({((), 0, 0): Cyclotomic.rational(1)}, q)

    @classmethod
    def from_scalar(cls, s):
        if s.is_zero():
            return cls.zero(s.q)
        parity = s.q2 % 2
        factor = Fraction(s.q) ** ((s.q2 - parity) // 2)
        root = Cyclotomic.root(s.turn)
        return cls({(s.word, parity, e): root * (c * factor) for e, c in s.xpoly.terms}, s.q)

    @classmethod
    def coerce(cls, value, q=None):
        if isinstance(value, ScalarSum):
            if q is not None:
                _check_same_q(q, value.q)
            return value
        if isinstance(value, Scalar):
            if q is not None:
                _check_same_q(q, value.q)
            return cls.from_scalar(value)
        q = current_q() if q is None else q
        c = to_fraction(value)
        if not c:
            return cls.zero(q)
        return cls({((), 0, 0): Cyclotomic.rational(c)}, q)

    def is_zero(self):
        return not self.terms

    def has_opaque(self):
        return any(w for (w, _, _) in self.terms)

    def has_x(self):
        return any(e for (_, _, e) in self.terms)

    def has_half_power(self):
        return any(p for (_, p, _) in self.terms)

    def x_high(self):
        return max(e for (_, _, e) in self.terms)

    def x_low(self):
        return min(e for (_, _, e) in self.terms)

    def x_slice(self, exponent):
        return ScalarSum({(w, p, 0): c for (w, p, e), c in self.terms.items() if e == exponent}, self.q)

    def shift_x(self, k):
        return ScalarSum({(w, p, e + k): c for (w, p, e), c in self.terms.items()}, self.q)

    def _coerce_operand(self, other):
        if isinstance(other, (int, Fraction, Scalar, ScalarSum)):
            return ScalarSum.coerce(other, self.q)
        return None

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return ScalarSum(out, self.q)

    __radd__ = __add__

    def __neg__(self):
        return ScalarSum({k: -c for k, c in self.terms.items()}, self.q)

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        out = {}
        for (w1, p1, e1), c1 in self.terms.items():
            for (w2, p2, e2), c2 in other.terms.items():
                c = c1 * c2
                parity = p1 + p2
                if parity == 2:
                    parity = 0
                    c = c * self.q
                key = (_merge_words(w1 + w2), parity, e1 + e2)
                out[key] = out[key] + c if key in out else c
        return ScalarSum(out, self.q)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = ScalarSum.one(self.q)
        for _ in range(n):
            result = result * self
        return result

    def inverse(self):
        if self.is_zero():
            raise NotInvertibleError('zero has no inverse')
        support = {(w, e) for (w, _, e) in self.terms}
        if len(support) != 1:
            raise NotInvertibleError(f'{self.render()} is not invertible in the coefficient ring')
        ((word, xexp),) = support
        inv_word = tuple((s, -k) for s, k in word)
        c0 = self.terms.get((word, 0, xexp), ZERO_C)
        c1 = self.terms.get((word, 1, xexp), ZERO_C)
        if c1.is_zero():
            return ScalarSum({(inv_word, 0, -xexp): c0.inverse()}, self.q)
        if c0.is_zero():
            return ScalarSum({(inv_word, 1, -xexp): c1.inverse() * Fraction(1, self.q)}, self.q)
        norm = c0 * c0 - c1 * c1 * self.q
        if norm.is_zero():
            raise NotInvertibleError(f'{self.render()} is a zero divisor (sqrt(q) lies in the cyclotomic field)')
        n_inv = norm.inverse()
        return ScalarSum({(inv_word, 0, -xexp): c0 * n_inv, (inv_word, 1, -xexp): -(c1 * n_inv)}, self.q)

    def __truediv__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def exact_div(self, other):
        """self / other when the quotient lies in the coefficient ring."""
        other = ScalarSum.coerce(other, self.q)
        if other.is_zero():
            raise NotInvertibleError('division by zero')
        if self.is_zero():
            return self
        if len({(w, e) for (w, _, e) in other.terms}) == 1:
            return self * other.inverse()
        if len({w for (w, _, _) in other.terms}) != 1:
            raise NotInvertibleError('division by a sum of distinct opaque units')
        top = other.x_high()
        top_inv = other.x_slice(top).inverse()
        floor = self.x_low() - other.x_low()
        quotient = ScalarSum.zero(self.q)
        rest = self
        while not rest.is_zero():
            shift = rest.x_high() - top
            if shift < floor:
                raise NotInvertibleError(f'{self.render()} is not divisible by {other.render()}')
            step = (rest.x_slice(rest.x_high()) * top_inv).shift_x(shift)
            quotient = quotient + step
            rest = rest - step * other
        return quotient

    def specialize(self, point):
        """Substitute x -> point (a rational or a constant Scalar)."""
        if not self.has_x():
            return self
        total = ScalarSum.zero(self.q)
        if isinstance(point, Scalar):
            for (w, p, e), c in self.terms.items():
                total = total + ScalarSum({(w, p, 0): c}, self.q) * (point ** e)
            return total
        value = to_fraction(point)
        for (w, p, e), c in self.terms.items():
            if e < 0 and not value:
                raise NotInvertibleError('x = 0 is a pole')
            total = total + ScalarSum({(w, p, 0): c * value ** e}, self.q)
        return total

    def as_scalar(self):
        """The equal monomial Scalar, or None."""
        if self.is_zero():
            return Scalar(0, q=self.q)
        heads = {(w, p) for (w, p, _) in self.terms}
        if len(heads) != 1:
            return None
        ((word, parity),) = heads
        first = self.terms[min(self.terms)]
        found = first.as_root_multiple()
        if found is None:
            return None
        turn = found[0]
        unrotate = Cyclotomic.root(-turn)
        xpoly = {}
        for (_, _, e), c in self.terms.items():
            rotated = c * unrotate
            if not rotated.is_rational():
                return None
            xpoly[e] = rotated.value
        return Scalar(turn=turn, q2=parity, word=word, xpoly=LaurentPoly(xpoly), q=self.q)

    def is_rational(self):
        return not self.terms or (set(self.terms) == {((), 0, 0)} and self.terms[((), 0, 0)].is_rational())

    def rational_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise UnsupportedEvaluationError(f'{self.render()} is not a rational number')
        return self.terms[((), 0, 0)].value

    def __eq__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self.q == other.q and self.terms == other.terms

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        scalar = self.as_scalar()
        if scalar is not None:
            return hash(scalar)
        return hash(frozenset(self.terms.items()))

    def _monomials(self):
        monomials = []
        for key in sorted(self.terms, key=lambda k: (k[0], k[1], -k[2])):
            word, parity, e = key
            for turn, r in self.terms[key].power_basis_terms():
                monomials.append(Scalar(r, turn=turn, q2=parity, word=word,
                                        xpoly=LaurentPoly.monomial(1, e), q=self.q))
        return monomials

    def render(self):
        if self.is_zero():
            return '0'
        scalar = self.as_scalar()
        if scalar is not None:
            return scalar.render()
        return _join_signed([m.render() for m in self._monomials()])

    __str__ = render

    def __repr__(self):
        return f'ScalarSum({self.render()})'


def as_sum(value, q=None):
    return ScalarSum.coerce(value, q)


def _power(value, n):
    result = ScalarSum.one(value.q if hasattr(value, 'q') else None)
    for _ in range(n):
        result = result * value
    return result


def _x_normalize(a):
    """a times the unit x^k that puts its lowest x exponent at 0."""
    return a if a.is_zero() else a.shift_x(-a.x_low())


def _x_remainder(a, b):
    """Remainder of a by b as polynomials in x over the constants."""
    top = b.x_high()
    top_inv = b.x_slice(top).inverse()
    rest = a
    while not rest.is_zero() and rest.x_high() >= top:
        step = (rest.x_slice(rest.x_high()) * top_inv).shift_x(rest.x_high() - top)
        rest = rest - step * b
    return rest


def _x_gcd(a, b):
    """gcd in the Laurent ring in x, scaled to lowest exponent 0 and top slice 1."""
    a, b = _x_normalize(a), _x_normalize(b)
    while not b.is_zero():
        a, b = b, _x_normalize(_x_remainder(a, b))
    if a.is_zero():
        return a
    return a * a.x_slice(a.x_high()).inverse()


# ---------------------------------------------------------------------------
# Polynomials in T

@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial."""
    __slots__ = ()

    def __lt__(self, other):
        return not isinstance(other, _MinusInfinity)

    def __eq__(self, other):
        return isinstance(other, _MinusInfinity)

    def __hash__(self):
        return hash('NEG_INF')

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return 'NEG_INF'


NEG_INF = _MinusInfinity()


def infer_q(values, q):
    if q is not None:
        return q
    for value in values:
        if isinstance(value, (Scalar, ScalarSum)):
            return value.q
    return current_q()


class PolyT:
    """Polynomial in T over the coefficient ring; zero coefficients are stripped."""
    __slots__ = ('q', 'coeffs', '_map')

    def __init__(self, coeffs=None, q=None):
        items = list(enumerate(coeffs)) if isinstance(coeffs, (list, tuple)) else list((coeffs or {}).items())
        self.q = infer_q([c for _, c in items], q)
        acc = {}
        for d, c in items:
            if d < 0:
                raise DomainError('PolyT degrees must be nonnegative')
            c = ScalarSum.coerce(c, self.q)
            acc[d] = acc[d] + c if d in acc else c
        self._map = {d: c for d, c in acc.items() if not c.is_zero()}
        self.coeffs = tuple(sorted(self._map.items()))

    @classmethod
    def zero(cls, q=None):
        return cls({}, q)

    @classmethod
    def one(cls, q=None):
        return cls({0: 1}, q)

    @classmethod
    def monomial(cls, c, d, q=None):
        return cls({d: c}, q)

    @classmethod
    def from_roots(cls, roots, q=None):
        """prod (1 - lambda T)."""
        q = infer_q(roots, q)
        result = cls.one(q)
        for root in roots:
            result = result * cls({0: 1, 1: -ScalarSum.coerce(root, q)}, q)
        return result

    def is_zero(self):
        return not self._map

    def degree(self):
        return self.coeffs[-1][0] if self.coeffs else NEG_INF

    def low_degree(self):
        return self.coeffs[0][0] if self.coeffs else NEG_INF

    def lc(self):
        return self.coeffs[-1][1] if self.coeffs else ScalarSum.zero(self.q)

    def coefficient(self, d):
        return self._map.get(d, ScalarSum.zero(self.q))

    def _coerce_operand(self, other):
        if isinstance(other, PolyT):
            _check_same_q(self.q, other.q)
            return other
        if isinstance(other, (int, Fraction, Scalar, ScalarSum)):
            return PolyT({0: other}, self.q)
        return None

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        acc = dict(self._map)
        for d, c in other.coeffs:
            acc[d] = acc[d] + c if d in acc else c
        return PolyT(acc, self.q)

    __radd__ = __add__

    def __neg__(self):
        return PolyT({d: -c for d, c in self.coeffs}, self.q)

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        acc = {}
        for d1, c1 in self.coeffs:
            for d2, c2 in other.coeffs:
                c = c1 * c2
                acc[d1 + d2] = acc[d1 + d2] + c if d1 + d2 in acc else c
        return PolyT(acc, self.q)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = PolyT.one(self.q)
        for _ in range(n):
            result = result * self
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise NotInvertibleError('division by the zero polynomial')
        inv = other.lc().inverse()
        quotient = {}
        rest = self
        while not rest.is_zero() and rest.degree() >= other.degree():
            d = rest.degree() - other.degree()
            c = rest.lc() * inv
            quotient[d] = c
            rest = rest - PolyT.monomial(c, d, self.q) * other
        return PolyT(quotient, self.q), rest

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def pseudo_remainder(self, other):
        """lc(other)^k * self mod other, using ring operations only."""
        rest = self
        lead = other.lc()
        while not rest.is_zero() and rest.degree() >= other.degree():
            d = rest.degree() - other.degree()
            rest = rest * lead - PolyT.monomial(rest.lc(), d, self.q) * other
        return rest

    def exact_quotient(self, other):
        """self / other if it is a polynomial over the coefficient ring, else None."""
        if other.is_zero():
            raise NotInvertibleError('division by the zero polynomial')
        quotient = {}
        rest = self
        while not rest.is_zero():
            if rest.degree() < other.degree():
                return None
            d = rest.degree() - other.degree()
            try:
                c = rest.lc().exact_div(other.lc())
            except NotInvertibleError:
                return None
            quotient[d] = c
            rest = rest - PolyT.monomial(c, d, self.q) * other
        return PolyT(quotient, self.q)

    def monic(self):
        """self divided by its leading coefficient when that is a unit."""
        if self.is_zero():
            return self
        try:
            inv = self.lc().inverse()
        except NotInvertibleError:
            return self
        return self * inv

    def content(self):
        """gcd of the coefficients in the Laurent ring in x, lowest exponent 0 and top slice 1."""
        g = ScalarSum.zero(self.q)
        for _, c in self.coeffs:
            g = _x_gcd(g, c)
        return g

    def primitive_part(self):
        if self.is_zero():
            return self
        c = self.content()
        return PolyT({d: coef.exact_div(c) for d, coef in self.coeffs}, self.q)

    def _primitive_gcd(self, other):
        """gcd over the Laurent ring in x: contents by Euclid in x, primitive parts by pseudo-remainders."""
        try:
            content = _x_gcd(self.content(), other.content())
            a, b = self.primitive_part(), other.primitive_part()
            if a.degree() < b.degree():
                a, b = b, a
            while not b.is_zero():
                a, b = b, a.pseudo_remainder(b).primitive_part()
        except NotInvertibleError:
            logger.debug('no gcd over the Laurent ring for %s and %s', self.render(), other.render())
            return PolyT.one(self.q)
        return a * content

    def gcd(self, other):
        if self.is_zero() or other.is_zero():
            return (other if self.is_zero() else self).monic()
        if self.has_x() or other.has_x():
            return self._primitive_gcd(other)
        a, b = self, other
        while not b.is_zero():
            if b.degree() == 0:
                return PolyT.one(self.q)
            try:
                remainder = a % b
            except NotInvertibleError:
                remainder = a.pseudo_remainder(b)
            a, b = b, remainder
        return a.monic()

    def evaluate(self, value):
        value = ScalarSum.coerce(value, self.q)
        result = ScalarSum.zero(self.q)
        if self.is_zero():
            return result
        for d in range(self.degree(), -1, -1):
            result = result * value + self.coefficient(d)
        return result

    __call__ = evaluate

    def scale_variable(self, c):
        """Substitute T -> c*T."""
        c = ScalarSum.coerce(c, self.q)
        return PolyT({d: coef * _power(c, d) for d, coef in self.coeffs}, self.q)

    def specialize(self, point):
        return PolyT({d: c.specialize(point) for d, c in self.coeffs}, self.q)

    def shift(self, k):
        return PolyT({d + k: c for d, c in self.coeffs}, self.q)

    def at_inverse(self):
        """p(1/T) as a rational function."""
        if self.is_zero():
            return RatFuncT(self)
        top = self.degree()
        return RatFuncT(PolyT({top - d: c for d, c in self.coeffs}, self.q), PolyT.monomial(1, top, self.q))

    def has_half_powers(self):
        return any(c.has_half_power() for _, c in self.coeffs)

    def has_x(self):
        return any(c.has_x() for _, c in self.coeffs)

    def __eq__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def render(self, var='T'):
        if self.is_zero():
            return '0'
        parts = []
        for d, c in self.coeffs:
            scalar = c.as_scalar()
            text = scalar.render() if scalar is not None else f'({c.render()})'
            if d == 0:
                parts.append(text)
                continue
            mono = var if d == 1 else f'{var}^{d}'
            if text == '1':
                parts.append(mono)
            elif text == '-1':
                parts.append('-' + mono)
            else:
                parts.append(f'{text}*{mono}')
        return _join_signed(parts)

    __str__ = render

    def __repr__(self):
        return f'PolyT({self.render()})'


def poly_divides(a, b):
    """True iff b = a*c for a polynomial c over the coefficient ring."""
    if a.is_zero():
        raise NotInvertibleError('division by the zero polynomial')
    if b.is_zero():
        return True
    return b.exact_quotient(a) is not None


def det_char(matrix):
    """det(1 - M*T) by the Faddeev-LeVerrier recursion."""
    rows = [list(row) for row in getattr(matrix, 'rows', matrix)]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DomainError('det_char needs a square matrix')
    q = infer_q([e for row in rows for e in row], None)
    a = [[ScalarSum.coerce(e, q) for e in row] for row in rows]
    if any(e.has_opaque() for row in a for e in row):
        raise UnsupportedEvaluationError('det_char is undefined on opaque units')
    if n == 0:
        return PolyT.one(q)
    if all(a[i][j].is_zero() for i in range(n) for j in range(n) if i != j):
        return PolyT.from_roots([a[i][i] for i in range(n)], q)

    def matmul(x, y):
        return [[sum((x[i][k] * y[k][j] for k in range(n)), ScalarSum.zero(q)) for j in range(n)]
                for i in range(n)]

    c = [ScalarSum.zero(q)] * (n + 1)
    c[n] = ScalarSum.one(q)
    m = [[ScalarSum.zero(q)] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = matmul(a, m)
        m = [[am[i][j] + (c[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = matmul(a, m)
        trace = sum((am[i][i] for i in range(n)), ScalarSum.zero(q))
        c[n - k] = -trace * Fraction(1, k)
    return PolyT({j: c[n - j] for j in range(n + 1)}, q)


# ---------------------------------------------------------------------------
# Rational functions in T

class RatFuncT:
    """numerator / denominator with gcd 1 and monic denominator."""
    __slots__ = ('q', 'num', 'den')

    def __init__(self, num, den=None, reduced=False):
        q = num.q if isinstance(num, PolyT) else infer_q([num], None)
        if not isinstance(num, PolyT):
            num = PolyT({0: num}, q)
        den = PolyT.one(q) if den is None else (den if isinstance(den, PolyT) else PolyT({0: den}, q))
        _check_same_q(num.q, den.q)
        if den.is_zero():
            raise NotInvertibleError('rational function with zero denominator')
        if num.is_zero():
            den = PolyT.one(q)
        elif not reduced:
            num, den = self._cancel(num, den)
        try:
            inv = den.lc().inverse()
        except NotInvertibleError:
            raise DomainError(f'denominator {den.render()} has a non-invertible leading coefficient')
        self.q = q
        self.num = num * inv
        self.den = den * inv

    @staticmethod
    def _cancel(num, den):
        if num.has_x() or den.has_x():
            g = num.gcd(den)
            a, b = num.exact_quotient(g), den.exact_quotient(g)
            if a is None or b is None:
                raise DomainError('could not cancel a common factor exactly')
            return a, b
        g = num.gcd(den)
        if g.degree() == 0:
            return num, den
        lead = g.lc()
        k = max(num.degree(), den.degree()) - g.degree() + 1
        try:
            lead.inverse()
            scale = ScalarSum.one(num.q)
        except NotInvertibleError:
            scale = _power(lead, k)
        a = (num * scale).exact_quotient(g)
        b = (den * scale).exact_quotient(g)
        if a is None or b is None:
            raise DomainError('could not cancel a common factor exactly')
        return a, b

    @classmethod
    def from_factors(cls, num_roots, den_roots, unit=1, q=None):
        """unit * prod(1 - a T) / prod(1 - b T), cancelling equal roots."""
        q = infer_q(list(num_roots) + list(den_roots) + [unit], q)
        top = Counter(Scalar.coerce(r, q) for r in num_roots)
        bottom = Counter(Scalar.coerce(r, q) for r in den_roots)
        common = top & bottom
        top, bottom = top - common, bottom - common
        num = PolyT.from_roots(list(top.elements()), q) * ScalarSum.coerce(unit, q)
        den = PolyT.from_roots(list(bottom.elements()), q)
        return cls(num, den)

    def is_zero(self):
        return self.num.is_zero()

    def _coerce_operand(self, other):
        if isinstance(other, RatFuncT):
            return other
        if isinstance(other, (PolyT, int, Fraction, Scalar, ScalarSum)):
            return RatFuncT(other if isinstance(other, PolyT) else PolyT({0: other}, self.q), reduced=True)
        return None

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return RatFuncT(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return RatFuncT(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncT(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def inverse(self):
        if self.num.is_zero():
            raise NotInvertibleError('zero rational function has no inverse')
        return RatFuncT(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def evaluate(self, value):
        value = ScalarSum.coerce(value, self.q)
        bottom = self.den.evaluate(value)
        if bottom.is_zero():
            raise DomainError(f'pole of {self.render()} at T = {value.render()}')
        return self.num.evaluate(value) * bottom.inverse()

    __call__ = evaluate

    def specialize(self, point):
        return RatFuncT(self.num.specialize(point), self.den.specialize(point))

    def at_inverse(self):
        """self(1/T)."""
        return self.num.at_inverse() / self.den.at_inverse()

    def expand(self, bound):
        """Power series about T = 0, known through T^bound."""
        head = self.den.coefficient(0)
        if head.is_zero():
            raise DomainError(f'{self.render()} has a pole at T = 0')
        inv = head.inverse()
        out = []
        for d in range(bound + 1):
            total = self.num.coefficient(d)
            for j, c in self.den.coeffs:
                if 0 < j <= d:
                    total = total - c * out[d - j]
            out.append(total * inv)
        return TruncSeriesT(out, bound, 0, self.q)

    def __eq__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def render(self):
        if self.den == PolyT.one(self.q):
            return self.num.render()
        return f'({self.num.render()})/({self.den.render()})'

    __str__ = render

    def __repr__(self):
        return f'RatFuncT({self.render()})'


# ---------------------------------------------------------------------------
# Truncated Laurent series in T

class TruncSeriesT:
    """Series sum c_d T^d known exactly for low_degree <= d <= bound."""
    __slots__ = ('q', 'low_degree', 'bound', 'coefficients')

    def __init__(self, coefficients, bound, low_degree=0, q=None):
        values = list(coefficients.items()) if isinstance(coefficients, dict) else \
            [(low_degree + i, c) for i, c in enumerate(coefficients)]
        self.q = infer_q([c for _, c in values], q)
        if bound < low_degree - 1:
            raise DomainError('truncation bound below the lowest degree')
        known = {}
        for d, c in values:
            if d < low_degree:
                raise DomainError(f'coefficient at degree {d} below low_degree {low_degree}')
            if d <= bound:
                known[d] = ScalarSum.coerce(c, self.q)
        self.low_degree = low_degree
        self.bound = bound
        self.coefficients = tuple(known.get(d, ScalarSum.zero(self.q)) for d in range(low_degree, bound + 1))

    @classmethod
    def from_poly(cls, poly, bound):
        low = poly.low_degree() if not poly.is_zero() else 0
        low = min(low, bound + 1) if low is not NEG_INF else 0
        return cls({d: c for d, c in poly.coeffs}, bound, low, poly.q)

    def coefficient(self, d):
        if d > self.bound:
            raise DomainError(f'degree {d} lies beyond the truncation bound {self.bound}')
        if d < self.low_degree:
            return ScalarSum.zero(self.q)
        return self.coefficients[d - self.low_degree]

    def items(self):
        return [(self.low_degree + i, c) for i, c in enumerate(self.coefficients)]

    def valuation(self):
        for d, c in self.items():
            if not c.is_zero():
                return d
        return None

    def __add__(self, other):
        _check_same_q(self.q, other.q)
        low = min(self.low_degree, other.low_degree)
        bound = min(self.bound, other.bound)
        return TruncSeriesT({d: self.coefficient(d) + other.coefficient(d) for d in range(low, bound + 1)},
                            bound, low, self.q)

    def __mul__(self, other):
        if isinstance(other, PolyT):
            return self.mul_poly(other)
        _check_same_q(self.q, other.q)
        low = self.low_degree + other.low_degree
        bound = min(self.bound + other.low_degree, other.bound + self.low_degree)
        out = {}
        for d in range(low, bound + 1):
            total = ScalarSum.zero(self.q)
            for i in range(self.low_degree, d - other.low_degree + 1):
                a = self.coefficient(i)
                if not a.is_zero():
                    total = total + a * other.coefficient(d - i)
            out[d] = total
        return TruncSeriesT(out, bound, low, self.q)

    def mul_poly(self, poly):
        """Product with an exact polynomial; the window moves with its lowest degree."""
        _check_same_q(self.q, poly.q)
        if poly.is_zero():
            return TruncSeriesT({}, self.bound, self.low_degree, self.q)
        shift = poly.low_degree()
        low = self.low_degree + shift
        bound = self.bound + shift
        out = {}
        for d in range(low, bound + 1):
            total = ScalarSum.zero(self.q)
            for j, c in poly.coeffs:
                i = d - j
                if self.low_degree <= i <= self.bound:
                    total = total + c * self.coefficient(i)
            out[d] = total
        return TruncSeriesT(out, bound, low, self.q)

    __rmul__ = mul_poly

    def specialize(self, point):
        return TruncSeriesT({d: c.specialize(point) for d, c in self.items()}, self.bound, self.low_degree, self.q)

    def tail_vanishes(self, start):
        """All coefficients in degrees (start, bound] are zero."""
        return all(c.is_zero() for d, c in self.items() if d > start)

    def truncated_poly(self):
        """The known part as a polynomial (nonnegative degrees only)."""
        if self.low_degree < 0 and any(not c.is_zero() for d, c in self.items() if d < 0):
            raise DomainError('series has negative-degree terms')
        return PolyT({d: c for d, c in self.items() if d >= 0}, self.q)

    def __eq__(self, other):
        if not isinstance(other, TruncSeriesT):
            return NotImplemented
        if self.bound != other.bound:
            return False
        low = min(self.low_degree, other.low_degree)
        return all(self.coefficient(d) == other.coefficient(d) for d in range(low, self.bound + 1))

    def render(self):
        body = PolyT({d: c for d, c in self.items() if d >= 0}, self.q).render() if self.low_degree >= 0 \
            else ' + '.join(f'({c.render()})*T^{d}' for d, c in self.items() if not c.is_zero()) or '0'
        return f'{body} + O(T^{self.bound + 1})'

    __str__ = render

    def __repr__(self):
        return f'TruncSeriesT({self.render()})'
