"""Exact multivariate polynomials with an x/y bigrading.

The working rings are k[x1..x_X, y1..y_Y] where k is Q or a prime field
F_p, X is the size of the x-block and Y = n + 1 the size of the y-block.
Exponent vectors are dense tuples, x-block first.  A polynomial is an
immutable, canonically sorted tuple of (coefficient, Monomial) pairs:
strictly descending grevlex, no zero coefficients, no duplicates.  Equal
polynomials therefore have identical term lists, and printing is a
bijection on canonical forms.

Coefficients are `fractions.Fraction` over Q and ints in 0..p-1 over F_p.
All operations are pure and values are immutable, so sharing across
threads is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from ._orders import GREVLEX, order_key
from .errors import (
    CoefficientError,
    MixedRingError,
    PolyParseError,
    UnknownVariableError,
)

# -------------------------------------------------------------- fields

ZERO_POLYNOMIAL = "zero"
NOT_BIHOMOGENEOUS = "not bihomogeneous"


class Rationals:
    """The field Q. Coefficients are Fraction instances."""

    p = None

    def coerce(self, v):
        return Fraction(v)

    def from_fraction(self, num, den):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return Fraction(num, den)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return Fraction(1) / a

    def format_coeff(self, c):
        """(sign, magnitude string) with magnitude like '3' or '5/2'."""
        return (-1 if c < 0 else 1), str(abs(c))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field F_p for a prime p < 2**31. Coefficients are ints in 0..p-1."""

    def __init__(self, p):
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 1 << 31:
            raise ValueError("prime moduli must be below 2**31")
        self.p = p

    def coerce(self, v):
        if isinstance(v, Fraction):
            return self.from_fraction(v.numerator, v.denominator)
        return int(v) % self.p

    def from_fraction(self, num, den):
        den %= self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return num * pow(den, self.p - 2, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def format_coeff(self, c):
        # balanced representative: 'p-1' prints as '-1'
        c %= self.p
        if c > self.p // 2:
            return -1, str(self.p - c)
        return 1, str(c)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p):
    return PrimeField(p)


# -------------------------------------------------------------- ring spec

STANDARD = "standard"
GENERALIZED = "generalized"


@dataclass(frozen=True)
class RingSpec:
    """The ambient bigraded ring k[x1..x_X, y1..y_{n+1}].

    `n` is the size of the Cremona block; the x-block has n variables in
    standard mode and n+1 in generalized mode, the y-block always n+1.
    """

    mode: str
    n: int
    field: Rationals | PrimeField = QQ

    def __post_init__(self):
        if self.mode not in (STANDARD, GENERALIZED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 2:
            raise ValueError("need n >= 2")

    @property
    def x_count(self):
        return self.n if self.mode == STANDARD else self.n + 1

    @property
    def y_count(self):
        return self.n + 1

    @property
    def nvars(self):
        return self.x_count + self.y_count

    def var_name(self, i):
        xc = self.x_count
        return f"x{i + 1}" if i < xc else f"y{i - xc + 1}"

    def var_index(self, name):
        kind, num = name[0], name[1:]
        i = int(num) - 1
        if kind == "x" and 0 <= i < self.x_count:
            return i
        if kind == "y" and 0 <= i < self.y_count:
            return self.x_count + i
        raise KeyError(name)

    def variable(self, i):
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial._make(self, ((self.field.coerce(1), Monomial(tuple(exps))),))

    def x_var(self, j):
        """x_{j+1} as a polynomial, 0-based j."""
        return self.variable(j)

    def y_var(self, j):
        """y_{j+1} as a polynomial, 0-based j."""
        return self.variable(self.x_count + j)

    def zero(self):
        return Polynomial._make(self, ())

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = self.field.coerce(c)
        if c == 0:
            return self.zero()
        return Polynomial._make(self, ((c, Monomial((0,) * self.nvars)),))

    def poly(self, text):
        """Parse shortcut: ring.poly('x1^2*y2 - 3')."""
        return parse_poly(text, self)


# -------------------------------------------------------------- monomials


class Monomial:
    """Dense exponent vector over the ring's variables."""

    __slots__ = ("exponents",)

    def __init__(self, exponents):
        object.__setattr__(self, "exponents", tuple(exponents))

    def __setattr__(self, *a):
        raise AttributeError("Monomial is immutable")

    @property
    def degree(self):
        return sum(self.exponents)

    def block_degrees(self, x_count):
        e = self.exponents
        xd = sum(e[:x_count])
        return xd, sum(e) - xd

    def mul(self, other):
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other):
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def divide(self, other):
        """self / other; requires other | self."""
        out = tuple(a - b for a, b in zip(self.exponents, other.exponents))
        if any(e < 0 for e in out):
            raise ValueError("not divisible")
        return Monomial(out)

    def lcm(self, other):
        return Monomial(tuple(max(a, b) for a, b in zip(self.exponents, other.exponents)))

    def is_one(self):
        return not any(self.exponents)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"Monomial{self.exponents}"


class Bidegree(NamedTuple):
    xdeg: int
    ydeg: int

    def __str__(self):
        return f"({self.xdeg},{self.ydeg})"


# -------------------------------------------------------------- polynomials


class Polynomial:
    """Immutable canonical polynomial; construct via RingSpec or from_dict."""

    __slots__ = ("ring", "terms")

    def __init__(self, *a, **kw):
        raise TypeError("use RingSpec helpers, parse_poly or Polynomial.from_dict")

    @classmethod
    def _make(cls, ring, terms):
        self = object.__new__(cls)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)
        return self

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def from_dict(cls, ring, coeffs):
        """Build from {exponent tuple: coefficient}; canonicalizes."""
        items = []
        for exps, c in coeffs.items():
            c = ring.field.coerce(c)
            if c != 0:
                items.append((order_key(GREVLEX, exps), exps, c))
        items.sort(reverse=True)
        return cls._make(ring, tuple((c, Monomial(e)) for _, e, c in items))

    # -- inspection

    @property
    def is_zero(self):
        return not self.terms

    @property
    def lead_term(self):
        """(coefficient, Monomial) of the grevlex-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no lead term")
        return self.terms[0]

    @property
    def total_degree(self):
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(m.degree for _, m in self.terms)

    def coefficient(self, monomial):
        for c, m in self.terms:
            if m == monomial:
                return c
        return self.ring.field.coerce(0)

    def exps_dict(self):
        return {m.exponents: c for c, m in self.terms}

    def __len__(self):
        return len(self.terms)

    # -- arithmetic

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise MixedRingError(f"mixed rings: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check_ring(other)
        fld = self.ring.field
        acc = {m.exponents: c for c, m in self.terms}
        for c, m in other.terms:
            e = m.exponents
            prev = acc.get(e)
            acc[e] = c if prev is None else fld.add(prev, c)
        return Polynomial.from_dict(self.ring, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        fld = self.ring.field
        return Polynomial._make(self.ring, tuple((fld.neg(c), m) for c, m in self.terms))

    def __mul__(self, other):
        self._check_ring(other)
        fld = self.ring.field
        acc = {}
        for c1, m1 in self.terms:
            e1 = m1.exponents
            for c2, m2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, m2.exponents))
                c = fld.mul(c1, c2)
                prev = acc.get(e)
                acc[e] = c if prev is None else fld.add(prev, c)
        return Polynomial.from_dict(self.ring, acc)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c):
        c = self.ring.field.coerce(c)
        if c == 0:
            return self.ring.zero()
        fld = self.ring.field
        return Polynomial._make(self.ring, tuple((fld.mul(c, tc), m) for tc, m in self.terms))

    def mul_monomial(self, monomial, c=1):
        return self * Polynomial.from_dict(self.ring, {monomial.exponents: c})

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"<{format_poly(self)}>"


def arith(a, b, op):
    """Ring arithmetic dispatch: op in {'add','sub','mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# -------------------------------------------------------------- bidegree


def bidegree_of(p):
    """Bidegree (x-degree, y-degree) of a bihomogeneous polynomial.

    Returns the string constant ZERO_POLYNOMIAL for 0 and NOT_BIHOMOGENEOUS
    when term bidegrees disagree; neither case is an error.
    """
    if p.is_zero:
        return ZERO_POLYNOMIAL
    xc = p.ring.x_count
    first = p.terms[0][1].block_degrees(xc)
    for _, m in p.terms[1:]:
        if m.block_degrees(xc) != first:
            return NOT_BIHOMOGENEOUS
    return Bidegree(*first)


# -------------------------------------------------------------- substitution


@dataclass(frozen=True)
class Substitution:
    """y_i -> images[i-1]; x-variables map to themselves.

    The images of the Rees map are f*x_1, ..., f*x_n, g *without* the Rees
    parameter t: every polynomial this package tests for membership in the
    Rees kernel is bihomogeneous, and a bihomogeneous p vanishes under
    y_i -> f_i*t iff it vanishes under y_i -> f_i (the substituted value
    just picks up a factor t^ydeg).  Dropping t keeps the ring small.
    """

    ring: RingSpec
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.ring.y_count:
            raise ValueError("need one image per y-variable")
        for q in self.images:
            if q.ring != self.ring:
                raise MixedRingError("images must live in the same ring")


def rees_substitution(ring, f, g):
    """The kernel test substitution y_j -> f*x_j (j <= n), y_{n+1} -> g."""
    images = [f * ring.x_var(j) for j in range(ring.n)]
    images.append(g)
    return Substitution(ring, tuple(images))


def substitute(p, s):
    """Image of p under s (exact; ring homomorphism fixing the x-block)."""
    ring = p.ring
    if ring != s.ring:
        raise MixedRingError("substitution ring mismatch")
    xc = ring.x_count
    out = ring.zero()
    for c, m in p.terms:
        e = m.exponents
        part = Polynomial.from_dict(ring, {e[:xc] + (0,) * ring.y_count: c})
        for j in range(ring.y_count):
            k = e[xc + j]
            if k:
                part = part * s.images[j] ** k
        out = out + part
    return out


# -------------------------------------------------------------- printing


def format_poly(p):
    """Canonical string; round-trips through parse_poly.

    Terms come out in descending grevlex.  Multiplication and powers are
    always explicit ('*', '^'); F_p coefficients print as balanced
    representatives so that p-1 reads '-1'.
    """
    if p.is_zero:
        return "0"
    ring = p.ring
    pieces = []
    for i, (c, m) in enumerate(p.terms):
        sign, mag = ring.field.format_coeff(c)
        body = _format_term(ring, mag, m)
        if i == 0:
            pieces.append(body if sign > 0 else "-" + body)
        else:
            pieces.append((" + " if sign > 0 else " - ") + body)
    return "".join(pieces)


def _format_term(ring, mag, m):
    factors = []
    for i, e in enumerate(m.exponents):
        if e == 1:
            factors.append(ring.var_name(i))
        elif e > 1:
            factors.append(f"{ring.var_name(i)}^{e}")
    if not factors:
        return mag
    mono = "*".join(factors)
    if mag == "1":
        return mono
    return f"{mag}*{mono}"


# -------------------------------------------------------------- parsing


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.toks = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("nat", text[i:j], i))
                i = j
            elif ch in "xy":
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise PolyParseError(f"expected digits after {ch!r}", i)
                self.toks.append(("var", text[i:j], i))
                i = j
            elif ch in "+-*/^()":
                self.toks.append((ch, ch, i))
                i += 1
            else:
                raise PolyParseError(f"unexpected character {ch!r}", i)
        self.toks.append(("end", "", n))
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def next(self):
        t = self.toks[self.k]
        self.k += 1
        return t


def parse_poly(text, ring):
    """Parse polynomial text in the canonical grammar.

    expr   := [sign] term { sign term }
    term   := factor { '*' factor }
    factor := coeff | var | var '^' nat | '(' expr ')'
    coeff  := nat [ '/' nat ]

    Implicit multiplication is rejected; a leading sign is allowed so the
    printer's output always re-parses.
    """
    toks = _Tokens(text)
    p = _parse_expr(toks, ring)
    kind, _, pos = toks.peek()
    if kind != "end":
        raise PolyParseError("trailing input", pos)
    return p


def _parse_expr(toks, ring):
    kind, _, _ = toks.peek()
    negate = False
    if kind in "+-":
        toks.next()
        negate = kind == "-"
    acc = _parse_term(toks, ring)
    if negate:
        acc = -acc
    while True:
        kind, _, _ = toks.peek()
        if kind not in "+-":
            return acc
        toks.next()
        t = _parse_term(toks, ring)
        acc = acc + t if kind == "+" else acc - t


def _parse_term(toks, ring):
    acc = _parse_factor(toks, ring)
    while toks.peek()[0] == "*":
        toks.next()
        acc = acc * _parse_factor(toks, ring)
    return acc


def _parse_factor(toks, ring):
    kind, val, pos = toks.next()
    if kind == "nat":
        num = int(val)
        if toks.peek()[0] == "/":
            toks.next()
            k2, v2, p2 = toks.next()
            if k2 != "nat":
                raise PolyParseError("expected denominator", p2)
            try:
                c = ring.field.from_fraction(num, int(v2))
            except ZeroDivisionError as exc:
                raise CoefficientError(str(exc), p2) from None
            return ring.constant(c)
        return ring.constant(num)
    if kind == "var":
        try:
            i = ring.var_index(val)
        except KeyError:
            raise UnknownVariableError(f"unknown variable {val!r}", pos) from None
        exp = 1
        if toks.peek()[0] == "^":
            toks.next()
            k2, v2, p2 = toks.next()
            if k2 != "nat":
                raise PolyParseError("expected exponent", p2)
            exp = int(v2)
        exps = [0] * ring.nvars
        exps[i] = exp
        return Polynomial.from_dict(ring, {tuple(exps): 1})
    if kind == "(":
        p = _parse_expr(toks, ring)
        k2, _, p2 = toks.next()
        if k2 != ")":
            raise PolyParseError("expected ')'", p2)
        return p
    raise PolyParseError(f"unexpected token {val!r}" if val else "unexpected end of input", pos)
