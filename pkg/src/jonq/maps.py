"""de Jonquieres instances with identity Cremona support.

A standard instance is a pair of coprime homogeneous f, g in k[x1..xn]
with deg g = deg f + 1 = d >= 2, defining the rational map
(f*x1 : ... : f*xn : g).  A generalized instance lives in k[x1..x_{n+1}]
with f and g monoids in the last variable (degree at most one in x_{n+1},
at least one of them involving it).  Only the identity support is
accepted; general Cremona supports are out of scope.

This module also builds the canonical partial column: the column of forms
with [x1 ... xn] * column = p, chosen by sending each term to the slot of
the smallest x-index dividing it.  That rule is deterministic and
reproduces the usual hand computations; a seeded randomized choice is
available for testing that downstream ideals do not depend on the choice.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import oracle
from .errors import (
    DegreeMismatch,
    InternalInvariantViolation,
    MonoidMissingLastVariable,
    NotCoprime,
    NotHomogeneous,
    NotInIdeal,
    NotMonoid,
)
from .poly import GENERALIZED, STANDARD, Polynomial


@dataclass(frozen=True)
class DeJonquieresMap:
    """A validated instance: the map (f*x1 : ... : f*xn : g) of degree d."""

    ring: object
    f: Polynomial
    g: Polynomial
    d: int

    def ideal_generators(self):
        """f*x1, ..., f*xn, g - the n+1 forms defining the map."""
        out = [self.f * self.ring.x_var(j) for j in range(self.ring.n)]
        out.append(self.g)
        return out


@dataclass(frozen=True)
class MonoidDecomposition:
    """p = p0 + p1 * x_{n+1} with p0, p1 free of the last variable."""

    p0: Polynomial
    p1: Polynomial


@dataclass(frozen=True)
class SyzygyColumn:
    """Column of n forms with [x1 ... xn] * entries = the decomposed poly."""

    entries: tuple

    def row_product(self):
        ring = self.entries[0].ring
        out = ring.zero()
        for j, q in enumerate(self.entries):
            out = out + ring.x_var(j) * q
        return out


@dataclass(frozen=True)
class PresentationMatrix:
    """The (n+1) x (C(n,2)+1) presentation: Koszul block plus (dg; -f)."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples


def _check_x_subring_homogeneous(ring, p, name):
    if p.is_zero:
        raise DegreeMismatch(f"{name} must be nonzero")
    deg = None
    for _, m in p.terms:
        xd, yd = m.block_degrees(ring.x_count)
        if yd:
            raise NotHomogeneous(f"{name} must lie in the x-subring")
        if deg is None:
            deg = xd
        elif xd != deg:
            raise NotHomogeneous(f"{name} is not homogeneous")
    return deg


def validate_map(ring, f, g, budget=None):
    """Validate (ring, f, g) and return the instance.

    Degrees and monoid shape are checked directly; coprimality is
    established through the oracle: gcd(f, g) is a unit iff the colon
    ideal (f) : (g) equals (f) in a polynomial ring.
    """
    df = _check_x_subring_homogeneous(ring, f, "f")
    dg = _check_x_subring_homogeneous(ring, g, "g")
    if dg != df + 1:
        raise DegreeMismatch(f"need deg g = deg f + 1; got deg f = {df}, deg g = {dg}")
    if dg < 2:
        raise DegreeMismatch(f"need deg g >= 2; got {dg}")
    if ring.mode == GENERALIZED:
        fs = monoid_split_in(ring, f, "f")
        gs = monoid_split_in(ring, g, "g")
        if fs.p1.is_zero and gs.p1.is_zero:
            raise MonoidMissingLastVariable(
                f"neither f nor g involves x{ring.x_count}"
            )
    if not oracle.coprime_check(f, g, budget):
        raise NotCoprime("gcd(f, g) is not a unit: (f) : (g) exceeds (f)")
    return DeJonquieresMap(ring, f, g, dg)


def monoid_split(p):
    """Split a monoid as p0 + p1*x_{n+1} (generalized rings only)."""
    ring = p.ring
    if ring.mode != GENERALIZED:
        raise ValueError("monoid decomposition needs a generalized-mode ring")
    return monoid_split_in(ring, p, "p")


def monoid_split_in(ring, p, name):
    last = ring.x_count - 1
    p0 = {}
    p1 = {}
    for c, m in p.terms:
        e = m.exponents
        k = e[last]
        if k >= 2:
            raise NotMonoid(
                f"{name} has a term of degree {k} in x{ring.x_count}: not a monoid"
            )
        if k == 0:
            p0[e] = c
        else:
            p1[e[:last] + (0,) + e[last + 1 :]] = c
    return MonoidDecomposition(
        Polynomial.from_dict(ring, p0), Polynomial.from_dict(ring, p1)
    )


def partial_column(p, rng=None):
    """A column dp with [x1 ... xn] * dp = p (dp = 0 for p = 0).

    Canonically each term contributes to the slot of the smallest index
    j <= n with x_j dividing it; passing a seeded rng picks the slot
    uniformly among the dividing indices instead.
    """
    ring = p.ring
    n = ring.n
    slots = [dict() for _ in range(n)]
    for c, m in p.terms:
        e = m.exponents
        candidates = [j for j in range(n) if e[j]]
        if not candidates:
            raise NotInIdeal(f"term {m!r} has no factor among x1..x{n}")
        j = candidates[0] if rng is None else rng.choice(candidates)
        reduced = e[:j] + (e[j] - 1,) + e[j + 1 :]
        slot = slots[j]
        slot[reduced] = ring.field.add(slot.get(reduced, ring.field.coerce(0)), c)
    entries = tuple(Polynomial.from_dict(ring, s) for s in slots)
    return SyzygyColumn(entries)


def presentation_matrix(map_, rng=None):
    """(n+1) x (C(n,2)+1) matrix presenting (f*x1, ..., f*xn, g).

    Columns: the first Koszul differential on x1..xn (pairs (i, j) in
    lexicographic order contribute -x_j in row i and x_i in row j), then
    the column (dg; -f).  The product of the generator row with every
    column is verified to vanish exactly.
    """
    ring = map_.ring
    n = ring.n
    zero = ring.zero()
    cols = []
    for i in range(n):
        for j in range(i + 1, n):
            col = [zero] * (n + 1)
            col[i] = -ring.x_var(j)
            col[j] = ring.x_var(i)
            cols.append(col)
    dg = partial_column(map_.g, rng)
    cols.append(list(dg.entries) + [-map_.f])
    gens = map_.ideal_generators()
    for col in cols:
        acc = zero
        for r in range(n + 1):
            acc = acc + gens[r] * col[r]
        if not acc.is_zero:
            raise InternalInvariantViolation("presentation column is not a syzygy")
    rows = tuple(tuple(col[r] for col in cols) for r in range(n + 1))
    return PresentationMatrix(rows=n + 1, cols=len(cols), entries=rows)


def initial_syzygy_h(map_, rng=None):
    """h = y-row times the last presentation column: sum y_j*(dg)_j - f*y_{n+1}.

    Bihomogeneous of bidegree (d-1, 1) and never zero (the f*y_{n+1} term
    cannot cancel).
    """
    ring = map_.ring
    dg = partial_column(map_.g, rng)
    h = ring.zero()
    for j in range(ring.n):
        h = h + ring.y_var(j) * dg.entries[j]
    h = h - map_.f * ring.y_var(ring.n)
    if h.is_zero:
        raise InternalInvariantViolation("initial syzygy vanished")
    return h


__all__ = [
    "DeJonquieresMap",
    "MonoidDecomposition",
    "SyzygyColumn",
    "PresentationMatrix",
    "validate_map",
    "monoid_split",
    "partial_column",
    "presentation_matrix",
    "initial_syzygy_h",
    "STANDARD",
    "GENERALIZED",
]
