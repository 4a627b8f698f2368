"""Independent Groebner-basis engine: membership, equality, colon,
saturation, elimination and Krull dimension at desk scale.

The driver is classic Buchberger with the Gebauer-Moeller pair-elimination
criteria and the normal selection strategy (smallest lcm first).  Pair
management lives here in Python; the per-term reduction work is delegated
to a kernel chosen by `kernel.kernel_for` (compiled for F_p when built,
pure Python otherwise), both of which follow the same deterministic
reduction rule.  Reduced bases are unique per (ideal, order), so output is
bit-identical across kernels and runs.

Ideal intersections use the single auxiliary variable trick
a cap b = (w*a + (1-w)*b) cap k[x,y] with w prepended to the exponent
vectors and a block order eliminating it; colon ideals divide the
intersection termwise; saturation iterates the colon to a fixpoint.
Budgets bound pair reductions and monomial operations per call and raise
ResourceLimit instead of hanging.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from . import _orders
from ._orders import GREVLEX, coprime, divides, mono_lcm, order_key
from .errors import (
    InternalInvariantViolation,
    KernelBudgetExceeded,
    KernelCapacityError,
    MixedRingError,
    NotPrincipal,
    ResourceLimit,
)
from .kernel import kernel_for, pure_kernel
from .poly import Polynomial

DEFAULT_MAX_PAIRS = 10**6
DEFAULT_MAX_OPS = 10**7


@dataclass(frozen=True)
class Budget:
    """Per-call resource limits for the engine."""

    max_pairs: int = DEFAULT_MAX_PAIRS
    max_ops: int = DEFAULT_MAX_OPS


@dataclass(frozen=True)
class TermOrder:
    """Monomial order on a ring: grevlex, lex, or the x-eliminating block
    order (x-block strictly above the y-block, grevlex inside each)."""

    kind: str = "grevlex"

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block_eliminate_x"):
            raise ValueError(f"unknown order kind {self.kind!r}")

    def internal(self, ring):
        if self.kind == "grevlex":
            return _orders.GREVLEX
        if self.kind == "lex":
            return _orders.LEX
        return _orders.block(ring.x_count)


GREVLEX_ORDER = TermOrder("grevlex")
LEX_ORDER = TermOrder("lex")
ELIMINATE_X = TermOrder("block_eliminate_x")


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced basis: monic leads, pairwise indivisible, tails reduced."""

    ring: object
    order: TermOrder
    basis: tuple

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


class IdealHandle:
    """Generators plus lazily cached reduced bases, one per order kind.

    The cache is written once per order and read-only afterwards, so
    concurrent readers are safe once a basis exists.
    """

    def __init__(self, ring, gens, label=None):
        self.ring = ring
        self.label = label
        self.gens = tuple(g for g in gens if not g.is_zero)
        for g in self.gens:
            if g.ring != ring:
                raise MixedRingError("generator outside the handle's ring")
        self._cache = {}

    def groebner_basis(self, order=GREVLEX_ORDER, budget=None):
        gb = self._cache.get(order.kind)
        if gb is None:
            gb = buchberger(self, order, budget)
            self._cache[order.kind] = gb
        return gb

    def contains(self, p, budget=None):
        return normal_form(p, self.groebner_basis(budget=budget)).is_zero

    def __repr__(self):
        name = self.label or "ideal"
        return f"<{name}: {len(self.gens)} generators>"


def as_handle(obj, ring=None):
    """Coerce GeneratorSet / IdealHandle / iterable of Polynomial."""
    if isinstance(obj, IdealHandle):
        return obj
    if hasattr(obj, "gens") and hasattr(obj, "ring"):
        return IdealHandle(obj.ring, obj.gens, getattr(obj, "label", None))
    gens = list(obj)
    if ring is None:
        if not gens:
            raise ValueError("cannot infer the ring of an empty generator list")
        ring = gens[0].ring
    return IdealHandle(ring, gens)


# ------------------------------------------------------------------ raw layer
#
# Raw polynomials are lists of (exps tuple, coeff) in an explicit number of
# variables; this layer is shared by the public API and by the internal
# auxiliary-variable constructions, which work in rings the user never sees.


def _poly_to_raw(p):
    return [(m.exponents, c) for c, m in p.terms]


def _raw_to_poly(ring, terms):
    acc = {}
    for e, c in terms:
        acc[e] = c
    return Polynomial.from_dict(ring, acc)


def _make_kernel(nvars, order, p, budget):
    return kernel_for(nvars, order, p, budget.max_ops)


def _gb_raw(raw_gens, nvars, order, p, budget):
    """Reduced Groebner basis of raw generators; returns raw term lists."""
    kern = _make_kernel(nvars, order, p, budget)
    try:
        basis = _gb_loop(kern, raw_gens, budget)
    except KernelCapacityError:
        kern = pure_kernel(nvars, order, p, budget.max_ops)
        basis = _gb_loop(kern, raw_gens, budget)
    except KernelBudgetExceeded as exc:
        raise ResourceLimit(f"groebner basis: {exc}") from None
    return [kern.terms(h) for h in basis]


def _gb_loop(kern, raw_gens, budget):
    try:
        return _buchberger_core(kern, raw_gens, budget)
    except KernelBudgetExceeded as exc:
        raise ResourceLimit(f"groebner basis: {exc}") from None


def _buchberger_core(kern, raw_gens, budget):
    order = kern.order
    G = []
    leads = []
    alive = set()
    heap = []

    def lcm_key(i, j):
        return order_key(order, mono_lcm(leads[i], leads[j]))

    def update(t):
        """Gebauer-Moeller UPDATE: prune new and old pairs for basis elem t."""
        newlead = leads[t]
        cand = list(range(t))
        lcms = {i: mono_lcm(leads[i], newlead) for i in cand}
        kept = []
        pending = set(cand)
        for i in cand:
            pending.discard(i)
            li = lcms[i]
            if coprime(leads[i], newlead):
                kept.append(i)
                continue
            if any(divides(lcms[j], li) for j in pending) or any(
                divides(lcms[j], li) for j in kept
            ):
                continue
            kept.append(i)
        survivors = [i for i in kept if not coprime(leads[i], newlead)]
        for (i, j) in sorted(alive):
            lij = mono_lcm(leads[i], leads[j])
            if (
                divides(newlead, lij)
                and mono_lcm(leads[i], newlead) != lij
                and mono_lcm(leads[j], newlead) != lij
            ):
                alive.discard((i, j))
        for i in survivors:
            alive.add((i, t))
            heapq.heappush(heap, (order_key(order, lcms[i]), i, t))

    for ts in raw_gens:
        h = kern.poly(ts)
        if kern.is_zero(h):
            continue
        h = kern.normal_form(h, G)
        if kern.is_zero(h):
            continue
        G.append(kern.monic(h))
        leads.append(kern.lead_exps(G[-1]))
        update(len(G) - 1)

    pairs_done = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in alive:
            continue
        alive.discard((i, j))
        pairs_done += 1
        if pairs_done > budget.max_pairs:
            raise ResourceLimit(f"pair-reduction budget of {budget.max_pairs} exceeded")
        s = kern.spoly(G[i], G[j])
        r = kern.normal_form(s, G)
        if kern.is_zero(r):
            continue
        G.append(kern.monic(r))
        leads.append(kern.lead_exps(G[-1]))
        update(len(G) - 1)

    return _reduce_basis(kern, G, leads)


def _reduce_basis(kern, G, leads):
    """Minimalize leads, then tail-reduce to the unique reduced basis."""
    if not G:
        return []
    order = [i for i in range(len(G))]
    order.sort(key=lambda i: order_key(kern.order, leads[i]))
    kept = []
    for i in order:
        if not any(divides(leads[k], leads[i]) for k in kept):
            kept.append(i)
    basis = [G[i] for i in kept]
    for _ in range(64):
        changed = False
        for idx in range(len(basis)):
            others = basis[:idx] + basis[idx + 1 :]
            r = kern.monic(kern.normal_form(basis[idx], others))
            if r != basis[idx]:
                basis[idx] = r
                changed = True
        if not changed:
            break
    else:  # pragma: no cover - interreduction always terminates quickly
        raise InternalInvariantViolation("interreduction did not stabilize")
    basis.sort(key=lambda h: order_key(kern.order, kern.lead_exps(h)), reverse=True)
    return basis


def _nf_raw(pts, basis_raw, nvars, order, p, budget):
    kern = _make_kernel(nvars, order, p, budget)
    try:
        h = kern.normal_form(kern.poly(pts), [kern.poly(b) for b in basis_raw])
    except KernelCapacityError:
        kern = pure_kernel(nvars, order, p, budget.max_ops)
        h = kern.normal_form(kern.poly(pts), [kern.poly(b) for b in basis_raw])
    except KernelBudgetExceeded as exc:
        raise ResourceLimit(f"normal form: {exc}") from None
    return kern.terms(h)


def _exact_div_raw(kern, h, g):
    """h / g when g (monic) divides h exactly."""
    out = []
    while not kern.is_zero(h):
        e = kern.lead_exps(h)
        c = kern.lead_coeff(h)
        ge = kern.lead_exps(g)
        q = tuple(a - b for a, b in zip(e, ge))
        if any(v < 0 for v in q):
            raise InternalInvariantViolation("termwise division left a remainder")
        out.append((q, c))
        h = kern.sub(h, kern.mul_term(g, q, c))
    return kern.poly(out)


def _with_w(ts, w):
    return [((w,) + e, c) for e, c in ts]


def _one_minus_w_times(ts, p):
    neg = (lambda c: -c) if p is None else (lambda c: (-c) % p)
    return [((0,) + e, c) for e, c in ts] + [((1,) + e, neg(c)) for e, c in ts]


def _intersect_raw(A, B, nvars, p, budget):
    """A cap B via the auxiliary variable w = variable 0 of a block order."""
    gens = [_with_w(ts, 1) for ts in A]
    gens += [_one_minus_w_times(ts, p) for ts in B]
    gb = _gb_raw(gens, nvars + 1, _orders.block(1), p, budget)
    out = []
    for ts in gb:
        if all(e[0] == 0 for e, _ in ts):
            out.append([(e[1:], c) for e, c in ts])
    return out


def _colon_by_poly_raw(A, gts, nvars, p, budget):
    """(A : g) = (A cap (g)) divided termwise by g."""
    inter = _intersect_raw(A, [gts], nvars, p, budget)
    kern = _make_kernel(nvars, GREVLEX, p, budget)
    g = kern.monic(kern.poly(gts))
    try:
        return [kern.terms(_exact_div_raw(kern, kern.poly(ts), g)) for ts in inter]
    except KernelCapacityError:
        kern = pure_kernel(nvars, GREVLEX, p, budget.max_ops)
        g = kern.monic(kern.poly(gts))
        return [kern.terms(_exact_div_raw(kern, kern.poly(ts), g)) for ts in inter]


def _colon_raw(A, B_gens, nvars, p, budget):
    acc = None
    for gts in B_gens:
        if not gts:
            continue
        cg = _colon_by_poly_raw(A, gts, nvars, p, budget)
        acc = cg if acc is None else _intersect_raw(acc, cg, nvars, p, budget)
    if acc is None:
        # colon by the zero ideal is the unit ideal
        return [[((0,) * nvars, 1)]]
    return acc


# ------------------------------------------------------------------ public API


def buchberger(gens, order=GREVLEX_ORDER, budget=None, ring=None):
    """Reduced Groebner basis of the given generators under `order`."""
    budget = budget or Budget()
    handle = as_handle(gens, ring)
    raw = [_poly_to_raw(g) for g in handle.gens]
    basis_raw = _gb_raw(
        raw, handle.ring.nvars, order.internal(handle.ring), handle.ring.field.p, budget
    )
    basis = tuple(_raw_to_poly(handle.ring, ts) for ts in basis_raw)
    return GroebnerBasis(handle.ring, order, basis)


def normal_form(p, gb, budget=None):
    """Remainder of p modulo gb; zero iff p lies in the ideal."""
    budget = budget or Budget()
    ring = gb.ring
    if p.ring != ring:
        raise MixedRingError("polynomial outside the basis ring")
    out = _nf_raw(
        _poly_to_raw(p),
        [_poly_to_raw(b) for b in gb.basis],
        ring.nvars,
        gb.order.internal(ring),
        ring.field.p,
        budget,
    )
    return _raw_to_poly(ring, out)


def ideal_equality(a, b, budget=None):
    """Mutual membership of generators via both reduced bases."""
    a = as_handle(a)
    b = as_handle(b)
    if a.ring != b.ring:
        raise MixedRingError("ideals live in different rings")
    gb_a = a.groebner_basis(budget=budget)
    gb_b = b.groebner_basis(budget=budget)
    return all(normal_form(g, gb_b, budget).is_zero for g in a.gens) and all(
        normal_form(g, gb_a, budget).is_zero for g in b.gens
    )


def colon_ideal(a, b, budget=None):
    """(a : b), intersecting (a : g) over the generators g of b."""
    budget = budget or Budget()
    a = as_handle(a)
    b = as_handle(b)
    if a.ring != b.ring:
        raise MixedRingError("ideals live in different rings")
    ring = a.ring
    raw = _colon_raw(
        [_poly_to_raw(g) for g in a.gens],
        [_poly_to_raw(g) for g in b.gens],
        ring.nvars,
        ring.field.p,
        budget,
    )
    return IdealHandle(ring, [_raw_to_poly(ring, ts) for ts in raw])


def saturate(a, b, budget=None):
    """(saturation of a by b, steps): colon until two iterates agree.

    The step count is the number of strict colon enlargements observed,
    i.e. the smallest k with a : b^k = a : b^(k+1).
    """
    cur = as_handle(a)
    b = as_handle(b)
    steps = 0
    while True:
        nxt = colon_ideal(cur, b, budget)
        if ideal_equality(nxt, cur, budget):
            return cur, steps
        cur = nxt
        steps += 1
        if steps > 64:
            raise ResourceLimit("saturation did not stabilize within 64 colons")


def eliminate_x(a, budget=None):
    """Contraction of `a` to the y-subring via the x-eliminating block order."""
    a = as_handle(a)
    gb = a.groebner_basis(ELIMINATE_X, budget)
    xc = a.ring.x_count
    out = []
    for g in gb.basis:
        lead = g.lead_term[1]
        if sum(lead.exponents[:xc]) == 0:
            out.append(g)
    return IdealHandle(a.ring, out)


def implicitize_elimination(map_, budget=None):
    """Implicit equation by plain elimination of the x-variables from the
    parameterization's graph ideal; independent of the downgrading route.

    All generators of the map's ideal share one degree, so the graph ideal
    can be written without a separate Rees parameter: eliminating x from
    (y_j - f*x_j, y_{n+1} - g) contracts onto the homogeneous ideal of the
    image cone, which is principal for these maps.  The generator is
    returned monic under grevlex.
    """
    ring = map_.ring
    if ring.mode != "standard":
        raise ValueError("elimination implicitization applies to standard mode only")
    gens = [ring.y_var(j) - map_.f * ring.x_var(j) for j in range(ring.n)]
    gens.append(ring.y_var(ring.n) - map_.g)
    elim = eliminate_x(IdealHandle(ring, gens, "graph"), budget)
    if len(elim.gens) != 1:
        raise NotPrincipal(
            f"elimination produced {len(elim.gens)} generators; expected a hypersurface"
        )
    g = elim.gens[0]
    lc = g.lead_term[0]
    return g.scale(ring.field.inv(lc))


def coprime_check(f, g, budget=None):
    """True iff gcd(f, g) is a unit, via the colon test (f) : (g) = (f).

    In a polynomial ring (f) : (g) = (f / gcd(f, g)), so the colon equals
    (f) exactly when the gcd is a unit.  Both inputs must be free of
    y-variables; the computation runs in the smaller x-subring.
    """
    budget = budget or Budget()
    ring = f.ring
    xc = ring.x_count
    p = ring.field.p
    fts = [(m.exponents[:xc], c) for c, m in f.terms]
    gts = [(m.exponents[:xc], c) for c, m in g.terms]
    colon = _colon_raw([fts], [gts], xc, p, budget)
    f_basis = _gb_raw([fts], xc, GREVLEX, p, budget)
    # (f) is always contained in the colon, so only one inclusion matters
    return all(not _nf_raw(ts, f_basis, xc, GREVLEX, p, budget) for ts in colon)


def krull_dimension(a, budget=None):
    """Dimension of the quotient by `a` from the initial ideal: the size of
    the largest variable subset S containing no lead-monomial support."""
    a = as_handle(a)
    gb = a.groebner_basis(budget=budget)
    nv = a.ring.nvars
    supports = []
    for g in gb.basis:
        supp = frozenset(i for i, e in enumerate(g.lead_term[1].exponents) if e)
        if not supp:
            raise ValueError("unit ideal: Krull dimension undefined")
        supports.append(supp)
    best = 0
    full = (1 << nv) - 1
    masks = [sum(1 << i for i in s) for s in supports]
    for subset in range(full, -1, -1):
        size = subset.bit_count()
        if size <= best:
            continue
        if all(mask & ~subset for mask in masks):
            best = size
    return best
