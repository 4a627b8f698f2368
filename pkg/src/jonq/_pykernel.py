"""Pure-Python reduction kernel.

This is the fallback engine behind the Groebner machinery, and the only
engine for rational coefficients.  A raw polynomial is a tuple of
(key, exps, coeff) triples sorted strictly descending by key, where key
is the packed order key of `_orders`.  Coefficients are ints in 0..p-1
when p is set and Fractions otherwise.

normal_form keeps the working polynomial in a dict keyed by exponent
tuple plus a lazy max-heap of candidate keys, so each reduction step
costs O(len(reducer) * log T) instead of re-scanning every term.

The kernel counts monomial operations in `self.ops` and raises
KernelBudgetExceeded once the budget is crossed; callers translate that
into ResourceLimit with context.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from ._orders import order_key
from .errors import KernelBudgetExceeded


class Kernel:
    def __init__(self, nvars, order, p=None, ops_budget=None):
        self.nvars = nvars
        self.order = order
        self.p = p
        self.ops = 0
        self.ops_budget = ops_budget
        self._keys = {}

    # -- bookkeeping

    def _key(self, exps):
        k = self._keys.get(exps)
        if k is None:
            k = order_key(self.order, exps)
            self._keys[exps] = k
        return k

    def _charge(self, n):
        self.ops += n
        if self.ops_budget is not None and self.ops > self.ops_budget:
            raise KernelBudgetExceeded(
                f"monomial-operation budget of {self.ops_budget} exceeded"
            )

    # -- construction / inspection

    def poly(self, terms):
        """Canonical raw polynomial from (exps, coeff) pairs."""
        acc = {}
        p = self.p
        for exps, c in terms:
            exps = tuple(exps)
            if p is None:
                c = Fraction(c)
            else:
                c = int(c) % p
            prev = acc.get(exps)
            c = c if prev is None else prev + c
            if p is not None:
                c %= p
            acc[exps] = c
        out = [(self._key(e), e, c) for e, c in acc.items() if c != 0]
        out.sort(reverse=True)
        return tuple(out)

    def terms(self, h):
        return [(e, c) for _, e, c in h]

    def is_zero(self, h):
        return not h

    def num_terms(self, h):
        return len(h)

    def lead_exps(self, h):
        return h[0][1]

    def lead_coeff(self, h):
        return h[0][2]

    # -- arithmetic

    def monic(self, h):
        if not h:
            return h
        lc = h[0][2]
        if lc == 1:
            return h
        if self.p is None:
            inv = Fraction(1) / lc
            return tuple((k, e, c * inv) for k, e, c in h)
        inv = pow(lc, self.p - 2, self.p)
        return tuple((k, e, c * inv % self.p) for k, e, c in h)

    def add(self, a, b):
        return self._combine(a, b, 1)

    def sub(self, a, b):
        return self._combine(a, b, -1)

    def _combine(self, a, b, sgn):
        acc = {e: c for _, e, c in a}
        p = self.p
        for _, e, c in b:
            prev = acc.get(e, 0)
            c = prev + c if sgn > 0 else prev - c
            if p is not None:
                c %= p
            acc[e] = c
        self._charge(len(a) + len(b))
        out = [(self._key(e), e, c) for e, c in acc.items() if c != 0]
        out.sort(reverse=True)
        return tuple(out)

    def mul_term(self, h, exps, coeff):
        p = self.p
        if p is None:
            coeff = Fraction(coeff)
        else:
            coeff = int(coeff) % p
        if coeff == 0 or not h:
            return ()
        self._charge(len(h))
        out = []
        for _, e, c in h:
            e2 = tuple(x + y for x, y in zip(e, exps))
            c2 = c * coeff
            if p is not None:
                c2 %= p
            out.append((self._key(e2), e2, c2))
        out.sort(reverse=True)
        return tuple(out)

    def spoly(self, f, g):
        """S-polynomial; cancels the lcm of the two lead monomials."""
        ef, eg = f[0][1], g[0][1]
        lcm = tuple(a if a >= b else b for a, b in zip(ef, eg))
        uf = tuple(a - b for a, b in zip(lcm, ef))
        ug = tuple(a - b for a, b in zip(lcm, eg))
        if self.p is None:
            cf = Fraction(1) / f[0][2]
            cg = Fraction(1) / g[0][2]
        else:
            cf = pow(f[0][2], self.p - 2, self.p)
            cg = pow(g[0][2], self.p - 2, self.p)
        return self.sub(self.mul_term(f, uf, cf), self.mul_term(g, ug, cg))

    # -- reduction

    def normal_form(self, h, basis):
        """Full remainder of h modulo the (monic) basis list.

        The reducer for a term is the first basis element in list order
        whose lead monomial divides it; the compiled kernel uses the same
        rule, so both engines produce identical remainders.
        """
        if not h or not basis:
            return h
        p = self.p
        leads = [g[0][1] for g in basis]
        work = {}
        heap = []
        for k, e, c in h:
            work[e] = c
            heap.append((-k, e))
        heapq.heapify(heap)
        out = []
        # invariant: e is a key of work  <=>  exactly one pending heap entry
        # for e, so contributions to a monomial are never lost or doubled.
        while heap:
            nk, e = heapq.heappop(heap)
            c = work.get(e)
            if not c:
                work.pop(e, None)
                continue
            red = None
            self._charge(len(leads))
            for gi, le in enumerate(leads):
                ok = True
                for a, b in zip(le, e):
                    if a > b:
                        ok = False
                        break
                if ok:
                    red = basis[gi]
                    break
            if red is None:
                del work[e]
                out.append((-nk, e, c))
                continue
            # work -= c * x^(e - lead(red)) * red; red is monic so the
            # lead terms cancel exactly.
            del work[e]
            q = tuple(a - b for a, b in zip(e, red[0][1]))
            self._charge(len(red))
            for k2, e2, c2 in red[1:]:
                te = tuple(a + b for a, b in zip(e2, q))
                delta = c * c2
                prev = work.get(te)
                if prev is None:
                    nc = -delta if p is None else -delta % p
                    if nc:
                        work[te] = nc
                        heapq.heappush(heap, (-self._key(te), te))
                else:
                    nc = prev - delta
                    if p is not None:
                        nc %= p
                    work[te] = nc
        return tuple(out)
