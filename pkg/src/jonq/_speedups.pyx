# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernel for prime fields.

Mirrors the pure kernel's interface and reduction rule exactly; only the
data layout differs.  Terms live in C arrays: coefficients are int64
residues (products of two values below 2**31 fit int64), exponents are
uint16, and each monomial carries a 128-bit packed order key (10-bit
fields: optional degree fields plus one complemented field per variable),
so comparisons are two word compares.  normal_form subtracts reducers by
merging sorted term arrays, which keeps everything branch-light.

Exponents or (block) degrees beyond 1023 overflow the packing and raise
KernelCapacityError; the caller retries on the pure kernel.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy

from .errors import KernelBudgetExceeded, KernelCapacityError

ctypedef unsigned long long u64
ctypedef long long i64
ctypedef unsigned short u16

cdef enum:
    ORD_GREVLEX = 0
    ORD_LEX = 1
    ORD_BLOCK = 2

DEF FIELD_BITS = 10
DEF FIELD_MAX = 1023


cdef struct TermArray:
    u64 *hi
    u64 *lo
    u16 *exps      # nterms * nvars
    i64 *coeffs
    int n
    int cap


cdef int ta_init(TermArray *ta, int cap, int nvars) except -1:
    if cap < 4:
        cap = 4
    ta.hi = <u64 *> malloc(cap * sizeof(u64))
    ta.lo = <u64 *> malloc(cap * sizeof(u64))
    ta.exps = <u16 *> malloc(cap * nvars * sizeof(u16))
    ta.coeffs = <i64 *> malloc(cap * sizeof(i64))
    if ta.hi == NULL or ta.lo == NULL or ta.exps == NULL or ta.coeffs == NULL:
        raise MemoryError()
    ta.n = 0
    ta.cap = cap
    return 0


cdef void ta_free(TermArray *ta):
    free(ta.hi)
    free(ta.lo)
    free(ta.exps)
    free(ta.coeffs)


cdef int ta_grow(TermArray *ta, int nvars) except -1:
    cdef int cap = ta.cap * 2
    ta.hi = <u64 *> realloc(ta.hi, cap * sizeof(u64))
    ta.lo = <u64 *> realloc(ta.lo, cap * sizeof(u64))
    ta.exps = <u16 *> realloc(ta.exps, cap * nvars * sizeof(u16))
    ta.coeffs = <i64 *> realloc(ta.coeffs, cap * sizeof(i64))
    if ta.hi == NULL or ta.lo == NULL or ta.exps == NULL or ta.coeffs == NULL:
        raise MemoryError()
    ta.cap = cap
    return 0


cdef inline i64 mulmod(i64 a, i64 b, i64 p):
    return (a * b) % p


cdef i64 invmod(i64 a, i64 p):
    # extended Euclid; p prime, a nonzero mod p
    cdef i64 low = a % p, high = p
    cdef i64 lm = 1, hm = 0, q, nm, nw
    while low > 1:
        q = high / low
        nm = hm - lm * q
        nw = high - low * q
        hm = lm
        high = low
        lm = nm
        low = nw
    return lm % p if lm >= 0 else (lm % p + p) % p


cdef class Poly:
    """Opaque handle: canonical term array, strictly descending keys."""

    cdef TermArray ta
    cdef int nvars
    cdef bint inited

    def __cinit__(self):
        self.inited = False

    def __dealloc__(self):
        if self.inited:
            ta_free(&self.ta)

    def __eq__(self, other):
        # value equality, to match the pure kernel's tuple handles
        if self is other:
            return True
        if not isinstance(other, Poly):
            return NotImplemented
        cdef Poly o = <Poly> other
        if self.ta.n != o.ta.n or self.nvars != o.nvars:
            return False
        cdef int t
        for t in range(self.ta.n):
            if self.ta.coeffs[t] != o.ta.coeffs[t]:
                return False
        for t in range(self.ta.n * self.nvars):
            if self.ta.exps[t] != o.ta.exps[t]:
                return False
        return True


cdef class Kernel:
    cdef public int nvars
    cdef public object order
    cdef public i64 p
    cdef public long long ops
    cdef long long budget
    cdef bint has_budget
    cdef int kind
    cdef int block_k

    def __init__(self, nvars, order, p, ops_budget=None):
        if p is None:
            raise ValueError("compiled kernel supports prime fields only")
        if nvars > 10:
            raise KernelCapacityError(f"{nvars} variables exceed the packed-key width")
        self.nvars = nvars
        self.order = order
        self.p = p
        self.ops = 0
        self.has_budget = ops_budget is not None
        self.budget = ops_budget if ops_budget is not None else 0
        kind = order[0]
        if kind == "grevlex":
            self.kind = ORD_GREVLEX
            self.block_k = nvars
        elif kind == "lex":
            self.kind = ORD_LEX
            self.block_k = nvars
        elif kind == "block":
            self.kind = ORD_BLOCK
            self.block_k = order[1]
        else:
            raise ValueError(f"unknown order spec {order!r}")

    cdef inline int charge(self, long long n) except -1:
        self.ops += n
        if self.has_budget and self.ops > self.budget:
            raise KernelBudgetExceeded(
                f"monomial-operation budget of {self.budget} exceeded"
            )
        return 0

    # -- key packing -------------------------------------------------

    cdef int pack_key(self, u16 *e, u64 *hi, u64 *lo) except -1:
        # 128-bit accumulator as a (hi, lo) pair: appending a 10-bit field
        # is a combined left shift plus OR into the low word
        cdef u64 khi = 0, klo = 0
        cdef int i
        cdef long deg
        if self.kind == ORD_LEX:
            for i in range(self.nvars):
                if e[i] > FIELD_MAX:
                    raise KernelCapacityError("exponent exceeds packed-field range")
                khi = (khi << FIELD_BITS) | (klo >> (64 - FIELD_BITS))
                klo = (klo << FIELD_BITS) | <u64> e[i]
        elif self.kind == ORD_GREVLEX:
            deg = 0
            for i in range(self.nvars):
                if e[i] > FIELD_MAX:
                    raise KernelCapacityError("exponent exceeds packed-field range")
                deg += e[i]
            if deg > FIELD_MAX:
                raise KernelCapacityError("total degree exceeds packed-field range")
            klo = <u64> deg
            for i in range(self.nvars - 1, -1, -1):
                khi = (khi << FIELD_BITS) | (klo >> (64 - FIELD_BITS))
                klo = (klo << FIELD_BITS) | <u64> (FIELD_MAX - e[i])
        else:
            deg = 0
            for i in range(self.block_k):
                if e[i] > FIELD_MAX:
                    raise KernelCapacityError("exponent exceeds packed-field range")
                deg += e[i]
            if deg > FIELD_MAX:
                raise KernelCapacityError("block degree exceeds packed-field range")
            klo = <u64> deg
            for i in range(self.block_k - 1, -1, -1):
                khi = (khi << FIELD_BITS) | (klo >> (64 - FIELD_BITS))
                klo = (klo << FIELD_BITS) | <u64> (FIELD_MAX - e[i])
            deg = 0
            for i in range(self.block_k, self.nvars):
                if e[i] > FIELD_MAX:
                    raise KernelCapacityError("exponent exceeds packed-field range")
                deg += e[i]
            if deg > FIELD_MAX:
                raise KernelCapacityError("block degree exceeds packed-field range")
            khi = (khi << FIELD_BITS) | (klo >> (64 - FIELD_BITS))
            klo = (klo << FIELD_BITS) | <u64> deg
            for i in range(self.nvars - 1, self.block_k - 1, -1):
                khi = (khi << FIELD_BITS) | (klo >> (64 - FIELD_BITS))
                klo = (klo << FIELD_BITS) | <u64> (FIELD_MAX - e[i])
        hi[0] = khi
        lo[0] = klo
        return 0

    # -- construction ------------------------------------------------

    def poly(self, terms):
        """Canonical handle from (exps, coeff) pairs."""
        cdef list items = []
        cdef i64 c
        for exps, coeff in terms:
            c = coeff % self.p
            if c:
                items.append((tuple(exps), c))
        # combine duplicates in Python; construction is not the hot path
        cdef dict acc = {}
        for exps, c in items:
            prev = acc.get(exps)
            if prev is None:
                acc[exps] = c
            else:
                acc[exps] = (prev + c) % self.p
        cdef list final = [(e, v) for e, v in acc.items() if v]
        cdef Poly out = Poly()
        ta_init(&out.ta, len(final) + 1, self.nvars)
        out.nvars = self.nvars
        out.inited = True
        cdef int idx = 0, i
        cdef u64 hi = 0, lo = 0
        cdef u16 ebuf[16]
        keyed = []
        for e, v in final:
            for i in range(self.nvars):
                ebuf[i] = e[i]
            self.pack_key(ebuf, &hi, &lo)
            keyed.append(((<object> hi << 64) | <object> lo, e, v))
        keyed.sort(reverse=True)
        for _, e, v in keyed:
            if out.ta.n == out.ta.cap:
                ta_grow(&out.ta, self.nvars)
            idx = out.ta.n
            for i in range(self.nvars):
                out.ta.exps[idx * self.nvars + i] = e[i]
            self.pack_key(&out.ta.exps[idx * self.nvars], &out.ta.hi[idx], &out.ta.lo[idx])
            out.ta.coeffs[idx] = v
            out.ta.n += 1
        return out

    def terms(self, Poly h):
        cdef list out = []
        cdef int t, i
        for t in range(h.ta.n):
            out.append(
                (
                    tuple(h.ta.exps[t * self.nvars + i] for i in range(self.nvars)),
                    h.ta.coeffs[t],
                )
            )
        return out

    def is_zero(self, Poly h):
        return h.ta.n == 0

    def num_terms(self, Poly h):
        return h.ta.n

    def lead_exps(self, Poly h):
        if h.ta.n == 0:
            raise ValueError("zero polynomial")
        cdef int i
        return tuple(h.ta.exps[i] for i in range(self.nvars))

    def lead_coeff(self, Poly h):
        if h.ta.n == 0:
            raise ValueError("zero polynomial")
        return h.ta.coeffs[0]

    # -- arithmetic --------------------------------------------------

    cdef Poly _fresh(self, int cap):
        cdef Poly out = Poly()
        ta_init(&out.ta, cap, self.nvars)
        out.nvars = self.nvars
        out.inited = True
        return out

    def monic(self, Poly h):
        if h.ta.n == 0 or h.ta.coeffs[0] == 1:
            return h
        cdef i64 inv = invmod(h.ta.coeffs[0], self.p)
        cdef Poly out = self._fresh(h.ta.n)
        memcpy(out.ta.hi, h.ta.hi, h.ta.n * sizeof(u64))
        memcpy(out.ta.lo, h.ta.lo, h.ta.n * sizeof(u64))
        memcpy(out.ta.exps, h.ta.exps, h.ta.n * self.nvars * sizeof(u16))
        cdef int t
        for t in range(h.ta.n):
            out.ta.coeffs[t] = mulmod(h.ta.coeffs[t], inv, self.p)
        out.ta.n = h.ta.n
        return out

    cdef int _push(self, Poly out, u64 hi, u64 lo, u16 *e, i64 c) except -1:
        if out.ta.n == out.ta.cap:
            ta_grow(&out.ta, self.nvars)
        cdef int idx = out.ta.n
        out.ta.hi[idx] = hi
        out.ta.lo[idx] = lo
        memcpy(&out.ta.exps[idx * self.nvars], e, self.nvars * sizeof(u16))
        out.ta.coeffs[idx] = c
        out.ta.n = idx + 1
        return 0

    cdef Poly _merge(self, TermArray *a, int astart, TermArray *b, int bstart,
                     i64 bscale):
        """a[astart:] + bscale * b[bstart:], both sorted descending."""
        cdef Poly out = self._fresh((a.n - astart) + (b.n - bstart) + 1)
        cdef int ia = astart, ib = bstart
        cdef u64 ahi, alo, bhi, blo
        cdef i64 c
        self.charge((a.n - astart) + (b.n - bstart))
        while ia < a.n and ib < b.n:
            ahi = a.hi[ia]
            alo = a.lo[ia]
            bhi = b.hi[ib]
            blo = b.lo[ib]
            if ahi > bhi or (ahi == bhi and alo > blo):
                self._push(out, ahi, alo, &a.exps[ia * self.nvars], a.coeffs[ia])
                ia += 1
            elif ahi == bhi and alo == blo:
                c = (a.coeffs[ia] + mulmod(bscale, b.coeffs[ib], self.p)) % self.p
                if c:
                    self._push(out, ahi, alo, &a.exps[ia * self.nvars], c)
                ia += 1
                ib += 1
            else:
                c = mulmod(bscale, b.coeffs[ib], self.p)
                if c:
                    self._push(out, bhi, blo, &b.exps[ib * self.nvars], c)
                ib += 1
        while ia < a.n:
            self._push(out, a.hi[ia], a.lo[ia], &a.exps[ia * self.nvars], a.coeffs[ia])
            ia += 1
        while ib < b.n:
            c = mulmod(bscale, b.coeffs[ib], self.p)
            if c:
                self._push(out, b.hi[ib], b.lo[ib], &b.exps[ib * self.nvars], c)
            ib += 1
        return out

    def add(self, Poly a, Poly b):
        return self._merge(&a.ta, 0, &b.ta, 0, 1)

    def sub(self, Poly a, Poly b):
        return self._merge(&a.ta, 0, &b.ta, 0, self.p - 1)

    cdef Poly _shift(self, TermArray *src, int start, u16 *q, i64 scale):
        """scale * x^q * src[start:]; recomputes keys for shifted monomials."""
        cdef Poly out = self._fresh(src.n - start + 1)
        cdef int t, i, idx
        cdef u16 ebuf[16]
        cdef i64 c
        self.charge(src.n - start)
        for t in range(start, src.n):
            c = mulmod(scale, src.coeffs[t], self.p)
            if c == 0:
                continue
            for i in range(self.nvars):
                ebuf[i] = src.exps[t * self.nvars + i] + q[i]
            idx = out.ta.n
            if idx == out.ta.cap:
                ta_grow(&out.ta, self.nvars)
            memcpy(&out.ta.exps[idx * self.nvars], ebuf, self.nvars * sizeof(u16))
            self.pack_key(ebuf, &out.ta.hi[idx], &out.ta.lo[idx])
            out.ta.coeffs[idx] = c
            out.ta.n = idx + 1
        return out

    def mul_term(self, Poly h, exps, coeff):
        cdef u16 q[16]
        cdef int i
        for i in range(self.nvars):
            q[i] = exps[i]
        cdef i64 c = coeff % self.p
        if c == 0 or h.ta.n == 0:
            return self._fresh(1)
        return self._shift(&h.ta, 0, q, c)

    def spoly(self, Poly f, Poly g):
        """S-polynomial of f and g (slid to their lead lcm, monic parts)."""
        cdef u16 qf[16]
        cdef u16 qg[16]
        cdef int i
        cdef u16 ef, eg, m
        for i in range(self.nvars):
            ef = f.ta.exps[i]
            eg = g.ta.exps[i]
            m = ef if ef >= eg else eg
            qf[i] = m - ef
            qg[i] = m - eg
        cdef Poly a = self._shift(&f.ta, 0, qf, invmod(f.ta.coeffs[0], self.p))
        cdef Poly b = self._shift(&g.ta, 0, qg, invmod(g.ta.coeffs[0], self.p))
        return self._merge(&a.ta, 0, &b.ta, 0, self.p - 1)

    # -- reduction ---------------------------------------------------

    def normal_form(self, Poly h, basis):
        """Full remainder modulo a list of monic Poly handles.

        Same reducer rule as the pure kernel: first basis element in list
        order whose lead divides the current term.
        """
        cdef int nb = len(basis)
        if h.ta.n == 0 or nb == 0:
            return h
        cdef Poly work = self._fresh(h.ta.n)
        memcpy(work.ta.hi, h.ta.hi, h.ta.n * sizeof(u64))
        memcpy(work.ta.lo, h.ta.lo, h.ta.n * sizeof(u64))
        memcpy(work.ta.exps, h.ta.exps, h.ta.n * self.nvars * sizeof(u16))
        memcpy(work.ta.coeffs, h.ta.coeffs, h.ta.n * sizeof(i64))
        work.ta.n = h.ta.n

        cdef Poly out = self._fresh(h.ta.n)
        cdef Poly red, tail
        cdef int start = 0, bi, i, t
        cdef bint ok
        cdef u16 q[16]
        cdef i64 c

        while start < work.ta.n:
            red = None
            self.charge(nb)
            for bi in range(nb):
                red = <Poly> basis[bi]
                ok = True
                for i in range(self.nvars):
                    if red.ta.exps[i] > work.ta.exps[start * self.nvars + i]:
                        ok = False
                        break
                if ok:
                    break
                red = None
            if red is None:
                self._push(
                    out,
                    work.ta.hi[start],
                    work.ta.lo[start],
                    &work.ta.exps[start * self.nvars],
                    work.ta.coeffs[start],
                )
                start += 1
                continue
            # work[start:] -= c * x^q * red  (red monic, leads cancel)
            c = work.ta.coeffs[start]
            for i in range(self.nvars):
                q[i] = work.ta.exps[start * self.nvars + i] - red.ta.exps[i]
            if red.ta.n == 1:
                start += 1
                continue
            tail = self._shift(&red.ta, 1, q, c)
            work = self._merge(&work.ta, start + 1, &tail.ta, 0, self.p - 1)
            start = 0
        return out
