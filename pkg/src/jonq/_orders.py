"""Monomial orders as packed integer keys.

A monomial is a dense exponent tuple.  Every order used here is realized
by a key function mapping exponents to a Python int such that

    m1 > m2  in the order  <=>  key(m1) > key(m2).

Keys pack fields of _W bits, most significant first.  For grevlex the
fields are (total degree, M - e_last, ..., M - e_first): equal degrees
tie-break on the *rightmost* differing exponent, smaller exponent winning,
which is exactly grevlex.  Block orders concatenate the grevlex keys of
the two blocks.  Python ints never overflow, so _W = 32 is safe for any
exponent below 2**32.

Order specs are small tuples:

    ('grevlex',)     degree-reverse-lexicographic on all variables
    ('lex',)         pure lexicographic, first variable largest
    ('block', k)     first k variables dominate; grevlex inside each block
"""

_W = 32
_M = (1 << _W) - 1

GREVLEX = ("grevlex",)
LEX = ("lex",)


def block(k):
    """Elimination order whose first block is the leading k variables."""
    return ("block", int(k))


def _grevlex_key(exps):
    key = 0
    for e in exps:
        key += e
    for i in range(len(exps) - 1, -1, -1):
        key = (key << _W) | (_M - exps[i])
    return key


def _lex_key(exps):
    key = 0
    for e in exps:
        key = (key << _W) | e
    return key


def order_key(order, exps):
    """Packed comparison key of `exps` under `order` (bigger key = bigger)."""
    kind = order[0]
    if kind == "grevlex":
        return _grevlex_key(exps)
    if kind == "lex":
        return _lex_key(exps)
    if kind == "block":
        k = order[1]
        lo = _grevlex_key(exps[k:])
        hi = _grevlex_key(exps[:k])
        return (hi << (_W * (len(exps) - k + 1))) | lo
    raise ValueError(f"unknown order spec {order!r}")


def divides(a, b):
    """Exponentwise a <= b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """a / b; caller guarantees b | a."""
    return tuple(x - y for x, y in zip(a, b))


def coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True
