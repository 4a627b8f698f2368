"""The downgraded-sequence recursion and the generator sets it feeds.

Starting from the initial syzygy h of bidegree (d-1, 1), each step
replaces one x-factor per term by the matching y-variable:

    h_next = [y1 ... yn] * (partial column of h_prev)

With the canonical column this swaps, in every term, the smallest-index
x_j for y_j.  The bidegree drops (a, b) -> (a-1, b+1), so the sequence
has d members in standard mode and d-1 in generalized mode (the last
variable is never exchanged, and h only lies in m^(d-2) there).

Generator sets assembled here: the 2x2 minors x_i*y_j - x_j*y_i of the
generic row pair, the symmetric-algebra ideal (minors + h1), the partial
ideals J_i (minors + h1..h_i), the full Rees ideal, and K = minors +
(x_n, y_n).  Lists are kept verbatim; no minimalization is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInvariantViolation, NotDowngradable, NotInIdeal
from .maps import initial_syzygy_h, partial_column
from .poly import STANDARD, Bidegree, bidegree_of

DOMINANT = "dominant"


@dataclass(frozen=True)
class DowngradedSequence:
    """h_1, ..., h_L with h_i nonzero of bidegree (d-i, i)."""

    polys: tuple

    @property
    def L(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]


@dataclass(frozen=True)
class GeneratorSet:
    """A labelled generator list: minors | symmetric_L | J_i | rees_J | K | m."""

    label: str
    gens: tuple
    ring: object


def downgrade_step(h_prev, rng=None):
    """One exchange step: trade an x_j for y_j in every term of h_prev."""
    ring = h_prev.ring
    try:
        col = partial_column(h_prev, rng)
    except NotDowngradable:
        raise
    except NotInIdeal as exc:
        raise NotDowngradable(str(exc)) from None
    out = ring.zero()
    for j in range(ring.n):
        out = out + ring.y_var(j) * col.entries[j]
    return out


def sequence_length(map_):
    return map_.d if map_.ring.mode == STANDARD else map_.d - 1


def downgraded_sequence(map_, rng=None):
    """The full sequence: length d (standard) or d-1 (generalized)."""
    ring = map_.ring
    d = map_.d
    polys = [initial_syzygy_h(map_, rng)]
    for _ in range(sequence_length(map_) - 1):
        polys.append(downgrade_step(polys[-1], rng))
    for i, h in enumerate(polys, start=1):
        if h.is_zero:
            raise InternalInvariantViolation(f"h_{i} vanished")
        if bidegree_of(h) != Bidegree(d - i, i):
            raise InternalInvariantViolation(
                f"h_{i} has bidegree {bidegree_of(h)}, expected ({d - i},{i})"
            )
    return DowngradedSequence(tuple(polys))


def minors_generators(ring):
    """The C(n,2) minors x_i*y_j - x_j*y_i, 1 <= i < j <= n."""
    gens = []
    for i in range(ring.n):
        for j in range(i + 1, ring.n):
            gens.append(ring.x_var(i) * ring.y_var(j) - ring.x_var(j) * ring.y_var(i))
    return GeneratorSet("minors", tuple(gens), ring)


def symmetric_ideal(map_, sequence=None):
    """Defining ideal of the symmetric algebra: minors plus h1."""
    h1 = sequence[0] if sequence is not None else initial_syzygy_h(map_)
    minors = minors_generators(map_.ring)
    return GeneratorSet("symmetric_L", minors.gens + (h1,), map_.ring)


def j_ideal(map_, i, sequence=None):
    """The i-th partial ideal J_i = minors + (h1, ..., h_i)."""
    if sequence is None:
        sequence = downgraded_sequence(map_)
    if not 1 <= i <= sequence.L:
        raise ValueError(f"i must lie in 1..{sequence.L}")
    minors = minors_generators(map_.ring)
    return GeneratorSet(f"J_{i}", minors.gens + tuple(sequence.polys[:i]), map_.ring)


def rees_ideal(map_, sequence=None):
    """Defining ideal of the Rees algebra: minors plus the full sequence."""
    if sequence is None:
        sequence = downgraded_sequence(map_)
    minors = minors_generators(map_.ring)
    return GeneratorSet("rees_J", minors.gens + tuple(sequence.polys), map_.ring)


def implicit_equation(map_, sequence=None):
    """h_d, the degree-d equation of the image hypersurface (standard mode);
    generalized maps are dominant onto projective space, so there is none."""
    if map_.ring.mode != STANDARD:
        return DOMINANT
    if sequence is None:
        sequence = downgraded_sequence(map_)
    return sequence.polys[-1]


def k_ideal(ring):
    """K = minors + (x_n, y_n); its powers drive the divisor description."""
    minors = minors_generators(ring)
    n = ring.n
    return GeneratorSet("K", minors.gens + (ring.x_var(n - 1), ring.y_var(n - 1)), ring)


def maximal_ideal(ring):
    """The ideal (x1, ..., xn) the downgrading exchanges along."""
    return GeneratorSet("m", tuple(ring.x_var(j) for j in range(ring.n)), ring)
