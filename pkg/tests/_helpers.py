"""Shared generators for random groups and parameters."""
import random

from hypothesis import strategies as st

from glblocks.local_fields import FULL_INERTIA, ExtShape, ResidueDatum
from glblocks.parameters import GLFactor, GLTypeGroup, InertialParam, Piece
from glblocks.tame_characters import canonicalize, ell_regular_part, frobenius_orbit

QS = (2, 3, 4, 5, 7)


def random_factor_data(rng: random.Random, base, n, f, kind=FULL_INERTIA):
    q = base.q
    pieces = {}
    remaining = n
    while remaining:
        s = rng.randint(1, remaining)
        chi = canonicalize(f * s, rng.randrange(q ** (f * s) - 1), base)
        if kind.tag == "ell-prime":
            chi = ell_regular_part(chi, kind.ell)
        orbit = frobenius_orbit(chi, f)
        if orbit.size > remaining:
            continue
        m = rng.randint(1, remaining // orbit.size)
        old = pieces.get(orbit.key())
        pieces[orbit.key()] = Piece(orbit, m + (old.mult if old else 0))
        remaining -= m * orbit.size
    return tuple(pieces[k] for k in sorted(pieces))


def random_param(rng: random.Random, group: GLTypeGroup, kind=FULL_INERTIA) -> InertialParam:
    data = tuple(
        random_factor_data(rng, group.base, fac.n, fac.ext.f, kind) for fac in group.factors
    )
    return InertialParam(group, data, kind)


def random_group(rng: random.Random, base, max_weight=4, max_factors=2, f_max=3, e_max=3):
    factors = []
    budget = rng.randint(1, max_weight)
    for _ in range(rng.randint(1, max_factors)):
        if budget == 0:
            break
        n = rng.randint(1, budget)
        budget -= n
        e = rng.choice([x for x in range(1, e_max + 1) if x % base.p])
        factors.append(GLFactor(n, ExtShape(e, rng.randint(1, f_max))))
    return GLTypeGroup(tuple(factors), base)


bases = st.sampled_from(QS).map(ResidueDatum.from_q)


@st.composite
def params(draw, max_weight=4, max_factors=2, f_max=2, e_max=3, qs=QS):
    rng = draw(st.randoms(use_true_random=False))
    base = ResidueDatum.from_q(draw(st.sampled_from(qs)))
    group = random_group(rng, base, max_weight, max_factors, f_max, e_max)
    return random_param(rng, group)
