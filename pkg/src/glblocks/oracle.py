"""Brute-force cross-check of block enumeration.

Works in one ambient cyclic group per factor, Z/(Q^L - 1) with Q = q^f and
L = lcm(1..n), lists every character whose Frobenius orbit is small enough by
solving linear congruences, builds orbits by iterating x -> Q x, and then
counts weighted multisets of orbits.  None of the canonical-form machinery of
:mod:`glblocks.tame_characters` is used, so agreement is meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd, lcm

from .errors import OracleBoundError
from .local_fields import FULL_INERTIA, InertiaKind
from .parameters import GLTypeGroup, InertialParam

MAX_WEIGHT = 6
MAX_Q = 9


@dataclass(frozen=True)
class OracleReport:
    count: int
    fingerprints: tuple


@dataclass(frozen=True)
class OracleComparison:
    group: str
    kind: str
    oracle_count: int
    enumerated_count: int
    missing: tuple
    extra: tuple

    @property
    def agree(self) -> bool:
        return (
            self.oracle_count == self.enumerated_count and not self.missing and not self.extra
        )


def _ambient(q: int, n: int, f: int) -> tuple[int, int]:
    big_q = q**f
    level = reduce(lcm, range(1, n + 1), 1)
    return big_q, big_q**level - 1


def _small_orbits(q: int, n: int, f: int, ell: int | None) -> list[tuple[int, ...]]:
    big_q, modulus = _ambient(q, n, f)
    if modulus == 1:
        return [(0,)]
    chars = set()
    for d in range(1, n + 1):
        # solutions of (Q^d - 1) x = 0 mod modulus
        g = gcd(modulus, big_q**d - 1)
        step = modulus // g
        chars.update(k * step for k in range(g))
    if ell is not None:
        chars = {x for x in chars if (modulus // gcd(modulus, x)) % ell != 0}
    orbits = []
    done = set()
    for x in sorted(chars):
        if x in done:
            continue
        orbit = [x]
        y = x * big_q % modulus
        while y != x:
            orbit.append(y)
            y = y * big_q % modulus
        done.update(orbit)
        if len(orbit) <= n:
            orbits.append(tuple(sorted(orbit)))
    return orbits


def _multisets(orbits, n):
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(sorted(acc)))
            return
        for i in range(start, len(orbits)):
            size = len(orbits[i])
            for m in range(1, remaining // size + 1):
                rec(i + 1, remaining - m * size, acc + [(orbits[i], m)])

    rec(0, n, [])
    return out


def _check_bounds(group: GLTypeGroup) -> None:
    if group.rank > MAX_WEIGHT or group.q > MAX_Q:
        raise OracleBoundError(
            f"oracle limited to total weight <= {MAX_WEIGHT} and q <= {MAX_Q}, got {group}"
        )


def oracle_enumerate(group: GLTypeGroup, kind: InertiaKind = FULL_INERTIA) -> OracleReport:
    _check_bounds(group)
    kind.check_against(group.base.p)
    per_factor = [
        _multisets(_small_orbits(group.q, fac.n, fac.ext.f, kind.ell), fac.n)
        for fac in group.factors
    ]
    prints = sorted(product(*per_factor))
    return OracleReport(len(prints), tuple(prints))


def fingerprint(phi: InertialParam) -> tuple:
    """Ambient-coordinate fingerprint of a parameter, comparable with the oracle."""
    out = []
    q = phi.group.q
    for fac, pieces in zip(phi.group.factors, phi.data):
        _, modulus = _ambient(q, fac.n, fac.ext.f)
        entry = []
        for pc in pieces:
            level = pc.orbit.rep.level
            scale = modulus // (q**level - 1)
            residues = (x * scale % modulus if modulus > 1 else 0 for x in pc.orbit.residues())
            entry.append((tuple(sorted(residues)), pc.mult))
        out.append(tuple(sorted(entry)))
    return tuple(out)


def compare(group: GLTypeGroup, kind: InertiaKind = FULL_INERTIA, blocks=None) -> OracleComparison:
    """Run the oracle and the enumerator (or given ``blocks``) side by side."""
    from .parameters import enumerate_blocks

    report = oracle_enumerate(group, kind)
    if blocks is None:
        blocks = enumerate_blocks(group, kind)
    ours = [fingerprint(phi) for phi in blocks]
    theirs = set(report.fingerprints)
    mine = set(ours)
    return OracleComparison(
        group=group.spec(),
        kind=str(kind),
        oracle_count=report.count,
        enumerated_count=len(ours),
        missing=tuple(sorted(theirs - mine)),
        extra=tuple(sorted(mine - theirs)),
    )
