"""Characters of tame inertia as residues in the direct limit of Z/(q^f - 1).

A character of level f is a residue x modulo q^f - 1; Frobenius acts by
x -> q*x.  Passing from level f to a multiple F multiplies x by
(q^F - 1)/(q^f - 1).  Characters are always stored at their minimal level,
which is also the size of their Frobenius orbit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from sympy import divisors, isprime, multiplicity, primefactors

from .errors import BlockError, EllError, NotTameError
from .local_fields import ResidueDatum

__all__ = [
    "TameChar",
    "FrobOrbit",
    "trivial_character",
    "modulus",
    "embed",
    "canonicalize",
    "frobenius_orbit",
    "ell_regular_part",
    "restrict_totally_ramified",
    "frobenius_twist",
    "multiply",
    "character_order",
    "is_ell_regular",
]


def modulus(base: ResidueDatum, level: int) -> int:
    """Order q^level - 1 of the character group at ``level``."""
    return base.q**level - 1


@lru_cache(maxsize=None)
def _prime_divisors(level: int) -> tuple[int, ...]:
    return tuple(int(r) for r in primefactors(level))


@lru_cache(maxsize=None)
def _divisors(level: int) -> tuple[int, ...]:
    return tuple(int(d) for d in divisors(level))


def _is_primitive(base: ResidueDatum, level: int, x: int) -> bool:
    n = modulus(base, level)
    for r in _prime_divisors(level):
        if x % (n // modulus(base, level // r)) == 0:
            return False
    return True


@dataclass(frozen=True, order=True)
class TameChar:
    """A tame character in canonical (minimal-level) form."""

    level: int
    residue: int
    base: ResidueDatum

    def __post_init__(self):
        if self.level < 1:
            raise BlockError(f"level {self.level} must be positive")
        if not 0 <= self.residue < max(modulus(self.base, self.level), 1):
            raise BlockError(f"residue {self.residue} out of range at level {self.level}")
        if not _is_primitive(self.base, self.level, self.residue):
            raise BlockError(
                f"({self.level}, {self.residue}) is not in canonical form; use canonicalize()"
            )

    @property
    def is_trivial(self) -> bool:
        return self.residue == 0

    def key(self) -> tuple[int, int]:
        return (self.level, self.residue)

    def to_json(self) -> dict:
        return {"level": self.level, "residue": str(self.residue)}

    @classmethod
    def from_json(cls, data: dict, base: ResidueDatum) -> TameChar:
        return canonicalize(int(data["level"]), int(data["residue"]), base)

    def __str__(self):
        return f"{self.level}/{self.residue}"


def trivial_character(base: ResidueDatum) -> TameChar:
    return TameChar(1, 0, base)


def embed(chi: TameChar, level: int) -> int:
    """Residue of ``chi`` at a level that is a multiple of its own."""
    if level % chi.level:
        raise BlockError(f"level {chi.level} does not divide {level}")
    return chi.residue * (modulus(chi.base, level) // modulus(chi.base, chi.level))


def canonicalize(level: int, x: int, base: ResidueDatum) -> TameChar:
    """The unique primitive (d, y) with d | level that embeds to x."""
    n = modulus(base, level)
    x %= max(n, 1)
    for d in _divisors(level):
        m = modulus(base, d)
        if (m * x) % n == 0:
            return TameChar(d, x // (n // m) if n else 0, base)
    raise AssertionError("unreachable: level itself always works")


def multiply(chi: TameChar, psi: TameChar) -> TameChar:
    """Product of two characters (sum of residues at a common level)."""
    if chi.base != psi.base:
        raise BlockError("characters over different residue fields")
    level = lcm(chi.level, psi.level)
    return canonicalize(level, embed(chi, level) + embed(psi, level), chi.base)


def frobenius_twist(chi: TameChar, k: int = 1) -> TameChar:
    """The conjugate x -> q^k x; stays at the same level."""
    n = modulus(chi.base, chi.level)
    if n <= 1:
        return chi
    return TameChar(chi.level, chi.residue * pow(chi.base.q, k, n) % n, chi.base)


def character_order(chi: TameChar) -> int:
    n = modulus(chi.base, chi.level)
    return n // gcd(chi.residue, n) if chi.residue else 1


def _check_ell(ell: int, base: ResidueDatum) -> None:
    if ell == base.p:
        raise EllError(f"ell={ell} equals the residue characteristic")
    if not isprime(ell):
        raise EllError(f"ell={ell} is not prime")


def ell_regular_part(chi: TameChar, ell: int) -> TameChar:
    """Prime-to-ell component: restriction to the prime-to-ell inertia.

    Writing q^f - 1 = ell^a * m with ell not dividing m, this is the residue
    congruent to x mod m and to 0 mod ell^a.
    """
    _check_ell(ell, chi.base)
    n = modulus(chi.base, chi.level)
    if n <= 1:
        return chi
    ell_part = ell ** int(multiplicity(ell, n))
    m = n // ell_part
    if m == 1:
        return trivial_character(chi.base)
    y = ell_part * (chi.residue * pow(ell_part, -1, m) % m)
    return canonicalize(chi.level, y, chi.base)


def is_ell_regular(chi: TameChar, ell: int) -> bool:
    return character_order(chi) % ell != 0


def restrict_totally_ramified(chi: TameChar, e: int) -> TameChar:
    """Restriction to the inertia of a totally ramified extension of degree e."""
    if e < 1:
        raise BlockError(f"degree {e} must be positive")
    if e % chi.base.p == 0:
        raise NotTameError(f"degree {e} is divisible by p={chi.base.p}")
    return canonicalize(chi.level, e * chi.residue, chi.base)


@dataclass(frozen=True, order=True)
class FrobOrbit:
    """Orbit of a tame character under x -> q^g x.

    ``frobenius_power`` g is the residue degree of the field whose Frobenius
    acts; ``rep`` is the orbit element with the smallest residue.
    """

    rep: TameChar
    size: int
    frobenius_power: int = 1

    def __post_init__(self):
        if self.frobenius_power < 1:
            raise BlockError(f"frobenius power {self.frobenius_power} must be positive")
        orbit = _orbit_residues(self.rep, self.frobenius_power)
        if min(orbit) != self.rep.residue or len(orbit) != self.size:
            raise BlockError(f"inconsistent orbit data {self.rep} size {self.size}")

    @property
    def base(self) -> ResidueDatum:
        return self.rep.base

    @property
    def is_trivial(self) -> bool:
        return self.rep.is_trivial

    def residues(self) -> list[int]:
        """Orbit elements at the representative's level, in Frobenius order."""
        n = modulus(self.base, self.rep.level)
        step = pow(self.base.q, self.frobenius_power, n) if n > 1 else 1
        out = [self.rep.residue]
        for _ in range(self.size - 1):
            out.append(out[-1] * step % n)
        return out

    def characters(self) -> list[TameChar]:
        return [TameChar(self.rep.level, x, self.base) for x in self.residues()]

    def key(self) -> tuple[int, int]:
        return self.rep.key()

    def to_json(self) -> dict:
        return {"rep": self.rep.to_json(), "size": self.size}

    @classmethod
    def from_json(cls, data: dict, base: ResidueDatum, frobenius_power: int) -> FrobOrbit:
        orbit = frobenius_orbit(TameChar.from_json(data["rep"], base), frobenius_power)
        if "size" in data and int(data["size"]) != orbit.size:
            raise BlockError(f"orbit size {data['size']} does not match {orbit.size}")
        return orbit

    def __str__(self):
        return "{" + ",".join(str(x) for x in sorted(self.residues())) + f"}}@{self.rep.level}"


def _orbit_residues(chi: TameChar, g: int) -> list[int]:
    n = modulus(chi.base, chi.level)
    if n <= 1 or chi.residue == 0:
        return [chi.residue]
    step = pow(chi.base.q, g, n)
    seen = [chi.residue]
    y = chi.residue * step % n
    while y != chi.residue:
        seen.append(y)
        y = y * step % n
    return seen


def frobenius_orbit(chi: TameChar, g: int = 1) -> FrobOrbit:
    """Orbit of ``chi`` under the g-th power of Frobenius, by direct iteration."""
    if g < 1:
        raise BlockError(f"frobenius power {g} must be positive")
    seen = _orbit_residues(chi, g)
    return FrobOrbit(TameChar(chi.level, min(seen), chi.base), len(seen), g)
