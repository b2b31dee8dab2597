"""Residue data and (e, f) shapes of finite extensions of a p-adic field.

Nothing here knows about uniformizers or polynomials: an extension is its
ramification index and residue degree, which is all the block combinatorics
ever looks at.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime, multiplicity, perfect_power

from .errors import BlockError, EllError, NotTameError

__all__ = [
    "ResidueDatum",
    "ExtShape",
    "InertiaKind",
    "FULL_INERTIA",
    "WILD_INERTIA",
    "compose_extensions",
    "intermediate_field",
]


@dataclass(frozen=True, order=True)
class ResidueDatum:
    """Residue field F_q of a p-adic field, with q = p**a."""

    p: int
    a: int = 1

    def __post_init__(self):
        if not isprime(self.p):
            raise BlockError(f"residue characteristic {self.p} is not prime")
        if self.a < 1:
            raise BlockError(f"exponent a={self.a} must be positive")

    @cached_property
    def q(self) -> int:
        return self.p**self.a

    @classmethod
    def from_q(cls, q: int) -> ResidueDatum:
        q = int(q)
        if q < 2:
            raise BlockError(f"q={q} is not a prime power")
        if isprime(q):
            return cls(q, 1)
        pp = perfect_power(q)
        if not pp:
            raise BlockError(f"q={q} is not a prime power")
        base, exp = pp
        # perfect_power may return a composite base (e.g. 64 -> 8**2)
        root = perfect_power(base)
        while root:
            base, exp = root[0], exp * root[1]
            root = perfect_power(base)
        if not isprime(base):
            raise BlockError(f"q={q} is not a prime power")
        return cls(int(base), int(exp))

    def extend(self, f: int) -> ResidueDatum:
        """Residue datum of the unramified extension of degree f."""
        return ResidueDatum(self.p, self.a * f)

    def to_json(self) -> dict:
        return {"p": self.p, "a": self.a}

    @classmethod
    def from_json(cls, data: dict) -> ResidueDatum:
        return cls(int(data["p"]), int(data["a"]))


@dataclass(frozen=True, order=True)
class ExtShape:
    """Shape of a finite extension: ramification index e, residue degree f."""

    e: int = 1
    f: int = 1

    def __post_init__(self):
        if self.e < 1 or self.f < 1:
            raise BlockError(f"extension shape ({self.e}, {self.f}) must be positive")

    @property
    def degree(self) -> int:
        return self.e * self.f

    def is_tame(self, p: int) -> bool:
        return self.e % p != 0

    def check_tame(self, p: int) -> None:
        if not self.is_tame(p):
            raise NotTameError(f"extension ({self.e}, {self.f}) is wildly ramified for p={p}")

    def divides(self, other: ExtShape) -> bool:
        return other.e % self.e == 0 and other.f % self.f == 0

    def to_json(self) -> dict:
        return {"e": self.e, "f": self.f}

    @classmethod
    def from_json(cls, data: dict) -> ExtShape:
        return cls(int(data["e"]), int(data["f"]))

    def __str__(self):
        return f"({self.e},{self.f})"


@dataclass(frozen=True)
class InertiaKind:
    """Which subgroup K_F of inertia parameters are restricted to.

    ``tag`` is one of ``"inertia"`` (all of I_F), ``"ell-prime"`` (the
    prime-to-ell inertia I_F^(ell), needs ``ell``) or ``"wild"`` (P_F).
    """

    tag: str = "inertia"
    ell: int | None = None

    def __post_init__(self):
        if self.tag not in ("inertia", "ell-prime", "wild"):
            raise BlockError(f"unknown inertia kind {self.tag!r}")
        if self.tag == "ell-prime":
            if self.ell is None or not isprime(self.ell):
                raise EllError(f"ell-prime inertia needs a prime ell, got {self.ell}")
        elif self.ell is not None:
            raise BlockError(f"kind {self.tag!r} takes no ell")

    @classmethod
    def ell_prime(cls, ell: int) -> InertiaKind:
        return cls("ell-prime", int(ell))

    def check_against(self, p: int) -> None:
        if self.tag == "ell-prime" and self.ell == p:
            raise EllError(f"ell={self.ell} must differ from the residue characteristic")

    def to_json(self):
        if self.tag == "ell-prime":
            return {"kind": self.tag, "ell": self.ell}
        return self.tag

    @classmethod
    def from_json(cls, data) -> InertiaKind:
        if isinstance(data, str):
            return cls(data)
        return cls(data["kind"], data.get("ell"))

    def __str__(self):
        return f"ell-prime({self.ell})" if self.tag == "ell-prime" else self.tag


FULL_INERTIA = InertiaKind("inertia")
WILD_INERTIA = InertiaKind("wild")


def compose_extensions(outer: ExtShape, inner: ExtShape) -> ExtShape:
    """Shape of a tower: ramification indices and residue degrees multiply."""
    return ExtShape(outer.e * inner.e, outer.f * inner.f)


def intermediate_field(ext: ExtShape, kind: InertiaKind, p: int) -> ExtShape:
    """Shape of F''/F where W_{F''} = W_{F'} K_F, for F'/F of shape ``ext``.

    F'/F'' is always totally ramified; F'' keeps the full residue degree and
    the part of the ramification that K_F cannot absorb: none of it for
    K_F = I_F, the ell-part for I_F^(ell), the prime-to-p part for P_F.
    """
    if kind.tag == "inertia":
        return ExtShape(1, ext.f)
    if kind.tag == "ell-prime":
        kind.check_against(p)
        return ExtShape(kind.ell ** int(multiplicity(kind.ell, ext.e)), ext.f)
    return ExtShape(ext.e // p ** int(multiplicity(p, ext.e)), ext.f)
