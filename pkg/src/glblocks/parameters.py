"""Depth-zero inertial parameters of groups of GL-type.

A group is a product of factors Res_{E|F} GL_n with E/F tame of shape
(e, f).  A parameter assigns to each factor a multiset of characters of the
tame inertia of E, stable under the Frobenius of E (x -> q^f x).  It is
stored as its isotypic decomposition: pairwise distinct orbits with
multiplicities.  Characters are encoded over the residue field of F, so an
E-character of E-level k is an F-level f*k residue; the ramification of E
does not change the encoding.
"""
from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import comb, gcd

from sympy import divisors, mobius, multiplicity, primefactors

from .errors import (
    BlockError,
    DuplicateOrbitError,
    FrobeniusStabilityError,
    WeightError,
    WildParameterError,
)
from .local_fields import (
    FULL_INERTIA,
    ExtShape,
    InertiaKind,
    ResidueDatum,
    intermediate_field,
)
from .tame_characters import (
    FrobOrbit,
    TameChar,
    canonicalize,
    ell_regular_part,
    embed,
    frobenius_orbit,
    is_ell_regular,
    modulus,
    trivial_character,
)

__all__ = [
    "GLFactor",
    "GLTypeGroup",
    "Piece",
    "InertialParam",
    "Component",
    "CentralizerShape",
    "HeckeDescriptor",
    "FusionClass",
    "trivial_parameter",
    "validate",
    "from_characters",
    "isotypic_decomposition",
    "copies_multiplier",
    "piece_component",
    "centralizer_shape",
    "unipotent_group",
    "hecke_descriptor",
    "factor_orbits",
    "enumerate_blocks",
    "count_blocks",
    "restrict_to_ell_prime",
    "fuse_blocks",
    "factor_parameter",
    "shapiro_transport",
    "shapiro_lift",
]


@dataclass(frozen=True, order=True)
class GLFactor:
    """Res_{E|F} GL_n with E/F of shape ``ext``."""

    n: int
    ext: ExtShape = ExtShape()

    def __post_init__(self):
        if self.n < 1:
            raise BlockError(f"rank {self.n} must be positive")

    def spec(self) -> str:
        if self.ext == ExtShape():
            return f"GL:{self.n}"
        return f"Res:{self.ext.e},{self.ext.f}:GL:{self.n}"

    def to_json(self) -> dict:
        return {"n": self.n, "ext": self.ext.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> GLFactor:
        return cls(int(data["n"]), ExtShape.from_json(data.get("ext", {"e": 1, "f": 1})))


_FACTOR_RE = re.compile(r"^(?:Res:(\d+),(\d+):)?GL:(\d+)$")


@dataclass(frozen=True)
class GLTypeGroup:
    factors: tuple[GLFactor, ...]
    base: ResidueDatum

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise BlockError("a group needs at least one factor")
        for fac in self.factors:
            fac.ext.check_tame(self.base.p)

    @classmethod
    def gl(cls, n: int, base: ResidueDatum) -> GLTypeGroup:
        return cls((GLFactor(n),), base)

    @classmethod
    def parse(cls, text: str, base: ResidueDatum) -> GLTypeGroup:
        """Parse ``GL:n`` / ``Res:e,f:GL:n`` factors joined by ``x``."""
        factors = []
        for chunk in text.replace(" ", "").split("x"):
            m = _FACTOR_RE.match(chunk)
            if not m:
                raise BlockError(f"malformed group factor {chunk!r}")
            e, f, n = m.groups()
            factors.append(GLFactor(int(n), ExtShape(int(e or 1), int(f or 1))))
        return cls(tuple(factors), base)

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def rank(self) -> int:
        return sum(fac.n for fac in self.factors)

    def spec(self) -> str:
        return "x".join(fac.spec() for fac in self.factors)

    def to_json(self) -> list:
        return [fac.to_json() for fac in self.factors]

    def __str__(self):
        return f"{self.spec()} over F_{self.q}"


@dataclass(frozen=True, order=True)
class Piece:
    """One isotypic piece: a Frobenius orbit of characters with multiplicity."""

    orbit: FrobOrbit
    mult: int

    @property
    def weight(self) -> int:
        return self.mult * self.orbit.size

    def to_json(self) -> dict:
        return {"orbit": self.orbit.to_json(), "mult": self.mult}


@dataclass(frozen=True)
class InertialParam:
    """A canonical depth-zero parameter: per factor, sorted distinct pieces."""

    group: GLTypeGroup
    data: tuple[tuple[Piece, ...], ...]
    kind: InertiaKind = FULL_INERTIA

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(tuple(pcs) for pcs in self.data))
        if self.kind.tag == "wild":
            raise WildParameterError("only the trivial wild parameter exists at depth zero")
        self.kind.check_against(self.group.base.p)
        if len(self.data) != len(self.group.factors):
            raise BlockError(
                f"{len(self.data)} factor data for {len(self.group.factors)} factors"
            )
        for i, (fac, pieces) in enumerate(zip(self.group.factors, self.data)):
            weight = 0
            for pc in pieces:
                if pc.mult < 1:
                    raise BlockError(f"multiplicity {pc.mult} must be positive")
                if pc.orbit.base != self.group.base:
                    raise BlockError("orbit over a different residue field")
                if pc.orbit.frobenius_power != fac.ext.f:
                    raise BlockError(
                        f"factor {i}: orbit taken under q^{pc.orbit.frobenius_power},"
                        f" expected q^{fac.ext.f}"
                    )
                if self.kind.tag == "ell-prime" and not is_ell_regular(pc.orbit.rep, self.kind.ell):
                    raise BlockError(f"character {pc.orbit.rep} is not {self.kind.ell}-regular")
                weight += pc.weight
            keys = [pc.orbit.key() for pc in pieces]
            if len(set(keys)) != len(keys):
                raise DuplicateOrbitError(f"factor {i}: repeated orbit")
            if keys != sorted(keys):
                raise BlockError(f"factor {i}: pieces not in canonical order")
            if weight != fac.n:
                raise WeightError(f"factor {i}: weight {weight} != rank {fac.n}")

    @property
    def base(self) -> ResidueDatum:
        return self.group.base

    @property
    def is_trivial(self) -> bool:
        return all(len(pcs) == 1 and pcs[0].orbit.is_trivial for pcs in self.data)

    def key(self) -> tuple:
        return tuple(
            tuple((pc.orbit.rep.level, pc.orbit.rep.residue, pc.mult) for pc in pcs)
            for pcs in self.data
        )

    def characters(self, i: int) -> Counter:
        """Multiset of characters (of the inertia of E_i) in factor i."""
        out = Counter()
        for pc in self.data[i]:
            for chi in pc.orbit.characters():
                out[chi] += pc.mult
        return out

    def pieces(self):
        for i, pcs in enumerate(self.data):
            for pc in pcs:
                yield i, pc

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "base": self.base.to_json(),
            "kind": self.kind.to_json(),
            "pairs": [dict(factor=i, **pc.to_json()) for i, pc in self.pieces()],
        }

    @classmethod
    def from_json(cls, data: dict, group: GLTypeGroup | None = None) -> InertialParam:
        if group is None:
            base = ResidueDatum.from_json(data["base"])
            group = GLTypeGroup(tuple(GLFactor.from_json(x) for x in data["group"]), base)
        kind = InertiaKind.from_json(data.get("kind", "inertia"))
        raw = [[] for _ in group.factors]
        for pair in data["pairs"]:
            i = int(pair.get("factor", 0))
            orbit = FrobOrbit.from_json(pair["orbit"], group.base, group.factors[i].ext.f)
            raw[i].append((orbit, int(pair["mult"])))
        return validate(group, raw, kind)

    def __str__(self):
        parts = []
        for i, pcs in enumerate(self.data):
            inner = ", ".join(f"({pc.orbit},{pc.mult})" for pc in pcs)
            parts.append(f"{self.group.factors[i].spec()}: [{inner}]")
        return "; ".join(parts)


def trivial_parameter(group: GLTypeGroup, kind: InertiaKind = FULL_INERTIA) -> InertialParam:
    one = trivial_character(group.base)
    return InertialParam(
        group,
        tuple((Piece(frobenius_orbit(one, fac.ext.f), fac.n),) for fac in group.factors),
        kind,
    )


def _as_character(raw, base: ResidueDatum) -> TameChar:
    if isinstance(raw, FrobOrbit):
        return raw.rep
    if isinstance(raw, TameChar):
        return raw
    level, residue = raw
    return canonicalize(int(level), int(residue), base)


def validate(group: GLTypeGroup, data, kind: InertiaKind = FULL_INERTIA) -> InertialParam:
    """Canonicalize raw per-factor ``(character, mult)`` pairs.

    A character may be given as a ``TameChar``, a ``FrobOrbit`` or a
    ``(level, residue)`` pair; any element of the orbit will do.
    """
    data = list(data)
    if len(data) != len(group.factors):
        raise BlockError(f"{len(data)} factor data for {len(group.factors)} factors")
    canon = []
    for i, (fac, pairs) in enumerate(zip(group.factors, data)):
        pieces = {}
        for raw, mult in pairs:
            orbit = frobenius_orbit(_as_character(raw, group.base), fac.ext.f)
            if orbit.key() in pieces:
                raise DuplicateOrbitError(f"factor {i}: orbit {orbit} listed twice")
            pieces[orbit.key()] = Piece(orbit, int(mult))
        canon.append(tuple(pieces[k] for k in sorted(pieces)))
    return InertialParam(group, tuple(canon), kind)


def _collect(chars: Counter, g: int) -> tuple[Piece, ...]:
    pieces = []
    seen = set()
    for chi in sorted(c for c, m in chars.items() if m > 0):
        if chi in seen:
            continue
        orbit = frobenius_orbit(chi, g)
        members = orbit.characters()
        if len({chars.get(c, 0) for c in members}) != 1:
            raise FrobeniusStabilityError(f"multiset is not stable under q^{g} at {chi}")
        seen.update(members)
        pieces.append(Piece(orbit, chars[chi]))
    return tuple(sorted(pieces, key=lambda pc: pc.orbit.key()))


def from_characters(
    group: GLTypeGroup, chars: list[Counter], kind: InertiaKind = FULL_INERTIA
) -> InertialParam:
    """Build a parameter from per-factor multisets of characters."""
    return InertialParam(
        group,
        tuple(_collect(c, fac.ext.f) for fac, c in zip(group.factors, chars)),
        kind,
    )


def isotypic_decomposition(phi: InertialParam) -> list[list[tuple[FrobOrbit, int]]]:
    """Per factor, the (orbit, multiplicity) pairs; unique by construction."""
    return [[(pc.orbit, pc.mult) for pc in pcs] for pcs in phi.data]


@dataclass(frozen=True, order=True)
class Component:
    """GL_e to the power ``copies``, the copies permuted by Frobenius."""

    e: int
    copies: int

    @property
    def dim(self) -> int:
        return self.e * self.e * self.copies


@dataclass(frozen=True)
class CentralizerShape:
    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @property
    def dim(self) -> int:
        return sum(c.dim for c in self.components)

    def to_json(self) -> list:
        return [[c.e, c.copies] for c in self.components]

    def __str__(self):
        return " x ".join(f"GL_{c.e}^{c.copies}" for c in self.components)


def copies_multiplier(fac: GLFactor, kind: InertiaKind, p: int) -> int:
    """Index [W_F : W_E K_F]: how many copies restriction of scalars contributes."""
    return intermediate_field(fac.ext, kind, p).degree


def piece_component(phi: InertialParam, i: int, piece: Piece) -> Component:
    fac = phi.group.factors[i]
    return Component(piece.mult, piece.orbit.size * copies_multiplier(fac, phi.kind, phi.base.p))


def centralizer_shape(phi: InertialParam) -> CentralizerShape:
    return CentralizerShape(tuple(piece_component(phi, i, pc) for i, pc in phi.pieces()))


def unipotent_group(phi: InertialParam) -> GLTypeGroup:
    """G_phi: one factor Res_{E_s|F} GL_e per isotypic piece.

    E_s is the degree-s unramified extension (s = orbit size) of the field
    F'' cut out by W_E K_F.
    """
    factors = []
    for i, pc in phi.pieces():
        mid = intermediate_field(phi.group.factors[i].ext, phi.kind, phi.base.p)
        factors.append(GLFactor(pc.mult, ExtShape(mid.e, mid.f * pc.orbit.size)))
    return GLTypeGroup(tuple(factors), phi.base)


@dataclass(frozen=True)
class HeckeDescriptor:
    """Isomorphism type of a tensor product of algebras H(e, q^m)."""

    q: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))
        for rank, m in self.factors:
            if rank < 1 or m < 1:
                raise BlockError(f"bad Hecke factor ({rank}, {m})")

    def to_json(self) -> list:
        return [[rank, m] for rank, m in self.factors]

    def __str__(self):
        return " ⊗ ".join(f"H({rank},{self.q ** m})" for rank, m in self.factors)


def hecke_descriptor(phi: InertialParam) -> HeckeDescriptor:
    """Descriptor of the principal block of G_phi: (e, residue degree) per factor."""
    return HeckeDescriptor(
        phi.base.q, tuple((fac.n, fac.ext.f) for fac in unipotent_group(phi).factors)
    )


def _primitive_residues(base: ResidueDatum, level: int):
    n = modulus(base, level)
    maximal = [n // modulus(base, level // r) for r in primefactors(level)]
    for x in range(max(n, 1)):
        if not any(x % m == 0 for m in maximal):
            yield x


def factor_orbits(
    base: ResidueDatum, n: int, f: int = 1, kind: InertiaKind = FULL_INERTIA
) -> list[FrobOrbit]:
    """All q^f-orbits of size <= n (of ell-regular characters for ell-prime kind)."""
    out = []
    for d in range(1, n * f + 1):
        if d // gcd(d, f) > n:
            continue
        seen = set()
        for x in _primitive_residues(base, d):
            if x in seen:
                continue
            orbit = frobenius_orbit(TameChar(d, x, base), f)
            seen.update(orbit.residues())
            if kind.tag == "ell-prime" and not is_ell_regular(orbit.rep, kind.ell):
                continue
            out.append(orbit)
    return out


def _weighted_multisets(orbits: list[FrobOrbit], n: int):
    orbits = sorted(orbits, key=lambda o: (o.size, o.key()))

    def rec(start, remaining):
        if remaining == 0:
            yield ()
            return
        for i in range(start, len(orbits)):
            s = orbits[i].size
            if s > remaining:
                break
            for m in range(1, remaining // s + 1):
                for rest in rec(i + 1, remaining - m * s):
                    yield (Piece(orbits[i], m),) + rest

    for combo in rec(0, n):
        yield tuple(sorted(combo, key=lambda pc: pc.orbit.key()))


def enumerate_blocks(group: GLTypeGroup, kind: InertiaKind = FULL_INERTIA) -> list[InertialParam]:
    """Every depth-zero parameter of the given kind, in canonical order."""
    if kind.tag == "wild":
        raise WildParameterError("the depth-zero wild parameter set is just the trivial one")
    kind.check_against(group.base.p)
    per_factor = [
        list(_weighted_multisets(factor_orbits(group.base, fac.n, fac.ext.f, kind), fac.n))
        for fac in group.factors
    ]
    blocks = [InertialParam(group, combo, kind) for combo in product(*per_factor)]
    blocks.sort(key=InertialParam.key)
    return blocks


def _orbit_counts(q: int, n: int, ell: int | None) -> dict[int, int]:
    def fixed(k):
        c = q**k - 1
        if ell is not None:
            c //= ell ** int(multiplicity(ell, c))
        return c

    return {
        s: sum(int(mobius(s // k)) * fixed(k) for k in divisors(s)) // s for s in range(1, n + 1)
    }


def count_blocks(group: GLTypeGroup, kind: InertiaKind = FULL_INERTIA) -> int:
    """Block count by necklace counting, without listing any parameter."""
    kind.check_against(group.base.p)
    total = 1
    for fac in group.factors:
        counts = _orbit_counts(group.q**fac.ext.f, fac.n, kind.ell)
        poly = [1] + [0] * fac.n
        for s, num in counts.items():
            if num == 0:
                continue
            new = [0] * (fac.n + 1)
            for w, c in enumerate(poly):
                for m in range(0, (fac.n - w) // s + 1):
                    new[w + m * s] += c * comb(num + m - 1, m)
            poly = new
        total *= poly[fac.n]
    return total


def restrict_to_ell_prime(phi: InertialParam, ell: int) -> InertialParam:
    """Restriction to the prime-to-ell inertia (the reduction map on blocks)."""
    if phi.kind.tag != "inertia":
        raise BlockError("restriction starts from a parameter on full inertia")
    kind = InertiaKind.ell_prime(ell)
    kind.check_against(phi.base.p)
    chars = []
    for i in range(len(phi.group.factors)):
        out = Counter()
        for chi, m in phi.characters(i).items():
            out[ell_regular_part(chi, ell)] += m
        chars.append(out)
    return from_characters(phi.group, chars, kind)


@dataclass(frozen=True)
class FusionClass:
    """Blocks over Qbar_ell that merge into one block over Zbar_ell."""

    ell_param: InertialParam
    blocks: tuple[InertialParam, ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.blocks)


def fuse_blocks(atlas: list[InertialParam], ell: int) -> list[FusionClass]:
    """Partition an atlas into fibres of the restriction to I_F^(ell)."""
    fibres = defaultdict(list)
    labels = {}
    for phi in atlas:
        res = restrict_to_ell_prime(phi, ell)
        fibres[res.key()].append(phi)
        labels[res.key()] = res
    return [FusionClass(labels[k], tuple(fibres[k])) for k in sorted(fibres)]


def factor_parameter(phi: InertialParam, i: int) -> InertialParam:
    """The parameter of the i-th factor alone."""
    return InertialParam(GLTypeGroup((phi.group.factors[i],), phi.base), (phi.data[i],), phi.kind)


def shapiro_transport(phi: InertialParam) -> InertialParam:
    """Parameter of Res_{E|F} GL_n  ->  parameter of GL_n over E.

    Only the residue field changes (q -> q^f); the characters are the same
    inertia characters, re-read at E-levels.
    """
    if len(phi.group.factors) != 1:
        raise BlockError("Shapiro transport acts on a single factor; use factor_parameter()")
    (fac,) = phi.group.factors
    f = fac.ext.f
    new_base = phi.base.extend(f)
    out = Counter()
    for chi, m in phi.characters(0).items():
        k = chi.level // gcd(chi.level, f)
        out[canonicalize(k, embed(chi, f * k), new_base)] += m
    return from_characters(GLTypeGroup.gl(fac.n, new_base), [out], phi.kind)


def shapiro_lift(phi: InertialParam, ext: ExtShape, base: ResidueDatum) -> InertialParam:
    """Inverse of :func:`shapiro_transport` for the extension shape ``ext``."""
    if len(phi.group.factors) != 1 or phi.group.factors[0].ext != ExtShape():
        raise BlockError("Shapiro lift starts from a parameter of GL_n")
    if phi.base != base.extend(ext.f):
        raise BlockError(f"residue field {phi.base} is not the degree-{ext.f} extension of {base}")
    out = Counter()
    for chi, m in phi.characters(0).items():
        out[canonicalize(ext.f * chi.level, chi.residue, base)] += m
    group = GLTypeGroup((GLFactor(phi.group.factors[0].n, ext),), base)
    return from_characters(group, [out], phi.kind)
