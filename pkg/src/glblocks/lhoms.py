"""A small catalogue of L-homomorphisms between groups of GL-type.

An :class:`LHom` is a chain of atomic steps applied left to right.  Steps do
not carry a source group; they are checked against whatever group they are
applied to.  Every step acts on parameters character by character, which
keeps pushforward generic: a step says where each character of each source
factor goes, and the target multisets are re-cut into Frobenius orbits.

Mini-language (steps joined by ``|``, applied in that order)::

    levi:1,1>2;2>2          merge consecutive factors (equal extension)
    bc:e=3,f=1[,at=i]       base change along E'/E of shape (e, f)
    autind:f=2[,at=i]       automorphic induction from E down to E_0, [E:E_0]=f
    twist:ord=3|inf[,chi=L/x][,at=i]
    iso:1,0                 target factor perm[i] is source factor i

Without ``at`` a step acts on every factor.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from math import gcd

from .errors import BlockError, CentralizerConditionError, IncompatibleSourceError
from .local_fields import ExtShape, compose_extensions, intermediate_field
from .parameters import (
    CentralizerShape,
    GLFactor,
    GLTypeGroup,
    HeckeDescriptor,
    InertialParam,
    centralizer_shape,
    from_characters,
    hecke_descriptor,
    piece_component,
    trivial_parameter,
    unipotent_group,
)
from .tame_characters import (
    TameChar,
    canonicalize,
    character_order,
    ell_regular_part,
    embed,
    frobenius_orbit,
    frobenius_twist,
    multiply,
    restrict_totally_ramified,
)

__all__ = [
    "LeviEmbed",
    "BaseChange",
    "AutInd",
    "Twist",
    "FactorIso",
    "LHom",
    "ConditionVerdict",
    "ReductionStep",
    "REDUCTION_TAGS",
    "BASE_CASE_TAGS",
    "pushforward",
    "centralizer_condition",
    "classify",
    "strict_unipotent_factorization",
    "reduction_plan",
    "plan_descriptor",
]


def _targets(at, group):
    if at is None:
        return range(len(group.factors))
    if not 0 <= at < len(group.factors):
        raise IncompatibleSourceError(f"factor index {at} out of range for {group.spec()}")
    return (at,)


def _at_suffix(at):
    return "" if at is None else f",at={at}"


@dataclass(frozen=True)
class LeviEmbed:
    """Block-diagonal embedding: each part merges consecutive source factors."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        if not self.parts or any(not p or min(p) < 1 for p in self.parts):
            raise BlockError(f"bad Levi partition {self.parts}")

    def _layout(self, group):
        consumed = sum(len(p) for p in self.parts)
        if consumed > len(group.factors):
            raise IncompatibleSourceError(f"Levi {self} needs {consumed} factors")
        where, factors, i = [], [], 0
        for j, part in enumerate(self.parts):
            chunk = group.factors[i : i + len(part)]
            if tuple(fac.n for fac in chunk) != part:
                raise IncompatibleSourceError(f"Levi part {part} does not match {group.spec()}")
            if len({fac.ext for fac in chunk}) != 1:
                raise IncompatibleSourceError(f"Levi part {part} mixes extensions")
            factors.append(GLFactor(sum(part), chunk[0].ext))
            where += [j] * len(part)
            i += len(part)
        for fac in group.factors[i:]:
            where.append(len(factors))
            factors.append(fac)
        return where, GLTypeGroup(tuple(factors), group.base)

    def target(self, group):
        return self._layout(group)[1]

    def images(self, group, kind, i, chi):
        return [(self._layout(group)[0][i], chi)]

    def __str__(self):
        return "levi:" + ";".join(
            ",".join(map(str, p)) + f">{sum(p)}" for p in self.parts
        )


@dataclass(frozen=True)
class BaseChange:
    """Restriction of the parameter to W_{E'} for E'/E of shape ``ext``."""

    ext: ExtShape
    at: int | None = None

    def target(self, group):
        self.ext.check_tame(group.base.p)
        touched = set(_targets(self.at, group))
        return GLTypeGroup(
            tuple(
                GLFactor(fac.n, compose_extensions(fac.ext, self.ext)) if i in touched else fac
                for i, fac in enumerate(group.factors)
            ),
            group.base,
        )

    def images(self, group, kind, i, chi):
        if i in _targets(self.at, group):
            chi = restrict_totally_ramified(chi, self.ext.e)
        return [(i, chi)]

    def __str__(self):
        return f"bc:e={self.ext.e},f={self.ext.f}{_at_suffix(self.at)}"


@dataclass(frozen=True)
class AutInd:
    """Induction from W_E to W_{E_0}, E/E_0 unramified of degree ``f``."""

    f: int
    at: int | None = None

    def __post_init__(self):
        if self.f < 1:
            raise BlockError(f"induction degree {self.f} must be positive")

    def target(self, group):
        touched = set(_targets(self.at, group))
        factors = []
        for i, fac in enumerate(group.factors):
            if i in touched:
                if fac.ext.f % self.f:
                    raise IncompatibleSourceError(
                        f"factor {i}: residue degree {fac.ext.f} not divisible by {self.f}"
                    )
                fac = GLFactor(fac.n * self.f, ExtShape(fac.ext.e, fac.ext.f // self.f))
            factors.append(fac)
        return GLTypeGroup(tuple(factors), group.base)

    def images(self, group, kind, i, chi):
        if i not in _targets(self.at, group):
            return [(i, chi)]
        step = group.factors[i].ext.f // self.f
        return [(i, frobenius_twist(chi, step * j)) for j in range(self.f)]

    def __str__(self):
        return f"autind:f={self.f}{_at_suffix(self.at)}"


@dataclass(frozen=True)
class Twist:
    """Tensoring with a character of W_E.

    ``char`` is its restriction to inertia (None when unramified) and
    ``order`` its order, None meaning infinite.
    """

    order: int | None = None
    char: TameChar | None = None
    at: int | None = None

    def __post_init__(self):
        if self.order is not None and self.order < 1:
            raise BlockError(f"twist order {self.order} must be positive")
        if self.order is not None and self.char is not None:
            if self.order % character_order(self.char):
                raise BlockError(
                    f"order {self.order} is not a multiple of the order of {self.char}"
                )

    def target(self, group):
        if self.char is not None:
            if self.char.base != group.base:
                raise IncompatibleSourceError("twist character over a different residue field")
            for i in _targets(self.at, group):
                if frobenius_orbit(self.char, group.factors[i].ext.f).size != 1:
                    raise IncompatibleSourceError(
                        f"factor {i}: {self.char} is not fixed by Frobenius, so it does not"
                        " extend to the Weil group"
                    )
        return group

    def images(self, group, kind, i, chi):
        if self.char is None or i not in _targets(self.at, group):
            return [(i, chi)]
        t = self.char if kind.tag == "inertia" else ell_regular_part(self.char, kind.ell)
        return [(i, multiply(chi, t))]

    def __str__(self):
        ord_ = "inf" if self.order is None else str(self.order)
        chi = "" if self.char is None else f",chi={self.char}"
        return f"twist:ord={ord_}{chi}{_at_suffix(self.at)}"


@dataclass(frozen=True)
class FactorIso:
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise BlockError(f"{self.perm} is not a permutation")

    def target(self, group):
        if len(self.perm) != len(group.factors):
            raise IncompatibleSourceError(f"permutation of {len(self.perm)} factors")
        factors = [None] * len(self.perm)
        for i, j in enumerate(self.perm):
            factors[j] = group.factors[i]
        return GLTypeGroup(tuple(factors), group.base)

    def images(self, group, kind, i, chi):
        return [(self.perm[i], chi)]

    def __str__(self):
        return "iso:" + ",".join(map(str, self.perm))


_STEP_RE = re.compile(r"^(levi|bc|autind|twist|iso):(.*)$")


def _options(body: str) -> dict:
    out = {}
    for item in body.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise BlockError(f"expected key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _parse_step(text: str, base):
    m = _STEP_RE.match(text.strip())
    if not m:
        raise BlockError(f"unknown L-homomorphism step {text!r}")
    verb, body = m.groups()
    try:
        if verb == "levi":
            parts = []
            for chunk in body.split(";"):
                lhs, _, rhs = chunk.partition(">")
                part = tuple(int(x) for x in lhs.split(","))
                if rhs and int(rhs) != sum(part):
                    raise BlockError(f"Levi part {chunk!r} does not add up")
                parts.append(part)
            return LeviEmbed(tuple(parts))
        if verb == "iso":
            return FactorIso(tuple(int(x) for x in body.split(",")))
        opts = _options(body)
        at = int(opts.pop("at")) if "at" in opts else None
        if verb == "bc":
            step = BaseChange(ExtShape(int(opts.pop("e", 1)), int(opts.pop("f", 1))), at)
        elif verb == "autind":
            step = AutInd(int(opts.pop("f")), at)
        else:
            ord_ = opts.pop("ord", "inf")
            char = None
            if "chi" in opts:
                if base is None:
                    raise BlockError("a twist character needs a residue field")
                level, _, residue = opts.pop("chi").partition("/")
                char = canonicalize(int(level), int(residue), base)
            step = Twist(None if ord_ == "inf" else int(ord_), char, at)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, BlockError):
            raise
        raise BlockError(f"malformed step {text!r}: {exc}") from exc
    if opts:
        raise BlockError(f"unexpected options {sorted(opts)} in {text!r}")
    return step


@dataclass(frozen=True)
class LHom:
    """Composite of atomic steps, first step applied first."""

    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    @classmethod
    def parse(cls, text: str, base=None) -> LHom:
        text = text.strip()
        if text in ("", "id"):
            return cls()
        return cls(tuple(_parse_step(chunk, base) for chunk in text.split("|")))

    def then(self, other: LHom) -> LHom:
        return LHom(self.steps + other.steps)

    def target(self, group: GLTypeGroup) -> GLTypeGroup:
        for step in self.steps:
            group = step.target(group)
        return group

    def __str__(self):
        return "|".join(str(s) for s in self.steps) or "id"


def _apply(step, phi: InertialParam):
    """Push ``phi`` through one step; also report where each source piece lands."""
    group = step.target(phi.group)
    chars = [Counter() for _ in group.factors]
    landing = {}
    for i, pc in phi.pieces():
        spots = set()
        for chi in pc.orbit.characters():
            for j, img in step.images(phi.group, phi.kind, i, chi):
                chars[j][img] += pc.mult
                spots.add((j, img))
        landing[(i, pc.orbit.key())] = spots
    new = from_characters(group, chars, phi.kind)
    links = {}
    for src, spots in landing.items():
        links[src] = sorted(
            {(j, frobenius_orbit(img, group.factors[j].ext.f).key()) for j, img in spots}
        )
    return new, links


def pushforward(xi: LHom, phi: InertialParam) -> InertialParam:
    """Parameter of the target group obtained by composing ``phi`` with ``xi``."""
    for step in xi.steps:
        phi, _ = _apply(step, phi)
    return phi


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of the centralizer check, truthy when it holds."""

    holds: bool
    source: CentralizerShape
    target: CentralizerShape
    pairing: tuple = ()
    reason: str = ""
    failed_step: int | None = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "reason": self.reason,
            "failed_step": self.failed_step,
            "source_dim": self.source.dim,
            "target_dim": self.target.dim,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "pairing": [
                {"source": list(s), "target": list(t), "component": [c.e, c.copies]}
                for s, t, c in self.pairing
            ],
        }


def _piece_index(phi):
    return {(i, pc.orbit.key()): pc for i, pc in phi.pieces()}


def _step_mismatch(phi, new, links) -> str:
    src_pieces, tgt_pieces = _piece_index(phi), _piece_index(new)
    hit = {}
    for src, spots in links.items():
        if len(spots) != 1:
            return f"piece {src} splits into {len(spots)} pieces"
        if spots[0] in hit:
            return f"pieces {hit[spots[0]]} and {src} merge"
        hit[spots[0]] = src
        a = piece_component(phi, src[0], src_pieces[src])
        b = piece_component(new, spots[0][0], tgt_pieces[spots[0]])
        if a != b:
            return f"piece {src}: GL_{a.e}^{a.copies} against GL_{b.e}^{b.copies}"
    return ""


def centralizer_condition(xi: LHom, phi: InertialParam) -> ConditionVerdict:
    """Does ``xi`` identify the centralizer of ``phi`` with that of its pushforward?

    Every catalogue step is injective on dual groups, so the composite is an
    isomorphism iff each step is.  A step is checked on isotypic pieces: each
    source piece must land in a single target piece, distinct pieces in
    distinct ones, with the same (rank, copies).  Dimensions are compared
    as a guard.
    """
    start = phi
    track = {key: key for key in _piece_index(phi)}
    reason, failed = "", None
    for k, step in enumerate(xi.steps):
        new, links = _apply(step, phi)
        if not reason:
            reason = _step_mismatch(phi, new, links)
            if reason:
                failed = k
            else:
                track = {key: links[cur][0] for key, cur in track.items()}
        phi = new
    src, tgt = centralizer_shape(start), centralizer_shape(phi)
    if not reason and src.dim != tgt.dim:
        reason = f"dimension {src.dim} against {tgt.dim}"
    pairing = ()
    if not reason:
        before, after = _piece_index(start), _piece_index(phi)
        pairing = tuple(
            (s, t, piece_component(start, s[0], before[s]))
            for s, t in sorted(track.items())
        )
        assert all(
            piece_component(phi, t[0], after[t]) == c for _, t, c in pairing
        ), "structural check passed with mismatched components"
    return ConditionVerdict(not reason, src, tgt, pairing, reason, failed)


def classify(xi: LHom, p: int | None = None) -> dict:
    """Tameness and boundedness flags.

    The catalogue has no wild steps, so ``tame`` can only fail when a base
    change is wildly ramified for the given p.
    """
    tame = p is None or all(
        s.ext.is_tame(p) for s in xi.steps if isinstance(s, BaseChange)
    )
    bounded = all(s.order is not None for s in xi.steps if isinstance(s, Twist))
    return {"tame": tame, "bounded": bounded}


def strict_unipotent_factorization(phi: InertialParam) -> tuple[GLTypeGroup, LHom]:
    """G_phi with an L-homomorphism sending its trivial parameter to ``phi``.

    Factor j of G_phi (one per isotypic piece, Res_{E_s|F} GL_e) is raised to
    the extension of its source factor by a totally ramified base change,
    twisted by the piece's representative and induced down by the orbit
    size; a Levi embedding then reassembles each source factor.
    """
    g_phi = unipotent_group(phi)
    steps, parts = [], []
    j = 0
    for i, (fac, pieces) in enumerate(zip(phi.group.factors, phi.data)):
        mid = intermediate_field(fac.ext, phi.kind, phi.base.p)
        part = []
        for pc in pieces:
            s = pc.orbit.size
            if fac.ext.e > mid.e:
                steps.append(BaseChange(ExtShape(fac.ext.e // mid.e, 1), j))
            rep = pc.orbit.rep
            if not rep.is_trivial:
                steps.append(Twist(character_order(rep), rep, j))
            if s > 1:
                steps.append(AutInd(s, j))
            part.append(pc.weight)
            j += 1
        parts.append(tuple(part))
    if any(len(p) > 1 for p in parts):
        steps.append(LeviEmbed(tuple(parts)))
    return g_phi, LHom(tuple(steps))


REDUCTION_TAGS = (
    "Shapiro",
    "Levi",
    "UnramifiedAutInd",
    "TotallyRamifiedBaseChange",
    "UnramifiedTwist",
    "HeckeSimpleType",
)
BASE_CASE_TAGS = ("UnramifiedAutInd", "TotallyRamifiedBaseChange", "UnramifiedTwist")


@dataclass(frozen=True)
class ReductionStep:
    """One node of a reduction plan.

    Base cases carry the homomorphism and parameter they stand for, and the
    verdict of the centralizer check on them.
    """

    tag: str
    payload: dict = field(default_factory=dict)
    side: str = ""
    hom: LHom | None = None
    param: InertialParam | None = None
    verdict: ConditionVerdict | None = None

    def __post_init__(self):
        if self.tag not in REDUCTION_TAGS:
            raise BlockError(f"unknown reduction step {self.tag!r}")

    def to_json(self) -> dict:
        out = {"tag": self.tag, "side": self.side, "payload": self.payload}
        if self.hom is not None:
            out["check"] = {
                "hom": str(self.hom),
                "group": self.param.group.spec(),
                "q": self.param.base.q,
                "holds": bool(self.verdict),
            }
        return out

    def __str__(self):
        if self.tag == "HeckeSimpleType":
            return f"HeckeSimpleType {self.payload['hecke']}"
        args = ",".join(f"{k}={v}" for k, v in self.payload.items())
        return f"{self.tag}({args})"


def _over(chi: TameChar, f: int, new_base) -> TameChar:
    k = chi.level // gcd(chi.level, f)
    return canonicalize(k, embed(chi, f * k), new_base)


def _base_case(tag, payload, side, hom, group, kind):
    param = trivial_parameter(group, kind)
    verdict = centralizer_condition(hom, param)
    if not verdict:
        raise CentralizerConditionError(f"base case {tag} {payload} fails: {verdict.reason}")
    return ReductionStep(tag, payload, side, hom, param, verdict)


def _factor_steps(phi: InertialParam, i: int, side: str) -> list[ReductionStep]:
    fac, pieces = phi.group.factors[i], phi.data[i]
    kind = phi.kind
    mid = intermediate_field(fac.ext, kind, phi.base.p)
    trivial = len(pieces) == 1 and pieces[0].orbit.is_trivial
    if trivial and mid == fac.ext:
        return []
    out = []
    where = {"factor": i}
    if mid != ExtShape():
        out.append(ReductionStep("Shapiro", {**where, "field": str(mid)}, side))
    base = phi.base.extend(mid.f)
    if fac.ext != mid:
        e = fac.ext.e // mid.e
        out.append(
            _base_case(
                "TotallyRamifiedBaseChange",
                {**where, "e": e},
                side,
                LHom((BaseChange(ExtShape(e, 1)),)),
                GLTypeGroup.gl(fac.n, base),
                kind,
            )
        )
    if len(pieces) > 1:
        out.append(ReductionStep("Levi", {**where, "split": [pc.weight for pc in pieces]}, side))
    for pc in pieces:
        s, rep = pc.orbit.size, _over(pc.orbit.rep, mid.f, base)
        group = GLTypeGroup((GLFactor(pc.mult, ExtShape(1, s)),), base)
        twist = Twist(character_order(rep), rep) if not rep.is_trivial else None
        if s > 1:
            out.append(
                _base_case(
                    "UnramifiedAutInd",
                    {**where, "f": s},
                    side,
                    LHom(((twist,) if twist else ()) + (AutInd(s),)),
                    group,
                    kind,
                )
            )
        if twist is not None:
            out.append(
                _base_case(
                    "UnramifiedTwist",
                    {**where, "chi": str(rep), "order": twist.order},
                    side,
                    LHom((twist,)),
                    group,
                    kind,
                )
            )
    return out


def reduction_plan(phi_src: InertialParam, xi: LHom) -> list[ReductionStep]:
    """Compile the chain of reductions behind the equivalence for (phi', xi).

    Both sides are reduced to unipotent blocks of unramified GL-type groups:
    Shapiro down to the field cut out by K_F, a totally ramified base change,
    a Levi split into isotypic pieces, then unramified induction and twist
    per piece.  The plan ends in the common Hecke algebra type.
    """
    verdict = centralizer_condition(xi, phi_src)
    if not verdict:
        raise CentralizerConditionError(f"centralizer condition fails: {verdict.reason}")
    phi = pushforward(xi, phi_src)
    plan = []
    for side, param in (("source", phi_src), ("target", phi)):
        for i in range(len(param.group.factors)):
            plan += _factor_steps(param, i, side)
    desc = hecke_descriptor(phi)
    plan.append(ReductionStep("HeckeSimpleType", {"hecke": str(desc), "q": desc.q, "factors": desc.to_json()}))
    return plan


def plan_descriptor(plan: list[ReductionStep]) -> HeckeDescriptor | None:
    """The Hecke type a plan ends in, or None if it does not end in one."""
    if not plan or plan[-1].tag != "HeckeSimpleType":
        return None
    last = plan[-1].payload
    return HeckeDescriptor(last["q"], tuple(tuple(x) for x in last["factors"]))
