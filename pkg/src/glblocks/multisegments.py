"""Multisegment labels for the irreducible objects of a unipotent block.

An unramified character is modelled as a line (an opaque label standing for
a character modulo integer powers of nu = |det|) plus an integer offset.  A
segment (line, k, a) is chi nu^k, ..., chi nu^(k+a-1).  Nothing numeric is
stored about the characters themselves: every map used here (twisting,
relabelling along a transfer) acts on this lattice.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass

from .errors import BlockError

__all__ = [
    "UnramLine",
    "Segment",
    "Multisegment",
    "steinberg",
    "weight",
    "validate_for_block",
    "transfer_levi",
    "transfer_base_change_tr",
    "untransfer_base_change_tr",
    "transfer_unipotent",
    "untransfer_unipotent",
    "twist_unramified",
]

CONVENTIONS = ("Z", "L")


@dataclass(frozen=True, order=True)
class UnramLine:
    label: str

    def __str__(self):
        return self.label


@dataclass(frozen=True, order=True)
class Segment:
    line: UnramLine
    offset: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise BlockError(f"segment length {self.length} must be positive")

    def to_json(self) -> dict:
        return {"line": self.line.label, "offset": self.offset, "length": self.length}

    @classmethod
    def from_json(cls, data: dict) -> Segment:
        return cls(UnramLine(str(data["line"])), int(data["offset"]), int(data["length"]))


@dataclass(frozen=True)
class Multisegment:
    """A multiset of segments kept in canonical (line, offset, length) order.

    ``convention`` records whether the label is read as Z(m) or L(m); the
    combinatorics below do not depend on it.
    """

    segments: tuple[Segment, ...] = ()
    convention: str = "Z"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(sorted(self.segments)))
        if self.convention not in CONVENTIONS:
            raise BlockError(f"unknown convention {self.convention!r}")

    @property
    def weight(self) -> int:
        return sum(s.length for s in self.segments)

    def lines(self) -> set[UnramLine]:
        return {s.line for s in self.segments}

    def to_json(self) -> dict:
        return {"segments": [s.to_json() for s in self.segments]}

    @classmethod
    def from_json(cls, data: dict, convention: str = "Z") -> Multisegment:
        return cls(tuple(Segment.from_json(s) for s in data["segments"]), convention)

    def __len__(self):
        return len(self.segments)

    def __str__(self):
        inner = ", ".join(f"({s.line},{s.offset},{s.length})" for s in self.segments)
        return f"{self.convention}{{{inner}}}"


def steinberg(e: int, line: UnramLine = UnramLine("l0"), convention: str = "Z") -> Multisegment:
    """The single segment of length e (the generalized Steinberg label)."""
    return Multisegment((Segment(line, 0, e),), convention)


def weight(m: Multisegment) -> int:
    return m.weight


def validate_for_block(m: Multisegment, hecke_factor: tuple[int, int]) -> bool:
    """Does ``m`` label a simple module of H(e, q^f)?  Only the rank matters."""
    e, _f = hecke_factor
    return m.weight == e


def transfer_levi(parts: Iterable[Multisegment]) -> Multisegment:
    """Parabolic induction from a Levi: the union of the multisegments."""
    parts = list(parts)
    conventions = {m.convention for m in parts}
    if len(conventions) > 1:
        raise BlockError("cannot combine Z- and L-labelled multisegments")
    convention = conventions.pop() if conventions else "Z"
    return Multisegment(tuple(s for m in parts for s in m.segments), convention)


def _as_map(relabel) -> Callable[[UnramLine], UnramLine]:
    if relabel is None:
        return lambda line: line
    if isinstance(relabel, Mapping):

        def look(line):
            try:
                return relabel[line]
            except KeyError:
                raise BlockError(f"relabelling does not cover line {line}") from None

        return look
    return relabel


def _relabel(m: Multisegment, relabel) -> Multisegment:
    pi = _as_map(relabel)
    images = {}
    for line in m.lines():
        images[line] = pi(line)
    if len(set(images.values())) != len(images):
        raise BlockError("relabelling is not injective on the lines of the multisegment")
    return Multisegment(
        tuple(Segment(images[s.line], s.offset, s.length) for s in m.segments), m.convention
    )


def _inverse(relabel: Mapping, m: Multisegment) -> dict:
    back = {}
    for src, dst in relabel.items():
        if dst in back and back[dst] != src:
            raise BlockError(f"relabelling is not injective: two lines go to {dst}")
        back[dst] = src
    missing = m.lines() - set(back)
    if missing:
        raise BlockError(f"lines {sorted(map(str, missing))} are not in the image")
    return back


def transfer_base_change_tr(
    m: Multisegment, relabel: Mapping | None = None, totally_ramified: bool = True
) -> Multisegment:
    """Base change along a totally ramified extension.

    The norm identifies the unramified character lattices, so only lines are
    renamed (by default they are kept).
    """
    if not totally_ramified:
        raise BlockError("this transfer is only defined for totally ramified base change")
    return _relabel(m, relabel)


def untransfer_base_change_tr(m: Multisegment, relabel: Mapping | None = None) -> Multisegment:
    if relabel is None:
        return m
    return _relabel(m, _inverse(relabel, m))


def transfer_unipotent(m: Multisegment, relabel) -> Multisegment:
    """Transfer from the unipotent block of G_phi: (l, k, a) -> (pi(l), k, a)."""
    return _relabel(m, relabel)


def untransfer_unipotent(m: Multisegment, relabel: Mapping) -> Multisegment:
    """Inverse of :func:`transfer_unipotent` on its image."""
    return _relabel(m, _inverse(relabel, m))


def twist_unramified(m: Multisegment, shift: int | Mapping[UnramLine, int] = 0) -> Multisegment:
    """Twist by nu^shift; a mapping gives a separate shift per line (default 0)."""
    def by_line(line):
        return int(shift.get(line, 0)) if isinstance(shift, Mapping) else int(shift)

    return Multisegment(
        tuple(Segment(s.line, s.offset + by_line(s.line), s.length) for s in m.segments),
        m.convention,
    )
