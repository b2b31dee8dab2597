"""Command-line front end.

    glblocks atlas --group GL:2 --q 3
    glblocks fuse --group GL:2 --q 3 --ell 2
    glblocks transfer --group GL:2 --q 3 --hom "bc:e=2,f=1" --param trivial
    glblocks factorize --group GL:2 --q 5 --param "2/8*1"
    glblocks plan --group GL:2 --q 5 --param "2/8*1"
    glblocks oracle --group GL:3 --q 4

Exit status: 0 on success, 1 on invalid input or an oracle disagreement,
2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import BlockError
from .lhoms import (
    LHom,
    centralizer_condition,
    classify,
    pushforward,
    reduction_plan,
    strict_unipotent_factorization,
)
from .local_fields import FULL_INERTIA, InertiaKind, ResidueDatum
from .oracle import compare
from .parameters import (
    GLTypeGroup,
    InertialParam,
    centralizer_shape,
    enumerate_blocks,
    fuse_blocks,
    hecke_descriptor,
    trivial_parameter,
    unipotent_group,
    validate,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2

_ORBIT = {
    "type": "object",
    "required": ["rep", "size"],
    "properties": {
        "rep": {
            "type": "object",
            "required": ["level", "residue"],
            "properties": {
                "level": {"type": "integer", "minimum": 1},
                "residue": {"type": "string", "pattern": "^[0-9]+$"},
            },
        },
        "size": {"type": "integer", "minimum": 1},
    },
}

ATLAS_SCHEMA = {
    "type": "object",
    "required": ["group", "q", "kind", "count", "blocks"],
    "properties": {
        "group": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "ext"],
                "properties": {
                    "n": {"type": "integer", "minimum": 1},
                    "ext": {
                        "type": "object",
                        "required": ["e", "f"],
                        "properties": {
                            "e": {"type": "integer", "minimum": 1},
                            "f": {"type": "integer", "minimum": 1},
                        },
                    },
                },
            },
        },
        "q": {"type": "integer", "minimum": 2},
        "kind": {
            "oneOf": [
                {"const": "inertia"},
                {
                    "type": "object",
                    "required": ["kind", "ell"],
                    "properties": {"kind": {"const": "ell-prime"}, "ell": {"type": "integer"}},
                },
            ]
        },
        "count": {"type": "integer", "minimum": 0},
        "blocks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pairs", "centralizer", "G_phi", "hecke"],
                "properties": {
                    "pairs": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["factor", "orbit", "mult"],
                            "properties": {
                                "factor": {"type": "integer", "minimum": 0},
                                "orbit": _ORBIT,
                                "mult": {"type": "integer", "minimum": 1},
                            },
                        },
                    },
                    "centralizer": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "integer"}},
                    },
                    "G_phi": {"type": "string"},
                    "hecke": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 1},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
            },
        },
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glblocks", description="Depth-zero blocks of GL-type groups.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p, param=False, hom=False):
        p.add_argument("--group", required=True, help="e.g. GL:2 or Res:1,2:GL:2xGL:1")
        p.add_argument("--q", help="residue field size")
        p.add_argument("--p", help="residue characteristic (with --a)")
        p.add_argument("--a", default="1", help="q = p**a")
        p.add_argument("--K", choices=["inertia", "ell-prime"], default="inertia")
        p.add_argument("--ell", help="the prime ell for --K ell-prime or fuse")
        p.add_argument("--format", choices=["json", "table"], default="json")
        p.add_argument("--out", help="write output to this file")
        if param:
            p.add_argument(
                "--param",
                default="trivial",
                help="'trivial', inline JSON, a JSON file, or 'L/x*m,...;...' per factor",
            )
        if hom:
            p.add_argument("--hom", help="steps joined by '|', e.g. 'bc:e=3,f=1|autind:f=2'")

    common(sub.add_parser("atlas", help="list every block"))
    common(sub.add_parser("fuse", help="group blocks by their ell-prime restriction"))
    common(sub.add_parser("transfer", help="push a parameter along an L-homomorphism"), True, True)
    common(sub.add_parser("factorize", help="strict unipotent factorization"), True)
    common(sub.add_parser("plan", help="reduction plan for (parameter, L-homomorphism)"), True, True)
    common(sub.add_parser("oracle", help="cross-check enumeration by brute force"))
    return parser


def _base(args) -> ResidueDatum:
    if args.q is not None:
        if args.p is not None:
            raise BlockError("give either --q or --p/--a, not both")
        return ResidueDatum.from_q(_int(args.q, "--q"))
    if args.p is None:
        raise BlockError("one of --q or --p is required")
    return ResidueDatum(_int(args.p, "--p"), _int(args.a, "--a"))


def _int(text: str, name: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise BlockError(f"{name} expects a decimal integer, got {text!r}") from None


def _kind(args, base) -> InertiaKind:
    if args.K == "inertia":
        return FULL_INERTIA
    if args.ell is None:
        raise BlockError("--K ell-prime needs --ell")
    kind = InertiaKind.ell_prime(_int(args.ell, "--ell"))
    kind.check_against(base.p)
    return kind


def parse_param(text: str, group: GLTypeGroup, kind: InertiaKind) -> InertialParam:
    """'trivial', inline JSON, a JSON file, or the compact 'L/x*m,...;...' form."""
    text = text.strip()
    if text == "trivial":
        return trivial_parameter(group, kind)
    if not text.startswith("{") and os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read().strip()
    if text.startswith("{"):
        data = json.loads(text)
        if "kind" not in data:
            data["kind"] = kind.to_json()
        return InertialParam.from_json(data, group if "group" not in data else None)
    chunks = text.split(";")
    raw = []
    for chunk in chunks:
        pairs = []
        for item in filter(None, (s.strip() for s in chunk.split(","))):
            char, _, mult = item.partition("*")
            level, sep, residue = char.partition("/")
            if not sep:
                raise BlockError(f"character {char!r} should read level/residue")
            pairs.append(((_int(level, "level"), _int(residue, "residue")), _int(mult or "1", "mult")))
        raw.append(pairs)
    return validate(group, raw, kind)


def _block_entry(phi: InertialParam) -> dict:
    return {
        "pairs": phi.to_json()["pairs"],
        "centralizer": centralizer_shape(phi).to_json(),
        "G_phi": unipotent_group(phi).spec(),
        "hecke": hecke_descriptor(phi).to_json(),
    }


def _atlas(args, group, kind):
    blocks = enumerate_blocks(group, kind)
    doc = {
        "group": group.to_json(),
        "q": group.q,
        "kind": kind.to_json(),
        "count": len(blocks),
        "blocks": [_block_entry(phi) for phi in blocks],
    }
    rows = [
        (str(phi), str(centralizer_shape(phi)), unipotent_group(phi).spec(), str(hecke_descriptor(phi)))
        for phi in blocks
    ]
    return doc, [("parameter", "centralizer", "G_phi", "hecke")] + rows, EXIT_OK


def _fuse(args, group, kind):
    if args.ell is None:
        raise BlockError("fuse needs --ell")
    ell = _int(args.ell, "--ell")
    classes = fuse_blocks(enumerate_blocks(group), ell)
    doc = {
        "group": group.to_json(),
        "q": group.q,
        "ell": ell,
        "count": len(classes),
        "sizes": [c.size for c in classes],
        "classes": [
            {
                "ell_param": c.ell_param.to_json()["pairs"],
                "size": c.size,
                "blocks": [phi.to_json()["pairs"] for phi in c.blocks],
            }
            for c in classes
        ],
    }
    rows = [(str(c.ell_param), str(c.size)) for c in classes]
    return doc, [("ell-prime parameter", "size")] + rows, EXIT_OK


def _hom(args, base) -> LHom:
    if args.hom is None:
        raise BlockError("--hom is required")
    return LHom.parse(args.hom, base)


def _transfer(args, group, kind):
    xi = _hom(args, group.base)
    phi = parse_param(args.param, group, kind)
    image = pushforward(xi, phi)
    verdict = centralizer_condition(xi, phi)
    doc = {
        "hom": str(xi),
        "source": phi.to_json(),
        "target_group": image.group.spec(),
        "target": image.to_json(),
        "condition": verdict.to_json(),
        "classify": classify(xi, group.base.p),
    }
    rows = [
        ("hom", str(xi)),
        ("source", str(phi)),
        ("target", str(image)),
        ("condition", str(verdict.holds).lower() + (f" ({verdict.reason})" if verdict.reason else "")),
    ]
    return doc, [("field", "value")] + rows, EXIT_OK


def _factorize(args, group, kind):
    phi = parse_param(args.param, group, kind)
    g_phi, xi = strict_unipotent_factorization(phi)
    trivial = trivial_parameter(g_phi, kind)
    verdict = centralizer_condition(xi, trivial)
    ok = pushforward(xi, trivial) == phi and bool(verdict)
    doc = {
        "param": phi.to_json(),
        "G_phi": g_phi.spec(),
        "hom": str(xi),
        "hecke": str(hecke_descriptor(phi)),
        "pushforward_matches": pushforward(xi, trivial) == phi,
        "condition": verdict.to_json(),
    }
    rows = [("G_phi", g_phi.spec()), ("hom", str(xi)), ("hecke", str(hecke_descriptor(phi)))]
    return doc, [("field", "value")] + rows, EXIT_OK if ok else EXIT_INVALID


def _plan(args, group, kind):
    phi = parse_param(args.param, group, kind)
    if args.hom is None:
        g_phi, xi = strict_unipotent_factorization(phi)
        source = trivial_parameter(g_phi, kind)
    else:
        xi, source = _hom(args, group.base), phi
    steps = reduction_plan(source, xi)
    doc = {
        "source": source.to_json(),
        "hom": str(xi),
        "steps": [s.to_json() for s in steps],
    }
    rows = [(s.side or "-", str(s)) for s in steps]
    return doc, [("side", "step")] + rows, EXIT_OK


def _oracle(args, group, kind):
    cmp = compare(group, kind)
    doc = {
        "group": cmp.group,
        "kind": cmp.kind,
        "oracle_count": cmp.oracle_count,
        "enumerated_count": cmp.enumerated_count,
        "agree": cmp.agree,
        "missing": [repr(x) for x in cmp.missing],
        "extra": [repr(x) for x in cmp.extra],
    }
    rows = [
        ("oracle", str(cmp.oracle_count)),
        ("enumerated", str(cmp.enumerated_count)),
        ("agree", str(cmp.agree).lower()),
    ]
    return doc, [("field", "value")] + rows, EXIT_OK if cmp.agree else EXIT_INVALID


_VERBS = {
    "atlas": _atlas,
    "fuse": _fuse,
    "transfer": _transfer,
    "factorize": _factorize,
    "plan": _plan,
    "oracle": _oracle,
}


def _table(rows) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        base = _base(args)
        group = GLTypeGroup.parse(args.group, base)
        kind = _kind(args, base)
        doc, rows, code = _VERBS[args.verb](args, group, kind)
    except (BlockError, json.JSONDecodeError) as exc:
        print(f"glblocks: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n" if args.format == "json" else _table(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
