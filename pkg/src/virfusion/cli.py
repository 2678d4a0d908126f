"""Command-line front end.

Subcommands: weights, singular, zhu-image, fusion, fusion-product, threept,
limit, verify.  Output formats: text (default, exact rationals only), json
(schema_version 1, sorted keys, byte-stable across runs) and csv.  Exit
codes: 0 success, 1 invalid input, 2 internal disagreement found by verify.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .cache import SingularVectorCache, cached_singular_vector
from .exact import OddHalfPower, rat
from .fusion import (
    MIXED_RULE_NOTE,
    NotIrreducibleVerma,
    cross_validate,
    fusion_c1q,
    fusion_minimal,
    fusion_product_c1q,
    fusion_verma_mixed,
    fusion_verma_target_zero,
)
from .threept import (
    LabelOutOfBox,
    NotStabilized,
    ThreePointDatum,
    evaluate_descendant,
    limit_check,
    limit_sequence,
)
from .verma import (
    C1qIrreducible,
    HighestWeightParams,
    InvalidLabel,
    MinimalIrreducible,
    NonUniqueSolution,
    SolverFailure,
    VermaVector,
    central_charge_pq,
    kac_weight_pq,
    maximal_submodule_generators,
    weight_c1q,
)
from .zhu import equivalence_sweep, singular_image

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Invalid command line; the message names the offending flag."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact rational: {text!r} ({exc})") from exc


def _index_pair(text: str) -> Tuple[int, int]:
    bits = text.split(",")
    if len(bits) != 2:
        raise UsageError(f"expected 'i,s' but got {text!r}")
    try:
        return int(bits[0]), int(bits[1])
    except ValueError as exc:
        raise UsageError(f"expected integers in {text!r}") from exc


def _parse_label(text: str):
    kind, _, rest = text.partition(":")
    nums = rest.split(",") if rest else []
    try:
        values = [int(x) for x in nums]
    except ValueError as exc:
        raise UsageError(f"bad label {text!r}") from exc
    if kind == "c1q" and len(values) == 3:
        return C1qIrreducible(*values)
    if kind == "minimal" and len(values) == 4:
        return MinimalIrreducible(*values)
    raise UsageError(
        f"bad label {text!r}; expected 'c1q:q,i,s' or 'minimal:p,q,r,s'"
    )


def _emit_json(payload: dict) -> str:
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _vector_text_lines(vec: VermaVector) -> List[str]:
    lines = []
    for part, coeff in vec.items():
        word = " ".join(f"L({-p})" for p in part.parts) or "v"
        lines.append(f"  {str(coeff):>12}  *  {word}")
    return lines


# ---------------------------------------------------------------------------
# subcommands


def _cmd_weights(args) -> Tuple[int, str]:
    p, q = args.p, args.q
    if p < 1 or q < 1:
        raise UsageError("--p and --q must be positive")
    c = central_charge_pq(p, q)
    if p == 1:
        entries = [
            {"i": i, "s": s, "h": weight_c1q(q, i, s)}
            for i in range(1, args.imax + 1)
            for s in range(1, q + 1)
        ]
        key_names = ("i", "s")
    else:
        import math

        if math.gcd(p, q) != 1:
            raise UsageError("--p and --q must be coprime for a minimal-model table")
        entries = [
            {"r": r, "s": s, "h": kac_weight_pq(p, q, r, s)}
            for r in range(1, p)
            for s in range(1, q)
        ]
        key_names = ("r", "s")
    if args.format == "json":
        payload = {
            "p": p,
            "q": q,
            "c": str(c),
            "weights": [
                {key_names[0]: e[key_names[0]], "s": e["s"], "h": str(e["h"])}
                for e in entries
            ],
        }
        return 0, _emit_json(payload)
    if args.format == "csv":
        rows = [(p, q, e[key_names[0]], e["s"], str(c), str(e["h"])) for e in entries]
        return 0, _emit_csv(("p", "q", key_names[0], "s", "c", "h"), rows)
    lines = [f"central charge c({p},{q}) = {c}", f"{key_names[0]:>4} {'s':>4} {'h':>12}"]
    for e in entries:
        lines.append(f"{e[key_names[0]]:>4} {e['s']:>4} {str(e['h']):>12}")
    return 0, "\n".join(lines) + "\n"


def _cmd_singular(args) -> Tuple[int, str]:
    params = HighestWeightParams(args.c, args.h)
    cache = SingularVectorCache(args.cache) if args.cache else None
    vec = cached_singular_vector(params, args.level, cache=cache, verbose=args.verbose)
    if args.format == "json":
        payload = {
            "c": str(params.c),
            "h": str(params.h),
            "level": args.level,
            "singular": vec.to_json_dict() if vec is not None else None,
        }
        return 0, _emit_json(payload)
    if args.format == "csv":
        rows = []
        if vec is not None:
            rows = [(" ".join(map(str, part.parts)), str(coeff)) for part, coeff in vec.items()]
        return 0, _emit_csv(("partition", "coeff"), rows)
    if vec is None:
        return 0, f"no singular vector at grade {args.level} of M({params.c}, {params.h})\n"
    lines = [f"singular vector at grade {args.level} of M({params.c}, {params.h}):"]
    lines += _vector_text_lines(vec)
    return 0, "\n".join(lines) + "\n"


def _cmd_zhu_image(args) -> Tuple[int, str]:
    label = _parse_label(args.label)
    gens = maximal_submodule_generators(label)
    images = singular_image(label)
    if args.format == "json":
        payload = {
            "label": args.label,
            "images": [
                {
                    "c": str(cls.source_params.c),
                    "h": str(cls.source_params.h),
                    "grade": grade,
                    "poly": [
                        {"i": i, "j": j, "coeff": str(coeff)}
                        for (i, j), coeff in cls.poly.terms()
                    ],
                }
                for (grade, _), cls in zip(gens, images)
            ],
        }
        return 0, _emit_json(payload)
    if args.format == "csv":
        rows = []
        for (grade, _), cls in zip(gens, images):
            for (i, j), coeff in cls.poly.terms():
                rows.append((grade, i, j, str(coeff)))
        return 0, _emit_csv(("grade", "i", "j", "coeff"), rows)
    lines = []
    for (grade, _), cls in zip(gens, images):
        lines.append(f"grade {grade} image in Q[x, y]:")
        for (i, j), coeff in cls.poly.terms():
            lines.append(f"  {str(coeff):>12} * x^{i} y^{j}")
    return 0, "\n".join(lines) + "\n"


def _cmd_fusion(args) -> Tuple[int, str]:
    if args.verma_hprime is not None:
        if args.verma_h is None:
            raise UsageError("--verma-hprime requires --verma-h")
        value = fusion_verma_mixed(args.q, args.w1, args.verma_h, args.verma_hprime)
        witness = None
    elif args.verma_h is not None:
        if args.w2 is None:
            raise UsageError("--verma-h without --verma-hprime requires --w2")
        value = fusion_verma_target_zero(args.q, args.w1, args.w2, args.verma_h)
        witness = None
    else:
        if args.w2 is None or args.w3 is None:
            raise UsageError("fusion requires --w2 and --w3 (or a --verma-h variant)")
        answer = fusion_c1q(args.q, args.w1, args.w2, args.w3)
        value, witness = answer.value, answer.witness
    if args.format == "json":
        return 0, _emit_json({"N": value, "witness": list(witness) if witness else None})
    if args.format == "csv":
        row = (value, witness[0] if witness else "", witness[1] if witness else "")
        return 0, _emit_csv(("N", "witness_i", "witness_s"), [row])
    if witness:
        return 0, f"N = {value}  (witness i = {witness[0]}, s = {witness[1]})\n"
    return 0, f"N = {value}\n"


def _cmd_fusion_product(args) -> Tuple[int, str]:
    labels = sorted(fusion_product_c1q(args.q, args.w1, args.w2), key=lambda l: (l.i, l.s))
    if args.format == "json":
        payload = {
            "labels": [[l.i, l.s] for l in labels],
            "weights": [str(l.weight) for l in labels],
        }
        return 0, _emit_json(payload)
    if args.format == "csv":
        return 0, _emit_csv(("i", "s", "h"), [(l.i, l.s, str(l.weight)) for l in labels])
    lines = [f"(i, s) = ({l.i}, {l.s})   h = {l.weight}" for l in labels]
    return 0, "\n".join(lines) + "\n"


def _cmd_threept(args) -> Tuple[int, str]:
    q = args.q
    labels = [C1qIrreducible(q, i, s) for i, s in (args.w1, args.w2, args.w3)]
    datum = ThreePointDatum(
        central_charge_pq(1, q), labels[0].weight, labels[1].weight, labels[2].weight
    )
    (_, gen), = maximal_submodule_generators(labels[args.slot - 1])
    result = evaluate_descendant(datum, args.slot, gen)
    if args.format == "json":
        payload = {"coeff": str(result.coeff), "shift": result.shift, "slot": args.slot}
        return 0, _emit_json(payload)
    if args.format == "csv":
        return 0, _emit_csv(("coeff", "shift", "slot"), [(str(result.coeff), result.shift, args.slot)])
    tag = "decouples" if result.coeff == 0 else "obstructs"
    return 0, (
        f"slot {args.slot} singular insertion: coeff = {result.coeff}, "
        f"shift = {result.shift}  ({tag})\n"
    )


def _cmd_limit(args) -> Tuple[int, str]:
    labels = (args.w1, args.w2, args.w3)
    rows = limit_sequence(args.q, labels, args.kmin, args.kmax)
    report = limit_check(rows, args.q, labels)
    row_dicts = [
        {
            "k": row.k,
            "c_k": str(row.c_k),
            "h1": str(row.h1k),
            "h2": str(row.h2k),
            "h3": str(row.h3k),
            "fusion_allowed": row.fusion_allowed,
            "slot1_null_coeff": str(row.slot1_null_coeff),
        }
        for row in rows
    ]
    if args.format == "json":
        return 0, _emit_json({"rows": row_dicts, "report": report.to_json_dict()})
    if args.format == "csv":
        rows_csv = [
            (
                r["k"], r["c_k"], r["h1"], r["h2"], r["h3"],
                "true" if r["fusion_allowed"] else "false",
                r["slot1_null_coeff"],
            )
            for r in row_dicts
        ]
        return 0, _emit_csv(
            ("k", "c_k", "h1", "h2", "h3", "fusion_allowed", "slot1_null_coeff"), rows_csv
        )
    widths = (4, 14, 14, 14, 14, 8, 16)
    header = ("k", "c_k", "h1", "h2", "h3", "allowed", "slot1_coeff")
    lines = ["  ".join(f"{h:>{w}}" for h, w in zip(header, widths))]
    for r in row_dicts:
        cells = (
            str(r["k"]), r["c_k"], r["h1"], r["h2"], r["h3"],
            "true" if r["fusion_allowed"] else "false", r["slot1_null_coeff"],
        )
        lines.append("  ".join(f"{c:>{w}}" for c, w in zip(cells, widths)))
    lines.append(f"c limit {report.c_limit}; closed form of c_k - limit: {report.c_closed_form}")
    lines.append(f"convergence ok: {report.ok}")
    return 0, "\n".join(lines) + "\n"


def _cmd_verify(args) -> Tuple[int, str]:
    cv = cross_validate(args.qmax, args.imax)
    eq_total, eq_failures = equivalence_sweep(args.qmax, args.imax)
    ok = cv.ok and not eq_failures
    if args.format == "json":
        payload = {
            "cross_validation": cv.to_json_dict(),
            "equivalence": {"total": eq_total, "failures": eq_failures},
            "notes": [MIXED_RULE_NOTE],
            "ok": ok,
        }
        out = _emit_json(payload)
    elif args.format == "csv":
        out = _emit_csv(
            ("check", "total", "failures"),
            [
                ("cross_validation", cv.total, len(cv.disagreements)),
                ("equivalence", eq_total, len(eq_failures)),
            ],
        )
    else:
        lines = [
            f"cross validation: {cv.total} triples, {len(cv.disagreements)} disagreements",
            f"equivalence sweep: {eq_total} points, {len(eq_failures)} failures",
            f"note: {MIXED_RULE_NOTE}",
            "OK" if ok else "DISAGREEMENT FOUND",
        ]
        for bad in cv.disagreements:
            lines.append(f"  disagreement: {bad}")
        for bad in eq_failures:
            lines.append(f"  equivalence failure: {bad}")
        out = "\n".join(lines) + "\n"
    return (0 if ok else 2), out


def build_parser() -> _Parser:
    parser = _Parser(prog="virfusion", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--cache", default=None, help="path of the singular-vector cache file")
        p.add_argument("--seed", default=None, help="ignored; everything is deterministic")
        p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("weights", help="central charge and weight tables")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--imax", type=int, default=5, help="row count for the p = 1 family")
    common(p)
    p.set_defaults(func=_cmd_weights)

    p = sub.add_parser("singular", help="singular vector at a grade")
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--h", type=_rational, required=True)
    p.add_argument("--level", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_singular)

    p = sub.add_parser("zhu-image", help="Zhu bimodule images of singular generators")
    p.add_argument("--label", required=True, help="'c1q:q,i,s' or 'minimal:p,q,r,s'")
    common(p)
    p.set_defaults(func=_cmd_zhu_image)

    p = sub.add_parser("fusion", help="fusion rule of a triple")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--w1", type=_index_pair, required=True)
    p.add_argument("--w2", type=_index_pair, default=None)
    p.add_argument("--w3", type=_index_pair, default=None)
    p.add_argument("--verma-h", type=_rational, default=None, dest="verma_h")
    p.add_argument("--verma-hprime", type=_rational, default=None, dest="verma_hprime")
    common(p)
    p.set_defaults(func=_cmd_fusion)

    p = sub.add_parser("fusion-product", help="fusion product as canonical labels")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--w1", type=_index_pair, required=True)
    p.add_argument("--w2", type=_index_pair, required=True)
    common(p)
    p.set_defaults(func=_cmd_fusion_product)

    p = sub.add_parser("threept", help="singular insertion coefficient in one slot")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--w1", type=_index_pair, required=True)
    p.add_argument("--w2", type=_index_pair, required=True)
    p.add_argument("--w3", type=_index_pair, required=True)
    p.add_argument("--slot", type=int, choices=(1, 2, 3), required=True)
    common(p)
    p.set_defaults(func=_cmd_threept)

    p = sub.add_parser("limit", help="minimal-model limit table")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--w1", type=_index_pair, required=True)
    p.add_argument("--w2", type=_index_pair, required=True)
    p.add_argument("--w3", type=_index_pair, required=True)
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("verify", help="triple-route agreement and equivalence sweep")
    p.add_argument("--qmax", type=int, default=2)
    p.add_argument("--imax", type=int, default=2)
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def run(argv: Sequence[str]) -> int:
    """Parse and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        code, output = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        InvalidLabel,
        NotIrreducibleVerma,
        LabelOutOfBox,
        NonUniqueSolution,
        NotStabilized,
        SolverFailure,
        OddHalfPower,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(output)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
