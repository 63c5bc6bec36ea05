"""Command-line front end: ``bohr <subcommand> ...``.

Output is one line of JSON with sorted keys (``--table`` gives aligned
columns instead).  Exit status 0 on success, 1 on a domain error (details as
JSON on stderr), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .contexts import (
    ContextError,
    build_poset,
    context_from_json,
    enumerate_young,
    partition_type,
    poset_from_json,
    poset_to_json,
)
from .frame import (
    CapExceeded,
    FrameError,
    SigmaOpen,
    default_cap,
    double_neg,
    enumerate_frame,
    heyting_implies,
    heyting_neg,
    is_valid,
    join,
    meet,
    sigma_from_json,
    sigma_to_json,
)
from .gelfand import bohrified_transform, eigenvalues_in_context, open_from_json, spectral_mask
from .kochen_specker import (
    RaySetError,
    atom_point,
    find_points,
    parity_obstruction,
    point_choice,
    rayset_from_json,
    search_with_stats,
)
from .linalg import DimensionError, NotAProjectionError, matrix_from_json
from .states import StateError, measure_component, pairing, state_from_json

DOMAIN_ERRORS = (
    CapExceeded,
    ContextError,
    DimensionError,
    FrameError,
    NotAProjectionError,
    RaySetError,
    StateError,
)


class InputError(Exception):
    """Unreadable or structurally malformed input file."""


def _read(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _parse(path: str, decoder, *args):
    """Decode a file; structural problems become InputError, domain ones pass through."""
    obj = _read(path)
    try:
        return decoder(obj, *args)
    except DOMAIN_ERRORS:
        raise
    except (ValueError, TypeError, KeyError, IndexError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _frac(x: Fraction) -> str:
    return str(x)


def _context_rows(s: SigmaOpen) -> list[dict]:
    rows = []
    for i, c in enumerate(s.poset.contexts):
        m = s.mask(i)
        value = "1" if m == c.full_mask else "0" if m == 0 else "partial"
        rows.append({
            "context": i,
            "type": list(partition_type(c)),
            "atoms": [a for a in range(len(c.atoms)) if m >> a & 1],
            "value": value,
        })
    return rows


# --- subcommands ------------------------------------------------------------------


def cmd_poset_build(args) -> tuple[object, list[dict] | None]:
    def decode(obj):
        if isinstance(obj, dict):
            seeds = obj.get("seeds")
            n = obj.get("n")
        else:
            seeds, n = obj, None
        if not isinstance(seeds, list):
            raise ValueError("seed file must be a list of contexts or an object with 'seeds'")
        return [context_from_json(c) for c in seeds], n

    seeds, n = _parse(args.seeds, decode)
    if not seeds and n is None:
        raise InputError("no seeds and no dimension 'n'")
    poset = build_poset(seeds, n)
    doc = poset_to_json(poset)
    text = json.dumps(doc, sort_keys=True) + "\n"
    if args.output in (None, "-"):
        return doc, None
    Path(args.output).write_text(text)
    summary = {
        "contexts": len(poset),
        "output": args.output,
        "types": [list(partition_type(c)) for c in poset.contexts],
    }
    rows = [{"context": i, "type": t} for i, t in enumerate(summary["types"])]
    return summary, rows


def cmd_heyting(args):
    poset = _parse(args.poset, poset_from_json)
    s = _parse(args.sigma, sigma_from_json, poset)
    binary = args.op in ("meet", "join", "implies")
    if binary and args.sigma2 is None:
        raise InputError(f"--op {args.op} needs --sigma2")
    if not binary and args.sigma2 is not None:
        raise InputError(f"--op {args.op} takes a single --sigma")
    t = _parse(args.sigma2, sigma_from_json, poset) if binary else None
    result = {
        "meet": lambda: meet(s, t),
        "join": lambda: join(s, t),
        "implies": lambda: heyting_implies(s, t),
        "neg": lambda: heyting_neg(s),
        "notnot": lambda: double_neg(s),
    }[args.op]()
    report = {
        "monotone": is_valid(poset, result.bits),
        "inputs_valid": True,
        "note": "quantifiers over contexts D containing C range over this poset only",
    }
    if args.op == "notnot":
        report["contains_input"] = s <= result
    if args.op == "implies":
        report["meet_with_input_below_target"] = (result & s) <= t
    rows = _context_rows(result)
    doc = {
        "op": args.op,
        "result": sigma_to_json(result, args.poset),
        "contexts": rows,
        "validity": report,
    }
    return doc, rows


def cmd_gelfand(args):
    poset = _parse(args.poset, poset_from_json)

    def decode_observable(obj):
        if isinstance(obj, dict) and "matrix" in obj:
            obj = obj["matrix"]
        return matrix_from_json(obj)

    a = _parse(args.observable, decode_observable)
    u = _parse(args.open, open_from_json)
    c = args.context
    if not 0 <= c < len(poset):
        raise ContextError(f"context index {c} out of range (poset has {len(poset)})")
    ctx = poset.contexts[c]
    eig = eigenvalues_in_context(a, ctx)
    s = bohrified_transform(a, c, c, u, poset)
    rows = _context_rows(s)
    doc = {
        "context": c,
        "eigenvalues": [_frac(x) for x in eig],
        "spectral_atoms": [i for i in range(len(ctx.atoms)) if spectral_mask(a, ctx, u) >> i & 1],
        "result": sigma_to_json(s, args.poset),
        "contexts": rows,
    }
    return doc, rows


def cmd_pair(args):
    poset = _parse(args.poset, poset_from_json)
    psi = _parse(args.state, state_from_json)
    s = _parse(args.sigma, sigma_from_json, poset)
    upper = pairing(psi, s)
    mu = measure_component(psi, s, 0)
    doc = {
        "upper_set": upper.sorted(),
        "mu": {str(i): _frac(v) for i, v in sorted(mu.items())},
    }
    rows = [
        {"context": i, "mu": _frac(v), "in_upper_set": i in upper}
        for i, v in sorted(mu.items())
    ]
    return doc, rows


def cmd_ks_check(args):
    rs = _parse(args.file, rayset_from_json)
    val, nodes = search_with_stats(rs)
    doc = {
        "rays": len(rs.rays),
        "bases": len(rs.bases),
        "nodes": nodes,
        "parity_obstruction": parity_obstruction(rs),
    }
    if val is None:
        doc["result"] = "UNSAT"
    else:
        doc["result"] = "SAT"
        doc["assignment"] = list(val.values)
    rows = [{"key": k, "value": doc[k]} for k in sorted(doc)]
    return doc, rows


def cmd_enum_young(args):
    parts = enumerate_young(args.k, args.n)
    return [list(p) for p in parts], [{"partition": " ".join(map(str, p))} for p in parts]


def cmd_points(args):
    poset = _parse(args.poset, poset_from_json)
    cap = default_cap() if args.cap is None else args.cap
    if cap < 1:
        raise InputError("--cap must be a positive integer")
    points = find_points(poset, cap)
    atom_of = {atom_point(poset, g).element.bits: g for g in range(poset.total_atoms)}
    out, rows = [], []
    for p in points:
        g = atom_of.get(p.element.bits)
        missing = None
        if g is not None:
            i = max(k for k in range(len(poset)) if poset.offsets[k] <= g)
            missing = [i, g - poset.offsets[i]]
        choice = {str(c): point_choice(p, c) for c in range(len(poset))}
        out.append({
            "assignment": sigma_to_json(p.element, args.poset)["assignment"],
            "missing_atom": missing,
            "choice": choice,
        })
        rows.append({"point": len(rows), "missing_atom": missing, "choice": choice})
    doc = {"count": len(points), "frame_size": len(enumerate_frame(poset, cap)), "points": out}
    return doc, rows


# --- plumbing ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bohr", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", action="store_true", help="aligned columns instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poset", help="context posets")
    psub = p.add_subparsers(dest="poset_command", required=True)
    b = psub.add_parser("build", parents=[common], help="close seed contexts under intersection")
    b.add_argument("--seeds", required=True)
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=cmd_poset_build)

    h = sub.add_parser("heyting", parents=[common], help="Heyting operations on O(Σ)")
    h.add_argument("--op", required=True, choices=["meet", "join", "implies", "neg", "notnot"])
    h.add_argument("--sigma", required=True)
    h.add_argument("--sigma2")
    h.add_argument("--poset", required=True)
    h.set_defaults(func=cmd_heyting)

    g = sub.add_parser("gelfand", parents=[common], help="bohrified Gelfand transform")
    g.add_argument("--observable", required=True)
    g.add_argument("--context", required=True, type=int)
    g.add_argument("--open", required=True)
    g.add_argument("--poset", required=True)
    g.set_defaults(func=cmd_gelfand)

    pr = sub.add_parser("pair", parents=[common], help="state-proposition pairing")
    pr.add_argument("--state", required=True)
    pr.add_argument("--sigma", required=True)
    pr.add_argument("--poset", required=True)
    pr.set_defaults(func=cmd_pair)

    k = sub.add_parser("ks", help="Kochen-Specker valuation search")
    ksub = k.add_subparsers(dest="ks_command", required=True)
    kc = ksub.add_parser("check", parents=[common], help="search for a noncontextual valuation")
    kc.add_argument("file")
    kc.set_defaults(func=cmd_ks_check)

    y = sub.add_parser("enum-young", parents=[common], help="partitions of n into k parts")
    y.add_argument("--n", required=True, type=int)
    y.add_argument("--k", required=True, type=int)
    y.set_defaults(func=cmd_enum_young)

    pt = sub.add_parser("points", parents=[common], help="points (prime elements) of the finite frame")
    pt.add_argument("--poset", required=True)
    pt.add_argument("--cap", type=int, default=None)
    pt.set_defaults(func=cmd_points)
    return parser


def _cell(x) -> str:
    if isinstance(x, str):
        return x
    return json.dumps(x, sort_keys=True)


def render_table(rows: list[dict]) -> str:
    if not rows:
        return "(empty)\n"
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[k]) for row in cells)) for k, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _fail(status: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "enum-young" and not 1 <= args.k <= args.n:
        return _fail(1, "ValueError", f"need 1 <= k <= n, got k={args.k}, n={args.n}")
    try:
        doc, rows = args.func(args)
    except InputError as exc:
        return _fail(2, "InputError", str(exc))
    except DOMAIN_ERRORS as exc:
        return _fail(1, type(exc).__name__, str(exc))
    except ValueError as exc:
        # e.g. an invalid BOHR_CAP value
        return _fail(2, "InputError", str(exc))
    if args.table and rows is not None:
        sys.stdout.write(render_table(rows))
    else:
        sys.stdout.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
