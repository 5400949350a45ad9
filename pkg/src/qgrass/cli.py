"""Command-line interface: ``qgrass <command> [options]``.

Exit status is 0 on success, 1 when a check fails and 2 for usage or
parse errors.  ``--json PATH`` writes a machine-readable result as well
(``-`` writes it to stdout instead of the text output).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .autos import AutoSpec, auto_map, certify, kn_map, theta_map
from .checks import (
    CATALOG,
    DEFAULT_SEED,
    DEFAULT_SHAPES,
    MUTATIONS,
    CheckOptions,
    UnknownCheck,
    report_json,
    run_all,
    run_check,
)
from .expr import ParseError, RingContext, parse_expr, render
from .grassmann import GrassShape, LocalizedElement, StraighteningError, straighten
from .qmatrix import AlgebraShape, quantum_determinant, quantum_minor
from .scalar import ONE, render_linear


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None


def _shapes(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(";"):
        vals = _ints(part)
        if len(vals) != 2:
            raise UsageError(f"shape {part!r} must be two integers like 2,4")
        out.append((vals[0], vals[1]))
    return out


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {' '.join(missing)}")


def _context(args) -> RingContext:
    if args.ring == "scalar":
        return RingContext.scalar()
    if args.ring == "qm":
        _need(args, "n")
        m = args.m if args.m is not None else args.k
        if m is None:
            raise UsageError("ring qm needs --m (or --k) and --n")
        return RingContext.qm(m, args.n)
    _need(args, "k", "n")
    if args.ring == "grass":
        return RingContext.grass_ring(args.k, args.n)
    return RingContext.t(args.k, args.n)


def _emit(args, text: str, payload: dict) -> None:
    if args.json == "-":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    print(text)
    if args.json:
        _write(args.json, json.dumps(payload, indent=2, sort_keys=True))


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _shape_payload(ctx: RingContext) -> list[int] | None:
    if ctx.kind == "scalar":
        return None
    if ctx.grass is not None:
        return [ctx.grass.k, ctx.grass.n]
    return [ctx.matrix.m, ctx.matrix.n]


# -- commands ------------------------------------------------------------------


def cmd_nf(args) -> int:
    _need(args, "expr")
    ctx = _context(args)
    value = parse_expr(args.expr, ctx)
    text = render(value)
    _emit(args, text, {"command": "nf", "ring": args.ring, "shape": _shape_payload(ctx),
                       "input": args.expr, "result": text})
    return 0


def cmd_det(args) -> int:
    m = args.m if args.m is not None else args.n
    if m is None:
        raise UsageError("det needs --m (or --n)")
    if args.n is not None and args.n != m:
        raise UsageError("the quantum determinant needs a square shape")
    text = quantum_determinant(AlgebraShape(m, m)).render()
    _emit(args, text, {"command": "det", "shape": [m, m], "result": text})
    return 0


def cmd_minor(args) -> int:
    _need(args, "rows", "cols")
    rows, cols = _ints(args.rows), _ints(args.cols)
    m = args.m if args.m is not None else max(rows, default=1)
    n = args.n if args.n is not None else max(cols, default=1)
    text = quantum_minor(rows, cols, AlgebraShape(m, n)).render()
    _emit(args, text, {"command": "minor", "shape": [m, n], "rows": rows, "cols": cols,
                       "result": text})
    return 0


def _standard_form(a: LocalizedElement) -> list:
    """Straighten every term of a, keeping [u]-powers >= 0 as letters."""
    S = a.shape
    acc: dict = {}
    for (word, e), c in a.items():
        if e < 0:
            raise UsageError("straighten works in O_q(G(k,n)); negative powers of u are not allowed")
        for c2, s in straighten(word + (S.u,) * e, S):
            total = acc.get(s, ONE * 0) + c * c2
            if total:
                acc[s] = total
            else:
                acc.pop(s, None)
    return sorted(acc.items(), key=lambda kv: (len(kv[0]), kv[0]))


def cmd_straighten(args) -> int:
    _need(args, "k", "n", "expr")
    ctx = RingContext.grass_ring(args.k, args.n)
    value = parse_expr(args.expr, ctx)
    terms = _standard_form(value)
    text = render_linear([(c, "".join("[" + ",".join(map(str, I)) + "]" for I in s))
                          for s, c in terms], sep=" * ")
    _emit(args, text, {
        "command": "straighten", "shape": [args.k, args.n], "input": args.expr,
        "result": text,
        "terms": [{"word": [list(I) for I in s], "coefficient": c.exact()} for s, c in terms],
    })
    return 0


def _load_spec(text: str) -> AutoSpec:
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    try:
        return AutoSpec.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"bad automorphism spec: {exc}") from None


def cmd_apply_auto(args) -> int:
    _need(args, "k", "n", "expr")
    S = GrassShape(args.k, args.n)
    if args.map == "auto":
        if args.auto is None:
            raise UsageError("apply-auto --map auto needs --auto SPEC (JSON text or file)")
        spec = _load_spec(args.auto)
        phi = auto_map(spec, S)
        desc = spec.to_json()
    elif args.map == "theta":
        phi, desc = theta_map(S), "theta"
    else:
        if 2 * S.k > S.n:
            raise UsageError("the k <-> n-k map is stated for 2k <= n")
        phi, desc = kn_map(S), "kn"
    if not args.no_certify:
        bad = certify(phi)["degree2"]
        if bad:
            print(f"map failed certification on {len(bad)} letter pairs", file=sys.stderr)
            return 1
    value = parse_expr(args.expr, RingContext.grass_ring(args.k, args.n))
    text = render(phi.apply(value))
    _emit(args, text, {"command": "apply-auto", "shape": [S.k, S.n], "map": desc,
                       "input": args.expr, "result": text})
    return 0


def _options(args) -> CheckOptions:
    return CheckOptions(seed=args.seed)


def cmd_check(args) -> int:
    if args.id is None:
        raise UsageError("check needs --id; known ids: " + ", ".join(sorted(CATALOG)))
    check = CATALOG.get(args.id)
    if check is None:
        raise UsageError(f"unknown check id {args.id!r}")
    if check.scope == "matrix":
        m = args.m if args.m is not None else args.k
        if m is None or args.n is None:
            raise UsageError(f"{args.id} runs on quantum matrices: give --m and --n")
        shape = (m, args.n)
    else:
        _need(args, "k", "n")
        shape = (args.k, args.n)
    rel = MUTATIONS[args.mutate] if args.mutate else None
    rep = run_check(args.id, shape, _options(args), rel)
    report = {"seed": args.seed, "shapes": [list(shape)], "mutation": args.mutate,
              "summary": {s: int(rep.status == s) for s in ("pass", "fail", "skipped")},
              "checks": [rep]}
    _emit(args, _line(rep), json.loads(report_json(report)))
    return 1 if rep.status == "fail" else 0


def _line(rep) -> str:
    shape = ",".join(map(str, rep.shape))
    text = f"{rep.status.upper():7s} {rep.id} ({shape}) {rep.cases} cases, {rep.elapsed_ms:.0f} ms"
    if rep.reason:
        text += f": {rep.reason}"
    for w in rep.witnesses:
        text += f"\n    {w}"
    for e in rep.evidence:
        text += f"\n    note: {e}"
    return text


def cmd_check_all(args) -> int:
    shapes = _shapes(args.shapes) if args.shapes else list(DEFAULT_SHAPES)
    report = run_all(shapes, _options(args), mutate=args.mutate)
    text = "\n".join(_line(r) for r in report["checks"])
    s = report["summary"]
    text += f"\n{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped"
    _emit(args, text, json.loads(report_json(report)))
    return 1 if s["fail"] else 0


COMMANDS = {
    "nf": (cmd_nf, "normal form of an expression"),
    "det": (cmd_det, "quantum determinant of O_q(M(m,m))"),
    "minor": (cmd_minor, "quantum minor [rows|cols]"),
    "straighten": (cmd_straighten, "expand a grassmannian element in standard monomials"),
    "apply-auto": (cmd_apply_auto, "apply an automorphism to a grassmannian element"),
    "check": (cmd_check, "run one verification check"),
    "check-all": (cmd_check_all, "run the whole verification catalog"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="grassmannian rank k (or matrix rows)")
    common.add_argument("--n", type=int, help="grassmannian n (or matrix columns)")
    common.add_argument("--m", type=int, help="number of rows of a quantum matrix algebra")
    common.add_argument("--ring", choices=("qm", "grass", "t", "scalar"), default="qm",
                        help="ring the expression lives in (default: qm)")
    common.add_argument("--expr", help="expression, e.g. 'x[1,1]*x[2,2] - q*x[1,2]*x[2,1]'")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for randomised sub-checks (default: {DEFAULT_SEED})")
    common.add_argument("--json", metavar="PATH", help="also write JSON output to PATH ('-' for stdout)")

    parser = argparse.ArgumentParser(prog="qgrass",
                                     description="Exact computations in quantum matrices and quantum grassmannians.")
    sub = parser.add_subparsers(dest="command", required=True)
    ps = {}
    for name, (_, help_text) in COMMANDS.items():
        ps[name] = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    ps["minor"].add_argument("--rows", help="row indices, e.g. 1,2")
    ps["minor"].add_argument("--cols", help="column indices, e.g. 2,3")
    ps["apply-auto"].add_argument("--auto", help="AutoSpec as JSON text or a path to a JSON file")
    ps["apply-auto"].add_argument("--map", choices=("auto", "theta", "kn"), default="auto",
                                  help="which map to apply (default: the --auto spec)")
    ps["apply-auto"].add_argument("--no-certify", action="store_true",
                                  help="skip the letter-pair homomorphism check")
    ps["check"].add_argument("--id", help="check id from the catalog")
    for name in ("check", "check-all"):
        ps[name].add_argument("--mutate", choices=sorted(MUTATIONS),
                              help="run with one relation constant deliberately broken")
    ps["check-all"].add_argument("--shapes", help="grassmannian shapes, e.g. '2,4;2,5;3,6'")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command][0](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, UnknownCheck) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ValueError, IndexError, ZeroDivisionError, StraighteningError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
