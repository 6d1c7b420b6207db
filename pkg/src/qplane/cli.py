"""``qplane`` command-line front end.

Every subcommand prints to stdout in one of three formats (``--format``
human|json|csv; the ``QPLANE_FORMAT`` environment variable sets the
default).  Failures exit with status 1 and a structured message on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import bargmann, pairing, qalgebra, toeplitz, weights
from .qalgebra import Element, deformation
from .scalars import EXACT, format_scalar, parse_scalar
from .textio import ParseError, element_to_json, parse_element

FORMATS = ("human", "json", "csv")


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


# --- output helpers ---------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(wd) for c, wd in zip(r, widths)) for r in cells]
    return "\n".join(lines)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    out.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _num(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _matrix_text(M: np.ndarray) -> str:
    rows = [[_num(z) for z in row] for row in M]
    width = max(len(c) for row in rows for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in rows)


def _element_out(f: Element, fmt: str) -> str:
    if fmt == "json":
        return _dump(element_to_json(f))
    if fmt == "csv":
        rows = [[m.j, m.k, format_scalar(c)] for m, c in f.sorted_terms()]
        return _csv(["j", "k", "coeff"], rows)
    return str(f)


def _scalar_out(value, fmt: str, name: str = "value") -> str:
    text = format_scalar(value)
    if fmt == "json":
        return _dump({name: text})
    if fmt == "csv":
        return _csv([name], [[text]])
    return text


# --- argument plumbing ------------------------------------------------------


def _q(args):
    try:
        return deformation(parse_scalar(args.q))
    except (ValueError, TypeError) as exc:
        raise CLIError(f"bad q {args.q!r}: {exc}") from None


def _w(args):
    return weights.parse_weight_spec(args.weights)


def _elem(text: str, args) -> Element:
    return parse_element(text, _q(args))


def _operator(text: str, args) -> toeplitz.TruncatedOperator:
    return toeplitz.toeplitz(_elem(text, args), _w(args), args.dim)


def _operator_out(T: toeplitz.TruncatedOperator, fmt: str) -> str:
    if fmt == "json":
        return _dump(T.to_json())
    if fmt == "csv":
        return toeplitz.diagonals_csv(T).rstrip("\n")
    head = f"dim={T.dim} margin={T.margin} interior_columns={T.interior} (phi basis)"
    return head + "\n" + _matrix_text(T.matrix)


# --- subcommands ------------------------------------------------------------


def cmd_mul(args, fmt):
    elems = [_elem(t, args) for t in args.elements]
    out = elems[0]
    for e in elems[1:]:
        out = qalgebra.mul(out, e)
    return _element_out(out, fmt)


def cmd_star(args, fmt):
    return _element_out(qalgebra.star(_elem(args.element, args)), fmt)


def cmd_antihom(args, fmt):
    ok = qalgebra.star_antihom_probe(_elem(args.f, args), _elem(args.g, args))
    if fmt == "json":
        return _dump({"antihomomorphic": ok})
    if fmt == "csv":
        return _csv(["antihomomorphic"], [[str(ok).lower()]])
    return "true" if ok else "false"


def cmd_inner(args, fmt):
    return _scalar_out(pairing.inner(_elem(args.f, args), _elem(args.g, args), _w(args)), fmt)


def cmd_gram(args, fmt):
    G = pairing.gram([_elem(t, args) for t in args.elements], _w(args))
    n = G.shape[0]
    if fmt == "json":
        return _dump({"gram": [[format_scalar(G[i, j]) for j in range(n)] for i in range(n)]})
    if fmt == "csv":
        return _csv(["i", "j", "value"],
                    [[i, j, format_scalar(G[i, j])] for i in range(n) for j in range(n)])
    rows = [[format_scalar(G[i, j]) for j in range(n)] for i in range(n)]
    width = max(len(c) for r in rows for c in r)
    return "\n".join("  ".join(c.rjust(width) for c in r) for r in rows)


def cmd_project(args, fmt):
    return _element_out(bargmann.project_K(_elem(args.element, args), _w(args)), fmt)


def cmd_sector(args, fmt):
    if args.epsilon is not None:
        n, r = args.epsilon
        m = pairing.epsilon(n, r)
        f = Element.monomial(m.j, m.k, _q(args))
        return _element_out(f, fmt)
    f = _elem(args.element, args)
    rows = [[str(Element.monomial(m.j, m.k, f.q)), pairing.sector_of(m), pairing.maxdeg(m)]
            for m, _ in f.sorted_terms()]
    if fmt == "json":
        return _dump({"terms": [{"monomial": r[0], "sector": r[1], "maxdeg": r[2]} for r in rows]})
    if fmt == "csv":
        return _csv(["monomial", "sector", "maxdeg"], rows)
    return _table(["monomial", "sector", "maxdeg"], rows)


def cmd_embed(args, fmt):
    coeffs = [parse_scalar(c) for c in args.coeffs]
    q = _q(args)
    if isinstance(q, complex):
        coeffs = [complex(c) for c in coeffs]
    f = bargmann.embed(coeffs, q=q)
    w = _w(args)
    norm2 = pairing.inner(f, f, w)
    if fmt == "json":
        return _dump({"element": element_to_json(f), "norm2": format_scalar(norm2)})
    if fmt == "csv":
        return _element_out(f, fmt)
    return f"{f}\nnorm^2 = {format_scalar(norm2)}"


def cmd_weights(args, fmt):
    rows = []
    if args.r is not None:
        r = parse_scalar(args.r)
        header = ["n", "[n]_r", "[n]!_r"]
        for n in range(args.nmax + 1):
            rows.append([n, format_scalar(weights.deformed_int(r, n)),
                         format_scalar(weights.deformed_factorial(r, n))])
    else:
        w = _w(args)
        header = ["n", "w_n", "[n]_w"]
        for n in range(args.nmax + 1):
            rows.append([n, format_scalar(w(n)), format_scalar(weights.w_int(w, n))])
    if fmt == "json":
        return _dump({"rows": [dict(zip(header, r)) for r in rows]})
    if fmt == "csv":
        return _csv(header, rows)
    return _table(header, rows)


def cmd_toeplitz(args, fmt):
    return _operator_out(_operator(args.symbol, args), fmt)


def cmd_compose(args, fmt):
    A, B = _operator(args.a, args), _operator(args.b, args)
    return _operator_out(toeplitz.compose(A, B), fmt)


def cmd_adjoint(args, fmt):
    return _operator_out(toeplitz.adjoint(_operator(args.symbol, args)), fmt)


def cmd_qcomm(args, fmt):
    A, B = _operator(args.a, args), _operator(args.b, args)
    r = parse_scalar(args.r)
    if A.backend != EXACT:
        r = complex(r)
    return _operator_out(toeplitz.q_commutator(A, B, r), fmt)


def cmd_apply(args, fmt):
    T = _operator(args.symbol, args)
    coeffs = [complex(parse_scalar(c)) for c in args.vector.split(",")]
    v = bargmann.FockVector(np.array(coeffs), T.weights)
    out = toeplitz.apply(T, v)
    pairs = [(float(z.real), float(z.imag)) for z in out.coeffs]
    rows = [[a, repr(x), repr(y)] for a, (x, y) in enumerate(pairs)]
    if fmt == "json":
        return _dump({"coeffs": [list(p) for p in pairs]})
    if fmt == "csv":
        return _csv(["a", "re", "im"], rows)
    return _table(["a", "re", "im"], rows)


def cmd_ccr_check(args, fmt):
    q = _q(args)
    w0 = parse_scalar(args.w0)
    w0 = w0.re if hasattr(w0, "re") else w0.real
    override = _w(args) if args.weights is not None else None
    res = toeplitz.ccr_residual(q, w0, args.dim, weights=override)
    return _scalar_out(res, fmt, "residual")


def cmd_degeneracy(args, fmt):
    rep = pairing.nondegeneracy_scan(_w(args), args.mmax, args.rmax, args.smax)
    if fmt == "json":
        return _dump(rep.to_json())
    header = ["m", "R", "verdict", "rank", "horizon", "witness"]
    rows = []
    for r in rep.results:
        wit = " ".join(pairing._fmt_num(a) for a in r.witness) if r.witness is not None else ""
        rows.append([r.m, r.R, r.verdict, r.rank, r.horizon, wit])
    if fmt == "csv":
        return _csv(header, rows)
    return (f"weights={rep.weights} m<={rep.m_max} R<={rep.R_max} S_max={rep.S_max} "
            "(verdicts hold only up to the horizon)\n" + _table(header, rows))


def cmd_definiteness(args, fmt):
    rep = pairing.definiteness_probe(_w(args), args.D)
    if fmt == "json":
        return _dump(rep.to_json())
    if fmt == "csv":
        return _csv(["D", "dim", "min_eigenvalue"], [[rep.D, len(rep.basis), repr(rep.min_eigenvalue)]])
    text = f"D={rep.D} dim={len(rep.basis)} min_eigenvalue={rep.min_eigenvalue:.12g}"
    if rep.witness is not None:
        text += f"\nwitness: {rep.witness}\n<f,f>_w = {rep.witness_norm2:.12g}"
    return text


def cmd_norm(args, fmt):
    if args.symbol is not None:
        bound = toeplitz.norm_lower_bound(_operator(args.symbol, args))
        if fmt == "json":
            return _dump({"lower_bound": bound, "dim": args.dim})
        if fmt == "csv":
            return _csv(["dim", "lower_bound"], [[args.dim, repr(bound)]])
        return f"||T|| >= {bound:.12g} (largest singular value at dim {args.dim})"
    nb = toeplitz.norm_bound_monomial(args.i, args.j, _w(args), args.amax)
    if fmt == "json":
        return _dump(nb.to_json())
    if fmt == "csv":
        return _csv(["a", "c_a"], [[a, repr(c)] for a, c in enumerate(nb.values)])
    return (f"sup_(a<={nb.horizon}) c_a = {nb.sup_estimate:.12g} at a={nb.attained_at}\n"
            f"verdict: {nb.verdict} (horizon-scoped)")


def cmd_compact(args, fmt):
    v = toeplitz.compactness_probe(args.i, args.j, _w(args), args.amax, args.tol)
    if fmt == "json":
        return _dump({"verdict": v, "horizon": args.amax, "tol": args.tol})
    if fmt == "csv":
        return _csv(["verdict", "horizon", "tol"], [[v, args.amax, args.tol]])
    return f"{v} (horizon {args.amax})"


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", default="1", help="deformation parameter: rational (exact) or float")
    common.add_argument("--format", choices=FORMATS, default=None)

    def weighted(p, default="factorial"):
        p.add_argument("--weights", default=default,
                       help="factorial | constant:<c> | qfactorial:q=<r>:w0=<r> | table:<path>")

    def dimmed(p):
        p.add_argument("--dim", type=int, default=8, help="truncation dimension N")

    parser = _Parser(prog="qplane", description="Toeplitz quantization on the complex quantum plane")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mul", parents=[common], help="normal-ordered product")
    p.add_argument("elements", nargs="+")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("star", parents=[common], help="conjugation")
    p.add_argument("element")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("antihom", parents=[common], help="test (fg)* == g* f*")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_antihom)

    p = sub.add_parser("inner", parents=[common], help="weighted inner product <f,g>_w")
    weighted(p)
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_inner)

    p = sub.add_parser("gram", parents=[common], help="Gram matrix of elements")
    weighted(p)
    p.add_argument("elements", nargs="+")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("project", parents=[common], help="reproducing-kernel projection P_K")
    weighted(p)
    p.add_argument("element")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("sector", parents=[common], help="sector and max-degree, or epsilon_r of a sector")
    p.add_argument("element", nargs="?")
    p.add_argument("--epsilon", nargs=2, type=int, metavar=("N", "R"))
    p.set_defaults(func=cmd_sector)

    p = sub.add_parser("embed", parents=[common], help="functional calculus sum f_j t^j")
    weighted(p)
    p.add_argument("coeffs", nargs="+")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("weights", parents=[common], help="weight table or r-deformed integers")
    weighted(p)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--r", default=None, help="tabulate [n]_r and [n]!_r instead")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("toeplitz", parents=[common], help="truncated Toeplitz matrix T_g")
    weighted(p)
    dimmed(p)
    p.add_argument("symbol")
    p.set_defaults(func=cmd_toeplitz)

    p = sub.add_parser("compose", parents=[common], help="T_a T_b")
    weighted(p)
    dimmed(p)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("adjoint", parents=[common], help="adjoint of T_g")
    weighted(p)
    dimmed(p)
    p.add_argument("symbol")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("qcomm", parents=[common], help="T_a T_b - r T_b T_a")
    weighted(p)
    dimmed(p)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--r", default="1")
    p.set_defaults(func=cmd_qcomm)

    p = sub.add_parser("apply", parents=[common], help="apply T_g to a phi-basis vector")
    weighted(p)
    dimmed(p)
    p.add_argument("symbol")
    p.add_argument("--vector", required=True, help="comma-separated phi coordinates")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("ccr-check", parents=[common], help="residual of the q-deformed CCR")
    p.add_argument("--w0", default="1")
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--weights", default=None, help="override the CCR weights")
    p.set_defaults(func=cmd_ccr_check)

    p = sub.add_parser("degeneracy", parents=[common], help="Hankel-slice non-degeneracy scan")
    weighted(p)
    p.add_argument("--mmax", type=int, default=2)
    p.add_argument("--rmax", type=int, default=3)
    p.add_argument("--smax", type=int, default=10)
    p.set_defaults(func=cmd_degeneracy)

    p = sub.add_parser("definiteness", parents=[common], help="least Gram eigenvalue up to max-degree D")
    weighted(p)
    p.add_argument("--D", type=int, default=3)
    p.set_defaults(func=cmd_definiteness)

    p = sub.add_parser("norm", parents=[common], help="operator-norm estimate")
    weighted(p)
    dimmed(p)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--amax", type=int, default=64)
    p.add_argument("--symbol", default=None, help="general symbol: singular-value lower bound")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("compact", parents=[common], help="compactness heuristic for a monomial symbol")
    weighted(p)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--amax", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_compact)

    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    env_fmt = os.environ.get("QPLANE_FORMAT")
    fmt = env_fmt if env_fmt in FORMATS else "human"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format or fmt
        if args.command == "sector" and args.element is None and args.epsilon is None:
            raise CLIError("sector needs an element or --epsilon N R")
        out = args.func(args, fmt)
    except (CLIError, ParseError, ValueError, TypeError, ArithmeticError, OSError) as exc:
        kind = type(exc).__name__
        if fmt == "json":
            print(_dump({"error": {"type": kind, "message": str(exc)}}), file=stderr)
        else:
            print(f"qplane: error: {kind}: {exc}", file=stderr)
        return 1
    print(out, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
