"""``polypreserve`` command line.

Every subcommand reads JSON documents and writes JSON (or CSV where noted)
to stdout or ``--out``. Exit codes: 0 when a result was computed, whatever
the verdict; 2 for usage errors; 3 for malformed input; 4 for numerical or
domain failures.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import cgroup, certificates, momseq, opcore, preserver, reproduce, semigroup
from . import jsonio
from .jsonio import FormatError
from .polyalg import DimensionError, Polynomial, TruncationError

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_NUMERIC = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _rational(text: str):
    """Rational literal ("1/3", "0.1", "2"); decimals are read exactly."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _load(path: str, parse):
    return parse(jsonio.load_file(path), "$")


def _kset(args, n: int) -> preserver.KSet:
    if args.K == "box":
        a, b = args.interval or (Fraction(0), Fraction(1))
        return preserver.KSet.box(a, b, n)
    return preserver.KSet.parse(args.K, n, a=args.lower)


def _config(args, K: preserver.KSet, order: int) -> preserver.CheckConfig:
    if args.points:
        if K.n != 1:
            raise ValueError("explicit points are univariate; use --grid M for n > 1")
        return preserver.CheckConfig([(y,) for y in args.points], order)
    return preserver.CheckConfig.default(K, order, m=args.grid)


def _action_from_images(doc, path="$"):
    """{"n", "images": [{"alpha", "poly"}]}: a linear map given on monomials."""
    n = doc.get("n") if isinstance(doc, dict) else None
    if not isinstance(n, int):
        raise FormatError(f"{path}.n", "expected an integer")
    images = {}
    for i, item in enumerate(doc.get("images", [])):
        tp = f"{path}.images[{i}]"
        alpha = tuple(item.get("alpha", ()))
        if len(alpha) != n:
            raise FormatError(f"{tp}.alpha", f"expected length {n}")
        images[alpha] = jsonio.parse_polynomial(item.get("poly"), f"{tp}.poly")
    if not images:
        raise FormatError(f"{path}.images", "empty")
    D = max(sum(a) for a in images)

    def act(p: Polynomial) -> Polynomial:
        out = Polynomial.zero(n)
        for alpha, c in p.terms.items():
            if alpha not in images:
                raise FormatError(f"{path}.images", f"no image for monomial {list(alpha)}")
            out = out + images[alpha].scale(c)
        return out

    return act, n, D


# -- handlers ----------------------------------------------------------------------

def cmd_op(args):
    if args.action == "extract":
        act, n, D = _action_from_images(jsonio.load_file(args.images))
        return opcore.extract_canonical(act, n, args.degree if args.degree is not None else D)
    if args.action == "apply":
        T = _load(args.op, jsonio.parse_operator)
        return opcore.apply(T, _load(args.poly, jsonio.parse_polynomial), finite=args.finite)
    s = _load(args.seq, jsonio.parse_sequence)
    order = s.N if args.order is None else args.order
    return opcore.diagonal_operator(s.values, s.n, order, args.kind)


def cmd_cgroup(args):
    A = _load(args.a, jsonio.parse_const)
    if args.action == "mul":
        if not args.b:
            raise ValueError("mul needs --b")
        return cgroup.mul(A, _load(args.b, jsonio.parse_const))
    return {"inv": cgroup.inv, "exp": cgroup.exp, "log": cgroup.log}[args.action](A)


def cmd_moments(args):
    if args.action == "check":
        s = _load(args.seq, jsonio.parse_sequence)
        if args.kind == "hamburger":
            rep = momseq.hamburger_check(s)
        elif args.kind == "stieltjes":
            rep = momseq.stieltjes_check(s, args.lower)
        else:
            a, b = args.interval or (Fraction(0), Fraction(1))
            rep = momseq.hausdorff_check(s, a, b)
        if args.csv:
            if not hasattr(rep, "to_csv"):
                raise ValueError("CSV output is available for Hankel reports only")
            return rep.to_csv()
        return rep
    if args.action in ("convolve", "hadamard"):
        s = _load(args.seq, jsonio.parse_sequence)
        t = _load(args.other, jsonio.parse_sequence)
        return momseq.convolve(s, t) if args.action == "convolve" else momseq.hadamard(s, t)
    s = _load(args.seq, jsonio.parse_sequence)
    return momseq.recover_atoms(s, args.atoms)


def cmd_preserve(args):
    A = _load(args.op, jsonio.parse_operator)
    K = _kset(args, A.n)
    if args.action == "check":
        order = A.order if args.order is None else args.order
        return preserver.check_preserver(A, K, _config(args, K, order))
    if args.action == "generator":
        order = A.order if args.order is None else args.order
        return preserver.check_generator(A, K, _config(args, K, order))
    d = A.order if args.degree is None else args.degree
    if not args.lambdas:
        raise ValueError("resolvent needs --lambdas")
    return preserver.check_resolvent(A, d, args.lambdas, K, _config(args, K, d))


def cmd_semigroup(args):
    if args.action == "evolve":
        A = _load(args.op, jsonio.parse_operator)
        p = _load(args.poly, jsonio.parse_polynomial)
        return semigroup.evolve(A, p, args.time)
    if args.action == "tau":
        if args.model == "diag":
            return semigroup.eventual_diag(args.d)
        a = args.param if args.param is not None else args.a
        if a is None:
            raise ValueError("quadratic model needs --param a")
        return semigroup.eventual_quadratic(float(a))
    t0, t1 = args.t if args.t else ((0.0, 0.015) if args.model == "diag" else (0.0, 25.0))
    ts = np.linspace(float(t0), float(t1), args.steps + 1)
    if args.model == "diag":
        vals = semigroup.diag_curve(ts, args.d)
    else:
        a = args.a if args.a is not None else args.param
        if a is None:
            raise ValueError("quadratic model needs --a")
        vals = semigroup.quadratic_min(float(a), ts)
    return semigroup.curve_csv(zip(ts.tolist(), np.asarray(vals).tolist()))


def cmd_cert(args):
    p = _load(args.poly, jsonio.parse_polynomial)
    if args.kind == "bernstein":
        return certificates.bernstein_certificate(p, args.dmax)
    if args.kind == "sos":
        return certificates.sos_decompose_R(p)
    if not args.interval:
        raise ValueError("lukacs needs --interval a b")
    return certificates.lukacs_markov(p, *args.interval)


def cmd_reproduce(args):
    return reproduce.TARGETS[args.target]()


# -- parser ------------------------------------------------------------------------

def _k_options(p):
    p.add_argument("--K", default="R", choices=["R", "halfline", "box"])
    p.add_argument("--lower", type=_rational, default=Fraction(0), help="left end of the half-line")
    p.add_argument("--interval", type=_rational, nargs=2, metavar=("A", "B"))
    p.add_argument("--grid", type=int, default=9, help="points per axis of the default grid")
    p.add_argument("--points", type=_rational, nargs="+", help="explicit univariate sample points")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polypreserve", description="Operators on polynomials and positivity checks.")
    parser.add_argument("--out", "-o", help="write the result here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    op = sub.add_parser("op", help="canonical operator forms")
    op_sub = op.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = op_sub.add_parser("extract", help="canonical form of a map given on monomials")
    p.add_argument("--images", required=True)
    p.add_argument("--degree", type=int)
    p = op_sub.add_parser("apply")
    p.add_argument("--op", required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--finite", action="store_true", help="read the operator as exact, not truncated")
    p = op_sub.add_parser("diag", help="diagonal operator from t or c sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--kind", choices=["t", "c"], default="t")
    p.add_argument("--order", type=int)
    op.set_defaults(func=cmd_op)

    cg = sub.add_parser("cgroup", help="constant-coefficient group and algebra")
    cg.add_argument("action", choices=["mul", "inv", "exp", "log"])
    cg.add_argument("--a", required=True)
    cg.add_argument("--b")
    cg.set_defaults(func=cmd_cgroup)

    mo = sub.add_parser("moments", help="moment-sequence tests and operations")
    mo_sub = mo.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = mo_sub.add_parser("check")
    p.add_argument("--seq", required=True)
    p.add_argument("--kind", choices=["hamburger", "stieltjes", "hausdorff"], default="hamburger")
    p.add_argument("--lower", type=_rational, default=Fraction(0))
    p.add_argument("--interval", type=_rational, nargs=2, metavar=("A", "B"))
    p.add_argument("--csv", action="store_true")
    for name in ("convolve", "hadamard"):
        p = mo_sub.add_parser(name)
        p.add_argument("--seq", required=True)
        p.add_argument("--other", required=True)
    p = mo_sub.add_parser("recover")
    p.add_argument("--seq", required=True)
    p.add_argument("--atoms", type=int, required=True)
    mo.set_defaults(func=cmd_moments)

    pr = sub.add_parser("preserve", help="positivity-preserver checks")
    pr_sub = pr.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("check", "resolvent", "generator"):
        p = pr_sub.add_parser(name)
        p.add_argument("--op", required=True)
        _k_options(p)
        if name == "resolvent":
            p.add_argument("--degree", type=int)
            p.add_argument("--lambdas", type=_rational, nargs="+")
        else:
            p.add_argument("--order", type=int)
    pr.set_defaults(func=cmd_preserve)

    sg = sub.add_parser("semigroup", help="evolution and eventual positivity")
    sg_sub = sg.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = sg_sub.add_parser("evolve")
    p.add_argument("--op", required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--time", "-t", type=_rational, required=True)
    for name in ("tau", "curve"):
        p = sg_sub.add_parser(name)
        p.add_argument("--model", choices=["diag", "quadratic"], required=True)
        p.add_argument("--param", type=float)
        p.add_argument("--a", type=float)
        p.add_argument("--d", type=int, default=4)
        if name == "curve":
            p.add_argument("--t", type=float, nargs=2, metavar=("T0", "T1"))
            p.add_argument("--steps", type=int, default=1000)
    sg.set_defaults(func=cmd_semigroup)

    ce = sub.add_parser("cert", help="positivity certificates")
    ce.add_argument("kind", choices=["bernstein", "sos", "lukacs"])
    ce.add_argument("--poly", required=True)
    ce.add_argument("--interval", type=_rational, nargs=2, metavar=("A", "B"))
    ce.add_argument("--dmax", type=int, default=200)
    ce.set_defaults(func=cmd_cert)

    rp = sub.add_parser("reproduce", help="self-checking threshold examples")
    rp.add_argument("target", choices=sorted(reproduce.TARGETS))
    rp.set_defaults(func=cmd_reproduce)
    return parser


def _render(result) -> str:
    if isinstance(result, str):
        return result
    return jsonio.dumps(result)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    try:
        text = _render(args.func(args))
    except FormatError as e:
        sys.stderr.write(f"polypreserve: malformed input: {e}\n")
        return EXIT_FORMAT
    except (ValueError, ArithmeticError, DimensionError, TruncationError, np.linalg.LinAlgError) as e:
        sys.stderr.write(f"polypreserve: {type(e).__name__}: {e}\n")
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
