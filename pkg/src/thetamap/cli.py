"""Command line front end.

    thetamap theta <gram> --bound X
    thetamap theta11 <gram> --bound X [--route direct|harmonic|both]
    thetamap dtheta <gram> --direction <symfile> --bound X
    thetamap wronskian <gram> --bound X
    thetamap classify2 <gram>
    thetamap construct <name>
    thetamap compare <gram1> <gram2> --bound X
    thetamap spectrum <gram> --bound X

<gram> is a JSON file {"n": 2, "gram": [["1","1/2"],["1/2","1"]]} or a
lattice name such as A2, E8, D4, Lp5, A1^2.  Exit status: 0 on success,
1 on bad input, 2 on internal error.
"""
import argparse
import json
import os
import sys
from fractions import Fraction

from . import invariants, rank2
from ._exact import format_rational, parse_rational
from .constructions import construct
from .errors import ThetaError
from .lattice import gram_from_json, matrix_to_json, spectrum, sym_from_json
from .qseries import render

DEFAULT_BOUND = Fraction(10)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _rational_arg(text):
    try:
        x = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if x <= 0:
        raise argparse.ArgumentTypeError("bound must be positive")
    return x


def load_gram(source):
    if os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
        try:
            return gram_from_json(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}: malformed JSON: {exc}")
        except (ThetaError, ValueError) as exc:
            raise InputError(f"{source}: {exc}")
    try:
        return construct(source).gram
    except ThetaError as exc:
        raise InputError(f"{source!r} is neither a readable file nor a lattice name ({exc})")


def load_direction(path):
    try:
        with open(path) as fh:
            return sym_from_json(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read direction file: {exc}")
    except (ThetaError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")


def _bound(args, err):
    if args.bound is None:
        err.write(f"warning: no --bound given, using X={format_rational(DEFAULT_BOUND)}; "
                  "zero results are only claims up to that exponent\n")
        return DEFAULT_BOUND
    return args.bound


def build_parser():
    p = _Parser(prog="thetamap", description="Theta series invariants of quadratic forms.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def with_bound(sp):
        sp.add_argument("--bound", type=_rational_arg, default=None,
                        help="truncation exponent X (p or p/q), default 10")
        return sp

    with_bound(sub.add_parser("theta")).add_argument("gram")
    sp = with_bound(sub.add_parser("theta11"))
    sp.add_argument("gram")
    sp.add_argument("--route", choices=["direct", "harmonic", "both"], default="direct")
    sp = with_bound(sub.add_parser("dtheta"))
    sp.add_argument("gram")
    sp.add_argument("--direction", required=True)
    with_bound(sub.add_parser("wronskian")).add_argument("gram")
    sub.add_parser("classify2").add_argument("gram")
    sub.add_parser("construct").add_argument("name")
    sp = with_bound(sub.add_parser("compare"))
    sp.add_argument("gram1")
    sp.add_argument("gram2")
    with_bound(sub.add_parser("spectrum")).add_argument("gram")
    return p


def _dispatch(args, out, err):
    verb = args.verb
    if verb == "construct":
        try:
            out.write(matrix_to_json(construct(args.name).gram) + "\n")
        except ThetaError as exc:
            raise InputError(str(exc))
        return
    if verb == "classify2":
        A = load_gram(args.gram)
        if A.n != 2:
            raise InputError(f"classify2 needs a rank-2 form, got rank {A.n}")
        out.write(rank2.classify(A).render() + "\n")
        return
    if verb == "compare":
        A1, A2 = load_gram(args.gram1), load_gram(args.gram2)
        if A1.n != A2.n:
            raise InputError(f"ranks differ: {A1.n} vs {A2.n}")
        out.write(invariants.compare_invariants(A1, A2, _bound(args, err)).render())
        return

    A = load_gram(args.gram)
    X = _bound(args, err)
    if verb == "theta":
        out.write(render(invariants.theta_series(A, X)))
    elif verb == "theta11":
        if args.route in ("direct", "harmonic"):
            fn = invariants.theta11_direct if args.route == "direct" else invariants.theta11_harmonic
            out.write(render(fn(A, X).series))
        else:
            d = invariants.theta11_direct(A, X).series
            h = invariants.theta11_harmonic(A, X).series
            out.write("# route=direct\n" + render(d))
            out.write("# route=harmonic\n" + render(h))
            agree = d == invariants.ROUTE_CONSTANT * h
            out.write("AGREE\n" if agree else "DISAGREE\n")
            if not agree:
                raise RuntimeError("theta11 routes disagree")
    elif verb == "dtheta":
        B = load_direction(args.direction)
        if B.n != A.n:
            raise InputError(f"direction has size {B.n}, form has size {A.n}")
        out.write(render(invariants.dtheta(A, B, X)))
    elif verb == "wronskian":
        w = invariants.wronskian(A, X)
        out.write("# raw_det\n" + render(w.raw_det))
        out.write(f"# gram_det={format_rational(w.gram_det)}\n")
        out.write(f"# det2_weight={format_rational(invariants.det2_weight(A.n))}\n")
        out.write("# normalized_square\n" + render(w.normalized_square))
    elif verb == "spectrum":
        for norm, mult in spectrum(A, X):
            out.write(f"{format_rational(norm)}:{mult}\n")


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        _dispatch(args, out, err)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except ThetaError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except Exception as exc:  # noqa: BLE001
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 2
    return 0
