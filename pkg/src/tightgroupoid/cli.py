"""Command-line front end: evaluate words and germs, run the verification suites.

Exit codes: 0 success, 1 suite failure, 2 usage or parse error, 3 domain error.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import groupoid as gp
from . import operator_model as om
from . import representations as rp
from . import semilattice as sl
from . import suites
from . import word_algebra as wa
from .errors import NotComposable, NotInDomain, ParseError, TightGroupoidError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


def jsonable(x):
    """Plain JSON data; infinity becomes the string "inf", mappings get sorted keys."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (wa.Word, gp.Germ, sl.UnitPoint, sl.Projection)):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=str)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return "inf" if math.isinf(x) else float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _emit(args, payload: dict, text: str):
    if args.json or args.out:
        doc = {"schema": 1, "command": args.command, **payload, "conventions": suites.CONVENTIONS}
        out = json.dumps(jsonable(doc), indent=2, sort_keys=True)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(out + "\n")
        if args.json:
            print(out)
            return
    print(text)


def _cfg(args) -> om.TruncConfig:
    return om.TruncConfig(args.fock, args.winding, args.q)


# -- expression commands -----------------------------------------------------

def cmd_mul(args):
    ws = [wa.parse_word(t) for t in args.words]
    p = wa.word_product(*ws)
    _emit(args, {"inputs": ws, "product": p}, wa.format_word(p))


def cmd_adjoint(args):
    w = wa.parse_word(args.word)
    a = wa.adjoint(w)
    _emit(args, {"input": w, "adjoint": a}, wa.format_word(a))


def cmd_canon(args):
    k, w = sl.parse_unit(args.unit), wa.parse_word(args.word)
    g = gp.canonicalize(k, w)
    payload = {"input": [k, w], "germ": g, "range": g.k, "source": g.source, "data": g.data}
    _emit(args, payload, gp.format_germ(g))


def cmd_act(args):
    k, w = sl.parse_unit(args.unit), wa.parse_word(args.word)
    out = gp.act(k, w)
    _emit(args, {"input": [k, w], "result": out}, sl.format_unit(out))


def cmd_fiber(args):
    u = sl.parse_unit(args.unit)
    if args.source:
        germs, label = gp.fiber_s(u, args.bound), gp.label_s
    else:
        germs, label = gp.fiber_r(u, args.bound), gp.label_r
    rows = [{"label": label(g), "germ": g} for g in germs]
    text = "\n".join(f"{jsonable(r['label'])}\t{gp.format_germ(r['germ'])}" for r in rows)
    _emit(args, {"unit": u, "kind": "source" if args.source else "range", "bound": args.bound,
                 "germs": rows}, text)


def cmd_isotropy(args):
    u = sl.parse_unit(args.unit)
    rows = [{"label": r, "germ": g} for r, g in gp.isotropy(u, args.bound)]
    text = "\n".join(f"{r['label']}\t{gp.format_germ(r['germ'])}" for r in rows)
    _emit(args, {"unit": u, "bound": args.bound, "germs": rows}, text)


def cmd_export(args):
    """Coordinate list of a realized word, or of a q-deformed generator."""
    cfg = _cfg(args)
    if args.word in wa.GENERATOR_IDS or args.word in ("s1", "s2", "s3", "s4"):
        gid = wa.GENERATOR_IDS[int(args.word[1]) - 1]
        M = om.gen_q(gid, cfg)
    else:
        M = om.realize(wa.parse_word(args.word), cfg)
    rows = om.coordinate_list(M, cfg)
    text = "\n".join(f"{x}\t{y}\t{v.real:.12g}{v.imag:+.12g}j" for x, y, v in rows)
    _emit(args, {"word": args.word, "config": {"N": cfg.N, "R": cfg.R, "q": cfg.q},
                 "entries": [[x, y, v] for x, y, v in rows]}, text)


def cmd_rep(args):
    t0 = rp.TorusPoint.from_turns(args.t0[0]).t0
    res = rp.check_equivalence(args.case, t0, args.bound)
    text = (f"case {res['case']} at {res['unit']}: matched {res['matched']}"
            f" (quotient dim {res['quotient_dim']}, Gram min eigenvalue {res['gram_min_eigenvalue']:.3g})")
    _emit(args, {"result": res}, text)
    return EXIT_OK if res["matched"] else EXIT_FAIL


# -- verification ------------------------------------------------------------

def _suite_kwargs(args) -> dict:
    name, b = args.suite, args.bound
    kw = {}
    if name in ("semigroup-axioms", "oracle-products", "groupoid-axioms", "equivalence-oracle", "reps"):
        if b is not None:
            kw["bound"] = b
    elif name == "ultrafilters" and b is not None:
        kw["bound"] = b
    elif name == "orbit-topology" and b is not None:
        kw["fibre_bound"] = b
    if name in ("oracle-products", "psi"):
        kw["cfg"] = _cfg(args)
    if name == "reps" and args.t0 is not None:
        kw["t0_turns"] = tuple(args.t0)
    return kw


def cmd_verify(args):
    rep = suites.SUITES[args.suite](**_suite_kwargs(args))
    lines = [f"{rep.suite}: {'PASS' if rep.passed else 'FAIL'}  cases={rep.cases}"
             f"  failures={rep.failure_count}  time={rep.wall_time:.1f}s"]
    lines += [f"  input {i}: expected {e}, got {g}" for i, e, g in sorted(rep.failures)]
    lines += [f"  note: {n}" for n in rep.notes]
    data = rep.to_json()
    data.pop("schema")
    data.pop("conventions")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON document")
    common.add_argument("--out", metavar="FILE", help="also write the JSON document to FILE")
    common.add_argument("--fock", type=int, default=12, help="Fock truncation N")
    common.add_argument("--winding", type=int, default=8, help="winding window R")
    common.add_argument("--q", type=float, default=0.0, help="deformation parameter")
    common.add_argument("--t0", type=float, nargs="+", help="torus point(s) in turns")

    p = argparse.ArgumentParser(prog="tightgroupoid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *pos, bound=None, **kw):
        sp_ = sub.add_parser(name, parents=[common], **kw)
        for a, h in pos:
            sp_.add_argument(a, help=h)
        sp_.add_argument("--bound", type=int, default=bound)
        sp_.set_defaults(fn=fn)
        return sp_

    m = sub.add_parser("mul", parents=[common], help="product of words")
    m.add_argument("words", nargs="+")
    m.add_argument("--bound", type=int)
    m.set_defaults(fn=cmd_mul)
    add("adjoint", cmd_adjoint, ("word", "word text"), help="adjoint of a word")
    add("canon", cmd_canon, ("unit", "phi(k1,k2)"), ("word", "word text"), help="canonical germ")
    add("act", cmd_act, ("unit", "phi(k1,k2)"), ("word", "word text"), help="phi(k).w")
    f = add("fiber", cmd_fiber, ("unit", "phi(k1,k2)"), bound=3, help="range (or source) fibre")
    f.add_argument("--source", action="store_true", help="source fibre instead of range fibre")
    add("isotropy", cmd_isotropy, ("unit", "phi(k1,k2)"), bound=4, help="isotropy germs")
    add("export", cmd_export, ("word", "word text or generator id"), help="coordinate list")
    r = add("rep", cmd_rep, bound=6, help="induced representation vs Soibelman families")
    r.add_argument("--case", type=int, choices=(1, 2, 3, 4), required=True)
    r.set_defaults(t0=[0.0])
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(suites.SUITES))
    v.add_argument("--bound", type=int)
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "rep" and not args.t0:
        args.t0 = [0.0]
    try:
        code = args.fn(args)
    except (NotInDomain, NotComposable) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TightGroupoidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
