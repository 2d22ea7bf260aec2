"""Command-line front end.

Every subcommand prints one JSON document on stdout (or a two-row CSV with
``--format csv``).  Library errors exit with status 1 and an error object;
malformed input exits with 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict

from . import errors
from .numerics import Param, Regime, ScaledScalar
from .recoupling import quantum_factorial, quantum_int, sixj, tet, theta
from .surface import (ColoredSpine, SeriesResult, _closed_tail, _witten_tail, canonical_spine,
                      divergence_probe, ym_closed, ym_root, ym_witten)
from .torus import commutator, dump_expression, load_expression, mu, torus_mul, torus_ym
from .verify import CHECKS


class InputError(Exception):
    """Malformed command-line input (exit status 2)."""


def encode(x):
    """JSON form of a scalar: a float when real and in range, ``{re, im}`` when
    complex, ``{re, im, log2_scale}`` when outside double range."""
    if isinstance(x, ScaledScalar):
        if not x.fits_double(margin=2):
            return {"re": x.sig.real, "im": x.sig.imag, "log2_scale": x.exp}
        x = x.to_complex()
    if isinstance(x, complex):
        if x.imag == 0:
            return x.real
        return {"re": x.real, "im": x.imag}
    return x


def decode(obj):
    """Inverse of :func:`encode`."""
    if isinstance(obj, dict):
        z = complex(obj["re"], obj["im"])
        if "log2_scale" in obj:
            return ScaledScalar(z, obj["log2_scale"])
        return z
    return obj


def _parse_t(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"cannot parse t = {text!r}") from exc


def _param(args) -> Param:
    if getattr(args, "root", None) is not None:
        return Param.root_of_unity(args.root)
    if getattr(args, "classical", False):
        return Param.classical(-1)
    if getattr(args, "t", None) is None:
        raise InputError("one of --t, --root or --classical is required")
    return Param.from_value(_parse_t(args.t))


def _add_param(sp, required: bool = True) -> None:
    g = sp.add_mutually_exclusive_group(required=required)
    g.add_argument("--t", help="deformation parameter, real or complex (e.g. 0.5, -1, 0.3+0.4j)")
    g.add_argument("--root", type=int, help="root of unity t = exp(i pi / 2r)")
    g.add_argument("--classical", action="store_true", help="t = -1")


def _series(res: SeriesResult) -> dict:
    out = asdict(res)
    out["value"] = encode(complex(res.value))
    return out


def _load_spine(args, genus: int) -> ColoredSpine:
    if getattr(args, "spine", None):
        try:
            with open(args.spine) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read spine file: {exc}") from exc
        spine = ColoredSpine.from_json(data)
        if genus is not None and spine.genus != genus:
            raise InputError(f"spine file has genus {spine.genus}, --genus says {genus}")
        return spine
    if genus is None:
        raise InputError("--genus is required without --spine")
    colors = None
    if getattr(args, "colors", None):
        try:
            colors = [int(c) for c in args.colors.split(",")]
        except ValueError as exc:
            raise InputError(f"bad --colors list: {exc}") from exc
    return canonical_spine(genus, colors)


class _TermDump:
    def __init__(self, path: str, tail):
        self.fh = open(path, "w", newline="")
        self.writer = csv.writer(self.fh)
        self.writer.writerow(["index", "term_re", "term_im", "running_re", "running_im", "tail_bound"])
        self.tail = tail

    def __call__(self, idx, vals, running):
        for i, v, s in zip(idx.tolist(), vals.tolist(), running.tolist()):
            self.writer.writerow([i, repr(v.real), repr(v.imag), repr(s.real), repr(s.imag),
                                  repr(self.tail(i))])

    def close(self):
        self.fh.close()


def cmd_qint(args):
    return {"value": encode(quantum_int(_param(args), args.n))}


def cmd_qfact(args):
    return {"value": encode(quantum_factorial(_param(args), args.n))}


def cmd_theta(args):
    return {"value": encode(theta(_param(args), *args.labels))}


def cmd_tet(args):
    return {"value": encode(tet(_param(args), *args.labels))}


def cmd_sixj(args):
    return {"value": encode(sixj(_param(args), *args.labels))}


def _run_series(args, tail, runner):
    dump = _TermDump(args.dump_terms, tail) if getattr(args, "dump_terms", None) else None
    try:
        return runner(dump)
    finally:
        if dump:
            dump.close()


def cmd_ym(args):
    p = _param(args)
    spine = _load_spine(args, args.genus)
    if p.regime is Regime.ROOT_OF_UNITY:
        return {"value": encode(complex(ym_root(p, spine))), "terms_used": p.r - 1,
                "tail_bound": 0.0, "converged": True, "regime": p.tag()}
    if spine.genus < 2:
        raise errors.GenusError("genus 1 has no convergent series here; use the torus subcommand")
    p.require_convergent()
    res = _run_series(args, _closed_tail(p, spine),
                      lambda hook: ym_closed(p, spine, args.tol, args.max_terms, on_block=hook))
    return _series(res)


def cmd_volume(args):
    p = Param.classical(-1)
    spine = canonical_spine(args.genus)
    if spine.genus < 2:
        raise errors.GenusError("volume needs genus >= 2")
    res = _run_series(args, _closed_tail(p, spine),
                      lambda hook: ym_closed(p, spine, args.tol, args.max_terms, on_block=hook))
    return _series(res)


def cmd_witten(args):
    spine = _load_spine(args, args.genus)
    if not args.rho > 0:
        raise errors.DomainError("rho must be positive")
    res = _run_series(args, _witten_tail(spine, args.rho),
                      lambda hook: ym_witten(spine, args.rho, args.tol, args.max_terms, on_block=hook))
    return _series(res)


def _read_expr(path: str):
    try:
        with open(path) as fh:
            return load_expression(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read expression file {path}: {exc}") from exc


def cmd_torus(args):
    p = _param(args)
    x = _read_expr(args.expr)
    if args.op == "trace":
        return {"value": encode(complex(torus_ym(x)))}
    if args.op == "mu":
        m = mu(x)
        return {"empty": encode(complex(m.empty)),
                "homology": {f"{a}{b}": encode(complex(v)) for (a, b), v in m.homology.items()}}
    if args.expr2 is None:
        raise InputError(f"--op {args.op} needs --expr2")
    y = _read_expr(args.expr2)
    z = torus_mul(p, x, y) if args.op == "product" else commutator(p, x, y)
    return dump_expression(z)


def cmd_verify(args):
    report = CHECKS[args.check]()
    out = report.as_dict()
    out["_exit"] = 0 if report.passed else 1
    return out


def cmd_probe(args):
    if args.angle is not None:
        t = complex(math.cos(args.angle), math.sin(args.angle))
    elif args.t is not None:
        t = _parse_t(args.t)
    else:
        raise InputError("one of --t or --angle is required")
    rep = divergence_probe(Param.from_value(t), args.genus, args.N)
    return {"t": encode(rep.t), "genus": rep.genus, "N": rep.n_max, "count": len(rep.indices),
            "indices": rep.indices, "magnitudes": rep.magnitudes}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skeinym", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=["json", "csv"], default="json", help="output mode")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, fn, help_ in (("qint", cmd_qint, "quantum integer [n]"),
                            ("qfact", cmd_qfact, "quantum factorial [n]!")):
        sp = sub.add_parser(name, help=help_)
        _add_param(sp)
        sp.add_argument("--n", type=int, required=True)
        sp.set_defaults(func=fn)

    for name, fn, k in (("theta", cmd_theta, 3), ("tet", cmd_tet, 6), ("sixj", cmd_sixj, 6)):
        sp = sub.add_parser(name, help=f"{name} evaluation")
        _add_param(sp)
        sp.add_argument("labels", type=int, nargs=k, metavar="COLOR")
        sp.set_defaults(func=fn)

    def series_opts(sp, tol):
        sp.add_argument("--tol", type=float, default=tol)
        sp.add_argument("--max-terms", type=int, default=10 ** 7)
        sp.add_argument("--dump-terms", metavar="CSV", help="write index, term, running sum, tail bound")

    sp = sub.add_parser("ym", help="Yang-Mills measure of a colored spine")
    sp.add_argument("--genus", type=int)
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--spine", metavar="FILE")
    src.add_argument("--colors", help="comma-separated edge colors for the canonical spine")
    _add_param(sp)
    series_opts(sp, 1e-10)
    sp.set_defaults(func=cmd_ym)

    sp = sub.add_parser("volume", help="symplectic volume (empty skein at t = -1)")
    sp.add_argument("--genus", type=int, required=True)
    series_opts(sp, 1e-6)
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("witten", help="area-damped series at t = -1")
    sp.add_argument("--genus", type=int)
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--spine", metavar="FILE")
    src.add_argument("--colors")
    sp.add_argument("--rho", type=float, required=True)
    series_opts(sp, 1e-10)
    sp.set_defaults(func=cmd_witten)

    sp = sub.add_parser("torus", help="torus skein algebra")
    sp.add_argument("--expr", required=True, metavar="FILE")
    sp.add_argument("--expr2", metavar="FILE")
    sp.add_argument("--op", choices=["trace", "mu", "product", "commutator"], default="trace")
    _add_param(sp, required=False)
    sp.set_defaults(func=cmd_torus, t="0.5")

    sp = sub.add_parser("verify", help="run an invariant sweep")
    sp.add_argument("check", choices=sorted(CHECKS))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("probe-divergence", help="non-decaying terms on the unit circle")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--t")
    g.add_argument("--angle", type=float, help="t = exp(i * angle)")
    sp.add_argument("--genus", type=int, default=2)
    sp.add_argument("--N", type=int, default=10 ** 4)
    sp.set_defaults(func=cmd_probe)
    return ap


def _flatten(obj, prefix=""):
    if isinstance(obj, dict) and not ({"re", "im"} <= obj.keys()):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for j, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{j}.")
    elif isinstance(obj, dict):
        for k in ("re", "im", "log2_scale"):
            if k in obj:
                yield f"{prefix}{k}", obj[k]
    else:
        yield prefix.rstrip("."), obj


def _emit(obj, stream, fmt: str = "json") -> None:
    if fmt == "json":
        stream.write(json.dumps(obj) + "\n")
        return
    rows = list(_flatten(obj))
    w = csv.writer(stream, lineterminator="\n")
    w.writerow([k for k, _ in rows])
    w.writerow([repr(v) if isinstance(v, float) else v for _, v in rows])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except InputError as exc:
        _emit({"error": "InputError", "message": str(exc)}, sys.stdout)
        return 2
    except errors.SpineError as exc:
        _emit({"error": "SpineError", "message": str(exc)}, sys.stdout)
        return 2
    except errors.SkeinError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, sys.stdout)
        return 1
    code = out.pop("_exit", 0) if isinstance(out, dict) else 0
    _emit(out, sys.stdout, args.format)
    return code


def run(argv=None) -> None:
    try:
        code = main(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    run()
