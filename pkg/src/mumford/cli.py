"""Command-line front end: ``mumford <command> INPUT.json [options]``.

Exit codes: 0 success, 2 relation found, 3 non-hyperbolic element found,
4 inconclusive search, 5 NOT VALID ramification data, 64 malformed input,
1 any other runtime error.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .curve import canonical_embed, embedded_quartic, interior_sample, period_matrix
from .domain import GoodPosition, Inconclusive, NonHyperbolic, Relation, good_position
from .padic import format_digits, parse_digits, working_precision
from .proj import Mat2, parse_point
from .skeleton import export_graph, tropical_curve
from .whittaker import (
    NotValid,
    SearchExhausted,
    normalize_presentation,
    ramification_points,
    ramification_to_whittaker,
    whittaker_group,
)

EXIT_OK = 0
EXIT_RELATION = 2
EXIT_NONHYPERBOLIC = 3
EXIT_INCONCLUSIVE = 4
EXIT_NOT_VALID = 5
EXIT_USAGE = 64


class UsageError(ValueError):
    pass


def _is_prime(p):
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def _load(path):
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("cannot read input: %s" % exc)
    if not isinstance(data, dict):
        raise UsageError("input must be a JSON object")
    p = data.get("p")
    if not isinstance(p, int) or not _is_prime(p):
        raise UsageError("field 'p' must be a prime")
    return data


def _precision(data, args):
    n = args.precision if args.precision is not None else data.get("n", 10)
    if not isinstance(n, int) or n < 1:
        raise UsageError("precision n must be a positive integer")
    return n


def _generators(data):
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise UsageError("field 'generators' must be a non-empty list of 2x2 matrices")
    try:
        return [Mat2.from_rows([[Fraction(str(x)) for x in row] for row in m]).primitive() for m in gens]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError("bad generator matrix: %s" % exc)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _verdict_exit(v):
    if isinstance(v, Relation):
        return EXIT_RELATION
    if isinstance(v, NonHyperbolic):
        return EXIT_NONHYPERBOLIC
    return EXIT_OK


def _domain(data, args):
    """Good position for the input, or ``(exit code, payload)`` when there is none."""
    gens = _generators(data)
    try:
        v = good_position(gens, data["p"], max_m=args.max_m)
    except Inconclusive as exc:
        return None, (EXIT_INCONCLUSIVE, {"verdict": "Inconclusive", "message": str(exc), "m_tried": exc.m_tried})
    if not isinstance(v, GoodPosition):
        return None, (_verdict_exit(v), v.to_json())
    return v, None


def cmd_schottky_test(data, args):
    gens = _generators(data)
    try:
        v = good_position(gens, data["p"], max_m=args.max_m)
    except Inconclusive as exc:
        return EXIT_INCONCLUSIVE, _dump({"verdict": "Inconclusive", "message": str(exc), "m_tried": exc.m_tried})
    return _verdict_exit(v), _dump(v.to_json())


def cmd_period_matrix(data, args):
    n = _precision(data, args)
    if args.unsafe_no_good_position:
        return _unsafe_period_matrix(data, args, n)
    v, fail = _domain(data, args)
    if fail:
        return fail[0], _dump(fail[1])
    F = v.domain
    P = period_matrix(F.gens, F, n, m=args.m, threads=args.threads)
    out = P.to_json()
    if P.m == 0:
        # one term per product: only the valuations are meaningful
        out.pop("Q")
    out["good_position_m"] = v.m
    out["domain"] = F.to_json()
    return EXIT_OK, _dump(out)


def _unsafe_period_matrix(data, args, n):
    from .curve import _theta_many

    if args.m is None or "a" not in data or "z" not in data:
        raise UsageError("--unsafe-no-good-position needs --m and input fields 'a' and 'z'")
    gens = _generators(data)
    p = data["p"]
    a, z = Fraction(str(data["a"])), Fraction(str(data["z"]))
    N = working_precision(n)
    from .proj import apply

    Q = []
    for i, gi in enumerate(gens):
        zs = [z] + [apply(gj, z) for gj in gens]
        vals = _theta_many(gens, args.m, a, apply(gi, a), zs, p, N)
        Q.append([(vals[0] / vals[1 + j]).with_prec(n) for j in range(len(gens))])
    out = {
        "p": p,
        "n": n,
        "m": args.m,
        "N": N,
        "unsafe": True,
        "Q": [[format_digits(x) for x in row] for row in Q],
        "val": [[str(x.valuation) for x in row] for row in Q],
    }
    return EXIT_OK, _dump(out)


def cmd_skeleton(data, args):
    v, fail = _domain(data, args)
    if fail:
        return fail[0], _dump(fail[1])
    F = v.domain
    G = tropical_curve(F.gens, F)
    if args.format == "dot":
        return EXIT_OK, export_graph(G, "dot")
    obj = json.loads(export_graph(G, "json"))
    obj["good_position_m"] = v.m
    obj["c"] = str(F.c)
    obj["log_d"] = str(F.log_d)
    return EXIT_OK, _dump(obj)


def cmd_canonical(data, args):
    n = _precision(data, args)
    zs = args.z if args.z else data.get("z", [])
    if not isinstance(zs, list):
        zs = [zs]
    v, fail = _domain(data, args)
    if fail:
        return fail[0], _dump(fail[1])
    F = v.domain
    try:
        zs = [Fraction(str(z)) for z in zs]
    except ValueError as exc:
        raise UsageError("bad point: %s" % exc)
    out = {"p": data["p"], "n": n, "good_position_m": v.m, "c": str(F.c), "log_d": str(F.log_d)}
    if args.quartic:
        if F.g != 3:
            raise UsageError("the quartic fit needs genus 3")
        sample = interior_sample(F, 14, first=zs[0] if zs else None)
        C, pts, _ = embedded_quartic(F.gens, F, n, sample)
        out["m"] = pts[0].m
        out["sample"] = [str(z) for z in sample]
        out["quartic"] = [format_digits(c) if not (c.is_zero() and c.prec is not None) else "0" for c in C]
        out["points"] = [[format_digits(x) for x in pt.coords] for pt in pts]
    else:
        if not zs:
            raise UsageError("give at least one point with --z or field 'z'")
        pts = [canonical_embed(F.gens, F, z, n) for z in zs]
        out["m"] = pts[0].m
        out["points"] = {str(z): [format_digits(x) for x in pt.coords] for z, pt in zip(zs, pts)}
    out["N"] = working_precision(n)
    return EXIT_OK, _dump(out)


def _parse_value(x, p, cap):
    if isinstance(x, str) and x.strip().startswith("("):
        return parse_digits(x, p, cap)
    return Fraction(str(x))


def cmd_whittaker(data, args):
    p = data["p"]
    n = _precision(data, args)
    if "ramification" in data:
        d = args.digits or data.get("d", 4)
        try:
            R = [_parse_value(x, p, n + 10) for x in data["ramification"]]
        except ValueError as exc:
            raise UsageError("bad ramification value: %s" % exc)
        try:
            xs, cert = ramification_to_whittaker(R, d, p)
        except NotValid:
            return EXIT_NOT_VALID, _dump({"result": "NOT VALID"})
        except SearchExhausted as exc:
            return EXIT_INCONCLUSIVE, _dump({"result": "Inconclusive", "message": str(exc), "t": exc.t})
        return EXIT_OK, _dump({"p": p, "d": d, "fixed_points_mod_p^d": xs, "theta_values_mod_p^d": cert})
    pairs = data.get("fixed_points")
    if not isinstance(pairs, list) or len(pairs) < 2:
        raise UsageError("give 'fixed_points' (pairs) or 'ramification' (values)")
    try:
        pairs = [(parse_point(str(a)), parse_point(str(b))) for a, b in pairs]
    except (ValueError, TypeError) as exc:
        raise UsageError("bad fixed point: %s" % exc)
    W = whittaker_group(pairs, p)
    out = {"presentation": W.to_json()}
    R = ramification_points(W, n)
    out["ramification"] = R.to_json()
    try:
        h, Wn = normalize_presentation(W)
    except ValueError:
        h = None
    if h is not None:
        Rn = ramification_points(Wn, n, a=Fraction(0), b=Fraction(1))
        out["normalized"] = {
            "map": h.to_json(),
            "presentation": Wn.to_json(),
            "ramification": Rn.to_json(),
        }
    return EXIT_OK, _dump(out)


COMMANDS = {
    "schottky-test": cmd_schottky_test,
    "period-matrix": cmd_period_matrix,
    "skeleton": cmd_skeleton,
    "canonical": cmd_canonical,
    "whittaker": cmd_whittaker,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="mumford", description="Computations with Mumford curves over Q_p.")
    ap.add_argument("--version", action="version", version="%(prog)s " + __version__)
    ap.add_argument("--threads", type=int, default=1, help="worker processes for parallel parts")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("input", help="JSON job file, or - for stdin")
        sp.add_argument("--precision", "-n", type=int, default=None, help="target p-adic digits")
        sp.add_argument("--max-m", type=int, default=12, help="largest word length tried for good position")
        return sp

    common(sub.add_parser("schottky-test", help="decide Schottky / good position"))
    sp = common(sub.add_parser("period-matrix", help="period matrix of the Jacobian"))
    sp.add_argument("--m", type=int, default=None, help="override the truncation length")
    sp.add_argument("--unsafe-no-good-position", action="store_true",
                    help="use the input generators as they are (slow convergence)")
    sp = common(sub.add_parser("skeleton", help="abstract tropical curve with marking"))
    sp.add_argument("--format", choices=["json", "dot"], default="json")
    sp = common(sub.add_parser("canonical", help="canonical embedding and plane quartic"))
    sp.add_argument("--z", action="append", help="point to embed (repeatable)")
    sp.add_argument("--quartic", action="store_true", help="fit the plane quartic (genus 3)")
    sp = common(sub.add_parser("whittaker", help="branch points of a Whittaker group, or the inverse search"))
    sp.add_argument("--digits", "-d", type=int, default=None, help="digits for the inverse search")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    if args.command in ("canonical", "whittaker", "skeleton", "schottky-test"):
        for name in ("m", "unsafe_no_good_position"):
            if not hasattr(args, name):
                setattr(args, name, None)
    try:
        data = _load(args.input)
        code, text = COMMANDS[args.command](data, args)
    except UsageError as exc:
        print("mumford: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print("mumford: error: %s" % exc, file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
