"""Command-line front end: family solvers, raw machinery, and the oracle.

Exit codes: 0 success; 2 invalid input syntax; 3 hypothesis violated by the
input; 4 undetermined verdict.  Reports go to stdout as text or, with
--json, as canonical JSON (sorted keys, no whitespace), so identical inputs
produce byte-identical output.
"""

import argparse
import json
import random
import shlex
import sys

from . import descent, families, oracle
from .dual_graph import component_group, phi_torsion_representatives, GraphError
from .families import (CubicForm, FamilyError, genus4_report,
                       hyperelliptic_report, validate_genus4,
                       validate_hyperelliptic)
from .finite_field import (FieldError, Poly, make_field, INF)
from .parsing import ParseError, format_univariate, parse_cubic_form, parse_univariate
from .torus import (CharacterLattice, TorusError, enumerate_rational_points,
                    frobenius_char_poly, mu_group, torus_order,
                    principal_component, verify_principal_decomposition,
                    EnumerationLimitExceeded)

EXIT_OK = 0
EXIT_SYNTAX = 2
EXIT_HYPOTHESIS = 3
EXIT_UNDETERMINED = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toricdescent",
        description="Divisor-class divisibility and rational torsion for curves "
                    "with totally degenerate reduction.")
    sub = parser.add_subparsers(dest="command", required=True)

    hyp = sub.add_parser("hyperelliptic",
                         help="two-line family y^2 = g^2 + pi*h")
    group = hyp.add_mutually_exclusive_group(required=True)
    group.add_argument("--q", type=int, help="residue field size (prime power)")
    group.add_argument("--p", type=int, help="prime: base field Q_p")
    hyp.add_argument("--g", required=True, help="monic polynomial in x")
    hyp.add_argument("--h", required=True, help="polynomial in x")
    hyp.add_argument("--r", type=int, default=2, help="divisibility target (default 2)")
    hyp.add_argument("--no-engine-check", action="store_true",
                     help="skip the generic-engine cross-check")
    hyp.add_argument("--json", action="store_true")

    g4 = sub.add_parser("genus4", help="quadric-cubic genus-4 family")
    group = g4.add_mutually_exclusive_group(required=True)
    group.add_argument("--q", type=int)
    group.add_argument("--p", type=int)
    g4.add_argument("--eps", required=True, help="homogeneous cubic in X,Y,Z,W")
    g4.add_argument("--r", type=int, default=2, choices=(2, 3))
    g4.add_argument("--no-engine-check", action="store_true")
    g4.add_argument("--json", action="store_true")

    cg = sub.add_parser("component-group",
                        help="component group of an intersection matrix")
    cg.add_argument("--matrix", required=True, help="JSON rows, e.g. [[-3,3],[3,-3]]")
    cg.add_argument("--r", type=int, help="also list the r-torsion representatives")
    cg.add_argument("--json", action="store_true")

    tor = sub.add_parser("torus", help="character-lattice computations")
    tor.add_argument("--lattice", required=True,
                     help='JSON {"rank": g, "frobenius": rows, "components": [chi...]}')
    tor.add_argument("--q", type=int, required=True)
    tor.add_argument("--enumerate", action="store_true",
                     help="enumerate the rational points")
    tor.add_argument("--json", action="store_true")

    orc = sub.add_parser("oracle",
                         help="exhaustive cross-check of the descent engine")
    orc.add_argument("--q", type=int, required=True)
    orc.add_argument("--g", required=True)
    orc.add_argument("--h", required=True)
    orc.add_argument("--r", type=int, default=2)
    orc.add_argument("--trials", type=int, default=20)
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--json", action="store_true")

    bat = sub.add_parser("batch", help="process one request per line of a file")
    bat.add_argument("path")
    return parser


def _field_from_args(args):
    if getattr(args, "p", None):
        return make_field(args.p), True
    q = args.q
    from .zmat import factorize
    fac = factorize(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    [(p, m)] = fac.items()
    return make_field(p, m), False


def _poly_from_text(field, text):
    return Poly(field, parse_univariate(text))


def run_hyperelliptic(args):
    k, qp_mode = _field_from_args(args)
    g = _poly_from_text(k, args.g)
    h = _poly_from_text(k, args.h)
    inp = validate_hyperelliptic(k, g, h, r=args.r, qp_mode=qp_mode)
    report = hyperelliptic_report(inp, engine_check=not args.no_engine_check)
    code = EXIT_OK
    if report["verdicts"]["theta"] == descent.UNDETERMINED or report["torsion"] is None:
        code = EXIT_UNDETERMINED
    return code, report


def run_genus4(args):
    k, qp_mode = _field_from_args(args)
    eps = CubicForm(k, parse_cubic_form(args.eps))
    inp = validate_genus4(k, eps, r=args.r, qp_mode=qp_mode)
    report = genus4_report(inp, engine_check=not args.no_engine_check)
    return EXIT_OK, report


def run_component_group(args):
    try:
        rows = json.loads(args.matrix)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix is not valid JSON: {exc.msg}", exc.pos)
    phi = component_group(rows)
    report = {
        "schema_version": 1,
        "command": "component-group",
        "matrix": rows,
        "phi": phi.invariant_factors,
        "order": phi.order,
    }
    if args.r:
        reps = phi_torsion_representatives(phi, args.r)
        report["torsion"] = {
            "r": args.r,
            "elements": [{"element": list(el), "multidegree": list(rep)}
                         for el, rep in reps],
        }
    return EXIT_OK, report


def run_torus(args):
    try:
        data = json.loads(args.lattice)
    except json.JSONDecodeError as exc:
        raise ParseError(f"lattice is not valid JSON: {exc.msg}", exc.pos)
    rows = data["frobenius"]
    rank = data.get("rank", len(rows))
    if rows and isinstance(rows[0], int):
        # row-major flat form
        if len(rows) != rank * rank:
            raise ParseError(f"flat frobenius needs rank^2 = {rank * rank} entries", 0)
        rows = [rows[i * rank:(i + 1) * rank] for i in range(rank)]
    lattice = CharacterLattice(rows)
    q = args.q
    fx = frobenius_char_poly(lattice)
    report = {
        "schema_version": 1,
        "command": "torus",
        "q": q,
        "rank": lattice.rank,
        "char_poly": format_univariate(fx),
        "order": torus_order(lattice, q),
    }
    if data.get("components"):
        ok, cert = verify_principal_decomposition(lattice, data["components"])
        report["decomposition"] = {"valid": ok, "certificate": cert}
        if ok:
            comps = []
            for chi in data["components"]:
                comp = principal_component(lattice, chi)
                mg = mu_group(comp, q)
                comps.append({
                    "generator": list(comp.generator),
                    "char_poly": format_univariate(comp.char_poly),
                    "order": mg.order,
                    "host": repr(mg.host),
                })
            report["decomposition"]["components"] = comps
    if args.enumerate:
        points = enumerate_rational_points(lattice, q)
        report["points"] = {
            "count": len(points),
            "invariants": points.invariants,
        }
    return EXIT_OK, report


def run_oracle(args):
    k, _ = _field_from_args(args)
    g = _poly_from_text(k, args.g)
    h = _poly_from_text(k, args.h)
    inp = validate_hyperelliptic(k, g, h, r=args.r)
    fiber, frame, phi, gens, matrix, _ = families.hyperelliptic_fiber(inp)
    torus = oracle.enumerate_torus(fiber)
    lifts = oracle.nu_lift_vectors(fiber, torus, phi, gens, args.r)
    rng = random.Random(args.seed)
    agreements = 0
    for _ in range(args.trials):
        div = _random_stable_divisor(fiber, args.r, rng)
        verdict = descent.divisibility_verdict(div, args.r, frame, phi, gens, matrix)
        truth = oracle.exhaustive_divisibility(div, args.r, fiber, torus, lifts)
        if (verdict.outcome == descent.DIVISIBLE) == truth:
            agreements += 1
    report = {
        "schema_version": 1,
        "command": "oracle",
        "q": k.q,
        "r": args.r,
        "trials": args.trials,
        "agreements": agreements,
        "torus_points": len(torus),
        "torus_order": frame.torus_order(),
    }
    code = EXIT_OK if agreements == args.trials else 1
    return code, report


def _random_stable_divisor(fiber, r, rng):
    """Galois-stable node-avoiding divisor with r-divisible multidegree."""
    from .finite_field import embed, _cached_field
    E = fiber.E
    k = fiber.k
    pts = []
    for comp in range(fiber.graph.num_vertices):
        nodes = {c.to_int() for c in fiber.component_node_coords(comp)
                 if c is not INF}
        for _ in range(rng.randrange(0, 3)):
            t = rng.choice([1, 2])
            if E.m % (k.m * t):
                continue
            sub = _cached_field(k.p, k.m * t)
            x0 = embed(sub, E)(sub.from_int(rng.randrange(sub.q)))
            orbit = {x0.to_int()}
            cur = x0
            for _ in range(t * k.m):
                cur = cur.frob(1)
                orbit.add(cur.to_int())
            if any(v in nodes for v in orbit):
                continue
            mult = rng.choice([-2, -1, 1, 2])
            pts.extend((comp, E.from_int(v), mult) for v in orbit)
    div = descent.SpecializedDivisor(fiber, pts)
    fix = []
    for comp, dcomp in enumerate(div.multidegree):
        rem = (-dcomp) % r
        if rem:
            fix.append((comp, fiber.standard_point(comp), rem))
    div = div + descent.SpecializedDivisor(fiber, fix)
    assert div.is_galois_stable()
    return div


def _render_text(report):
    lines = []

    def emit(key, value, indent=0):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k2 in sorted(value):
                emit(k2, value[k2], indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                emit("-", item, indent + 1)
        else:
            lines.append(f"{pad}{key}: {value}")

    for key in sorted(report):
        emit(key, report[key])
    return "\n".join(lines)


def _emit(code, report, as_json, stream=None):
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(report, sort_keys=True, separators=(",", ":")))
        stream.write("\n")
    else:
        stream.write(_render_text(report))
        stream.write("\n")
    return code


RUNNERS = {
    "hyperelliptic": run_hyperelliptic,
    "genus4": run_genus4,
    "component-group": run_component_group,
    "torus": run_torus,
    "oracle": run_oracle,
}


def run_line(argv, stream=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SYNTAX if exc.code else EXIT_OK
    return dispatch(args, stream=stream)


def dispatch(args, stream=None):
    if args.command == "batch":
        worst = EXIT_OK
        with open(args.path) as handle:
            for line in handle:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                argv = shlex.split(line)
                if argv and argv[0] != "batch":
                    if "--json" not in argv and argv[0] in RUNNERS:
                        argv.append("--json")
                    code = run_line(argv, stream=stream)
                    worst = max(worst, code)
        return worst
    runner = RUNNERS[args.command]
    try:
        code, report = runner(args)
    except ParseError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except (FamilyError, descent.UnsupportedTorus) as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (FieldError, TorusError, GraphError, EnumerationLimitExceeded,
            oracle.TooLarge) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    return _emit(code, report, getattr(args, "json", False), stream=stream)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        raise SystemExit(EXIT_SYNTAX if exc.code else EXIT_OK)
    raise SystemExit(dispatch(args))


if __name__ == "__main__":
    main()
