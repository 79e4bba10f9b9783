"""wittforge command line: run verification suites, list and dump fixtures.

Exit codes: 0 all checks pass, 1 a check failed, 2 schema error or bad fixture,
3 budget exceeded.
"""

import argparse
import hashlib
import json
import sys
import time

from . import checks as ck
from . import dieudonne as dd
from . import display as dp
from . import multilinear as ml
from . import ramequiv as rq
from .fixtures import FIXTURES, make_fixture
from .semilinear import binomial
from .serialize import SchemaError, display_from_json, display_to_json, module_from_json, module_to_json

SUITES = ("witt", "ramified", "dieudonne", "display", "multilinear", "ram-equiv", "examples")
EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_BUDGET = 0, 1, 2, 3


class BudgetExceeded(Exception):
    pass


# -- fixture strings ----------------------------------------------------------------------

_KEYS = {"p": "p", "h": "h", "level": "n", "n": "n", "f": "f", "s": "s", "residue_degree": "s"}


def parse_fixture(text, display=False):
    """'lubin-tate h=4 p=3 level=2' -> a module (or a display when display=True)."""
    if not isinstance(text, str) or not text.split():
        raise SchemaError("fixture reference must be a non-empty string")
    name, *rest = text.split()
    kw = {}
    for tok in rest:
        key, sep, val = tok.partition("=")
        if not sep:
            raise SchemaError(f"fixture parameter {tok!r} is not key=value")
        try:
            if key == "char":
                kw["char"] = val
            elif key == "eisenstein":
                kw["eisenstein"] = tuple(int(v) for v in val.split(","))
            elif key == "depth" and display:
                kw["m"] = int(val)
            elif key in _KEYS:
                kw[_KEYS[key]] = int(val)
            else:
                raise SchemaError(f"unknown fixture parameter {key!r}")
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"bad value in {tok!r}") from exc
    try:
        if display:
            allowed = {"p", "h", "m", "s"}
            if set(kw) - allowed:
                raise SchemaError(f"display fixtures take {sorted(allowed)}")
            return dp.display_fixture(name, **kw)
        return make_fixture(name, **kw)
    except KeyError as exc:
        raise SchemaError(f"unknown fixture {name!r}") from exc
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"cannot build fixture {text!r}: {exc}") from exc


# -- checks --------------------------------------------------------------------------------

def _digest(payload):
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


class Check:
    def __init__(self, check_id, paper_ref, inputs, fn):
        self.check_id, self.paper_ref, self.inputs, self.fn = check_id, paper_ref, inputs, fn

    def run(self):
        """fn returns (expected, computed, passed)."""
        try:
            expected, computed, passed = self.fn()
        except (ArithmeticError, NotImplementedError, ValueError, OverflowError) as exc:
            expected, computed, passed = None, {"error": f"{type(exc).__name__}: {exc}"}, False
        return {"check_id": self.check_id, "paper_ref": self.paper_ref,
                "inputs": _jsonable(self.inputs),
                "inputs_digest": _digest({"check_id": self.check_id, "inputs": _jsonable(self.inputs)}),
                "expected": _jsonable(expected), "computed": _jsonable(computed),
                "pass": bool(passed)}


def _battery(fn, **kw):
    def run():
        rep = fn(**kw)
        return {"ok": True}, rep, rep["ok"]
    return run


def default_checks(suite, seed):
    B = _battery
    table = {
        "witt": [
            ("witt.ghost_tables", "ghost components are ring homomorphisms (classical tables)",
             {"primes": [2, 3, 5], "max_depth": 4}, B(ck.classical_tables)),
            ("witt.frobenius_verschiebung", "F V = V F = p on W_2(F_3)",
             {"p": 3, "s": 1, "m": 2}, B(ck.frobenius_verschiebung)),
        ],
        "ramified": [
            ("ramified.ghost_tables", "ramified ghost components are ring homomorphisms",
             {"bases": [list(b) for b in ck.RAMIFIED_BASES], "max_depth": 3}, B(ck.ramified_tables)),
            ("ramified.frobenius_verschiebung", "F_pi V_pi = V_pi F_pi = pi on W_O,2(F_4)",
             {"base": [2, 1, 2, [-2, 0, 1]], "s": 2, "m": 2}, B(ck.ramified_frobenius_verschiebung)),
            ("ramified.mu", "mu: W -> W_O with w_n(mu) = w_fn and mu([a]) = [a]",
             {"samples": 50, "seed": seed}, B(ck.mu_ghost, seed=seed)),
        ],
        "dieudonne": [
            ("dieudonne.order_formula", "order of wedge^j D_n is q^(n C(h,j))",
             {"cases": [[3, 1], [2, 2]], "heights": [2, 3, 4], "levels": [1, 2]}, B(ck.order_formula)),
            ("dieudonne.dimension_formula", "wedge^j of height h dimension 1 has dimension C(h-1,j-1)",
             {"p": 3, "heights": [2, 3, 4], "level": 3}, B(ck.dimension_formula)),
            ("dieudonne.phi_upsilon", "Phi Upsilon = p = Upsilon Phi and the F-/V-diagrams",
             {"p": 3, "trials": 200, "seed": seed}, B(ck.wedge_diagrams, seed=seed)),
            ("dieudonne.tower", "the tower map on exterior powers is a monomorphism",
             {"p": 3, "heights": [2, 3], "n": 1, "m": 1}, B(ck.tower_exactness)),
        ],
        "display": [
            ("display.heights", "wedge^r of a display: height C(h,r), tangent rank C(h-1,r-1)",
             {"primes": [2, 3], "max_height": 5, "depth": 2}, B(ck.display_heights)),
            ("display.base_change", "exterior powers of displays commute with base change",
             {"p": 3, "h": 3, "depth": 2}, B(ck.display_base_change)),
            ("display.universal_property", "lambda induces a bijection on display morphisms",
             {"p": 3, "depth": 1}, B(ck.display_universal_property)),
        ],
        "multilinear": [
            ("multilinear.universal_property", "|L_alt(D^2, N)| = |Hom(wedge^2 D, N)|",
             {"p": 3, "h": 2, "level": 1}, B(ck.universal_property)),
            ("multilinear.delta", "delta is an involution and S_{i,r} partition the index vectors",
             {"max_r": 3, "max_M": 4}, B(ck.delta_involution)),
            ("multilinear.uglysum", "the telescoping identity for multilinear maps",
             {"samples": 100, "seed": seed}, B(ck.uglysum, seed=seed)),
        ],
        "ram-equiv": [
            ("ram-equiv.functors", "H and D are inverse to each other",
             {"f": 2}, B(ck.equivalence_roundtrips)),
            ("ram-equiv.chi_xi", "chi and Xi are inverse bijections of multilinear maps",
             {"f": 2}, B(ck.chi_xi_roundtrips)),
        ],
        "examples": [
            ("examples.lubin-tate-h4-r2", "wedge^2 of Lubin-Tate height 4: height 6, dimension 1 -> 3",
             {"fixture": "lubin-tate h=4 p=3 level=2", "r": 2,
              "expect": {"height": 6, "dimension": 3, "order_exponent": 12}},
             _module_invariants(make_fixture("lubin-tate", p=3, h=4, n=2), 2,
                                {"height": 6, "dimension": 3, "order_exponent": 12})),
            ("examples.elliptic-wedge2", "wedge^2 of a supersingular elliptic curve has height 1, dimension 1",
             {"fixture": "supersingular-e-curve p=5 level=2", "r": 2,
              "expect": {"height": 1, "dimension": 1}},
             _module_invariants(make_fixture("supersingular-e-curve", p=5, n=2), 2,
                                {"height": 1, "dimension": 1})),
            ("examples.top-power-display", "wedge^h of a height h, dimension 1 display has height 1",
             {"display_fixture": "lubin-tate h=4 p=3 depth=2", "r": 4,
              "expect": {"height": 1, "tangent_rank": 1}},
             _display_invariants(dp.display_fixture("lubin-tate", p=3, h=4, m=2), 4,
                                 {"height": 1, "tangent_rank": 1})),
        ],
    }
    return [Check(*row) for row in table[suite]]


def _compare(expect, computed):
    return all(computed.get(k) == v for k, v in expect.items())


def _module_invariants(D, r, expect):
    def run():
        M = dd.exterior_power(D, r).as_module if r else D
        comp = {"rank": M.rank, "height": dd.height(M), "dimension": dd.dimension(M),
                "order_exponent": dd.order_exponent(M), "valid": dd.validate(M)["valid"]}
        return expect, comp, _compare(expect, comp)
    return run


def _display_invariants(d, r, expect):
    def run():
        e = dp.exterior_power(d, r) if r else d
        comp = {"height": e.height, "tangent_rank": e.rank_T, "valid": dp.validate(e)["valid"],
                "nilpotent": dp.nilpotence_test(e)}
        return expect, comp, _compare(expect, comp)
    return run


# -- scenarios -------------------------------------------------------------------------------

def load_objects(scenario):
    objs = {}
    for entry in scenario.get("objects", []):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise SchemaError("every object needs a string id")
        oid = entry["id"]
        if oid in objs:
            raise SchemaError(f"duplicate object id {oid!r}")
        if "fixture" in entry:
            objs[oid] = parse_fixture(entry["fixture"])
        elif "display_fixture" in entry:
            objs[oid] = parse_fixture(entry["display_fixture"], display=True)
        elif "module" in entry:
            objs[oid] = module_from_json(entry["module"])
        elif "display" in entry:
            objs[oid] = display_from_json(entry["display"])
        else:
            raise SchemaError(f"object {oid!r} needs fixture, display_fixture, module or display")
    return objs


def _obj(objs, spec, kind=None):
    oid = spec.get("object")
    if oid not in objs:
        raise SchemaError(f"unknown object {oid!r}")
    o = objs[oid]
    if kind == "module" and not isinstance(o, dd.DieudonneModule):
        raise SchemaError(f"object {oid!r} is not a Dieudonne module")
    if kind == "display" and not isinstance(o, dp.Display):
        raise SchemaError(f"object {oid!r} is not a display")
    return o


def _int_field(spec, key, default):
    v = spec.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{key!r} must be an integer")
    return v


def scenario_checks(scenario, objs, seed):
    out = []
    for k, spec in enumerate(scenario.get("checks", [])):
        if not isinstance(spec, dict):
            raise SchemaError("checks must be objects")
        suite, op = spec.get("suite"), spec.get("op")
        if suite not in SUITES:
            raise SchemaError(f"unknown suite {suite!r}")
        cid = spec.get("id", f"{suite}.{op}.{k}")
        expect = spec.get("expect", {})
        if not isinstance(expect, dict):
            raise SchemaError("expect must be an object")
        inputs = {key: v for key, v in spec.items() if key != "id"}
        r = _int_field(spec, "r", 0)
        if op == "module_invariants":
            D = _obj(objs, spec, "module")
            if not expect:
                h = D.rank
                expect = {"height": binomial(h, r) if r else h}
            fn = _module_invariants(D, r, expect)
            ref = "height, dimension and order of exterior powers"
        elif op == "display_invariants":
            d = _obj(objs, spec, "display")
            if not expect:
                expect = {"height": binomial(d.height, r), "tangent_rank": binomial(d.height - 1, r - 1)} \
                    if r else {"valid": True}
            fn = _display_invariants(d, r, expect)
            ref = "height and tangent rank of display exterior powers"
        elif op == "diagrams":
            D = _obj(objs, spec, "module")
            trials = _int_field(spec, "trials", 200)
            exhaustive = bool(spec.get("exhaustive", False))

            def fn(D=D, r=r, trials=trials, exhaustive=exhaustive):
                data = dd.exterior_power(D, r)
                rep = dd.verify_diagrams(D, data, trials=trials, seed=seed, exhaustive=exhaustive)
                rep["identities"] = dd.phi_upsilon_identities(data)
                return {"F_failures": 0, "V_failures": 0, "identities": True}, rep, \
                    rep["ok"] and rep["identities"]
            ref = "Phi Upsilon = p = Upsilon Phi and the F-/V-diagrams"
        elif op == "tower":
            D = _obj(objs, spec, "module")
            n, m = _int_field(spec, "n", 1), _int_field(spec, "m", 1)

            def fn(D=D, r=r, n=n, m=m):
                rep = dd.tower_report(D, r, n, m)
                return {"ok": True}, rep, rep["ok"]
            ref = "the tower map on exterior powers is a monomorphism"
        elif op == "universal_property":
            D = _obj(objs, spec, "module")
            targets = [_obj(objs, {"object": t}, "module") for t in spec.get("targets", [])]

            def fn(D=D, r=r or 2, targets=targets):
                rep = ml.universal_property_counts(D, r, targets)
                return {"ok": True}, rep, rep["ok"] and rep["lambda_in_L_alt"]
            ref = "|L_alt(D^r, N)| = |Hom(wedge^r D, N)|"
        elif op == "roundtrip":
            D = _obj(objs, spec)

            def fn(D=D):
                if isinstance(D, rq.RamifiedDieudonneModule):
                    rep = rq.equivalence_roundtrip(H=D)
                else:
                    rep = rq.equivalence_roundtrip(D=D)
                return {"ok": True}, rep, rep["ok"]
            ref = "H and D are inverse to each other"
        elif op == "validate":
            o = _obj(objs, spec)

            def fn(o=o):
                if isinstance(o, dp.Display):
                    rep = dp.validate(o)
                elif isinstance(o, rq.RamifiedDieudonneModule):
                    rep = rq.validate_ramified(o)
                else:
                    rep = dd.validate(o)
                return {"valid": True}, rep, rep["valid"]
            ref = "plumbing"
        else:
            raise SchemaError(f"unknown check op {op!r}")
        out.append((suite, Check(cid, ref, inputs, fn)))
    return out


def run_checks(selected, scenario, seed, budget_ms):
    objs = load_objects(scenario)
    checks = []
    for suite in selected:
        if scenario.get("defaults", True):
            checks.extend(default_checks(suite, seed))
    checks.extend(c for s, c in scenario_checks(scenario, objs, seed) if s in selected)
    ids = [c.check_id for c in checks]
    if len(set(ids)) != len(ids):
        raise SchemaError("duplicate check ids")
    start = time.monotonic()
    records, exceeded = [], False
    for c in sorted(checks, key=lambda c: c.check_id):
        if budget_ms is not None and (time.monotonic() - start) * 1000 > budget_ms:
            exceeded = True
            break
        records.append(c.run())
    if budget_ms is not None and (time.monotonic() - start) * 1000 > budget_ms:
        exceeded = True
    return records, exceeded, int((time.monotonic() - start) * 1000)


def make_report(name, selected, seed, records, exceeded):
    passed = sum(r["pass"] for r in records)
    return {"scenario": name, "suites": list(selected), "seed": seed, "records": records,
            "summary": {"total": len(records), "passed": passed, "failed": len(records) - passed,
                        "budget_exceeded": exceeded}}


def render_table(report):
    lines = [f"scenario: {report['scenario']}  seed: {report['seed']}"]
    w = max([len(r["check_id"]) for r in report["records"]] + [8])
    for r in report["records"]:
        lines.append(f"{'PASS' if r['pass'] else 'FAIL'}  {r['check_id']:<{w}}  {r['paper_ref']}")
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} passed"
                 + ("  (budget exceeded)" if s["budget_exceeded"] else ""))
    return "\n".join(lines) + "\n"


# -- entry points ----------------------------------------------------------------------------

def cmd_run(args):
    scenario = {}
    if args.scenario:
        try:
            with open(args.scenario) as fh:
                scenario = json.load(fh)
        except OSError as exc:
            print(f"error: cannot read scenario: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        except json.JSONDecodeError as exc:
            print(f"error: scenario is not valid JSON: {exc}", file=sys.stderr)
            return EXIT_SCHEMA
        if not isinstance(scenario, dict):
            print("error: a scenario must be a JSON object", file=sys.stderr)
            return EXIT_SCHEMA
    selected = args.suite if args.suite else scenario.get("suites", [] if args.scenario else list(SUITES))
    if not isinstance(selected, list) or any(s not in SUITES for s in selected):
        print(f"error: suites must be drawn from {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_SCHEMA
    selected = sorted(set(selected), key=SUITES.index)
    seed = args.seed if args.seed is not None else scenario.get("seed", 0)
    budget = args.budget_ms if args.budget_ms is not None else scenario.get("budget_ms")
    if not isinstance(seed, int) or (budget is not None and not isinstance(budget, int)):
        print("error: seed and budget_ms must be integers", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        records, exceeded, elapsed = run_checks(selected, scenario, seed, budget)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    report = make_report(scenario.get("name", "default"), selected, seed, records, exceeded)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.format == "table":
        sys.stdout.write(render_table(report))
        print(f"elapsed: {elapsed} ms", file=sys.stderr)
    elif not args.out:
        sys.stdout.write(text)
    for r in records:
        if not r["pass"]:
            print(f"FAIL {r['check_id']} [{r['paper_ref']}] inputs {r['inputs_digest']}",
                  file=sys.stderr)
    if exceeded:
        return EXIT_BUDGET
    return EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL


def cmd_fixtures(args):
    if args.action == "list":
        print(json.dumps({"modules": list(FIXTURES), "displays": list(dp.DISPLAY_FIXTURES)}, indent=2))
        return EXIT_OK
    if not args.name:
        print("error: dump needs a fixture name", file=sys.stderr)
        return EXIT_SCHEMA
    text = " ".join(args.name)
    try:
        obj = parse_fixture(text, display=args.display)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    payload = display_to_json(obj) if args.display else module_to_json(obj)
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="wittforge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run verification suites")
    run.add_argument("--scenario", help="scenario JSON file")
    run.add_argument("--suite", action="append", choices=SUITES,
                     help="suite to run (repeatable); overrides the scenario's list")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--budget-ms", type=int, default=None)
    run.add_argument("--format", choices=("json", "table"), default="json")
    run.add_argument("--out", help="write the JSON report here")
    run.set_defaults(func=cmd_run)
    fx = sub.add_parser("fixtures", help="list or dump named fixtures")
    fx.add_argument("action", choices=("list", "dump"))
    fx.add_argument("name", nargs="*", help="fixture name and key=value parameters")
    fx.add_argument("--display", action="store_true", help="dump a display fixture")
    fx.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args, extra = ap.parse_known_args(argv)
        # positionals given after --display land in extra
        if extra and (args.command != "fixtures" or any(x.startswith("-") for x in extra)):
            ap.error(f"unrecognized arguments: {' '.join(extra)}")
        if extra:
            args.name = list(args.name) + extra
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
