"""JSON descriptors for coefficient rings, Dieudonne modules and displays.

Matrix entries are strings holding polynomial expressions in the ring's named
generators (x for W(F_q), y for the uniformizer of O, t in equal
characteristic, z for F_q, e for the dual numbers); ``^`` and ``**`` both
denote powers.
"""

import ast

from .dieudonne import DieudonneModule
from .display import Display, is_perfect_model
from .ramequiv import RamifiedDieudonneModule
from .rings import FiniteField, GaloisRing, RamifiedChainRing, TruncPolyRing
from .witt import WittRing


class SchemaError(ValueError):
    """A descriptor does not have the expected shape."""


def _need(d, key, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"missing field {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return v


def _int(d, key, default=None):
    if default is not None and key not in d:
        return default
    v = _need(d, key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"field {key!r} must be an integer")
    return v


# -- entry strings ----------------------------------------------------------------------

def parse_entry(R, text):
    """Evaluate an integer polynomial expression in the generators of R."""
    if isinstance(text, int) and not isinstance(text, bool):
        return R.from_int(text)
    if not isinstance(text, str):
        raise SchemaError(f"matrix entry {text!r} is not a string")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SchemaError(f"cannot parse entry {text!r}") from exc
    gens = getattr(R, "gens", {})

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return R.from_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in gens:
                raise SchemaError(f"unknown generator {node.id!r} in {text!r}")
            return gens[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return R.neg(v) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise SchemaError(f"exponents must be non-negative integers in {text!r}")
                return R.pow(ev(node.left), node.right.value)
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return R.add(a, b)
            if isinstance(node.op, ast.Sub):
                return R.sub(a, b)
            if isinstance(node.op, ast.Mult):
                return R.mul(a, b)
        raise SchemaError(f"unsupported syntax in entry {text!r}")

    return ev(tree)


def format_entry(R, a):
    return R.fmt(a)


def _matrix(R, rows, h=None):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError("a matrix must be a list of rows")
    A = tuple(tuple(parse_entry(R, x) for x in row) for row in rows)
    if h is not None and (len(A) != h or any(len(r) != h for r in A)):
        raise SchemaError(f"matrix is not {h} x {h}")
    return A


def _dump_matrix(R, A):
    return [[format_entry(R, x) for x in row] for row in A]


# -- coefficient rings ---------------------------------------------------------------------

def ring_from_json(d, level):
    kind = d.get("kind", "witt") if isinstance(d, dict) else None
    p = _int(d, "p")
    s = _int(d, "residue_degree", 1)
    if level < 1 or s < 1:
        raise SchemaError("level and residue degree must be positive")
    try:
        if kind == "witt":
            return GaloisRing(p, s, level)
        if kind == "ramified":
            E = _need(d, "eisenstein", list)
            if not all(isinstance(c, int) for c in E):
                raise SchemaError("only Eisenstein polynomials over Z_p are accepted here")
            return RamifiedChainRing(p, s, tuple(E), level)
        if kind == "equal-char":
            return TruncPolyRing(FiniteField(p, s), level, "t")
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from exc
    raise SchemaError(f"unknown ring kind {kind!r}")


def ring_to_json(R):
    if isinstance(R, GaloisRing):
        return {"kind": "witt", "p": R.p, "residue_degree": R.s}
    if isinstance(R, RamifiedChainRing):
        return {"kind": "ramified", "p": R.p, "residue_degree": R.s, "e": R.e, "f": 1,
                "eisenstein": list(R.E)}
    if isinstance(R, TruncPolyRing):
        return {"kind": "equal-char", "p": R.field.p, "residue_degree": R.field.s}
    raise TypeError(f"no descriptor for {R!r}")


# -- modules ----------------------------------------------------------------------------

def module_from_json(d):
    """A DieudonneModule, or a RamifiedDieudonneModule when "pi" is given or the twists are +-f."""
    if not isinstance(d, dict):
        raise SchemaError("a module descriptor must be an object")
    level = _int(d, "level")
    R = ring_from_json(_need(d, "coeff", dict), level)
    h = _int(d, "rank")
    name = d.get("name", "")
    if "components" in d:
        f = _int(d, "f")
        comps = _need(d, "components", list)
        if len(comps) != f:
            raise SchemaError("need one component per index 0..f-1")
        F = tuple(_matrix(R, _need(c, "F", list), h) for c in comps)
        V = tuple(_matrix(R, _need(c, "V", list), h) for c in comps)
        return DieudonneModule(R, F, V, None, name)
    tF, tV = _int(d, "twistF", 1), _int(d, "twistV", -1)
    F = _matrix(R, _need(d, "F", list), h)
    V = _matrix(R, _need(d, "V", list), h)
    if tF == 1 and tV == -1 and "pi" not in d:
        return DieudonneModule(R, (F,), (V,), None, name)
    if tF != -tV or tF < 1:
        raise SchemaError("twists must be (+1, -1), or (+f, -f) for a module over W_O(k)")
    pi = parse_entry(R, d.get("pi", "y" if isinstance(R, RamifiedChainRing) and R.e > 1 else str(R.p)))
    return RamifiedDieudonneModule(R, (F,), (V,), tF, pi, name)


def module_to_json(D):
    R = D.ring
    out = {"coeff": ring_to_json(R), "rank": D.rank, "level": R.n}
    if D.name:
        out["name"] = D.name
    if isinstance(D, RamifiedDieudonneModule):
        out.update({"F": _dump_matrix(R, D.F[0]), "twistF": D.f, "V": _dump_matrix(R, D.V[0]),
                    "twistV": -D.f, "pi": format_entry(R, D.pi)})
    elif D.f == 1:
        out.update({"F": _dump_matrix(R, D.F[0]), "twistF": 1, "V": _dump_matrix(R, D.V[0]),
                    "twistV": -1})
    else:
        out.update({"f": D.f, "twistF": 1, "twistV": -1,
                    "components": [{"F": _dump_matrix(R, F), "V": _dump_matrix(R, V)}
                                   for F, V in zip(D.F, D.V)]})
    return out


# -- displays ----------------------------------------------------------------------------

def display_from_json(d):
    if not isinstance(d, dict):
        raise SchemaError("a display descriptor must be an object")
    base = _need(d, "base", dict)
    m = _int(d, "depth")
    rL, rT = _int(d, "rankL"), _int(d, "rankT")
    p, s = _int(base, "p"), _int(base, "residue_degree", 1)
    kind = base.get("kind", "field")
    if kind == "field":
        W = GaloisRing(p, s, m)
        k = W.field
        entry = lambda coords: W.from_witt(tuple(parse_entry(k, c) for c in coords))
    elif kind == "dual-numbers":
        A = TruncPolyRing(FiniteField(p, s), 2, "e")
        W = WittRing(A, m, p)
        entry = lambda coords: tuple(parse_entry(A, c) for c in coords)
    else:
        raise SchemaError(f"unknown display base {kind!r}")
    rows = _need(d, "structural", list)
    h = rL + rT
    if len(rows) != h or any(not isinstance(r, list) or len(r) != h for r in rows):
        raise SchemaError(f"structural matrix is not {h} x {h}")
    for r in rows:
        for c in r:
            if not isinstance(c, list) or len(c) != m:
                raise SchemaError(f"Witt entries need {m} coordinates")
    S = tuple(tuple(entry(c) for c in row) for row in rows)
    return Display(W, rL, rT, S, d.get("name", ""))


def display_to_json(disp):
    W = disp.W
    if is_perfect_model(W):
        k = W.field
        base = {"kind": "field", "p": W.p, "residue_degree": W.s}
        coords = lambda a: [format_entry(k, c) for c in W.to_witt(a)]
        m = W.n
    else:
        A = W.base
        base = {"kind": "dual-numbers", "p": W.p, "residue_degree": A.field.s}
        coords = lambda a: [format_entry(A, c) for c in a]
        m = W.m
    out = {"base": base, "depth": m, "rankL": disp.rank_L, "rankT": disp.rank_T,
           "structural": [[coords(x) for x in row] for row in disp.S]}
    if disp.name:
        out["name"] = disp.name
    return out
