"""Ramified Witt vectors W_O for O = Z_q[y]/E(y).

Coefficients of the structure polynomials live in the order
Z[x, y]/(g(x), E(y)) where g lifts the defining polynomial of F_q.  When the
constant term of E is +-p the only denominators met while dividing by powers
of pi are powers of p, so the recursion runs exactly over the integers and
every division is checked to leave no remainder.
"""

import threading
from dataclasses import dataclass
from functools import cached_property, lru_cache

import flint

from .rings import (FiniteField, GaloisRing, Integers, PolyQuotientRing, RamifiedChainRing,
                    Ring, TruncPolyRing, irreducible_poly, is_prime)
from .witt import WittVector, _load_json, _store_json

_lock = threading.Lock()
_tables = {}


class BaseDVR:
    """O = Z_q[y]/E(y) with E Eisenstein of degree e; pi is the class of y."""

    def __init__(self, p, f, e, eisenstein):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        coeffs = [self._coeff(c, f) for c in eisenstein]
        if len(coeffs) != e + 1:
            raise ValueError(f"Eisenstein polynomial must have degree e={e}")
        if coeffs[-1] != (1,) + (0,) * (f - 1):
            raise ValueError("Eisenstein polynomial must be monic")
        c0 = coeffs[0]
        if any(c % p for c in c0) or all(c % (p * p) == 0 for c in c0):
            raise ValueError("constant term must have p-valuation exactly 1")
        if any(c % p for cs in coeffs[1:-1] for c in cs):
            raise ValueError("middle coefficients must be divisible by p")
        if c0[0] not in (p, -p) or any(c0[1:]):
            raise ValueError("only constant terms +-p are supported")
        self.p, self.f, self.e = p, f, e
        self.q = p ** f
        self.E = tuple(coeffs)
        self.g = irreducible_poly(p, f)
        self.zp_coefficients = all(not any(c[1:]) for c in coeffs)
        self.key = (p, f, e, self.E)
        self.name = f"O(p={p},f={f},e={e})"

    @staticmethod
    def _coeff(c, f):
        if isinstance(c, int):
            return (c,) + (0,) * (f - 1)
        c = list(c) + [0] * (f - len(c))
        return tuple(int(v) for v in c[:f])

    @classmethod
    def from_json(cls, d):
        return cls(d["p"], d.get("f", 1), d.get("e", 1), d["eisenstein"])

    def to_json(self):
        E = [c[0] if not any(c[1:]) else list(c) for c in self.E]
        return {"p": self.p, "e": self.e, "f": self.f, "eisenstein": E}

    def __eq__(self, other):
        return isinstance(other, BaseDVR) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.name

    @property
    def E_int(self):
        """E as integers (requires Z_p coefficients)."""
        if not self.zp_coefficients:
            raise ValueError("Eisenstein polynomial has coefficients outside Z_p")
        return tuple(c[0] for c in self.E)

    @cached_property
    def pi_int(self):
        # for e = 1, pi = -E_0
        return -self.E[0][0] if self.e == 1 else None

    def coeff_names(self):
        names = []
        if self.e > 1:
            names.append("y")
        if self.f > 1:
            names.append("x")
        return names


class _PolyAlg:
    """flint polynomials over Z[y, x]/(E, g) in extra variables."""

    def __init__(self, base, varnames):
        self.base = base
        self.cnames = base.coeff_names()
        self.ctx = flint.fmpz_mpoly_ctx.get(self.cnames + list(varnames), "lex")
        gens = self.ctx.gens()
        self.nc = len(self.cnames)
        self.vars = gens[self.nc:]
        b = base
        self.y = gens[0] if b.e > 1 else None
        self.x = gens[self.nc - 1] if b.f > 1 else None
        zero = self.ctx.from_dict({})
        self.gpoly = None
        if b.f > 1:
            self.gpoly = sum((c * self.x ** i for i, c in enumerate(b.g)), zero)
        self.Epoly = None
        if b.e > 1:
            self.Epoly = sum((self.zq(c) * self.y ** i for i, c in enumerate(b.E)), zero)
            # y^{-1} = Yinv / E_0 with Yinv = -(E_1 + E_2 y + ... + y^{e-1})
            self.Yinv = -sum((self.zq(c) * self.y ** (i - 1) for i, c in enumerate(b.E) if i), zero)
            self.E0 = b.E[0][0]
        self.pi = self.y if b.e > 1 else self.ctx.from_dict({}) + b.pi_int

    def zq(self, c):
        out = self.ctx.from_dict({})
        for i, v in enumerate(c):
            if v:
                out += v * (self.x ** i if i else 1)
        return out

    def reduce(self, f):
        if self.Epoly is not None:
            f = divmod(f, self.Epoly)[1]
        if self.gpoly is not None:
            f = divmod(f, self.gpoly)[1]
        return f

    def div_pi(self, f, n):
        """Exact division by pi^n; raises if not divisible."""
        if n == 0:
            return f
        if self.base.e == 1:
            d = self.base.pi_int ** n
        else:
            f = self.reduce(f * self.Yinv ** n)
            d = self.E0 ** n
        q, r = divmod(f, d)
        if not r.is_zero():
            raise ArithmeticError("inexact division by a power of pi")
        return q

    def ghost(self, xs, n, q, pi=None):
        pi = self.pi if pi is None else pi
        out = self.ctx.from_dict({})
        for i in range(n + 1):
            out += self.reduce(pi ** i) * xs[i] ** (q ** (n - i))
        return self.reduce(out)

    def solve(self, targets, m):
        q = self.base.q
        sols = []
        for n in range(m):
            rest = targets[n]
            for i in range(n):
                rest -= self.reduce(self.pi ** i * sols[i] ** (q ** (n - i)))
            rest = self.reduce(rest)
            sols.append(self.div_pi(rest, n))
        return sols

    def split(self, f):
        """Terms as (coefficient dict over (y, x) exponents, variable exponents)."""
        grouped = {}
        for k, c in f.to_dict().items():
            k = tuple(int(v) for v in k)
            grouped.setdefault(k[self.nc:], {})[self.ckey(k[:self.nc])] = int(c)
        return tuple(sorted(((tuple(sorted(cd.items())), e) for e, cd in grouped.items()),
                            key=lambda t: t[1], reverse=True))

    def ckey(self, k):
        # normalized (y_exp, x_exp)
        y = k[0] if self.base.e > 1 else 0
        x = k[-1] if self.base.f > 1 else 0
        return (y, x)

    def join(self, terms):
        out = {}
        for cd, e in terms:
            for (ye, xe), c in cd:
                key = []
                if self.base.e > 1:
                    key.append(ye)
                if self.base.f > 1:
                    key.append(xe)
                out[tuple(key) + tuple(e)] = c
        return self.ctx.from_dict(out) if out else self.ctx.from_dict({})


@dataclass(frozen=True)
class RamifiedWittTable:
    base: BaseDVR
    depth: int
    sum_polys: tuple
    prod_polys: tuple
    neg_polys: tuple
    frob_polys: tuple

    def to_json(self):
        def enc(polys):
            return [[[[[list(k), c] for k, c in cd], list(e)] for cd, e in poly] for poly in polys]
        return {"base": self.base.to_json(), "depth": self.depth, "sum": enc(self.sum_polys),
                "prod": enc(self.prod_polys), "neg": enc(self.neg_polys),
                "frob": enc(self.frob_polys)}

    @classmethod
    def from_json(cls, base, d):
        dec = lambda polys: tuple(tuple((tuple((tuple(k), c) for k, c in cd), tuple(e))
                                        for cd, e in poly) for poly in polys)
        return cls(base, d["depth"], dec(d["sum"]), dec(d["prod"]), dec(d["neg"]),
                   dec(d["frob"]))


def _ab_names(m):
    return [f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)]


def _build(base, m):
    A = _PolyAlg(base, _ab_names(m))
    a, b = A.vars[:m], A.vars[m:]
    q = base.q
    wa = [A.ghost(a, n, q) for n in range(m)]
    wb = [A.ghost(b, n, q) for n in range(m)]
    S = A.solve([x + y for x, y in zip(wa, wb)], m)
    P = A.solve([A.reduce(x * y) for x, y in zip(wa, wb)], m)
    N = A.solve([-x for x in wa], m)
    Fr = A.solve([A.ghost(a, n + 1, q) for n in range(m - 1)], m - 1)
    cut = lambda polys: tuple(tuple((cd, e[:m]) for cd, e in A.split(f)) for f in polys)
    return RamifiedWittTable(base, m, tuple(A.split(f) for f in S), tuple(A.split(f) for f in P),
                             cut(N), cut(Fr))


def build_ramified_table(base, m):
    if m < 1:
        raise ValueError("depth must be at least 1")
    key = (base.key, m)
    t = _tables.get(key)
    if t is not None:
        return t
    name = "ramwitt_" + "_".join(str(v) for v in (base.p, base.f, base.e)) + \
        "_" + "_".join(str(c) for cs in base.E for c in cs) + f"_m{m}.json"
    d = _load_json(name)
    t = RamifiedWittTable.from_json(base, d) if d else _build(base, m)
    if d is None:
        _store_json(name, t.to_json())
    with _lock:
        return _tables.setdefault(key, t)


def verify_ramified_table(t):
    """Symbolic re-check of the ramified ghost identities; returns failures."""
    base, m = t.base, t.depth
    A = _PolyAlg(base, _ab_names(m))
    a, b = A.vars[:m], A.vars[m:]
    q = base.q
    pad = lambda poly: [(cd, e + (0,) * m) for cd, e in poly]
    S = [A.join(x) for x in t.sum_polys]
    P = [A.join(x) for x in t.prod_polys]
    N = [A.join(pad(x)) for x in t.neg_polys]
    Fr = [A.join(pad(x)) for x in t.frob_polys]
    bad = []
    for n in range(m):
        wa, wb = A.ghost(a, n, q), A.ghost(b, n, q)
        if A.ghost(S, n, q) != A.reduce(wa + wb):
            bad.append(("sum", n))
        if A.ghost(P, n, q) != A.reduce(wa * wb):
            bad.append(("prod", n))
        if A.ghost(N, n, q) != -wa:
            bad.append(("neg", n))
        if n < m - 1 and A.ghost(Fr, n, q) != A.ghost(a, n + 1, q):
            bad.append(("frob", n))
    return bad


def frobenius_collapses(t):
    """True iff the F_pi polynomials reduce mod pi to x_n -> x_n^q."""
    base, m = t.base, t.depth
    q = base.q
    for n, poly in enumerate(t.frob_polys):
        expect = tuple(q if i == n else 0 for i in range(m))
        for cd, e in poly:
            unit = sum(c for (ye, xe), c in cd if ye == 0 and xe == 0)
            residue = [(k, c) for k, c in cd if k[0] == 0 and c % base.p]
            if e == expect:
                if unit % base.p != 1 or len(residue) != 1:
                    return False
            elif residue:
                return False
    return True


@lru_cache(maxsize=None)
def build_mu_polys(base, m):
    """Polynomials mu_0..mu_{m-1} in classical coordinates x_0..x_{fm-1}."""
    f, p = base.f, base.p
    L = f * (m - 1) + 1
    A = _PolyAlg(base, [f"x{i}" for i in range(L)])
    xs = A.vars
    targets = []
    for n in range(m):
        w = A.ctx.from_dict({})
        for i in range(f * n + 1):
            w += p ** i * xs[i] ** (p ** (f * n - i))
        targets.append(w)
    return tuple(A.split(s) for s in A.solve(targets, m)), L


@lru_cache(maxsize=None)
def iota_coords(base, c, m):
    """Coordinates of the O-element c (a Z_q coefficient tuple polynomial in y,
    given as ((y_exp, x_exp), coeff) pairs) in W_{O,m}(O): constant ghost c."""
    A = _PolyAlg(base, [])
    cpoly = _from_cdict(A, c)
    sols = A.solve([cpoly] * m, m)
    return tuple(tuple(sorted(A.split(s)[0][0])) if not s.is_zero() else () for s in sols)


def _from_cdict(A, cd):
    out = A.ctx.from_dict({})
    for (ye, xe), c in cd:
        t = A.ctx.from_dict({}) + c
        if ye:
            t *= A.y ** ye
        if xe:
            t *= A.x ** xe
        out += t
    return A.reduce(out)


# -- O-algebras ------------------------------------------------------------

def oracle_ring(base):
    """The exact torsion-free order Z[x, y]/(g, E) as a Ring."""
    R = Integers()
    R.key = ("oracle", base.key)
    if base.f > 1:
        R = PolyQuotientRing(R, base.g, "x")
        R.torsion_free = True
    if base.e > 1:
        E = [R.embed(c[0]) if base.f > 1 else c[0] for c in base.E] if base.zp_coefficients \
            else [tuple(c) for c in base.E]
        R = PolyQuotientRing(R, E, "y")
        R.torsion_free = True
    R.p = base.p
    R.dvr = base
    return R


def _field_root(F, g):
    """A root in the finite field F of the integer polynomial g (reduced)."""
    if getattr(F, "modulus", None) == tuple(c % F.p for c in g):
        return F.gen
    for a in F.elements():
        v = F.zero
        for c in reversed(g):
            v = F.add(F.mul(v, a), F.from_int(c))
        if v == F.zero:
            return a
    raise ValueError(f"{F.name} does not contain the residue field of O")


def _hensel_root(R, g, r):
    for _ in range(R.n.bit_length() + 2 if hasattr(R, "n") else 8):
        v, d = R.zero, R.zero
        for c in reversed(g):
            d = R.add(R.mul(d, r), v)
            v = R.add(R.mul(v, r), R.from_int(c))
        if R.is_zero(v):
            break
        r = R.sub(r, R.mul(v, R.unit_inverse(d)))
    return r


def structure_images(base, R):
    """Images (x, pi) of the generators of O in the O-algebra R."""
    if getattr(R, "dvr", None) == base:
        X = R.gens.get("x") if base.f > 1 else None
        if base.e > 1:
            PI = R.gens["y"]
        else:
            PI = R.from_int(base.pi_int)
        return X, PI
    if isinstance(R, TruncPolyRing) and getattr(R.field, "dvr", None) == base:
        X0, PI0 = structure_images(base, R.field)
        return (R.embed(X0) if X0 is not None else None), R.embed(PI0)
    if isinstance(R, FiniteField):
        X = _field_root(R, base.g) if base.f > 1 else None
        return X, R.zero
    if isinstance(R, TruncPolyRing) and isinstance(R.field, FiniteField):
        X = R.embed(_field_root(R.field, base.g)) if base.f > 1 else None
        return X, R.zero
    if isinstance(R, GaloisRing):
        if base.e != 1:
            raise ValueError("a Galois ring is an O-algebra only for unramified O")
        X = None
        if base.f > 1:
            X = _hensel_root(R, base.g, R.lift(_field_root(R.field, base.g)))
        return X, R.from_int(base.pi_int)
    if isinstance(R, RamifiedChainRing):
        if tuple(R.E) != base.E_int:
            raise ValueError("chain ring built from a different Eisenstein polynomial")
        X = None
        if base.f > 1:
            X = _hensel_root(R, base.g, R.lift(_field_root(R.field, base.g)))
        return X, R.uniformizer
    raise ValueError(f"{R!r} is not a supported O-algebra")


class Coercion:
    """Maps coefficient dicts {(y_exp, x_exp): int} into an O-algebra."""

    def __init__(self, base, R):
        self.R = R
        self.X, self.PI = structure_images(base, R)
        self._pows = {}

    def _pw(self, which, k):
        key = (which, k)
        v = self._pows.get(key)
        if v is None:
            v = self.R.pow(self.PI if which == "y" else self.X, k)
            self._pows[key] = v
        return v

    def __call__(self, cd):
        R = self.R
        acc = R.zero
        for (ye, xe), c in cd:
            t = R.from_int(c)
            if ye:
                t = R.mul(t, self._pw("y", ye))
            if xe:
                t = R.mul(t, self._pw("x", xe))
            acc = R.add(acc, t)
        return acc


class RamifiedWittRing(Ring):
    """W_{O,m}(R) for an O-algebra R; elements are tuples of m elements of R."""

    def __init__(self, base, R, m):
        from .witt import CompiledPoly
        self.dvr, self.base, self.m = base, R, m
        self.p = base.p
        self.table = build_ramified_table(base, m)
        self.coerce = Coercion(base, R)
        self.key = (base.key, R.key, m)
        self.name = f"W_O,{m}({R.name})"
        self.zero = (R.zero,) * m
        self.one = (R.one,) + (R.zero,) * (m - 1)
        mk = lambda polys: [CompiledPoly(t, R, self.coerce) for t in polys]
        self._S, self._P = mk(self.table.sum_polys), mk(self.table.prod_polys)
        self._N, self._F = mk(self.table.neg_polys), mk(self.table.frob_polys)
        self.pi_zero = R.is_zero(self.coerce.PI)

    def _eval(self, polys, vals):
        cache = {}
        return tuple(P(vals, cache) for P in polys)

    def add(self, a, b):
        return self._eval(self._S, tuple(a) + tuple(b))

    def mul(self, a, b):
        return self._eval(self._P, tuple(a) + tuple(b))

    def neg(self, a):
        return self._eval(self._N, tuple(a))

    def from_O(self, cd):
        return tuple(self.coerce(c) for c in iota_coords(self.dvr, cd, self.m))

    def from_int(self, k):
        return self.from_O(((((0, 0), k),)) if k else ())

    @cached_property
    def pi_one(self):
        cd = ((1, 0), 1) if self.dvr.e > 1 else ((0, 0), self.dvr.pi_int)
        return self.from_O((cd,))

    def teichmuller(self, a):
        return (a,) + (self.base.zero,) * (self.m - 1)

    def frob_universal(self, a):
        return self._eval(self._F, tuple(a))

    def sigma(self, a, t=1):
        if not self.pi_zero:
            raise ValueError("length preserving F_pi needs pi = 0 in the base ring")
        R = self.base
        return tuple(R.pow(x, self.dvr.q ** t) for x in a)

    def ver(self, a):
        return (self.base.zero,) + tuple(a[:-1])

    def elements(self):
        import itertools
        for cs in itertools.product(self.base.element_list, repeat=self.m):
            yield tuple(cs)

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.m))

    def fmt(self, a):
        return "(" + ", ".join(self.base.fmt(x) for x in a) + ")"


@lru_cache(maxsize=None)
def ramified_ring(base, R, m):
    return RamifiedWittRing(base, R, m)


def ramified_vector(base, R, coords):
    return WittVector(ramified_ring(base, R, len(coords)), tuple(coords))


def ramified_ops(x, y, op):
    from .witt import witt_ring_ops
    return witt_ring_ops(x, y, op)


def ramified_frobenius(x):
    W = x.ring
    if W.pi_zero:
        return WittVector(W, W.sigma(x.coords))
    if W.m == 1:
        raise ValueError("F_pi of a length one vector loses all precision")
    return WittVector(ramified_ring(W.dvr, W.base, W.m - 1), W.frob_universal(x.coords))


def ramified_verschiebung(x):
    return WittVector(x.ring, x.ring.ver(x.coords))


def ramified_teichmuller(base, R, a, m):
    W = ramified_ring(base, R, m)
    return WittVector(W, W.teichmuller(a))


def ramified_ghost(x):
    """Ghost components sum_i pi^i x_i^{q^{n-i}} over a torsion-free oracle O-algebra."""
    W = x.ring
    R = W.base
    if not getattr(R, "torsion_free", False):
        raise ValueError("ghost components are only faithful over torsion-free rings")
    PI, q = W.coerce.PI, W.dvr.q
    out = []
    for n in range(W.m):
        acc = R.zero
        for i in range(n + 1):
            acc = R.add(acc, R.mul(R.pow(PI, i), R.pow(x.coords[i], q ** (n - i))))
        out.append(acc)
    return tuple(out)


def classical_ghost(R, p, coords):
    out = []
    for n in range(len(coords)):
        acc = R.zero
        for i in range(n + 1):
            acc = R.add(acc, R.mul(R.from_int(p ** i), R.pow(coords[i], p ** (n - i))))
        out.append(acc)
    return tuple(out)


def mu_transform(x, base, m):
    """mu: W(R) -> W_O(R) truncated, from a classical vector of length >= f(m-1)+1."""
    from .witt import CompiledPoly
    polys, L = build_mu_polys(base, m)
    if len(x.coords) < L:
        raise ValueError(f"need at least {L} classical coordinates")
    R = x.ring.base
    co = Coercion(base, R)
    cache = {}
    coords = tuple(CompiledPoly(t, R, co)(x.coords[:L], cache) for t in polys)
    return WittVector(ramified_ring(base, R, m), coords)


def make_WO_of_k(base, k, n):
    """The chain ring W_O(k)/pi^n; sigma on it is the p-power Frobenius of W(k)."""
    if k.p != base.p or k.s % base.f:
        raise ValueError(f"{k.name} does not contain F_{base.q}")
    if n == 1:
        return k
    if base.e == 1:
        return GaloisRing(base.p, k.s, n)
    return RamifiedChainRing(base.p, k.s, base.E_int, n)
