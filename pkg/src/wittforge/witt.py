"""p-typical Witt vectors.

Structure polynomials come from the ghost recursion over the integers,
computed with sparse multivariate polynomials from python-flint.  Tables are
memoized in process and optionally on disk under ``WITTFORGE_CACHE_DIR``.
"""

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint

from .rings import Integers, Ring, is_prime

_lock = threading.Lock()
_tables = {}


def cache_dir():
    d = os.environ.get("WITTFORGE_CACHE_DIR")
    return d or None


def _load_json(name):
    d = cache_dir()
    if not d:
        return None
    path = os.path.join(d, name)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        return json.load(fh)


def _store_json(name, payload):
    d = cache_dir()
    if not d:
        return
    os.makedirs(d, exist_ok=True)
    # write then rename so that concurrent builders never see a torn file
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, os.path.join(d, name))


def _ctx(names):
    return flint.fmpz_mpoly_ctx.get(names, "lex")


def _terms(poly):
    return sorted(((int(c), tuple(int(e) for e in k)) for k, c in poly.to_dict().items()),
                  key=lambda t: t[1], reverse=True)


def ghost_poly(xs, n, p):
    """w_n(x) = sum_{i<=n} p^i x_i^{p^(n-i)} for a sequence of flint polynomials."""
    out = p ** n * xs[n]
    for i in range(n):
        out += p ** i * xs[i] ** (p ** (n - i))
    return out


def _solve_ghost(targets, p, ctx, m):
    """Solve w_n(S) = targets[n] for n < m by exact division."""
    sols = []
    for n in range(m):
        rest = targets[n]
        for i in range(n):
            rest -= p ** i * sols[i] ** (p ** (n - i))
        q, r = divmod(rest, p ** n)
        if not r.is_zero():
            raise ArithmeticError(f"ghost recursion not integral at level {n}")
        sols.append(q)
    return sols


@dataclass(frozen=True)
class WittTable:
    """Structure polynomials S, P, N and the Frobenius polynomials for W_m.

    Each polynomial is a list of ``(coefficient, exponents)`` terms.  S and P
    use variables a_0..a_{m-1}, b_0..b_{m-1}; N and Frob use a_0..a_{m-1}.
    """

    p: int
    depth: int
    sum_polys: tuple
    prod_polys: tuple
    neg_polys: tuple
    frob_polys: tuple

    def to_json(self):
        enc = lambda polys: [[[c, list(e)] for c, e in poly] for poly in polys]
        return {"p": self.p, "depth": self.depth, "sum": enc(self.sum_polys),
                "prod": enc(self.prod_polys), "neg": enc(self.neg_polys),
                "frob": enc(self.frob_polys)}

    @classmethod
    def from_json(cls, d):
        dec = lambda polys: tuple(tuple((c, tuple(e)) for c, e in poly) for poly in polys)
        return cls(d["p"], d["depth"], dec(d["sum"]), dec(d["prod"]),
                   dec(d["neg"]), dec(d["frob"]))


def _build(p, m):
    names = [f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)]
    ctx = _ctx(names)
    g = ctx.gens()
    a, b = g[:m], g[m:]
    wa = [ghost_poly(a, n, p) for n in range(m)]
    wb = [ghost_poly(b, n, p) for n in range(m)]
    S = _solve_ghost([x + y for x, y in zip(wa, wb)], p, ctx, m)
    P = _solve_ghost([x * y for x, y in zip(wa, wb)], p, ctx, m)
    N = _solve_ghost([-x for x in wa], p, ctx, m)
    Fr = _solve_ghost([ghost_poly(a, n + 1, p) for n in range(m - 1)], p, ctx, m - 1)
    cut = lambda polys: tuple(tuple((c, e[:m]) for c, e in _terms(q)) for q in polys)
    return WittTable(p, m, tuple(tuple(_terms(q)) for q in S), tuple(tuple(_terms(q)) for q in P),
                     cut(N), cut(Fr))


def build_witt_table(p, m):
    """Structure table of W_m for the prime p (memoized, optionally cached on disk)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("depth must be at least 1")
    key = (p, m)
    t = _tables.get(key)
    if t is not None:
        return t
    name = f"witt_p{p}_m{m}.json"
    d = _load_json(name)
    t = WittTable.from_json(d) if d else _build(p, m)
    if d is None:
        _store_json(name, t.to_json())
    with _lock:
        return _tables.setdefault(key, t)


def _to_flint(terms, ctx):
    return ctx.from_dict({e: c for c, e in terms}) if terms else ctx.from_dict({})


def verify_table(t):
    """Re-check every ghost identity of ``t`` symbolically; returns a list of failures."""
    p, m = t.p, t.depth
    ctx = _ctx([f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)])
    g = ctx.gens()
    a, b = g[:m], g[m:]
    S = [_to_flint(q, ctx) for q in t.sum_polys]
    P = [_to_flint(q, ctx) for q in t.prod_polys]
    pad = lambda q: [(c, e + (0,) * m) for c, e in q]
    N = [_to_flint(pad(q), ctx) for q in t.neg_polys]
    Fr = [_to_flint(pad(q), ctx) for q in t.frob_polys]
    bad = []
    for n in range(m):
        wa, wb = ghost_poly(a, n, p), ghost_poly(b, n, p)
        if ghost_poly(S, n, p) != wa + wb:
            bad.append(("sum", n))
        if ghost_poly(P, n, p) != wa * wb:
            bad.append(("prod", n))
        if ghost_poly(N, n, p) != -wa:
            bad.append(("neg", n))
        if n < m - 1 and ghost_poly(Fr, n, p) != ghost_poly(a, n + 1, p):
            bad.append(("frob", n))
    return bad


class CompiledPoly:
    """A table polynomial with coefficients pushed into a target ring."""

    def __init__(self, terms, R, coerce=None):
        coerce = coerce or R.from_int
        self.R = R
        self.terms = []
        for c, e in terms:
            cr = coerce(c)
            if not R.is_zero(cr):
                self.terms.append((cr, e))

    def __call__(self, values, powcache):
        R = self.R
        acc = R.zero
        for c, e in self.terms:
            t = c
            for i, k in enumerate(e):
                if k:
                    t = R.mul(t, _power(R, values, powcache, i, k))
            acc = R.add(acc, t)
        return acc


def _power(R, values, cache, i, k):
    key = (i, k)
    v = cache.get(key)
    if v is None:
        v = R.pow(values[i], k)
        cache[key] = v
    return v


def _integer_witt(k, p, m):
    """Witt coordinates of the integer k in W_m(Z)."""
    xs = []
    for n in range(m):
        rest = k
        for i in range(n):
            rest -= p ** i * xs[i] ** (p ** (n - i))
        q, r = divmod(rest, p ** n)
        assert r == 0
        xs.append(q)
    return xs


class WittRing(Ring):
    """W_m(R) for a finite commutative ring R (or the integers, as an oracle).

    Elements are tuples of m elements of R.  ``sigma`` is the Witt vector
    Frobenius, available on all of W_m only when p = 0 in R.
    """

    def __init__(self, R, m, p=None):
        p = p or R.p
        if p is None:
            raise ValueError("a prime is required for Witt vectors over this ring")
        self.base, self.m, self.p = R, m, p
        self.table = build_witt_table(p, m)
        self.key = (R.key, m, p)
        self.name = f"W_{m}({R.name})"
        self.zero = (R.zero,) * m
        self.one = (R.one,) + (R.zero,) * (m - 1)
        self._S = [CompiledPoly(t, R) for t in self.table.sum_polys]
        self._P = [CompiledPoly(t, R) for t in self.table.prod_polys]
        self._N = [CompiledPoly(t, R) for t in self.table.neg_polys]
        self._F = [CompiledPoly(t, R) for t in self.table.frob_polys]
        self.char_p = not isinstance(R, Integers) and R.is_zero(R.from_int(p))
        self.gens = {k: self.teichmuller(v) for k, v in getattr(R, "gens", {}).items()}

    def _eval2(self, polys, a, b):
        vals = tuple(a) + tuple(b)
        cache = {}
        return tuple(P(vals, cache) for P in polys)

    def add(self, a, b):
        return self._eval2(self._S, a, b)

    def mul(self, a, b):
        return self._eval2(self._P, a, b)

    def neg(self, a):
        cache = {}
        return tuple(N(a, cache) for N in self._N)

    def from_int(self, k):
        R = self.base
        return tuple(R.from_int(x) for x in _integer_witt(k, self.p, self.m))

    def teichmuller(self, a):
        return (a,) + (self.base.zero,) * (self.m - 1)

    def is_unit(self, a):
        return self.base.is_unit(a[0])

    def unit_inverse(self, a):
        R = self.base
        r = self.teichmuller(R.unit_inverse(a[0]))
        two = self.from_int(2)
        for _ in range(self.m.bit_length() + 1):
            r = self.mul(r, self.sub(two, self.mul(a, r)))
        assert self.mul(a, r) == self.one
        return r

    inverse = unit_inverse

    def frob_universal(self, a):
        """Frobenius W_m -> W_{m-1} through the universal polynomials."""
        cache = {}
        return tuple(F(a, cache) for F in self._F)

    def sigma(self, a, t=1):
        if not self.char_p:
            raise ValueError("length preserving Frobenius needs p = 0 in the base ring")
        R = self.base
        if t >= 0:
            return tuple(R.pow(x, self.p ** t) for x in a)
        return tuple(R.sigma(x, t) for x in a)

    def ver(self, a):
        return (self.base.zero,) + tuple(a[:-1])

    def in_ideal_I(self, a):
        return self.base.is_zero(a[0])

    def v_inverse(self, a):
        """Some u with V(u) = a, a in V W; determined up to the last coordinate."""
        if not self.base.is_zero(a[0]):
            raise ValueError("not in the image of V")
        return tuple(a[1:]) + (self.base.zero,)

    def truncate(self, a, k):
        return tuple(a[:k])

    def residue(self, a):
        return a[0]

    def elements(self):
        import itertools
        for cs in itertools.product(self.base.element_list, repeat=self.m):
            yield tuple(cs)

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.m))

    def fmt(self, a):
        return "(" + ", ".join(self.base.fmt(x) for x in a) + ")"


@lru_cache(maxsize=None)
def witt_ring(R, m, p=None):
    return WittRing(R, m, p)


@dataclass(frozen=True)
class WittVector:
    """An element of W_m(R) carrying its ring."""

    ring: WittRing
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.ring.m:
            raise ValueError("coordinate count does not match the length")

    @property
    def length(self):
        return self.ring.m

    def _check(self, other):
        if not isinstance(other, WittVector) or other.ring != self.ring:
            raise ValueError("Witt vectors over different rings or lengths")

    def __add__(self, other):
        self._check(other)
        return WittVector(self.ring, self.ring.add(self.coords, other.coords))

    def __mul__(self, other):
        self._check(other)
        return WittVector(self.ring, self.ring.mul(self.coords, other.coords))

    def __neg__(self):
        return WittVector(self.ring, self.ring.neg(self.coords))

    def __sub__(self, other):
        return self + (-other)


def vector(R, coords, p=None):
    return WittVector(witt_ring(R, len(coords), p), tuple(coords))


def witt_ring_ops(x, y, op):
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown operation {op}")


def ghost(x):
    """Ghost components of a Witt vector over a torsion-free oracle ring."""
    W = x.ring
    R = W.base
    if not getattr(R, "torsion_free", isinstance(R, Integers)):
        raise ValueError("ghost components are only faithful over torsion-free rings")
    p = W.p
    out = []
    for n in range(W.m):
        acc = R.zero
        for i in range(n + 1):
            acc = R.add(acc, R.mul(R.from_int(p ** i), R.pow(x.coords[i], p ** (n - i))))
        out.append(acc)
    return tuple(out)


def frobenius(x):
    W = x.ring
    if W.m == 0:
        raise ValueError("empty Witt vector")
    if W.char_p:
        return WittVector(W, W.sigma(x.coords))
    if W.m == 1:
        raise ValueError("Frobenius of a length one vector loses all precision")
    return WittVector(witt_ring(W.base, W.m - 1, W.p), W.frob_universal(x.coords))


def verschiebung(x):
    return WittVector(x.ring, x.ring.ver(x.coords))


def teichmuller(a, R, m, p=None):
    W = witt_ring(R, m, p)
    return WittVector(W, W.teichmuller(a))


@lru_cache(maxsize=None)
def artin_hasse_series(p, N):
    """Coefficients of exp(sum_i t^{p^i}/p^i) mod t^N as Fractions."""
    if N < 1:
        raise ValueError("truncation order must be positive")
    # f = exp(g) solves f' = g' f
    g1 = [Fraction(0)] * N
    i = 0
    while p ** i < N:
        g1[p ** i - 1] += 1     # derivative of t^{p^i}/p^i is t^{p^i - 1}
        i += 1
    f = [Fraction(1)] + [Fraction(0)] * (N - 1)
    for k in range(1, N):
        f[k] = sum(g1[j] * f[k - 1 - j] for j in range(k)) / k
    for c in f:
        if c.denominator % p == 0:
            raise ArithmeticError(f"Artin-Hasse coefficient {c} is not p-integral")
    return tuple(f)


def _series_mul(R, a, b, N):
    out = [R.zero] * N
    for i, x in enumerate(a):
        if R.is_zero(x):
            continue
        for j in range(N - i):
            if not R.is_zero(b[j]):
                out[i + j] = R.add(out[i + j], R.mul(x, b[j]))
    return out


def artin_hasse_eval(x, N):
    """E(x, t) = prod_n AH(x_n t^{p^n}) mod t^N, a list of N coefficients."""
    W = x.ring
    R, p = W.base, W.p
    coeffs = [R.from_fraction(c.numerator, c.denominator) for c in artin_hasse_series(p, N)]
    out = [R.one] + [R.zero] * (N - 1)
    for n, xn in enumerate(x.coords):
        step = p ** n
        if step >= N:
            break
        fac = [R.zero] * N
        for k in range(0, (N - 1) // step + 1):
            fac[k * step] = R.mul(coeffs[k], R.pow(xn, k))
        out = _series_mul(R, out, fac, N)
    return out
