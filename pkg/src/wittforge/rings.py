"""Finite coefficient rings.

Every ring is a small object that owns its element encoding; elements are
immutable tuples (or ints for ``Integers``) and all arithmetic goes through
the ring.  Chain rings additionally expose a valuation, a uniformizer, exact
division and a distinguished automorphism ``sigma``.
"""

import itertools
import math
from functools import cached_property, lru_cache


def is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def vp(n, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class Ring:
    """Base class; subclasses fill in the arithmetic."""

    p = None
    is_chain = False

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inverse(a), -k)
        r, b = self.one, a
        while k:
            if k & 1:
                r = self.mul(r, b)
            k >>= 1
            if k:
                b = self.mul(b, b)
        return r

    def is_zero(self, a):
        return a == self.zero

    def sum(self, xs):
        r = self.zero
        for x in xs:
            r = self.add(r, x)
        return r

    def prod(self, xs):
        r = self.one
        for x in xs:
            r = self.mul(r, x)
        return r

    def sigma(self, a, t=1):
        return a

    def random(self, rng):
        return rng.choice(self.element_list)

    def from_fraction(self, num, den):
        return self.mul(self.from_int(num), self.unit_inverse(self.from_int(den)))

    def char_is_p(self):
        return self.p is not None and self.is_zero(self.from_int(self.p))

    @cached_property
    def element_list(self):
        return list(self.elements())

    def __eq__(self, other):
        return type(self) is type(other) and self.key == other.key

    def __hash__(self):
        return hash((type(self).__name__, self.key))

    def __repr__(self):
        return self.name


class Integers(Ring):
    """The integers, used as a torsion-free oracle ring."""

    key = ()
    name = "ZZ"
    torsion_free = True
    zero, one = 0, 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return k

    def pow(self, a, k):
        return a ** k

    def random(self, rng):
        return rng.randint(-6, 6)

    def fmt(self, a):
        return str(a)


ZZ = Integers()


def _polymulmod(a, b, mod, modulus):
    """Multiply coefficient tuples and reduce by a monic ``modulus`` (low first)."""
    s = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, s - 1, -1):
        c = prod[d] % mod
        if c:
            for i in range(s):
                prod[d - s + i] -= c * modulus[i]
        prod[d] = 0
    return tuple(c % mod for c in prod[:s]) + (0,) * max(0, s - len(prod))


@lru_cache(maxsize=None)
def irreducible_poly(p, s):
    """Smallest monic irreducible polynomial of degree s over F_p (low first)."""
    if s == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=s):
        f = tail[::-1] + (1,)
        if f[0] == 0:
            continue
        if _is_irreducible(f, p):
            return f
    raise ValueError("no irreducible polynomial found")


def _is_irreducible(f, p):
    # no roots in any F_{p^d} for d <= s/2  <=>  gcd(x^{p^d} - x, f) = 1
    s = len(f) - 1
    x = (0, 1) + (0,) * (s - 2)
    xp = x
    for _ in range(s // 2):
        xp = _powmod_poly(xp, p, p, f)
        diff = list(xp)
        diff[1] = (diff[1] - 1) % p
        if len(_polygcd(_strip(diff), list(f), p)) > 1:
            return False
    return True


def _strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _powmod_poly(a, k, p, f):
    s = len(f) - 1
    r = (1,) + (0,) * (s - 1)
    while k:
        if k & 1:
            r = _polymulmod(r, a, p, f)
        a = _polymulmod(a, a, p, f)
        k >>= 1
    return r


def _polygcd(a, b, p):
    a, b = _strip(a), _strip(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[shift + i] = (a[shift + i] - c * y) % p
            a = _strip(a)
            if not a:
                break
        a, b = b, a
    return a


class FiniteField(Ring):
    """F_{p^s} as F_p[z]/(m(z)); elements are coefficient tuples, low first."""

    is_chain = True

    def __init__(self, p, s=1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p, self.s = p, s
        self.modulus = tuple(modulus) if modulus else irreducible_poly(p, s)
        self.q = p ** s
        self.key = (p, s, self.modulus)
        self.name = f"GF({p}^{s})" if s > 1 else f"GF({p})"
        self.zero = (0,) * s
        self.one = (1,) + (0,) * (s - 1)
        self.n = 1
        self.uniformizer = self.zero
        self.gens = {"z": self.gen} if s > 1 else {}

    @property
    def gen(self):
        return (0, 1) + (0,) * (self.s - 2) if self.s > 1 else (0,)

    @property
    def residue_field(self):
        return self

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        if self.s == 1:
            return (a[0] * b[0] % self.p,)
        return _polymulmod(a, b, self.p, self.modulus)

    def from_int(self, k):
        return (k % self.p,) + (0,) * (self.s - 1)

    def inverse(self, a):
        if a == self.zero:
            raise ZeroDivisionError("zero in a field")
        if self.s == 1:
            return (pow(a[0], -1, self.p),)
        return self.pow(a, self.q - 2)

    def unit_inverse(self, a):
        return self.inverse(a)

    def frob(self, a):
        return self.pow(a, self.p)

    def sigma(self, a, t=1):
        t %= self.s
        return self.pow(a, self.p ** t) if t else a

    def valuation(self, a):
        return 1 if a == self.zero else 0

    def is_unit(self, a):
        return a != self.zero

    def divide(self, a, b):
        if b == self.zero:
            if a == self.zero:
                return self.zero
            raise ZeroDivisionError("inexact division")
        return self.mul(a, self.inverse(b))

    def residue(self, a):
        return a

    def lift(self, b):
        return b

    def elements(self):
        for c in itertools.product(range(self.p), repeat=self.s):
            yield tuple(c)

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.s))

    def fmt(self, a):
        return _fmt_poly(a, "z")


def _fmt_poly(coeffs, var):
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


class GaloisRing(Ring):
    """W(F_{p^s})/p^n presented as (Z/p^n)[x]/(g) with g the Teichmuller lift.

    Because the root x of g is a Teichmuller element, the Frobenius lift is
    simply x -> x^p.
    """

    is_chain = True

    def __init__(self, p, s=1, n=1):
        self.field = FiniteField(p, s)
        self.p, self.s, self.n = p, s, n
        self.mod = p ** n
        self.q = p ** s
        self.key = (p, s, n)
        self.name = f"GR({p}^{n},{s})"
        self.zero = (0,) * s
        self.one = (1,) + (0,) * (s - 1)
        self.uniformizer = self.from_int(p)
        self.modulus = self._teichmuller_modulus()
        self.gens = {"x": self.gen} if s > 1 else {}

    @property
    def gen(self):
        return (0, 1) + (0,) * (self.s - 2)

    @property
    def residue_field(self):
        return self.field

    def _teichmuller_modulus(self):
        p, s, n = self.p, self.s, self.n
        if s == 1:
            return (0, 1)
        g0 = self.field.modulus
        mod = self.mod
        # x^{q^{n-1}} in (Z/p^n)[x]/(g0) is the Teichmuller root
        x = (0, 1) + (0,) * (s - 2)
        t = x
        for _ in range(n - 1):
            for _ in range(s):
                t = _powmod_poly_int(t, p, mod, g0)
        cols = [(1,) + (0,) * (s - 1)]
        for _ in range(s):
            cols.append(_polymulmod(cols[-1], t, mod, g0))
        # solve sum_{i<s} c_i t^i = t^s over Z/p^n
        A = [[cols[j][i] for j in range(s)] for i in range(s)]
        c = _solve_unimodular(A, list(cols[s]), p, mod)
        return tuple(-ci % mod for ci in c) + (1,)

    def add(self, a, b):
        m = self.mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def neg(self, a):
        m = self.mod
        return tuple(-x % m for x in a)

    def sub(self, a, b):
        m = self.mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def mul(self, a, b):
        if self.s == 1:
            return (a[0] * b[0] % self.mod,)
        return _polymulmod(a, b, self.mod, self.modulus)

    def scale(self, a, k):
        m = self.mod
        return tuple(x * k % m for x in a)

    def from_int(self, k):
        return (k % self.mod,) + (0,) * (self.s - 1)

    @cached_property
    def _sigma_images(self):
        # images of the basis monomials under x -> x^p
        xp = self.pow(self.gen, self.p) if self.s > 1 else self.one
        out, cur = [], self.one
        for _ in range(self.s):
            out.append(cur)
            cur = self.mul(cur, xp)
        return out

    def sigma(self, a, t=1):
        t %= self.s
        for _ in range(t):
            r = self.zero
            for c, img in zip(a, self._sigma_images):
                if c:
                    r = self.add(r, self.scale(img, c))
            a = r
        return a

    def valuation(self, a):
        v = self.n
        for c in a:
            if c:
                v = min(v, vp(c, self.p))
        return v

    def is_unit(self, a):
        return a[0] % self.p != 0 or any(c % self.p for c in a)

    def residue(self, a):
        return tuple(c % self.p for c in a)

    def lift(self, b):
        return tuple(b)

    def unit_inverse(self, a):
        r = self.lift(self.field.inverse(self.residue(a)))
        two = self.from_int(2)
        for _ in range(max(1, self.n.bit_length())):
            r = self.mul(r, self.sub(two, self.mul(a, r)))
        return r

    inverse = unit_inverse

    def divide(self, a, b):
        """Some c with b*c = a; requires v(a) >= v(b)."""
        vb, va = self.valuation(b), self.valuation(a)
        if va < vb:
            raise ZeroDivisionError("inexact division")
        if vb == self.n:
            return self.zero
        pk = self.p ** vb
        bu = tuple(c // pk for c in b)
        au = tuple(c // pk for c in a)
        return self.mul(au, self.unit_inverse(bu))

    def teichmuller(self, b):
        """Teichmuller representative of a residue field element."""
        t = self.lift(b)
        return self.pow(t, self.q ** (self.n - 1)) if self.n > 1 else t

    def to_witt(self, a):
        """Witt coordinates of a under W_n(F_q) = GR(p^n, s)."""
        F = self.field
        out, y = [], a
        for i in range(self.n):
            t = self.residue(y)
            out.append(F.pow(t, self.p ** i))
            y = self.sub(y, self.teichmuller(t))
            y = tuple(c // self.p for c in y)
        return out

    def from_witt(self, xs):
        F = self.field
        r = self.zero
        pk = 1
        for i, x in enumerate(xs[: self.n]):
            # p^i [x^{p^{-i}}]
            root = F.sigma(x, -i)
            r = self.add(r, self.scale(self.teichmuller(root), pk))
            pk *= self.p
        return r

    def frob(self, a):
        return self.sigma(a, 1)

    def ver(self, a):
        return self.scale(self.sigma(a, -1), self.p)

    def reduce_to(self, a, k):
        m = self.p ** k
        return tuple(c % m for c in a)

    def elements(self):
        for c in itertools.product(range(self.mod), repeat=self.s):
            yield tuple(c)

    def random(self, rng):
        return tuple(rng.randrange(self.mod) for _ in range(self.s))

    def fmt(self, a):
        return _fmt_poly(a, "x")


def _powmod_poly_int(a, k, mod, f):
    s = len(f) - 1
    r = (1,) + (0,) * (s - 1)
    while k:
        if k & 1:
            r = _polymulmod(r, a, mod, f)
        a = _polymulmod(a, a, mod, f)
        k >>= 1
    return r


def _solve_unimodular(A, b, p, mod):
    """Solve A c = b over Z/mod with A invertible mod p (Gauss-Jordan)."""
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] % p)
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, mod)
        M[col] = [x * inv % mod for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                M[r] = [(x - c * y) % mod for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


class TruncPolyRing(Ring):
    """A[t]/(t^n); a chain ring when A is a finite field.

    Serves as the equal-characteristic coefficient ring k[[pi]]/pi^n and as
    the Artin test algebras k[eps]/(eps^2), F_p[u]/(u^3).  sigma acts on the
    coefficients by the Frobenius of k and fixes t.
    """

    is_chain = True

    def __init__(self, field, n, var="t"):
        self.field = field
        self.is_chain = isinstance(field, FiniteField)
        self.torsion_free = getattr(field, "torsion_free", False)
        self.p, self.n, self.var = field.p, n, var
        self.key = (field.key, n, var)
        self.name = f"{field.name}[{var}]/({var}^{n})"
        fz = field.zero
        self.zero = (fz,) * n
        self.one = (field.one,) + (fz,) * (n - 1)
        self.uniformizer = (fz, field.one) + (fz,) * (n - 2) if n > 1 else self.zero
        self.gens = {var: self.uniformizer}
        for name, g in getattr(field, "gens", {}).items():
            self.gens[name] = self.embed(g)

    @property
    def residue_field(self):
        return self.field

    def embed(self, c):
        return (c,) + (self.field.zero,) * (self.n - 1)

    def add(self, a, b):
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.field.neg(x) for x in a)

    def mul(self, a, b):
        F, n = self.field, self.n
        out = [F.zero] * n
        for i, x in enumerate(a):
            if x == F.zero:
                continue
            for j in range(n - i):
                y = b[j]
                if y != F.zero:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return tuple(out)

    def from_int(self, k):
        return self.embed(self.field.from_int(k))

    def sigma(self, a, t=1):
        return tuple(self.field.sigma(x, t) for x in a)

    def frob(self, a):
        return self.pow(a, self.p)

    def valuation(self, a):
        for i, x in enumerate(a):
            if x != self.field.zero:
                return i
        return self.n

    def is_unit(self, a):
        return a[0] != self.field.zero

    def residue(self, a):
        return a[0]

    def lift(self, b):
        return self.embed(b)

    def unit_inverse(self, a):
        F, n = self.field, self.n
        inv0 = F.unit_inverse(a[0])
        out = [inv0] + [F.zero] * (n - 1)
        for k in range(1, n):
            acc = F.zero
            for i in range(1, k + 1):
                acc = F.add(acc, F.mul(a[i], out[k - i]))
            out[k] = F.neg(F.mul(acc, inv0))
        return tuple(out)

    inverse = unit_inverse

    def shift_down(self, a, k):
        return a[k:] + (self.field.zero,) * k

    def divide(self, a, b):
        vb, va = self.valuation(b), self.valuation(a)
        if va < vb:
            raise ZeroDivisionError("inexact division")
        if vb == self.n:
            return self.zero
        return self.mul(self.shift_down(a, vb), self.unit_inverse(self.shift_down(b, vb)))

    def elements(self):
        for cs in itertools.product(self.field.element_list, repeat=self.n):
            yield tuple(cs)

    def random(self, rng):
        return tuple(self.field.random(rng) for _ in range(self.n))

    def fmt(self, a):
        F = self.field
        terms = []
        for i, c in enumerate(a):
            if c == F.zero:
                continue
            cs = F.fmt(c)
            if "+" in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms) if terms else "0"


class RamifiedChainRing(Ring):
    """W(k)[y]/(E(y), y^n) = W_O(k)/pi^n for an Eisenstein E with Z_p coefficients.

    Elements are tuples of e Galois-ring elements (the coefficients of
    1, y, ..., y^{e-1}).  Representatives are reduced so that equality is
    equality of tuples.  sigma acts on W(k) and fixes y.
    """

    is_chain = True

    def __init__(self, p, s, eisenstein, n):
        E = tuple(int(c) for c in eisenstein)
        e = len(E) - 1
        if E[-1] != 1 or E[0] % p or E[0] % (p * p) == 0 or any(c % p for c in E[1:-1]):
            raise ValueError(f"{E} is not Eisenstein at {p}")
        self.p, self.s, self.e, self.n, self.E = p, s, e, n, E
        Q, R = divmod(n, e)
        self._digits = [Q + 1 if i < R else Q for i in range(e)]
        self.W = GaloisRing(p, s, Q + 2)
        self.field = self.W.field
        self.key = (p, s, E, n)
        self.name = f"W({self.field.name})[y]/(E,y^{n})"
        self.zero = (self.W.zero,) * e
        self.one = self._canon((self.W.one,) + (self.W.zero,) * (e - 1))
        self.uniformizer = self._canon(tuple(self.W.one if i == 1 else self.W.zero for i in range(e))) if e > 1 else self._canon((self.W.from_int(p),))
        # E(y) = 0 gives y^e = -(E_0 + ... + E_{e-1} y^{e-1})
        self._E0_unit_inv = self.W.unit_inverse(self.W.from_int(E[0] // p))
        self.gens = {"y": self.uniformizer}
        if s > 1:
            self.gens["x"] = self.embed(self.W.gen)

    @property
    def residue_field(self):
        return self.field

    def _canon(self, cs):
        out = []
        for c, d in zip(cs, self._digits):
            m = self.p ** d
            out.append(tuple(x % m for x in c))
        return tuple(out)

    def embed(self, w):
        return self._canon((tuple(w),) + (self.W.zero,) * (self.e - 1))

    def add(self, a, b):
        return self._canon(tuple(self.W.add(x, y) for x, y in zip(a, b)))

    def neg(self, a):
        return self._canon(tuple(self.W.neg(x) for x in a))

    def mul(self, a, b):
        W, e, E = self.W, self.e, self.E
        prod = [W.zero] * (2 * e - 1)
        for i, x in enumerate(a):
            if x == W.zero:
                continue
            for j, y in enumerate(b):
                if y != W.zero:
                    prod[i + j] = W.add(prod[i + j], W.mul(x, y))
        for d in range(2 * e - 2, e - 1, -1):
            c = prod[d]
            if c != W.zero:
                for i in range(e):
                    prod[d - e + i] = W.sub(prod[d - e + i], W.scale(c, E[i]))
        return self._canon(tuple(prod[:e]))

    def from_int(self, k):
        return self.embed(self.W.from_int(k))

    def sigma(self, a, t=1):
        return self._canon(tuple(self.W.sigma(c, t) for c in a))

    def valuation(self, a):
        v = self.n
        for i, c in enumerate(a):
            if c != self.W.zero:
                v = min(v, self.e * self.W.valuation(c) + i)
        return min(v, self.n)

    def is_unit(self, a):
        return self.valuation(a) == 0

    def residue(self, a):
        return self.W.residue(a[0])

    def lift(self, b):
        return self.embed(self.W.lift(b))

    def _div_y(self, a):
        # exact division by y of a representative divisible by y
        W, e, E = self.W, self.e, self.E
        c0 = a[0]
        if any(x % self.p for x in c0):
            raise ZeroDivisionError("not divisible by the uniformizer")
        c0p = tuple(x // self.p for x in c0)
        top = W.neg(W.mul(c0p, self._E0_unit_inv))
        d = [None] * e
        d[e - 1] = top
        for i in range(1, e):
            d[i - 1] = W.add(a[i], W.scale(top, E[i]))
        return tuple(d)

    def shift_down(self, a, k):
        for _ in range(k):
            a = self._div_y(a)
        return self._canon(a)

    def unit_inverse(self, a):
        r = self.lift(self.field.inverse(self.residue(a)))
        two = self.from_int(2)
        for _ in range(max(1, self.n.bit_length()) + 1):
            r = self.mul(r, self.sub(two, self.mul(a, r)))
        return r

    inverse = unit_inverse

    def divide(self, a, b):
        vb, va = self.valuation(b), self.valuation(a)
        if va < vb:
            raise ZeroDivisionError("inexact division")
        if vb == self.n:
            return self.zero
        return self.mul(self.shift_down(a, vb), self.unit_inverse(self.shift_down(b, vb)))

    @cached_property
    def p_over_pi(self):
        return self.shift_down(self.from_int(self.p), 1)

    def elements(self):
        ranges = []
        for d in self._digits:
            ranges.extend([range(self.p ** d)] * self.s)
        s = self.s
        for flat in itertools.product(*ranges):
            yield tuple(tuple(flat[i * s:(i + 1) * s]) for i in range(self.e))

    def random(self, rng):
        return self._canon(tuple(self.W.random(rng) for _ in range(self.e)))

    def fmt(self, a):
        terms = []
        for i, c in enumerate(a):
            if c == self.W.zero:
                continue
            cs = self.W.fmt(c)
            if "+" in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms) if terms else "0"


class PolyQuotientRing(Ring):
    """base[x]/(g) for a monic g over a commutative ring (not a chain ring in general)."""

    def __init__(self, base, modulus, var="x"):
        self.base = base
        self.modulus = tuple(modulus)
        self.d = len(modulus) - 1
        self.var = var
        self.key = (base.key, self.modulus, var)
        self.name = f"{base.name}[{var}]/(g)"
        self.zero = (base.zero,) * self.d
        self.one = (base.one,) + (base.zero,) * (self.d - 1)
        self.gens = dict(getattr(base, "gens", {}))
        self.gens = {k: self.embed(v) for k, v in self.gens.items()}
        self.gens[var] = tuple(base.one if i == 1 else base.zero for i in range(self.d))
        self.p = base.p

    def embed(self, b):
        return (b,) + (self.base.zero,) * (self.d - 1)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        B, d = self.base, self.d
        prod = [B.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c != B.zero:
                for i in range(d):
                    prod[k - d + i] = B.sub(prod[k - d + i], B.mul(c, self.modulus[i]))
        return tuple(prod[:d])

    def from_int(self, k):
        return self.embed(self.base.from_int(k))

    def sigma(self, a, t=1):
        return tuple(self.base.sigma(x, t) for x in a)

    def evaluate(self, a, root):
        B = self.base
        r, pw = B.zero, B.one
        for c in a:
            r = B.add(r, B.mul(c, pw))
            pw = B.mul(pw, root)
        return r

    def elements(self):
        for cs in itertools.product(self.base.element_list, repeat=self.d):
            yield tuple(cs)

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.d))

    def fmt(self, a):
        parts = []
        for i, c in enumerate(a):
            if c == self.base.zero:
                continue
            cs = self.base.fmt(c)
            if "+" in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts) if parts else "0"


def truncate_ring(R, k):
    """The quotient R/u^k of a chain ring."""
    if k == R.n:
        return R
    if not 1 <= k <= R.n:
        raise ValueError(f"level {k} out of range")
    if isinstance(R, GaloisRing):
        return GaloisRing(R.p, R.s, k)
    if isinstance(R, RamifiedChainRing):
        return RamifiedChainRing(R.p, R.s, R.E, k)
    if isinstance(R, TruncPolyRing):
        return TruncPolyRing(R.field, k, R.var)
    raise ValueError(f"cannot truncate {R!r}")


def reduce_element(R, S, a):
    """Image of a in the quotient S = R/u^k."""
    if R == S:
        return a
    if isinstance(R, GaloisRing):
        return S.reduce_to(a, S.n) if isinstance(S, GaloisRing) else S.residue(a)
    if isinstance(R, RamifiedChainRing):
        return S._canon(tuple(tuple(x % S.W.mod for x in c) for c in a))
    if isinstance(R, TruncPolyRing):
        return tuple(a[:S.n])
    raise ValueError("unsupported reduction")


def lift_element(S, R, a):
    """A representative in R of an element of the quotient S."""
    if R == S:
        return a
    if isinstance(R, (GaloisRing, RamifiedChainRing)):
        return a
    if isinstance(R, TruncPolyRing):
        return tuple(a) + (R.field.zero,) * (R.n - S.n)
    raise ValueError("unsupported lift")
