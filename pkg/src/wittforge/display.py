"""3n-displays with a chosen normal decomposition P = L + T.

A display is stored through its structural matrix S over W = W_m(R): the
first rank_L columns are V^{-1}(l_i), the last rank_T columns are F(t_j),
all written in the basis (l_1, .., t_1, ..).  Two models of W are supported:
GaloisRing(p, s, m) = W_m(F_{p^s}) for perfect fields, and WittRing(R, m)
for finite F_p-algebras R.
"""

import itertools
import random
from dataclasses import dataclass

from .dieudonne import DieudonneModule
from .rings import GaloisRing
from .semilinear import (binomial, compound, det, diag, identity, inverse, is_zero_mat,
                         mat_mul, mat_scale, mat_sigma, mat_vec, smith, transpose)
from .witt import WittRing


# -- the Witt model ------------------------------------------------------------

def is_perfect_model(W):
    return isinstance(W, GaloisRing)


def frob(W, a):
    return W.sigma(a, 1)


def ver(W, a):
    return W.ver(a)


def in_I(W, a):
    if is_perfect_model(W):
        return W.valuation(a) >= 1
    return W.in_ideal_I(a)


def residue_ring(W):
    return W.residue_field if is_perfect_model(W) else W.base


def residue(W, a):
    return W.residue(a)


def p_elt(W):
    return W.from_int(W.p)


def _mat_frob(W, A):
    return tuple(tuple(frob(W, x) for x in row) for row in A)


def _is_unit(W, a):
    return W.is_unit(a)


@dataclass(frozen=True)
class Display:
    W: object
    rank_L: int
    rank_T: int
    S: tuple
    name: str = ""

    @property
    def height(self):
        return self.rank_L + self.rank_T

    @property
    def tangent_rank(self):
        return self.rank_T

    def q_generators(self):
        """Generators of Q: the l_i and p t_j."""
        W, h = self.W, self.height
        out = []
        for k in range(h):
            c = W.one if k < self.rank_L else p_elt(W)
            out.append(tuple(c if i == k else W.zero for i in range(h)))
        return out

    def in_Q(self, x):
        return all(in_I(self.W, x[k]) for k in range(self.rank_L, self.height))

    def F_matrix(self):
        """F = S diag(p_L, 1_T), Frobenius-linear."""
        W = self.W
        return mat_mul(W, self.S, diag(W, [p_elt(W)] * self.rank_L + [W.one] * self.rank_T))

    def apply_F(self, x):
        return mat_vec(self.W, self.F_matrix(), tuple(frob(self.W, c) for c in x))

    def apply_Vinv(self, x, vx=None):
        """V^{-1} on x in Q; vx optionally gives exact preimages under V of the T-coordinates."""
        W = self.W
        coords = []
        for k, c in enumerate(x):
            if k < self.rank_L:
                coords.append(frob(W, c))
            elif vx is not None:
                coords.append(vx[k - self.rank_L])
            else:
                coords.append(vinv(W, c))
        return mat_vec(W, self.S, tuple(coords))


def vinv(W, a):
    """Some w with V(w) = a; unique up to the top Witt coordinate."""
    if is_perfect_model(W):
        if W.valuation(a) < 1:
            raise ValueError("not in the image of V")
        return frob(W, W.divide(a, p_elt(W))) if W.n > 1 else W.zero
    return W.v_inverse(a)


def eq_mod_top(W, a, b):
    """Equality after dropping the last Witt coordinate."""
    if is_perfect_model(W):
        return W.valuation(W.sub(a, b)) >= W.n - 1
    return a[:W.m - 1] == b[:W.m - 1]


def vec_eq_mod_top(W, x, y):
    return all(eq_mod_top(W, a, b) for a, b in zip(x, y))


def validate(d, trials=20, seed=0):
    W, h = d.W, d.height
    failures = []
    if len(d.S) != h or any(len(row) != h for row in d.S):
        return {"valid": False, "failures": ["structural matrix has the wrong shape"]}
    if not W.is_unit(det(W, d.S)):
        failures.append("structural matrix is not invertible")
    rng = random.Random(seed)
    for _ in range(trials):
        w = W.random(rng)
        x = tuple(W.random(rng) for _ in range(h))
        vw = ver(W, w)
        y = tuple(W.mul(vw, c) for c in x)
        # exact preimage of the T-part of V(w) x is w F(x_T)
        vx = [W.mul(w, frob(W, x[k])) for k in range(d.rank_L, h)]
        lhs = d.apply_Vinv(y, vx)
        rhs = tuple(W.mul(w, c) for c in d.apply_F(x))
        if lhs != rhs:
            failures.append("V^{-1}(V(w) x) != w F(x)")
            break
    for k, q in enumerate(d.q_generators()[: d.rank_L]):
        if d.apply_F(q) != tuple(W.mul(p_elt(W), c) for c in d.apply_Vinv(q)):
            failures.append("F(l) != p V^{-1}(l)")
            break
    return {"valid": not failures, "failures": failures}


# -- V sharp and nilpotence ----------------------------------------------------

@dataclass(frozen=True)
class VSharpData:
    V_sharp: tuple
    F_sharp: tuple


def v_sharp(d):
    W = d.W
    Sinv = inverse(W, d.S)
    Vs = mat_mul(W, diag(W, [W.one] * d.rank_L + [p_elt(W)] * d.rank_T), Sinv)
    Fs = d.F_matrix()
    pI = mat_scale(W, p_elt(W), identity(W, d.height))
    if mat_mul(W, Fs, Vs) != pI or mat_mul(W, Vs, Fs) != pI:
        raise ArithmeticError("F# V# != p")
    return VSharpData(Vs, Fs)


def nilpotence_exponent(d, bound=None):
    """Least N with V^{N#} = 0 modulo I_R + pW(R), or None."""
    W = d.W
    k = residue_ring(W)
    A = tuple(tuple(residue(W, x) for x in row) for row in v_sharp(d).V_sharp)
    if d.height == 0:
        return 0
    if bound is None:
        bound = d.height * getattr(k, "n", 1) + 1
    M = A
    for N in range(1, bound + 1):
        if is_zero_mat(k, M):
            return N
        M = mat_mul(k, mat_sigma(k, M, 1), A)
    return None


def nilpotence_test(d):
    return nilpotence_exponent(d) is not None


# -- Dieudonne modules ---------------------------------------------------------

def from_dieudonne(D):
    """Display attached to D over W_n(k) with P = M and Q = VM.

    Returns (display, iso) where the columns of iso are the display basis in the
    coordinates of D.
    """
    W = D.ring
    if not isinstance(W, GaloisRing) or D.f != 1:
        raise ValueError("conversion needs f = 1 and W_n of a finite field")
    h = D.rank
    A = D.V[0]
    sf = smith(W, A)
    vals = list(sf.vals) + [W.n] * (h - len(sf.vals))
    if any(v not in (0, 1) for v in vals):
        raise ValueError("V is not of the required shape")
    L = [k for k in range(h) if vals[k] == 0]
    T = [k for k in range(h) if vals[k] != 0]
    order = L + T
    U, Wm = sf.U, sf.W
    Uinv = inverse(W, U)
    base = transpose(tuple(tuple(Uinv[r][k] for r in range(h)) for k in order))
    cols = []
    sWm = mat_sigma(W, Wm, 1)
    for k in L:
        img = tuple(sWm[r][k] for r in range(h))
        cols.append(mat_vec(W, U, img))
    for k in T:
        b = tuple(Uinv[r][k] for r in range(h))
        img = mat_vec(W, D.F[0], tuple(W.sigma(x, 1) for x in b))
        cols.append(mat_vec(W, U, img))
    Sfull = transpose(tuple(cols))     # rows still in the original Smith order
    S = tuple(Sfull[r] for r in order)
    return Display(W, len(L), len(T), S, f"display of {D.name}".strip()), base


def to_dieudonne(d):
    W = d.W
    if not is_perfect_model(W):
        raise ValueError("conversion needs W_n of a finite field")
    pd = diag(W, [W.one] * d.rank_L + [p_elt(W)] * d.rank_T)
    V = mat_mul(W, pd, inverse(W, mat_sigma(W, d.S, -1)))
    F = d.F_matrix()
    return DieudonneModule(W, (F,), (V,), p_elt(W), f"module of {d.name}".strip())


def transport_module(D, base):
    """D written in the basis given by the columns of `base`."""
    W = D.ring
    Bi = inverse(W, base)
    V = mat_mul(W, mat_mul(W, Bi, D.V[0]), mat_sigma(W, base, -1))
    F = mat_mul(W, mat_mul(W, Bi, D.F[0]), mat_sigma(W, base, 1))
    return DieudonneModule(W, (F,), (V,), D.scalar, D.name)


def roundtrip_module(D):
    d, base = from_dieudonne(D)
    D2 = to_dieudonne(d)
    D1 = transport_module(D, base)
    return D2.V == D1.V and D2.F == D1.F


def roundtrip_display(d):
    D = to_dieudonne(d)
    d2, base = from_dieudonne(D)
    if d2.rank_T != d.rank_T or not _is_normal_change(d, base):
        return False
    return structural_match(d.W, change_basis(d, base, None).S, d2.S, d.rank_L)


def structural_match(W, A, B, rank_L):
    """T-columns exactly; L-columns up to the top Witt coordinate (V-preimages are not unique)."""
    for ra, rb in zip(A, B):
        for k, (x, y) in enumerate(zip(ra, rb)):
            if k >= rank_L and x != y:
                return False
            if k < rank_L and not eq_mod_top(W, x, y):
                return False
    return True


# -- changes of normal decomposition -------------------------------------------

def _blocks(C, a):
    G = tuple(row[:a] for row in C[:a])
    X = tuple(row[a:] for row in C[:a])
    Y = tuple(row[:a] for row in C[a:])
    c = tuple(row[a:] for row in C[a:])
    return G, X, Y, c


def _is_normal_change(d, C):
    W = d.W
    G, X, Y, c = _blocks(C, d.rank_L)
    return all(in_I(W, x) for row in Y for x in row) and W.is_unit(det(W, C))


def _assemble(G, X, Y, c):
    top = [tuple(g) + tuple(x) for g, x in zip(G, X)] if G else [tuple(x) for x in X]
    bot = [tuple(y) + tuple(z) for y, z in zip(Y, c)] if Y else [tuple(z) for z in c]
    return tuple(top + bot)


def change_basis(d, C, Y0):
    """Structural matrix in the new normal decomposition given by the columns of C.

    Y0 gives the V-preimages of the T-rows of the L-block of C (computed if None).
    """
    W = d.W
    a = d.rank_L
    G, X, Y, c = _blocks(C, a)
    if Y0 is None:
        Y0 = tuple(tuple(vinv(W, y) for y in row) for row in Y)
    pX = tuple(tuple(W.mul(p_elt(W), frob(W, x)) for x in row) for row in X)
    M = _assemble(_mat_frob(W, G), pX, Y0, _mat_frob(W, c))
    S2 = mat_mul(W, mat_mul(W, inverse(W, C), d.S), M)
    return Display(W, d.rank_L, d.rank_T, S2, d.name)


# -- exterior powers -------------------------------------------------------------

def wedge_order(h, r):
    """Wedge basis of P = L + T (rank_T = 1): tuples avoiding the T index first."""
    tuples = list(itertools.combinations(range(h), r))
    return [J for J in tuples if h - 1 not in J] + [J for J in tuples if h - 1 in J]


def exterior_power(d, r):
    if d.rank_T != 1:
        raise ValueError("exterior powers need tangent rank 1")
    h = d.height
    if not 1 <= r <= h:
        raise ValueError(f"r must lie in 1..{h}")
    order = wedge_order(h, r)
    S = compound(d.W, d.S, r, order, order)
    return Display(d.W, binomial(h - 1, r), binomial(h - 1, r - 1), S,
                   f"wedge^{r} {d.name}".strip())


def _random_change(d, rng):
    W = d.W
    a, b = d.rank_L, d.rank_T
    while True:
        G = tuple(tuple(W.random(rng) for _ in range(a)) for _ in range(a))
        if a == 0 or W.is_unit(det(W, G)):
            break
    X = tuple(tuple(W.random(rng) for _ in range(b)) for _ in range(a))
    Y0 = tuple(tuple(W.random(rng) for _ in range(a)) for _ in range(b))
    Y = tuple(tuple(ver(W, y) for y in row) for row in Y0)
    while True:
        c = tuple(tuple(W.random(rng) for _ in range(b)) for _ in range(b))
        if W.is_unit(det(W, c)):
            break
    return _assemble(G, X, Y, c), Y0


def _exterior_change(d, C, Y0, r):
    """Change of basis on wedge^r P induced by C, with exact V-preimages."""
    W = d.W
    h = d.height
    order = wedge_order(h, r)
    Cw = compound(W, C, r, order, order)
    a = binomial(h - 1, r)
    G, X, Y, c = _blocks(C, d.rank_L)
    # rows with T index carry Y; replacing them by Y0 (and F elsewhere) gives V^{-1}
    N = _assemble(_mat_frob(W, G), _mat_frob(W, X), Y0, _mat_frob(W, c))
    Nw = compound(W, N, r, order, order)
    Y0w = tuple(row[:a] for row in Nw[a:])
    return Cw, Y0w


def decomposition_independence_check(d, r, trials=50, seed=0, identity_first=True):
    W = d.W
    rng = random.Random(seed)
    base = exterior_power(d, r)
    failures = 0
    for t in range(trials):
        if t == 0 and identity_first:
            C = identity(W, d.height)
            Y0 = tuple(tuple(W.zero for _ in range(d.rank_L)) for _ in range(d.rank_T))
        else:
            C, Y0 = _random_change(d, rng)
        d2 = change_basis(d, C, Y0)
        ext2 = exterior_power(d2, r)
        Cw, Y0w = _exterior_change(d, C, Y0, r)
        moved = change_basis(base, Cw, Y0w)
        if moved.S != ext2.S:
            failures += 1
    return {"trials": trials, "failures": failures, "ok": failures == 0}


# -- base change -----------------------------------------------------------------

def field_embedding(F1, F2):
    """The embedding F_{p^s} -> F_{p^{s'}} sending the generator to the first root found."""
    from .ramified import _field_root
    if F1.s == 1:
        return lambda a: F2.from_int(a[0])
    z = _field_root(F2, F1.modulus)

    def emb(a):
        out = F2.zero
        for c in reversed(a):
            out = F2.add(F2.mul(out, z), F2.from_int(c))
        return out
    return emb


def witt_map(W1, W2, hom):
    """W_m(hom) for a ring map hom between the residue rings."""
    def coords(W, a):
        return W.to_witt(a) if is_perfect_model(W) else list(a)

    def build(W, cs):
        return W.from_witt(cs) if is_perfect_model(W) else tuple(cs)
    return lambda a: build(W2, [hom(x) for x in coords(W1, a)])


def base_change(d, W2, hom):
    """Entrywise W_m(hom) on the structural matrix."""
    if getattr(W2, "n", getattr(W2, "m", None)) != getattr(d.W, "n", getattr(d.W, "m", None)):
        raise ValueError("base change keeps the Witt depth")
    phi = witt_map(d.W, W2, hom)
    S = tuple(tuple(phi(x) for x in row) for row in d.S)
    return Display(W2, d.rank_L, d.rank_T, S, d.name)


def dual_numbers_model(W):
    """W_m(k[e]/e^2) together with the inclusion k -> k[e]/e^2."""
    from .rings import TruncPolyRing
    k = residue_ring(W)
    R = TruncPolyRing(k, 2, "e")
    return WittRing(R, W.n, W.p), R.embed


# -- universal property ----------------------------------------------------------

def _vinv_target(dt, x):
    return dt.apply_Vinv(x)


def _hom_conditions(d_ext, dt, psi):
    """psi: columns are images of the wedge basis of d_ext."""
    W = dt.W
    for k, g in enumerate(d_ext.q_generators()):
        img = mat_vec(W, psi, g)
        if not dt.in_Q(img):
            return False
        lhs = mat_vec(W, psi, tuple(row[k] for row in d_ext.S))
        col = tuple(row[k] for row in psi)
        if k < d_ext.rank_L:
            rhs = _vinv_target(dt, img)
            if not vec_eq_mod_top(W, lhs, rhs):
                return False
        elif lhs != dt.apply_F(col):
            return False
    return True


def _bilinear(W, table, order, h, x, y):
    out = None
    for J, v in zip(order, table):
        a, b = J
        coef = W.sub(W.mul(x[a], y[b]), W.mul(x[b], y[a]))
        term = tuple(W.mul(coef, c) for c in v)
        out = term if out is None else tuple(W.add(s, t) for s, t in zip(out, term))
    return out


def _alt_conditions(d, dt, table, order):
    W = dt.W
    h = d.height
    unit = [tuple(W.one if t == k else W.zero for t in range(h)) for k in range(h)]
    vgens = [tuple(row[k] for row in d.S) for k in range(h)]   # V^{-1} of the generators
    pw = p_elt(W)
    for i, j in itertools.combinations(range(h), 2):
        raw = _bilinear(W, table, order, h, unit[i], unit[j])
        kT = (i >= d.rank_L) + (j >= d.rank_L)
        val = tuple(W.mul(W.pow(pw, kT), c) for c in raw)
        if not dt.in_Q(val):
            return False
        rhs = _bilinear(W, table, order, h, vgens[i], vgens[j])
        if kT == 0:
            if not vec_eq_mod_top(W, _vinv_target(dt, val), rhs):
                return False
        else:
            # V^{-1}(p^k x) = p^{k-1} F(x)
            lhs = tuple(W.mul(W.pow(pw, kT - 1), c) for c in dt.apply_F(raw))
            if lhs != rhs:
                return False
    return True


def universal_property_check(d, dt, max_candidates=200000):
    """Compare Hom(wedge^2 d, dt) with Alt(d^2, dt) through lambda."""
    if d.rank_T != 1:
        raise ValueError("needs tangent rank 1")
    W = d.W
    r = 2
    d_ext = exterior_power(d, r)
    order = wedge_order(d.height, r)
    n_src, n_tgt = len(order), dt.height
    total = len(W.element_list) ** (n_src * n_tgt)
    if total > max_candidates:
        raise OverflowError("size budget exceeded")
    homs, alts = set(), set()
    vecs = list(itertools.product(W.element_list, repeat=n_tgt))
    for cols in itertools.product(vecs, repeat=n_src):
        psi = transpose(cols) if n_tgt else ()
        if n_tgt == 0:
            homs.add(cols)
            alts.add(cols)
            continue
        if _hom_conditions(d_ext, dt, psi):
            homs.add(cols)
        if _alt_conditions(d, dt, cols, order):
            alts.add(cols)
    # lambda^*: psi -> psi o lambda has the same table of values on basis pairs
    image = {cols for cols in homs}
    return {"hom": len(homs), "alt": len(alts), "bijection": image == alts,
            "lambda_is_alternating": _alt_conditions(d, d_ext, transpose(identity(W, n_src)), order)
            if dt == d_ext else None, "ok": image == alts}


# -- fixtures ----------------------------------------------------------------------

DISPLAY_FIXTURES = ("multiplicative", "etale", "supersingular", "lubin-tate")


def display_fixture(name, p=3, h=3, m=2, s=1):
    W = GaloisRing(p, s, m)
    if name == "multiplicative":
        return Display(W, 0, 1, ((W.one,),), "multiplicative")
    if name == "etale":
        return Display(W, 1, 0, ((W.one,),), "etale")
    if name == "supersingular":
        return Display(W, 1, 1, ((W.zero, W.one), (W.one, W.zero)), "supersingular")
    if name == "lubin-tate":
        from .fixtures import lubin_tate
        d, _ = from_dieudonne(lubin_tate(W, h))
        return Display(W, d.rank_L, d.rank_T, d.S, f"lubin-tate h={h}")
    raise KeyError(f"unknown display fixture {name!r}")
