"""Dieudonne modules at finite level.

A module is stored through its decomposition M_0, ..., M_{f-1} over a chain
ring B (f = 1 for plain W(k)-modules).  V_i maps M_i to M_{i+1} with twist -1
and F_i maps M_{i+1} to M_i with twist +1, indices mod f, and
F_i V_i = V_i F_i = c where c is p (or pi in equal characteristic).
"""

import itertools
import random
from dataclasses import dataclass
from functools import cached_property

from .rings import TruncPolyRing, lift_element, reduce_element, truncate_ring
from .semilinear import (SemilinearMap, binomial, coker_length, compound, det,
                         identity, inverse, is_zero_mat, kernel_generators,
                         mat_mul, mat_scale, mat_sigma, mat_sub, mat_vec, scalar, smith, solve,
                         solve_matrix, transpose, twisted_nilpotency, vec_sigma, wedge_basis,
                         wedge_vectors, zeros)

EPSILON_SEED = 20240601
EPSILON_TRIES = 64


@dataclass(frozen=True)
class DieudonneModule:
    ring: object
    F: tuple
    V: tuple
    scalar: object = None
    name: str = ""

    def __post_init__(self):
        if len(self.F) != len(self.V):
            raise ValueError("F and V need the same number of components")
        if self.scalar is None:
            object.__setattr__(self, "scalar", default_scalar(self.ring))

    @property
    def f(self):
        return len(self.V)

    @property
    def rank(self):
        return len(self.V[0])

    @property
    def level(self):
        return self.ring.n

    def V_map(self, i):
        return SemilinearMap(self.ring, self.V[i % self.f], -1)

    def F_map(self, i):
        return SemilinearMap(self.ring, self.F[i % self.f], 1)

    def V_power(self, i, k):
        """V^k starting on M_i."""
        out = SemilinearMap(self.ring, identity(self.ring, self.rank), 0)
        for t in range(k):
            out = self.V_map(i + t).compose(out)
        return out

    def apply_V(self, i, v):
        return self.V_map(i).apply(v)

    def apply_F(self, i, v):
        """F on M_{i+1} landing in M_i."""
        return self.F_map(i).apply(v)


def default_scalar(R):
    if isinstance(R, TruncPolyRing):
        return R.uniformizer
    return R.from_int(R.p)


def _residue_matrix(R, A):
    return tuple(tuple(R.residue(x) for x in row) for row in A)


def validate(D):
    """Check FV = VF = c and report whether V is topologically nilpotent."""
    R = D.ring
    h = D.rank
    cI = scalar(R, h, D.scalar)
    failures = []
    for i in range(D.f):
        if len(D.V[i]) != h or len(D.F[i]) != h:
            failures.append(f"component {i}: matrices must be {h}x{h}")
            continue
        FV = D.F_map(i).compose(D.V_map(i))
        VF = D.V_map(i).compose(D.F_map(i))
        if FV.matrix != cI:
            failures.append(f"F V != c on M_{i}")
        if VF.matrix != cI:
            failures.append(f"V F != c on M_{i + 1}")
    return {"valid": not failures, "failures": failures, "connected": is_connected(D)}


def is_connected(D):
    R = D.ring
    k = R.residue_field
    cyc = D.V_power(0, D.f)
    A = _residue_matrix(R, cyc.matrix)
    return twisted_nilpotency(k, A, cyc.twist, D.rank)


def module_length(D):
    """Length over the coefficient ring of the underlying module."""
    return sum(coker_length(D.ring, zeros(D.ring, D.rank, 0)) for _ in range(D.f))


def order_exponent(D):
    """Exponent of q in the order of the finite group scheme attached to D."""
    return module_length(D) // D.f


def dimension(D):
    return sum(coker_length(D.ring, D.V[i]) for i in range(D.f))


def height(D):
    """Height read off the rank (free modules)."""
    return D.rank


# -- idempotent decomposition ------------------------------------------------

def _zq_roots(R, base_f):
    """Roots tau_i = sigma^{-i}(tau) in W(k) of the Teichmuller polynomial of F_q."""
    from .ramified import _field_root, _hensel_root
    from .rings import irreducible_poly
    g = irreducible_poly(R.p, base_f)
    tau = _hensel_root(R, g, R.lift(_field_root(R.residue_field, g)))
    return [R.sigma(tau, -i) for i in range(base_f)], tau


def assemble(D, base_f=None):
    """Underlying module of rank f*h over B with the matrix X of the Z_q generator."""
    R = D.ring
    f, h = D.f, D.rank
    roots, _ = _zq_roots(R, f)
    n = f * h
    Vb = [[R.zero] * n for _ in range(n)]
    Fb = [[R.zero] * n for _ in range(n)]
    for i in range(f):
        j = (i + 1) % f
        for r in range(h):
            for c in range(h):
                Vb[j * h + r][i * h + c] = D.V[i][r][c]
                Fb[i * h + r][j * h + c] = D.F[i][r][c]
    X = tuple(tuple(roots[r // h] if r == c else R.zero for c in range(n)) for r in range(n))
    big = DieudonneModule(R, (tuple(map(tuple, Fb)),), (tuple(map(tuple, Vb)),), D.scalar,
                          D.name + " (underlying)")
    return big, X


def decompose_by_idempotents(big, X, f):
    """Split a module with Z_q-action matrix X into components M_0..M_{f-1}."""
    R = big.ring
    n = big.rank
    if n % f:
        raise ValueError("rank is not divisible by f")
    roots, _ = _zq_roots(R, f)
    idem = []
    for i in range(f):
        E = identity(R, n)
        for j in range(f):
            if j != i:
                num = mat_sub(R, X, scalar(R, n, roots[j]))
                E = mat_mul(R, E, mat_scale(R, R.unit_inverse(R.sub(roots[i], roots[j])), num))
        idem.append(E)
    bases = []
    for E in idem:
        sf = smith(R, E)
        Uinv = inverse(R, sf.U)
        cols = [k for k, v in enumerate(sf.vals) if v == 0]
        B = tuple(tuple(Uinv[r][k] for k in cols) for r in range(n))
        bases.append(B)
    h = n // f
    if any(len(B[0]) != h for B in bases):
        raise ValueError("components do not have equal rank")
    Vbig = SemilinearMap(R, big.V[0], -1)
    Fbig = SemilinearMap(R, big.F[0], 1)
    Vs, Fs = [], []
    for i in range(f):
        j = (i + 1) % f
        Vi = _restrict(R, Vbig, bases[i], bases[j], idem[j])
        Fi = _restrict(R, Fbig, bases[j], bases[i], idem[i])
        Vs.append(Vi)
        Fs.append(Fi)
    return DieudonneModule(R, tuple(Fs), tuple(Vs), big.scalar, big.name + " (components)"), bases


def _restrict(R, phi, src, dst, dst_idem):
    cols = []
    for b in transpose(src):
        img = phi.apply(b)
        if mat_vec(R, dst_idem, img) != img:
            raise ValueError("image escapes the expected component")
        c = solve(R, dst, img)
        if c is None:
            raise ValueError("image not in the span of the component basis")
        cols.append(c)
    return transpose(tuple(cols))


# -- epsilon and exterior powers ---------------------------------------------

def find_epsilon(D, i=0, seed=EPSILON_SEED, tries=EPSILON_TRIES):
    """epsilon in M_i with {V^{f a} epsilon : a < h} a basis, or raise."""
    R = D.ring
    h, f = D.rank, D.f
    k = R.residue_field
    phi = D.V_power(i, f)
    Abar = _residue_matrix(R, phi.matrix)
    phibar = SemilinearMap(k, Abar, phi.twist).power(h - 1)
    cands = []
    for t in range(h):
        cands.append(tuple(k.one if r == t else k.zero for r in range(h)))
    rng = random.Random(seed)
    for _ in range(tries):
        cands.append(tuple(k.random(rng) for _ in range(h)))
    for v in cands:
        if all(x == k.zero for x in phibar.apply(v)):
            continue
        eps = tuple(R.lift(x) for x in v)
        B = epsilon_basis(D, i, eps)
        if R.is_unit(det(R, B)):
            return eps
    raise LookupError("no epsilon found within the search budget")


def epsilon_basis(D, i, eps):
    """Matrix with columns V^{f a} eps, a = 0..h-1, in M_i."""
    phi = D.V_power(i, D.f)
    cols = [tuple(eps)]
    for _ in range(D.rank - 1):
        cols.append(phi.apply(cols[-1]))
    return transpose(tuple(cols))


@dataclass(frozen=True)
class ExteriorPowerData:
    """Phi_i: wedge^j M_{i+1} -> wedge^j M_i (twist +1), Upsilon_i: wedge^j M_i -> wedge^j M_{i+1}."""

    module: DieudonneModule
    j: int
    Phi: tuple
    Upsilon: tuple
    epsilon: tuple

    @cached_property
    def as_module(self):
        return DieudonneModule(self.module.ring, self.Phi, self.Upsilon, self.module.scalar,
                               f"wedge^{self.j} {self.module.name}")


def upsilon(D, j):
    return tuple(compound(D.ring, D.V[i], j) for i in range(D.f))


def _phi_connected(D, j, i, eps):
    """Phi on wedge^j M_{i+1} -> wedge^j M_i from epsilon in M_{i+1}."""
    R = D.ring
    h, f = D.rank, D.f
    src = (i + 1) % f
    basis = [tuple(eps)]
    Vf = D.V_power(src, f)
    for _ in range(h - 1):
        basis.append(Vf.apply(basis[-1]))
    # V^{f a - 1} eps lives in M_i
    Vm1 = D.V_power(src, f - 1)
    lower = [None] + [Vm1.apply(basis[a - 1]) for a in range(1, h)]
    wb = wedge_basis(h, j)
    Bcols, Ccols = [], []
    for J in wb:
        Bcols.append(wedge_vectors(R, [basis[a] for a in J]))
        first = D.apply_F(i, basis[J[0]])
        Ccols.append(wedge_vectors(R, [first] + [lower[a] for a in J[1:]]))
    Bw = transpose(tuple(Bcols))
    Cw = transpose(tuple(Ccols))
    return mat_mul(R, Cw, inverse(R, mat_sigma(R, Bw, 1)))


def exterior_power(D, j):
    """Phi and Upsilon on wedge^j D."""
    h = D.rank
    if j < 1:
        raise ValueError("j must be positive")
    if j > h:
        return ExteriorPowerData(D, j, tuple(() for _ in range(D.f)),
                                 tuple(() for _ in range(D.f)), None)
    Ups = upsilon(D, j)
    if j == 1:
        return ExteriorPowerData(D, j, D.F, D.V, None)
    if dimension(D) <= 1 and is_connected(D):
        eps = tuple(find_epsilon(D, (i + 1) % D.f) for i in range(D.f))
        Phi = tuple(_phi_connected(D, j, i, eps[i]) for i in range(D.f))
    elif D.f == 1:
        Phi, eps = (_phi_general(D, j),), None
    else:
        raise NotImplementedError("wedge powers with f > 1 need a connected module of dimension 1")
    data = ExteriorPowerData(D, j, Phi, Ups, eps)
    report = phi_upsilon_identities(data)
    if not report["ok"]:
        raise ArithmeticError("Phi Upsilon != c on the exterior power")
    return data


def phi_upsilon_identities(data):
    """Phi Upsilon = Upsilon Phi = c on every component."""
    M = data.as_module
    rep = validate(M)
    return {"ok": rep["valid"], "failures": rep["failures"]}


def split_etale_connected(D):
    """Basis change P with P^{-1} D P = D_et + D_0 (f = 1)."""
    R = D.ring
    h = D.rank
    N = h * R.n
    VN = D.V_power(0, N)
    sf = smith(R, VN.matrix)
    Uinv = inverse(R, sf.U)
    et_cols = [k for k, v in enumerate(sf.vals) if v == 0]
    img = [tuple(Uinv[r][k] for r in range(h)) for k in et_cols]
    ker = [g for g, v in kernel_generators(R, VN.matrix) if v == R.n]
    P = transpose(tuple(img + ker))
    if len(img) + len(ker) != h or not R.is_unit(det(R, P)):
        raise ValueError("module does not split into etale and connected parts")
    Pinv = inverse(R, P)
    Vn = mat_mul(R, mat_mul(R, Pinv, D.V[0]), mat_sigma(R, P, -1))
    Fn = mat_mul(R, mat_mul(R, Pinv, D.F[0]), mat_sigma(R, P, 1))
    return P, Vn, Fn, len(img)


def _phi_general(D, j):
    R = D.ring
    h = D.rank
    P, Vn, Fn, het = split_etale_connected(D)
    h0 = h - het
    sub = lambda A, a, b: tuple(tuple(A[r][c] for c in range(a, b)) for r in range(a, b))
    Vet = sub(Vn, 0, het)
    V0, F0 = sub(Vn, het, h), sub(Fn, het, h)
    D0 = DieudonneModule(R, (F0,), (V0,), D.scalar) if h0 else None
    if D0 is not None and dimension(D0) > 1:
        raise NotImplementedError("connected part of dimension > 1 is not supported")
    Vinv_et = mat_sigma(R, inverse(R, Vet), 1) if het else ()
    new_basis = wedge_basis(h, j)
    pos = {J: t for t, J in enumerate(new_basis)}
    size = len(new_basis)
    Phi = [[R.zero] * size for _ in range(size)]
    for r in range(0, j + 1):
        if r > het or j - r > h0:
            continue
        Aet = compound(R, Vinv_et, r) if r else ((R.one,),)
        if j - r == 0:
            A0 = ((D.scalar,),)
        else:
            A0 = exterior_power(D0, j - r).Phi[0]
        Ib = wedge_basis(het, r)
        Kb = [tuple(het + x for x in K) for K in wedge_basis(h0, j - r)]
        for a, I in enumerate(Ib):
            for b, K in enumerate(Kb):
                for a2, I2 in enumerate(Ib):
                    for b2, K2 in enumerate(Kb):
                        Phi[pos[I2 + K2]][pos[I + K]] = R.mul(Aet[a2][a], A0[b2][b])
    Phi = tuple(map(tuple, Phi))
    Pw = compound(R, P, j)
    return mat_mul(R, mat_mul(R, Pw, Phi), inverse(R, mat_sigma(R, Pw, 1)))


# -- diagrams ------------------------------------------------------------------

def verify_diagrams(D, data, trials=200, seed=0, exhaustive=False):
    """Check the F- and V-diagrams on random (or all) tuples."""
    R = D.ring
    j, h = data.j, D.rank
    fails = {"F": 0, "V": 0}
    checked = 0
    rng = random.Random(seed)
    for i in range(D.f):
        Phi = SemilinearMap(R, data.Phi[i], 1)
        Ups = SemilinearMap(R, data.Upsilon[i], -1)
        if exhaustive:
            vecs = list(itertools.product(R.element_list, repeat=h))
            tuples = itertools.product(vecs, repeat=j)
        else:
            tuples = (tuple(tuple(R.random(rng) for _ in range(h)) for _ in range(j))
                      for _ in range(trials))
        for ds in tuples:
            checked += 1
            # F-diagram: d_1 in M_{i+1}, d_2.. in M_i
            lhs = Phi.apply(wedge_vectors(R, [ds[0]] + [D.apply_V(i, d) for d in ds[1:]]))
            rhs = wedge_vectors(R, [D.apply_F(i, ds[0])] + list(ds[1:]))
            if lhs != rhs:
                fails["F"] += 1
            # V-diagram: all d in M_i
            lhs = Ups.apply(wedge_vectors(R, list(ds)))
            rhs = wedge_vectors(R, [D.apply_V(i, d) for d in ds])
            if lhs != rhs:
                fails["V"] += 1
    return {"checked": checked, "F_failures": fails["F"], "V_failures": fails["V"],
            "ok": fails["F"] == 0 and fails["V"] == 0}


def phi_uniqueness(D, data):
    """Solve Upsilon sigma^{-1}(X) = c and compare with Phi modulo the ambiguity."""
    R = D.ring
    out = []
    for i in range(D.f):
        U = data.Upsilon[i]
        size = len(U)
        Y = solve_matrix(R, U, scalar(R, size, D.scalar))
        if Y is None:
            out.append(False)
            continue
        X = mat_sigma(R, Y, 1)
        diff = mat_sigma(R, mat_sub(R, X, data.Phi[i]), -1)
        out.append(is_zero_mat(R, mat_mul(R, U, diff)))
        vmax = max(smith(R, U).vals)
        slack = R.n - vmax
        out[-1] = out[-1] and all(R.valuation(x) >= slack for row in diff for x in row)
    return all(out)


# -- level tower ---------------------------------------------------------------

def reduce_module(D, n):
    S = truncate_ring(D.ring, n)
    red = lambda A: tuple(tuple(reduce_element(D.ring, S, x) for x in row) for row in A)
    return DieudonneModule(S, tuple(red(A) for A in D.F), tuple(red(A) for A in D.V),
                           reduce_element(D.ring, S, D.scalar), D.name)


def reduce_matrix(R, S, A):
    return tuple(tuple(reduce_element(R, S, x) for x in row) for row in A)


def eta(R, m, n, v):
    """Multiplication by u^n from level m into level n+m (R has level n+m)."""
    S = truncate_ring(R, m)
    un = R.pow(R.uniformizer, n)
    return tuple(R.mul(un, lift_element(S, R, x)) for x in v)


def tower_report(D, j, n, m):
    """0 -> wedge M_m -> wedge M_{n+m} -> wedge M_n -> 0 by enumeration."""
    R = D.ring
    if R.n != n + m:
        raise ValueError("module must live at level n+m")
    Sn, Sm = truncate_ring(R, n), truncate_ring(R, m)
    size = binomial(D.rank, j)
    big = list(itertools.product(R.element_list, repeat=size))
    small = list(itertools.product(Sm.element_list, repeat=size))
    zero_n = tuple(Sn.zero for _ in range(size))
    ker = {v for v in big if tuple(reduce_element(R, Sn, x) for x in v) == zero_n}
    img = {eta(R, m, n, v) for v in small}
    injective = len(img) == len(small)
    surjective = len({tuple(reduce_element(R, Sn, x) for x in v) for v in big}) == len(Sn.element_list) ** size
    # eta intertwines Upsilon at levels m and n+m
    Dm = reduce_module(D, m)
    U_big, U_small = upsilon(D, j)[0], upsilon(Dm, j)[0]
    compat = all(mat_vec(R, U_big, vec_sigma(R, eta(R, m, n, v), -1)) ==
                 eta(R, m, n, mat_vec(Sm, U_small, vec_sigma(Sm, v, -1))) for v in small[:200])
    return {"ker": len(ker), "im": len(img), "exact_middle": ker == img,
            "injective": injective, "surjective": surjective, "upsilon_compatible": compat,
            "ok": ker == img and injective and surjective and compat}
