"""Dieudonne modules with O-action versus modules over W_O(k).

A module D over W(k) (x) O splits into components M_0, .., M_{f-1}.  When O acts
through the structure map (the cokernels of V: M_{i-1} -> M_i vanish for i != 0),
the whole module is recovered from M_0 with V_pi = V^f and F_pi = V_pi^{-1} pi.
"""

import itertools
from dataclasses import dataclass

from .dieudonne import DieudonneModule, default_scalar, exterior_power
from .fixtures import _companion, _companion_dual, p_over_pi, pi_element
from .multilinear import (MultilinearMap, _units, _unknown_basis, basis_tuples, f_defects,
                          linear_kernel, solve_L_space, v_defects)
from .semilinear import (SemilinearMap, coker_length, compound, identity, inverse,
                         is_zero_mat, ker_length, mat_mul, mat_scale, mat_sigma, mat_sub,
                         mat_vec, scalar, solve_matrix, vec_sigma)


@dataclass(frozen=True)
class RamifiedDieudonneModule:
    """H over W_O(k) with V_pi (twist -f) and F_pi (twist +f), F_pi V_pi = V_pi F_pi = pi."""

    ring: object
    F: tuple            # a single matrix in a 1-tuple, like the f = 1 case of DieudonneModule
    V: tuple
    f: int
    pi: object
    name: str = ""

    @property
    def rank(self):
        return len(self.V[0])

    @property
    def scalar(self):
        return self.pi

    def V_map(self, i=0):
        return SemilinearMap(self.ring, self.V[0], -self.f)

    def F_map(self, i=0):
        return SemilinearMap(self.ring, self.F[0], self.f)

    def apply_V(self, i, v):
        return self.V_map().apply(v)

    def apply_F(self, i, v):
        return self.F_map().apply(v)


def validate_ramified(H):
    R, pi = H.ring, H.pi
    piI = scalar(R, H.rank, pi)
    FV = H.F_map().compose(H.V_map())
    VF = H.V_map().compose(H.F_map())
    fails = []
    if FV.matrix != piI:
        fails.append("F_pi V_pi != pi")
    if VF.matrix != piI:
        fails.append("V_pi F_pi != pi")
    return {"valid": not fails, "failures": fails}


def ramified_lubin_tate(R, h, f=1):
    pi = pi_element(R)
    return RamifiedDieudonneModule(R, (_companion_dual(R, h, pi),), (_companion(R, h, pi),),
                                   f, pi, f"ramified lubin-tate h={h}")


def ramified_supersingular(R, f=1):
    pi = pi_element(R)
    A = ((R.zero, R.one), (pi, R.zero))
    return RamifiedDieudonneModule(R, (A,), (A,), f, pi, "ramified supersingular")


# -- the functors ------------------------------------------------------------------------

def scalar_action(D):
    """O acts through W_O(k): V: M_i -> M_{i+1} is onto for i = 0, .., f-2."""
    return all(coker_length(D.ring, D.V[i]) == 0 for i in range(D.f - 1))


def chain_matrices(D):
    """C_i with V^i(x) = C_i sigma^{-i}(x) for x in M_0; C_0 = 1."""
    return [D.V_power(0, i).matrix for i in range(D.f)]


def H_functor(D):
    """H(D) = M_0.  Returns (H, ambiguity) where ambiguity is the p-length of ker V_{f-1}
    when F_pi had to be solved for (it is 0 when the solution is forced)."""
    if not scalar_action(D):
        raise ValueError("O does not act through W_O(k) on this module")
    R, f = D.ring, D.f
    pi = pi_element(R)
    Vpi = D.V_power(0, f)
    h = D.rank
    # G : M_0 -> M_{f-1} with V_{f-1} G = pi
    unit = p_over_pi(R)
    if R.is_unit(unit):
        G = SemilinearMap(R, mat_scale(R, R.unit_inverse(unit), D.F[f - 1]), 1)
        ambiguity = 0
    else:
        Y = solve_matrix(R, D.V[f - 1], scalar(R, h, pi))
        if Y is None:
            raise ArithmeticError("pi M_0 is not contained in V M_{f-1}")
        G = SemilinearMap(R, mat_sigma(R, Y, 1), 1)
        ambiguity = ker_length(R, D.V[f - 1])
    Fpi = G
    for i in range(f - 2, -1, -1):
        Fpi = SemilinearMap(R, inverse(R, D.V[i]), 1).compose(Fpi)
    H = RamifiedDieudonneModule(R, (Fpi.matrix,), (Vpi.matrix,), f, pi, f"H({D.name})")
    return H, ambiguity


def D_functor(H):
    """D(H)_i = W (x)_{sigma^{-i}} H, coordinates in the basis 1 (x) e_k."""
    R, f, h = H.ring, H.f, H.rank
    Id = identity(R, h)
    c = default_scalar(R)
    V = tuple([Id] * (f - 1) + [H.V[0]])
    last = mat_sigma(R, mat_scale(R, p_over_pi(R), H.F[0]), -(f - 1))
    F = tuple([scalar(R, h, c)] * (f - 1) + [last])
    return DieudonneModule(R, F, V, c, f"D({H.name})")


def equivalence_roundtrip(D=None, H=None):
    """H(D(H)) = H exactly; D(H(D)) is isomorphic to D through psi_i = C_i."""
    out = {}
    if H is not None:
        H2, amb = H_functor(D_functor(H))
        R = H.ring
        out["HD_V_exact"] = H2.V == H.V
        out["HD_F_exact"] = H2.F == H.F
        # F_pi is only determined modulo ker V_pi at finite level
        diff = mat_sigma(R, mat_sub(R, H2.F[0], H.F[0]), -H.f)
        out["HD_F_mod_ker"] = is_zero_mat(R, mat_mul(R, H.V[0], diff))
        out["HD_ok"] = out["HD_V_exact"] and (out["HD_F_exact"] or (amb and out["HD_F_mod_ker"]))
    if D is not None:
        R, f = D.ring, D.f
        H0, amb = H_functor(D)
        D2 = D_functor(H0)
        C = chain_matrices(D)
        v_ok = f_ok = f_mod = True
        for i in range(f):
            nxt = C[(i + 1) % f] if i + 1 < f else identity(R, D.rank)
            # psi_{i+1} V'_i = V_i psi_i
            if mat_mul(R, nxt, D2.V[i]) != mat_mul(R, D.V[i], mat_sigma(R, C[i], -1)):
                v_ok = False
            # psi_i F'_i = F_i psi_{i+1}
            lhs = mat_mul(R, C[i], D2.F[i])
            rhs = mat_mul(R, D.F[i], mat_sigma(R, nxt, 1))
            if lhs != rhs:
                f_ok = False
                # compare after V_i, which is how F is pinned down by FV = VF = p
                if not is_zero_mat(R, mat_mul(R, D.V[i], mat_sigma(R, mat_sub(R, lhs, rhs), -1))):
                    f_mod = False
        out.update({"DH_V": v_ok, "DH_F_exact": f_ok, "DH_F_mod_ker": f_mod,
                    "DH_ambiguity": amb, "DH_ok": v_ok and (f_ok or (amb and f_mod))})
    out["ok"] = all(out[k] for k in ("HD_ok", "DH_ok") if k in out)
    return out


# -- trace -------------------------------------------------------------------------------

def trace_map(D, x):
    """Tr(x_0 + V x_1 + .. + V^{f-1} x_{f-1}) = x_0 + .. + x_{f-1}; x is a tuple of components."""
    R = D.ring
    C = chain_matrices(D)
    out = [R.zero] * D.rank
    for j, xj in enumerate(x):
        a = vec_sigma(R, mat_vec(R, inverse(R, C[j]), xj), j)
        out = [R.add(u, v) for u, v in zip(out, a)]
    return tuple(out)


def decompose(D, a):
    """The components of a_0 + V a_1 + .. for a list of elements of M_0."""
    return tuple(D.V_power(0, j).apply(aj) for j, aj in enumerate(a))


# -- chi and Xi ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentMap:
    """A W (x) O-multilinear map between modules with f components: one tensor per component."""

    sources: tuple
    target: DieudonneModule
    tensors: tuple          # tensors[i][idx] is the image in M_{0,i} of basis vectors of M_{k,i}

    def component(self, i):
        return MultilinearMap(self.sources, self.target, self.tensors[i])

    def __call__(self, i, *vectors):
        return self.component(i)(*vectors)


def _twist_tensor(R, tensor, t):
    return {idx: vec_sigma(R, v, t) for idx, v in tensor.items()}


def chi(phi, sources, target):
    """chi(phi)(V^a y_1, .., V^a y_r) = V^a phi(y_1, .., y_r) on the component a."""
    R, f = target.ring, target.f
    Cs = [chain_matrices(D) for D in sources]
    C0 = chain_matrices(target)
    tensors = []
    for i in range(f):
        inv = [inverse(R, C[i]) for C in Cs]
        twisted = MultilinearMap(phi.sources, phi.target, _twist_tensor(R, phi.tensor, -i))
        cols = [[tuple(row[k] for row in M) for k in range(len(M))] for M in inv]
        tensor = {}
        for idx in itertools.product(*[range(D.rank) for D in sources]):
            val = twisted(*[cols[s][k] for s, k in enumerate(idx)])
            tensor[idx] = mat_vec(R, C0[i], val)
        tensors.append(tensor)
    return ComponentMap(tuple(sources), target, tuple(tensors))


def xi(psi, h_sources, h_target):
    """Restriction to the first components."""
    return MultilinearMap(tuple(h_sources), h_target, dict(psi.tensors[0]))


def component_defects(psi, conditions=("V", "F")):
    """V: psi_{i+1}(V x..) = V psi_i(x..).  F: psi_i(.., F x_k, ..) = F psi_{i+1}(V x.., x_k, .., V x..)."""
    R, f = psi.target.ring, psi.target.f
    units = [_units(D) for D in psi.sources]
    out = []
    for i in range(f):
        j = (i + 1) % f
        for ms in itertools.product(*units):
            if "V" in conditions:
                lhs = psi(j, *[D.apply_V(i, x) for D, x in zip(psi.sources, ms)])
                rhs = psi.target.apply_V(i, psi(i, *ms))
                out.extend(R.sub(a, b) for a, b in zip(lhs, rhs))
            if "F" in conditions:
                for k in range(len(ms)):
                    # slot k lives in M_{i+1}, the others in M_i
                    a = [D.apply_F(i, x) if s == k else x for s, (D, x) in enumerate(zip(psi.sources, ms))]
                    b = [x if s == k else D.apply_V(i, x) for s, (D, x) in enumerate(zip(psi.sources, ms))]
                    lhs = psi(i, *a)
                    rhs = psi.target.apply_F(i, psi(j, *b))
                    out.extend(R.sub(u, v) for u, v in zip(lhs, rhs))
    return out


def _flatten(elts):
    out = []
    for e in elts:
        out.extend(e)
    return out


def solve_component_space(sources, target, conditions=("V", "F")):
    """All W (x) O-multilinear maps satisfying the conditions: (log_p size, generators)."""
    R, f = target.ring, target.f
    idxs = list(itertools.product(*[range(D.rank) for D in sources]))
    basis = _unknown_basis(R)
    unknowns = [(i, idx, c, b) for i in range(f) for idx in idxs
                for c in range(target.rank) for b in range(len(basis))]

    def build(vec):
        ts = [{idx: [R.zero] * target.rank for idx in idxs} for _ in range(f)]
        for (i, idx, c, b), x in zip(unknowns, vec):
            if x:
                ts[i][idx][c] = R.add(ts[i][idx][c], R.scale(basis[b], x))
        return ComponentMap(tuple(sources), target,
                            tuple({k: tuple(v) for k, v in t.items()} for t in ts))

    return linear_kernel(R, len(unknowns), build,
                         lambda psi: _flatten(component_defects(psi, conditions)))


def solve_ramified_space(sources, target, conditions=("V", "F")):
    L = solve_L_space(tuple(sources), target, "all", conditions)
    return L.log_p_size, list(L.generators)


def chi_xi_report(sources, target, conditions=("V", "F")):
    """Xi chi = id on generators of the W_O(k) side, chi Xi = id on generators of the other,
    and the two solution groups have the same size."""
    hs = [H_functor(D)[0] for D in sources]
    h0 = H_functor(target)[0]
    R = target.ring
    log_d, gens_d = solve_component_space(sources, target, conditions)
    log_h, gens_h = solve_ramified_space(hs, h0, conditions)
    xc = cx = lands_d = lands_h = 0
    for phi, _ in gens_h:
        psi = chi(phi, sources, target)
        lands_d += all(R.is_zero(x) for x in component_defects(psi, conditions))
        xc += xi(psi, hs, h0).tensor == phi.tensor
    for psi, _ in gens_d:
        phi = xi(psi, hs, h0)
        back = chi(phi, sources, target)
        cx += back.tensors == psi.tensors
        defects = list(v_defects(phi, basis_tuples(phi)))
        if "F" in conditions:
            defects += f_defects(phi, basis_tuples(phi))
        lands_h += all(R.is_zero(x) for d in defects for x in d)
    return {"log_size_D": log_d, "log_size_H": log_h,
            "xi_chi": xc == len(gens_h), "chi_xi": cx == len(gens_d),
            "chi_lands": lands_d == len(gens_h), "xi_lands": lands_h == len(gens_d),
            "generators": (len(gens_h), len(gens_d)),
            "ok": log_d == log_h and xc == len(gens_h) and cx == len(gens_d)
            and lands_d == len(gens_h) and lands_h == len(gens_d)}


# -- exterior powers -------------------------------------------------------------------

def exterior_compatibility(D, r):
    """H(wedge^r D) against wedge^r H(D): V_pi is the compound matrix and F_pi V_pi = pi."""
    R = D.ring
    H, _ = H_functor(D)
    W = exterior_power(D, r).as_module
    HW, amb = H_functor(W)
    v_ok = HW.V[0] == compound(R, H.V[0], r)
    return {"rank": HW.rank, "V_compound": v_ok, "valid": validate_ramified(HW)["valid"],
            "ambiguity": amb, "ok": v_ok and validate_ramified(HW)["valid"]}
