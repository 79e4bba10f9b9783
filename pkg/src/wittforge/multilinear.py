"""Multilinear maps between Dieudonne modules, delta, zeta_d and the telescoping sums."""

import itertools
import random
from dataclasses import dataclass

from .dieudonne import DieudonneModule, exterior_power, verify_diagrams
from .rings import GaloisRing, reduce_element
from .semilinear import kernel_generators, ker_length, mat_vec, transpose, wedge_vectors

# -- tensors -------------------------------------------------------------------------


@dataclass(frozen=True)
class MultilinearMap:
    """tensor[idx] is the image in D_0 of (e_{idx_1}, .., e_{idx_r})."""

    sources: tuple
    target: DieudonneModule
    tensor: dict

    @property
    def ring(self):
        return self.target.ring

    def __call__(self, *vectors):
        R = self.ring
        out = [R.zero] * self.target.rank
        for idx, val in self.tensor.items():
            c = R.one
            for v, i in zip(vectors, idx):
                c = R.mul(c, v[i])
                if R.is_zero(c):
                    break
            if not R.is_zero(c):
                out = [R.add(o, R.mul(c, x)) for o, x in zip(out, val)]
        return tuple(out)


def zero_map(sources, target):
    R = target.ring
    z = tuple(R.zero for _ in range(target.rank))
    return MultilinearMap(tuple(sources), target,
                          {idx: z for idx in _index_tuples(sources)})


def _index_tuples(sources):
    return itertools.product(*[range(D.rank) for D in sources])


def _units(D):
    R = D.ring
    return [tuple(R.one if i == k else R.zero for i in range(D.rank)) for k in range(D.rank)]


def _check_ring(m):
    if any(D.ring != m.ring for D in m.sources):
        raise ValueError("ring mismatch")
    if any(len(D.V) != 1 for D in m.sources + (m.target,)):
        raise ValueError("multilinear maps are supported for f = 1")


def v_defects(m, tuples):
    """l(Vm_1, .., Vm_r) - V l(m_1, .., m_r) on the given tuples."""
    D0, R = m.target, m.ring
    out = []
    for ms in tuples:
        lhs = m(*[D.apply_V(0, x) for D, x in zip(m.sources, ms)])
        rhs = D0.apply_V(0, m(*ms))
        out.append(tuple(R.sub(a, b) for a, b in zip(lhs, rhs)))
    return out


def f_defects(m, tuples):
    """l(m_1, .., F m_i, .., m_r) - F l(V m_1, .., m_i, .., V m_r) for each slot i."""
    D0, R = m.target, m.ring
    out = []
    for ms in tuples:
        for i in range(len(ms)):
            a = [D.apply_F(0, x) if k == i else x for k, (D, x) in enumerate(zip(m.sources, ms))]
            b = [x if k == i else D.apply_V(0, x) for k, (D, x) in enumerate(zip(m.sources, ms))]
            lhs = m(*a)
            rhs = D0.apply_F(0, m(*b))
            out.append(tuple(R.sub(u, v) for u, v in zip(lhs, rhs)))
    return out


def basis_tuples(m):
    units = [_units(D) for D in m.sources]
    return list(itertools.product(*units))


def random_tuples(m, k, seed=0):
    rng = random.Random(seed)
    R = m.ring
    return [tuple(tuple(R.random(rng) for _ in range(D.rank)) for D in m.sources)
            for _ in range(k)]


def check_V_condition(m):
    _check_ring(m)
    R = m.ring
    return all(all(R.is_zero(x) for x in d) for d in v_defects(m, basis_tuples(m)))


def check_F_conditions(m, samples=100, seed=0):
    _check_ring(m)
    R = m.ring
    tuples = basis_tuples(m) + random_tuples(m, samples, seed)
    return all(all(R.is_zero(x) for x in d) for d in f_defects(m, tuples))


def is_alternating(m):
    R = m.ring
    for idx, val in m.tensor.items():
        if len(set(idx)) < len(idx) and any(not R.is_zero(x) for x in val):
            return False
    return is_antisymmetric(m)


def is_antisymmetric(m):
    R = m.ring
    for idx, val in m.tensor.items():
        for a, b in itertools.combinations(range(len(idx)), 2):
            j = list(idx)
            j[a], j[b] = j[b], j[a]
            other = m.tensor[tuple(j)]
            if any(not R.is_zero(R.add(x, y)) for x, y in zip(val, other)):
                return False
    return True


def is_symmetric(m):
    for idx, val in m.tensor.items():
        for perm in itertools.permutations(idx):
            if m.tensor[perm] != val:
                return False
    return True


# -- linearisation over Z/p^n ------------------------------------------------------------

def _scalar_ring(R):
    if not isinstance(R, GaloisRing):
        raise ValueError("solution spaces are computed over W_n(F_q) coefficients")
    return GaloisRing(R.p, 1, R.n)


def _unknown_basis(R):
    """Z/p^n-basis of R: the powers of the generator."""
    return [tuple(1 if i == k else 0 for i in range(R.s)) for k in range(R.s)]


@dataclass(frozen=True)
class LSpace:
    flavor: str
    log_p_size: int          # |L| = p^log_p_size
    generators: tuple        # (MultilinearMap, annihilator valuation)
    size: int


def _constraint_system(sources, target, flavor, conditions):
    R = target.ring
    idxs = list(_index_tuples(sources))
    basis = _unknown_basis(R)
    h0 = target.rank
    unknowns = [(idx, c, b) for idx in idxs for c in range(h0) for b in range(len(basis))]

    def build(vec):
        tensor = {idx: [R.zero] * h0 for idx in idxs}
        for (idx, c, b), x in zip(unknowns, vec):
            if x:
                tensor[idx][c] = R.add(tensor[idx][c], R.scale(basis[b], x))
        return MultilinearMap(tuple(sources), target, {k: tuple(v) for k, v in tensor.items()})

    def constraints(m):
        out = []
        tuples = basis_tuples(m)
        if "V" in conditions:
            for d in v_defects(m, tuples):
                out.extend(d)
        if "F" in conditions:
            for d in f_defects(m, tuples):
                out.extend(d)
        if flavor in ("alt", "antisym"):
            for idx in idxs:
                if flavor == "alt" and len(set(idx)) < len(idx):
                    out.extend(m.tensor[idx])
                for a, b in itertools.combinations(range(len(idx)), 2):
                    j = list(idx)
                    j[a], j[b] = j[b], j[a]
                    out.extend(R.add(x, y) for x, y in zip(m.tensor[idx], m.tensor[tuple(j)]))
        elif flavor == "sym":
            for idx in idxs:
                for perm in itertools.permutations(idx):
                    out.extend(R.sub(x, y) for x, y in zip(m.tensor[idx], m.tensor[perm]))
        flat = []
        for e in out:
            flat.extend(e)
        return flat

    return unknowns, build, constraints


def linear_kernel(R, count, build, constraints):
    """Z/p^n-solutions of constraints(build(vec)) = 0 for integer vectors of length count.

    build is additive in vec and constraints is additive in its argument, so the
    system is read off from the unit vectors.  Returns (log_p size, [(object, v)]).
    """
    Z = _scalar_ring(R)
    cols = []
    for k in range(count):
        vec = [0] * count
        vec[k] = 1
        cols.append(constraints(build(vec)))
    if not cols or not cols[0]:
        return count * R.n, [(build([1 if i == k else 0 for i in range(count)]), R.n)
                             for k in range(count)]
    A = transpose(tuple(tuple((c % Z.mod,) for c in col) for col in cols))
    return ker_length(Z, A), [(build([x[0] for x in vec]), v) for vec, v in kernel_generators(Z, A)]


def solve_L_space(sources, target, flavor="all", conditions=("V", "F"), budget=4096):
    """The group L of multilinear maps (with flavor all/sym/alt) as a Z/p^n-module."""
    R = target.ring
    _scalar_ring(R)
    if any(D.ring != R for D in sources):
        raise ValueError("ring mismatch")
    n_unknowns = target.rank * R.s
    for D in sources:
        n_unknowns *= D.rank
    if n_unknowns * R.n > budget:
        raise OverflowError("solution space exceeds the budget")
    unknowns, build, constraints = _constraint_system(sources, target, flavor, conditions)
    log, gens = linear_kernel(R, len(unknowns), build, constraints)
    return LSpace(flavor, log, tuple(gens), R.p ** log)


def enumerate_L_space(sources, target, flavor="alt", conditions=("V", "F"), budget=10 ** 6):
    """Brute-force count of L (used as an independent oracle on tiny inputs)."""
    R = target.ring
    idxs = list(_index_tuples(sources))
    vecs = list(itertools.product(R.element_list, repeat=target.rank))
    if len(vecs) ** len(idxs) > budget:
        raise OverflowError("enumeration exceeds the budget")
    count = 0
    for vals in itertools.product(vecs, repeat=len(idxs)):
        m = MultilinearMap(tuple(sources), target, dict(zip(idxs, vals)))
        if flavor == "alt" and not is_alternating(m):
            continue
        if flavor == "sym" and not is_symmetric(m):
            continue
        if "V" in conditions and not all(all(R.is_zero(x) for x in d)
                                         for d in v_defects(m, basis_tuples(m))):
            continue
        if "F" in conditions and not all(all(R.is_zero(x) for x in d)
                                         for d in f_defects(m, basis_tuples(m))):
            continue
        count += 1
    return count


def hom_count(src, tgt):
    """|Hom(src, tgt)| for W-linear maps commuting with F and V, by enumeration."""
    R = tgt.ring
    vecs = list(itertools.product(R.element_list, repeat=tgt.rank))
    count = 0
    units = _units(src)
    for cols in itertools.product(vecs, repeat=src.rank):
        psi = transpose(cols)
        ok = True
        for e in units:
            pe = mat_vec(R, psi, e)
            if (mat_vec(R, psi, src.apply_V(0, e)) != tgt.apply_V(0, pe)
                    or mat_vec(R, psi, src.apply_F(0, e)) != tgt.apply_F(0, pe)):
                ok = False
                break
        count += ok
    return count


def lambda_map(D, j):
    """The alternating map D^j -> wedge^j D."""
    data = exterior_power(D, j)
    W = data.as_module
    R = D.ring
    units = _units(D)
    tensor = {idx: wedge_vectors(R, [units[i] for i in idx]) for idx in itertools.product(range(D.rank), repeat=j)}
    return MultilinearMap((D,) * j, W, tensor), data


def universal_property_counts(D, j, targets):
    """Rows (target name, |L_alt(D^j, N)|, |Hom(wedge^j D, N)|)."""
    lam, data = lambda_map(D, j)
    W = data.as_module
    rows = []
    for N in targets:
        alt = solve_L_space((D,) * j, N, "alt").size
        alt_enum = enumerate_L_space((D,) * j, N, "alt")
        hom = hom_count(W, N)
        rows.append({"target": N.name, "alt": alt, "alt_enumerated": alt_enum, "hom": hom,
                     "ok": alt == hom == alt_enum})
    return {"lambda_in_L_alt": check_V_condition(lam) and check_F_conditions(lam)
            and is_alternating(lam), "rows": rows,
            "ok": all(r["ok"] for r in rows)}


def f_condition_report(sources, target, lifted_sources=None, lifted_target=None):
    """Do V-only solutions satisfy the F-conditions, at the level itself and after lifting?

    The lifted modules live at a higher level and reduce to the given ones.
    """
    R = target.ring
    direct = solve_L_space(sources, target, "all", ("V",))
    both = solve_L_space(sources, target, "all", ("V", "F"))
    out = {"level": R.n, "v_only": direct.log_p_size, "v_and_f": both.log_p_size,
           "implied_at_level": direct.log_p_size == both.log_p_size}
    if lifted_target is not None:
        big = lifted_target
        lifted = solve_L_space(tuple(lifted_sources), big, "all", ("V",))
        fails = 0
        for m, _ in lifted.generators:
            red = MultilinearMap(tuple(sources), target,
                                 {k: tuple(reduce_element(big.ring, R, x) for x in v)
                                  for k, v in m.tensor.items()})
            if not check_F_conditions(red, samples=0):
                fails += 1
        out.update({"buffer": big.ring.n - R.n, "lifted_generators": len(lifted.generators),
                    "lifted_f_failures": fails})
    return out


# -- delta and the S_{i,r} partition --------------------------------------------------

def index_vectors(r, M):
    return [d for d in itertools.product(range(M), repeat=r) if min(d) == 0]


def delta(d, M=None):
    if not d or min(d) != 0 or any(x < 0 for x in d):
        raise ValueError("index vectors need non-negative entries with minimum 0")
    if M is not None and max(d) >= M:
        raise ValueError("entry exceeds the bound")
    top = max(d)
    return tuple(top - x for x in d)


def partition_index(d):
    """The i (1-based) with d in S_{i,r}: position of the first zero."""
    return d.index(0) + 1


def partition_sets(r, M):
    sets = {i: [] for i in range(1, r + 1)}
    for d in index_vectors(r, M):
        sets[partition_index(d)].append(d)
    return sets


def partition_report(r, M):
    vecs = index_vectors(r, M)
    sets = partition_sets(r, M)
    union = sorted(x for s in sets.values() for x in s)
    # S_{i,r} = [1,M-1]^{i-1} x {0} x [0,M-1]^{r-i}
    described = all(all(x >= 1 for x in d[: i - 1]) and d[i - 1] == 0
                    for i, s in sets.items() for d in s)
    images = [delta(d) for d in vecs]
    return {"count": len(vecs), "partition": union == sorted(vecs) and described,
            "involution": all(delta(delta(d)) == d for d in vecs),
            "bijection": sorted(images) == sorted(vecs)}


# -- zeta_d ----------------------------------------------------------------------------

def frobenius_power(W, x, k):
    for _ in range(k):
        x = W.sigma(x, 1)
    return x


def killed_by_frobenius(W, x, k):
    return W.is_zero(frobenius_power(W, x, k)) if hasattr(W, "is_zero") else frobenius_power(W, x, k) == W.zero


def zeta_d(W, xs, d, n):
    """Witt product of x_i, each killed by F^{n+d_i}; the product is killed by F^n."""
    if min(d) != 0:
        raise ValueError("index vector needs minimum 0")
    for x, di in zip(xs, d):
        if not killed_by_frobenius(W, x, n + di):
            raise ValueError("input not killed by the required Frobenius power")
    out = W.one
    for x in xs:
        out = W.mul(out, x)
    return out


# -- the telescoping identity -------------------------------------------------------

def uglysum_sides(A, alpha, phi, w0s, ys):
    """Both double sums; w_{i,j+1} = w_{i,j} + alpha y_{i,j} built from w_{i,0} and the y's."""
    r = len(w0s)
    n = len(ys[0])
    add = lambda u, v: tuple(A.add(a, b) for a, b in zip(u, v))
    scale = lambda c, u: tuple(A.mul(c, a) for a in u)
    ws = []
    for i in range(r):
        row = [tuple(w0s[i])]
        for j in range(n):
            row.append(add(row[-1], scale(alpha, ys[i][j])))
        ws.append(row)
    lhs = rhs = None
    for i in range(r):
        for j in range(n):
            a = [ws[k][j + 1] for k in range(i)] + [ys[i][j]] + [ws[k][j] for k in range(i + 1, r)]
            b = [ws[k][n] for k in range(i)] + [ys[i][j]] + [ws[k][0] for k in range(i + 1, r)]
            va, vb = phi(*a), phi(*b)
            lhs = va if lhs is None else add(lhs, va)
            rhs = vb if rhs is None else add(rhs, vb)
    return lhs, rhs


def uglysum_check(A, alpha, phi, w0s, ys):
    lhs, rhs = uglysum_sides(A, alpha, phi, w0s, ys)
    return lhs == rhs


def coordinate_product(A):
    """phi(m_1, .., m_r) = prod of first coordinates, as a map into A^1."""
    def phi(*ms):
        out = A.one
        for m in ms:
            out = A.mul(out, m[0])
        return (out,)
    return phi


def random_multilinear(A, dims, dim0, rng):
    """A random multilinear map A^{d_1} x .. -> A^{d_0} given by a structure tensor."""
    tensor = {idx: tuple(A.random(rng) for _ in range(dim0))
              for idx in itertools.product(*[range(k) for k in dims])}

    def phi(*ms):
        out = [A.zero] * dim0
        for idx, val in tensor.items():
            c = A.one
            for m, i in zip(ms, idx):
                c = A.mul(c, m[i])
            out = [A.add(o, A.mul(c, v)) for o, v in zip(out, val)]
        return tuple(out)
    return phi


def random_uglysum_instance(A, r, n, dims, rng):
    w0s = [tuple(A.random(rng) for _ in range(dims[i])) for i in range(r)]
    ys = [[tuple(A.random(rng) for _ in range(dims[i])) for _ in range(n)] for i in range(r)]
    return w0s, ys


# -- the weakalt relations -------------------------------------------------------------

def weakalt_relation_check(D, j, samples=50, seed=0):
    """theta(F^i x) = Phi^i x, theta(V^i x) = Upsilon^i x kills rho_1 and rho_2."""
    R = D.ring
    if R.p == 2:
        raise ValueError("the weakalt description needs p > 2")
    data = exterior_power(D, j)
    basis = verify_diagrams(D, data, exhaustive=False, trials=samples, seed=seed)
    units = _units(D)
    tuples = list(itertools.product(units, repeat=j))
    fails = {"rho1": 0, "rho2": 0}
    from .semilinear import SemilinearMap
    Phi = SemilinearMap(R, data.Phi[0], 1)
    Ups = SemilinearMap(R, data.Upsilon[0], -1)
    for ds in tuples:
        if Ups.apply(wedge_vectors(R, list(ds))) != wedge_vectors(R, [D.apply_V(0, d) for d in ds]):
            fails["rho1"] += 1
        lhs = Phi.apply(wedge_vectors(R, [ds[0]] + [D.apply_V(0, d) for d in ds[1:]]))
        if lhs != wedge_vectors(R, [D.apply_F(0, ds[0])] + list(ds[1:])):
            fails["rho2"] += 1
    # theta(1 (x) x) = x and Phi Upsilon = p
    size = len(data.Phi[0])
    pv = R.from_int(R.p)
    pu = all(Phi.apply(Ups.apply(e)) == tuple(R.mul(pv, x) for x in e)
             for e in [tuple(R.one if i == k else R.zero for i in range(size)) for k in range(size)])
    return {"basis_tuples": len(tuples), "rho1_failures": fails["rho1"],
            "rho2_failures": fails["rho2"], "random": basis, "phi_upsilon_p": pu,
            "ok": fails["rho1"] == 0 and fails["rho2"] == 0 and basis["ok"] and pu}
