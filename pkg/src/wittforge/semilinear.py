"""Matrices and sigma-semilinear maps over finite chain rings.

Matrices are tuples of row tuples of ring elements.  A semilinear map with
twist t acts by v -> A sigma^t(v).
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb


def zeros(R, r, c):
    return tuple((R.zero,) * c for _ in range(r))


def identity(R, n):
    return tuple(tuple(R.one if i == j else R.zero for j in range(n)) for i in range(n))


def scalar(R, n, c):
    return tuple(tuple(c if i == j else R.zero for j in range(n)) for i in range(n))


def diag(R, entries):
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else R.zero for j in range(n)) for i in range(n))


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def transpose(A):
    return tuple(zip(*A)) if A else ()


def mat_add(R, A, B):
    return tuple(tuple(R.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(R, A, B):
    return tuple(tuple(R.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_neg(R, A):
    return tuple(tuple(R.neg(x) for x in row) for row in A)


def mat_scale(R, c, A):
    return tuple(tuple(R.mul(c, x) for x in row) for row in A)


def mat_mul(R, A, B):
    if not A or not B:
        return zeros(R, len(A), len(B[0]) if B else 0)
    if len(A[0]) != len(B):
        raise ValueError(f"shape mismatch {shape(A)} x {shape(B)}")
    cols = transpose(B)
    z = R.zero
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = z
            for x, y in zip(row, col):
                if x != z and y != z:
                    acc = R.add(acc, R.mul(x, y))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_vec(R, A, v):
    z = R.zero
    out = []
    for row in A:
        acc = z
        for x, y in zip(row, v):
            if x != z and y != z:
                acc = R.add(acc, R.mul(x, y))
        out.append(acc)
    return tuple(out)


def mat_sigma(R, A, t):
    if t == 0:
        return A
    return tuple(tuple(R.sigma(x, t) for x in row) for row in A)


def vec_sigma(R, v, t):
    if t == 0:
        return tuple(v)
    return tuple(R.sigma(x, t) for x in v)


def is_zero_mat(R, A):
    return all(R.is_zero(x) for row in A for x in row)


def submatrix(A, rows, cols):
    return tuple(tuple(A[i][j] for j in cols) for i in rows)


def block(R, blocks):
    """Assemble a matrix from a 2d list of blocks (None means zero)."""
    heights = [next(shape(b)[0] for b in row if b is not None) for row in blocks]
    widths = [next(shape(blocks[i][j])[1] for i in range(len(blocks)) if blocks[i][j] is not None)
              for j in range(len(blocks[0]))]
    out = []
    for bi, row in enumerate(blocks):
        for r in range(heights[bi]):
            new = []
            for bj, b in enumerate(row):
                new.extend(b[r] if b is not None else (R.zero,) * widths[bj])
            out.append(tuple(new))
    return tuple(out)


def direct_sum(R, A, B):
    return block(R, [[A, None], [None, B]]) if A and B else (A or B)


def kron(R, A, B):
    ra, ca = shape(A)
    rb, cb = shape(B)
    return tuple(tuple(R.mul(A[i // rb][j // cb], B[i % rb][j % cb]) for j in range(ca * cb))
                 for i in range(ra * rb))


# -- determinants, inverses, exterior powers ---------------------------------

def det(R, A):
    n = len(A)
    if n == 0:
        return R.one
    if getattr(R, "is_chain", False):
        return _det_chain(R, A)
    return _det_laplace(R, A)


def _det_chain(R, A):
    M = [list(row) for row in A]
    n = len(M)
    sign = R.one
    acc = R.one
    for k in range(n):
        best, bv = None, None
        for i in range(k, n):
            v = R.valuation(M[i][k])
            if bv is None or v < bv:
                best, bv = i, v
        if bv >= R.n:
            return R.zero
        if best != k:
            M[k], M[best] = M[best], M[k]
            sign = R.neg(sign)
        piv = M[k][k]
        acc = R.mul(acc, piv)
        for i in range(k + 1, n):
            if not R.is_zero(M[i][k]):
                c = R.divide(M[i][k], piv)
                M[i] = [R.sub(x, R.mul(c, y)) for x, y in zip(M[i], M[k])]
    return R.mul(sign, acc)


def _det_laplace(R, A):
    n = len(A)

    @lru_cache(maxsize=None)
    def sub(cols):
        # determinant of rows n-len(cols).. and the given columns
        if not cols:
            return R.one
        r = n - len(cols)
        acc = R.zero
        for idx, c in enumerate(cols):
            x = A[r][c]
            if R.is_zero(x):
                continue
            t = R.mul(x, sub(cols[:idx] + cols[idx + 1:]))
            acc = R.add(acc, t) if idx % 2 == 0 else R.sub(acc, t)
        return acc

    return sub(tuple(range(n)))


def wedge_basis(h, r):
    """Strictly increasing index tuples in lexicographic order."""
    return list(itertools.combinations(range(h), r))


def compound(R, A, r, rows_order=None, cols_order=None):
    """Matrix of r x r minors, indexed by the given wedge bases (lex by default)."""
    h_r, h_c = shape(A)
    rb = rows_order or wedge_basis(h_r, r)
    cb = cols_order or wedge_basis(h_c, r)
    return tuple(tuple(det(R, submatrix(A, I, J)) for J in cb) for I in rb)


def inverse(R, A):
    """Inverse of a square matrix with unit determinant over a local ring."""
    n = len(A)
    M = [list(row) + [R.one if i == j else R.zero for j in range(n)] for i, row in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if R.is_unit(M[i][k])), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible")
        M[k], M[piv] = M[piv], M[k]
        inv = R.unit_inverse(M[k][k])
        M[k] = [R.mul(inv, x) for x in M[k]]
        for i in range(n):
            if i != k and not R.is_zero(M[i][k]):
                c = M[i][k]
                M[i] = [R.sub(x, R.mul(c, y)) for x, y in zip(M[i], M[k])]
    return tuple(tuple(row[n:]) for row in M)


def is_invertible(R, A):
    return R.is_unit(det(R, A))


# -- Smith form over chain rings -----------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """U A W = D with D diagonal, entries u^{v_i}; vals saturate at n."""

    U: tuple
    D: tuple
    W: tuple
    vals: tuple


def smith(R, A):
    m, n = shape(A)
    M = [list(row) for row in A]
    U = [list(row) for row in identity(R, m)]
    Wt = [list(row) for row in identity(R, n)]      # rows of Wt are columns of W
    vals = []
    for k in range(min(m, n)):
        best, bv = None, None
        for i in range(k, m):
            for j in range(k, n):
                v = R.valuation(M[i][j])
                if bv is None or v < bv:
                    best, bv = (i, j), v
        if bv >= R.n:
            vals.extend([R.n] * (min(m, n) - k))
            break
        i, j = best
        M[k], M[i] = M[i], M[k]
        U[k], U[i] = U[i], U[k]
        if j != k:
            for row in M:
                row[k], row[j] = row[j], row[k]
            Wt[k], Wt[j] = Wt[j], Wt[k]
        piv = M[k][k]
        # normalize the pivot to u^v
        uv = R.pow(R.uniformizer, bv) if bv else R.one
        unit = R.divide(piv, uv) if bv else piv
        inv = R.unit_inverse(unit)
        M[k] = [R.mul(inv, x) for x in M[k]]
        U[k] = [R.mul(inv, x) for x in U[k]]
        piv = M[k][k]
        for i2 in range(k + 1, m):
            if not R.is_zero(M[i2][k]):
                c = R.divide(M[i2][k], piv)
                M[i2] = [R.sub(x, R.mul(c, y)) for x, y in zip(M[i2], M[k])]
                U[i2] = [R.sub(x, R.mul(c, y)) for x, y in zip(U[i2], U[k])]
        for j2 in range(k + 1, n):
            if not R.is_zero(M[k][j2]):
                c = R.divide(M[k][j2], piv)
                for row in M:
                    row[j2] = R.sub(row[j2], R.mul(c, row[k]))
                Wt[j2] = [R.sub(x, R.mul(c, y)) for x, y in zip(Wt[j2], Wt[k])]
        vals.append(bv)
    D = tuple(tuple(row) for row in M)
    return SmithForm(tuple(tuple(r) for r in U), D, transpose(tuple(tuple(r) for r in Wt)),
                     tuple(vals))


def elementary_divisors(R, A):
    return smith(R, A).vals


def coker_length(R, A):
    m, n = shape(A)
    vals = smith(R, A).vals if m and n else ()
    return sum(min(v, R.n) for v in vals) + R.n * (m - len(vals))


def ker_length(R, A):
    m, n = shape(A)
    vals = smith(R, A).vals if m and n else ()
    return sum(min(v, R.n) for v in vals) + R.n * (n - len(vals))


def kernel_generators(R, A):
    """Generators (with annihilator valuations) of ker A as a module."""
    m, n = shape(A)
    sf = smith(R, A)
    gens = []
    for i in range(n):
        v = min(sf.vals[i], R.n) if i < len(sf.vals) else R.n
        if v == 0:
            continue
        k = R.n - v
        col = tuple(row[i] for row in sf.W)
        scale = R.pow(R.uniformizer, k) if k else R.one
        gens.append((tuple(R.mul(scale, x) for x in col), v))
    return gens


def solve(R, A, b):
    """Some x with A x = b, or None."""
    m, n = shape(A)
    sf = smith(R, A)
    c = mat_vec(R, sf.U, b)
    y = [R.zero] * n
    for i in range(m):
        if i < len(sf.vals) and sf.vals[i] < R.n:
            v = sf.vals[i]
            if R.valuation(c[i]) < v:
                return None
            y[i] = R.divide(c[i], sf.D[i][i])
        elif not R.is_zero(c[i]):
            return None
    return mat_vec(R, sf.W, y)


def solve_matrix(R, A, B):
    """Some X with A X = B (column by column), or None."""
    cols = []
    for col in transpose(B):
        x = solve(R, A, col)
        if x is None:
            return None
        cols.append(x)
    return transpose(tuple(cols))


def twisted_power(R, A, t, k):
    """Matrix of (A, t)^k, i.e. A sigma^t(A) ... sigma^{(k-1)t}(A)."""
    out = identity(R, len(A))
    for i in range(k):
        out = mat_mul(R, out, mat_sigma(R, A, i * t))
    return out


def twisted_nilpotency(R, A, t, bound):
    """True iff the semilinear map (A, t) composed `bound` times is zero."""
    M = identity(R, len(A))
    for i in range(bound):
        M = mat_mul(R, M, mat_sigma(R, A, i * t))
        if is_zero_mat(R, M):
            return True
    return False


@dataclass(frozen=True)
class SemilinearMap:
    """v -> matrix . sigma^twist(v)."""

    ring: object
    matrix: tuple
    twist: int = 0

    @property
    def rows(self):
        return len(self.matrix)

    @property
    def cols(self):
        return len(self.matrix[0]) if self.matrix else 0

    def apply(self, v):
        if len(v) != self.cols:
            raise ValueError("vector length does not match")
        return mat_vec(self.ring, self.matrix, vec_sigma(self.ring, v, self.twist))

    def compose(self, other):
        """self after other."""
        if self.ring != other.ring or self.cols != other.rows:
            raise ValueError("incompatible semilinear maps")
        R = self.ring
        return SemilinearMap(R, mat_mul(R, self.matrix, mat_sigma(R, other.matrix, self.twist)),
                             self.twist + other.twist)

    def __matmul__(self, other):
        return self.compose(other)

    def power(self, k):
        out = SemilinearMap(self.ring, identity(self.ring, self.rows), 0)
        for _ in range(k):
            out = self.compose(out)
        return out

    def exterior_power(self, r):
        return exterior_power_map(self, r)

    def det(self):
        return det(self.ring, self.matrix)

    def __eq__(self, other):
        return (isinstance(other, SemilinearMap) and self.ring == other.ring
                and self.twist == other.twist and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.matrix, self.twist))


def compose(f, g):
    return f.compose(g)


def apply(f, v):
    return f.apply(v)


def exterior_power_map(f, r):
    h = f.rows
    if f.rows != f.cols:
        raise ValueError("exterior power needs a square map")
    if not 1 <= r <= h:
        raise ValueError(f"r must lie in 1..{h}")
    return SemilinearMap(f.ring, compound(f.ring, f.matrix, r), f.twist)


def wedge_vectors(R, vectors, basis=None):
    """Coordinates of v_1 ^ ... ^ v_r in the wedge basis."""
    h = len(vectors[0])
    r = len(vectors)
    basis = basis or wedge_basis(h, r)
    cols = transpose(tuple(vectors))      # h x r
    return tuple(det(R, submatrix(cols, I, range(r))) for I in basis)


def binomial(n, k):
    return comb(n, k) if 0 <= k <= n else 0
