import itertools
import random

import pytest

from wittforge.rings import FiniteField, GaloisRing, TruncPolyRing
from wittforge.semilinear import (SemilinearMap, coker_length, compound, det, diag, direct_sum,
                                  elementary_divisors, exterior_power_map, identity, inverse,
                                  ker_length, mat_mul, mat_vec, smith, solve, twisted_nilpotency,
                                  wedge_vectors)


def _rand(R, h, rng):
    return tuple(tuple(R.random(rng) for _ in range(h)) for _ in range(h))


def _image_size(R, A):
    cols = len(A[0])
    return len({mat_vec(R, A, v) for v in itertools.product(R.element_list, repeat=cols)})


def test_identity_composition():
    R = GaloisRing(3, 2, 2)
    rng = random.Random(0)
    f = SemilinearMap(R, _rand(R, 2, rng), 1)
    I = SemilinearMap(R, identity(R, 2), 0)
    assert f.compose(I) == f and I.compose(f) == f


def test_linear_composition_is_matrix_product():
    R = GaloisRing(2, 1, 3)
    rng = random.Random(1)
    A, B = _rand(R, 3, rng), _rand(R, 3, rng)
    assert SemilinearMap(R, A, 0).compose(SemilinearMap(R, B, 0)).matrix == mat_mul(R, A, B)


def test_composition_applies_in_order():
    R = GaloisRing(3, 2, 2)
    rng = random.Random(2)
    f, g = SemilinearMap(R, _rand(R, 2, rng), 1), SemilinearMap(R, _rand(R, 2, rng), -1)
    for _ in range(20):
        v = tuple(R.random(rng) for _ in range(2))
        assert f.compose(g).apply(v) == f.apply(g.apply(v))


def test_exterior_power_extremes():
    R = GaloisRing(3, 1, 2)
    rng = random.Random(3)
    A = _rand(R, 3, rng)
    f = SemilinearMap(R, A, 1)
    assert exterior_power_map(f, 1) == f
    assert exterior_power_map(f, 3).matrix == ((det(R, A),),)
    with pytest.raises(ValueError):
        exterior_power_map(f, 4)


def test_exterior_power_is_functorial():
    R = GaloisRing(2, 2, 2)
    rng = random.Random(4)
    f, g = SemilinearMap(R, _rand(R, 3, rng), 1), SemilinearMap(R, _rand(R, 3, rng), -1)
    assert exterior_power_map(f.compose(g), 2) == \
        exterior_power_map(f, 2).compose(exterior_power_map(g, 2))


def test_wedge_of_images():
    R = GaloisRing(3, 1, 2)
    rng = random.Random(5)
    A = _rand(R, 3, rng)
    vs = [tuple(R.random(rng) for _ in range(3)) for _ in range(2)]
    lhs = mat_vec(R, compound(R, A, 2), wedge_vectors(R, vs))
    assert lhs == wedge_vectors(R, [mat_vec(R, A, v) for v in vs])


def test_cokernel_of_diagonal_in_equal_characteristic():
    R = TruncPolyRing(FiniteField(2), 3, "u")
    u = R.uniformizer
    A = diag(R, [u, R.mul(u, u)])
    assert coker_length(R, A) == 3
    assert elementary_divisors(R, A) == (1, 2)


def test_smith_against_enumeration():
    R = GaloisRing(3, 1, 2)
    rng = random.Random(6)
    for _ in range(25):
        A = _rand(R, 2, rng)
        total = len(R.element_list) ** 2
        assert 3 ** coker_length(R, A) * _image_size(R, A) == total
        assert ker_length(R, A) == coker_length(R, A)


def test_smith_factorization():
    R = GaloisRing(2, 2, 3)
    rng = random.Random(7)
    for _ in range(10):
        A = _rand(R, 3, rng)
        sf = smith(R, A)
        assert mat_mul(R, mat_mul(R, sf.U, A), sf.W) == sf.D


def test_cokernel_of_direct_sum_is_valuation_of_determinant():
    R = GaloisRing(2, 2, 3)
    rng = random.Random(8)
    for _ in range(20):
        A, B = _rand(R, 2, rng), _rand(R, 2, rng)
        d = R.mul(det(R, A), det(R, B))
        if d != R.zero:
            assert coker_length(R, direct_sum(R, A, B)) == R.valuation(d)


def test_compound_determinant_identity():
    # det of the r-th compound is det^C(h-1, r-1)
    R = GaloisRing(3, 1, 3)
    rng = random.Random(9)
    A = _rand(R, 3, rng)
    assert det(R, compound(R, A, 2)) == R.pow(det(R, A), 2)


def test_inverse_and_solve():
    R = GaloisRing(3, 2, 2)
    rng = random.Random(10)
    while True:
        A = _rand(R, 3, rng)
        if R.is_unit(det(R, A)):
            break
    assert mat_mul(R, A, inverse(R, A)) == identity(R, 3)
    b = tuple(R.random(rng) for _ in range(3))
    assert mat_vec(R, A, solve(R, A, b)) == b


def test_twisted_nilpotency():
    k = FiniteField(3, 2)
    N = ((k.zero, k.one), (k.zero, k.zero))
    assert twisted_nilpotency(k, N, -1, 2)
    assert not twisted_nilpotency(k, identity(k, 2), -1, 5)
