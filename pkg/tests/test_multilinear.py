import itertools
import random

import pytest

from wittforge import multilinear as ml
from wittforge.dieudonne import exterior_power
from wittforge.fixtures import etale, lubin_tate, multiplicative, supersingular
from wittforge.rings import ZZ, FiniteField, GaloisRing, TruncPolyRing
from wittforge.semilinear import transpose
from wittforge.witt import witt_ring


def _linear(D, target, A):
    cols = transpose(A)
    return ml.MultilinearMap((D,), target, {(i,): cols[i] for i in range(D.rank)})


def test_identity_and_frobenius_satisfy_the_conditions():
    R = GaloisRing(3, 1, 1)
    D = supersingular(R)
    Id = _linear(D, D, ((R.one, R.zero), (R.zero, R.one)))
    assert ml.check_V_condition(Id) and ml.check_F_conditions(Id)
    Fm = _linear(D, D, D.F[0])
    assert ml.check_V_condition(Fm)


def test_zero_map_satisfies_everything():
    R = GaloisRing(3, 1, 2)
    D = lubin_tate(R, 2)
    z = ml.zero_map((D, D), D)
    assert ml.check_V_condition(z) and ml.check_F_conditions(z)
    assert ml.is_alternating(z) and ml.is_symmetric(z)


def test_random_tensor_fails_the_v_condition():
    R = GaloisRing(3, 1, 1)
    D = supersingular(R)
    rng = random.Random(0)
    bad = 0
    for _ in range(20):
        m = ml.MultilinearMap((D, D), D, {idx: (R.random(rng), R.random(rng))
                                          for idx in itertools.product(range(2), repeat=2)})
        bad += not ml.check_V_condition(m)
    assert bad > 10


def test_alt_space_matches_homs_out_of_the_wedge():
    R = GaloisRing(3, 1, 1)
    D = supersingular(R)
    W2 = exterior_power(D, 2).as_module
    L = ml.solve_L_space((D, D), W2, "alt")
    assert L.size == ml.enumerate_L_space((D, D), W2, "alt") == ml.hom_count(W2, W2)


def test_identity_in_linear_space_and_scaling_closure():
    R = GaloisRing(3, 1, 2)
    D = lubin_tate(R, 2)
    L = ml.solve_L_space((D,), D, "all")
    assert L.size >= 3
    for m, _ in L.generators:
        for c in (R.from_int(2), R.from_int(3)):
            scaled = ml.MultilinearMap(m.sources, m.target,
                                       {k: tuple(R.mul(c, x) for x in v) for k, v in m.tensor.items()})
            assert ml.check_V_condition(scaled) and ml.check_F_conditions(scaled)


def test_universal_property_counts():
    R = GaloisRing(3, 1, 1)
    D = lubin_tate(R, 2)
    targets = [exterior_power(D, 2).as_module, supersingular(R), multiplicative(R, 1), etale(R, 1)]
    rep = ml.universal_property_counts(D, 2, targets)
    assert rep["ok"] and rep["lambda_in_L_alt"]


def test_delta_examples():
    assert ml.delta((0, 0, 0)) == (0, 0, 0)
    assert ml.delta((0, 2, 1), 3) == (2, 0, 1)
    vecs = ml.index_vectors(2, 3)
    assert len(vecs) == 5
    assert all(ml.delta(ml.delta(d)) == d for d in vecs)
    with pytest.raises(ValueError):
        ml.delta((1, 2))


@pytest.mark.parametrize("r,M", [(1, 1), (2, 3), (3, 4)])
def test_partition_report(r, M):
    rep = ml.partition_report(r, M)
    assert rep["partition"] and rep["involution"] and rep["bijection"]


def test_zeta_examples():
    R = TruncPolyRing(FiniteField(3), 2, "u")
    u = R.uniformizer
    W = witt_ring(R, 2)
    x = (u, R.zero)
    y = (u, u)
    assert ml.zeta_d(W, [x, W.zero], (0, 1), 1) == W.zero
    z = ml.zeta_d(W, [x, y], (0, 1), 1)
    assert z == W.mul(x, y) and ml.killed_by_frobenius(W, z, 1)
    with pytest.raises(ValueError):
        ml.zeta_d(W, [W.one, x], (0, 1), 1)


def test_uglysum_degenerate_cases():
    rng = random.Random(1)
    phi = ml.coordinate_product(ZZ)
    w0s, ys = ml.random_uglysum_instance(ZZ, 2, 1, [1, 1], rng)
    lhs, rhs = ml.uglysum_sides(ZZ, 5, phi, w0s, ys)
    assert lhs == rhs
    w0s, ys = ml.random_uglysum_instance(ZZ, 1, 4, [1], rng)
    lhs, _ = ml.uglysum_sides(ZZ, 5, phi, w0s, ys)
    assert lhs == (sum(y[0] for y in ys[0]),)


def test_uglysum_integers_coordinate_product():
    rng = random.Random(2)
    phi = ml.coordinate_product(ZZ)
    for _ in range(20):
        w0s, ys = ml.random_uglysum_instance(ZZ, 3, 4, [2, 2, 2], rng)
        assert ml.uglysum_check(ZZ, 5, phi, w0s, ys)


def test_uglysum_over_w2_f3():
    A = GaloisRing(3, 1, 2)
    rng = random.Random(3)
    for _ in range(20):
        phi = ml.random_multilinear(A, [2, 1], 2, rng)
        w0s, ys = ml.random_uglysum_instance(A, 2, 3, [2, 1], rng)
        assert ml.uglysum_check(A, A.from_int(3), phi, w0s, ys)


def test_weakalt_relations():
    R = GaloisRing(3, 1, 1)
    assert ml.weakalt_relation_check(supersingular(R), 2)["ok"]
    assert ml.weakalt_relation_check(lubin_tate(R, 2), 1)["ok"]
    with pytest.raises(ValueError):
        ml.weakalt_relation_check(supersingular(GaloisRing(2, 1, 1)), 2)


def test_f_condition_report_with_lift():
    small, big = GaloisRing(3, 1, 1), GaloisRing(3, 1, 2)
    D, Db = supersingular(small), supersingular(big)
    rep = ml.f_condition_report((D,), D, (Db,), Db)
    assert rep["v_and_f"] <= rep["v_only"]
