import itertools
import random

import pytest

from wittforge.ramified import (BaseDVR, build_ramified_table, frobenius_collapses, make_WO_of_k,
                                mu_transform, oracle_ring, ramified_ghost, ramified_ring,
                                ramified_vector, verify_ramified_table)
from wittforge.rings import FiniteField, GaloisRing, RamifiedChainRing, TruncPolyRing
from wittforge.witt import vector, witt_ring

ZP3 = BaseDVR(3, 1, 1, [-3, 1])
ZQ4 = BaseDVR(2, 2, 1, [-2, 1])
RAM2 = BaseDVR(2, 1, 2, [-2, 0, 1])
RAM3 = BaseDVR(3, 1, 2, [-3, 0, 1])


def test_depth_one_sum():
    W = ramified_ring(RAM2, FiniteField(2), 1)
    k = W.base
    for a, b in itertools.product(k.element_list, repeat=2):
        assert W.add((a,), (b,)) == (k.add(a, b),)


@pytest.mark.parametrize("base,m", [(ZP3, 3), (RAM2, 2), (ZQ4, 2), (RAM3, 2)])
def test_tables_verify(base, m):
    assert verify_ramified_table(build_ramified_table(base, m)) == []


def test_unramified_matches_classical():
    O = oracle_ring(ZP3)
    Wc = witt_ring(GaloisRing(3, 1, 4), 3)
    Wr = ramified_ring(ZP3, GaloisRing(3, 1, 4), 3)
    rng = random.Random(0)
    for _ in range(50):
        a, b = Wc.random(rng), Wc.random(rng)
        assert Wr.add(a, b) == Wc.add(a, b)
        assert Wr.mul(a, b) == Wc.mul(a, b)
    assert O.torsion_free


def test_ghost_is_a_homomorphism_on_the_oracle():
    O = oracle_ring(RAM2)
    W = ramified_ring(RAM2, O, 2)
    rng = random.Random(1)
    for _ in range(30):
        a, b = W.random(rng), W.random(rng)
        ga, gb = ramified_ghost(ramified_vector(RAM2, O, a)), ramified_ghost(ramified_vector(RAM2, O, b))
        gs = ramified_ghost(ramified_vector(RAM2, O, W.add(a, b)))
        gp = ramified_ghost(ramified_vector(RAM2, O, W.mul(a, b)))
        assert gs == tuple(O.add(x, y) for x, y in zip(ga, gb))
        assert gp == tuple(O.mul(x, y) for x, y in zip(ga, gb))


def test_verschiebung_shifts():
    k = FiniteField(2, 2)
    W = ramified_ring(RAM2, k, 3)
    x = (k.gen, k.one, k.zero)
    assert W.ver(x) == (k.zero, k.gen, k.one)


@pytest.mark.parametrize("base", [ZP3, RAM2, ZQ4])
def test_frobenius_collapses(base):
    t = build_ramified_table(base, 3)
    assert frobenius_collapses(t)


@pytest.mark.parametrize("base,s", [(ZP3, 1), (RAM2, 2), (ZQ4, 2)])
def test_f_pi_v_pi_is_pi(base, s):
    k = FiniteField(base.p, s)
    W = ramified_ring(base, k, 2)
    pi = W.pi_one
    for a in W.elements():
        assert W.sigma(W.ver(a)) == W.mul(pi, a)
        assert W.ver(W.sigma(a)) == W.mul(pi, a)


def test_projection_formula():
    R = TruncPolyRing(FiniteField(2, 2), 2, "u")
    W = ramified_ring(RAM2, R, 2)
    rng = random.Random(4)
    for _ in range(30):
        x, y = W.random(rng), W.random(rng)
        assert W.ver(W.mul(W.sigma(x), y)) == W.mul(x, W.ver(y))


def test_mu_teichmuller_and_zero():
    k = FiniteField(2, 2)
    for a in k.element_list:
        y = mu_transform(vector(k, (a, k.zero, k.zero), 2), ZQ4, 2)
        assert y.coords == (a, k.zero)


def test_mu_ghost_on_zq9():
    base = BaseDVR(3, 2, 1, [-3, 1])
    O = oracle_ring(base)
    rng = random.Random(5)
    from wittforge.ramified import classical_ghost
    for _ in range(20):
        x = vector(O, tuple(O.random(rng) for _ in range(3)), 3)
        gx = classical_ghost(O, 3, x.coords)
        gy = ramified_ghost(mu_transform(x, base, 2))
        assert gy[1] == gx[2] and gy[0] == gx[0]


def test_mu_intertwines_frobenius():
    # mu(F^f w) = F_pi(mu(w)) over an F_q-algebra
    k = FiniteField(2, 2)
    W = witt_ring(k, 3)
    rng = random.Random(6)
    for _ in range(30):
        w = W.random(rng)
        lhs = mu_transform(vector(k, W.sigma(w, 2)), ZQ4, 2).coords
        Wr = ramified_ring(ZQ4, k, 2)
        assert lhs == Wr.sigma(mu_transform(vector(k, w), ZQ4, 2).coords)


def test_mu_is_natural():
    k2, k4 = FiniteField(2, 2), FiniteField(2, 4)
    from wittforge.display import field_embedding
    hom = field_embedding(k2, k4)
    rng = random.Random(7)
    for _ in range(20):
        w = tuple(k2.random(rng) for _ in range(3))
        a = tuple(hom(c) for c in mu_transform(vector(k2, w), ZQ4, 2).coords)
        b = mu_transform(vector(k4, tuple(hom(c) for c in w)), ZQ4, 2).coords
        assert a == b


def test_make_wo_of_k():
    k = FiniteField(3)
    assert make_WO_of_k(ZP3, k, 2) == GaloisRing(3, 1, 2)
    assert make_WO_of_k(ZP3, k, 1) is k
    R = make_WO_of_k(RAM3, k, 2)
    assert isinstance(R, RamifiedChainRing) and len(R.element_list) == 9
    pi = R.uniformizer
    assert pi != R.zero and R.mul(pi, pi) == R.zero
    with pytest.raises(ValueError):
        make_WO_of_k(ZQ4, FiniteField(2, 3), 2)


def test_base_validation():
    with pytest.raises(ValueError):
        BaseDVR(2, 1, 2, [-4, 0, 1])
    with pytest.raises(ValueError):
        BaseDVR(2, 1, 2, [-2, 1, 1])
