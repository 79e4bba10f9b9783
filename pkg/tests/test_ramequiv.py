import random

import pytest

from wittforge import dieudonne as dd
from wittforge import ramequiv as rq
from wittforge.fixtures import coefficient_ring, lubin_tate
from wittforge.multilinear import zero_map
from wittforge.rings import GaloisRing
from wittforge.semilinear import coker_length


def test_f1_unramified_is_repackaging():
    R = GaloisRing(3, 1, 2)
    D = lubin_tate(R, 3)
    H, amb = rq.H_functor(D)
    assert amb == 0 and H.F == D.F and H.V == D.V and H.f == 1
    D2 = rq.D_functor(H)
    assert D2.F == D.F and D2.V == D.V


@pytest.mark.parametrize("p,h,n", [(3, 2, 1), (3, 3, 2), (2, 2, 2)])
def test_h_of_lubin_tate_f2(p, h, n):
    R = coefficient_ring(p, n, 2)
    D = lubin_tate(R, h, 2)
    H, _ = rq.H_functor(D)
    assert H.rank == h
    assert H.V[0] == D.V_power(0, 2).matrix
    assert rq.validate_ramified(H)["valid"]
    # tangent spaces have the same length
    assert coker_length(R, H.V[0]) == dd.dimension(D)


def test_d_of_rank_one_multiplicative():
    R = coefficient_ring(3, 2, 2)
    pi = R.from_int(3)
    H = rq.RamifiedDieudonneModule(R, (((R.one,),),), (((pi,),),), 2, pi, "mult")
    assert rq.validate_ramified(H)["valid"]
    D = rq.D_functor(H)
    assert D.f == 2 and D.rank == 1
    assert dd.validate(D)["valid"] and rq.scalar_action(D)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (2, 2)])
def test_roundtrips(p, n):
    R = coefficient_ring(p, n, 2)
    for H in (rq.ramified_supersingular(R, 2), rq.ramified_lubin_tate(R, 3, 2)):
        D = rq.D_functor(H)
        rep = rq.equivalence_roundtrip(D=D, H=H)
        assert rep["ok"] and rep["HD_V_exact"] and rep["DH_V"]
        assert rq.H_functor(D)[0].rank == H.rank == D.rank


def test_scalar_action_fails_for_the_naive_supersingular():
    from wittforge.fixtures import supersingular
    R = coefficient_ring(3, 2, 2)
    D = supersingular(R, 2)
    assert not rq.scalar_action(D)
    with pytest.raises(ValueError):
        rq.H_functor(D)


def test_ramified_coefficients_report_the_ambiguity():
    R = coefficient_ring(2, 3, 1, eisenstein=(-2, 0, 1))
    H = rq.ramified_lubin_tate(R, 2, 1)
    assert rq.validate_ramified(H)["valid"]
    rep = rq.equivalence_roundtrip(H=H)
    assert rep["ok"]


def test_trace_examples():
    R = coefficient_ring(3, 2, 2)
    D = lubin_tate(R, 2, 2)
    rng = random.Random(0)
    x1 = tuple(R.random(rng) for _ in range(2))
    zero = (R.zero, R.zero)
    # x = V x_1 with x_1 in H(D)
    assert rq.trace_map(D, rq.decompose(D, [zero, x1])) == x1
    for _ in range(20):
        a = [tuple(R.random(rng) for _ in range(2)) for _ in range(2)]
        b = [tuple(R.random(rng) for _ in range(2)) for _ in range(2)]
        s = [tuple(R.add(u, v) for u, v in zip(x, y)) for x, y in zip(a, b)]
        ta, tb = rq.trace_map(D, a), rq.trace_map(D, b)
        assert rq.trace_map(D, s) == tuple(R.add(u, v) for u, v in zip(ta, tb))
    R1 = GaloisRing(3, 1, 2)
    D1 = lubin_tate(R1, 2)
    v = (R1.one, R1.from_int(4))
    assert rq.trace_map(D1, [v]) == v


def test_chi_of_zero_is_zero():
    R = coefficient_ring(3, 1, 2)
    D = lubin_tate(R, 2, 2)
    H, _ = rq.H_functor(D)
    psi = rq.chi(zero_map((H, H), H), (D, D), D)
    assert all(all(R.is_zero(x) for x in v) for t in psi.tensors for v in t.values())


def test_chi_vanishes_on_mixed_components():
    # a map on components only pairs vectors from the same M_i
    R = coefficient_ring(3, 1, 2)
    D = lubin_tate(R, 2, 2)
    rep = rq.chi_xi_report((D, D), dd.exterior_power(D, 2).as_module)
    assert rep["ok"] and rep["log_size_D"] == rep["log_size_H"]


@pytest.mark.parametrize("p", [3, 2])
def test_chi_xi_identity_maps(p):
    R = coefficient_ring(p, 1, 2)
    D = lubin_tate(R, 2, 2)
    rep = rq.chi_xi_report((D,), D)
    assert rep["ok"] and rep["xi_chi"] and rep["chi_xi"]


def test_xi_of_chi_on_a_generator():
    R = coefficient_ring(3, 1, 2)
    D = lubin_tate(R, 2, 2)
    H, _ = rq.H_functor(D)
    log, gens = rq.solve_ramified_space((H,), H)
    assert log > 0
    for phi, _ in gens:
        psi = rq.chi(phi, (D,), D)
        assert rq.xi(psi, (H,), H).tensor == phi.tensor
        assert all(R.is_zero(x) for x in rq.component_defects(psi))


@pytest.mark.parametrize("r", [1, 2])
def test_exterior_compatibility(r):
    R = coefficient_ring(3, 2, 2)
    rep = rq.exterior_compatibility(lubin_tate(R, 3, 2), r)
    assert rep["ok"]
