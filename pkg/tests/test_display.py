import pytest

from wittforge import display as dp
from wittforge.fixtures import lubin_tate, make_fixture
from wittforge.rings import GaloisRing
from wittforge.semilinear import binomial, identity


def _W(p=3, m=2):
    return GaloisRing(p, 1, m)


def test_validate_examples():
    W = _W()
    assert dp.validate(dp.Display(W, 0, 1, ((W.one,),)))["valid"]
    assert dp.validate(dp.display_fixture("supersingular"))["valid"]
    bad = dp.Display(W, 1, 1, ((W.from_int(3), W.zero), (W.zero, W.one)))
    assert not dp.validate(bad)["valid"]


def test_shape_error_is_reported():
    W = _W()
    rep = dp.validate(dp.Display(W, 1, 1, ((W.one,),)))
    assert not rep["valid"]


def test_etale_module_gives_rank_t_zero():
    D = make_fixture("etale-h", p=3, h=1, n=2)
    d, _ = dp.from_dieudonne(D)
    assert d.rank_T == 0 and d.rank_L == 1 and dp.validate(d)["valid"]


def test_supersingular_module_gives_antidiagonal_display():
    D = make_fixture("supersingular-e-curve", p=3, n=2)
    d, _ = dp.from_dieudonne(D)
    W = d.W
    assert d.rank_T == 1 and d.rank_L == 1
    assert d.S[0][0] == W.zero and d.S[1][1] == W.zero
    assert W.is_unit(d.S[0][1]) and W.is_unit(d.S[1][0])


@pytest.mark.parametrize("h", [2, 3, 4])
def test_module_roundtrip(h):
    assert dp.roundtrip_module(lubin_tate(_W(), h))


@pytest.mark.parametrize("name", ["supersingular", "lubin-tate", "multiplicative", "etale"])
def test_display_roundtrip(name):
    assert dp.roundtrip_display(dp.display_fixture(name))


def test_exterior_power_degree_one():
    d = dp.display_fixture("lubin-tate", h=3)
    e = dp.exterior_power(d, 1)
    assert e.S == d.S and e.rank_T == d.rank_T


@pytest.mark.parametrize("h", [2, 3, 4, 5])
def test_exterior_heights(h):
    d = dp.display_fixture("lubin-tate", p=2, h=h)
    for r in range(1, h + 1):
        e = dp.exterior_power(d, r)
        assert e.height == binomial(h, r) and e.tangent_rank == binomial(h - 1, r - 1)
        assert dp.validate(e)["valid"]
    top = dp.exterior_power(d, h)
    assert top.height == 1 and top.tangent_rank == 1


def test_exterior_power_needs_tangent_rank_one():
    with pytest.raises(ValueError):
        dp.exterior_power(dp.display_fixture("etale"), 1)


def test_decomposition_independence():
    d = dp.display_fixture("supersingular")
    assert dp.decomposition_independence_check(d, 2, trials=1)["ok"]
    assert dp.decomposition_independence_check(d, 2, trials=10, seed=1)["ok"]
    d3 = dp.display_fixture("lubin-tate", h=3)
    for r in (2, 3):
        assert dp.decomposition_independence_check(d3, r, trials=50)["ok"]


def test_identity_change_of_basis():
    d = dp.display_fixture("lubin-tate", h=3)
    W = d.W
    Y0 = tuple(tuple(W.zero for _ in range(d.rank_L)) for _ in range(d.rank_T))
    assert dp.change_basis(d, identity(W, 3), Y0).S == d.S


def test_base_change():
    d = dp.display_fixture("supersingular")
    W = d.W
    assert dp.base_change(d, W, lambda a: a).S == d.S
    W2 = GaloisRing(3, 2, 2)
    e = dp.base_change(d, W2, dp.field_embedding(W.field, W2.field))
    assert dp.validate(e)["valid"]
    assert e.S == ((W2.zero, W2.one), (W2.one, W2.zero))


def test_base_change_commutes_with_wedge_over_dual_numbers():
    d = dp.display_fixture("lubin-tate", h=3)
    WE, inc = dp.dual_numbers_model(d.W)
    a = dp.exterior_power(dp.base_change(d, WE, inc), 2)
    b = dp.base_change(dp.exterior_power(d, 2), WE, inc)
    assert a.S == b.S


def test_nilpotence_examples():
    assert dp.nilpotence_test(dp.display_fixture("multiplicative"))
    assert not dp.nilpotence_test(dp.display_fixture("etale"))
    assert dp.nilpotence_exponent(dp.display_fixture("supersingular")) == 2


def test_universal_property_zero_target():
    d = dp.display_fixture("supersingular", m=1)
    zero = dp.Display(d.W, 0, 0, ())
    rep = dp.universal_property_check(d, zero)
    assert rep["hom"] == rep["alt"] == 1 and rep["ok"]


def test_universal_property_wedge_target():
    d = dp.display_fixture("supersingular", m=1)
    rep = dp.universal_property_check(d, dp.exterior_power(d, 2))
    assert rep["ok"] and rep["lambda_is_alternating"]


def test_universal_property_self_target():
    d = dp.display_fixture("supersingular", m=1)
    rep = dp.universal_property_check(d, d)
    assert rep["ok"] and rep["hom"] == rep["alt"]


def test_unknown_fixture():
    with pytest.raises(KeyError):
        dp.display_fixture("nope")
