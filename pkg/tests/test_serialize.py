import json

import pytest

from wittforge import display as dp
from wittforge import ramequiv as rq
from wittforge.fixtures import coefficient_ring, make_fixture
from wittforge.rings import GaloisRing, RamifiedChainRing, TruncPolyRing
from wittforge.serialize import (SchemaError, display_from_json, display_to_json,
                                 module_from_json, module_to_json, parse_entry)


def _roundtrip_module(D):
    d = json.loads(json.dumps(module_to_json(D)))
    D2 = module_from_json(d)
    assert type(D2) is type(D)
    assert D2.F == D.F and D2.V == D.V and D2.ring == D.ring
    return D2


@pytest.mark.parametrize("kw", [dict(p=3, h=3, n=2), dict(p=2, h=2, n=2, f=2),
                                dict(p=3, h=2, n=3, char="equal"),
                                dict(p=2, h=2, n=3, eisenstein=(-2, 0, 1))])
def test_module_roundtrip(kw):
    _roundtrip_module(make_fixture("lubin-tate", **kw))


def test_ramified_module_roundtrip():
    R = coefficient_ring(3, 2, 2)
    _roundtrip_module(rq.ramified_supersingular(R, 2))
    _roundtrip_module(rq.ramified_lubin_tate(GaloisRing(3, 1, 2), 2, 1))


@pytest.mark.parametrize("name", ["supersingular", "lubin-tate", "etale"])
def test_display_roundtrip(name):
    d = dp.display_fixture(name)
    d2 = display_from_json(json.loads(json.dumps(display_to_json(d))))
    assert d2.S == d.S and d2.rank_L == d.rank_L and d2.W == d.W


def test_dual_numbers_display_roundtrip():
    d = dp.display_fixture("lubin-tate", h=3)
    WE, inc = dp.dual_numbers_model(d.W)
    e = dp.base_change(d, WE, inc)
    e2 = display_from_json(display_to_json(e))
    assert e2.S == e.S


def test_entry_syntax():
    R = GaloisRing(3, 2, 2)
    x = R.gens["x"]
    assert parse_entry(R, "x^2 + 1") == parse_entry(R, "x**2+1") == R.add(R.mul(x, x), R.one)
    assert parse_entry(R, "-3") == R.from_int(-3)
    assert parse_entry(R, 4) == R.from_int(4)
    T = TruncPolyRing(R.field, 3, "t")
    assert parse_entry(T, "t*t") == T.mul(T.uniformizer, T.uniformizer)
    E = RamifiedChainRing(2, 1, (-2, 0, 1), 3)
    assert parse_entry(E, "y^2") == E.from_int(2)


@pytest.mark.parametrize("text", ["q + 1", "x / 2", "x^-1", "(", "1.5", [1]])
def test_entry_errors(text):
    with pytest.raises(SchemaError):
        parse_entry(GaloisRing(3, 2, 2), text)


def test_module_schema_errors():
    good = module_to_json(make_fixture("lubin-tate", p=3, h=2, n=1))
    for mutate in (lambda d: d.pop("rank"),
                   lambda d: d.update(rank="2"),
                   lambda d: d.update(V=[["0"]]),
                   lambda d: d["coeff"].update(kind="adelic"),
                   lambda d: d.update(twistF=2, twistV=-1),
                   lambda d: d.update(level=0)):
        d = json.loads(json.dumps(good))
        mutate(d)
        with pytest.raises(SchemaError):
            module_from_json(d)
    with pytest.raises(SchemaError):
        module_from_json([])


def test_display_schema_errors():
    good = display_to_json(dp.display_fixture("supersingular"))
    d = json.loads(json.dumps(good))
    d["structural"][0][0] = ["0"]
    with pytest.raises(SchemaError):
        display_from_json(d)
    d = json.loads(json.dumps(good))
    d["base"]["kind"] = "ring"
    with pytest.raises(SchemaError):
        display_from_json(d)
