import itertools
import random
from fractions import Fraction

import pytest

from wittforge.rings import ZZ, FiniteField, GaloisRing, TruncPolyRing
from wittforge.witt import (artin_hasse_eval, artin_hasse_series, build_witt_table, frobenius,
                            ghost, teichmuller, vector, verify_table, verschiebung, witt_ring)


def _set(poly):
    return set(poly)


def test_depth_one_sum_and_product():
    t = build_witt_table(2, 1)
    assert _set(t.sum_polys[0]) == {(1, (1, 0)), (1, (0, 1))}
    assert _set(t.prod_polys[0]) == {(1, (1, 1))}


def test_p2_second_sum_polynomial():
    # S_1 = a1 + b1 - a0 b0 for p = 2 (variables a0, a1, b0, b1)
    t = build_witt_table(2, 2)
    assert _set(t.sum_polys[1]) == {(1, (0, 1, 0, 0)), (1, (0, 0, 0, 1)), (-1, (1, 0, 1, 0))}


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2)])
def test_tables_verify(p, m):
    assert verify_table(build_witt_table(p, m)) == []


def test_rejects_composite_prime():
    with pytest.raises(ValueError):
        build_witt_table(4, 2)


def test_one_plus_one_in_w2_f3():
    F3 = FiniteField(3)
    x = vector(F3, (F3.one, F3.zero))
    assert (x + x).coords == (F3.from_int(2), F3.one)


def test_zero_is_neutral():
    F3 = FiniteField(3)
    W = witt_ring(F3, 2)
    for a in W.elements():
        assert W.add(a, W.zero) == a


def test_w2_f2_ring_axioms_exhaustive():
    W = witt_ring(FiniteField(2), 2)
    els = list(W.elements())
    for a, b in itertools.product(els, repeat=2):
        assert W.add(a, b) == W.add(b, a)
        assert W.mul(a, b) == W.mul(b, a)
        for c in els:
            assert W.add(W.add(a, b), c) == W.add(a, W.add(b, c))
            assert W.mul(a, W.add(b, c)) == W.add(W.mul(a, b), W.mul(a, c))


def test_w2_f2_is_z_mod_4():
    W = witt_ring(FiniteField(2), 2)
    two = W.from_int(2)
    assert two != W.zero and W.add(two, two) == W.zero


def test_ghost_examples():
    assert ghost(vector(ZZ, (1, 1), 2)) == (1, 3)
    assert ghost(vector(ZZ, (2, -2), 3)) == (2, 2)


def test_ghost_is_additive_and_multiplicative():
    rng = random.Random(1)
    for _ in range(100):
        a = vector(ZZ, [rng.randint(-20, 20) for _ in range(3)], 3)
        b = vector(ZZ, [rng.randint(-20, 20) for _ in range(3)], 3)
        assert ghost(a + b) == tuple(x + y for x, y in zip(ghost(a), ghost(b)))
        assert ghost(a * b) == tuple(x * y for x, y in zip(ghost(a), ghost(b)))


def test_ghost_refuses_torsion():
    with pytest.raises(ValueError):
        ghost(vector(FiniteField(3), (FiniteField(3).one,) * 2))


def test_verschiebung_shifts():
    F3 = FiniteField(3)
    assert verschiebung(vector(F3, (F3.one, F3.zero))).coords == (F3.zero, F3.one)


def test_universal_frobenius_collapses_mod_p():
    # the Frobenius polynomials reduce to a_n^p modulo p
    for p, m in [(2, 3), (3, 3)]:
        t = build_witt_table(p, m)
        for n, poly in enumerate(t.frob_polys):
            red = {e: c % p for c, e in poly if c % p}
            expo = tuple(p if i == n else 0 for i in range(m))
            assert red == {expo: 1}


def test_frobenius_over_integers_matches_ghost_shift():
    x = vector(ZZ, (2, 5, -1), 3)
    assert ghost(frobenius(x)) == ghost(x)[1:]


def test_f_v_is_p_exhaustive():
    F3 = FiniteField(3)
    W = witt_ring(F3, 2)
    three = W.from_int(3)
    for a in W.elements():
        assert W.sigma(W.ver(a)) == W.mul(three, a)
        assert W.ver(W.sigma(a)) == W.mul(three, a)


def test_projection_formula():
    R = TruncPolyRing(FiniteField(2), 2, "u")
    W = witt_ring(R, 3)
    rng = random.Random(2)
    for _ in range(30):
        x, y = W.random(rng), W.random(rng)
        assert W.ver(W.mul(W.sigma(x), y)) == W.mul(x, W.ver(y))


@pytest.mark.parametrize("p,s", [(3, 2), (2, 2)])
def test_teichmuller_multiplicative(p, s):
    k = FiniteField(p, s)
    W = witt_ring(k, 2)
    for a, b in itertools.product(k.element_list, repeat=2):
        lhs = teichmuller(k.mul(a, b), k, 2).coords
        assert lhs == W.mul(W.teichmuller(a), W.teichmuller(b))


def test_teichmuller_in_galois_ring_is_root_of_unity():
    G = GaloisRing(3, 2, 3)
    for b in G.field.element_list:
        if b != G.field.zero:
            t = G.teichmuller(b)
            assert G.pow(t, 8) == G.one


# -- Artin-Hasse -------------------------------------------------------------------------------

def _mobius(n):
    out, k, d = 1, n, 2
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            out = -out
        d += 1
    return -out if k > 1 else out


def _ah_product_oracle(p, N):
    """prod_{p does not divide n} (1 - t^n)^(-mu(n)/n) via binomial series."""
    f = [Fraction(1)] + [Fraction(0)] * (N - 1)
    for n in range(1, N):
        mu = _mobius(n)
        if n % p == 0 or mu == 0:
            continue
        a = Fraction(-mu, n)
        fac = [Fraction(0)] * N
        c = Fraction(1)
        for k in range(0, (N - 1) // n + 1):
            fac[k * n] = c * (-1) ** k
            c = c * (a - k) / (k + 1)
        f = [sum(f[i] * fac[j - i] for i in range(j + 1)) for j in range(N)]
    return f


@pytest.mark.parametrize("p,N", [(2, 12), (3, 12), (5, 8)])
def test_artin_hasse_matches_product_formula(p, N):
    assert list(artin_hasse_series(p, N)) == _ah_product_oracle(p, N)


def test_artin_hasse_zero_and_teichmuller():
    k = FiniteField(3)
    R = TruncPolyRing(k, 3, "u")
    N = 7
    zero = vector(R, (R.zero, R.zero))
    assert artin_hasse_eval(zero, N) == [R.one] + [R.zero] * (N - 1)
    a = R.add(R.one, R.uniformizer)
    series = artin_hasse_series(3, N)
    expect = [R.mul(R.from_fraction(c.numerator, c.denominator), R.pow(a, i))
              for i, c in enumerate(series)]
    assert artin_hasse_eval(vector(R, (a, R.zero)), N) == expect


def test_artin_hasse_is_additive():
    R = TruncPolyRing(FiniteField(3), 3, "u")
    W = witt_ring(R, 2)
    N = 9
    rng = random.Random(3)
    for _ in range(50):
        x, y = W.random(rng), W.random(rng)
        lhs = artin_hasse_eval(vector(R, W.add(x, y)), N)
        a, b = artin_hasse_eval(vector(R, x), N), artin_hasse_eval(vector(R, y), N)
        rhs = [R.sum(R.mul(a[i], b[j - i]) for i in range(j + 1)) for j in range(N)]
        assert lhs == rhs


def test_cache_dir_roundtrip(tmp_path, monkeypatch):
    from wittforge import witt
    monkeypatch.setenv("WITTFORGE_CACHE_DIR", str(tmp_path))
    monkeypatch.setattr(witt, "_tables", {})
    t1 = build_witt_table(7, 2)
    assert (tmp_path / "witt_p7_m2.json").exists()
    monkeypatch.setattr(witt, "_tables", {})
    t2 = build_witt_table(7, 2)
    assert t1 == t2
