"""Verification batteries shared by the CLI suites and the acceptance tests.

Each function returns a dict with at least ``ok`` plus the counts it looked at.
"""

import random

from . import dieudonne as dd
from . import display as dp
from . import multilinear as ml
from . import ramequiv as rq
from .fixtures import coefficient_ring, lubin_tate, make_fixture, multiplicative, etale, supersingular
from .ramified import (BaseDVR, build_mu_polys, build_ramified_table, classical_ghost,
                       frobenius_collapses, mu_transform, oracle_ring, ramified_ghost,
                       ramified_ring, verify_ramified_table)
from .rings import ZZ, FiniteField, GaloisRing
from .semilinear import binomial
from .witt import build_witt_table, vector, verify_table, witt_ring

RAMIFIED_BASES = ((2, 1, 2, (-2, 0, 1)), (3, 1, 2, (-3, 0, 1)), (2, 2, 1, (-2, 1)))


def ramified_bases():
    return [BaseDVR(p, f, e, E) for p, f, e, E in RAMIFIED_BASES]


# -- Witt vectors ------------------------------------------------------------------------

def classical_tables(primes=(2, 3, 5), max_depth=4):
    rows = []
    for p in primes:
        for m in range(1, max_depth + 1):
            rows.append({"p": p, "depth": m, "failures": len(verify_table(build_witt_table(p, m)))})
    return {"tables": len(rows), "failures": sum(r["failures"] for r in rows), "rows": rows,
            "ok": all(r["failures"] == 0 for r in rows)}


def ramified_tables(bases=None, max_depth=3):
    rows = []
    for b in bases or ramified_bases():
        for m in range(1, max_depth + 1):
            t = build_ramified_table(b, m)
            rows.append({"base": b.to_json(), "depth": m, "failures": len(verify_ramified_table(t)),
                         "frobenius_collapses": frobenius_collapses(t)})
    return {"tables": len(rows), "failures": sum(r["failures"] for r in rows), "rows": rows,
            "ok": all(r["failures"] == 0 and r["frobenius_collapses"] for r in rows)}


def frobenius_verschiebung(p=3, s=1, m=2):
    """F V = V F = p on all of W_m(F_{p^s})."""
    W = witt_ring(FiniteField(p, s), m)
    pv = W.from_int(p)
    bad = total = 0
    for a in W.elements():
        total += 1
        pa = W.mul(pv, a)
        bad += W.sigma(W.ver(a)) != pa or W.ver(W.sigma(a)) != pa
    return {"elements": total, "failures": bad, "ok": bad == 0}


def ramified_frobenius_verschiebung(base=(2, 1, 2, (-2, 0, 1)), s=2, m=2):
    """F_pi V_pi = V_pi F_pi = pi on all of W_{O,m}(F_{p^s})."""
    b = BaseDVR(*base)
    W = ramified_ring(b, FiniteField(b.p, s), m)
    bad = total = 0
    for a in W.elements():
        total += 1
        pa = W.mul(W.pi_one, a)
        bad += W.sigma(W.ver(a)) != pa or W.ver(W.sigma(a)) != pa
    return {"elements": total, "failures": bad, "ok": bad == 0}


def mu_ghost(bases=None, samples=50, seed=0):
    """w_n(mu(x)) = w_{fn}(x) on random oracle vectors, mu([a]) = [a] on F_q."""
    rng = random.Random(seed)
    rows = []
    for b in bases or ramified_bases():
        m = 2 if b.f > 1 else 3
        O = oracle_ring(b)
        _, L = build_mu_polys(b, m)
        bad = 0
        for _ in range(samples):
            x = vector(O, tuple(O.random(rng) for _ in range(L)), b.p)
            gx, gy = classical_ghost(O, b.p, x.coords), ramified_ghost(mu_transform(x, b, m))
            bad += any(gy[n] != gx[b.f * n] for n in range(m))
        k = FiniteField(b.p, b.f)
        zeros = (k.zero,) * (L - 1)
        teich_bad = sum(mu_transform(vector(k, (a,) + zeros, b.p), b, m).coords
                        != (a,) + (k.zero,) * (m - 1) for a in k.element_list)
        rows.append({"base": b.to_json(), "depth": m, "ghost_failures": bad,
                     "teichmuller_failures": teich_bad})
    return {"rows": rows, "ok": all(r["ghost_failures"] == 0 == r["teichmuller_failures"]
                                    for r in rows)}


# -- Dieudonne modules -----------------------------------------------------------------

def order_formula(cases=((3, 1), (2, 2)), heights=(2, 3, 4), levels=(1, 2)):
    rows = []
    for p, f in cases:
        for h in heights:
            for n in levels:
                D = make_fixture("lubin-tate", p=p, h=h, n=n, f=f)
                for j in range(1, h + 1):
                    M = dd.exterior_power(D, j).as_module
                    rows.append({"p": p, "f": f, "h": h, "n": n, "j": j,
                                 "expected": n * binomial(h, j), "computed": dd.order_exponent(M)})
    return {"cases": len(rows), "rows": rows,
            "ok": all(r["expected"] == r["computed"] for r in rows)}


def dimension_formula(p=3, heights=(2, 3, 4), level=3, chars=("classical", "equal")):
    rows = []
    for ch in chars:
        for h in heights:
            D = make_fixture("lubin-tate", p=p, h=h, n=level, char=ch)
            for j in range(1, h + 1):
                M = dd.exterior_power(D, j).as_module
                rows.append({"char": ch, "h": h, "j": j, "expected": binomial(h - 1, j - 1),
                             "computed": dd.dimension(M), "height": dd.height(M)})
    return {"cases": len(rows), "rows": rows,
            "ok": all(r["expected"] == r["computed"] and r["height"] == binomial(r["h"], r["j"])
                      for r in rows)}


def wedge_diagrams(p=3, trials=200, seed=0):
    """Phi Upsilon = p = Upsilon Phi and the F-/V-diagrams."""
    rows = []
    D = make_fixture("lubin-tate", p=p, h=2, n=1)
    for j in (1, 2):
        data = dd.exterior_power(D, j)
        rep = dd.verify_diagrams(D, data, exhaustive=True)
        rows.append({"h": 2, "level": 1, "j": j, "mode": "exhaustive", "checked": rep["checked"],
                     "failures": rep["F_failures"] + rep["V_failures"],
                     "identities": dd.phi_upsilon_identities(data)})
    D = make_fixture("lubin-tate", p=p, h=3, n=2)
    for j in (1, 2, 3):
        data = dd.exterior_power(D, j)
        rep = dd.verify_diagrams(D, data, trials=trials, seed=seed)
        rows.append({"h": 3, "level": 2, "j": j, "mode": "random", "checked": rep["checked"],
                     "failures": rep["F_failures"] + rep["V_failures"],
                     "identities": dd.phi_upsilon_identities(data)})
    return {"rows": rows, "ok": all(r["failures"] == 0 and r["identities"] for r in rows)}


def tower_exactness(p=3, heights=(2, 3), n=1, m=1):
    rows = []
    for h in heights:
        D = make_fixture("lubin-tate", p=p, h=h, n=n + m)
        for j in range(1, h + 1):
            rep = dd.tower_report(D, j, n, m)
            rows.append({"h": h, "j": j, "ker": rep["ker"], "im": rep["im"], "ok": rep["ok"]})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


# -- displays ------------------------------------------------------------------------------

def display_heights(primes=(2, 3), max_height=5, depth=2):
    rows = []
    for p in primes:
        for h in range(1, max_height + 1):
            d = dp.display_fixture("lubin-tate", p=p, h=h, m=depth)
            for r in range(1, h + 1):
                e = dp.exterior_power(d, r)
                rows.append({"p": p, "h": h, "r": r, "height": e.height, "tangent": e.rank_T,
                             "expected": [binomial(h, r), binomial(h - 1, r - 1)],
                             "valid": dp.validate(e)["valid"] and dp.nilpotence_test(e)})
    top = [r for r in rows if r["r"] == r["h"]]
    return {"cases": len(rows), "rows": rows,
            "top_power_height_one": all(r["height"] == 1 == r["tangent"] for r in top),
            "ok": all([r["height"], r["tangent"]] == r["expected"] and r["valid"] for r in rows)}


def display_base_change(p=3, h=3, depth=2):
    d = dp.display_fixture("lubin-tate", p=p, h=h, m=depth)
    W = d.W
    rows = []
    W2 = GaloisRing(p, 2, depth)
    emb = dp.field_embedding(W.field, W2.field)
    WE, inc = dp.dual_numbers_model(W)
    for label, target, hom in (("F_p^2", W2, emb), ("k[eps]", WE, inc)):
        for r in range(1, h + 1):
            a = dp.exterior_power(dp.base_change(d, target, hom), r)
            b = dp.base_change(dp.exterior_power(d, r), target, hom)
            rows.append({"target": label, "r": r, "equal": a.S == b.S and a.rank_L == b.rank_L})
    return {"rows": rows, "ok": all(r["equal"] for r in rows)}


def display_universal_property(p=3, depth=1):
    ds = dp.display_fixture("supersingular", p=p, m=depth)
    rows = []
    for tg in (dp.display_fixture("multiplicative", p=p, m=depth), ds,
               dp.exterior_power(ds, 2), dp.display_fixture("etale", p=p, m=depth)):
        rep = dp.universal_property_check(ds, tg)
        rows.append({"target": tg.name, "alt": rep["alt"], "hom": rep["hom"],
                     "bijection": rep["bijection"], "ok": rep["ok"]})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


# -- multilinear -------------------------------------------------------------------------

def universal_property(p=3):
    W = GaloisRing(p, 1, 1)
    D = lubin_tate(W, 2)
    E = dd.exterior_power(D, 2).as_module
    targets = [E, supersingular(W), multiplicative(W, 1), etale(W, 1)]
    rep = ml.universal_property_counts(D, 2, targets)
    return {"rows": rep["rows"], "lambda_in_L_alt": rep["lambda_in_L_alt"],
            "ok": rep["ok"] and rep["lambda_in_L_alt"] and len(rep["rows"]) >= 3}


def delta_involution(max_r=3, max_M=4):
    rows = []
    for r in range(1, max_r + 1):
        for M in range(1, max_M + 1):
            rep = ml.partition_report(r, M)
            rows.append({"r": r, "M": M, **rep})
    return {"rows": rows, "ok": all(x["involution"] and x["bijection"] and x["partition"]
                                    for x in rows)}


def uglysum(samples=100, seed=0):
    rng = random.Random(seed)
    out = {}
    for label, A, alpha in (("integers", ZZ, 5), ("W_2(F_3)", GaloisRing(3, 1, 2), None)):
        alpha = A.from_int(3) if alpha is None else alpha
        good = 0
        for _ in range(samples):
            r, n = rng.randint(1, 3), rng.randint(1, 4)
            dims = [rng.randint(1, 2) for _ in range(r)]
            phi = ml.random_multilinear(A, dims, 2, rng)
            w0s, ys = ml.random_uglysum_instance(A, r, n, dims, rng)
            good += ml.uglysum_check(A, alpha, phi, w0s, ys)
        out[label] = good
    return {"passed": out, "ok": all(v == samples for v in out.values())}


# -- ramified equivalence -------------------------------------------------------------

def equivalence_roundtrips():
    rows = []
    for p, h, n in ((3, 2, 1), (3, 3, 2), (2, 2, 2), (2, 3, 1)):
        R = coefficient_ring(p, n, 2)
        for D, H in ((lubin_tate(R, h, 2), rq.ramified_lubin_tate(R, h, 2)),
                     (rq.D_functor(rq.ramified_supersingular(R, 2)), rq.ramified_supersingular(R, 2))):
            rep = rq.equivalence_roundtrip(D=D, H=H)
            rows.append({"p": p, "h": H.rank, "level": n, "module": H.name, "ok": rep["ok"]})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


def chi_xi_roundtrips():
    rows = []
    for p in (3, 2):
        R = coefficient_ring(p, 1, 2)
        D = lubin_tate(R, 2, 2)
        S = rq.D_functor(rq.ramified_supersingular(R, 2))
        E = dd.exterior_power(D, 2).as_module
        for src, tgt, label in (((D,), D, "D -> D"), ((D, D), E, "D x D -> wedge^2 D"),
                                ((D, D), S, "D x D -> S")):
            rep = rq.chi_xi_report(src, tgt)
            rows.append({"p": p, "shape": label, "log_size": rep["log_size_D"], "ok": rep["ok"]})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}
