"""Acceptance criteria 1-12.

Every criterion prints one line ``criterion N: PASS|FAIL ...``.  Tolerances are
pinned below: all comparisons are exact, and the runtime budgets are wall-clock
limits in milliseconds.  Run directly (``python3 tests/test_acceptance.py``) or
through pytest, which repeats the lines in its terminal summary.
"""

import sys
import time

import pytest

from wittforge import checks
from wittforge import ramified, witt

BUDGET_MS = {1: 10_000, 2: 5_000, 3: 10_000, 5: 30_000, 9: 60_000}
RESULTS = {}


def _timed(fn, *args, **kw):
    t0 = time.perf_counter_ns()
    out = fn(*args, **kw)
    return out, (time.perf_counter_ns() - t0) // 1_000_000


def _report(n, title, ok, detail, elapsed=None):
    budget = BUDGET_MS.get(n)
    timing = ""
    if budget is not None:
        timing = f", {elapsed} ms (budget {budget} ms)"
        ok = ok and elapsed < budget
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}: {detail}{timing}"
    RESULTS[n] = line
    print(line)
    return ok


def test_criterion_01_order_formula():
    rep, ms = _timed(checks.order_formula)
    bad = [r for r in rep["rows"] if r["expected"] != r["computed"]]
    assert _report(1, "order exponent of wedge^j D_n equals n*C(h,j)", rep["ok"],
                   f"{rep['cases']} cases, {len(bad)} mismatches", ms)


def test_criterion_02_display_heights():
    rep, ms = _timed(checks.display_heights)
    ok = rep["ok"] and rep["top_power_height_one"]
    assert _report(2, "display wedge height C(h,r), tangent rank C(h-1,r-1)", ok,
                   f"{rep['cases']} cases, top power height/tangent 1: {rep['top_power_height_one']}",
                   ms)


def test_criterion_03_dimension_formula():
    rep, ms = _timed(checks.dimension_formula)
    bad = [r for r in rep["rows"] if r["expected"] != r["computed"]]
    assert _report(3, "dimension of wedge^j D equals C(h-1,j-1)", rep["ok"],
                   f"{len(rep['rows'])} cases (classical and equal characteristic, level 3), "
                   f"{len(bad)} mismatches", ms)


def test_criterion_04_phi_upsilon_and_diagrams():
    rep = checks.wedge_diagrams()
    checked = sum(r["checked"] for r in rep["rows"])
    fails = sum(r["failures"] for r in rep["rows"])
    assert _report(4, "Phi Upsilon = Upsilon Phi = p and F-/V-diagrams", rep["ok"],
                   f"{checked} tuples (exhaustive h=2 level 1, 200 random h=3 level 2), "
                   f"{fails} failures")


def test_criterion_05_ghost_identities(monkeypatch):
    # fresh builds: no disk cache and empty in-process memo
    monkeypatch.delenv("WITTFORGE_CACHE_DIR", raising=False)
    monkeypatch.setattr(witt, "_tables", {})
    monkeypatch.setattr(ramified, "_tables", {})
    worst = 0
    for p in (2, 3, 5):
        for m in range(1, 5):
            _, ms = _timed(witt.build_witt_table, p, m)
            worst = max(worst, ms)
    for b in checks.ramified_bases():
        for m in range(1, 4):
            _, ms = _timed(ramified.build_ramified_table, b, m)
            worst = max(worst, ms)
    cl, rm = checks.classical_tables(), checks.ramified_tables()
    assert _report(5, "ghost homomorphism identities, exact divisions", cl["ok"] and rm["ok"],
                   f"{cl['tables']} classical + {rm['tables']} ramified tables, "
                   f"{cl['failures'] + rm['failures']} failures; slowest build", worst)


def test_criterion_06_frobenius_verschiebung():
    a = checks.frobenius_verschiebung()
    b = checks.ramified_frobenius_verschiebung()
    assert _report(6, "F V = p on W_2(F_3), F_pi V_pi = pi on W_O,2(F_4) (p,e,f)=(2,2,1)",
                   a["ok"] and b["ok"],
                   f"{a['elements']} + {b['elements']} elements, {a['failures'] + b['failures']} failures")


def test_criterion_07_mu():
    rep = checks.mu_ghost()
    g = sum(r["ghost_failures"] for r in rep["rows"])
    t = sum(r["teichmuller_failures"] for r in rep["rows"])
    assert _report(7, "w_n(mu(x)) = w_fn(x) and mu([a]) = [a]", rep["ok"],
                   f"{len(rep['rows'])} bases x 50 samples, {g} ghost / {t} Teichmuller failures")


def test_criterion_08_delta_and_uglysum():
    d = checks.delta_involution()
    u = checks.uglysum()
    assert _report(8, "delta involution (r<=3, M<=4) and the telescoping identity",
                   d["ok"] and u["ok"],
                   f"{len(d['rows'])} (r,M) pairs; uglysum passed {u['passed']} of 100 each")


def test_criterion_09_universal_property():
    t0 = time.perf_counter_ns()
    a = checks.universal_property()
    b = checks.display_universal_property()
    ms = (time.perf_counter_ns() - t0) // 1_000_000
    rows = ", ".join(f"{r['target']}: {r['alt']}={r['hom']}" for r in a["rows"])
    assert _report(9, "|L_alt(D^2, N)| = |Hom(wedge^2 D, N)| and display bijection",
                   a["ok"] and b["ok"], f"{rows}; display targets {len(b['rows'])}", ms)


def test_criterion_10_equivalence():
    a = checks.equivalence_roundtrips()
    b = checks.chi_xi_roundtrips()
    assert _report(10, "H D = id, D H ~ id, Xi chi = id, chi Xi = id (f=2)", a["ok"] and b["ok"],
                   f"{len(a['rows'])} module roundtrips, {len(b['rows'])} multilinear shapes")


def test_criterion_11_tower():
    rep = checks.tower_exactness()
    counts = ", ".join(f"h={r['h']} j={r['j']}: {r['ker']}={r['im']}" for r in rep["rows"])
    assert _report(11, "0 -> wedge M_1 -> wedge M_2 -> wedge M_1 -> 0 exact", rep["ok"], counts)


def test_criterion_12_base_change():
    rep = checks.display_base_change()
    assert _report(12, "wedge commutes with base change to F_9 and k[eps]", rep["ok"],
                   f"{len(rep['rows'])} entrywise comparisons")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
