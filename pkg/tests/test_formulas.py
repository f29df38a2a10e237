from math import comb, gcd

import numpy as np
import pytest

from torkh import formulas as F
from torkh.engine import QQ, LaurentPoly2, jones_kauffman, khovanov_homology
from torkh.links import InvalidParameter, torus_diagram

INF = float("inf")


def test_s_torus_examples():
    assert F.s_torus(3, 2, 1, 0) == 2
    assert F.s_torus(6, 6, 3, 3) == -5
    assert F.s_torus(2, -2, 1, 1) == 1
    assert F.s_torus(2, 2, 1, 1) == -1
    assert F.s_torus(4, 0, 4, 0) == -3
    with pytest.raises(InvalidParameter):
        F.s_torus(6, 4, 2, 1)


def test_s_torus_symmetries():
    for n in range(1, 9):
        for m in range(1, 9):
            d = gcd(n, m)
            for p in range(d + 1):
                v = F.s_torus(n, m, p, d - p)
                assert v == F.s_torus(m, n, p, d - p) == F.s_torus(n, m, d - p, p)
            assert F.s_torus(n, m, d, 0) == (n - 1) * (m - 1)


def test_lee_rank_examples():
    assert F.lee_rank_torus(2, 2) == {0: 2, 2: 2}
    assert F.lee_rank_torus(6, 6) == {0: 2, 10: 12, 16: 30, 18: 20}
    assert F.lee_rank_torus(3, 2) == {0: 2}


def test_lee_rank_sums():
    for n in range(1, 11):
        for m in range(1, 11):
            assert sum(F.lee_rank_torus(n, m).values()) == 2 ** gcd(n, m)


def test_rep_dim_and_catalan():
    assert F.rep_dim(6, 3) == 5 and F.rep_dim(5, 0) == 1 and F.rep_dim(4, 2) == 2
    with pytest.raises(InvalidParameter):
        F.rep_dim(4, 3)
    assert [F.catalan(k) for k in (0, 3, 10)] == [1, 5, 16796]
    assert F.catalan(60) == comb(120, 60) // 61


def test_gr_examples():
    t = F.gr_lee_torus(2, 2)
    assert {k: g.free for k, g in t.groups.items()} == {(0, 0): 1, (0, 2): 1, (2, 4): 1, (2, 6): 1}
    t = F.gr_lee_torus(4, 4)
    assert {q: t.dim(8, q) for q in (20, 22, 24)} == {20: 1, 22: 3, 24: 2}


def test_gr_marginals_and_parity():
    for n in range(1, 9):
        for m in range(1, 9):
            t = F.gr_lee_torus(n, m)
            assert t.rank_by_h() == F.lee_rank_torus(n, m)
            d = gcd(n, m)
            assert {q % 2 for _, q in t.groups} == {d % 2}


def test_staircase_examples():
    assert (F.q_nn(6, 0), F.q_nn(6, 16), F.q_nn(6, 18)) == (24, 44, 48)
    assert F.q_nn(6, 10) == 36
    assert F.q_n1n(6, 11) == 43
    assert F.q_nn(6, 19) == INF and F.q_nn(6, -1) == INF
    assert F.q_n1n(6, 0) == 29
    assert F.h_max(6, "nn") == 18 and F.h_max(6, "n1n") == 21 and F.h_max(1, "nn") == 0


def test_staircase_shape():
    for n in range(1, 201):
        for fam, fn, tab in (("nn", F.q_nn, F.nn_table), ("n1n", F.q_n1n, F.n1n_table)):
            vals = tab(n)
            assert len(vals) == F.h_max(n, fam) + 1
            assert set(np.diff(vals).tolist()) <= {0, 2, 4}, (n, fam)
            assert fn(n, F.h_max(n, fam) + 1) == INF
        assert F.q_n1n_clauses_agree(n)


def test_tables_match_functions():
    for n in (1, 4, 7, 30, 51):
        assert list(F.nn_table(n)) == [F.q_nn(n, h) for h in range(F.h_max(n, "nn") + 1)]
        assert list(F.n1n_table(n)) == [F.q_n1n(n, h) for h in range(F.h_max(n, "n1n") + 1)]
    with pytest.raises(ValueError):
        F.nn_table(5)[0] = 0


def test_relations_pass():
    rep = F.check_q_relations(6)
    assert rep.ok and rep.checked > 0
    rep = F.check_q_relations(range(3, 201))
    assert rep.ok, rep.violations[:3]


def test_relations_mutation_flagged():
    def perturbed(n):
        arr = F.nn_table(n).copy()
        if n == 8:
            arr[12] -= 2
        return arr

    rep = F.check_q_relations(range(3, 12), nn=perturbed)
    assert not rep.ok
    assert any("n=8" in v.relation or "n=10" in v.relation for v in rep.violations)
    assert rep.to_json()["violations"][0]["relation"]


def test_twist_examples():
    r = F.twist_bound_check(2, -2, 0, 1, 1)
    assert r["ok"] and r["sharp_low"] and r["difference"] == -2
    r = F.twist_bound_check(2, -2, 2, 1, 1)
    assert r["ok"] and r["sharp_low"]
    r = F.twist_bound_check(3, 1, 4, 1, 0)
    assert r["ok"] and r["sharp_high"] and r["difference"] == 0
    with pytest.raises(InvalidParameter):
        F.twist_bound_check(3, 1, 3, 1, 0)


def test_twist_grid():
    for n in range(1, 7):
        for m in range(-12, 13):
            for k in (1, 2, 3):
                m2 = m + k * n
                d = gcd(n, abs(m)) if m else n
                if (gcd(n, abs(m2)) if m2 else n) != d:
                    continue
                for p in range(d + 1):
                    assert F.twist_bound_check(n, m, m2, p, d - p)["ok"]


def test_recursion_examples():
    m = LaurentPoly2.monomial
    assert F.K_poly(2) == m(0, 1) + m(0, 3) + m(2, 5) + m(3, 9)
    assert F.L_poly(2) == m(0, 0) + m(0, 2) + m(2, 4) + m(2, 6)
    assert F.L_poly(0) == LaurentPoly2.one()
    for n in range(9):
        assert F.L_poly(n).coefficients_nonnegative()
        assert F.K_poly(n).coefficients_nonnegative()


def test_recursion_totals():
    for n in range(1, 5):
        assert F.L_poly(n)(1, 1) == khovanov_homology(torus_diagram(n, n), QQ).total_rank()
        assert F.K_poly(n)(1, 1) == khovanov_homology(torus_diagram(n + 1, n), QQ).total_rank()


@pytest.mark.parametrize("n", range(1, 7))
def test_L_euler_matches_bracket(n):
    ev = {}
    for (t, q), c in F.L_poly(n).terms.items():
        ev[0, q] = ev.get((0, q), 0) + c * (-1) ** (t % 2)
    assert LaurentPoly2(ev) == jones_kauffman(torus_diagram(n, n), limit=n * n)


def test_staircase_arrays_use_sentinel():
    assert F.SENTINEL > 10 ** 11
    assert np.all(F.nn_table(10) < F.SENTINEL)
