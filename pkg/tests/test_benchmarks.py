import csv
import io
import math

import mpmath as mp
import numpy as np
import pytest

from oracles import hypersingular, log_potential, p_mp, weighted_integral
from prandtl_vp.benchmarks import (PUBLISHED_TABLES, TABLE_N, ErrorReport, d_f_example4, example,
                                   example4_coeff, f_example4, g_example1, g_example3, g_example4,
                                   k_f_example4, reference_solution, run_table, table_csv,
                                   table_markdown, table_params, uniform_mesh, weighted_error)

from prandtl_vp.vp_basis import VPParams
from prandtl_vp.vp_interp import Basis, VPFunction

Y = [-0.9, -0.5, -0.1, 0.0, 0.3, 0.75, 0.99]


def test_hypersingular_oracle_on_p0():
    # D p_0 = p_0
    f = lambda x: p_mp(0, x) * mp.sqrt(1 - x * x)
    assert hypersingular(f, 0.3) == pytest.approx(float(p_mp(0, 0.3)), abs=1e-12)


class TestExample1:
    def test_exact(self):
        assert example(1).exact_f(-0.5) == -0.25

    @pytest.mark.parametrize("y", [-0.7, 0.2, 0.6])
    def test_rhs_against_quadrature(self, y):
        f = lambda x: x * abs(x)
        D = hypersingular(lambda x: f(x) * mp.sqrt(1 - x * x), y)
        H = weighted_integral(lambda x: x * (y * y * abs(y) + x * abs(x)) * f(x)) / math.pi
        assert float(g_example1(y)) == pytest.approx(f(y) + D + H, abs=1e-9)

    def test_series_branches_are_continuous(self):
        for y0 in (1e-6, 1 - 1e-10):
            lo, hi = g_example1(np.array([y0 * (1 - 1e-9), y0 * (1 + 1e-12)]))
            assert lo == pytest.approx(hi, abs=1e-8)
        assert np.isfinite(g_example1(np.array([-1.0, 0.0, 1.0]))).all()
        assert float(g_example1(0.0)) == 0.0


class TestExample3:
    def test_value_at_zero(self):
        assert float(g_example3(0.0)) == pytest.approx(2 + 2 / (3 * math.pi) + 0.25 * (1 + math.log(4)), rel=1e-15)
        assert float(g_example3(0.0)) == pytest.approx(2.80878, abs=1e-5)

    @pytest.mark.parametrize("y", Y)
    def test_self_consistency(self, y):
        K1 = log_potential(lambda x: 1, y)
        H1 = weighted_integral(lambda x: abs(y) + abs(x)) / math.pi
        assert float(g_example3(y)) == pytest.approx(1 + 1 + K1 + H1, abs=1e-9)


class TestExample4:
    @pytest.mark.parametrize("y", Y)
    def test_d_closed_form(self, y):
        D = hypersingular(lambda x: (1 - x * x) ** 2, y)
        assert float(d_f_example4(y)) == pytest.approx(D, abs=1e-9)

    @pytest.mark.parametrize("y", Y)
    def test_k_closed_form(self, y):
        K = log_potential(lambda x: (1 - x * x) ** mp.mpf(1.5), y)
        assert float(k_f_example4(y)) == pytest.approx(K, abs=1e-9)

    @pytest.mark.parametrize("j", range(9))
    def test_coefficients_by_quadrature(self, j):
        # <(1-x^2)^{3/2}, p_j>_phi = sqrt(2/pi) int_0^pi sin^4 t sin((j+1) t) dt
        val = math.sqrt(2 / math.pi) * float(mp.quad(lambda t: mp.sin(t) ** 4 * mp.sin((j + 1) * t), [0, mp.pi]))
        assert example4_coeff(j) == pytest.approx(val, abs=1e-14)

    def test_series_representation(self):
        # f = sum a_j p_j, D p_j = (j+1) p_j, K from the three-term rule
        from prandtl_vp.chebyshev import eval_p_all
        from prandtl_vp.operators import k_on_p
        J = 4000
        y = np.array(Y[:-1])
        a = np.array([example4_coeff(j) for j in range(J)])
        P = eval_p_all(J + 1, y)
        kp = np.zeros(J + 2)
        for l in range(J):
            lo, mid, hi = k_on_p(l)
            if l >= 2:
                kp[l - 2] += a[l] * lo
            kp[l] += a[l] * mid
            kp[l + 2] += a[l] * hi
        series = P[:, :J] @ (a * (2 + np.arange(1, J + 1))) + P @ kp
        np.testing.assert_allclose(g_example4(y), series, atol=1e-9)

    def test_endpoints(self):
        np.testing.assert_allclose(f_example4(np.array([-1.0, 1.0])), 0.0)
        assert float(d_f_example4(1.0)) == pytest.approx((16 / 3 - 8) / math.pi, rel=1e-15)
        k1 = (368 / 225 - 6 / 5 + 2 / 5 - 16 / 15 * math.log(2)) / math.pi
        np.testing.assert_allclose(k_f_example4(np.array([-1.0, 1.0])), k1, rtol=1e-14)
        near = k_f_example4(np.array([1 - 1e-12, -1 + 1e-12]))
        np.testing.assert_allclose(near, k1, atol=1e-10)


class TestErrors:
    def test_uniform_mesh(self):
        x = uniform_mesh(5)
        np.testing.assert_array_equal(x, [-1, -0.5, 0, 0.5, 1])
        with pytest.raises(ValueError):
            uniform_mesh(1)

    def test_weighted_error_trivial(self):
        p = VPParams(6, 2)
        zero = VPFunction(p, Basis.QTILDE, np.zeros(6))
        assert weighted_error(zero, lambda x: np.zeros_like(x)) == 0.0
        assert weighted_error(zero, lambda x: np.ones_like(x), mesh_size=3) == 1.0
        assert weighted_error(zero, np.array([5.0, 0.5, 5.0]), mesh_size=3) == 0.5

    def test_table_params(self):
        assert table_params(64) == VPParams(96, 32)
        assert table_params(64, "n") == VPParams(64, 21)
        with pytest.raises(ValueError):
            table_params(64, "x")
        with pytest.raises(ValueError):
            table_params(7)

    def test_unknown_example(self):
        with pytest.raises(ValueError):
            example(5)

    def test_published_table_rows(self):
        assert set(PUBLISHED_TABLES) == {1, 2, 3, 4}
        assert tuple(PUBLISHED_TABLES[4]) == TABLE_N
        assert tuple(PUBLISHED_TABLES[2]) == TABLE_N[:-1]


class TestTables:
    @pytest.mark.parametrize("id", [1, 3, 4])
    def test_convergence(self, id):
        rows = run_table(id, (8, 16, 32, 64))
        errs = [r.error_weighted for r in rows]
        assert all(b < a / 3 for a, b in zip(errs, errs[1:]))
        assert all(r.cond_inf <= 5 for r in rows)

    def test_example2_reference_sanity(self):
        # errors against the N = 1024 reference agree with a finer reference
        fine = reference_solution(2, VPParams.from_N(2048))
        coarse = reference_solution(2, VPParams.from_N(1024))
        x = uniform_mesh(1001)
        assert np.max(np.abs(fine(x) - coarse(x)) * np.sqrt(1 - x * x)) < 1e-13
        rows = run_table(2, (8, 16))
        assert rows[0].error_weighted > 30 * rows[1].error_weighted

    def test_reproduces_published_magnitudes(self):
        for id in (3, 4):
            for r in run_table(id, (8, 16, 32)):
                cond, err = PUBLISHED_TABLES[id][r.label]
                assert r.cond_inf == pytest.approx(cond, abs=0.15)
                assert 0.5 < r.error_weighted / err < 2

    def test_threads_env(self, monkeypatch):
        serial = run_table(4, (8, 16))
        monkeypatch.setenv("PRANDTL_VP_THREADS", "2")
        threaded = run_table(4, (8, 16))
        assert [r.error_weighted for r in serial] == [r.error_weighted for r in threaded]

    def test_unsorted(self):
        with pytest.raises(ValueError):
            run_table(4, (16, 8))


class TestFormatting:
    rows = [ErrorReport(n=12, m=4, error_weighted=3.2e-4, cond_inf=2.93, mesh_size=1001, label=8,
                        path="banded", elapsed_s=0.001)]

    def test_csv(self):
        data = list(csv.reader(io.StringIO(table_csv(self.rows))))
        assert data[0] == ["n", "m", "error_weighted", "cond_inf", "path", "elapsed_s"]
        assert data[1][:2] == ["12", "4"] and float(data[1][2]) == 3.2e-4 and data[1][4] == "banded"

    def test_markdown(self):
        md = table_markdown(self.rows, title="Example 4")
        assert "**Example 4**" in md
        assert "| 8 | 12 | 4 | 2.93 | 0.00032 |" in md
