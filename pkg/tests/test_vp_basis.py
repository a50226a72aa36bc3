from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prandtl_vp.chebyshev import eval_p, eval_p_all, grid, quad
from prandtl_vp.vp_basis import (VPParams, eval_phi, eval_phi_spectral, eval_q, eval_q_tilde,
                                 filter_mu, q_matrix, tables)

P42 = VPParams(4, 2)
PARAMS = [VPParams(4, 2), VPParams(6, 2), VPParams(12, 4), VPParams(13, 1), VPParams(30, 29), VPParams(48, 16)]


def fine_inner(f, g, n_fine=400):
    """<f, g> with a Gauss rule far beyond the degrees involved."""
    gr = grid(n_fine)
    return quad(f(gr.nodes) * g(gr.nodes), gr)


class TestParams:
    def test_from_N(self):
        p = VPParams.from_N(64)
        assert (p.n, p.m) == (96, 32)
        assert p.theta == Fraction(1, 3)

    @pytest.mark.parametrize("N", [0, 3, -2])
    def test_from_N_rejects_odd(self, N):
        with pytest.raises(ValueError):
            VPParams.from_N(N)

    def test_from_n(self):
        assert VPParams.from_n(8).m == 3
        assert VPParams.from_n(2).m == 1

    @pytest.mark.parametrize("n,m", [(4, 4), (4, 0), (3, 5)])
    def test_invalid(self, n, m):
        with pytest.raises(ValueError):
            VPParams(n, m)


class TestFilter:
    def test_examples(self):
        assert filter_mu(P42, 1) == 1
        assert filter_mu(P42, 4) == 0.5
        assert filter_mu(P42, 5) == 0.25

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            filter_mu(P42, 6)

    @pytest.mark.parametrize("p", PARAMS)
    def test_shape(self, p):
        mu = tables(p).mu
        n, m = p.n, p.m
        assert np.all(mu[: n - m + 1] == 1)
        assert np.all(np.diff(mu[n - m:]) < 0)
        assert mu[-1] == pytest.approx(1 / (2 * m))
        assert np.all((mu > 0) & (mu <= 1))


class TestPhi:
    @pytest.mark.parametrize("p", PARAMS)
    def test_interpolation_delta(self, p):
        x = grid(p.n).nodes
        M = np.array([eval_phi(p, k, x) for k in range(1, p.n + 1)])
        np.testing.assert_allclose(M, np.eye(p.n), atol=1e-11)

    @pytest.mark.parametrize("p", PARAMS)
    def test_partition_of_unity(self, p, rng):
        x = np.concatenate([rng.uniform(-1, 1, 200), [-1.0, 1.0, 0.0]])
        total = sum(eval_phi(p, k, x) for k in range(1, p.n + 1))
        np.testing.assert_allclose(total, 1.0, atol=1e-11)

    @pytest.mark.parametrize("p", PARAMS)
    def test_trig_matches_spectral(self, p, rng):
        x = rng.uniform(-1, 1, 100)
        for k in range(1, p.n + 1):
            np.testing.assert_allclose(eval_phi(p, k, x), eval_phi_spectral(p, k, x), atol=1e-10)

    def test_guard_points(self):
        p = VPParams(12, 4)
        for k in (1, 5, 12):
            x = np.array([1.0, -1.0, np.cos(k * np.pi / 13) + 1e-9])
            np.testing.assert_allclose(eval_phi(p, k, x), eval_phi_spectral(p, k, x), atol=1e-10)

    def test_index_error(self):
        with pytest.raises(IndexError):
            eval_phi(P42, 0, 0.1)

    @pytest.mark.parametrize("p", PARAMS)
    def test_basis_change(self, p, rng):
        g = grid(p.n)
        x = rng.uniform(-1, 1, 50)
        Pk = eval_p_all(p.n - 1, g.nodes)
        Q = q_matrix(p, x)
        for k in range(1, p.n + 1):
            expected = g.weights[k - 1] * Q @ Pk[k - 1]
            np.testing.assert_allclose(eval_phi(p, k, x), expected, atol=1e-10)


class TestQBases:
    def test_q0_is_p0(self, rng):
        x = rng.uniform(-1, 1, 10)
        np.testing.assert_allclose(eval_q(P42, 0, x), eval_p(0, x), rtol=1e-15)
        np.testing.assert_allclose(eval_q_tilde(P42, 0, x), eval_p(0, x), rtol=1e-15)

    def test_norm_example(self):
        q3 = lambda x: eval_q(P42, 3, x)
        assert fine_inner(q3, q3) == pytest.approx(5 / 8, rel=1e-13)

    @pytest.mark.parametrize("p", PARAMS)
    def test_matrix_matches_scalar(self, p, rng):
        x = rng.uniform(-1, 1, 7)
        Q = q_matrix(p, x)
        Qt = q_matrix(p, x, tilde=True)
        for j in range(p.n):
            np.testing.assert_allclose(Q[:, j], eval_q(p, j, x), rtol=1e-13, atol=1e-13)
            np.testing.assert_allclose(Qt[:, j], eval_q_tilde(p, j, x), rtol=1e-13, atol=1e-13)

    @pytest.mark.parametrize("p", PARAMS)
    def test_gram_matrices(self, p):
        gr = grid(2 * p.n + p.m)  # exact up to degree 4n + 2m - 1
        Q = q_matrix(p, gr.nodes)
        Qt = q_matrix(p, gr.nodes, tilde=True)
        t = tables(p)
        np.testing.assert_allclose((Q.T * gr.weights) @ Q, np.diag(t.qq), atol=1e-12)
        np.testing.assert_allclose((Q.T * gr.weights) @ Qt, np.diag(t.Q), atol=1e-11)

    @pytest.mark.parametrize("p", PARAMS)
    def test_alternating_node_identity(self, p):
        x = grid(p.n).nodes
        for j in range(p.n - p.m + 1, p.n):
            np.testing.assert_allclose(eval_p(2 * p.n - j, x), -eval_p(j, x), atol=1e-11)

    def test_index_error(self):
        with pytest.raises(IndexError):
            eval_q(P42, 4, 0.0)


class TestTables:
    def test_examples(self):
        t = tables(P42)
        assert t.w[3] == pytest.approx(11 / 48, rel=1e-15)
        assert t.Q[3] == pytest.approx(9 / 64 + 1 / 96, rel=1e-15)
        assert t.qq[3] == pytest.approx(5 / 8, rel=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(n=st.integers(2, 200), data=st.data())
    def test_branches(self, n, data):
        m = data.draw(st.integers(1, n - 1))
        p = VPParams(n, m)
        t = tables(p)
        assert t.w[0] == 1 and t.Q[0] == 1
        lo = np.arange(n) <= n - m
        np.testing.assert_allclose(t.w[lo], 1 / (np.arange(n)[lo] + 1), rtol=1e-15)
        np.testing.assert_array_equal(t.w[lo], t.Q[lo])
        np.testing.assert_allclose(t.qq[lo], 1.0)
        if m >= 2:
            assert np.all(t.w[~lo] != t.Q[~lo])

    def test_w_is_interpolation_of_q_tilde(self):
        # V_n^m q~_j = w_j q_j: interpolate q~_j at the nodes and read off its q-coefficient
        from prandtl_vp.chebyshev import discrete_coeffs
        for p in PARAMS:
            g = grid(p.n)
            Qt = q_matrix(p, g.nodes, tilde=True)
            C = discrete_coeffs(Qt, g)
            np.testing.assert_allclose(C, np.diag(tables(p).w), atol=1e-12)
