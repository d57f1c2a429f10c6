import numpy as np
import pytest
from numpy.testing import assert_allclose

from cp3geom import family as fm
from cp3geom import hyper as hy
from cp3geom.cp3core import horizontal, proj_D1
from cp3geom.halgebra import R_I, R_J, R_K, qmul, random_unit_quaternion

ONE = np.array([1.0, 0, 0, 0])
Z = np.array([np.cos(0.8), np.sin(0.8), 0, 0])


def rand_pq(rng):
    return random_unit_quaternion(rng), random_unit_quaternion(rng)


class TestImmersion:
    def test_base_point(self):
        assert_allclose(fm.psi(np.pi / 4, ONE, ONE), np.concatenate([ONE, ONE]) / np.sqrt(2))

    def test_unit_and_range(self, rng):
        assert np.isclose(np.linalg.norm(fm.psi(0.3, *rand_pq(rng))), 1.0)
        for t in (0.0, np.pi / 2, -1.0):
            with pytest.raises(ValueError):
                fm.psi(t, ONE, ONE)

    def test_tangent_rank(self, rng):
        fr = fm.FamilyFrame(0.7, *rand_pq(rng))
        assert fr.pushed_rank() == 5
        ch = fm.family_chart(0.7, fr.p, fr.q)
        assert ch.gram_condition(np.zeros(5)) < 1e6

    def test_chart_matches_finite_differences(self, rng):
        ch = fm.family_chart(0.7, *rand_pq(rng))
        x = rng.uniform(-0.2, 0.2, 5)
        fd = hy.HypersurfaceChart(ch.immersion, ch.normal)
        assert_allclose(ch.ambient_tangents(x), fd.ambient_tangents(x), atol=1e-9)
        assert_allclose(ch.g1_normal_derivative(x), fd.g1_normal_derivative(x), atol=1e-9)

    def test_normal(self, rng):
        t = 0.4
        p, q = rand_pq(rng)
        pt, xi = fm.psi(t, p, q), fm.family_normal(t, p, q)
        for v in (pt, R_I @ pt, R_J @ pt, R_K @ pt):
            assert abs(np.dot(xi, v)) < 1e-15
        assert_allclose(fm.FamilyFrame(t, p, q).fields @ xi, 0, atol=1e-15)
        assert_allclose(proj_D1(pt, xi), 0, atol=1e-15)

    def test_round_shape_operator_on_ixi(self, rng):
        # A(xi.i) = 2 cot 2t xi.i - psi.i; the vertical term vanishes after projection
        t = 0.5
        A_ixi, ixi, ipsi = fm.round_shape_on_ixi(t, *rand_pq(rng))
        assert_allclose(A_ixi, 2 / np.tan(2 * t) * ixi - ipsi, atol=1e-14)
        assert_allclose(horizontal(fm.psi(t, ONE, ONE), R_I @ fm.psi(t, ONE, ONE)), 0, atol=1e-15)

    def test_hopf_coordinate_identity(self, rng):
        for _ in range(5):
            t = rng.uniform(0.1, 1.4)
            right, left = fm.hopf_xi_identity(t, rng.uniform(0.1, 1.4, 3), rng.uniform(0.1, 1.4, 3))
            assert right < 1e-14 and left < 1e-14


class TestHopf:
    def test_closed_forms(self):
        assert abs(fm.hopf_eigen(np.pi / 4)) < 1e-15
        assert np.isclose(fm.hopf_eigen(np.pi / 8), np.sqrt(2))
        assert np.isclose(fm.hopf_eigen(np.pi / 8, "J1"), 2.0)

    @pytest.mark.parametrize("a", (0.5, 1.0, 2.0, 4.0))
    def test_numeric_eigenvalue(self, a, rng):
        sd = fm.family_shape_data(a, 0.6, *rand_pq(rng))
        for structure in ("J", "J1"):
            ok, lam = hy.is_hopf(sd, structure)
            assert ok and abs(lam - fm.hopf_eigen(0.6, structure, a)) < 1e-6

    def test_nearly_kaehler_alpha_certificate(self, rng):
        t = 0.6
        lam_fs = 2 / np.tan(2 * t)
        al = fm.family_shape_data(2.0, t, *rand_pq(rng)).alpha
        assert_allclose(np.diag(al)[2:], lam_fs / np.sqrt(2), atol=1e-6)
        assert_allclose([al[2, 3], al[2, 4], al[3, 4]], 0, atol=1e-6)
        assert np.isclose(al[0, 4], 0.5) and np.isclose(al[1, 3], 0.5)

    def test_horizontal_everywhere(self, rng):
        for a in (0.5, 3.0):
            assert fm.family_shape_data(a, 0.9, *rand_pq(rng)).theta_a < 1e-10


class TestCurvatures:
    def test_mean_curvature(self):
        assert abs(fm.mean_curvature_printed(2.0, np.pi / 4)) < 1e-15
        assert np.isclose(fm.mean_curvature_printed(1.0, np.pi / 8), 2.0)
        for a in (0.5, 1.0, 3.0):
            printed, trace = fm.mean_curvature_family(a, 0.35)
            assert abs(trace - 3 * printed) < 1e-5

    def test_scalar_curvature_symmetric(self):
        for t in (0.3, np.pi / 6):
            assert np.isclose(fm.scalar_curvature_printed(2.0, t),
                              fm.scalar_curvature_printed(2.0, np.pi / 2 - t))
            _, n1, _ = fm.scalar_curvature_family(2.0, t)
            _, n2, _ = fm.scalar_curvature_family(2.0, np.pi / 2 - t)
            assert abs(n1 - n2) < 1e-5

    def test_scalar_curvature_fitted_form(self, rng):
        # numeric Gauss trace equals 8 + 24/a - 4/a^2 + 6 lam^2/a with lam = 2 cot 2t
        for a in (0.5, 1.0, 2.0, 3.5):
            for t in (0.3, 0.6):
                lam = 2 / np.tan(2 * t)
                _, num, _ = fm.scalar_curvature_family(a, t, *rand_pq(rng))
                assert np.isclose(num, 8 + 24 / a - 4 / a ** 2 + 6 * lam ** 2 / a)

    def test_scalar_curvature_intrinsic(self, rng):
        ch = fm.family_chart(0.6, *rand_pq(rng))
        RH = hy.intrinsic_curvature(1.0, ch, np.zeros(5))
        gi = np.linalg.inv(hy.induced_metric(1.0, ch, np.zeros(5)))
        intrinsic = np.einsum("ijkl,jk,il->", RH, gi, gi)
        assert abs(intrinsic - fm.scalar_curvature_family(1.0, 0.6)[1]) < 1e-3

    def test_fubini_study_principal(self, rng):
        for t in fm.T_GRID:
            vals, _ = hy.principal_curvatures(fm.family_shape_data(1.0, t, *rand_pq(rng)))
            assert_allclose(vals, fm.fubini_study_principal(t), atol=1e-6)


class TestTwistor:
    def test_image(self):
        r, h, tg = fm.twistor_image(np.pi / 4)
        assert np.isclose(r, 1) and abs(h) < 1e-15 and tg
        r, h, tg = fm.twistor_image(np.pi / 6)
        assert np.isclose(r, np.sqrt(3) / 2) and np.isclose(h, 0.5) and not tg
        assert fm.twistor_residual(0.3, ONE, ONE) < 1e-15

    def test_random_points(self, rng):
        for _ in range(20):
            assert fm.twistor_residual(rng.uniform(0.05, 1.5), *rand_pq(rng)) < 1e-12


class TestPullback:
    def test_fubini_study_reduction(self, rng):
        p, q = rand_pq(rng)
        X1, X2 = fm.random_tangent(rng, p, q), fm.random_tangent(rng, p, q)
        c2, s2 = np.cos(0.4) ** 2, np.sin(0.4) ** 2
        expected = c2 * np.dot(X1[:4], X2[:4]) + s2 * np.dot(X1[4:], X2[4:])
        assert np.isclose(fm.pullback_metric_printed(0.4, 1.0, p, q, X1, X2), expected)

    def test_isotropy_invariance(self, rng):
        p, q = rand_pq(rng)
        X1, X2 = fm.random_tangent(rng, p, q), fm.random_tangent(rng, p, q)
        rz = lambda X: np.concatenate([qmul(X[:4], Z), qmul(X[4:], Z)])  # noqa: E731
        g0 = fm.pullback_metric_printed(0.4, 3.0, p, q, X1, X2)
        g1 = fm.pullback_metric_printed(0.4, 3.0, qmul(p, Z), qmul(q, Z), rz(X1), rz(X2))
        assert np.isclose(g0, g1, atol=1e-12)

    @pytest.mark.parametrize("a", (0.5, 1.0, 2.0, 3.0))
    def test_quotient_matches_ambient(self, a, rng):
        for _ in range(5):
            p, q = rand_pq(rng)
            t = rng.uniform(0.1, 1.4)
            X1, X2 = fm.random_tangent(rng, p, q), fm.random_tangent(rng, p, q)
            assert abs(fm.quotient_metric(t, a, p, q, X1, X2)
                       - fm.pullback_metric_ambient(t, a, p, q, X1, X2)) < 1e-8

    def test_mirror(self):
        for s in (np.pi / 16, np.pi / 8, 3 * np.pi / 16):
            assert fm.mirror_isometry_check(s, 2.0) < 1e-12
        with pytest.raises(ValueError):
            fm.mirror_isometry_check(1.0, 2.0)
        hp = fm.mean_curvature_printed(2.0, np.pi / 4 + np.pi / 8)
        hm = fm.mean_curvature_printed(2.0, np.pi / 4 - np.pi / 8)
        assert abs(hp - hm) > 0.1


class TestHomogeneity:
    def test_action(self):
        res = fm.homogeneity_check(0.5, 2.0, samples=5)
        assert res["equivariance"] < 1e-12
        assert res["isometry"] < 1e-9
        assert res["alpha"] < 1e-6

    def test_isotropy(self):
        assert fm.isotropy_fixes_base(Z, Z)
        assert not fm.isotropy_fixes_base(Z, ONE)
        assert not fm.isotropy_fixes_base(np.array([0, 0, 1.0, 0]), np.array([0, 0, 1.0, 0]))
        # the isotropy pair fixes the projected base point
        from cp3geom.halgebra import hopf_project
        t = 0.7
        assert_allclose(hopf_project(fm.psi(t, Z, Z)), hopf_project(fm.psi(t, ONE, ONE)), atol=1e-12)

    def test_diffeomorphism_map(self):
        invariance, separation = fm.diffeo_check(samples=20)
        assert invariance < 1e-12
        assert separation > 1e-3
