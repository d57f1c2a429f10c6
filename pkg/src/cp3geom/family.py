"""The homogeneous Hopf hypersurfaces H_t = pi(psi_t(S^3 x S^3)) of CP^3.

psi_t(p, q) = (cos t p, sin t q).  The round normal xi = (sin t p, -cos t q) is
the linear map diag(tan t, -cot t) applied to psi_t, so charts, tangents and
normal derivatives below are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cp3core import curvature_Ra, horizontal, metric_ga, norm_ga, proj_D1
from .halgebra import (
    QI,
    QJ,
    QK,
    R_I,
    complex_matrix,
    diag_action,
    hopf_project,
    qconj,
    qmul,
    random_unit_quaternion,
    rmul,
    split,
    twistor_project,
)
from .hyper import (
    HypersurfaceChart,
    angle,
    is_hopf,
    mean_curvature,
    principal_curvatures,
    second_fundamental_form,
)

T_GRID = (np.pi / 12, np.pi / 8, np.pi / 6, 0.6, np.pi / 4, 1.0, np.pi / 3,
          3 * np.pi / 8, 5 * np.pi / 12)


def _check_t(t):
    if not 0 < t < np.pi / 2:
        raise ValueError("t must lie in (0, pi/2)")


def psi(t, p, q):
    _check_t(t)
    return np.concatenate([np.cos(t) * np.asarray(p, float), np.sin(t) * np.asarray(q, float)])


def family_normal(t, p, q):
    """Round unit normal xi = (sin t p, -cos t q) of the lifted hypersurface."""
    _check_t(t)
    return np.concatenate([np.sin(t) * np.asarray(p, float), -np.cos(t) * np.asarray(q, float)])


@dataclass(frozen=True)
class FamilyFrame:
    """Action fields (p.u, 0), (0, q.v), u, v in {i, j, k}, and the normal at psi_t(p, q)."""

    t: float
    p: np.ndarray
    q: np.ndarray

    @property
    def point(self):
        return psi(self.t, self.p, self.q)

    @property
    def fields(self):
        c, s = np.cos(self.t), np.sin(self.t)
        z = np.zeros(4)
        out = [np.concatenate([c * qmul(self.p, u), z]) for u in (QI, QJ, QK)]
        out += [np.concatenate([z, s * qmul(self.q, u)]) for u in (QI, QJ, QK)]
        return np.array(out)

    @property
    def normal(self):
        return family_normal(self.t, self.p, self.q)

    def pushed_rank(self, tol=1e-9):
        """Rank of the horizontal parts of the six fields (5 for a hypersurface)."""
        H = np.array([horizontal(self.point, f) for f in self.fields])
        return int(np.linalg.matrix_rank(H, tol))


def _gnomonic(p0, w):
    """p0 w / |w| and its derivatives along the listed quaternion directions."""
    n = np.linalg.norm(w)
    return qmul(p0, w) / n


def _gnomonic_derivs(p0, w, dirs):
    n = np.linalg.norm(w)
    return [qmul(p0, e / n - w * np.dot(w, e) / n ** 3) for e in dirs]


def family_chart(t, p0, q0, U=None, M=None):
    """Exact chart of H_t around psi_t(p0, q0), optionally moved by U in SU(4).

    Parameters x = (x1, x2, x3, x4, x5) give p = p0 (1 + x1 i + x2 j + x3 k)/|.|
    and q = q0 (1 + x4 j + x5 k)/|.|; the missing q.i direction is the gauge
    direction modulo the p.i one.  U (a complex 4x4 unitary matrix) is a
    Fubini-Study isometry but not a g_a-isometry for a != 1.  M is an extra real
    8x8 orthogonal map applied last (a right gauge rotation or an Sp(2) element).
    """
    _check_t(t)
    c, s = np.cos(t), np.sin(t)
    M = (np.eye(8) if M is None else np.asarray(M)) @ (np.eye(8) if U is None else complex_matrix(U))
    p0 = np.asarray(p0, float)
    q0 = np.asarray(q0, float)

    def ws(x):
        return (np.array([1.0, x[0], x[1], x[2]]), np.array([1.0, 0.0, x[3], x[4]]))

    def derivs(x, a_p, a_q):
        wp, wq = ws(x)
        dp = _gnomonic_derivs(p0, wp, (QI, QJ, QK))
        dq = _gnomonic_derivs(q0, wq, (QJ, QK))
        z = np.zeros(4)
        out = [np.concatenate([a_p * d, z]) for d in dp] + [np.concatenate([z, a_q * d]) for d in dq]
        return np.array(out) @ M.T

    def immersion(x):
        wp, wq = ws(x)
        return M @ np.concatenate([c * _gnomonic(p0, wp), s * _gnomonic(q0, wq)])

    def normal(x):
        wp, wq = ws(x)
        return M @ np.concatenate([s * _gnomonic(p0, wp), -c * _gnomonic(q0, wq)])

    return HypersurfaceChart(immersion=immersion, normal=normal,
                             tangents=lambda x: derivs(x, c, s),
                             normal_derivative=lambda x: derivs(x, s, -c))


def family_shape_data(a, t, p0, q0, U=None, A=None, M=None):
    return second_fundamental_form(a, family_chart(t, p0, q0, U, M), np.zeros(5), A=A)


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def hopf_eigen(t, structure="J", a=None):
    """Hopf principal curvature of H_t.

    Nearly Kaehler (a = 2) gives sqrt(2) cot 2t, Fubini-Study (a = 1) gives
    2 cot 2t; for general a both J and J1 give 2 cot(2t)/sqrt(a), since J N = J1 N
    on the horizontal normal.
    """
    _check_t(t)
    if structure not in ("J", "J1"):
        raise ValueError("structure must be 'J' or 'J1'")
    if a is None:
        a = 2.0 if structure == "J" else 1.0
    return 2.0 / np.tan(2 * t) / np.sqrt(a)


def fubini_study_principal(t):
    """{2 cot 2t, -tan t (x2), cot t (x2)}, sorted."""
    return np.sort([2 / np.tan(2 * t), -np.tan(t), -np.tan(t), 1 / np.tan(t), 1 / np.tan(t)])


def mean_curvature_printed(a, t):
    """Printed mean curvature (1/sqrt a) 2 cot 2t."""
    _check_t(t)
    return 2.0 / np.tan(2 * t) / np.sqrt(a)


def mean_curvature_family(a, t, p0=None, q0=None):
    """(printed value, trace of the numeric g_a shape operator)."""
    p0 = np.array([1.0, 0, 0, 0]) if p0 is None else p0
    q0 = np.array([1.0, 0, 0, 0]) if q0 is None else q0
    return mean_curvature_printed(a, t), mean_curvature(family_shape_data(a, t, p0, q0))


def scalar_curvature_printed(a, t):
    lam = 2.0 / np.tan(2 * t)
    r2 = np.sqrt(2.0)
    return 2 * (2 * r2 * a ** 1.5 + 6 * a ** 3 + a ** 2 * (6 * lam ** 2 + 20) - 21 * a
                - 2 * r2 * np.sqrt(a) + 18) / a ** 3


def gauss_scalar_curvature(shape):
    """Sum over i != j of K(e_i, e_j) + alpha_ii alpha_jj - alpha_ij^2 (Gauss trace)."""
    a, p, e, al = shape.a, shape.point, shape.frame, shape.alpha
    total = 0.0
    for i in range(5):
        for j in range(5):
            if i != j:
                K = metric_ga(a, p, curvature_Ra(a, p, e[i], e[j], e[j]), e[i])
                total += K + al[i, i] * al[j, j] - al[i, j] ** 2
    return total


def scalar_curvature_family(a, t, p0=None, q0=None):
    """(printed value, numeric Gauss-trace value, gap)."""
    p0 = np.array([1.0, 0, 0, 0]) if p0 is None else p0
    q0 = np.array([1.0, 0, 0, 0]) if q0 is None else q0
    num = gauss_scalar_curvature(family_shape_data(a, t, p0, q0))
    pr = scalar_curvature_printed(a, t)
    return pr, num, abs(pr - num)


# --------------------------------------------------------------------------
# twistor image
# --------------------------------------------------------------------------


def twistor_image(t, tol=1e-12):
    """(radius, height, totally_geodesic) of the 3-sphere tau(H_t) in S^4."""
    _check_t(t)
    return np.sin(2 * t), np.cos(2 * t), bool(abs(np.cos(2 * t)) < tol)


def twistor_residual(t, p, q):
    """|tau(psi_t(p, q)) - (sin 2t p conj(q), cos 2t)|."""
    expected = np.concatenate([np.sin(2 * t) * qmul(p, qconj(q)), [np.cos(2 * t)]])
    return float(np.linalg.norm(twistor_project(psi(t, p, q)) - expected))


# --------------------------------------------------------------------------
# pull-back metric and mirror symmetry
# --------------------------------------------------------------------------


def pullback_metric_printed(t, a, p, q, X1, X2):
    """g^t((v1, w1), (v2, w2)) on S^3 x S^3, the squashed S^7 metric pulled back by psi_t.

    The D1 term is read as <v1, a1 p.j + a2 p.k> (and likewise for w1), with
    a1 = cos^2 t <v2, p.j> + sin^2 t <w2, q.j>, a2 the same with k.
    """
    (v1, w1), (v2, w2) = (np.asarray(X1[:4]), np.asarray(X1[4:])), (np.asarray(X2[:4]), np.asarray(X2[4:]))
    c2, s2 = np.cos(t) ** 2, np.sin(t) ** 2
    pj, pk, qj, qk = qmul(p, QJ), qmul(p, QK), qmul(q, QJ), qmul(q, QK)
    a1 = c2 * np.dot(v2, pj) + s2 * np.dot(w2, qj)
    a2 = c2 * np.dot(v2, pk) + s2 * np.dot(w2, qk)
    base = a * (c2 * np.dot(v1, v2) + s2 * np.dot(w1, w2))
    d1 = c2 * np.dot(v1, a1 * pj + a2 * pk) + s2 * np.dot(w1, a1 * qj + a2 * qk)
    return float(base + (1 - a) * d1)


def _orbit_direction(p, q):
    return np.concatenate([qmul(p, QI), qmul(q, QI)])


def quotient_metric(t, a, p, q, X1, X2):
    """g^t on the quotient by the isotropy circle: drop the g^t-component along (p.i, q.i)."""
    o = _orbit_direction(p, q)
    oo = pullback_metric_printed(t, a, p, q, o, o)
    Xs = [X - pullback_metric_printed(t, a, p, q, X, o) / oo * o for X in (X1, X2)]
    return pullback_metric_printed(t, a, p, q, *Xs)


def pullback_metric_ambient(t, a, p, q, X1, X2):
    """g_a(H d psi_t X1, H d psi_t X2), the metric induced from CP^3."""
    pt = psi(t, p, q)
    c, s = np.cos(t), np.sin(t)
    Y = [horizontal(pt, np.concatenate([c * X[:4], s * X[4:]])) for X in (X1, X2)]
    return metric_ga(a, pt, *Y)


def random_tangent(rng, p, q):
    """Random tangent vector to S^3 x S^3 at (p, q)."""
    v, w = rng.standard_normal(4), rng.standard_normal(4)
    return np.concatenate([v - np.dot(v, p) * p, w - np.dot(w, q) * q])


def _swap(X):
    return np.concatenate([X[4:], X[:4]])


def mirror_isometry_check(s, a, samples=20, seed=0):
    """max |g^{s-}(v, w) - g^{s+}(d rho v, d rho w)| over random (p, q, v, w)."""
    if not 0 < s < np.pi / 4:
        raise ValueError("s must lie in (0, pi/4)")
    rng = np.random.default_rng(seed)
    sm, sp = np.pi / 4 - s, np.pi / 4 + s
    worst = 0.0
    for _ in range(samples):
        p, q = random_unit_quaternion(rng), random_unit_quaternion(rng)
        X1, X2 = random_tangent(rng, p, q), random_tangent(rng, p, q)
        lhs = pullback_metric_printed(sm, a, p, q, X1, X2)
        rhs = pullback_metric_printed(sp, a, q, p, _swap(X1), _swap(X2))
        worst = max(worst, abs(lhs - rhs))
    return worst


# --------------------------------------------------------------------------
# homogeneity
# --------------------------------------------------------------------------


def homogeneity_check(t, a, samples=20, seed=0):
    """Residuals of the (A, B) action: equivariance, isometry and alpha invariance."""
    rng = np.random.default_rng(seed)
    one = np.array([1.0, 0, 0, 0])
    base = family_shape_data(a, t, one, one)
    out = {"equivariance": 0.0, "isometry": 0.0, "alpha": 0.0}
    for _ in range(samples):
        A, B = random_unit_quaternion(rng), random_unit_quaternion(rng)
        p, q = random_unit_quaternion(rng), random_unit_quaternion(rng)
        M = diag_action(A, B)
        out["equivariance"] = max(out["equivariance"], float(np.linalg.norm(
            M @ psi(t, p, q) - psi(t, qmul(A, p), qmul(B, q)))))
        pt = psi(t, p, q)
        x, y = horizontal(pt, rng.standard_normal(8)), horizontal(pt, rng.standard_normal(8))
        out["isometry"] = max(out["isometry"], abs(
            metric_ga(a, M @ pt, M @ x, M @ y) - metric_ga(a, pt, x, y)))
        moved = family_shape_data(a, t, A, B)
        out["alpha"] = max(out["alpha"], float(np.max(np.abs(moved.alpha - base.alpha))))
    return out


def isotropy_fixes_base(A, B, tol=1e-12):
    """True when (A, B) fixes o = pi(psi_t(1, 1)): A = 1.z and B = 1.z for one unit complex z."""
    A, B = np.asarray(A, float), np.asarray(B, float)
    complex_ = abs(A[2]) < tol and abs(A[3]) < tol
    return bool(complex_ and np.linalg.norm(A - B) < tol)


def diffeo_image(p, q):
    """(p U(1), p q^{-1}) in S^2 x S^3, with p U(1) represented by p i conj(p)."""
    return qmul(qmul(p, QI), qconj(p))[1:], qmul(p, qconj(q))


def diffeo_check(samples=20, seed=0):
    """Well-definedness on isotropy classes and injectivity on sampled distinct classes."""
    rng = np.random.default_rng(seed)
    invariance, separation = 0.0, np.inf
    for _ in range(samples):
        p, q = random_unit_quaternion(rng), random_unit_quaternion(rng)
        phi = rng.uniform(0, 2 * np.pi)
        z = np.array([np.cos(phi), np.sin(phi), 0, 0])
        s1, r1 = diffeo_image(p, q)
        s2, r2 = diffeo_image(qmul(p, z), qmul(q, z))
        invariance = max(invariance, float(np.linalg.norm(s1 - s2) + np.linalg.norm(r1 - r2)))
        p2, q2 = random_unit_quaternion(rng), random_unit_quaternion(rng)
        s3, r3 = diffeo_image(p2, q2)
        separation = min(separation, float(np.linalg.norm(s1 - s3) + np.linalg.norm(r1 - r3)))
    return invariance, separation


# --------------------------------------------------------------------------
# Hopf coordinates
# --------------------------------------------------------------------------


def hopf_coordinates(x):
    """(cos x2 sin x1, sin x2 sin x1, cos x3 cos x1, sin x3 cos x1)."""
    x1, x2, x3 = x
    return np.array([np.cos(x2) * np.sin(x1), np.sin(x2) * np.sin(x1),
                     np.cos(x3) * np.cos(x1), np.sin(x3) * np.cos(x1)])


def hopf_coordinate_frame(t, x, y):
    """f_1..f_6 = d psi_t / d(x1, x2, x3, y1, y2, y3) (exact)."""
    def d(u):
        u1, u2, u3 = u
        return np.array([
            [np.cos(u2) * np.cos(u1), np.sin(u2) * np.cos(u1), -np.cos(u3) * np.sin(u1), -np.sin(u3) * np.sin(u1)],
            [-np.sin(u2) * np.sin(u1), np.cos(u2) * np.sin(u1), 0, 0],
            [0, 0, -np.sin(u3) * np.cos(u1), np.cos(u3) * np.cos(u1)],
        ])
    z = np.zeros(4)
    c, s = np.cos(t), np.sin(t)
    return np.array([np.concatenate([c * r, z]) for r in d(x)] + [np.concatenate([z, s * r]) for r in d(y)])


def hopf_xi_identity(t, x, y):
    """Residuals of xi.i = tan t (f2 - f3) - cot t (f5 - f6) and of the left-i form
    i xi = tan t (f2 + f3) - cot t (f5 + f6)."""
    p, q = hopf_coordinates(x), hopf_coordinates(y)
    f = hopf_coordinate_frame(t, x, y)
    xi = family_normal(t, p, q)
    right = np.tan(t) * (f[1] - f[2]) - np.tan(np.pi / 2 - t) * (f[4] - f[5])
    xi1, xi2 = split(xi)
    left_i = np.concatenate([qmul(QI, xi1), qmul(QI, xi2)])
    left = np.tan(t) * (f[1] + f[2]) - np.tan(np.pi / 2 - t) * (f[4] + f[5])
    return float(np.linalg.norm(R_I @ xi - right)), float(np.linalg.norm(left_i - left))


def round_shape_on_ixi(t, p, q):
    """Round S^7 shape operator of the lifted hypersurface applied to xi.i.

    D_X xi = L X with L = diag(tan t, -cot t), so A(xi.i) = -(L xi.i)^T.
    Returns (A(xi.i), xi.i, psi.i).
    """
    pt, xi = psi(t, p, q), family_normal(t, p, q)
    X = R_I @ xi
    LX = np.concatenate([np.tan(t) * X[:4], -X[4:] / np.tan(t)])
    tang = LX - np.dot(LX, xi) * xi - np.dot(LX, pt) * pt
    return -tang, X, R_I @ pt
