"""Hypersurfaces of (CP^3, g_a): angle function, adapted frames, second
fundamental form, Gauss/Codazzi residuals and non-existence obstruction scalars."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .cp3core import (
    J,
    J1,
    P,
    S_a_inv,
    curvature_Ra,
    dP,
    difference_tensor,
    horizontal,
    metric_ga,
    nabla_Ra,
    norm_ga,
    proj_D1,
    proj_D2,
    tensor_G,
)
from .halgebra import FD_STEP, R_I, R_J, R_K, normalize, rmul

NK = 2.0


# --------------------------------------------------------------------------
# angle function
# --------------------------------------------------------------------------


def angle(a, p, N_a, tol=1e-6):
    """theta_a in [0, pi/2] with cos(2 theta_a) = g_a(N_a, P N_a).

    For unit N_a this is atan2(|P1 N_a|_a, |P2 N_a|_a), which keeps full
    precision near 0 and pi/2 where arccos loses half the digits.
    """
    if abs(metric_ga(a, p, N_a, N_a) - 1.0) > tol:
        raise ValueError("normal must have unit g_a-length")
    return float(np.arctan2(norm_ga(a, p, proj_D1(p, N_a)), norm_ga(a, p, proj_D2(p, N_a))))


def classify(theta, tol=1e-6):
    """'horizontal', 'vertical', 'isotropic' or 'generic'."""
    if theta < tol:
        return "horizontal"
    if abs(theta - np.pi / 2) < tol:
        warnings.warn("vertical normal: no hypersurface of (CP^3, g_a) can be vertical",
                      stacklevel=2)
        return "vertical"
    if abs(theta - np.pi / 4) < tol:
        return "isotropic"
    return "generic"


def angle_relation(a, theta):
    """g_a-angle of a hypersurface with nearly Kaehler angle theta."""
    c = np.cos(2 * theta)
    c_a = (2 - a + (2 + a) * c) / (2 + a + (2 - a) * c)
    return 0.5 * float(np.arccos(np.clip(c_a, -1.0, 1.0)))


def isotropic_link(theta):
    """Metric parameter a = 2 cot^2(theta) for which angle theta is g_a-isotropic."""
    if theta <= 0:
        raise ValueError("horizontal case has no associated a")
    return 2.0 / np.tan(theta) ** 2


def link(a):
    """Inverse of isotropic_link: theta = arccos((a - 2)/(a + 2)) / 2."""
    return 0.5 * float(np.arccos((a - 2) / (a + 2)))


# --------------------------------------------------------------------------
# frames and normals
# --------------------------------------------------------------------------


def default_contact_vector(p):
    """Unit vector p.j of D1 at the lift p (lift dependent; pass A for covariance)."""
    return R_J @ p


def frame_horizontal(p, N, A=None, tol=1e-6):
    """e1 = -G(Phi N, N), e2 = J e1, e3 = J N, e4 = Phi N, e5 = Psi N for a horizontal N."""
    if norm_ga(NK, p, proj_D1(p, N)) > tol:
        raise ValueError("normal is not horizontal")
    A = default_contact_vector(p) if A is None else A
    phiN = J(p, tensor_G(p, A, N))
    e1 = -tensor_G(p, phiN, N)
    return np.array([e1, J(p, e1), J(p, N), phiN, -tensor_G(p, A, N)])


def nk_angle(p, N):
    """Nearly Kaehler angle of a g-unit normal."""
    return angle(NK, p, N)


def frame_nonhorizontal(p, N, theta=None, tol=1e-6):
    """g-orthonormal frame adapted to a non-horizontal g-unit normal."""
    theta = nk_angle(p, N) if theta is None else theta
    if theta < tol or theta > np.pi / 2 - tol:
        raise ValueError("frame degenerate")
    s2 = np.sin(2 * theta)
    JN = J(p, N)
    e4 = tensor_G(p, P(p, N), N) / s2
    return np.array([
        proj_D2(p, JN) / np.cos(theta),
        proj_D1(p, JN) / np.sin(theta),
        (P(p, N) - np.cos(2 * theta) * N) / s2,
        e4,
        J(p, e4),
    ])


def adapted_frame(p, N, A=None, tol=1e-6):
    """Horizontal or non-horizontal frame, chosen from the angle of N."""
    theta = nk_angle(p, N)
    if theta < tol:
        return frame_horizontal(p, N, A), theta
    return frame_nonhorizontal(p, N, theta, tol), theta


def normalize_ga(a, p, frame):
    return np.array([e / norm_ga(a, p, e) for e in frame])


def normal_convert(a, p, theta, N=None, N_a=None):
    """Convert a g-unit normal N to the g_a-unit normal N_a, or back."""
    c = np.cos(2 * theta)
    if N is not None:
        return ((a + 2) * N - (a - 2) * P(p, N)) / (np.sqrt(2 + a + (2 - a) * c) * np.sqrt(2 * a))
    if N_a is not None:
        return np.sqrt(2 + a - (a - 2) * c) / (4 * np.sqrt(2 * a)) * ((a + 2) * N_a + (a - 2) * P(p, N_a))
    raise ValueError("give N or N_a")


def normal_from_g1(a, p, xi):
    """g_a-unit normal of the hypersurface whose g_1-normal is xi."""
    v = S_a_inv(a, p, xi)
    return v / norm_ga(a, p, v)


# --------------------------------------------------------------------------
# charts
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HypersurfaceChart:
    """Map from a 5-dim parameter box to S^7 lifts of a hypersurface of CP^3.

    ``normal(x)`` is a g_1-unit horizontal normal at the lift ``immersion(x)``.
    ``tangents(x)`` and ``normal_derivative(x)`` return the parameter derivatives
    (5, 8) of the lift and of the normal; when absent, central differences are used.
    """

    immersion: Callable[[np.ndarray], np.ndarray]
    normal: Callable[[np.ndarray], np.ndarray]
    tangents: Optional[Callable] = None
    normal_derivative: Optional[Callable] = None
    dim: int = 5
    h: float = FD_STEP

    def _fd(self, fn, x):
        out = []
        for k in range(self.dim):
            d = np.zeros(self.dim)
            d[k] = self.h
            out.append((fn(x + d) - fn(x - d)) / (2 * self.h))
        return np.array(out)

    def point(self, x):
        return np.asarray(self.immersion(np.asarray(x, dtype=float)))

    def ambient_tangents(self, x):
        x = np.asarray(x, dtype=float)
        if self.tangents is not None:
            return np.asarray(self.tangents(x))
        return self._fd(self.point, x)

    def horizontal_tangents(self, x):
        p = self.point(x)
        return np.array([horizontal(p, t) for t in self.ambient_tangents(x)])

    def gram_condition(self, x):
        T = self.horizontal_tangents(x)
        return np.linalg.cond(T @ T.T)

    def g1_normal(self, x):
        return np.asarray(self.normal(np.asarray(x, dtype=float)))

    def g1_normal_derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.normal_derivative is not None:
            return np.asarray(self.normal_derivative(x))
        return self._fd(self.g1_normal, x)


# --------------------------------------------------------------------------
# second fundamental form
# --------------------------------------------------------------------------


@dataclass
class ShapeData:
    """Pointwise hypersurface record in a g_a-orthonormal adapted frame."""

    a: float
    point: np.ndarray
    theta_a: float
    theta: float
    N: np.ndarray
    N_a: np.ndarray
    frame: np.ndarray
    alpha: np.ndarray
    tangents: np.ndarray
    alpha_coords: np.ndarray
    lam: Optional[float] = None

    @property
    def shape_operator(self):
        return self.alpha

    def coefficients(self, v):
        """Coefficients of a tangent vector in the frame."""
        return np.array([metric_ga(self.a, self.point, v, e) for e in self.frame])

    def second_fundamental(self, u, v):
        return self.coefficients(u) @ self.alpha @ self.coefficients(v)

    def shape_apply(self, u):
        return (self.alpha @ self.coefficients(u)) @ self.frame


def g_unit_normal(p, xi):
    return normal_from_g1(NK, p, xi)


def _alpha_coordinates(a, chart, x):
    """alpha_jk = -g_a(T_k, nabla^a_{T_j} N_a) in the chart's coordinate basis.

    The chart lift moves along the fibre at rate c_j = <d_j psi, psi.i>; the
    derivative along the horizontal lift of T_j therefore subtracts c_j xi.i.
    """
    p = chart.point(x)
    Tamb = chart.ambient_tangents(x)
    T = np.array([horizontal(p, t) for t in Tamb])
    xi = chart.g1_normal(x)
    dxi = chart.g1_normal_derivative(x)
    m = S_a_inv(a, p, xi)
    c = 1.0 / norm_ga(a, p, m)
    N_a = c * m
    alpha = np.zeros((chart.dim, chart.dim))
    for j in range(chart.dim):
        cj = np.dot(Tamb[j], R_I @ p)
        nab1_xi = horizontal(p, dxi[j] - cj * (R_I @ xi))
        # S_a^{-1} = H/a + (1 - 1/a)(H - P)/2 on horizontal vectors
        nab1_m = S_a_inv(a, p, nab1_xi) - 0.5 * (1 - 1 / a) * dP(p, T[j], xi)
        nab = c * nab1_m + difference_tensor(a, p, T[j], N_a)
        for k in range(chart.dim):
            alpha[j, k] = -metric_ga(a, p, T[k], nab)
    return alpha, T, N_a


def second_fundamental_form(a, chart, x, A=None, tol=1e-6):
    """ShapeData at chart parameter x, frame adapted to N and J."""
    x = np.asarray(x, dtype=float)
    if chart.gram_condition(x) > 1e12:
        raise ValueError("degenerate chart")
    p = chart.point(x)
    alpha_T, T, N_a = _alpha_coordinates(a, chart, x)
    xi = chart.g1_normal(x)
    N = g_unit_normal(p, xi)
    frame, theta = adapted_frame(p, N, A, tol)
    frame = normalize_ga(a, p, frame)
    C, *_ = np.linalg.lstsq(T.T, frame.T, rcond=None)
    alpha = C.T @ alpha_T @ C
    return ShapeData(a=a, point=p, theta_a=angle(a, p, N_a), theta=theta, N=N, N_a=N_a,
                     frame=frame, alpha=alpha, tangents=T, alpha_coords=alpha_T)


def principal_curvatures(shape, cluster_tol=1e-5):
    """Sorted eigenvalues of the g_a shape operator and (value, multiplicity) clusters."""
    sym = 0.5 * (shape.alpha + shape.alpha.T)
    vals = np.sort(np.linalg.eigvalsh(sym))
    clusters = []
    for v in vals:
        if clusters and abs(v - clusters[-1][0]) < cluster_tol:
            mean, m = clusters[-1]
            clusters[-1] = ((mean * m + v) / (m + 1), m + 1)
        else:
            clusters.append((v, 1))
    return vals, clusters


def mean_curvature(shape):
    """Trace of the g_a shape operator (unnormalised)."""
    return float(np.trace(shape.alpha))


def is_hopf(shape, structure="J", tol=1e-6):
    """(True, eigenvalue) when A(J N_a) is parallel to J N_a, else (False, None)."""
    p = shape.point
    w = J(p, shape.N_a) if structure == "J" else J1(p, shape.N_a)
    c = shape.coefficients(w)
    Ac = shape.alpha @ c
    lam = float(c @ Ac / (c @ c))
    residual = np.linalg.norm(Ac - lam * c) / np.linalg.norm(c)
    return (True, lam) if residual < tol else (False, None)


def chart_angle(chart, x):
    """Nearly Kaehler angle of the chart's hypersurface at parameter x."""
    p = chart.point(x)
    return nk_angle(p, g_unit_normal(p, chart.g1_normal(x)))


def frame_angle_derivatives(chart, x, shape=None, h=FD_STEP):
    """e_i(theta) for the frame of ``shape`` (central differences of the angle)."""
    x = np.asarray(x, dtype=float)
    shape = second_fundamental_form(NK, chart, x) if shape is None else shape
    dtheta = np.array([_partial(lambda y: chart_angle(chart, y), x, k, h) for k in range(chart.dim)])
    C, *_ = np.linalg.lstsq(shape.tangents.T, shape.frame.T, rcond=None)
    return C.T @ dtheta


# --------------------------------------------------------------------------
# Gauss and Codazzi
# --------------------------------------------------------------------------


def induced_metric(a, chart, x):
    p = chart.point(x)
    T = chart.horizontal_tangents(x)
    return np.array([[metric_ga(a, p, u, v) for v in T] for u in T])


def _partial(fn, x, k, h):
    d = np.zeros(len(x))
    d[k] = h
    return (fn(x + d) - fn(x - d)) / (2 * h)


def christoffel(a, chart, x, h=1e-4):
    """Gamma^m_ij of the induced metric (central differences of the metric)."""
    x = np.asarray(x, dtype=float)
    n = chart.dim
    g = induced_metric(a, chart, x)
    dg = np.array([_partial(lambda y: induced_metric(a, chart, y), x, k, h) for k in range(n)])
    # dg[k, i, j] = d_k g_ij;  low[i, j, l] = Gamma_{l, ij}
    low = 0.5 * (dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    return np.einsum("ml,ijl->mij", np.linalg.inv(g), low)


def intrinsic_curvature(a, chart, x, h_metric=1e-4, h_outer=1e-3):
    """R^H_ijkl = h(R(d_i, d_j) d_k, d_l) from the induced metric (nested differences)."""
    x = np.asarray(x, dtype=float)
    n = chart.dim
    gam = christoffel(a, chart, x, h_metric)
    dgam = np.array([_partial(lambda y: christoffel(a, chart, y, h_metric), x, k, h_outer)
                     for k in range(n)])
    # R^m_{ijk} = d_i Gamma^m_jk - d_j Gamma^m_ik + Gamma^m_in Gamma^n_jk - Gamma^m_jn Gamma^n_ik
    Rup = (np.einsum("imjk->mijk", dgam) - np.einsum("jmik->mijk", dgam)
           + np.einsum("min,njk->mijk", gam, gam) - np.einsum("mjn,nik->mijk", gam, gam))
    g = induced_metric(a, chart, x)
    return np.einsum("lm,mijk->ijkl", g, Rup)


def ambient_curvature_coords(a, p, T):
    n = len(T)
    out = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                r = curvature_Ra(a, p, T[i], T[j], T[k])
                for l in range(n):
                    out[i, j, k, l] = metric_ga(a, p, r, T[l])
                    out[j, i, k, l] = -out[i, j, k, l]
    return out


def gauss_residual(a, chart, x, alpha_coords=None):
    """max |R^H_ijkl - R_ijkl - alpha_il alpha_jk + alpha_ik alpha_jl| over coordinate indices."""
    x = np.asarray(x, dtype=float)
    p = chart.point(x)
    T = chart.horizontal_tangents(x)
    if alpha_coords is None:
        alpha_coords, _, _ = _alpha_coordinates(a, chart, x)
    al = alpha_coords
    RH = intrinsic_curvature(a, chart, x)
    R = ambient_curvature_coords(a, p, T)
    gauss = R + np.einsum("il,jk->ijkl", al, al) - np.einsum("ik,jl->ijkl", al, al)
    return float(np.max(np.abs(RH - gauss)))


def codazzi_residual(a, chart, x, triple=None, h=1e-4):
    """|g_a(R(X,Y)Z, N_a) - (nabla_X alpha)(Y,Z) + (nabla_Y alpha)(X,Z)| in coordinates.

    ``triple`` selects (i, j, k); by default the maximum over all triples.
    """
    x = np.asarray(x, dtype=float)
    n = chart.dim
    al, T, N_a = _alpha_coordinates(a, chart, x)
    p = chart.point(x)
    dal = np.array([_partial(lambda y: _alpha_coordinates(a, chart, y)[0], x, k, h)
                    for k in range(n)])
    gam = christoffel(a, chart, x)
    # (nabla_i alpha)_jk = d_i alpha_jk - Gamma^m_ij alpha_mk - Gamma^m_ik alpha_jm
    nal = dal - np.einsum("mij,mk->ijk", gam, al) - np.einsum("mik,jm->ijk", gam, al)
    triples = [triple] if triple is not None else [
        (i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(n)]
    worst = 0.0
    for i, j, k in triples:
        lhs = metric_ga(a, p, curvature_Ra(a, p, T[i], T[j], T[k]), N_a)
        worst = max(worst, abs(lhs - (nal[i, j, k] - nal[j, i, k])))
    return worst


# --------------------------------------------------------------------------
# obstruction scalars
# --------------------------------------------------------------------------


@dataclass
class ObstructionValue:
    name: str
    closed_form: float
    numeric: float
    gap_from_zero: float

    @property
    def agreement(self):
        return abs(self.closed_form - self.numeric)


def _sample_normal(p, theta, rng):
    """g-unit normal with nearly Kaehler angle theta at the lift p."""
    n1 = proj_D1(p, rng.standard_normal(8))
    n2 = proj_D2(p, rng.standard_normal(8))
    n1 = n1 / norm_ga(NK, p, n1)
    n2 = n2 / norm_ga(NK, p, n2)
    return np.cos(theta) * n2 + np.sin(theta) * n1


def codazzi_obstruction_closed(a, theta=None):
    if theta is None:
        return -1.0 / (2 * np.sqrt(2 * a))
    return np.cos(theta) / (np.sqrt(2 * a) * np.sqrt(2 + a - (a - 2) * np.cos(2 * theta)))


def codazzi_obstruction(a, theta=None, rng=None, p=None):
    """g_a(R^a(e1, e4) e5, N_a) (non-horizontal) or g_a(R^a(e3, e4) e5, N_a) (theta=None).

    Frames are g-orthonormal.  The direct non-horizontal value is the negative of
    the printed closed form (the product is invariant under N -> -N); only its
    non-vanishing matters.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    p = normalize(rng.standard_normal(8)) if p is None else p
    if theta is None:
        N = _sample_normal(p, 0.0, rng)
        e = frame_horizontal(p, N)
        N_a = normal_convert(a, p, 0.0, N=N)
        numeric = metric_ga(a, p, curvature_Ra(a, p, e[2], e[3], e[4]), N_a)
        name = "codazzi_horizontal"
    else:
        N = _sample_normal(p, theta, rng)
        e = frame_nonhorizontal(p, N, theta)
        N_a = normal_convert(a, p, theta, N=N)
        numeric = metric_ga(a, p, curvature_Ra(a, p, e[0], e[3], e[4]), N_a)
        name = "codazzi_nonhorizontal"
    closed = codazzi_obstruction_closed(a, theta)
    return ObstructionValue(name, float(closed), float(numeric), abs(float(closed)))


def tu_obstruction_closed(a):
    s = np.sqrt(2 * a)
    return (2 - 2 * a + s * a) / (s * a)


def tu_obstruction_derived(a):
    """h^a(e1, e5) = 1/a in the g_a-orthonormal horizontal frame (direct evaluation)."""
    return 1.0 / a


def horizontal_h15(a, p, N, A=None):
    """h^a(e1, e5) = -g_a(e5, nabla^a_{e1} N_a) for a horizontal normal N.

    N is extended along the twistor fibre as the basic field N(p.u) = N(p).u,
    which is the normal of every horizontal hypersurface through p; e1 = p.w is
    tangent to that fibre.  The frame is renormalised to g_a-unit length.
    """
    e = normalize_ga(a, p, frame_horizontal(p, N, A))
    N_a = normal_convert(a, p, 0.0, N=N)
    w = np.array([0.0, 0.0, np.dot(e[0], R_J @ p), np.dot(e[0], R_K @ p)])
    dN = horizontal(p, rmul(N_a, w)) + difference_tensor(a, p, e[0], N_a)
    return -metric_ga(a, p, e[4], dN), e


def tu_obstruction(a, rng=None, p=None):
    """Totally umbilical obstruction: printed closed form and direct connection evaluation."""
    rng = np.random.default_rng(0) if rng is None else rng
    p = normalize(rng.standard_normal(8)) if p is None else p
    N = _sample_normal(p, 0.0, rng)
    numeric, _ = horizontal_h15(a, p, N)
    closed = tu_obstruction_closed(a)
    return ObstructionValue("totally_umbilical", float(closed), float(numeric), abs(float(closed)))


def _as_vector(v, n=5):
    if isinstance(v, (int, np.integer)):
        out = np.zeros(n)
        out[v] = 1.0
        return out
    return np.asarray(v, dtype=float)


def csc_rhs_cyclic(alpha, U, X, Y, Z, gram=None):
    """Cyclic sum over (U, X, Y) of -alpha((U ^ X) Y, Z) - alpha(Y, (U ^ X) Z).

    Vectors are frame coefficients (or frame indices); ``gram`` is the metric in
    that frame (identity for an orthonormal frame).
    """
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.shape[0]
    g = np.eye(n) if gram is None else np.asarray(gram, dtype=float)
    U, X, Y, Z = (_as_vector(v, n) for v in (U, X, Y, Z))
    ip = lambda u, v: u @ g @ v  # noqa: E731
    wedge = lambda u, v, w: ip(v, w) * u - ip(u, w) * v  # noqa: E731
    A = lambda u, v: u @ alpha @ v  # noqa: E731
    total = 0.0
    for u, x, y in ((U, X, Y), (X, Y, U), (Y, U, X)):
        total += -A(wedge(u, x, y), Z) - A(y, wedge(u, x, Z))
    return float(total)


def csc_lhs(a, p, N_a, alpha, shape_op, U, X, Y, Z, h=FD_STEP):
    """Left side of the constant-sectional-curvature necessary condition.

    ``alpha(u, v)`` is the scalar second fundamental form and ``shape_op(u)`` the
    g_a shape operator, so that nabla_U N_a = -shape_op(U).
    """
    R = lambda x, y, z: curvature_Ra(a, p, x, y, z)  # noqa: E731
    g = lambda u, v: metric_ga(a, p, u, v)  # noqa: E731
    total = 0.0
    for u, x, y in ((U, X, Y), (X, Y, U), (Y, U, X)):
        total += g(nabla_Ra(a, p, u, x, y, Z, h), N_a)
        total += alpha(u, x) * g(R(N_a, y, Z), N_a)
        total += alpha(u, y) * g(R(x, N_a, Z), N_a)
        total += g(R(x, y, Z), -shape_op(u))
    return float(total)


def csc_necessary_condition(a, chart, x, quadruples=None):
    """max |csc_lhs| over frame quadruples at chart parameter x (diagnostic)."""
    sd = second_fundamental_form(a, chart, x)
    e = sd.frame
    if quadruples is None:
        quadruples = [(2, 3, 1, 2), (1, 4, 0, 1), (0, 1, 2, 3), (2, 4, 3, 0)]
    vals = [csc_lhs(a, sd.point, sd.N_a, sd.second_fundamental, sd.shape_apply,
                    e[i], e[j], e[k], e[l]) for i, j, k, l in quadruples]
    return float(np.max(np.abs(vals)))


def extrinsic_homogeneity_obstruction(alpha, theta):
    """1 + a15^2 + a45^2 + a55^2 + cos^2 theta - a25^2 cot^2 theta (frame indices 1-based)."""
    A = np.asarray(alpha, dtype=float)
    return float(1 + A[0, 4] ** 2 + A[3, 4] ** 2 + A[4, 4] ** 2 + np.cos(theta) ** 2
                 - A[1, 4] ** 2 / np.tan(theta) ** 2)
