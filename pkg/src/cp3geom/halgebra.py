"""Quaternionic linear algebra on H and H^2 = R^8, the sphere S^7 and its fibrations.

Conventions used throughout the package:

* a quaternion is a length-4 array ``(w, x, y, z)`` for ``w + x i + y j + z k``;
* a point or vector of H^2 is a length-8 array ``(q1, q2)``;
* unit scalars act on the **right** (``p -> p.z``), quaternionic 2x2 matrices
  (Sp(2), and SU(4) through the complex identification) act on the **left**.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

FD_STEP = 1e-5

ONE = np.array([1.0, 0.0, 0.0, 0.0])
QI = np.array([0.0, 1.0, 0.0, 0.0])
QJ = np.array([0.0, 0.0, 1.0, 0.0])
QK = np.array([0.0, 0.0, 0.0, 1.0])


# --------------------------------------------------------------------------
# H
# --------------------------------------------------------------------------

def qmul(a, b):
    """Hamilton product, broadcasting over leading axes (i j = k)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(a, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(b, -1, 0)
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def qconj(a):
    a = np.asarray(a, dtype=float)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm(a):
    return np.linalg.norm(a, axis=-1)


def qexp(v):
    """Exponential of a pure-imaginary quaternion given by its 3 components."""
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v)
    if theta < 1e-300:
        return ONE.copy()
    return np.concatenate([[np.cos(theta)], np.sin(theta) * v / theta])


def left_matrix(a):
    """4x4 real matrix of x -> a x."""
    return np.stack([qmul(a, e) for e in np.eye(4)], axis=-1)


def right_matrix(b):
    """4x4 real matrix of x -> x b."""
    return np.stack([qmul(e, b) for e in np.eye(4)], axis=-1)


# --------------------------------------------------------------------------
# H^2 = R^8
# --------------------------------------------------------------------------

def hpoint(q1, q2):
    return np.concatenate([np.asarray(q1, dtype=float), np.asarray(q2, dtype=float)])


def split(x):
    x = np.asarray(x, dtype=float)
    return x[..., :4], x[..., 4:]


def inner(x, y):
    """Real inner product Re(conj(x1) y1 + conj(x2) y2); plain dot product in R^8."""
    return float(np.dot(x, y))


def rmul(x, u):
    """Right scalar multiplication x.u of a vector of H^2 by a quaternion."""
    x1, x2 = split(x)
    return np.concatenate([qmul(x1, u), qmul(x2, u)], axis=-1)


def right_matrix8(u):
    """8x8 real matrix of x -> x.u on H^2."""
    r = right_matrix(u)
    out = np.zeros((8, 8))
    out[:4, :4] = r
    out[4:, 4:] = r
    return out


R_I = right_matrix8(QI)
R_J = right_matrix8(QJ)
R_K = right_matrix8(QK)


def quat_matrix(entries):
    """8x8 real matrix of the left action of a 2x2 quaternionic matrix.

    ``entries`` has shape (2, 2, 4); entry ``[r, c]`` multiplies component ``c``
    into component ``r``.
    """
    entries = np.asarray(entries, dtype=float)
    out = np.zeros((8, 8))
    for r in range(2):
        for c in range(2):
            out[4 * r:4 * r + 4, 4 * c:4 * c + 4] = left_matrix(entries[r, c])
    return out


def diag_action(A, B):
    """Real 8x8 matrix of (p, q) -> (A p, B q)."""
    return quat_matrix([[A, np.zeros(4)], [np.zeros(4), B]])


# --------------------------------------------------------------------------
# C^4 identification: q = z + j w, so that q.i is complex scaling of (z, w).
# --------------------------------------------------------------------------

def to_complex(x):
    """Complex coordinates (z1, w1, z2, w2) of a point of H^2."""
    x = np.asarray(x, dtype=float)
    out = []
    for q in split(x):
        a, b, c, d = q
        out.extend([a + 1j * b, c - 1j * d])
    return np.array(out)


def from_complex(zw):
    zw = np.asarray(zw, dtype=complex)
    out = []
    for z, w in (zw[:2], zw[2:]):
        out.extend([z.real, z.imag, w.real, -w.imag])
    return np.array(out)


def complex_matrix(U):
    """Real 8x8 matrix of the C-linear map x -> U x (U a 4x4 complex matrix)."""
    U = np.asarray(U, dtype=complex)
    return np.stack([from_complex(U @ to_complex(e)) for e in np.eye(8)], axis=-1)


# --------------------------------------------------------------------------
# S^7
# --------------------------------------------------------------------------

def normalize(x):
    return np.asarray(x, dtype=float) / np.linalg.norm(x)


def tangent_project(p, v):
    """v - <v, p> p."""
    return v - np.dot(v, p) * p


def sphere_exp(p, v, s=1.0):
    """Great circle through p with initial velocity v, evaluated at time s."""
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("degenerate direction")
    out = np.cos(s * nv) * p + np.sin(s * nv) * v / nv
    return out / np.linalg.norm(out)


def round_nabla(p, X, field, jacobian=None, h=FD_STEP):
    """Levi-Civita connection of the round S^7: D_X Y + <X, Y(p)> p.

    ``field`` maps points of S^7 to ambient vectors tangent to the sphere.  When
    ``jacobian`` (the ambient derivative matrix of the field at p) is given the
    result is exact; otherwise D_X Y is a central difference along a great circle.
    """
    y = field(p)
    if jacobian is not None:
        dy = jacobian @ X
    else:
        dy = (field(sphere_exp(p, X, h)) - field(sphere_exp(p, X, -h))) / (2 * h)
    return tangent_project(p, dy + np.dot(X, y) * p)


# --------------------------------------------------------------------------
# Killing fields
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KillingField:
    """Linear vector field q -> M q on R^8, tangent to S^7 (M skew).

    Left sp(2) generators commute with every right scalar multiplication and
    therefore project to CP^3.  ``KillingField.right(u)`` is the field q -> q.u.
    """

    matrix: np.ndarray
    label: str = ""

    @classmethod
    def right(cls, u, label=""):
        return cls(right_matrix8(u), label or "right")

    def __call__(self, q):
        return self.matrix @ q

    def flow(self, s):
        return expm(s * self.matrix)

    def bracket(self, other):
        """Lie bracket of vector fields [self, other] = D_self other - D_other self."""
        return KillingField(other.matrix @ self.matrix - self.matrix @ other.matrix,
                            f"[{self.label},{other.label}]")

    @property
    def projectable(self):
        return all(np.allclose(self.matrix @ r, r @ self.matrix) for r in (R_I, R_J, R_K))


def _sp2_generators():
    gens = []
    for r in range(2):
        for u, name in ((QI, "i"), (QJ, "j"), (QK, "k")):
            entries = np.zeros((2, 2, 4))
            entries[r, r] = u
            gens.append((entries, f"E{r + 1}{r + 1}{name}"))
    for u, name in ((ONE, "1"), (QI, "i"), (QJ, "j"), (QK, "k")):
        entries = np.zeros((2, 2, 4))
        entries[0, 1] = u
        entries[1, 0] = -qconj(u)
        gens.append((entries, f"F{name}"))
    return [KillingField(quat_matrix(e), label) for e, label in gens]


SP2_BASIS = tuple(_sp2_generators())


def sp2_element(coeffs):
    """Skew 8x8 matrix of the sp(2) element with the given 10 coordinates."""
    coeffs = np.asarray(coeffs, dtype=float)
    return sum(c * k.matrix for c, k in zip(coeffs, SP2_BASIS))


def is_anti_hermitian(M, tol=1e-12):
    return np.allclose(M, -M.T, atol=tol)


# --------------------------------------------------------------------------
# fibrations
# --------------------------------------------------------------------------

def hopf_project(p):
    """Canonical representative of the Hopf class p.U(1).

    The right complex phase is fixed so that the largest complex coordinate is
    real and positive; two lifts of one point of CP^3 give the same output.
    """
    zw = to_complex(p)
    m = int(np.argmax(np.abs(zw)))
    phase = zw[m] / abs(zw[m])
    return from_complex(zw / phase)


def twistor_project(p):
    """tau(p) = (2 p1 conj(p2), |p1|^2 - |p2|^2) in S^4 of R^5."""
    p1, p2 = split(p)
    return np.concatenate([2 * qmul(p1, qconj(p2)), [p1 @ p1 - p2 @ p2]])


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------

def random_unit_quaternion(rng):
    return normalize(rng.standard_normal(4))


def random_unit_complex(rng):
    phi = rng.uniform(0, 2 * np.pi)
    return np.array([np.cos(phi), np.sin(phi), 0.0, 0.0])


def random_sphere_point(rng):
    return normalize(rng.standard_normal(8))


def random_sp2(rng, scale=1.0):
    """Random element of Sp(2) as a real 8x8 matrix."""
    return expm(scale * sp2_element(rng.standard_normal(10)))


def random_su4(rng, scale=1.0):
    """Random element of SU(4) (complex 4x4)."""
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = (a - a.conj().T) / 2
    h -= np.trace(h) / 4 * np.eye(4)
    return expm(scale * h)
