"""Siegel-model boundary geometry.

The punctured boundary of complex hyperbolic n-space is the generalized
Heisenberg group C^{n-1} x R with product

    (Z1, t1) . (Z2, t2) = (Z1 + Z2, t1 + t2 + 2 Im(Z1 Z2*)).

This module provides the group law, the point-at-infinity stabilizer
generators (translations, rotations, dilations) and their boundary
actions, the deformed-cusp orbit in closed form together with its
matrix-action oracle, the R x S^1 discreteness trichotomy on exact
inputs, and an empirical orbit-gap probe.

Real hyperbolic boundaries are the special case of real Z and t = 0;
the same matrices and actions apply verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .matrices import GeometryError
from .scalars import Angle, Surd

RealLike = Union[float, int, Fraction, Surd]


def _as_float(x: RealLike) -> float:
    if isinstance(x, Surd):
        return x.value
    return float(x)


@dataclass(frozen=True)
class HeisPoint:
    """A point (Z, t) of the generalized Heisenberg group."""

    z: tuple[complex, ...]
    t: float

    def __init__(self, z: Sequence[complex], t: float):
        object.__setattr__(self, "z", tuple(complex(w) for w in z))
        object.__setattr__(self, "t", float(t))

    @classmethod
    def origin(cls, k: int = 2) -> "HeisPoint":
        return cls((0,) * k, 0.0)

    def __mul__(self, other: "HeisPoint") -> "HeisPoint":
        if len(self.z) != len(other.z):
            raise GeometryError("Heisenberg points of different dimensions")
        twist = 2.0 * sum((a * b.conjugate()).imag for a, b in zip(self.z, other.z))
        return HeisPoint(tuple(a + b for a, b in zip(self.z, other.z)),
                         self.t + other.t + twist)

    def inverse(self) -> "HeisPoint":
        return HeisPoint(tuple(-a for a in self.z), -self.t)

    def approx_equal(self, other: "HeisPoint", tol: float = 1e-10) -> bool:
        return (len(self.z) == len(other.z)
                and max(abs(a - b) for a, b in zip(self.z, other.z)) <= tol
                and abs(self.t - other.t) <= tol)


def heis_mul(p: HeisPoint, q: HeisPoint) -> HeisPoint:
    return p * q


def box_distance(p: HeisPoint, q: HeisPoint) -> float:
    """Homogeneous box quasi-metric max(|dZ|, |dt|^(1/2))."""
    dz = math.sqrt(sum(abs(a - b) ** 2 for a, b in zip(p.z, q.z)))
    return max(dz, math.sqrt(abs(p.t - q.t)))


# ---------------------------------------------------------------------------
# Stabilizer of the point at infinity
# ---------------------------------------------------------------------------

def translation_matrix(p: HeisPoint) -> np.ndarray:
    """Heisenberg translation by (Z, t) as a Siegel-model matrix."""
    k = len(p.z)
    z = np.array(p.z, dtype=complex)
    g = np.eye(k + 2, dtype=complex)
    g[0, 1:k + 1] = -z.conj()
    g[1:k + 1, k + 1] = z
    g[0, k + 1] = -(np.vdot(z, z).real - 1j * p.t) / 2
    return g


def rotation_matrix(U: np.ndarray) -> np.ndarray:
    """Heisenberg rotation by a unitary U acting on the Z factor."""
    U = np.asarray(U, dtype=complex)
    k = U.shape[0]
    if np.abs(U.conj().T @ U - np.eye(k)).max() > 1e-12:
        raise GeometryError("rotation block is not unitary within 1e-12")
    g = np.eye(k + 2, dtype=complex)
    g[1:k + 1, 1:k + 1] = U
    return g


def dilation_matrix(r: float, k: int = 2) -> np.ndarray:
    """Heisenberg dilation (Z, t) -> (rZ, r^2 t)."""
    if not r > 0:
        raise GeometryError("dilation factor must be positive")
    g = np.eye(k + 2, dtype=complex)
    g[0, 0] = r
    g[k + 1, k + 1] = 1.0 / r
    return g


def standard_lift(p: HeisPoint, height: float = 0.0) -> np.ndarray:
    """The standard lift ((-|Z|^2 - u + it)/2, Z, 1) at horospherical
    height u (0 on the boundary)."""
    zz = sum(abs(w) ** 2 for w in p.z)
    return np.array([(-zz - height + 1j * p.t) / 2, *p.z, 1.0], dtype=complex)


def boundary_action(g: np.ndarray, p: HeisPoint, tol: float = 1e-10) -> HeisPoint:
    """Projective action of a p_infinity-stabilizing matrix on the
    punctured boundary, in Heisenberg coordinates."""
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    if len(p.z) != n - 2:
        raise GeometryError("point dimension does not match the matrix")
    col = g[:, 0]
    if np.abs(col[1:]).max() > tol * max(np.abs(col).max(), 1.0):
        raise GeometryError("matrix does not fix the point at infinity")
    v = g @ standard_lift(p)
    if abs(v[-1]) < 1e-14:
        raise GeometryError("image escaped the Heisenberg chart")
    v = v / v[-1]
    z = tuple(v[1:-1])
    t = 2.0 * v[0].imag
    zz = sum(abs(w) ** 2 for w in z)
    if abs(v[0].real + zz / 2) > tol * max(1.0, zz):
        raise GeometryError("image is not a boundary point (height drifted)")
    return HeisPoint(z, t)


def matrix_action(g: np.ndarray) -> Callable[[HeisPoint], HeisPoint]:
    return lambda p: boundary_action(g, p)


# ---------------------------------------------------------------------------
# Deformed cusp groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CuspParams:
    """Normalized cusp data: T translates by (a, 0), U by (b1, b2), and
    the deformation multiplies the b2-direction by u on the circle."""

    a: RealLike
    b1: RealLike
    b2: RealLike
    u: Angle

    def __post_init__(self):
        if _as_float(self.a) == 0.0:
            raise GeometryError("cusp parameter a must be nonzero")
        if _as_float(self.b2) == 0.0:
            raise GeometryError("cusp parameter b2 must be nonzero")

    @property
    def orthogonal(self) -> bool:
        return _as_float(self.b1) == 0.0


def cusp_translation_T(params: CuspParams) -> np.ndarray:
    return translation_matrix(HeisPoint((_as_float(params.a), 0.0), 0.0))


def cusp_translation_U(params: CuspParams) -> np.ndarray:
    return translation_matrix(
        HeisPoint((_as_float(params.b1), _as_float(params.b2)), 0.0))


def bent_cusp_U(params: CuspParams) -> np.ndarray:
    """The deformed generator: Diag(1,1,u,1) times the U translation."""
    g = cusp_translation_U(params)
    u = params.u.exp_i()
    g[2, :] = u * g[2, :]
    return g


def orbit_center(params: CuspParams) -> complex:
    """Center u*b2/(1-u) of the rotation that the bent generator
    induces on the second boundary coordinate (undefined at u = 1)."""
    if params.u.is_zero_mod_2pi():
        raise GeometryError("undeformed parameter: the rotation center is undefined")
    u = params.u.exp_i()
    return u * _as_float(params.b2) / (1.0 - u)


def shift_point(p: HeisPoint, params: CuspParams) -> HeisPoint:
    """Raw boundary coordinates -> rotation-centered coordinates."""
    c = orbit_center(params)
    return HeisPoint((p.z[0], p.z[1] - c), p.t)


def unshift_point(p: HeisPoint, params: CuspParams) -> HeisPoint:
    c = orbit_center(params)
    return HeisPoint((p.z[0], p.z[1] + c), p.t)


def orbit_point(params: CuspParams, m: int, n: int, p0: HeisPoint) -> HeisPoint:
    """Closed form for T^m (bent U)^n applied to p0, everything in the
    shifted coordinates (z1, z2 - center, v).

    The vertical increment follows the matrices: a Heisenberg
    translation by real (Z, 0) adds -2 Im(Z . conj(W)) to the vertical
    coordinate (the matrix-action oracle pins the sign).  For n >= 0
    the increment carries the partial rotation sum over u^j z2';
    negative n uses the inverse generator, extending that sum by
    -sum_{j=n}^{-1}.  The faithfulness witness -2 n b2 Im(center) is
    nonzero for every n != 0 away from the half turn.
    """
    if params.u.is_zero_mod_2pi():
        raise GeometryError("closed-form orbit needs u != 1")
    a = _as_float(params.a)
    b1 = _as_float(params.b1)
    b2 = _as_float(params.b2)
    u = params.u.exp_i()
    c_u = orbit_center(params)
    z1, z2 = p0.z
    if n >= 0:
        rot_sum = sum((u ** j * z2).imag for j in range(n))
    else:
        rot_sum = -sum((u ** j * z2).imag for j in range(n, 0))
    z1_new = z1 + m * a + n * b1
    z2_new = u ** n * z2
    v_new = (p0.t - 2.0 * (m * a + n * b1) * z1.imag
             - 2.0 * n * b2 * c_u.imag - 2.0 * b2 * rot_sum)
    return HeisPoint((z1_new, z2_new), v_new)


def orbit_point_via_matrices(params: CuspParams, m: int, n: int,
                             p0: HeisPoint) -> HeisPoint:
    """Independent oracle: apply the explicit matrices T^m (bent U)^n to
    the unshifted point and shift back."""
    g = (np.linalg.matrix_power(cusp_translation_T(params), m)
         @ np.linalg.matrix_power(bent_cusp_U(params), n))
    return shift_point(boundary_action(g, unshift_point(p0, params)), params)


# ---------------------------------------------------------------------------
# The R x S^1 trichotomy
# ---------------------------------------------------------------------------

class RS1Class(Enum):
    NONDISCRETE_Z2 = "nondiscrete-Z2"
    DISCRETE_NON_Z2 = "discrete-nonZ2"
    NONDISCRETE_Z2_RATIONAL = "nondiscrete-Z2-rational"

    def __str__(self) -> str:
        return self.value

    @property
    def is_discrete(self) -> bool:
        return self is RS1Class.DISCRETE_NON_Z2


@dataclass(frozen=True)
class RS1Element:
    """An element (translation, angle) of R x S^1 with exact data."""

    translation: Surd
    angle: Angle

    def __post_init__(self):
        if not isinstance(self.translation, Surd):
            raise TypeError("translation must be an exact Surd; rationality of "
                            "ratios is undecidable from floats -- use the "
                            "sampling probe for raw data")
        if self.translation.is_zero:
            raise GeometryError("translation part must be nonzero")


def rs1_classify(T: RS1Element, U: RS1Element) -> RS1Class:
    """Exact trichotomy for the subgroup generated by T=(a,0), U=(b,theta)
    of R x S^1:

    * a/b irrational:  non-discrete, isomorphic to Z^2;
    * a/b rational and theta a rational multiple of pi:  discrete, not Z^2;
    * a/b rational and theta irrational in pi:  non-discrete, still Z^2.
    """
    if not T.angle.is_zero_mod_2pi():
        raise GeometryError("normalize so the first generator is (a, 0)")
    ratio = T.translation.ratio(U.translation)
    if ratio is None:
        return RS1Class.NONDISCRETE_Z2
    if U.angle.is_pi_rational:
        return RS1Class.DISCRETE_NON_Z2
    return RS1Class.NONDISCRETE_Z2_RATIONAL


def _element_key(m: int, n: int, T: RS1Element, U: RS1Element):
    """Exact identity key of T^m U^n (dedupes coincident elements)."""
    a, b = T.translation, U.translation
    if a.k == b.k:
        trans = ((m * a.q + n * b.q, a.k),)
    else:
        trans = ((m * a.q, a.k), (n * b.q, b.k))
    th = U.angle
    ang = (th.pi_frac * n) % 2 if th.pi_frac is not None else ("raw", n)
    return (trans, ang)


def rs1_probe(T: RS1Element, U: RS1Element, n_elements: int = 10000) -> float:
    """Brute-force density probe: the minimum positive pairwise distance
    (box metric max(|dx|, arc)) among n_elements group elements T^m U^n,
    with m chosen as the closest return of the translation part.

    A value well below the discreteness scale is evidence (not proof)
    of non-discreteness; coincident elements are removed exactly first.
    """
    a = T.translation.value
    b = U.translation.value
    theta = U.angle.value
    pts: dict[object, tuple[float, float]] = {}
    for n in range(n_elements):
        m = -round(n * b / a)
        key = _element_key(m, n, T, U)
        if key in pts:
            continue
        x = m * a + n * b
        ang = math.remainder(n * theta, 2 * math.pi)
        pts[key] = (x, ang)
    uniq = list(pts.values())
    if len(uniq) < 2:
        return math.inf
    xs = np.array([p[0] for p in uniq])
    angs = np.array([p[1] for p in uniq])
    emb = np.column_stack([xs, np.cos(angs), np.sin(angs)])
    tree = cKDTree(emb)
    k = min(9, len(uniq))
    _, idx = tree.query(emb, k=k)
    best = math.inf
    for i, row in enumerate(idx):
        for j in np.atleast_1d(row):
            j = int(j)
            if j == i:
                continue
            dang = abs(math.remainder(angs[i] - angs[j], 2 * math.pi))
            d = max(abs(xs[i] - xs[j]), dang)
            best = min(best, d)
    return best


# ---------------------------------------------------------------------------
# Orbit enumeration, gap probe, CSV dumps
# ---------------------------------------------------------------------------

MAX_ORBIT_RADIUS = 50


def orbit_points(gT: np.ndarray, gU: np.ndarray, p0: HeisPoint,
                 radius: int) -> list[tuple[int, int, HeisPoint]]:
    """All points T^m U^n p0 with |m|, |n| <= radius, via iterated
    boundary actions (deterministic (m, n) lexicographic order)."""
    if radius < 0 or radius > MAX_ORBIT_RADIUS:
        raise GeometryError(f"word radius must be in [0, {MAX_ORBIT_RADIUS}]")
    gU_inv = np.linalg.inv(gU)
    gT_inv = np.linalg.inv(gT)
    un_points = {0: p0}
    for n in range(1, radius + 1):
        un_points[n] = boundary_action(gU, un_points[n - 1])
        un_points[-n] = boundary_action(gU_inv, un_points[-(n - 1)])
    out = []
    for m in range(-radius, radius + 1):
        gTm = np.linalg.matrix_power(gT if m >= 0 else gT_inv, abs(m))
        for n in range(-radius, radius + 1):
            out.append((m, n, boundary_action(gTm, un_points[n])))
    return out


def orbit_gap_probe(gT: np.ndarray, gU: np.ndarray, p0: HeisPoint,
                    radius: int, dup_tol: float = 1e-9) -> float:
    """Minimum positive pairwise box distance among the orbit points of
    word radius `radius`; pairs closer than dup_tol count as coincident
    (and are excluded, so the reported gap is the positive one)."""
    pts = orbit_points(gT, gU, p0, radius)
    k = len(pts[0][2].z)
    Z = np.array([[w for w in p.z] for _, _, p in pts], dtype=complex)
    t = np.array([p.t for _, _, p in pts])
    n = len(pts)
    best = math.inf
    chunk = max(1, min(256, n))
    for start in range(0, n, chunk):
        rows = slice(start, min(start + chunk, n))
        dz2 = np.zeros((rows.stop - rows.start, n))
        for c in range(k):
            diff = Z[rows, c][:, None] - Z[None, :, c]
            dz2 += np.abs(diff) ** 2
        dt = np.abs(t[rows][:, None] - t[None, :])
        dist = np.maximum(np.sqrt(dz2), np.sqrt(dt))
        iu = np.arange(rows.start, rows.stop)[:, None] != np.arange(n)[None, :]
        positive = dist[(dist > dup_tol) & iu]
        if positive.size:
            best = min(best, float(positive.min()))
    return best


def pack_csv_coords(p: HeisPoint) -> tuple[float, float, float, float, float]:
    """Map a boundary point to the fixed CSV columns (z1, z2, v).

    Complex-hyperbolic points (len(Z)=2) pass through; real-hyperbolic
    points (len(Z)=3, t=0) pack as z1 = x, z2 = y + iz, v = 0.
    """
    if len(p.z) == 2:
        z1, z2 = p.z
        return (z1.real, z1.imag, z2.real, z2.imag, p.t)
    if len(p.z) == 3:
        x, y, z = p.z
        return (x.real, 0.0, y.real, z.real, 0.0)
    raise GeometryError("CSV schema covers boundary dimensions 2 and 3 only")


def write_orbit_csv(fp, rows: Iterable[tuple[int, int, HeisPoint]],
                    gap: float | None = None) -> None:
    """RFC-4180 dump with mandatory header and an optional trailing gap
    comment (the one place comments are allowed)."""
    fp.write("m,n,re_z1,im_z1,re_z2,im_z2,v\r\n")
    for m, n, p in rows:
        vals = pack_csv_coords(p)
        fp.write(f"{m},{n}," + ",".join(repr(v) for v in vals) + "\r\n")
    if gap is not None:
        fp.write(f"# gap: {gap!r}\r\n")
