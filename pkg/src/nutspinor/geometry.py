"""Metric family, orthonormal frames, connection, curvature, and mass.

The metric family lives on r > N with Euler angles (theta, phi, psi) on the
3-sphere fibres.  Writing sigma_1, sigma_2, sigma_3 for the Maurer-Cartan
1-forms,

    g = f(r)^2 dr^2 + (r^2 - N^2)(sigma_1^2 + sigma_2^2)
        + 4 N^2 f(r)^-2 sigma_3^2,

with squashing profile f^2 = (r^2 - N^2) / (r^2 + C1 r + C2).  The choices
(C1, C2) = (-2N, N^2) and (2N, N^2) collapse the denominator to (r -+ N)^2
and give the two Ricci-flat special cases; the general admissible range
C1 >= -2N, -N^2 - N C1 <= C2 <= C1^2/4 gives a scalar-flat metric whose
total mass is -4 N C1.

Conventions
-----------
Orthonormal coframe rows e^1..e^4 are stored against the coordinate basis
(dr, dtheta, dphi, dpsi); frame rows e_1..e_4 against (d/dr, ..., d/dpsi).
Connection 1-forms omega^a_b are stored by their components on the coframe,
``omega[a, b, c]`` = component of omega^a_b on e^c (0-based indices).
Curvature 2-forms R^a_b are stored as antisymmetric coefficient matrices
``riemann[a, b, i, j]`` with R^a_b = sum_{i<j} riemann[a,b,i,j] e^i ^ e^j.

All operations are pure functions of their arguments and safe to evaluate
concurrently over grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, PoleError

# Finite-difference policy: 4th-order central stencils with a per-coordinate
# relative step.  Residual targets of 1e-6 sit comfortably above the ~1e-10
# truncation + roundoff floor this gives in double precision.
FD_REL_STEP = 1e-5

# Evaluation floors above r = N: f blows up like (r-N)^(-1/2) for the
# positive-charge profile, so it gets the wider margin.
R_FLOOR_TAUB_NUT = 1e-6
R_FLOOR_GENERIC = 1e-8

_SIN_FLOOR = 1e-14


class Profile(Enum):
    TAUB_NUT = "taub_nut"
    NEGATIVE_NUT = "negative_nut"
    SCALAR_FLAT = "scalar_flat"


@dataclass(frozen=True)
class MetricParams:
    """NUT parameter N > 0 and squashing-profile coefficients (C1, C2)."""

    N: float
    C1: float
    C2: float
    profile: Profile = Profile.SCALAR_FLAT

    def __post_init__(self):
        if not self.N > 0:
            raise DomainError(f"NUT parameter N={self.N} must be positive")
        N = self.N
        if self.profile is Profile.TAUB_NUT:
            if (self.C1, self.C2) != (-2.0 * N, N * N):
                raise DomainError("positive-charge profile forces (C1, C2) = (-2N, N^2)")
        elif self.profile is Profile.NEGATIVE_NUT:
            if (self.C1, self.C2) != (2.0 * N, N * N):
                raise DomainError("negative-charge profile forces (C1, C2) = (2N, N^2)")
        else:
            if self.C1 < -2.0 * N - 1e-12:
                raise DomainError(f"C1={self.C1} below the admissible floor -2N")
            lo = -N * N - N * self.C1
            hi = self.C1 * self.C1 / 4.0
            if not (lo - 1e-12 <= self.C2 <= hi + 1e-12):
                raise DomainError(
                    f"C2={self.C2} outside the admissible range [{lo}, {hi}]"
                )

    @classmethod
    def taub_nut(cls, N: float) -> "MetricParams":
        return cls(N, -2.0 * N, N * N, Profile.TAUB_NUT)

    @classmethod
    def negative_nut(cls, N: float) -> "MetricParams":
        return cls(N, 2.0 * N, N * N, Profile.NEGATIVE_NUT)

    @classmethod
    def scalar_flat(cls, N: float, C1: float, C2: float) -> "MetricParams":
        return cls(N, C1, C2, Profile.SCALAR_FLAT)

    @property
    def r_floor(self) -> float:
        margin = R_FLOOR_TAUB_NUT if self.profile is Profile.TAUB_NUT else R_FLOOR_GENERIC
        return self.N * (1.0 + margin)


class CoordPoint(NamedTuple):
    """Coordinates (r, theta, phi, psi); theta strictly inside (0, pi)."""

    r: float
    theta: float
    phi: float
    psi: float

    def shifted(self, axis: int, delta: float) -> "CoordPoint":
        vals = list(self)
        vals[axis] += delta
        return CoordPoint(*vals)


def validate_point(params: MetricParams, point: CoordPoint) -> None:
    if point.r < params.r_floor:
        raise DomainError(
            f"r={point.r} below the evaluation floor {params.r_floor} for {params.profile}"
        )
    if abs(math.sin(point.theta)) < _SIN_FLOOR:
        raise PoleError(f"theta={point.theta} sits on a frame pole (sin theta = 0)")


@dataclass(frozen=True)
class FrameData:
    """Orthonormal coframe and dual frame as 4x4 coordinate-component rows."""

    coframe: np.ndarray
    frame: np.ndarray


@dataclass(frozen=True)
class ConnectionForms:
    """Levi-Civita connection 1-forms; omega[a, b, c] on the coframe basis."""

    omega: np.ndarray  # shape (4, 4, 4), antisymmetric in (a, b)


@dataclass(frozen=True)
class CurvatureData:
    """Curvature 2-forms, Ricci diagonal, scalar curvature, and the two
    radial coefficient functions entering the curvature display."""

    riemann: np.ndarray   # shape (4, 4, 4, 4)
    ricci_diag: np.ndarray
    scalar: float
    coeff_a: float
    coeff_b: float


# ---------------------------------------------------------------------------
# profile and derivatives

def _denominator(params: MetricParams, r: float) -> float:
    return r * r + params.C1 * r + params.C2


def profile_f(params: MetricParams, r: float) -> float:
    """Squashing profile f(r) = sqrt((r^2 - N^2) / (r^2 + C1 r + C2))."""
    if r < params.r_floor:
        raise DomainError(f"r={r} below evaluation floor {params.r_floor}")
    h = _denominator(params, r)
    if h <= 0.0:
        raise DomainError(f"profile denominator r^2 + C1 r + C2 = {h} <= 0 at r={r}")
    return math.sqrt((r * r - params.N ** 2) / h)


def profile_f_prime(params: MetricParams, r: float) -> float:
    """Closed-form df/dr."""
    f = profile_f(params, r)
    h = _denominator(params, r)
    F = (r * r - params.N ** 2) / h
    Fp = (2.0 * r - F * (2.0 * r + params.C1)) / h
    return Fp / (2.0 * f)


def profile_f_second(params: MetricParams, r: float) -> float:
    """Closed-form d^2f/dr^2."""
    f = profile_f(params, r)
    h = _denominator(params, r)
    hp = 2.0 * r + params.C1
    F = (r * r - params.N ** 2) / h
    Fp = (2.0 * r - F * hp) / h
    Fpp = (2.0 - 2.0 * F) / h - 2.0 * Fp * hp / h
    return Fpp / (2.0 * f) - Fp * Fp / (4.0 * F * f)


# ---------------------------------------------------------------------------
# frames

def maurer_cartan(theta: float, psi: float) -> np.ndarray:
    """Rows sigma_1, sigma_2, sigma_3 on (dr, dtheta, dphi, dpsi)."""
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(psi), math.cos(psi)
    return np.array(
        [
            [0.0, sp, -st * cp, 0.0],
            [0.0, -cp, -st * sp, 0.0],
            [0.0, 0.0, ct, 1.0],
        ]
    )


def build_frames(params: MetricParams, point: CoordPoint) -> FrameData:
    """Orthonormal coframe e^1..e^4 and dual frame e_1..e_4 at a point."""
    validate_point(params, point)
    r, theta, _, psi = point
    f = profile_f(params, r)
    u = math.sqrt(r * r - params.N ** 2)
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(psi), math.cos(psi)
    sig = maurer_cartan(theta, psi)

    coframe = np.zeros((4, 4))
    coframe[0, 0] = f
    coframe[1] = u * sig[0]
    coframe[2] = u * sig[1]
    coframe[3] = (2.0 * params.N / f) * sig[2]

    frame = np.zeros((4, 4))
    frame[0, 0] = 1.0 / f
    frame[1] = np.array([0.0, sp, -cp / st, ct * cp / st]) / u
    frame[2] = np.array([0.0, -cp, -sp / st, ct * sp / st]) / u
    frame[3, 3] = f / (2.0 * params.N)
    return FrameData(coframe=coframe, frame=frame)


def metric_matrix(params: MetricParams, point: CoordPoint) -> np.ndarray:
    """Coordinate metric assembled directly from the defining expression."""
    r = point.r
    f = profile_f(params, r)
    u2 = r * r - params.N ** 2
    sig = maurer_cartan(point.theta, point.psi)
    g = np.zeros((4, 4))
    g[0, 0] = f * f
    g += u2 * (np.outer(sig[0], sig[0]) + np.outer(sig[1], sig[1]))
    g += (4.0 * params.N ** 2 / (f * f)) * np.outer(sig[2], sig[2])
    return g


# ---------------------------------------------------------------------------
# connection and curvature

def connection_forms(params: MetricParams, point: CoordPoint) -> ConnectionForms:
    """The six nonzero connection 1-forms plus antisymmetric partners."""
    validate_point(params, point)
    r = point.r
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    u2 = r * r - params.N ** 2
    c_r = r / (u2 * f)
    c_n = params.N / (u2 * f)
    omega = np.zeros((4, 4, 4))

    def put(a, b, c, val):
        omega[a - 1, b - 1, c - 1] = val
        omega[b - 1, a - 1, c - 1] = -val

    put(2, 1, 2, c_r)
    put(3, 1, 3, c_r)
    put(4, 1, 4, -fp / (f * f))
    put(3, 2, 4, c_n - f / (2.0 * params.N))
    put(4, 2, 3, c_n)
    put(4, 3, 2, -c_n)
    return ConnectionForms(omega=omega)


def curvature(params: MetricParams, point: CoordPoint) -> CurvatureData:
    """Curvature 2-forms, Ricci diagonal, and scalar curvature."""
    validate_point(params, point)
    r = point.r
    N = params.N
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    fpp = profile_f_second(params, r)
    u2 = r * r - N * N
    A = (N * N * f + r * u2 * fp) / (u2 * u2 * f ** 3)
    B = (N * r * f + N * u2 * fp) / (u2 * u2 * f ** 3)

    riemann = np.zeros((4, 4, 4, 4))

    def put(a, b, i, j, val):
        # R^a_b += val * e^i ^ e^j
        for (aa, bb, s1) in ((a - 1, b - 1, 1.0), (b - 1, a - 1, -1.0)):
            riemann[aa, bb, i - 1, j - 1] += s1 * val
            riemann[aa, bb, j - 1, i - 1] -= s1 * val

    r41 = (f * fpp - 3.0 * fp * fp) / f ** 4
    r32 = (u2 * f * f - 3.0 * N * N - r * r) / (u2 * u2 * f * f)
    put(2, 1, 2, 1, A)
    put(2, 1, 4, 3, -B)
    put(3, 1, 3, 1, A)
    put(3, 1, 4, 2, B)
    put(4, 1, 4, 1, r41)
    put(4, 1, 3, 2, 2.0 * B)
    put(3, 2, 4, 1, 2.0 * B)
    put(3, 2, 3, 2, r32)
    put(4, 2, 3, 1, B)
    put(4, 2, 4, 2, A)
    put(4, 3, 2, 1, -B)
    put(4, 3, 4, 3, A)

    ricci_val = (N * N - params.C2) / (u2 * u2)
    ricci_diag = np.array([ricci_val, -ricci_val, -ricci_val, ricci_val])
    scalar = (
        -2.0
        * (f * f - f ** 4 - 4.0 * r * f * fp - u2 * f * fpp + 3.0 * u2 * fp * fp)
        / (u2 * f ** 4)
    )
    return CurvatureData(
        riemann=riemann, ricci_diag=ricci_diag, scalar=scalar, coeff_a=A, coeff_b=B
    )


def ricci_from_riemann(riemann: np.ndarray) -> np.ndarray:
    """Contract curvature coefficients to the Ricci tensor Ric_bd."""
    return np.einsum("abad->bd", riemann)


# ---------------------------------------------------------------------------
# mass and volume

def total_mass(params: MetricParams, r_cutoff: float) -> float:
    """Boundary mass integral of the deviation from the flat reference
    metric, evaluated on the sphere r = r_cutoff.

    The radial integrand 2r(f^2-1)/(r^2-N^2) + 2f'/f^3 is multiplied by the
    boundary density 2N(r^2-N^2) and the angular volume 16 pi^2, and divided
    by 4 vol(S^3); the limit r_cutoff -> infinity is -4 N C1.
    """
    r = float(r_cutoff)
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    u2 = r * r - params.N ** 2
    integrand = 2.0 * r * (f * f - 1.0) / u2 + 2.0 * fp / f ** 3
    # (1 / (4 vol(S^3))) * integrand * 2N u2 * 16 pi^2 with vol(S^3) = 2 pi^2
    return 4.0 * params.N * u2 * integrand


def volume_density(params: MetricParams, point: CoordPoint) -> float:
    """Density of the volume element in (dr dtheta dphi dpsi)."""
    r = point.r
    return 2.0 * params.N * (r * r - params.N ** 2) * abs(math.sin(point.theta))


# ---------------------------------------------------------------------------
# finite differences and exterior derivatives

def fd4_partial(fun: Callable[[CoordPoint], np.ndarray], point: CoordPoint,
                axis: int, rel_step: float = FD_REL_STEP) -> np.ndarray:
    """4th-order central difference of an array-valued function of a point."""
    h = rel_step * (1.0 + abs(point[axis]))
    f_m2 = np.asarray(fun(point.shifted(axis, -2 * h)))
    f_m1 = np.asarray(fun(point.shifted(axis, -h)))
    f_p1 = np.asarray(fun(point.shifted(axis, h)))
    f_p2 = np.asarray(fun(point.shifted(axis, 2 * h)))
    return (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h)


def fd4_gradient(fun: Callable[[CoordPoint], np.ndarray], point: CoordPoint,
                 rel_step: float = FD_REL_STEP) -> np.ndarray:
    """All four coordinate partials, stacked on a new leading axis."""
    return np.stack([fd4_partial(fun, point, mu, rel_step) for mu in range(4)])


def exterior_derivative_fd(covector_fn: Callable[[CoordPoint], np.ndarray],
                           point: CoordPoint,
                           rel_step: float = FD_REL_STEP) -> np.ndarray:
    """d of a coordinate covector field by finite differences.

    Returns the antisymmetric matrix (d w)_{mu nu} = d_mu w_nu - d_nu w_mu.
    """
    grad = fd4_gradient(covector_fn, point, rel_step)
    return grad - grad.T


def first_structure_residual(params: MetricParams, point: CoordPoint,
                             rel_step: float = FD_REL_STEP) -> float:
    """Max norm of d e^a + omega^a_b ^ e^b over a = 1..4 (coordinates)."""
    frames = build_frames(params, point)
    conn = connection_forms(params, point)
    cof = frames.coframe
    worst = 0.0
    for a in range(4):
        dw = exterior_derivative_fd(
            lambda q, a=a: build_frames(params, q).coframe[a], point, rel_step
        )
        for b in range(4):
            wab = conn.omega[a, b] @ cof  # coordinate components of omega^a_b
            dw += np.outer(wab, cof[b]) - np.outer(cof[b], wab)
        worst = max(worst, float(np.max(np.abs(dw))))
    return worst


def curvature_from_connection_fd(params: MetricParams, point: CoordPoint,
                                 rel_step: float = FD_REL_STEP) -> np.ndarray:
    """Curvature coefficients d omega^a_b + omega^a_c ^ omega^c_b by finite
    differences, re-expressed on the orthonormal coframe basis.

    Returns an array of the same layout as ``CurvatureData.riemann``.
    """
    frames = build_frames(params, point)
    conn = connection_forms(params, point)
    cof = frames.coframe
    frame = frames.frame
    out = np.zeros((4, 4, 4, 4))
    for a in range(4):
        for b in range(a):
            def w_coord(q, a=a, b=b):
                return connection_forms(params, q).omega[a, b] @ build_frames(params, q).coframe
            two_form = exterior_derivative_fd(w_coord, point, rel_step)
            for c in range(4):
                wac = conn.omega[a, c] @ cof
                wcb = conn.omega[c, b] @ cof
                two_form += np.outer(wac, wcb) - np.outer(wcb, wac)
            # push coordinate 2-form onto the orthonormal basis
            coeffs = frame @ two_form @ frame.T
            out[a, b] = coeffs
            out[b, a] = -coeffs
    return out


# ---------------------------------------------------------------------------
# almost-complex structures

def tilde_coframe(params: MetricParams, point: CoordPoint, delta: int) -> np.ndarray:
    """The rotated orthonormal coframe used by the three almost-complex
    structures; delta = +-1 flips the fibre direction."""
    if delta not in (1, -1):
        raise DomainError(f"delta={delta} must be +1 or -1")
    r, theta, phi, _ = point
    f = profile_f(params, r)
    u = math.sqrt(r * r - params.N ** 2)
    st, ct = math.sin(theta), math.cos(theta)
    sf, cf = math.sin(phi), math.cos(phi)
    e1 = np.array([f * st * cf, u * ct * cf, -u * st * sf, 0.0])
    e2 = np.array([f * st * sf, u * ct * sf, u * st * cf, 0.0])
    e3 = np.array([f * ct, -u * st, 0.0, 0.0])
    e4 = (2.0 * delta * params.N / f) * np.array([0.0, 0.0, ct, 1.0])
    return np.stack([e1, e2, e3, e4])


_J_PAIRS = {1: ((0, 1), (2, 3)), 2: ((0, 2), (3, 1)), 3: ((0, 3), (1, 2))}


def complex_structure_residual(params: MetricParams, j_index: int, delta: int,
                               point: CoordPoint,
                               rel_step: float = FD_REL_STEP) -> float:
    """Norm of the (0,2)-part of d of the two (1,0)-forms of J_1, J_2 or J_3.

    Vanishes (to finite-difference tolerance) exactly when
    (C1, C2) = (-2 delta N, N^2), i.e. on the two Ricci-flat profiles.
    """
    if j_index not in _J_PAIRS:
        raise DomainError(f"j_index={j_index} must be 1, 2 or 3")
    validate_point(params, point)
    pairs = _J_PAIRS[j_index]

    def holomorphic_forms(q: CoordPoint) -> np.ndarray:
        e = tilde_coframe(params, q, delta)
        return np.stack(
            [e[pairs[0][0]] + 1j * e[pairs[0][1]], e[pairs[1][0]] + 1j * e[pairs[1][1]]]
        )

    e = tilde_coframe(params, point, delta)
    dual = np.linalg.inv(e.T)  # rows: dual frame vectors of the tilde coframe
    zbar1 = 0.5 * (dual[pairs[0][0]] + 1j * dual[pairs[0][1]])
    zbar2 = 0.5 * (dual[pairs[1][0]] + 1j * dual[pairs[1][1]])
    total = 0.0
    for which in range(2):
        dw = exterior_derivative_fd(
            lambda q, w=which: holomorphic_forms(q)[w], point, rel_step
        )
        total += abs(zbar1 @ dw @ zbar2) ** 2
    return math.sqrt(total)


def complex_structure_q_factor(params: MetricParams, r: float, delta: int) -> float:
    """The scalar obstruction factor whose vanishing makes all three
    almost-complex structures integrable."""
    N = params.N
    h = _denominator(params, r)
    if h <= 0:
        raise DomainError("profile denominator nonpositive")
    return 2.0 * (r * r - N * N) * math.sqrt(h) - (r + delta * N) * (
        2.0 * r * r + 3.0 * params.C1 * r + 2.0 * delta * N * r
        + delta * N * params.C1 + 4.0 * params.C2
    )
