"""Closed-form solution families and the separated mode machinery.

Families implemented, each with its parameter-validity predicate, analytic
coordinate derivatives, and the first-order radial/angular systems it must
satisfy:

* parallel spinors of the two Ricci-flat profiles;
* harmonic spinors built from them (one non-integrable on the positive
  charge profile, two square-integrable on the negative one);
* the self-dual Maxwell 2-form and the two spin-3/2 zero modes;
* separated Dirac modes: hypergeometric angular profiles (coupling constant
  eta nonzero), power-law angular profiles (eta = 0), power-law radial
  profiles (massless case on the scalar-flat family), and Kummer-function
  radial profiles (nonzero eigenvalue on the negative-charge profile);
* separated spin-3/2 modes: power-law angular/radial profiles (zero
  eigenvalue) and Kummer radial profiles (nonzero eigenvalue on the
  positive-charge profile).

Sign conventions
----------------
The first-order radial system encoded in :func:`dirac_radial_rhs` carries
-f h_2 in its first two rows.  This is the sign forced by the first-order
matrix form of the Dirac operator (and validated numerically against it);
everything downstream, including the Kummer radial profiles, is consistent
with it.

Square-root branches
--------------------
The exponents eps_s of the Kummer families use the fixed two-sheeted root
from :mod:`nutspinor.specfun`; both sheets k = 0, 1 solve the radial
systems, and the sheet is an explicit argument so callers can record which
one they verified.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from .clifford import GAMMA, SpinorField
from .errors import DomainError
from .geometry import (
    CoordPoint,
    MetricParams,
    Profile,
    connection_forms,
    profile_f,
    profile_f_prime,
)
from .rs_bundle import SpinorOneFormField
from .specfun import BranchInput, KummerParams, branch_sqrt, kummer_1f1

_I = 1j


# ---------------------------------------------------------------------------
# mode parameters

@dataclass(frozen=True)
class DiracModeParams:
    """Separation constants of a Dirac mode.

    m, m1, m2 are integers; lam is the eigenvalue; eta couples the two
    angular profiles.  A nonzero eta forces m1 - m2 = 2 (the phase factors
    of the separated system must be constant).
    """

    m: int
    m1: int
    m2: int
    lam: complex = 0.0
    eta: complex = 0.0

    def __post_init__(self):
        if self.eta != 0 and self.m1 - self.m2 != 2:
            raise DomainError("nonzero eta requires m1 - m2 = 2")

    @property
    def regular_angular(self) -> bool:
        """Regularity of the eta = 0 angular profiles on [0, pi]."""
        if self.m >= 0:
            return self.m1 <= -2 * self.m - 1.5 and self.m2 >= 2 * self.m + 0.5
        return self.m1 <= 2 * self.m + 0.5 and self.m2 >= -2 * self.m - 1.5


@dataclass(frozen=True)
class RSModeParams:
    """Separation constants of a spin-3/2 mode; a nonzero eigenvalue forces
    the first spinor component of the ansatz to vanish."""

    m: int
    m1: int
    m2: int
    lam: complex = 0.0

    @property
    def regular_angular(self) -> bool:
        if self.m >= 0:
            return self.m1 <= -2 * self.m - 1.5 and self.m2 >= 2 * self.m + 0.5
        return self.m1 <= 2 * self.m + 0.5 and self.m2 >= -2 * self.m - 1.5


@dataclass
class RadialProfile:
    """Closed-form radial profile: values and analytic d/dr on a domain."""

    values: Callable[[float], np.ndarray]
    derivative: Callable[[float], np.ndarray]
    domain: Tuple[float, float]
    family: str
    branch_k: int = 0

    def __call__(self, r: float) -> np.ndarray:
        lo, hi = self.domain
        if not (lo < r < hi):
            raise DomainError(f"r={r} outside the open domain ({lo}, {hi})")
        return self.values(r)


@dataclass
class AngularProfile:
    """Angular profile pair with analytic theta-derivatives."""

    jplus: Callable[[float], complex]
    jminus: Callable[[float], complex]
    d_jplus: Callable[[float], complex]
    d_jminus: Callable[[float], complex]
    regular: bool


# ---------------------------------------------------------------------------
# parallel spinors

def _parallel_basis(theta: float, phi: float, psi: float, upper: bool):
    """The two basis spinors and their coordinate partials.

    upper selects rows (1, 2) of the spinor; otherwise rows (3, 4).
    """
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    ep = cmath.exp(_I * psi / 2)
    em = cmath.exp(-_I * psi / 2)
    fm = cmath.exp(-_I * phi / 2)
    fp = cmath.exp(_I * phi / 2)
    pair_a = np.array([ep * s, -em * c]) if upper else np.array([ep * s, em * c])
    pair_b = np.array([ep * c, em * s]) if upper else np.array([ep * c, -em * s])
    d_theta_a = 0.5 * (np.array([ep * c, em * s]) if upper else np.array([ep * c, -em * s]))
    d_theta_b = 0.5 * (np.array([-ep * s, em * c]) if upper else np.array([-ep * s, -em * c]))
    d_psi = np.array([_I / 2, -_I / 2])

    def embed(pair):
        out = np.zeros(4, dtype=complex)
        if upper:
            out[0:2] = pair
        else:
            out[2:4] = pair
        return out

    val_a, val_b = fm * embed(pair_a), fp * embed(pair_b)
    da = {
        1: fm * embed(d_theta_a),
        2: -_I / 2 * val_a,
        3: fm * embed(d_psi * pair_a),
    }
    db = {
        1: fp * embed(d_theta_b),
        2: _I / 2 * val_b,
        3: fp * embed(d_psi * pair_b),
    }
    return val_a, val_b, da, db


def parallel_spinor(family: Profile, C3: complex = 1.0, C4: complex = 0.0) -> SpinorField:
    """The covariantly constant spinor of a Ricci-flat profile.

    Its pointwise norm is sqrt(|C3|^2 + |C4|^2) everywhere.
    """
    if family is Profile.SCALAR_FLAT:
        raise DomainError("parallel spinors exist only on the two Ricci-flat profiles")
    upper = family is Profile.NEGATIVE_NUT

    def evaluate(q: CoordPoint) -> np.ndarray:
        val_a, val_b, _, _ = _parallel_basis(q.theta, q.phi, q.psi, upper)
        return C3 * val_a + C4 * val_b

    def derivative(q: CoordPoint) -> np.ndarray:
        _, _, da, db = _parallel_basis(q.theta, q.phi, q.psi, upper)
        out = np.zeros((4, 4), dtype=complex)
        for mu in (1, 2, 3):
            out[mu] = C3 * da[mu] + C4 * db[mu]
        return out

    return SpinorField(evaluate=evaluate, derivative=derivative)


# ---------------------------------------------------------------------------
# harmonic function, Maxwell field, harmonic spinors

def harmonic_function(family: Profile, point: CoordPoint, N: float) -> float:
    """-1/(r - N) on the positive-charge profile, -1/(r + N) on the negative."""
    if family is Profile.TAUB_NUT:
        return -1.0 / (point.r - N)
    if family is Profile.NEGATIVE_NUT:
        return -1.0 / (point.r + N)
    raise DomainError("harmonic function defined for the two Ricci-flat profiles")


def maxwell_field(params: MetricParams, point: CoordPoint) -> np.ndarray:
    """Self-dual Maxwell 2-form (e^1^e^4 + e^2^e^3)/(r+N)^2, as antisymmetric
    coefficients on the orthonormal coframe."""
    coeff = 1.0 / (point.r + params.N) ** 2
    F = np.zeros((4, 4))
    F[0, 3], F[3, 0] = coeff, -coeff
    F[1, 2], F[2, 1] = coeff, -coeff
    return F


def maxwell_coclosure(params: MetricParams, point: CoordPoint) -> np.ndarray:
    """sum_i (nabla_{e_i} F)(e_i) as a coframe covector (analytic radial
    derivative; the frame components of F depend on r only)."""
    r, N = point.r, params.N
    f = profile_f(params, r)
    coeff = 1.0 / (r + N) ** 2
    dcoeff = -2.0 / (r + N) ** 3
    F = maxwell_field(params, point)
    omega = connection_forms(params, point).omega
    out = np.zeros(4)
    for i in range(4):
        # e_i(F_ab): only e_1 sees r; frame[0,0] = 1/f
        eF = np.zeros((4, 4))
        if i == 0:
            eF = (dcoeff / coeff) * F / f
        covF = eF.copy()
        for a in range(4):
            for b in range(4):
                covF[a, b] -= np.dot(omega[:, a, i], F[:, b]) + np.dot(omega[:, b, i], F[a, :])
        out += covF[i]
    return out


class HarmonicKind(Enum):
    PLUS = "plus"
    MINUS = "minus"
    MAXWELL_MINUS = "maxwell_minus"


def harmonic_background(kind: HarmonicKind, N: float) -> MetricParams:
    if kind is HarmonicKind.PLUS:
        return MetricParams.taub_nut(N)
    return MetricParams.negative_nut(N)


def _radial_scalar(kind: HarmonicKind, N: float):
    if kind is HarmonicKind.PLUS:
        val = lambda r: 1.0 / (math.sqrt(r + N) * (r - N) ** 1.5)
        logd = lambda r: -0.5 / (r + N) - 1.5 / (r - N)
    elif kind is HarmonicKind.MINUS:
        val = lambda r: 1.0 / (math.sqrt(r - N) * (r + N) ** 1.5)
        logd = lambda r: -0.5 / (r - N) - 1.5 / (r + N)
    else:
        val = lambda r: 1.0 / (r + N) ** 2
        logd = lambda r: -2.0 / (r + N)
    return val, logd


def harmonic_spinor(kind: HarmonicKind, N: float, C3: complex = 1.0,
                    C4: complex = 0.0) -> SpinorField:
    """Zero modes of the Dirac operator built from the parallel spinors."""
    if kind is HarmonicKind.PLUS:
        base = parallel_spinor(Profile.TAUB_NUT, C3, C4)
        matrix = GAMMA[0]
    elif kind is HarmonicKind.MINUS:
        base = parallel_spinor(Profile.NEGATIVE_NUT, C3, C4)
        matrix = GAMMA[0]
    else:
        base = parallel_spinor(Profile.NEGATIVE_NUT, C3, C4)
        matrix = GAMMA[0] @ GAMMA[3] + GAMMA[1] @ GAMMA[2]
    rad, logd = _radial_scalar(kind, N)

    def evaluate(q: CoordPoint) -> np.ndarray:
        return rad(q.r) * (matrix @ base.evaluate(q))

    def derivative(q: CoordPoint) -> np.ndarray:
        R = rad(q.r)
        du = base.derivative(q)
        out = np.zeros((4, 4), dtype=complex)
        out[0] = R * logd(q.r) * (matrix @ base.evaluate(q))
        for mu in (1, 2, 3):
            out[mu] = R * (matrix @ du[mu])
        return out

    return SpinorField(evaluate=evaluate, derivative=derivative)


# ---------------------------------------------------------------------------
# spin-3/2 zero modes

def rs_field(family: Profile, N: float, C3: complex = 1.0,
             C4: complex = 0.0) -> SpinorOneFormField:
    """The square-integrable spin-3/2 zero modes; trace-free by construction.

    On the positive-charge profile the pointwise norm is 4|u|/(r+N)^2; on the
    negative-charge one it is sqrt(24) |u| (r-N)^(-1/2) (r+N)^(-5/2).
    """
    e14_23 = GAMMA[0] @ GAMMA[3] + GAMMA[1] @ GAMMA[2]
    if family is Profile.TAUB_NUT:
        base = parallel_spinor(Profile.TAUB_NUT, C3, C4)
        mats = [e14_23 @ G for G in GAMMA]
        rad = lambda r: 1.0 / (r + N) ** 2
        logd = lambda r: -2.0 / (r + N)
    elif family is Profile.NEGATIVE_NUT:
        base = parallel_spinor(Profile.NEGATIVE_NUT, C3, C4)
        mats = [
            -2.0 * e14_23,
            GAMMA[1] @ GAMMA[3] - GAMMA[0] @ GAMMA[2],
            GAMMA[0] @ GAMMA[1] + GAMMA[2] @ GAMMA[3],
            np.zeros((4, 4), dtype=complex),
        ]
        rad = lambda r: 1.0 / (math.sqrt(r - N) * (r + N) ** 2.5)
        logd = lambda r: -0.5 / (r - N) - 2.5 / (r + N)
    else:
        raise DomainError("spin-3/2 zero modes are implemented on the Ricci-flat profiles")

    def evaluate(q: CoordPoint) -> np.ndarray:
        u = base.evaluate(q)
        R = rad(q.r)
        return np.stack([R * (m @ u) for m in mats])

    def derivative(q: CoordPoint) -> np.ndarray:
        u = base.evaluate(q)
        du = base.derivative(q)
        R = rad(q.r)
        out = np.zeros((4, 4, 4), dtype=complex)
        for i, m in enumerate(mats):
            out[0, i] = R * logd(q.r) * (m @ u)
            for mu in (1, 2, 3):
                out[mu, i] = R * (m @ du[mu])
        return out

    return SpinorOneFormField(evaluate=evaluate, derivative=derivative)


# ---------------------------------------------------------------------------
# separated Dirac system

def radial_shift(s: int, params: MetricParams, r: float) -> float:
    """Zeroth-order radial coefficient h_s (s = 1, 2) of the separated system."""
    if s not in (1, 2):
        raise DomainError(f"shift index s={s} must be 1 or 2")
    N = params.N
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    sgn = (-1) ** s
    return (
        sgn * (N / (2.0 * (r * r - N * N) * f) - f / (4.0 * N))
        + 1.0 / ((r + sgn * N) * f)
        - fp / (2.0 * f * f)
    )


def dirac_radial_rhs(p: DiracModeParams, params: MetricParams, r: float,
                     phi: np.ndarray) -> np.ndarray:
    """Right-hand side of the first-order radial system (d/dr of Phi_1..4)."""
    f = profile_f(params, r)
    h = r * r + params.C1 * r + params.C2
    sqrt_h = math.sqrt(h)
    h1 = radial_shift(1, params, r)
    h2 = radial_shift(2, params, r)
    q = f * f / (4.0 * params.N)
    lam, eta = p.lam, p.eta
    phi = np.asarray(phi, dtype=complex)
    return np.array(
        [
            (-f * h2 - q * (p.m1 + 0.5)) * phi[0] + eta / sqrt_h * phi[1] - lam * f * phi[2],
            (-f * h2 + q * (p.m2 + 0.5)) * phi[1] + eta / sqrt_h * phi[0] - lam * f * phi[3],
            (-f * h1 + q * (p.m1 + 0.5)) * phi[2] - eta / sqrt_h * phi[3] + lam * f * phi[0],
            (-f * h1 - q * (p.m2 + 0.5)) * phi[3] - eta / sqrt_h * phi[2] + lam * f * phi[1],
        ]
    )


class AngularCase(Enum):
    HYPERGEOMETRIC = "hypergeometric"
    ETA_ZERO = "eta_zero"


def _power_profile(exp_sin_p, exp_cos_p, exp_sin_m, exp_cos_m, regular) -> AngularProfile:
    def jp(theta: float) -> complex:
        return math.sin(theta / 2) ** exp_sin_p * math.cos(theta / 2) ** exp_cos_p

    def jm(theta: float) -> complex:
        return math.sin(theta / 2) ** exp_sin_m * math.cos(theta / 2) ** exp_cos_m

    def d_jp(theta: float) -> complex:
        s, c = math.sin(theta / 2), math.cos(theta / 2)
        return jp(theta) * 0.5 * (exp_sin_p * c / s - exp_cos_p * s / c)

    def d_jm(theta: float) -> complex:
        s, c = math.sin(theta / 2), math.cos(theta / 2)
        return jm(theta) * 0.5 * (exp_sin_m * c / s - exp_cos_m * s / c)

    return AngularProfile(jp, jm, d_jp, d_jm, regular)


def dirac_angular(case: AngularCase, p: DiracModeParams) -> AngularProfile:
    """Angular profile pair J+-(theta) of the separated Dirac mode.

    The eta = 0 case integrates to pure half-angle powers; the nonzero-eta
    case is the hypergeometric pair (singular at theta = 0 for every integer
    m, so its regularity flag is always False).
    """
    if case is AngularCase.ETA_ZERO:
        if p.eta != 0:
            raise DomainError("eta must vanish for the power-law angular profiles")
        return _power_profile(
            p.m - p.m1 / 2 + 0.25,
            -p.m - p.m1 / 2 - 0.75,
            p.m2 / 2 - p.m - 0.25,
            p.m + p.m2 / 2 + 0.75,
            p.regular_angular,
        )

    if p.eta == 0:
        raise DomainError("the hypergeometric angular profiles require eta != 0")
    from .specfun import gauss_2f1, gauss_2f1_derivative

    a0 = 0.25 - p.m1 / 2
    root = cmath.sqrt(a0 * a0 + complex(p.eta) ** 2)
    alpha, beta, gam = a0 + root, a0 - root, 0.25 - p.m1 / 2 - p.m
    exp_p = p.m - p.m1 / 2 + 0.25

    def jp(theta: float) -> complex:
        s, c = math.sin(theta / 2), math.cos(theta / 2)
        return s ** exp_p * c ** (gam - 1) * gauss_2f1(alpha, beta, gam, c * c)

    def jm(theta: float) -> complex:
        s, c = math.sin(theta / 2), math.cos(theta / 2)
        return (-p.eta / gam) * s ** (exp_p + 1) * c ** gam * gauss_2f1(
            alpha + 1, beta + 1, gam + 1, c * c
        )

    def d_jp(theta: float) -> complex:
        s, c = math.sin(theta / 2), math.cos(theta / 2)
        z = c * c
        val = gauss_2f1(alpha, beta, gam, z)
        dval = gauss_2f1_derivative(alpha, beta, gam, z)
        pref = s ** exp_p * c ** (gam - 1)
        return pref * (0.5 * (exp_p * c / s - (gam - 1) * s / c) * val - s * c * dval)

    def d_jm(theta: float) -> complex:
        s, c = math.sin(theta / 2), math.cos(theta / 2)
        z = c * c
        val = gauss_2f1(alpha + 1, beta + 1, gam + 1, z)
        dval = gauss_2f1_derivative(alpha + 1, beta + 1, gam + 1, z)
        pref = (-p.eta / gam) * s ** (exp_p + 1) * c ** gam
        return pref * (0.5 * ((exp_p + 1) * c / s - gam * s / c) * val - s * c * dval)

    return AngularProfile(jp, jm, d_jp, d_jm, regular=False)


def angular_residual(p: DiracModeParams, profile: AngularProfile,
                     theta: float) -> float:
    """Max deviation of the two angular equations from eta at a given theta."""
    s = math.sin(theta)
    ct = math.cos(theta) / s
    jp, jm = profile.jplus(theta), profile.jminus(theta)
    djp, djm = profile.d_jplus(theta), profile.d_jminus(theta)
    lhs1 = (-djp + (p.m + 0.5) / s * jp - (p.m1 / 2 + 0.25) * ct * jp) / jm if jm != 0 else complex("nan")
    lhs2 = (djm + (p.m + 0.5) / s * jm - (p.m2 / 2 + 0.25) * ct * jm) / jp if jp != 0 else complex("nan")
    return max(abs(lhs1 - p.eta), abs(lhs2 - p.eta))


class DiracRadialCase(Enum):
    MASSLESS_ETA_ZERO = "massless_eta_zero"
    KUMMER_NEG_NUT = "kummer_neg_nut"


def lower_profile_root(params: MetricParams) -> float:
    """The larger root r_0 of r^2 + C1 r + C2; the massless radial solutions
    require it to lie strictly below N (boundary case rejected)."""
    disc = params.C1 * params.C1 - 4.0 * params.C2
    if disc <= 1e-12:
        raise DomainError("degenerate or complex profile roots; massless family undefined")
    r0 = (-params.C1 + math.sqrt(disc)) / 2.0
    if not r0 < params.N - 1e-12:
        raise DomainError(f"profile root r0={r0} does not lie below N={params.N}")
    return r0


def _power_exp_radial(terms, coeff_exp):
    """Product prod (base_i(r))^(p_i) * exp(coeff_exp * r) with log-derivative.

    terms: list of (shift, power) meaning (r + shift)^power.
    """
    def value(r: float) -> complex:
        out = complex(math.exp(coeff_exp * r))
        for shift, power in terms:
            out *= (r + shift) ** power
        return out

    def log_deriv(r: float) -> complex:
        out = complex(coeff_exp)
        for shift, power in terms:
            out += power / (r + shift)
        return out

    return value, log_deriv


def dirac_radial(case: DiracRadialCase, p: DiracModeParams,
                 params: MetricParams, branch_k: int = 0) -> RadialProfile:
    """Closed-form radial profiles (Phi_1..Phi_4) of the separated Dirac mode."""
    N = params.N
    if case is DiracRadialCase.MASSLESS_ETA_ZERO:
        if p.lam != 0 or p.eta != 0:
            raise DomainError("massless family requires lam = eta = 0")
        if params.C2 <= -N * N - N * params.C1 + 1e-12:
            raise DomainError("massless family requires C2 > -N^2 - N C1")
        r0 = lower_profile_root(params)
        d = 2.0 * r0 + params.C1
        u0 = (r0 * r0 - N * N) / (8.0 * N * d)
        v0 = (N * N - (r0 + params.C1) ** 2) / (8.0 * N * d)
        val3, ld3 = _power_exp_radial(
            [(-r0, (2 * p.m1 - 1) * u0 - 0.25), (-N, -0.5),
             (r0 + params.C1, (2 * p.m1 - 1) * v0 - 0.25)],
            (2 * p.m1 - 1) / (8.0 * N),
        )
        val4, ld4 = _power_exp_radial(
            [(-r0, -(2 * p.m2 + 3) * u0 - 0.25), (-N, -0.5),
             (r0 + params.C1, -(2 * p.m2 + 3) * v0 - 0.25)],
            -(2 * p.m2 + 3) / (8.0 * N),
        )

        def values(r: float) -> np.ndarray:
            return np.array([0.0, 0.0, val3(r), val4(r)], dtype=complex)

        def derivative(r: float) -> np.ndarray:
            return np.array(
                [0.0, 0.0, val3(r) * ld3(r), val4(r) * ld4(r)], dtype=complex
            )

        return RadialProfile(values, derivative, (N, math.inf), "dirac_massless")

    if case is not DiracRadialCase.KUMMER_NEG_NUT:
        raise DomainError(f"unknown radial case {case}")
    if p.lam == 0 or p.eta != 0:
        raise DomainError("Kummer family requires lam != 0 and eta = 0")
    if params.profile is not Profile.NEGATIVE_NUT:
        raise DomainError("Kummer Dirac family lives on the negative-charge profile")
    lam = complex(p.lam)
    eps1 = branch_sqrt(BranchInput(1 - 2 * p.m1, 8.0 * N, lam, branch_k))
    eps2 = branch_sqrt(BranchInput(2 * p.m2 + 3, 8.0 * N, lam, branch_k))
    lam2 = 32.0 * N * N * lam * lam
    alpha1 = -0.5 * (1 - p.m1) + 0.25 - (eps1 * eps1 + lam2) / (4.0 * eps1)
    alpha2 = -0.5 * (2 + p.m2) + 0.25 - (eps2 * eps2 + lam2) / (4.0 * eps2)
    gam1, gam2 = p.m1 - 0.5, -p.m2 - 1.5
    c1p = 1 - 2 * p.m1 + eps1
    c1d = (eps1 * eps1 + eps1 * (1 - 2 * p.m1) + lam2) / (1 - 2 * p.m1)
    c2p = 2 * p.m2 + 3 + eps2
    c2d = (eps2 * eps2 + eps2 * (2 * p.m2 + 3) + lam2) / (2 * p.m2 + 3)
    p1, p2 = p.m1 / 2 - 1.25, -p.m2 / 2 - 1.75
    p3, p4 = p.m1 / 2 - 0.75, -p.m2 / 2 - 1.25
    pars1, pars2 = KummerParams(alpha1, gam1), KummerParams(alpha2, gam2)
    pars1s, pars2s = KummerParams(alpha1 + 1, gam1 + 1), KummerParams(alpha2 + 1, gam2 + 1)

    def kummer_pair(pars, z):
        # F and dF/dz
        val = kummer_1f1(pars, z)
        dval = pars.alpha / pars.gamma * kummer_1f1(
            KummerParams(pars.alpha + 1, pars.gamma + 1), z
        )
        return val, dval

    def values_and_derivs(r: float):
        q = r + N
        z1 = eps1 * q / (4.0 * N)
        z2 = eps2 * q / (4.0 * N)
        dz = 1.0 / (4.0 * N)
        f1, df1 = kummer_pair(pars1, z1)
        g1, dg1 = kummer_pair(pars1s, z1)
        f2, df2 = kummer_pair(pars2, z2)
        g2, dg2 = kummer_pair(pars2s, z2)
        e1, e2 = cmath.exp(-z1 / 2), cmath.exp(-z2 / 2)
        root = math.sqrt(r - N)

        v1 = q ** p1 * e1 * f1
        d1 = v1 * (p1 / q - eps1 / (8.0 * N)) + q ** p1 * e1 * df1 * eps1 * dz
        v2 = q ** p2 * e2 * f2
        d2 = v2 * (p2 / q - eps2 / (8.0 * N)) + q ** p2 * e2 * df2 * eps2 * dz

        pref3 = q ** p3 * e1 / (8.0 * N * lam * root)
        b3 = c1p * f1 - c1d * g1
        db3 = c1p * df1 - c1d * dg1
        v3 = pref3 * b3
        d3 = v3 * (p3 / q - 0.5 / (r - N) - eps1 / (8.0 * N)) + pref3 * db3 * eps1 * dz

        pref4 = q ** p4 * e2 / (8.0 * N * lam * root)
        b4 = c2p * f2 - c2d * g2
        db4 = c2p * df2 - c2d * dg2
        v4 = pref4 * b4
        d4 = v4 * (p4 / q - 0.5 / (r - N) - eps2 / (8.0 * N)) + pref4 * db4 * eps2 * dz
        return np.array([v1, v2, v3, v4]), np.array([d1, d2, d3, d4])

    return RadialProfile(
        values=lambda r: values_and_derivs(r)[0],
        derivative=lambda r: values_and_derivs(r)[1],
        domain=(N, math.inf),
        family="dirac_kummer",
        branch_k=branch_k,
    )


def assemble_dirac_mode(p: DiracModeParams, angular: AngularProfile,
                        radial: RadialProfile) -> SpinorField:
    """The full separated spinor field with its phase factors."""

    def pieces(q: CoordPoint):
        phi_vals = radial.values(q.r)
        jp, jm = angular.jplus(q.theta), angular.jminus(q.theta)
        phase = cmath.exp(_I * (p.m + 0.5) * q.phi)
        p1 = cmath.exp(_I / 2 * (p.m1 + 0.5) * q.psi)
        p2 = cmath.exp(_I / 2 * (p.m2 + 0.5) * q.psi)
        ang = np.array([p1 * jp, p2 * jm, p1 * jp, p2 * jm])
        return phi_vals, ang, phase

    def evaluate(q: CoordPoint) -> np.ndarray:
        phi_vals, ang, phase = pieces(q)
        return phase * phi_vals * ang

    def derivative(q: CoordPoint) -> np.ndarray:
        phi_vals, ang, phase = pieces(q)
        value = phase * phi_vals * ang
        dphi = radial.derivative(q.r)
        djp, djm = angular.d_jplus(q.theta), angular.d_jminus(q.theta)
        jp, jm = angular.jplus(q.theta), angular.jminus(q.theta)
        dang_ratio = np.array(
            [djp / jp if jp != 0 else 0.0, djm / jm if jm != 0 else 0.0]
        )
        out = np.zeros((4, 4), dtype=complex)
        out[0] = phase * dphi * ang
        theta_ratio = np.array([dang_ratio[0], dang_ratio[1], dang_ratio[0], dang_ratio[1]])
        out[1] = value * theta_ratio
        out[2] = _I * (p.m + 0.5) * value
        psi_factors = np.array(
            [p.m1 + 0.5, p.m2 + 0.5, p.m1 + 0.5, p.m2 + 0.5]
        )
        out[3] = _I / 2 * psi_factors * value
        return out

    return SpinorField(evaluate=evaluate, derivative=derivative)


# ---------------------------------------------------------------------------
# separated spin-3/2 system

def rs_angular(p: RSModeParams) -> AngularProfile:
    """Angular profiles of the spin-3/2 ansatz (tripled half-angle powers)."""
    return _power_profile(
        3 * (p.m - p.m1 / 2 + 0.25),
        -3 * (p.m + p.m1 / 2 + 0.75),
        3 * (p.m2 / 2 - p.m - 0.25),
        3 * (p.m + p.m2 / 2 + 0.75),
        p.regular_angular,
    )


def rs_angular_residual(p: RSModeParams, profile: AngularProfile,
                        theta: float) -> float:
    """Residual of the first-order angular system of the spin-3/2 ansatz."""
    s = math.sin(theta)
    ct = math.cos(theta) / s
    jp, jm = profile.jplus(theta), profile.jminus(theta)
    r1 = profile.d_jplus(theta) - (3 * (p.m + 0.5) / s - 1.5 * (p.m1 + 0.5) * ct) * jp
    r2 = profile.d_jminus(theta) - (-3 * (p.m + 0.5) / s + 1.5 * (p.m2 + 0.5) * ct) * jm
    scale = max(1.0, abs(jp), abs(jm))
    return max(abs(r1), abs(r2)) / scale


def rs_radial_rhs(p: RSModeParams, params: MetricParams, r: float,
                  phi: np.ndarray) -> np.ndarray:
    """Right-hand sides of both first-order radial systems, stacked as
    (Phi_11..Phi_14, Phi_21..Phi_24)."""
    N = params.N
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    u2 = r * r - N * N
    lam = p.lam
    phi = np.asarray(phi, dtype=complex)
    a1 = 3.0 * fp / (2.0 * f)
    b1 = 3.0 * N / (2.0 * u2)
    c = f * f / (4.0 * N)
    first = np.array(
        [
            (a1 + b1 + c - 3 * c * (p.m1 + 0.5)) * phi[0],
            (a1 + b1 + c + 3 * c * (p.m2 + 0.5)) * phi[1],
            (a1 - b1 - c + 3 * c * (p.m1 + 0.5)) * phi[2],
            (a1 - b1 - c - 3 * c * (p.m2 + 0.5)) * phi[3],
        ]
    )
    a2 = fp / (2.0 * f)
    second = np.array(
        [
            (a2 - (2 * r + N) / (2 * u2) - 3 * c * (p.m1 - 0.5)) * phi[4] - lam * f * phi[6],
            (a2 - (2 * r + N) / (2 * u2) + 3 * c * (p.m2 + 1.5)) * phi[5] - lam * f * phi[7],
            (a2 - (2 * r - N) / (2 * u2) + 3 * c * (p.m1 - 0.5)) * phi[6] + lam * f * phi[4],
            (a2 - (2 * r - N) / (2 * u2) - 3 * c * (p.m2 + 1.5)) * phi[7] + lam * f * phi[5],
        ]
    )
    return np.concatenate([first, second])


class RSRadialCase(Enum):
    MASSLESS_SCALAR_FLAT = "massless_scalar_flat"
    KUMMER_TAUB_NUT = "kummer_taub_nut"


def rs_radial(case: RSRadialCase, p: RSModeParams, params: MetricParams,
              branch_k: int = 0) -> RadialProfile:
    """Closed-form radial profiles (Phi_11..Phi_14, Phi_21..Phi_24)."""
    N = params.N
    if case is RSRadialCase.MASSLESS_SCALAR_FLAT:
        if p.lam != 0:
            raise DomainError("massless spin-3/2 family requires lam = 0")
        if params.C2 <= -N * N - N * params.C1 + 1e-12:
            raise DomainError("massless family requires C2 > -N^2 - N C1")
        r0 = lower_profile_root(params)
        d = 2.0 * r0 + params.C1
        u0 = (r0 * r0 - N * N) / (8.0 * N * d)
        v0 = (N * N - (r0 + params.C1) ** 2) / (8.0 * N * d)
        v13, ld13 = _power_exp_radial(
            [(N, 1.5), (-r0, (6 * p.m1 + 1) * u0 - 0.75),
             (r0 + params.C1, (6 * p.m1 + 1) * v0 - 0.75)],
            (6 * p.m1 + 1) / (8.0 * N),
        )
        v14, ld14 = _power_exp_radial(
            [(N, 1.5), (-r0, -(6 * p.m2 + 5) * u0 - 0.75),
             (r0 + params.C1, -(6 * p.m2 + 5) * v0 - 0.75)],
            -(6 * p.m2 + 5) / (8.0 * N),
        )
        v23, ld23 = _power_exp_radial(
            [(N, -0.5), (-r0, (6 * p.m1 - 3) * u0 - 0.25),
             (r0 + params.C1, (6 * p.m1 - 3) * v0 - 0.25)],
            (6 * p.m1 - 3) / (8.0 * N),
        )
        v24, ld24 = _power_exp_radial(
            [(N, -0.5), (-r0, -(6 * p.m2 + 9) * u0 - 0.25),
             (r0 + params.C1, -(6 * p.m2 + 9) * v0 - 0.25)],
            -(6 * p.m2 + 9) / (8.0 * N),
        )

        def values(r: float) -> np.ndarray:
            return np.array(
                [0, 0, v13(r), v14(r), 0, 0, v23(r), v24(r)], dtype=complex
            )

        def derivative(r: float) -> np.ndarray:
            return np.array(
                [0, 0, v13(r) * ld13(r), v14(r) * ld14(r),
                 0, 0, v23(r) * ld23(r), v24(r) * ld24(r)],
                dtype=complex,
            )

        return RadialProfile(values, derivative, (r0, math.inf), "rs_massless")

    if case is not RSRadialCase.KUMMER_TAUB_NUT:
        raise DomainError(f"unknown radial case {case}")
    if p.lam == 0:
        raise DomainError("Kummer spin-3/2 family requires lam != 0")
    if params.profile is not Profile.TAUB_NUT:
        raise DomainError("Kummer spin-3/2 family lives on the positive-charge profile")
    if not (p.m1 <= -1 and p.m2 >= 0):
        raise DomainError("Kummer spin-3/2 family requires m1 <= -1 and m2 >= 0")
    lam = complex(p.lam)
    eps1 = branch_sqrt(BranchInput(3 - 6 * p.m1, 8.0 * N, lam, branch_k))
    eps2 = branch_sqrt(BranchInput(9 + 6 * p.m2, 8.0 * N, lam, branch_k))
    lam2 = 32.0 * N * N * lam * lam
    alpha1 = 0.25 * (3 - 6 * p.m1) - (eps1 * eps1 + lam2) / (4.0 * eps1)
    alpha2 = 0.25 * (9 + 6 * p.m2) - (eps2 * eps2 + lam2) / (4.0 * eps2)
    gam1, gam2 = 1.5 - 3 * p.m1, 3 * p.m2 + 4.5
    w1p = 3 - 6 * p.m1 - eps1
    w1d = (eps1 * eps1 - eps1 * (3 - 6 * p.m1) + lam2) / (6 * p.m1 - 3)
    w2p = 6 * p.m2 + 9 - eps2
    w2d = (eps2 * eps2 - eps2 * (6 * p.m2 + 9) + lam2) / (6 * p.m2 + 9)
    q1, q2 = -1.5 * p.m1 - 0.25, 1.5 * p.m2 + 1.25
    q3, q4 = -1.5 * p.m1 + 0.25, 1.5 * p.m2 + 1.75
    pars1, pars2 = KummerParams(alpha1, gam1), KummerParams(alpha2, gam2)
    pars1s, pars2s = KummerParams(alpha1 + 1, gam1 + 1), KummerParams(alpha2 + 1, gam2 + 1)

    def kummer_pair(pars, z):
        val = kummer_1f1(pars, z)
        dval = pars.alpha / pars.gamma * kummer_1f1(
            KummerParams(pars.alpha + 1, pars.gamma + 1), z
        )
        return val, dval

    def values_and_derivs(r: float):
        w = r - N
        z1 = -eps1 * w / (4.0 * N)
        z2 = -eps2 * w / (4.0 * N)
        dz = -1.0 / (4.0 * N)
        f1, df1 = kummer_pair(pars1, z1)
        g1, dg1 = kummer_pair(pars1s, z1)
        f2, df2 = kummer_pair(pars2, z2)
        g2, dg2 = kummer_pair(pars2s, z2)
        e1, e2 = cmath.exp(-z1 / 2), cmath.exp(-z2 / 2)
        root = math.sqrt(r + N)

        v21 = w ** q1 * e1 * f1
        d21 = v21 * (q1 / w + eps1 / (8.0 * N)) + w ** q1 * e1 * df1 * eps1 * dz
        v22 = w ** q2 * e2 * f2
        d22 = v22 * (q2 / w + eps2 / (8.0 * N)) + w ** q2 * e2 * df2 * eps2 * dz

        pref3 = w ** q3 * e1 / (8.0 * N * lam * root)
        b3 = w1p * f1 + w1d * g1
        db3 = w1p * df1 + w1d * dg1
        v23 = pref3 * b3
        d23 = v23 * (q3 / w - 0.5 / (r + N) + eps1 / (8.0 * N)) + pref3 * db3 * eps1 * dz

        pref4 = w ** q4 * e2 / (8.0 * N * lam * root)
        b4 = w2p * f2 - w2d * g2
        db4 = w2p * df2 - w2d * dg2
        v24 = pref4 * b4
        d24 = v24 * (q4 / w - 0.5 / (r + N) + eps2 / (8.0 * N)) + pref4 * db4 * eps2 * dz

        zeros = np.zeros(4, dtype=complex)
        return (
            np.concatenate([zeros, [v21, v22, v23, v24]]),
            np.concatenate([zeros, [d21, d22, d23, d24]]),
        )

    return RadialProfile(
        values=lambda r: values_and_derivs(r)[0],
        derivative=lambda r: values_and_derivs(r)[1],
        domain=(N, math.inf),
        family="rs_kummer",
        branch_k=branch_k,
    )


def assemble_rs_mode(p: RSModeParams, angular: AngularProfile,
                     radial: RadialProfile) -> SpinorOneFormField:
    """The full spin-3/2 ansatz field.

    The third and fourth coframe components are the Clifford images
    Psi_3 = e^3 . e^2 . Psi_2 and Psi_4 = e^4 . e^1 . Psi_1, which makes the
    assembled element trace-free identically.  With a nonzero eigenvalue the
    first-component profiles must vanish (sampled at one interior radius).
    """
    g32 = GAMMA[2] @ GAMMA[1]
    g41 = GAMMA[3] @ GAMMA[0]
    if p.lam != 0:
        lo, hi = radial.domain
        probe_r = lo + 1.0 if math.isinf(hi) else 0.5 * (lo + hi)
        probe = radial.values(probe_r)
        if np.max(np.abs(probe[:4])) > 1e-12 * max(1.0, np.max(np.abs(probe))):
            raise DomainError("nonzero eigenvalue forces the first spinor component to vanish")

    def spinor_pair(q: CoordPoint):
        vals = radial.values(q.r)
        jp, jm = angular.jplus(q.theta), angular.jminus(q.theta)
        phase = cmath.exp(3 * _I * (p.m + 0.5) * q.phi)
        p1 = cmath.exp(1.5 * _I * (p.m1 + 0.5) * q.psi)
        p2 = cmath.exp(1.5 * _I * (p.m2 + 0.5) * q.psi)
        ang = np.array([p1 * jp, p2 * jm, p1 * jp, p2 * jm])
        psi1 = phase * vals[:4] * ang
        psi2 = phase * vals[4:] * ang
        return psi1, psi2, ang, phase

    def evaluate(q: CoordPoint) -> np.ndarray:
        psi1, psi2, _, _ = spinor_pair(q)
        return np.stack([psi1, psi2, g32 @ psi2, g41 @ psi1])

    def derivative(q: CoordPoint) -> np.ndarray:
        psi1, psi2, ang, phase = spinor_pair(q)
        dvals = radial.derivative(q.r)
        jp, jm = angular.jplus(q.theta), angular.jminus(q.theta)
        djp, djm = angular.d_jplus(q.theta), angular.d_jminus(q.theta)
        rp = djp / jp if jp != 0 else 0.0
        rm = djm / jm if jm != 0 else 0.0
        theta_ratio = np.array([rp, rm, rp, rm])
        psi_factors = 1.5 * _I * np.array(
            [p.m1 + 0.5, p.m2 + 0.5, p.m1 + 0.5, p.m2 + 0.5]
        )
        d1 = {
            0: phase * dvals[:4] * ang,
            1: psi1 * theta_ratio,
            2: 3 * _I * (p.m + 0.5) * psi1,
            3: psi_factors * psi1,
        }
        d2 = {
            0: phase * dvals[4:] * ang,
            1: psi2 * theta_ratio,
            2: 3 * _I * (p.m + 0.5) * psi2,
            3: psi_factors * psi2,
        }
        out = np.zeros((4, 4, 4), dtype=complex)
        for mu in range(4):
            out[mu, 0] = d1[mu]
            out[mu, 1] = d2[mu]
            out[mu, 2] = g32 @ d2[mu]
            out[mu, 3] = g41 @ d1[mu]
        return out

    return SpinorOneFormField(evaluate=evaluate, derivative=derivative)
