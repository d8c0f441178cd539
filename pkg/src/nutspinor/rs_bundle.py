"""Spinor-valued 1-forms: projection, twisted Dirac, and the spin-3/2 operator.

An element of the tensor bundle is stored as a (4, 4) complex array whose
row i is the spinor coefficient of the orthonormal coframe covector e^i.
The spin-3/2 subbundle consists of the trace-free elements

    sum_i e^i . Psi_i = 0,

and the projection onto it is Pi(Psi)_i = Psi_i + (1/4) e^i . (e^j . Psi_j).
The twisted Dirac operator acts componentwise and corrects for the
connection of the coframe; the spin-3/2 operator is Pi composed with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .clifford import GAMMA, SpinorField, dirac_apply, spin_connection_matrices
from .errors import TraceViolationError
from .geometry import (
    CoordPoint,
    MetricParams,
    build_frames,
    connection_forms,
    fd4_gradient,
    profile_f,
    profile_f_prime,
    validate_point,
)

TRACE_TOL = 1e-8


@dataclass
class SpinorOneFormField:
    """Closed-form spinor-valued 1-form on the coordinate chart.

    evaluate maps a point to a (4, 4) array (rows Psi_1..Psi_4); derivative,
    when supplied, returns the (4, 4, 4) array of coordinate partials
    d Psi_{i j} / d x_mu with mu leading.
    """

    evaluate: Callable[[CoordPoint], np.ndarray]
    derivative: Optional[Callable[[CoordPoint], np.ndarray]] = None

    def partials(self, point: CoordPoint) -> np.ndarray:
        if self.derivative is not None:
            return np.asarray(self.derivative(point), dtype=complex)
        return fd4_gradient(self.evaluate, point)

    def component(self, i: int) -> SpinorField:
        """Row i (0-based) as a spinor field sharing analytic derivatives."""
        deriv = None
        if self.derivative is not None:
            deriv = lambda q: np.asarray(self.derivative(q), dtype=complex)[:, i, :]
        return SpinorField(
            evaluate=lambda q: np.asarray(self.evaluate(q), dtype=complex)[i],
            derivative=deriv,
        )


def clifford_trace(x: np.ndarray) -> np.ndarray:
    """sum_i e^i . Psi_i of a (4, 4) element."""
    x = np.asarray(x, dtype=complex)
    return np.einsum("ijk,ik->j", GAMMA, x)


def project_pi(x: np.ndarray) -> np.ndarray:
    """Projection onto the trace-free subbundle."""
    x = np.asarray(x, dtype=complex)
    trace = clifford_trace(x)
    return x + 0.25 * np.einsum("ijk,k->ij", GAMMA, trace)


def pure_trace_part(x: np.ndarray) -> np.ndarray:
    """The complement -(1/4) e^i . (e^j . Psi_j); x = Pi(x) + this part."""
    x = np.asarray(x, dtype=complex)
    trace = clifford_trace(x)
    return -0.25 * np.einsum("ijk,k->ij", GAMMA, trace)


def twisted_dirac(field: SpinorOneFormField, point: CoordPoint,
                  params: MetricParams) -> np.ndarray:
    """Dirac on each component plus the connection-of-coframe correction.

    Component b receives D Psi_b - sum_{i,j} omega^i_b(e_j) e^j . Psi_i.
    """
    validate_point(params, point)
    omega = connection_forms(params, point).omega
    value = np.asarray(field.evaluate(point), dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for b in range(4):
        out[b] = dirac_apply(field.component(b), point, params)
    # correction: -omega[i, b, j] * gamma_j Psi_i summed over i, j
    out -= np.einsum("ibj,jkl,il->bk", omega.astype(complex), GAMMA, value)
    return out


def rs_apply(field: SpinorOneFormField, point: CoordPoint,
             params: MetricParams, trace_tol: float = TRACE_TOL) -> np.ndarray:
    """The spin-3/2 operator Pi(D_TM x); input must be trace-free."""
    value = np.asarray(field.evaluate(point), dtype=complex)
    trace = clifford_trace(value)
    scale = max(1.0, float(np.linalg.norm(value)))
    if float(np.linalg.norm(trace)) > trace_tol * scale:
        raise TraceViolationError(
            f"input violates the trace-free constraint: |trace| = "
            f"{np.linalg.norm(trace):.3e} at {tuple(point)}"
        )
    return project_pi(twisted_dirac(field, point, params))


def divergence(field: SpinorOneFormField, point: CoordPoint,
               params: MetricParams) -> np.ndarray:
    """sum_i (nabla_{e_i} (Psi_j tensor e^j))(e_i)."""
    validate_point(params, point)
    frame = build_frames(params, point).frame.astype(complex)
    spin_omega = spin_connection_matrices(params, point)
    conn = connection_forms(params, point).omega
    partials = field.partials(point)
    value = np.asarray(field.evaluate(point), dtype=complex)
    out = np.zeros(4, dtype=complex)
    for i in range(4):
        out += frame[i] @ partials[:, i, :] + spin_omega[i] @ value[i]
        for j in range(4):
            out -= value[j] * conn[j, i, i]
    return out


def expanded_rs_apply(field: SpinorOneFormField, point: CoordPoint,
                      params: MetricParams) -> np.ndarray:
    """The separated form of the spin-3/2 operator on constrained inputs.

    Valid for fields satisfying Psi_4 = e^4 . e^1 . Psi_1 and
    Psi_3 = e^3 . e^2 . Psi_2 (which are automatically trace-free); agrees
    with :func:`rs_apply` there and feeds the separation residual checks.
    """
    validate_point(params, point)
    r = point.r
    N = params.N
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    u2 = r * r - N * N
    frame = build_frames(params, point).frame.astype(complex)
    partials = field.partials(point)
    value = np.asarray(field.evaluate(point), dtype=complex)
    g1, g2, g3, g4 = GAMMA

    d_comp = [dirac_apply(field.component(b), point, params) for b in range(4)]
    frame_deriv_sum = np.zeros(4, dtype=complex)
    for i in range(4):
        frame_deriv_sum += frame[i] @ partials[:, i, :]
    tilde = (
        -frame_deriv_sum
        - (2.0 * r / (u2 * f) - fp / (f * f)) * value[0]
        + (fp / (2.0 * f * f) * (g1 @ g4)
           - (N / (2.0 * u2 * f) - f / (4.0 * N)) * (g2 @ g3)) @ value[3]
    )
    out = np.zeros((4, 4), dtype=complex)
    out[0] = d_comp[0] + fp / f ** 2 * (g4 @ value[3]) + 0.5 * (g1 @ tilde)
    out[1] = (
        d_comp[1]
        + (r * (g2 @ value[0]) - N * (g4 @ value[2]) - N * (g3 @ value[3])) / (u2 * f)
        + f / (2.0 * N) * (g4 @ value[2])
        + 0.5 * (g2 @ tilde)
    )
    out[2] = (
        d_comp[2]
        + (r * (g3 @ value[0]) + N * (g4 @ value[1]) + N * (g2 @ value[3])) / (u2 * f)
        - f / (2.0 * N) * (g4 @ value[1])
        + 0.5 * (g3 @ tilde)
    )
    out[3] = d_comp[3] - fp / f ** 2 * (g4 @ value[0]) + 0.5 * (g4 @ tilde)
    return out
