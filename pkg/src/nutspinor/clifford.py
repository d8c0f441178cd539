"""Fixed Clifford representation, spin connection, and the Dirac operator.

Spinors are plain complex ndarrays of shape (4,).  Clifford multiplication
by the orthonormal coframe is e^i . psi = gamma_i @ psi with the four
constant matrices below, which satisfy

    gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij I.

The spin covariant derivative along the orthonormal frame is

    nabla_k psi = e_k(psi) + Omega_k psi,

where e_k(psi) contracts the frame's coordinate components with coordinate
partials of the field (analytic when the field supplies them, 4th-order
finite differences otherwise), and Omega_k collects the quadratic-gamma
connection terms of the metric family.  The Dirac operator is
D = sum_k gamma_k nabla_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .geometry import (
    CoordPoint,
    MetricParams,
    build_frames,
    fd4_gradient,
    profile_f,
    profile_f_prime,
    validate_point,
)

_I = 1j


def _build_gammas() -> np.ndarray:
    g = np.zeros((4, 4, 4), dtype=complex)
    g[0] = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    g[1] = [[0, 0, 0, _I], [0, 0, _I, 0], [0, _I, 0, 0], [_I, 0, 0, 0]]
    g[2] = [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
    g[3] = [[0, 0, _I, 0], [0, 0, 0, -_I], [_I, 0, 0, 0], [0, -_I, 0, 0]]
    for a in range(4):
        for b in range(4):
            anti = g[a] @ g[b] + g[b] @ g[a]
            expected = -2.0 * np.eye(4) if a == b else np.zeros((4, 4))
            assert np.array_equal(anti, expected), "Clifford relation violated"
    g.setflags(write=False)
    return g


GAMMA = _build_gammas()


def gamma(i: int) -> np.ndarray:
    """The i-th Clifford generator, i in 1..4."""
    if i not in (1, 2, 3, 4):
        raise DomainError(f"gamma index {i} outside 1..4")
    return GAMMA[i - 1]


def clifford_mul(covector: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Clifford action of a coframe covector: (sum_i c_i e^i) . s."""
    c = np.asarray(covector)
    return np.einsum("i,ijk,k->j", c.astype(complex), GAMMA, np.asarray(s, dtype=complex))


def hermitian_norm(s: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(s).ravel()))


@dataclass
class SpinorField:
    """Closed-form spinor field on the coordinate chart.

    evaluate maps a CoordPoint to a (4,) complex array.  When the optional
    derivative map is given it must return the (4, 4) array of coordinate
    partials d psi_j / d x_mu (mu indexing r, theta, phi, psi).
    """

    evaluate: Callable[[CoordPoint], np.ndarray]
    derivative: Optional[Callable[[CoordPoint], np.ndarray]] = None

    def partials(self, point: CoordPoint) -> np.ndarray:
        if self.derivative is not None:
            return np.asarray(self.derivative(point), dtype=complex)
        return fd4_gradient(self.evaluate, point)


def spin_connection_matrices(params: MetricParams, point: CoordPoint) -> np.ndarray:
    """The four connection matrices Omega_k acting on spinor components."""
    validate_point(params, point)
    r = point.r
    N = params.N
    f = profile_f(params, r)
    fp = profile_f_prime(params, r)
    c = 1.0 / (2.0 * (r * r - N * N) * f)
    omega = np.zeros((4, 4, 4), dtype=complex)
    omega[1] = c * (r * (GAMMA[0] @ GAMMA[1]) - N * (GAMMA[2] @ GAMMA[3]))
    omega[2] = c * (r * (GAMMA[0] @ GAMMA[2]) + N * (GAMMA[1] @ GAMMA[3]))
    omega[3] = -(fp / (2.0 * f * f)) * (GAMMA[0] @ GAMMA[3]) + (
        N * c - f / (4.0 * N)
    ) * (GAMMA[1] @ GAMMA[2])
    return omega


def frame_derivative(field: SpinorField, k: int, point: CoordPoint,
                     params: MetricParams) -> np.ndarray:
    """e_k(psi): the frame vector applied to the field componentwise."""
    frame = build_frames(params, point).frame
    partials = field.partials(point)
    return frame[k - 1].astype(complex) @ partials


def spin_covariant_derivative(field: SpinorField, k: int, point: CoordPoint,
                              params: MetricParams) -> np.ndarray:
    """nabla_{e_k} psi for k in 1..4."""
    if k not in (1, 2, 3, 4):
        raise DomainError(f"frame index {k} outside 1..4")
    omega = spin_connection_matrices(params, point)
    return frame_derivative(field, k, point, params) + omega[k - 1] @ field.evaluate(point)


def dirac_apply(field: SpinorField, point: CoordPoint,
                params: MetricParams) -> np.ndarray:
    """D psi = sum_k gamma_k nabla_{e_k} psi."""
    frame = build_frames(params, point).frame.astype(complex)
    omega = spin_connection_matrices(params, point)
    partials = field.partials(point)
    value = np.asarray(field.evaluate(point), dtype=complex)
    out = np.zeros(4, dtype=complex)
    for k in range(4):
        out += GAMMA[k] @ (frame[k] @ partials + omega[k] @ value)
    return out


def twistor_residual(field: SpinorField, point: CoordPoint,
                     params: MetricParams) -> float:
    """max_k | nabla_k u + (1/4) e^k . D u |."""
    du = dirac_apply(field, point, params)
    worst = 0.0
    for k in range(1, 5):
        res = spin_covariant_derivative(field, k, point, params) + 0.25 * (GAMMA[k - 1] @ du)
        worst = max(worst, hermitian_norm(res))
    return worst


def parallel_residual(field: SpinorField, point: CoordPoint,
                      params: MetricParams) -> float:
    """max_k | nabla_k u |."""
    worst = 0.0
    for k in range(1, 5):
        worst = max(worst, hermitian_norm(spin_covariant_derivative(field, k, point, params)))
    return worst
