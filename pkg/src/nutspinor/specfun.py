"""Hypergeometric special functions and the fixed square-root branch.

Provides the confluent (Kummer) function 1F1 for complex parameters and
argument, the Gauss function 2F1 on real argument z in [0, 1), Pochhammer
symbols, and a two-sheeted complex square root sqrt(x^2 - lambda^2 y^2)
whose phase convention is fixed once and used by every radial solution
family in :mod:`nutspinor.solutions`.

Numerical strategy
------------------
Both hypergeometric series are summed in double precision with Kahan
compensation.  Summation stops once the term falls below 1e-16 of the
running sum for three consecutive terms, so results are independent of the
iteration cap once converged.  For Re(z) < 0 the 1F1 evaluation applies the
Kummer transformation

    1F1(alpha; gamma; z) = exp(z) * 1F1(gamma - alpha; gamma; -z)

to avoid the catastrophic cancellation of the alternating direct series.
For z > 1/2 the 2F1 evaluation switches to the standard linear
transformation in 1 - z; the degenerate case of integer c - a - b uses the
logarithmic limit formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gamma as cgamma, rgamma

from .errors import DomainError, NonConvergenceError

_STOP_RATIO = 1e-16
_STOP_STREAK = 3
_MAX_TERMS = 1000


def _is_nonpositive_integer(x: complex, tol: float = 1e-12) -> bool:
    xr = complex(x)
    return abs(xr.imag) < tol and xr.real < 0.5 and abs(xr.real - round(xr.real)) < tol


@dataclass(frozen=True)
class KummerParams:
    """Parameter pair (alpha, gamma) of the confluent equation.

    gamma must not be a nonpositive integer (pole of the series).
    """

    alpha: complex
    gamma: complex

    def __post_init__(self):
        if _is_nonpositive_integer(self.gamma):
            raise DomainError(f"gamma={self.gamma} is a nonpositive integer")


@dataclass(frozen=True)
class BranchInput:
    """Arguments of the fixed-branch square root sqrt(x^2 - lambda^2 y^2)."""

    x: float
    y: float
    lam: complex
    k: int

    def __post_init__(self):
        if self.k not in (0, 1):
            raise DomainError(f"branch index k={self.k} must be 0 or 1")


def pochhammer(a: complex, n: int) -> complex:
    """Rising factorial a (a+1) ... (a+n-1), with (a, 0) = 1."""
    if n < 0 or int(n) != n:
        raise DomainError(f"pochhammer order n={n} must be a nonnegative integer")
    out = complex(1.0)
    for j in range(int(n)):
        out *= a + j
    return out


def _kahan_series(first_term: complex, ratio, max_terms: int) -> complex:
    """Sum term_0 + term_1 + ... with term_{n+1} = term_n * ratio(n).

    Kahan-compensated; stops on _STOP_STREAK consecutive tiny terms.
    """
    s = complex(first_term)
    comp = complex(0.0)
    term = complex(first_term)
    streak = 0
    for n in range(max_terms):
        term = term * ratio(n)
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        if abs(term) <= _STOP_RATIO * max(abs(s), 1e-300):
            streak += 1
            if streak >= _STOP_STREAK:
                return s
        else:
            streak = 0
    raise NonConvergenceError(
        f"hypergeometric series did not converge within {max_terms} terms "
        f"(last |term|={abs(term):.3e}, |sum|={abs(s):.3e})"
    )


def _series_1f1(alpha: complex, gamma: complex, z: complex, max_terms: int) -> complex:
    return _kahan_series(
        1.0, lambda n: (alpha + n) / (gamma + n) * z / (n + 1), max_terms
    )


def kummer_1f1(p: KummerParams, z: complex, max_terms: int = _MAX_TERMS) -> complex:
    """Confluent hypergeometric 1F1(alpha; gamma; z), complex z."""
    z = complex(z)
    if z.real < 0.0:
        # Kummer transformation; the reflected series has a positive real
        # argument and adds terms of uniform phase growth.
        return np.exp(z) * _series_1f1(p.gamma - p.alpha, p.gamma, -z, max_terms)
    return _series_1f1(p.alpha, p.gamma, z, max_terms)


def kummer_derivative(p: KummerParams, z: complex, max_terms: int = _MAX_TERMS) -> complex:
    """d/dz 1F1(alpha; gamma; z) = (alpha/gamma) 1F1(alpha+1; gamma+1; z)."""
    shifted = KummerParams(p.alpha + 1, p.gamma + 1)
    return p.alpha / p.gamma * kummer_1f1(shifted, z, max_terms)


def hyp1f1(alpha: complex, gamma: complex, z: complex) -> complex:
    """Convenience wrapper building :class:`KummerParams` on the fly."""
    return kummer_1f1(KummerParams(alpha, gamma), z)


def _series_2f1(a: complex, b: complex, c: complex, z: complex, max_terms: int) -> complex:
    return _kahan_series(
        1.0, lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)) * z, max_terms
    )


def _poly_2f1(a_int: int, b: complex, c: complex, z: complex) -> complex:
    # Terminating series: a is a nonpositive integer.
    s = complex(1.0)
    term = complex(1.0)
    for n in range(-a_int):
        term *= (a_int + n) * (b + n) / ((c + n) * (n + 1)) * z
        s += term
    return s


def _degenerate_2f1(a: complex, b: complex, m: int, w: float, max_terms: int) -> complex:
    """2F1(a, b; a+b+m; 1-w) for integer m >= 0 via the logarithmic limit."""
    c = a + b + m
    total = complex(0.0)
    if m > 0:
        term = complex(1.0)
        finite = complex(0.0)
        for k in range(m):
            if k > 0:
                term *= (a + k - 1) * (b + k - 1) / (k * (1 - m + k - 1)) * w
            finite += term
        total += cgamma(m) * cgamma(c) * rgamma(a + m) * rgamma(b + m) * finite
    lw = math.log(w)
    s = complex(0.0)
    term = complex(1.0)
    streak = 0
    for k in range(max_terms):
        if k > 0:
            term *= (a + m + k - 1) * (b + m + k - 1) / (k * (k + m)) * w
        bracket = (
            lw
            - digamma(k + 1)
            - digamma(k + m + 1)
            + digamma(a + k + m)
            + digamma(b + k + m)
        )
        contrib = term * bracket
        s += contrib
        if abs(contrib) <= _STOP_RATIO * max(abs(s), 1e-300):
            streak += 1
            if streak >= _STOP_STREAK:
                break
        else:
            streak = 0
    else:
        raise NonConvergenceError("degenerate 2F1 tail series did not converge")
    total -= ((-w) ** m) * cgamma(c) * rgamma(a) * rgamma(b) * s
    return total


def gauss_2f1(a: complex, b: complex, c: complex, z: float, max_terms: int = _MAX_TERMS) -> complex:
    """Gauss hypergeometric 2F1(a, b; c; z) for real z in [0, 1)."""
    if _is_nonpositive_integer(c):
        raise DomainError(f"c={c} is a nonpositive integer")
    z = float(z)
    if not z < 1.0:
        raise DomainError(f"argument z={z} must satisfy z < 1")
    if _is_nonpositive_integer(a):
        return _poly_2f1(round(complex(a).real), b, c, z)
    if _is_nonpositive_integer(b):
        return _poly_2f1(round(complex(b).real), a, c, z)
    if z <= 0.5:
        return _series_2f1(a, b, c, z, max_terms)
    w = 1.0 - z
    s = c - a - b
    sr = complex(s)
    if abs(sr.imag) < 1e-12 and abs(sr.real - round(sr.real)) < 1e-12:
        m = round(sr.real)
        if m >= 0:
            return _degenerate_2f1(a, b, m, w, max_terms)
        # Euler transformation flips the sign of c-a-b.
        return w ** s * _degenerate_2f1(c - a, c - b, -m, w, max_terms)
    t1 = cgamma(c) * cgamma(s) * rgamma(c - a) * rgamma(c - b) * _series_2f1(
        a, b, 1 - s, w, max_terms
    )
    t2 = cgamma(c) * cgamma(-s) * rgamma(a) * rgamma(b) * w ** s * _series_2f1(
        c - a, c - b, 1 + s, w, max_terms
    )
    return t1 + t2


def gauss_2f1_derivative(a: complex, b: complex, c: complex, z: float) -> complex:
    """d/dz 2F1(a, b; c; z) = (a b / c) 2F1(a+1, b+1; c+1; z)."""
    return a * b / c * gauss_2f1(a + 1, b + 1, c + 1, z)


def branch_sqrt(inp: BranchInput) -> complex:
    """The fixed two-sheeted square root of x^2 - lambda^2 y^2.

    With lambda = a + i b, the phase is -arccos(...)/2 for a b > 0 and
    +arccos(...)/2 otherwise; k = 1 selects the opposite sheet.
    """
    a = complex(inp.lam).real
    b = complex(inp.lam).imag
    lam2 = complex(inp.lam) ** 2
    w = inp.x * inp.x - lam2 * inp.y * inp.y
    mod = abs(w)
    if mod == 0.0:
        raise DomainError("x^2 - lambda^2 y^2 vanishes; square root branch undefined")
    cos_arg = (inp.x * inp.x - (a * a - b * b) * inp.y * inp.y) / mod
    if abs(cos_arg) > 1.0 + 1e-12:
        raise DomainError(f"arccos argument {cos_arg} outside [-1, 1]")
    cos_arg = min(1.0, max(-1.0, cos_arg))
    half_phase = 0.5 * math.acos(cos_arg)
    sign = -1.0 if a * b > 0 else 1.0
    root = math.sqrt(mod) * np.exp(1j * sign * half_phase)
    return (-1) ** inp.k * root
