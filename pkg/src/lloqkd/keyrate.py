"""Asymptotic secret key rate for the heterodyne Gaussian protocol.

Reverse reconciliation against Gaussian collective attacks with trusted
detection noise: K = beta * I_AB - chi_BE, per channel use, in bits. The
Holevo bound is evaluated from the closed-form symplectic eigenvalues of
the two-mode state shared through the channel and of the state
conditioned on the receiver's heterodyne outcome; the two-mode Gaussian
case is exactly solvable, so no eigensolver is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ComputationError, ValidationError
from .noise_model import NoiseBudget
from .params import SystemParams

# Eigenvalues this close below 1 are treated as exactly 1 (round-off of
# a vacuum-limited direction); anything lower is a genuinely unphysical
# state and is rejected.
_EIG_TOL = 1e-9


@dataclass(frozen=True)
class KeyRateResult:
    """Mutual information, Eve's bound, and the resulting rate (bits/use)."""

    I_AB: float
    chi_BE: float
    K: float
    K_clamped: float


def g_entropy(x: float) -> float:
    """Von Neumann entropy of a thermal mode with symplectic eigenvalue x.

    ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), with g(1) = 0.
    """
    if not math.isfinite(x) or x < 1.0 - _EIG_TOL:
        raise ComputationError(f"unphysical symplectic eigenvalue: {x!r}")
    if x <= 1.0:
        return 0.0
    xp = (x + 1.0) / 2.0
    xm = (x - 1.0) / 2.0
    return xp * math.log2(xp) - xm * math.log2(xm)


def mutual_information(V_A: float, chi_tot: float) -> float:
    """Shannon rate of the heterodyne channel, both quadratures combined."""
    errors = []
    if not (math.isfinite(V_A) and V_A >= 0):
        errors.append("V_A")
    if not (math.isfinite(chi_tot) and chi_tot >= 0):
        errors.append("chi_tot")
    if errors:
        raise ValidationError(
            "mutual_information requires non-negative inputs: " + ", ".join(errors),
            fields=errors,
        )
    V = V_A + 1.0
    return math.log2((V + chi_tot) / (1.0 + chi_tot))


def symplectic_eigenvalues(
    V_A: float, T: float, chi_line: float, chi_het: float
) -> tuple[float, float, float, float]:
    """Closed-form symplectic spectra entering the Holevo bound.

    Returns (l1, l2, l3, l4): l1, l2 describe the sender/receiver state
    before detection (Eve holds its purification), l3, l4 the state
    conditioned on the receiver's heterodyne outcome with detection
    noise chi_het kept out of Eve's reach.
    """
    errors = []
    if not (math.isfinite(T) and 0 < T <= 1):
        errors.append("T")
    if not (math.isfinite(chi_line) and chi_line >= 0):
        errors.append("chi_line")
    if not (math.isfinite(chi_het) and chi_het >= 0):
        errors.append("chi_het")
    if not (math.isfinite(V_A) and V_A >= 0):
        errors.append("V_A")
    if errors:
        raise ValidationError(
            "symplectic_eigenvalues given out-of-range inputs: " + ", ".join(errors),
            fields=errors,
        )
    V = V_A + 1.0
    chi_tot = chi_line + chi_het / T

    # The naive discriminants A^2-4B and C^2-4D cancel catastrophically
    # near degenerate spectra (e.g. nearly noiseless budgets), so both
    # are evaluated through their exact perfect-square factorizations:
    #   A^2 - 4B = (V - T(V + chi_line))^2 * (A + 2 sqrt(B))
    #   C^2 - 4D = w^2 * (C + 2 sqrt(D)),  w = (C - 2 sqrt(D)) factor below
    # and the smaller root of each quadratic comes from the root product.
    A = V * V * (1.0 - 2.0 * T) + 2.0 * T + (T * (V + chi_line)) ** 2
    sqrtB = T * (V * chi_line + 1.0)
    B = sqrtB * sqrtB
    root1 = abs(V - T * (V + chi_line)) * math.sqrt(A + 2.0 * sqrtB)
    l1, l2 = _quadratic_eigs(A, B, root1)

    s = T * (V + chi_tot)
    C = (
        A * chi_het * chi_het
        + B
        + 1.0
        + 2.0 * chi_het * (V * sqrtB + T * (V + chi_line))
        + 2.0 * T * (V * V - 1.0)
    ) / (s * s)
    sqrtD = (V + sqrtB * chi_het) / s
    D = sqrtD * sqrtD
    w = (T * V * chi_het - T * V * chi_line + T * chi_het * chi_line
         - T - V * chi_het + 1.0) / s
    root2 = abs(w) * math.sqrt(C + 2.0 * sqrtD)
    l3, l4 = _quadratic_eigs(C, D, root2)
    return l1, l2, l3, l4


def _quadratic_eigs(s: float, p: float, root: float) -> tuple[float, float]:
    """Return the lambdas with lambda^2 solving x^2 - s*x + p = 0.

    ``root`` is sqrt(s^2 - 4p) supplied in a cancellation-free form; the
    larger x uses the addition branch and the smaller one the root
    product, so neither subtracts nearly equal quantities.
    """
    if s < -_EIG_TOL or p < 0:
        raise ComputationError(
            "covariance matrix unphysical for given noise budget (negative "
            "squared eigenvalue)"
        )
    hi = (s + root) / 2.0
    lo = p / hi if hi > 0 else 0.0
    return math.sqrt(max(hi, 0.0)), math.sqrt(max(lo, 0.0))


def holevo_bound(V_A: float, T: float, chi_line: float, chi_het: float) -> float:
    """Upper bound on Eve's information about the receiver's data (bits/use)."""
    l1, l2, l3, l4 = symplectic_eigenvalues(V_A, T, chi_line, chi_het)
    return g_entropy(l1) + g_entropy(l2) - g_entropy(l3) - g_entropy(l4)


def secret_key_rate(params: SystemParams, budget: NoiseBudget) -> KeyRateResult:
    """Key rate K = beta * I_AB - chi_BE for the given noise budget."""
    I_AB = mutual_information(params.V_A, budget.chi_tot)
    chi_BE = holevo_bound(params.V_A, budget.T, budget.chi_line, budget.chi_het)
    K = params.beta * I_AB - chi_BE
    return KeyRateResult(I_AB=I_AB, chi_BE=chi_BE, K=K, K_clamped=max(K, 0.0))
