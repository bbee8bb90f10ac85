import math

import numpy as np

from app.spectral.field import japanese


def phi_beta(k: int, beta: float) -> float:
    """sum_{|n| <= |k|} <n>^-beta, summed exactly."""
    k = abs(int(k))
    n = np.arange(1, k + 1)
    return 1.0 + 2.0 * float(np.sum(japanese(n) ** (-beta)))


def phi_beta_regime(beta: float) -> str:
    if beta < 1:
        return "power"
    if beta == 1:
        return "log"
    return "bounded"


def phi_beta_asymptotic(k: int, beta: float) -> float:
    """Leading growth of phi_beta: <k>^(1-beta), log<k> or 1."""
    regime = phi_beta_regime(beta)
    if regime == "power":
        return float(japanese(k) ** (1.0 - beta))
    if regime == "log":
        return math.log(float(japanese(k)))
    return 1.0


def sum_estimate(k1: int, k2: int, beta: float, gamma: float, M: int) -> float:
    """sum_{|n| <= M} <n - k1>^-beta <n - k2>^-gamma."""
    n = np.arange(-M, M + 1)
    return float(np.sum(japanese(n - k1) ** (-beta) * japanese(n - k2) ** (-gamma)))


def sum_estimate_ratio(k1: int, k2: int, beta: float, gamma: float, M: int) -> float:
    """Left side over <k1-k2>^-gamma phi_beta(k1-k2); bounded when
    beta >= gamma >= 0 and beta + gamma > 1."""
    bound = japanese(k1 - k2) ** (-gamma) * phi_beta(k1 - k2, beta)
    return sum_estimate(k1, k2, beta, gamma, M) / float(bound)
