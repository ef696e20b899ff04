"""Moment maps of the orientation PC covariance.

With a_o = PC_o cos(theta_o) and b_o = PC_o sin(theta_o):

    alpha = sum_o a_o^2,  gamma = sum_o b_o^2,  beta = 2 sum_o a_o b_o
    M, m  = (alpha + gamma +- sqrt(beta^2 + (alpha - gamma)^2)) / 2

pointwise. M and m are the principal values of the 2x2 covariance, so
M >= m >= 0 (Cauchy-Schwarz gives 4*alpha*gamma >= beta^2) and
M + m = alpha + gamma = sum_o PC_o^2 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_same_shape


@dataclass(frozen=True)
class CostWeights:
    """Weights of the combined cost map mu1 * M + mu2 * m."""

    mu1: float = 1.0
    mu2: float = 1.0

    def __post_init__(self):
        for name, value in (("mu1", self.mu1), ("mu2", self.mu2)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass
class MomentMaps:
    alpha: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray
    m_max: np.ndarray
    m_min: np.ndarray
    thetas: np.ndarray


def covariance_terms(pc_maps, thetas):
    """Pointwise covariance accumulators (alpha, gamma, beta)."""
    pc_maps = [np.asarray(p, dtype=np.float64) for p in pc_maps]
    if len(pc_maps) == 0:
        raise ValueError("need at least one orientation map")
    if len(pc_maps) != len(thetas):
        raise ValueError("one axis angle per PC map is required")
    check_same_shape(*pc_maps)
    alpha = np.zeros(pc_maps[0].shape)
    gamma = np.zeros(pc_maps[0].shape)
    beta = np.zeros(pc_maps[0].shape)
    for pc, theta in zip(pc_maps, thetas):
        a = pc * np.cos(theta)
        b = pc * np.sin(theta)
        alpha += a * a
        gamma += b * b
        beta += 2.0 * a * b
    return alpha, gamma, beta


def moment_maps(alpha, gamma, beta):
    """Maximum and minimum moment maps (M, m) from the covariance terms."""
    alpha = np.asarray(alpha, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    check_same_shape(alpha, gamma, beta)
    # guard the radicand against rounding dust below zero
    disc = np.sqrt(np.maximum(beta**2 + (alpha - gamma) ** 2, 0.0))
    m_max = 0.5 * (alpha + gamma + disc)
    m_min = 0.5 * (alpha + gamma - disc)
    return m_max, m_min


def combined_cost(m_max, m_min, weights: CostWeights):
    """Weighted cost map mu1 * M + mu2 * m."""
    check_same_shape(np.asarray(m_max), np.asarray(m_min))
    return weights.mu1 * np.asarray(m_max) + weights.mu2 * np.asarray(m_min)


def compute_moments(pc_maps, thetas) -> MomentMaps:
    """Full moment bundle from per-orientation PC maps."""
    alpha, gamma, beta = covariance_terms(pc_maps, thetas)
    m_max, m_min = moment_maps(alpha, gamma, beta)
    return MomentMaps(
        alpha=alpha,
        gamma=gamma,
        beta=beta,
        m_max=m_max,
        m_min=m_min,
        thetas=np.asarray(thetas, dtype=np.float64),
    )


def power_sum_moments(pc_maps):
    """Closed-form candidate (sum PC^2 +- sqrt(sum PC^4)) / 2.

    Diagnostic only: this collapses the angle dependence and agrees with
    ``moment_maps`` exactly for a single orientation but not in general.
    ``selfcheck`` reports the measured discrepancy instead of asserting it.
    """
    pc_maps = [np.asarray(p, dtype=np.float64) for p in pc_maps]
    sq = sum(p**2 for p in pc_maps)
    quart = sum(p**4 for p in pc_maps)
    root = np.sqrt(quart)
    return 0.5 * (sq + root), 0.5 * (sq - root)
