"""Log-Gabor quadrature filter bank construction in the frequency domain.

Each filter is the product of a radial log-Gabor term

    exp(-(log(f / f0))^2 / (2 * log(sigma)^2))

centered on scale frequency f0 = 1 / (lambda_min * eta^(n-1)), and a
Gaussian angular term in wrapped angular distance from the orientation
axis. The transfer grids are one-sided in the frequency plane, so the
inverse transform of (image spectrum x transfer) yields the even filter
response in its real part and the odd (quadrature) response in its
imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import imageio


@dataclass(frozen=True)
class BankParams:
    """Geometry of a multi-scale, multi-orientation log-Gabor bank.

    ``angular_ratio`` sets the angular Gaussian std as a fraction of the
    orientation spacing pi/n_orient. It shapes orientation overlap and is
    deliberately not part of the tunable parameter vector.
    """

    lambda_min: float = 3.0
    eta: float = 2.1
    sigma: float = 0.55
    n_scales: int = 4
    n_orient: int = 6
    angular_ratio: float = 0.65

    def __post_init__(self):
        if self.lambda_min < 2.0:
            raise ValueError(f"lambda_min must be >= 2 (Nyquist), got {self.lambda_min}")
        if not 0.0 < self.sigma < 1.0:
            raise ValueError(f"sigma must lie in (0, 1), got {self.sigma}")
        if self.eta <= 1.0:
            raise ValueError(f"eta must be > 1, got {self.eta}")
        if int(self.n_scales) != self.n_scales or self.n_scales < 1:
            raise ValueError(f"n_scales must be an integer >= 1, got {self.n_scales}")
        if int(self.n_orient) != self.n_orient or self.n_orient < 1:
            raise ValueError(f"n_orient must be an integer >= 1, got {self.n_orient}")
        if self.angular_ratio <= 0.0:
            raise ValueError(f"angular_ratio must be > 0, got {self.angular_ratio}")


@dataclass(frozen=True)
class FilterBank:
    """Frequency-domain transfer grids, one per (orientation, scale).

    Grids are built for the padded image size (even dimensions) in the
    standard DFT frequency layout. Immutable after construction and safe
    to share across threads.
    """

    params: BankParams
    width: int
    height: int
    padded_shape: tuple[int, int]
    orientations: np.ndarray  # axis angles theta_o in [0, pi)
    center_freqs: np.ndarray  # cycles/pixel, strictly decreasing over scales
    transfers: tuple  # transfers[o][n] -> 2D float64 array

    def transfer(self, o: int, n: int) -> np.ndarray:
        return self.transfers[o][n]

    def dump(self, directory, fmt: str = "pgm") -> list:
        """Debug dump of every transfer grid as an image file."""
        from pathlib import Path

        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        for o, row in enumerate(self.transfers):
            for n, grid in enumerate(row):
                target = directory / f"transfer_o{o + 1}_n{n + 1}.{fmt}"
                imageio.write_map(np.fft.fftshift(grid), target, mode="clamp01")
                written.append(target)
        return written


def center_frequencies(lambda_min: float, eta: float, n_scales: int) -> np.ndarray:
    """Center frequencies 1/(lambda_min * eta^(n-1)), n = 1..n_scales."""
    if lambda_min < 2.0:
        raise ValueError("lambda_min must be >= 2")
    if eta <= 1.0:
        raise ValueError("eta must be > 1")
    if n_scales < 1:
        raise ValueError("n_scales must be >= 1")
    n = np.arange(n_scales, dtype=np.float64)
    return 1.0 / (lambda_min * eta**n)


def radial_gain(f, f_hat: float, sigma: float):
    """Log-Gabor radial gain at frequency magnitude ``f``.

    Zero at f = 0 by convention (the log singularity leaves no analytic
    DC value). Accepts scalars or arrays.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    if f_hat <= 0.0:
        raise ValueError("center frequency must be positive")
    f = np.asarray(f, dtype=np.float64)
    out = np.zeros_like(f)
    positive = f > 0.0
    log_ratio = np.log(f[positive] / f_hat)
    out[positive] = np.exp(-(log_ratio**2) / (2.0 * np.log(sigma) ** 2))
    if out.ndim == 0:
        return float(out)
    return out


def wrapped_angle(delta):
    """Wrap an angle difference to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(delta), 2.0 * np.pi)


def angular_gain(phi, theta: float, std: float):
    """Gaussian orientation gain in wrapped angular distance from ``theta``."""
    d = wrapped_angle(np.asarray(phi) - theta)
    return np.exp(-(d**2) / (2.0 * std**2))


def padded_shape(height: int, width: int) -> tuple[int, int]:
    """Pad to even dimensions only; no power-of-two constraint."""
    return height + (height % 2), width + (width % 2)


def frequency_grid(shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Radius (cycles/pixel) and angle grids in standard DFT layout."""
    fy = np.fft.fftfreq(shape[0])
    fx = np.fft.fftfreq(shape[1])
    gy, gx = np.meshgrid(fy, fx, indexing="ij")
    radius = np.hypot(gx, gy)
    phi = np.arctan2(gy, gx)
    return radius, phi


def orientation_transfers(
    params: BankParams, width: int, height: int, o: int
) -> list[np.ndarray]:
    """Transfer grids for all scales of orientation index ``o`` (0-based)."""
    if width < 8 or height < 8:
        raise ValueError("image must be at least 8x8")
    if not 0 <= o < params.n_orient:
        raise ValueError(f"orientation index {o} out of range for O={params.n_orient}")
    shape = padded_shape(height, width)
    radius, phi = frequency_grid(shape)
    theta = o * np.pi / params.n_orient
    std = params.angular_ratio * np.pi / params.n_orient
    ang = angular_gain(phi, theta, std)
    grids = []
    for f_hat in center_frequencies(params.lambda_min, params.eta, params.n_scales):
        grid = radial_gain(radius, f_hat, params.sigma) * ang
        grid[0, 0] = 0.0  # remove the mean: DC gain forced to zero
        grids.append(grid)
    return grids


def build_bank(params: BankParams, width: int, height: int) -> FilterBank:
    """Construct the full bank of n_orient x n_scales transfer grids."""
    transfers = tuple(
        tuple(orientation_transfers(params, width, height, o))
        for o in range(params.n_orient)
    )
    return FilterBank(
        params=params,
        width=width,
        height=height,
        padded_shape=padded_shape(height, width),
        orientations=np.arange(params.n_orient) * np.pi / params.n_orient,
        center_freqs=center_frequencies(params.lambda_min, params.eta, params.n_scales),
        transfers=transfers,
    )
