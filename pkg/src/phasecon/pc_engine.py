"""Per-orientation local energy and phase congruency maps.

The pipeline per orientation o:

    even/odd responses  ->  F_o = sum_n even_n,  H_o = sum_n odd_n
    amplitudes          ->  A_no = sqrt(even_n^2 + odd_n^2)
    local energy        ->  E_o = sqrt(F_o^2 + H_o^2)
    frequency spread    ->  s_o = (1/N) * sum_n A_no / (A_max + eps)
    weighting           ->  W_o = 1 / (1 + exp(g * (c - s_o)))
    noise threshold     ->  T_o = mu_R + k * sigma_R  (Rayleigh estimate)
    orientation PC      ->  pc_o = W_o * max(E_o - T_o, 0) / (sum_n A_no + eps)

The joint multi-orientation PC divides the summed numerators by the
summed amplitude totals (plus one shared eps). All responses come from
frequency-domain multiplication with the one-sided bank transfers; the
image is edge-padded to even dimensions and results are cropped back.

Noise calibration: the smallest-scale amplitude response of a flat noisy
region is Rayleigh distributed. Its scale is estimated from the median
(median = scale * sqrt(2 ln 2)), which is robust to the sparse feature
pixels, then extrapolated across scales by the geometric series with
ratio 1/eta implied by the center-frequency spacing. From the total
scale, mu_R = scale * sqrt(pi/2) and sigma_R = scale * sqrt((4-pi)/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .filterbank import BankParams, FilterBank, orientation_transfers, padded_shape
from .validation import check_image, check_same_shape

_EXP_CLAMP = 700.0  # exp(700) is near the float64 overflow edge
SPREAD_SCOPES = ("orientation", "global")


@dataclass(frozen=True)
class PcParams:
    """Tunable scalars of the map computation plus the bank geometry."""

    cutoff: float = 0.55
    gain: float = 10.0
    k_noise: float = 2.0
    epsilon: float = 1e-4
    bank: BankParams = field(default_factory=BankParams)

    def __post_init__(self):
        if not 0.0 < self.cutoff < 1.0:
            raise ValueError(f"cutoff must lie in (0, 1), got {self.cutoff}")
        if self.gain <= 0.0:
            raise ValueError(f"gain must be > 0, got {self.gain}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.k_noise < 0.0:
            raise ValueError(f"k_noise must be >= 0, got {self.k_noise}")


@dataclass
class OrientationFields:
    """All intermediate maps of one orientation, at image resolution."""

    theta: float
    even: np.ndarray
    odd: np.ndarray
    amplitudes: list
    amp_sum: np.ndarray
    amp_max: np.ndarray
    energy: np.ndarray
    spread: np.ndarray
    weight: np.ndarray
    threshold: float
    pc: np.ndarray


@dataclass
class PcFieldSet:
    """Per-orientation field maps plus the joint PC map."""

    orientations: list
    pc_joint: np.ndarray
    thetas: np.ndarray

    @property
    def pc_maps(self) -> list:
        return [o.pc for o in self.orientations]


@dataclass
class OrientationBase:
    """Cutoff/gain-independent reductions of one orientation.

    Everything here depends only on the bank geometry, epsilon, k_noise
    and the spread scope, so optimizers that search cutoff/gain can reuse
    it across candidates.
    """

    theta: float
    amp_sum: np.ndarray
    energy: np.ndarray
    spread: np.ndarray
    threshold: float


def local_energy(even: np.ndarray, odd: np.ndarray) -> np.ndarray:
    """Magnitude of the analytic signal, sqrt(F^2 + H^2) pointwise."""
    check_same_shape(even, odd)
    return np.hypot(even, odd)


def frequency_spread(amp_sum, amp_max, n_scales: int, epsilon: float):
    """Normalized spread s = (1/N) * amp_sum / (amp_max + eps), in [0, 1]."""
    if n_scales < 1:
        raise ValueError("n_scales must be >= 1")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    return (np.asarray(amp_sum, dtype=np.float64) / n_scales) / (
        np.asarray(amp_max, dtype=np.float64) + epsilon
    )


def weighting(spread, cutoff: float, gain: float):
    """Sigmoid weight 1/(1 + exp(g*(c - s))), strictly increasing in s."""
    z = np.clip(gain * (cutoff - np.asarray(spread, dtype=np.float64)), -_EXP_CLAMP, _EXP_CLAMP)
    return 1.0 / (1.0 + np.exp(z))


def rayleigh_scale_from_median(amplitude_map: np.ndarray) -> float:
    """Rayleigh scale estimate from the median of an amplitude map."""
    return float(np.median(amplitude_map)) / math.sqrt(2.0 * math.log(2.0))


def noise_threshold(
    smallest_scale_amp: np.ndarray, k_noise: float, eta: float, n_scales: int
) -> float:
    """Noise energy threshold T = mu_R + k * sigma_R.

    The Rayleigh scale of the smallest-scale response is extended to the
    total response over all scales by the geometric series with ratio
    1/eta before forming the mean and standard deviation.
    """
    if k_noise < 0.0:
        raise ValueError("k_noise must be >= 0")
    scale = rayleigh_scale_from_median(smallest_scale_amp)
    ratio = 1.0 / eta
    total = scale * (1.0 - ratio**n_scales) / (1.0 - ratio)
    mu_r = total * math.sqrt(math.pi / 2.0)
    sigma_r = total * math.sqrt((4.0 - math.pi) / 2.0)
    return mu_r + k_noise * sigma_r


def pc_orientation(weight, energy, amp_sum, threshold: float, epsilon: float):
    """Orientation PC map W * max(E - T, 0) / (amp_sum + eps)."""
    numer = np.asarray(weight) * np.maximum(np.asarray(energy) - threshold, 0.0)
    return numer / (np.asarray(amp_sum) + epsilon)


def image_spectrum(image: np.ndarray) -> np.ndarray:
    """FFT of the image edge-padded to even dimensions."""
    h, w = image.shape
    ph, pw = padded_shape(h, w)
    padded = np.pad(image, ((0, ph - h), (0, pw - w)), mode="edge")
    return np.fft.fft2(padded)


def orientation_responses(image, bank: FilterBank, o: int):
    """Summed even/odd responses and per-scale amplitudes for orientation o.

    Returns (F_o, H_o, [A_1o..A_No]) cropped to the image size.
    """
    image = check_image(image)
    if (bank.height, bank.width) != image.shape:
        raise ValueError(
            f"bank built for {bank.height}x{bank.width}, image is "
            f"{image.shape[0]}x{image.shape[1]}"
        )
    spectrum = image_spectrum(image)
    even_list, odd_list, amps = _raw_responses(spectrum, image.shape, bank.transfers[o])
    return sum(even_list), sum(odd_list), amps


def compute_fields(image, params, spread_scope: str = "orientation") -> PcFieldSet:
    """Run the full pipeline and keep every intermediate map.

    ``params`` is a single PcParams shared by all orientations, or a
    sequence with one PcParams per orientation (per-orientation parameter
    overrides). The orientation count and epsilon must agree across
    entries; axis angles are theta_o = (o-1) * pi / O.

    ``spread_scope`` selects whether A_max in the spread measure is the
    maximum over scales within the orientation (default) or over all
    orientations ("global").
    """
    image = check_image(image)
    params_list = _normalize_params(params)
    if spread_scope not in SPREAD_SCOPES:
        raise ValueError(f"spread_scope must be one of {SPREAD_SCOPES}")
    n_orient = len(params_list)
    spectrum = image_spectrum(image)
    thetas = np.arange(n_orient) * np.pi / n_orient

    raw = []
    for o, pp in enumerate(params_list):
        transfers = orientation_transfers(pp.bank, image.shape[1], image.shape[0], o)
        raw.append(_raw_responses(spectrum, image.shape, transfers))

    global_max = None
    if spread_scope == "global":
        global_max = np.maximum.reduce([np.maximum.reduce(amps) for _, _, amps in raw])

    orientations = []
    joint_num = np.zeros(image.shape)
    joint_den = np.zeros(image.shape)
    for o, (pp, (even_list, odd_list, amps)) in enumerate(zip(params_list, raw)):
        even = sum(even_list)
        odd = sum(odd_list)
        amp_sum = sum(amps)
        amp_max = np.maximum.reduce(amps)
        energy = local_energy(even, odd)
        spread_max = amp_max if global_max is None else global_max
        spread = frequency_spread(amp_sum, spread_max, pp.bank.n_scales, pp.epsilon)
        weight = weighting(spread, pp.cutoff, pp.gain)
        threshold = noise_threshold(amps[0], pp.k_noise, pp.bank.eta, pp.bank.n_scales)
        pc = pc_orientation(weight, energy, amp_sum, threshold, pp.epsilon)
        orientations.append(
            OrientationFields(
                theta=float(thetas[o]),
                even=even,
                odd=odd,
                amplitudes=amps,
                amp_sum=amp_sum,
                amp_max=amp_max,
                energy=energy,
                spread=spread,
                weight=weight,
                threshold=threshold,
                pc=pc,
            )
        )
        joint_num += weight * np.maximum(energy - threshold, 0.0)
        joint_den += amp_sum
    pc_joint = joint_num / (joint_den + params_list[0].epsilon)
    return PcFieldSet(orientations=orientations, pc_joint=pc_joint, thetas=thetas)


def orientation_base(spectrum, image_shape, pp: PcParams, o: int) -> OrientationBase:
    """Slim reductions of one orientation (orientation-scope spread)."""
    transfers = orientation_transfers(pp.bank, image_shape[1], image_shape[0], o)
    even_list, odd_list, amps = _raw_responses(spectrum, image_shape, transfers)
    amp_sum = sum(amps)
    amp_max = np.maximum.reduce(amps)
    return OrientationBase(
        theta=o * np.pi / pp.bank.n_orient,
        amp_sum=amp_sum,
        energy=local_energy(sum(even_list), sum(odd_list)),
        spread=frequency_spread(amp_sum, amp_max, pp.bank.n_scales, pp.epsilon),
        threshold=noise_threshold(amps[0], pp.k_noise, pp.bank.eta, pp.bank.n_scales),
    )


def finish_pc(bases, params_list) -> tuple[list, np.ndarray]:
    """Apply cutoff/gain weighting to precomputed bases.

    Returns (per-orientation PC maps, joint PC map).
    """
    pcs = []
    joint_num = None
    joint_den = None
    for base, pp in zip(bases, params_list):
        weight = weighting(base.spread, pp.cutoff, pp.gain)
        numer = weight * np.maximum(base.energy - base.threshold, 0.0)
        pcs.append(numer / (base.amp_sum + pp.epsilon))
        joint_num = numer if joint_num is None else joint_num + numer
        joint_den = base.amp_sum if joint_den is None else joint_den + base.amp_sum
    pc_joint = joint_num / (joint_den + params_list[0].epsilon)
    return pcs, pc_joint


def _raw_responses(spectrum, image_shape, transfers):
    """ifft of spectrum x transfer per scale, cropped to the image size."""
    h, w = image_shape
    even_list, odd_list, amps = [], [], []
    for grid in transfers:
        resp = np.fft.ifft2(spectrum * grid)
        even = np.ascontiguousarray(resp.real[:h, :w])
        odd = np.ascontiguousarray(resp.imag[:h, :w])
        even_list.append(even)
        odd_list.append(odd)
        amps.append(np.hypot(even, odd))
    return even_list, odd_list, amps


def _normalize_params(params) -> list:
    if isinstance(params, PcParams):
        return [params] * params.bank.n_orient
    params_list = list(params)
    if not params_list:
        raise ValueError("need at least one orientation")
    n_orient = len(params_list)
    for pp in params_list:
        if not isinstance(pp, PcParams):
            raise TypeError("params must be PcParams or a sequence of PcParams")
        if pp.bank.n_orient != n_orient:
            raise ValueError(
                f"per-orientation params imply O={n_orient} but bank.n_orient="
                f"{pp.bank.n_orient}"
            )
        if pp.epsilon != params_list[0].epsilon:
            raise ValueError("epsilon is shared and must agree across orientations")
    return params_list
