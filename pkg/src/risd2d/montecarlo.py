"""Monte-Carlo simulation of the instantaneous reflected-link model.

Each draw realizes channels and per-element phase errors; data symbols and
distortion are integrated out analytically inside the conditional sinr, except
that the transmitter-distortion interference can optionally be sampled per
draw instead of replaced by its conditional power.  These estimates are the
oracle every closed form is validated against.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .channel import ChannelSet, build_channel_batch, steering_vector, sample_rician
from .errors import InvalidParameterError
from .impairments import sample_von_mises
from .rate import PhaseConfig, RateReport, SystemConfig, VARIANT_MONTE_CARLO

TX_DISTORTION_MODES = ("sampled", "expected")


@dataclass(frozen=True)
class McParams:
    """Sampling plan: outer channel draws, optional nested phase-noise draws."""

    n_channel_draws: int = 10000
    n_noise_draws_per_channel: int = 1
    seed: int = 0
    confidence: float = 0.95

    def __post_init__(self):
        if self.n_channel_draws < 1 or self.n_noise_draws_per_channel < 1:
            raise InvalidParameterError("draw counts must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise InvalidParameterError(
                f"confidence must lie in (0, 1), got {self.confidence}")

    @property
    def z_value(self) -> float:
        return float(stats.norm.ppf(0.5 * (1.0 + self.confidence)))


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with a normal-approximation confidence half-width."""

    mean: float
    half_width: float
    n_samples: int

    def __post_init__(self):
        if self.half_width < 0:
            raise InvalidParameterError("half width must be >= 0")


def _pairwise_gains(g_b_row: np.ndarray, reflect: np.ndarray,
                    g_a: np.ndarray) -> np.ndarray:
    """v_j = g_bi^T diag(reflect) g_aj for all transmitters j."""
    return (g_a * (g_b_row * reflect)[..., None, :]).sum(axis=-1)


def instantaneous_sinr(channels: ChannelSet, theta: PhaseConfig,
                       phase_noise: np.ndarray, config: SystemConfig, i: int,
                       tx_distortion: np.ndarray | None = None) -> float:
    """Conditional sinr at receiver i for one channel/phase-noise realization.

    Data symbols and distortion are averaged out given the channels: the
    transmitter-distortion interference enters as kappa_t * sum_j p_j |v_j|^2
    and the receiver-distortion variance as kappa_r (1+kappa_t) times the same
    sum.  Passing tx_distortion (one complex sample per transmitter) replaces
    the transmitter term by the sampled quadratic form instead.
    """
    k = config.n_pairs
    if not 0 <= i < k:
        raise InvalidParameterError(f"pair index {i} out of range for K={k}")
    phase_noise = np.asarray(phase_noise, dtype=float)
    if phase_noise.shape != (config.n_elements,):
        raise InvalidParameterError(
            f"phase noise has shape {phase_noise.shape}, expected ({config.n_elements},)")
    imp = config.impairments
    reflect = np.exp(1j * (theta.theta + phase_noise))
    v = _pairwise_gains(channels.g_b[i], reflect, channels.g_a)
    received = config.power * np.abs(v) ** 2
    total = received.sum()
    interference = total - received[i]
    if tx_distortion is None:
        tx_term = imp.kappa_t * total
    else:
        tx_term = np.abs((np.sqrt(config.power) * v * tx_distortion).sum()) ** 2
    rx_term = imp.kappa_r * (1.0 + imp.kappa_t) * total
    return float(received[i] / (interference + tx_term + rx_term + config.noise[i]))


class _RunningStats:
    """Streaming mean/variance over per-draw rate vectors."""

    def __init__(self, width: int):
        self.n = 0
        self.s1 = np.zeros(width)
        self.s2 = np.zeros(width)

    def add(self, samples: np.ndarray):
        self.n += samples.shape[0]
        self.s1 += samples.sum(axis=0)
        self.s2 += (samples ** 2).sum(axis=0)

    def mean(self) -> np.ndarray:
        return self.s1 / self.n

    def half_width(self, z: float) -> np.ndarray:
        if self.n < 2:
            return np.zeros_like(self.s1)
        var = np.maximum(self.s2 / self.n - self.mean() ** 2, 0.0) * self.n / (self.n - 1)
        return z * np.sqrt(var / self.n)


def _batch_rates(config: SystemConfig, theta: np.ndarray, g_a: np.ndarray,
                 g_b: np.ndarray, dtheta: np.ndarray, eta_t: np.ndarray | None):
    """log2(1+sinr) for every draw and pair; arrays are (b, K, L) / (b, L)."""
    imp = config.impairments
    reflect = np.exp(1j * (theta[None, :] + dtheta))
    # v[b, i, j] = g_b[b, i] . (reflect[b] * g_a[b, j])
    v = np.einsum("bil,bl,bjl->bij", g_b, reflect, g_a, optimize=True)
    received = config.power[None, None, :] * np.abs(v) ** 2
    total = received.sum(axis=-1)
    desired = np.einsum("bii->bi", received)
    interference = total - desired
    if eta_t is None:
        tx_term = imp.kappa_t * total
    else:
        scaled = np.sqrt(config.power)[None, :] * eta_t
        tx_term = np.abs(np.einsum("bij,bj->bi", v, scaled, optimize=True)) ** 2
    rx_term = imp.kappa_r * (1.0 + imp.kappa_t) * total
    sinr = desired / (interference + tx_term + rx_term + config.noise[None, :])
    return np.log2(1.0 + sinr)


def ergodic_rate_mc(config: SystemConfig, theta: PhaseConfig, mc: McParams,
                    tx_distortion_mode: str = "sampled") -> RateReport:
    """Estimate per-pair ergodic rates by averaging log2(1+sinr) over draws.

    Deterministic for a fixed seed.  tx_distortion_mode "sampled" draws the
    transmitter distortion per realization; "expected" uses its conditional
    power (the form the closed-form analysis averages).
    """
    if tx_distortion_mode not in TX_DISTORTION_MODES:
        raise InvalidParameterError(
            f"tx_distortion_mode must be one of {TX_DISTORTION_MODES}")
    rng = np.random.default_rng(mc.seed)
    k, n_el = config.n_pairs, config.n_elements
    kappa_t = config.impairments.kappa_t
    kappa_ph = config.impairments.kappa_phase
    pair_stats = _RunningStats(k)
    sum_stats = _RunningStats(1)
    remaining = mc.n_channel_draws
    batch_size = 8192
    while remaining > 0:
        b = min(batch_size, remaining)
        remaining -= b
        g_a, g_b = build_channel_batch(config, rng, b)
        for _ in range(mc.n_noise_draws_per_channel):
            dtheta = sample_von_mises(kappa_ph, rng, size=(b, n_el))
            eta_t = None
            if tx_distortion_mode == "sampled" and kappa_t > 0:
                w = rng.standard_normal((b, k)) + 1j * rng.standard_normal((b, k))
                eta_t = np.sqrt(kappa_t / 2.0) * w
            rates = _batch_rates(config, theta.theta, g_a, g_b, dtheta, eta_t)
            pair_stats.add(rates)
            sum_stats.add(rates.sum(axis=-1, keepdims=True))
    z = mc.z_value
    return RateReport(
        per_pair=pair_stats.mean(),
        variant=VARIANT_MONTE_CARLO,
        ci_half_width=pair_stats.half_width(z),
        sum_ci_half_width=float(sum_stats.half_width(z)[0]),
        n_samples=pair_stats.n,
    )


def moment_oracle(config: SystemConfig, theta: PhaseConfig, i: int, h: int,
                  mc: McParams) -> McEstimate:
    """Monte-Carlo estimate of the normalized cascaded second moment
    E{|h_bi^T Theta Phi h_ah|^2}, the oracle for the closed form."""
    k = config.n_pairs
    if not (0 <= i < k and 0 <= h < k):
        raise InvalidParameterError(f"pair indices ({i}, {h}) out of range for K={k}")
    rng = np.random.default_rng(mc.seed)
    geom = config.geometry
    n_el = config.n_elements
    los_b = steering_vector(n_el, geom.departure_az[i], geom.departure_el[i], geom.spacing)
    los_a = steering_vector(n_el, geom.arrival_az[h], geom.arrival_el[h], geom.spacing)
    stats_acc = _RunningStats(1)
    remaining = mc.n_channel_draws * mc.n_noise_draws_per_channel
    batch_size = 8192
    while remaining > 0:
        b = min(batch_size, remaining)
        remaining -= b
        h_b = sample_rician(los_b, config.rician_b[i], rng, size=b)
        h_a = sample_rician(los_a, config.rician_a[h], rng, size=b)
        dtheta = sample_von_mises(config.impairments.kappa_phase, rng, size=(b, n_el))
        reflect = np.exp(1j * (theta.theta[None, :] + dtheta))
        val = np.abs((h_b * reflect * h_a).sum(axis=-1)) ** 2
        stats_acc.add(val[:, None])
    return McEstimate(
        mean=float(stats_acc.mean()[0]),
        half_width=float(stats_acc.half_width(mc.z_value)[0]),
        n_samples=stats_acc.n,
    )
