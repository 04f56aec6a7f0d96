"""Closed-form ergodic achievable rates for the phase-noisy reflected link.

All expressions are the expectation-ratio approximation of E{log2(1+sinr)}:
the numerator/denominator powers are replaced by their means, which factor
through the coherence sum gamma of the cascaded LoS response.  Reports carry a
variant tag so closed-form and Monte-Carlo numbers are never silently mixed.

Pair-coupling convention: the coherence sum for receiver i and transmitter h
couples the departure angles of pair i with the arrival angles of pair h,
i.e. the angles actually entering the product channel g_bi^T Theta Phi g_ah.
"""

from dataclasses import dataclass

import numpy as np

from .channel import Geometry, element_grid
from .errors import InvalidParameterError, NumericalDomainError
from .impairments import ImpairmentParams, phase_noise_chi

TWO_PI = 2.0 * np.pi

VARIANT_GENERAL = "general"
VARIANT_NO_RIS_HWI = "N-RIS-HWIs"
VARIANT_NO_TRX_HWI = "N-T-HWIs"
VARIANT_MONTE_CARLO = "monte-carlo"


def _per_pair(values, n_pairs: int, name: str) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(values, dtype=float), (n_pairs,)).copy()
    if np.any(arr < 0) or not np.isfinite(arr).all():
        raise InvalidParameterError(f"{name}: entries must be finite and >= 0")
    return arr


@dataclass(frozen=True)
class SystemConfig:
    """Full scenario: geometry, per-pair link statistics, powers, impairments.

    All fields are linear-scale; dB inputs convert at the config boundary
    (see risd2d.config).  phase_bits=None means continuous phase shifts.
    """

    geometry: Geometry
    alpha_a: np.ndarray      # large-scale gain, device -> surface
    alpha_b: np.ndarray      # large-scale gain, surface -> device
    rician_a: np.ndarray     # Rician factor of the a-side links
    rician_b: np.ndarray     # Rician factor of the b-side links
    power: np.ndarray        # transmit powers
    noise: np.ndarray        # receiver noise variances
    impairments: ImpairmentParams = ImpairmentParams()
    phase_bits: int | None = None

    def __post_init__(self):
        k = self.geometry.n_pairs
        for name in ("alpha_a", "alpha_b", "rician_a", "rician_b", "power", "noise"):
            object.__setattr__(self, name, _per_pair(getattr(self, name), k, name))
        if np.any(self.alpha_a <= 0) or np.any(self.alpha_b <= 0):
            raise InvalidParameterError("large-scale gains must be > 0")
        if np.any(self.power <= 0) or np.any(self.noise <= 0):
            raise InvalidParameterError("powers and noise variances must be > 0")
        if self.phase_bits is not None and self.phase_bits < 1:
            raise InvalidParameterError(f"phase_bits must be >= 1, got {self.phase_bits}")

    @property
    def n_pairs(self) -> int:
        return self.geometry.n_pairs

    @property
    def n_elements(self) -> int:
        return self.geometry.n_elements

    @property
    def chi(self) -> float:
        return phase_noise_chi(self.impairments.kappa_phase)


@dataclass(frozen=True)
class PhaseConfig:
    """L phase shifts in [0, 2pi); bits tags a 2^bits discrete grid."""

    theta: np.ndarray
    bits: int | None = None

    def __post_init__(self):
        theta = np.mod(np.asarray(self.theta, dtype=float), TWO_PI)
        object.__setattr__(self, "theta", theta)
        if self.bits is not None:
            if self.bits < 1:
                raise InvalidParameterError(f"bits must be >= 1, got {self.bits}")
            step = TWO_PI / (1 << self.bits)
            ticks = theta / step
            if not np.allclose(ticks, np.round(ticks), atol=1e-9):
                raise InvalidParameterError(
                    f"phases are not on the {1 << self.bits}-point grid")

    @property
    def n_elements(self) -> int:
        return self.theta.shape[0]


@dataclass(frozen=True)
class RateReport:
    """Per-pair and sum achievable rates (bits/s/Hz) with provenance."""

    per_pair: np.ndarray
    variant: str
    ci_half_width: np.ndarray | None = None
    sum_ci_half_width: float | None = None
    n_samples: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "per_pair", np.asarray(self.per_pair, dtype=float))

    @property
    def sum_rate(self) -> float:
        return float(self.per_pair.sum())


# ---------------------------------------------------------------------------
# geometric coherence sums


def pair_coupling(i: int, h: int, geometry: Geometry) -> tuple[float, float]:
    """(p, q) coefficients coupling receiver i's departure with transmitter h's arrival."""
    k = geometry.n_pairs
    if not (0 <= i < k and 0 <= h < k):
        raise InvalidParameterError(f"pair indices ({i}, {h}) out of range for K={k}")
    p = (np.sin(geometry.arrival_az[h]) * np.sin(geometry.arrival_el[h])
         + np.sin(geometry.departure_az[i]) * np.sin(geometry.departure_el[i]))
    q = np.cos(geometry.arrival_el[h]) + np.cos(geometry.departure_el[i])
    return float(p), float(q)


def t_geom(i: int, h: int, n: int, m: int, geometry: Geometry) -> float:
    """Grid-difference term (x_n-x_m)p + (y_n-y_m)q; n, m are 0-based element indices."""
    x, y = geometry.grid()
    if not (0 <= n < geometry.n_elements and 0 <= m < geometry.n_elements):
        raise InvalidParameterError(
            f"element indices ({n}, {m}) out of range for L={geometry.n_elements}")
    p, q = pair_coupling(i, h, geometry)
    return float((x[n] - x[m]) * p + (y[n] - y[m]) * q)


def los_phase_offsets(i: int, h: int, geometry: Geometry) -> np.ndarray:
    """Per-element offsets t_l = x_l p + y_l q for the (i, h) coupling."""
    x, y = geometry.grid()
    p, q = pair_coupling(i, h, geometry)
    return x * p + y * q


def gamma_tilde(theta: PhaseConfig | np.ndarray, chi: float, i: int, h: int,
                geometry: Geometry) -> float:
    """Coherence sum (1-chi^2)L + chi^2 |sum_l exp(j(theta_l + pi t_l))|^2.

    Algebraically identical to the L + 2 chi^2 sum-of-cosines pair form, but
    O(L); the pair form is kept as a test oracle only.
    """
    th = theta.theta if isinstance(theta, PhaseConfig) else np.asarray(theta, dtype=float)
    t = los_phase_offsets(i, h, geometry)
    s = np.exp(1j * (th + TWO_PI * geometry.spacing * t)).sum()
    n = geometry.n_elements
    return float((1.0 - chi ** 2) * n + chi ** 2 * np.abs(s) ** 2)


def _gamma_matrix(thetas: np.ndarray, chi: float, geometry: Geometry) -> np.ndarray:
    """Coherence sums for a batch of phase vectors: (B, L) -> (B, K, K)."""
    x, y = geometry.grid()
    sa = np.sin(geometry.arrival_az) * np.sin(geometry.arrival_el)
    ca = np.cos(geometry.arrival_el)
    sb = np.sin(geometry.departure_az) * np.sin(geometry.departure_el)
    cb = np.cos(geometry.departure_el)
    p = sb[:, None] + sa[None, :]          # (K, K), rows = receiver i
    q = cb[:, None] + ca[None, :]
    t = p[..., None] * x + q[..., None] * y  # (K, K, L)
    phase = thetas[:, None, None, :] + TWO_PI * geometry.spacing * t[None]
    s = np.exp(1j * phase).sum(axis=-1)
    n = geometry.n_elements
    return (1.0 - chi ** 2) * n + chi ** 2 * np.abs(s) ** 2


def cascaded_second_moment(theta: PhaseConfig | np.ndarray, chi: float, i: int, h: int,
                           config: SystemConfig) -> float:
    """Second moment of the normalized cascaded channel between receiver i and
    transmitter h: (eps_i beta_h gamma + L(eps_i + beta_h) + L) / ((eps_i+1)(beta_h+1))."""
    gam = gamma_tilde(theta, chi, i, h, config.geometry)
    eps, beta = config.rician_a[h], config.rician_b[i]
    n = config.n_elements
    return float((eps * beta * gam + n * (eps + beta) + n) / ((eps + 1.0) * (beta + 1.0)))


# ---------------------------------------------------------------------------
# achievable rates


def _moment_matrix(gam: np.ndarray, config: SystemConfig) -> np.ndarray:
    """(B, K, K) cascaded second moments; rows index the receiver, cols the transmitter."""
    eps = config.rician_a[None, :]   # transmitter h
    beta = config.rician_b[:, None]  # receiver i
    n = config.n_elements
    return (eps * beta * gam + n * (eps + beta) + n) / ((eps + 1.0) * (beta + 1.0))


def pair_rates_batch(config: SystemConfig, thetas: np.ndarray,
                     variant: str = VARIANT_GENERAL) -> np.ndarray:
    """Per-pair closed-form rates for a batch of phase vectors, shape (B, K)."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    if thetas.shape[-1] != config.n_elements:
        raise InvalidParameterError(
            f"phase vectors have length {thetas.shape[-1]}, expected {config.n_elements}")
    imp = config.impairments
    if variant == VARIANT_GENERAL:
        chi, kt, kr = config.chi, imp.kappa_t, imp.kappa_r
    elif variant == VARIANT_NO_RIS_HWI:
        chi, kt, kr = 1.0, imp.kappa_t, imp.kappa_r
    elif variant == VARIANT_NO_TRX_HWI:
        chi, kt, kr = config.chi, 0.0, 0.0
    else:
        raise InvalidParameterError(f"unknown rate variant {variant!r}")

    gam = _gamma_matrix(thetas, chi, config.geometry)
    moments = _moment_matrix(gam, config)
    # received power from transmitter h at receiver i
    powers = (config.power[None, None, :] * config.alpha_b[None, :, None]
              * config.alpha_a[None, None, :] * moments)
    desired = np.einsum("bii->bi", powers)
    if variant == VARIANT_NO_TRX_HWI:
        denom = powers.sum(axis=-1) - desired + config.noise[None, :]
    else:
        denom = ((1.0 + kr) * (1.0 + kt) * powers.sum(axis=-1)
                 - desired + config.noise[None, :])
    if np.any(denom <= 0):
        raise NumericalDomainError("non-positive rate denominator")
    return np.log2(1.0 + desired / denom)


def sum_rate_batch(config: SystemConfig, thetas: np.ndarray,
                   variant: str = VARIANT_GENERAL) -> np.ndarray:
    """Sum rate per phase vector; the optimizer fitness function."""
    return pair_rates_batch(config, thetas, variant).sum(axis=-1)


def _report(config: SystemConfig, theta: PhaseConfig, variant: str) -> RateReport:
    rates = pair_rates_batch(config, theta.theta[None, :], variant)[0]
    return RateReport(per_pair=rates, variant=variant)


def rate_general(config: SystemConfig, theta: PhaseConfig) -> RateReport:
    """Closed-form rates with both transceiver distortion and phase noise."""
    return _report(config, theta, VARIANT_GENERAL)


def rate_no_ris_hwi(config: SystemConfig, theta: PhaseConfig) -> RateReport:
    """Closed-form rates with ideal surface hardware (no phase noise, chi = 1)."""
    return _report(config, theta, VARIANT_NO_RIS_HWI)


def rate_no_transceiver_hwi(config: SystemConfig, theta: PhaseConfig) -> RateReport:
    """Closed-form rates with ideal transceivers (kappa_t = kappa_r = 0)."""
    return _report(config, theta, VARIANT_NO_TRX_HWI)


def optimal_single_pair_phases(geometry: Geometry, pair: int = 0,
                               bits: int | None = None) -> PhaseConfig:
    """Phases cancelling the pair's own LoS offsets, theta_l = -pi t_l.

    Achieves the maximum coherence sum L^2 for that pair; any common constant
    added to all phases is equivalent (pairwise differences cancel it).  With
    bits set, phases are rounded to the nearest grid point.
    """
    t = los_phase_offsets(pair, pair, geometry)
    theta = np.mod(-TWO_PI * geometry.spacing * t, TWO_PI)
    if bits is None:
        return PhaseConfig(theta)
    step = TWO_PI / (1 << bits)
    theta = np.mod(np.round(theta / step), 1 << bits) * step
    return PhaseConfig(theta, bits=bits)


def asymptotic_rate(case: str, scaling: str, *, e_u: float, alpha_a: float,
                    alpha_b: float, rician_a: float, rician_b: float,
                    kappa_t: float = 0.0, kappa_r: float = 0.0,
                    noise: float = 1.0) -> float:
    """Large-array rate limits for a single pair at optimal phases.

    case "nris" (ideal surface): power e_u/L^2 keeps a finite LoS-limited rate;
    power e_u/L drives the rate to log2(1 + 1/(kt kr + kt + kr)), set purely by
    the transceiver quality.  case "nthwi" (ideal transceivers) supports only
    the e_u/L^2 scaling.
    """
    kprod = kappa_t * kappa_r + kappa_t + kappa_r
    los_power = (e_u * alpha_b * alpha_a * rician_a * rician_b
                 / ((rician_a + 1.0) * (rician_b + 1.0)))
    if case == "nris" and scaling == "eu_over_l2":
        return float(np.log2(1.0 + los_power / (kprod * los_power + noise)))
    if case == "nris" and scaling == "eu_over_l":
        if kprod == 0.0:
            return float("inf")
        return float(np.log2(1.0 + 1.0 / kprod))
    if case == "nthwi" and scaling == "eu_over_l2":
        return float(np.log2(1.0 + los_power / noise))
    raise InvalidParameterError(f"unsupported case/scaling combination ({case}, {scaling})")
