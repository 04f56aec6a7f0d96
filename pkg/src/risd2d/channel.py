"""Deterministic LoS steering vectors and Rician channel sampling.

The reflecting surface is a square planar array of L elements at half-wavelength
spacing.  Element z (0-based storage index) sits at grid position
x = z // sqrt(L), y = z % sqrt(L); this map is defined once here and reused by
every geometric sum in the rate module.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometryError, InvalidParameterError


def _as_angle_array(values, n_pairs: int, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.shape != (n_pairs,):
        raise InvalidGeometryError(f"{name}: expected {n_pairs} angles, got shape {arr.shape}")
    return np.mod(arr, 2.0 * np.pi)


def grid_side(n_elements: int) -> int:
    """Side length of the square array; rejects non-square element counts."""
    side = math.isqrt(n_elements)
    if n_elements < 1 or side * side != n_elements:
        raise InvalidGeometryError(f"element count {n_elements} is not a positive perfect square")
    return side


def element_grid(n_elements: int) -> tuple[np.ndarray, np.ndarray]:
    """(x, y) integer coordinates of every element, storage order."""
    side = grid_side(n_elements)
    idx = np.arange(n_elements)
    return idx // side, idx % side


@dataclass(frozen=True)
class Geometry:
    """Array size and per-pair arrival/departure angles (radians).

    arrival_* are the angles of the device->surface links, departure_* the
    surface->device links.  All angles are wrapped into [0, 2pi).
    """

    n_elements: int
    arrival_az: np.ndarray
    arrival_el: np.ndarray
    departure_az: np.ndarray
    departure_el: np.ndarray
    spacing: float = 0.5  # element spacing in wavelengths

    def __post_init__(self):
        grid_side(self.n_elements)
        k = np.atleast_1d(np.asarray(self.arrival_az, dtype=float)).shape[0]
        for name in ("arrival_az", "arrival_el", "departure_az", "departure_el"):
            object.__setattr__(self, name, _as_angle_array(getattr(self, name), k, name))

    @property
    def n_pairs(self) -> int:
        return self.arrival_az.shape[0]

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        return element_grid(self.n_elements)


def random_geometry(n_elements: int, n_pairs: int, seed: int = 0) -> Geometry:
    """Default angle generator: every angle i.i.d. uniform on [0, 2pi).

    The reference deployment behind the published curves is not available, so
    experiments declare their angles through this generator (or explicitly).
    """
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(4, n_pairs))
    return Geometry(n_elements, *angles)


def steering_vector(n_elements: int, azimuth: float, elevation: float,
                    spacing: float = 0.5) -> np.ndarray:
    """LoS array response of the square planar array; entries have unit modulus."""
    x, y = element_grid(n_elements)
    phase = 2.0 * np.pi * spacing * (x * np.sin(azimuth) * np.sin(elevation)
                                     + y * np.cos(elevation))
    return np.exp(1j * phase)


def sample_rician(los: np.ndarray, rician_factor: float, rng: np.random.Generator,
                  size: int | None = None) -> np.ndarray:
    """Draw Rician-faded vectors around a unit-modulus LoS response.

    Returns sqrt(k/(k+1))*los + sqrt(1/(k+1))*w with w i.i.d. CN(0,1).
    With size=None one vector of shape (L,) is returned, else (size, L).
    """
    if rician_factor < 0:
        raise InvalidParameterError(f"rician factor must be >= 0, got {rician_factor}")
    n = los.shape[-1]
    shape = (n,) if size is None else (size, n)
    w = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    k = float(rician_factor)
    return np.sqrt(k / (k + 1.0)) * los + np.sqrt(1.0 / (k + 1.0)) * w


@dataclass(frozen=True)
class ChannelSet:
    """One realization of all device->surface (g_a) and surface->device (g_b) vectors."""

    g_a: np.ndarray  # (K, L) complex
    g_b: np.ndarray  # (K, L) complex

    def __post_init__(self):
        object.__setattr__(self, "g_a", np.asarray(self.g_a, dtype=complex))
        object.__setattr__(self, "g_b", np.asarray(self.g_b, dtype=complex))
        if self.g_a.shape != self.g_b.shape or self.g_a.ndim != 2:
            raise InvalidParameterError(
                f"channel shapes disagree: {self.g_a.shape} vs {self.g_b.shape}")
        if not (np.isfinite(self.g_a).all() and np.isfinite(self.g_b).all()):
            raise InvalidParameterError("channel entries must be finite")


def build_channel_batch(config, rng: np.random.Generator, n_draws: int):
    """Sample n_draws independent realizations of all channel vectors.

    Returns (g_a, g_b) of shape (n_draws, K, L).  NLoS draws are independent
    across pairs, across the two link sides, and across realizations.
    """
    geom = config.geometry
    k, n = geom.n_pairs, geom.n_elements
    g_a = np.empty((n_draws, k, n), dtype=complex)
    g_b = np.empty((n_draws, k, n), dtype=complex)
    for i in range(k):
        los_a = steering_vector(n, geom.arrival_az[i], geom.arrival_el[i], geom.spacing)
        los_b = steering_vector(n, geom.departure_az[i], geom.departure_el[i], geom.spacing)
        h_a = sample_rician(los_a, config.rician_a[i], rng, size=n_draws)
        h_b = sample_rician(los_b, config.rician_b[i], rng, size=n_draws)
        g_a[:, i, :] = np.sqrt(config.alpha_a[i]) * h_a
        g_b[:, i, :] = np.sqrt(config.alpha_b[i]) * h_b
    return g_a, g_b


def build_channels(config, rng: np.random.Generator) -> ChannelSet:
    """Sample one ChannelSet for the configured scenario."""
    g_a, g_b = build_channel_batch(config, rng, 1)
    return ChannelSet(g_a[0], g_b[0])


def path_loss_linear(distance_m, exponent: float = 2.2, ref_gain_db: float = -30.0):
    """Power-law large-scale fading: gain at 1 m (dB) times distance^-exponent."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0):
        raise InvalidParameterError("distances must be positive")
    return 10.0 ** (ref_gain_db / 10.0) * d ** (-exponent)
