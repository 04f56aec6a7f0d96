import numpy as np
import pytest

from risd2d import Geometry, ImpairmentParams, SystemConfig, random_geometry


def make_config(n_elements=16, n_pairs=2, *, alpha_a=1.0, alpha_b=1.0,
                rician_a=10.0, rician_b=10.0, power=10.0, noise=1.0,
                kappa_t=0.05, kappa_r=0.05, kappa_phase=4.0,
                phase_bits=None, angle_seed=11) -> SystemConfig:
    return SystemConfig(
        geometry=random_geometry(n_elements, n_pairs, seed=angle_seed),
        alpha_a=alpha_a, alpha_b=alpha_b,
        rician_a=rician_a, rician_b=rician_b,
        power=power, noise=noise,
        impairments=ImpairmentParams(kappa_t, kappa_r, kappa_phase),
        phase_bits=phase_bits,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
