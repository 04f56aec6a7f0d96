"""RIS-aided D2D link toolkit: closed-form ergodic rates under hardware
impairments, Monte-Carlo validation, and phase-shift optimization."""

from .channel import (ChannelSet, Geometry, build_channels, random_geometry,
                      sample_rician, steering_vector)
from .config import ExperimentSpec, load_spec, parse_spec, validate_config
from .errors import (BudgetExceededError, ConfigError, InvalidGeometryError,
                     InvalidParameterError, NumericalDomainError, RisD2DError)
from .experiment import run_experiment
from .impairments import (ImpairmentParams, bessel_i, phase_noise_chi,
                          rx_distortion_variance, sample_von_mises,
                          tx_distortion_variance)
from .montecarlo import McEstimate, McParams, ergodic_rate_mc, instantaneous_sinr, moment_oracle
from .optimize import GaParams, OptResult, exhaustive_search, ga_optimize, random_phases
from .rate import (PhaseConfig, RateReport, SystemConfig, asymptotic_rate,
                   cascaded_second_moment, gamma_tilde, optimal_single_pair_phases,
                   rate_general, rate_no_ris_hwi, rate_no_transceiver_hwi,
                   sum_rate_batch, t_geom)

__version__ = "0.1.0"
