"""Experiment-file parsing and validation.

Experiment files are YAML with a `scenario` block (dB-valued fields convert to
linear here, nowhere else), a `sweep` axis, a method list, and sampler /
optimizer parameter blocks.  Validation errors name the offending field.
"""

from dataclasses import dataclass, field, asdict

import numpy as np
import yaml

from .channel import Geometry, path_loss_linear, random_geometry
from .errors import ConfigError, RisD2DError
from .impairments import ImpairmentParams
from .montecarlo import McParams
from .optimize import DEFAULT_EXHAUSTIVE_BUDGET, GaParams
from .rate import SystemConfig

SWEEP_AXES = ("snr_db", "rician_db", "bits", "elements", "kappa", "kappa_phase")

METHODS = ("closed-general", "closed-nris", "closed-nthwi", "mc",
           "ga-cps", "ga-dps", "exhaustive", "random", "analytic-single")

_SCENARIO_DEFAULTS = {
    "noise_db": 0.0,
    "alpha_a_db": 0.0,
    "alpha_b_db": 0.0,
    "kappa_t": 0.0,
    "kappa_r": 0.0,
    "kappa_phase": 0.0,
    "phase_bits": None,
    "angle_seed": 0,
    "path_loss_exponent": 2.2,
    "path_loss_ref_db": -30.0,
}

_SCENARIO_KEYS = set(_SCENARIO_DEFAULTS) | {
    "n_pairs", "n_elements", "snr_db", "rician_eps_db", "rician_beta_db",
    "distance_a_m", "distance_b_m",
    "arrival_az", "arrival_el", "departure_az", "departure_el",
}


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def _fail(path: str, rule: str):
    raise ConfigError(f"{path}: {rule}")


def _get_number(raw: dict, key: str, path: str, *, required=False, default=None):
    if key not in raw or raw[key] is None:
        if required:
            _fail(f"{path}.{key}", "field is required")
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"{path}.{key}", f"expected a number, got {value!r}")
    return value


def _per_pair_db(raw: dict, key: str, n_pairs: int, path: str, default=None):
    value = raw.get(key, default)
    if value is None:
        _fail(f"{path}.{key}", "field is required")
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.shape not in ((1,), (n_pairs,)):
        _fail(f"{path}.{key}", f"expected a scalar or {n_pairs} values, got {arr.shape[0]}")
    return np.broadcast_to(db_to_linear(arr), (n_pairs,)).copy()


def validate_config(raw: dict) -> SystemConfig:
    """Build a SystemConfig from a scenario mapping; all dB fields go linear here."""
    if not isinstance(raw, dict):
        raise ConfigError("scenario: expected a mapping")
    unknown = set(raw) - _SCENARIO_KEYS
    if unknown:
        _fail(f"scenario.{sorted(unknown)[0]}", "unknown field")
    scenario = {**_SCENARIO_DEFAULTS, **raw}
    path = "scenario"

    n_pairs = _get_number(scenario, "n_pairs", path, required=True)
    if not isinstance(n_pairs, int) or n_pairs < 1:
        _fail(f"{path}.n_pairs", f"must be a positive integer, got {n_pairs!r}")
    n_elements = _get_number(scenario, "n_elements", path, required=True)
    if not isinstance(n_elements, int) or n_elements < 1:
        _fail(f"{path}.n_elements", f"must be a positive integer, got {n_elements!r}")

    explicit = [k for k in ("arrival_az", "arrival_el", "departure_az", "departure_el")
                if k in raw]
    try:
        if explicit:
            if len(explicit) != 4:
                _fail(f"{path}.{explicit[0]}", "all four angle lists must be given together")
            geometry = Geometry(n_elements, scenario["arrival_az"], scenario["arrival_el"],
                                scenario["departure_az"], scenario["departure_el"])
        else:
            geometry = random_geometry(n_elements, n_pairs, int(scenario["angle_seed"]))
    except RisD2DError as exc:
        raise ConfigError(f"{path}.n_elements: {exc}") from exc
    if geometry.n_pairs != n_pairs:
        _fail(f"{path}.arrival_az", f"angle lists must have {n_pairs} entries")

    noise = np.broadcast_to(
        db_to_linear(_get_number(scenario, "noise_db", path, default=0.0)), (n_pairs,)).copy()
    snr = _per_pair_db(scenario, "snr_db", n_pairs, path)
    power = snr * noise

    eps = _per_pair_db(scenario, "rician_eps_db", n_pairs, path)
    beta = _per_pair_db(scenario, "rician_beta_db", n_pairs, path)

    if "distance_a_m" in raw:
        alpha_a = path_loss_linear(np.broadcast_to(
            np.asarray(raw["distance_a_m"], dtype=float), (n_pairs,)),
            scenario["path_loss_exponent"], scenario["path_loss_ref_db"])
    else:
        alpha_a = _per_pair_db(scenario, "alpha_a_db", n_pairs, path, default=0.0)
    if "distance_b_m" in raw:
        alpha_b = path_loss_linear(np.broadcast_to(
            np.asarray(raw["distance_b_m"], dtype=float), (n_pairs,)),
            scenario["path_loss_exponent"], scenario["path_loss_ref_db"])
    else:
        alpha_b = _per_pair_db(scenario, "alpha_b_db", n_pairs, path, default=0.0)

    kappa_t = _get_number(scenario, "kappa_t", path, default=0.0)
    kappa_r = _get_number(scenario, "kappa_r", path, default=0.0)
    kappa_phase = _get_number(scenario, "kappa_phase", path, default=0.0)
    if not 0.0 <= kappa_t < 1.0:
        _fail(f"{path}.kappa_t", f"must lie in [0, 1), got {kappa_t}")
    if not 0.0 <= kappa_r < 1.0:
        _fail(f"{path}.kappa_r", f"must lie in [0, 1), got {kappa_r}")
    if kappa_phase < 0:
        _fail(f"{path}.kappa_phase", f"must be >= 0, got {kappa_phase}")

    phase_bits = scenario["phase_bits"]
    if phase_bits is not None and (not isinstance(phase_bits, int) or phase_bits < 1):
        _fail(f"{path}.phase_bits", f"must be null or an integer >= 1, got {phase_bits!r}")

    try:
        return SystemConfig(
            geometry=geometry,
            alpha_a=alpha_a, alpha_b=alpha_b,
            rician_a=eps, rician_b=beta,
            power=power, noise=noise,
            impairments=ImpairmentParams(kappa_t, kappa_r, kappa_phase),
            phase_bits=phase_bits,
        )
    except RisD2DError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass
class ExperimentSpec:
    """One sweep: a scenario template, an axis, and the methods to evaluate."""

    scenario: dict
    axis: str
    values: list
    methods: list
    mc: McParams = field(default_factory=McParams)
    ga: GaParams = field(default_factory=GaParams)
    output: str | None = None
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET
    name: str = ""

    def scenario_at(self, axis_value) -> dict:
        """Scenario mapping with the sweep axis applied."""
        scen = dict(self.scenario)
        if self.axis == "snr_db":
            scen["snr_db"] = axis_value
        elif self.axis == "rician_db":
            scen["rician_eps_db"] = axis_value
            scen["rician_beta_db"] = axis_value
        elif self.axis == "bits":
            scen["phase_bits"] = int(axis_value)
        elif self.axis == "elements":
            scen["n_elements"] = int(axis_value)
        elif self.axis == "kappa":
            scen["kappa_t"] = axis_value
            scen["kappa_r"] = axis_value
        elif self.axis == "kappa_phase":
            scen["kappa_phase"] = axis_value
        else:  # unreachable after parse_spec validation
            raise ConfigError(f"sweep.axis: unknown axis {self.axis!r}")
        return scen

    def config_at(self, axis_value) -> SystemConfig:
        return validate_config(self.scenario_at(axis_value))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "scenario": dict(self.scenario),
            "sweep": {"axis": self.axis, "values": list(self.values)},
            "methods": list(self.methods),
            "mc": asdict(self.mc),
            "ga": asdict(self.ga),
            "output": self.output,
            "exhaustive_budget": self.exhaustive_budget,
        }


def parse_spec(raw: dict) -> ExperimentSpec:
    """Validate a full experiment mapping; every failure names its field."""
    if not isinstance(raw, dict):
        raise ConfigError("spec: expected a mapping at top level")
    if "scenario" not in raw:
        _fail("scenario", "block is required")
    sweep = raw.get("sweep")
    if not isinstance(sweep, dict):
        _fail("sweep", "block is required")
    axis = sweep.get("axis")
    if axis not in SWEEP_AXES:
        _fail("sweep.axis", f"must be one of {SWEEP_AXES}, got {axis!r}")
    values = sweep.get("values")
    if not isinstance(values, list) or not values:
        _fail("sweep.values", "must be a nonempty list")
    methods = raw.get("methods")
    if not isinstance(methods, list) or not methods:
        _fail("methods", "must be a nonempty list")
    for m in methods:
        if m not in METHODS:
            _fail("methods", f"unknown method {m!r}; choose from {METHODS}")
    try:
        mc = McParams(**(raw.get("mc") or {}))
    except (TypeError, RisD2DError) as exc:
        raise ConfigError(f"mc: {exc}") from exc
    try:
        ga = GaParams(**(raw.get("ga") or {}))
    except (TypeError, RisD2DError) as exc:
        raise ConfigError(f"ga: {exc}") from exc
    budget = raw.get("exhaustive_budget", DEFAULT_EXHAUSTIVE_BUDGET)
    if not isinstance(budget, int) or budget < 1:
        _fail("exhaustive_budget", f"must be a positive integer, got {budget!r}")

    spec = ExperimentSpec(
        scenario=dict(raw["scenario"]),
        axis=axis,
        values=list(values),
        methods=list(methods),
        mc=mc,
        ga=ga,
        output=raw.get("output"),
        exhaustive_budget=budget,
        name=str(raw.get("name", "")),
    )
    # every axis point must yield a valid scenario; fail before any computation
    for value in spec.values:
        spec.config_at(value)
    return spec


def load_spec(path: str) -> ExperimentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return parse_spec(raw)
