"""Phase-shift optimizers for the closed-form sum rate.

Fitness is always a closed-form sum rate (statistical-CSI design); Monte Carlo
is never in the optimization loop.  The genetic algorithm handles both
continuous phases and B-bit grids; exhaustive enumeration certifies small
discrete instances.
"""

import time
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError
from .rate import PhaseConfig, SystemConfig, sum_rate_batch

TWO_PI = 2.0 * np.pi

DEFAULT_EXHAUSTIVE_BUDGET = 1 << 24

MUTATION_SIGMA = np.pi / 8  # wrapped-Gaussian step for continuous phases


@dataclass(frozen=True)
class GaParams:
    population_size: int = 50
    generations: int = 100
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    elite_count: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise InvalidParameterError("population_size must be >= 2")
        if self.generations < 1:
            raise InvalidParameterError("generations must be >= 1")
        if not 0 <= self.elite_count < self.population_size:
            raise InvalidParameterError("elite_count must be < population_size")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {rate}")


@dataclass
class OptResult:
    phases: PhaseConfig
    sum_rate: float
    history: np.ndarray      # best fitness per generation (GA) or single entry
    n_evaluations: int
    wall_s: float = 0.0


def random_phases(n_elements: int, bits: int | None,
                  rng: np.random.Generator) -> PhaseConfig:
    """Uniform phases on [0, 2pi) or on the 2^bits grid."""
    if bits is None:
        return PhaseConfig(rng.uniform(0.0, TWO_PI, size=n_elements))
    levels = 1 << bits
    return PhaseConfig(rng.integers(0, levels, size=n_elements) * (TWO_PI / levels),
                       bits=bits)


def _init_population(size, n_elements, bits, rng):
    if bits is None:
        return rng.uniform(0.0, TWO_PI, size=(size, n_elements))
    levels = 1 << bits
    return rng.integers(0, levels, size=(size, n_elements)) * (TWO_PI / levels)


def _tournament(fitness, rng, count):
    a = rng.integers(0, fitness.shape[0], size=count)
    b = rng.integers(0, fitness.shape[0], size=count)
    return np.where(fitness[a] >= fitness[b], a, b)


def ga_optimize(config: SystemConfig, objective: str = "general",
                bits: int | None = None, ga: GaParams = GaParams()) -> OptResult:
    """Genetic algorithm over phase vectors, N_t individuals for n generations.

    Tournament selection (size 2), uniform crossover, per-gene mutation
    (wrapped Gaussian step for continuous phases, grid re-draw for discrete),
    with elites copied verbatim so the best-fitness trace is nondecreasing.
    Exactly population_size * generations fitness evaluations after the
    initial population.  Deterministic for a fixed seed.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(ga.seed)
    n_el = config.n_elements
    levels = None if bits is None else 1 << bits
    pop = _init_population(ga.population_size, n_el, bits, rng)
    fitness = sum_rate_batch(config, pop, objective)
    n_evals = ga.population_size
    best_idx = int(np.argmax(fitness))
    best_theta, best_fit = pop[best_idx].copy(), float(fitness[best_idx])
    history = np.empty(ga.generations)

    for gen in range(ga.generations):
        order = np.argsort(fitness)[::-1]
        elites = pop[order[: ga.elite_count]]
        n_children = ga.population_size - ga.elite_count
        p1 = pop[_tournament(fitness, rng, n_children)]
        p2 = pop[_tournament(fitness, rng, n_children)]
        cross = rng.random(n_children) < ga.crossover_rate
        gene_mask = rng.random((n_children, n_el)) < 0.5
        children = np.where(cross[:, None] & gene_mask, p2, p1)
        mutate = rng.random((n_children, n_el)) < ga.mutation_rate
        if bits is None:
            steps = rng.normal(0.0, MUTATION_SIGMA, size=(n_children, n_el))
            children = np.mod(children + np.where(mutate, steps, 0.0), TWO_PI)
        else:
            redraw = rng.integers(0, levels, size=(n_children, n_el)) * (TWO_PI / levels)
            children = np.where(mutate, redraw, children)
        pop = np.concatenate([elites, children], axis=0)
        fitness = sum_rate_batch(config, pop, objective)
        n_evals += ga.population_size
        gen_best = int(np.argmax(fitness))
        if fitness[gen_best] > best_fit:
            best_fit = float(fitness[gen_best])
            best_theta = pop[gen_best].copy()
        history[gen] = best_fit

    return OptResult(
        phases=PhaseConfig(best_theta, bits=bits),
        sum_rate=best_fit,
        history=history,
        n_evaluations=n_evals,
        wall_s=time.perf_counter() - t0,
    )


def exhaustive_search(config: SystemConfig, objective: str = "general",
                      bits: int = 2,
                      budget: int = DEFAULT_EXHAUSTIVE_BUDGET) -> OptResult:
    """Enumerate the full 2^(bits*L) discrete-phase grid; exact optimum.

    Refuses instances whose grid exceeds the budget, reporting the size.
    """
    if bits < 1:
        raise InvalidParameterError(f"bits must be >= 1, got {bits}")
    t0 = time.perf_counter()
    n_el = config.n_elements
    levels = 1 << bits
    total = levels ** n_el
    if total > budget:
        raise BudgetExceededError(
            f"grid has {levels}^{n_el} = {total} points, exceeding budget {budget}")
    step = TWO_PI / levels
    best_fit = -np.inf
    best_theta = None
    batch_size = 1 << 14
    for start in range(0, total, batch_size):
        idx = np.arange(start, min(start + batch_size, total), dtype=np.int64)
        digits = np.empty((idx.shape[0], n_el), dtype=np.int64)
        rem = idx
        for pos in range(n_el):
            rem, digits[:, pos] = np.divmod(rem, levels)
        thetas = digits * step
        fitness = sum_rate_batch(config, thetas, objective)
        i = int(np.argmax(fitness))
        if fitness[i] > best_fit:
            best_fit = float(fitness[i])
            best_theta = thetas[i].copy()
    return OptResult(
        phases=PhaseConfig(best_theta, bits=bits),
        sum_rate=best_fit,
        history=np.array([best_fit]),
        n_evaluations=total,
        wall_s=time.perf_counter() - t0,
    )
