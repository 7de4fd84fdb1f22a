"""Bee-colony trainer for feed-forward networks.

Food sources are flat parameter vectors. Each cycle: onlookers pick sources by
dance-strength probability, every visited source gets a scalar movement step
subtracted from its parameters, a worse or divergent candidate is reverted,
role counts shift with the population-average error, and scouts re-seed fresh
random sources on the cycle after a non-improving one. The best source is
never overwritten, so the population minimum only ever goes down.

Randomness comes from one master generator; all draws happen in the sequential
mutation phase in a fixed order (initial seeding by ascending solution index,
then per cycle: scout re-seeds by ascending index, one uniform per onlooker
roulette pick with all picks drawn up front, then one [-1, 1] vector per
stochastic move in visit order). Fitness evaluation draws nothing, which is
what lets the parallel path reproduce the single-threaded stream exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import metrics
from . import network as nn
from .errors import ConfigError, NumericOverflowError, StateError

ROLE_EMPLOYED = "employed"
ROLE_ONLOOKER = "onlooker"
ROLE_SCOUT = "scout"


@dataclass(frozen=True)
class AbcConfig:
    population: int = 10
    max_cycles: int = 100
    learning_rate: float = 0.5  # used by the optional gradient refinement
    ccr_threshold: float = 95.0  # percent; terminate when the average exceeds it
    step_mode: str = "stochastic"  # "stochastic" | "literal"
    prob_mode: str = "classic"  # "classic" | "literal"
    divergence_cap: float = 1e6
    epsilon: float = 1e-12
    seed: int = 0
    hybrid_bp: bool = True  # guarded descent sweeps per source each cycle
    hybrid_batch: int = 8  # batch size of the hybrid descent sweeps
    hybrid_sweeps: int = 2  # sweeps per source per cycle
    move_enabled: bool = True  # disable for stability-diagnostic runs

    def validate(self) -> None:
        if self.population < 2:
            raise ConfigError("population must be at least 2")
        if self.max_cycles < 1:
            raise ConfigError("max_cycles must be at least 1")
        if not (math.isfinite(self.learning_rate) and self.learning_rate >= 0):
            raise ConfigError("learning_rate must be finite and >= 0")
        if not 0.0 <= self.ccr_threshold <= 100.0:
            raise ConfigError("ccr_threshold must be in [0, 100]")
        if self.step_mode not in ("stochastic", "literal"):
            raise ConfigError(f"unknown step_mode {self.step_mode!r}")
        if self.prob_mode not in ("classic", "literal"):
            raise ConfigError(f"unknown prob_mode {self.prob_mode!r}")
        if not self.divergence_cap > 0:
            raise ConfigError("divergence_cap must be positive")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.hybrid_batch < 1:
            raise ConfigError("hybrid_batch must be at least 1")
        if self.hybrid_sweeps < 1:
            raise ConfigError("hybrid_sweeps must be at least 1")


@dataclass
class Solution:
    """One food source: flat parameters plus cached quality and role."""

    params: np.ndarray
    fitness: float | None = None  # average squared error over the dataset
    ccr: float | None = None  # percent correct, cached with the fitness
    role: str = ROLE_ONLOOKER
    # Purely a time saver: descent sweeps are deterministic in the parameters,
    # so once every backtracking rate has failed there is no point retrying
    # until the parameters change. Never affects results.
    settled: bool = False


@dataclass
class Colony:
    solutions: list[Solution]
    best_index: int
    n_employed: int
    n_scout: int
    cycle: int
    rng: np.random.Generator
    reseed_pending: bool = False

    @property
    def size(self) -> int:
        return len(self.solutions)

    def fitness_vector(self) -> np.ndarray:
        if any(s.fitness is None for s in self.solutions):
            raise StateError("colony has unevaluated solutions")
        return np.array([s.fitness for s in self.solutions], dtype=float)


# -- construction and evaluation ----------------------------------------------


def init_population(cfg: AbcConfig, arch) -> Colony:
    """N random food sources with parameters uniform in [0, 1); one scout."""
    cfg.validate()
    n_params = nn.param_count(arch)
    rng = np.random.default_rng(cfg.seed)
    solutions = [
        Solution(params=rng.random(n_params), role=ROLE_EMPLOYED)
        for _ in range(cfg.population)
    ]
    solutions[-1].role = ROLE_SCOUT
    return Colony(
        solutions=solutions,
        best_index=0,
        n_employed=cfg.population - 1,
        n_scout=1,
        cycle=0,
        rng=rng,
    )


def _score_params(params, arch, data, cap: float) -> tuple[float, float]:
    """(average squared error, classification rate) from one forward pass.

    Divergence maps to (cap, 0); capped solutions are abandonable and never
    become the best source.
    """
    try:
        net = nn.network_from_params(arch, params)
        P = nn.predictions(net, data.features)
    except NumericOverflowError:
        return cap, 0.0
    e = data.targets - P
    value = float(np.sum(np.sum(e * e, axis=1))) / data.n_samples
    if not math.isfinite(value) or value > cap:
        return cap, 0.0
    return value, metrics.ccr_from_predictions(P, data.targets)


def evaluate(colony: Colony, arch, data, cfg: AbcConfig | None = None,
             parallel: bool = False) -> Colony:
    """Score every solution (fitness + classification rate), refresh the best.

    A solution that overflows gets the divergence cap as fitness and is never
    selected as best. Parallel evaluation is a pure map over solutions and is
    bit-identical to the sequential order.
    """
    cap = cfg.divergence_cap if cfg is not None else AbcConfig().divergence_cap

    def score(sol: Solution):
        return _score_params(sol.params, arch, data, cap)

    if parallel:
        with ThreadPoolExecutor() as pool:
            scores = list(pool.map(score, colony.solutions))
    else:
        scores = [score(s) for s in colony.solutions]
    for sol, (f, c) in zip(colony.solutions, scores):
        sol.fitness = f
        sol.ccr = c
    colony.best_index = _best_index(colony, cap)
    return colony


def _best_index(colony: Colony, cap: float) -> int:
    """Arg-min fitness, lowest index on ties; capped solutions never win."""
    fits = colony.fitness_vector()
    alive = np.flatnonzero(fits < cap)
    if alive.size == 0:
        return 0
    return int(alive[np.argmin(fits[alive])])


def scout_best(colony: Colony) -> int:
    """Index of the richest food source (minimum average squared error)."""
    fits = colony.fitness_vector()
    return int(np.argmin(fits))


# -- per-cycle operations ------------------------------------------------------


def selection_probabilities(colony: Colony, cfg: AbcConfig) -> np.ndarray:
    """Chance of each food source being picked by an onlooker.

    classic: dance strength 1 / (1 + error), normalized. literal: the same
    strength additionally weighted by the source's distance from the best
    error, floored at epsilon, with a uniform fallback when every weighted
    term underflows the floor.
    """
    fits = colony.fitness_vector()
    quality = 1.0 / (1.0 + fits)
    if cfg.prob_mode == "classic":
        terms = quality
    else:
        dist = np.maximum(np.abs(fits - fits.min()), cfg.epsilon)
        terms = quality * dist
        if np.all(terms < cfg.epsilon):
            return np.full(len(fits), 1.0 / len(fits))
    return terms / terms.sum()


def move_bee(f_best: float, f_other: float, cfg: AbcConfig) -> float:
    """Scalar movement toward a food source, from the two error values.

    step = (f_best - f_other) + exp(cos(f_best / f_other)) - ln(f_best * f_other)
    with both errors floored at epsilon inside the ratio and the product
    (radian cosine, natural logarithm).
    """
    fi = max(f_best, cfg.epsilon)
    fj = max(f_other, cfg.epsilon)
    step = (f_best - f_other) + math.exp(math.cos(fi / fj)) - math.log(fi * fj)
    if not math.isfinite(step):  # unreachable given the floors
        raise NumericOverflowError(
            f"movement step diverged for errors ({f_best}, {f_other})"
        )
    return step


def classic_move(v: float, neighbor_p: float, r: float) -> float:
    """Textbook per-parameter move: v + (v - p) * r, r in [-1, 1]."""
    return v + (v - neighbor_p) * r


def apply_move(sol: Solution, step: float, cfg: AbcConfig, rng) -> Solution:
    """Candidate solution one movement step away; the original is untouched.

    literal mode subtracts the scalar from every parameter. stochastic mode
    (default) scales the step per parameter by a fresh uniform draw from
    [-1, 1], which keeps the population from collapsing onto one vector.
    """
    if cfg.step_mode == "literal":
        params = sol.params - step
    else:
        params = sol.params - step * rng.uniform(-1.0, 1.0, sol.params.shape[0])
    return Solution(params=params, fitness=None, ccr=None, role=sol.role)


def greedy_retain_or_revert(old: Solution, candidate: Solution, data, arch,
                            cfg: AbcConfig):
    """Keep the candidate only on strict improvement; otherwise hand back the
    original object untouched (bit-identical parameters)."""
    if old.fitness is None:
        raise StateError("cannot compare against an unevaluated solution")
    f, c = _score_params(candidate.params, arch, data, cfg.divergence_cap)
    if not math.isfinite(f) or f >= cfg.divergence_cap or f >= old.fitness:
        return old, False
    candidate.fitness = f
    candidate.ccr = c
    return candidate, True


def adjust_roles(colony: Colony, improved: bool) -> Colony:
    """Shift role counts with the population-average error.

    Improvement converts an employed bee into an onlooker (floor of one
    employed). Anything else schedules every scout to re-seed next cycle and
    recruits one more scout, capped so at least one bee stays employed.
    """
    n = colony.size
    if improved:
        colony.n_employed = max(1, colony.n_employed - 1)
    else:
        colony.n_scout = min(n - 1, colony.n_scout + 1)
        colony.n_employed = min(colony.n_employed, n - colony.n_scout)
        colony.reseed_pending = True
    return colony


def _assign_roles(colony: Colony) -> None:
    """Label solutions: employed on the best sources, scouts on the worst
    (never the best source), onlookers in between."""
    order = sorted(range(colony.size), key=lambda i: (colony.solutions[i].fitness, i))
    for i in order:
        colony.solutions[i].role = ROLE_ONLOOKER
    for i in order[: colony.n_employed]:
        colony.solutions[i].role = ROLE_EMPLOYED
    scouts = [i for i in reversed(order) if i != colony.best_index][: colony.n_scout]
    for i in scouts:
        colony.solutions[i].role = ROLE_SCOUT


def _roulette(probs: np.ndarray, rng) -> int:
    r = rng.random()
    return min(int(np.searchsorted(np.cumsum(probs), r, side="right")), len(probs) - 1)


# -- the full training loop ----------------------------------------------------


def run(cfg: AbcConfig, arch, data, sink=None, parallel: bool = False,
        stability_window: int = metrics.DEFAULT_STABILITY_WINDOW) -> metrics.RunReport:
    """Train with the bee-colony loop and return the cycle-by-cycle report.

    Emits one IterationRecord per cycle to ``sink`` (when given) and stops as
    soon as the population-average classification rate exceeds the threshold,
    or after ``max_cycles`` cycles.
    """
    cfg.validate()
    _check_data(arch, data)
    colony = init_population(cfg, arch)
    evaluate(colony, arch, data, cfg, parallel=parallel)
    prev_avg = float(np.mean(colony.fitness_vector()))

    records = []
    terminated_by = "mcn"
    for cycle in range(1, cfg.max_cycles + 1):
        colony.cycle = cycle
        _assign_roles(colony)

        if colony.reseed_pending:
            _reseed_scouts(colony, arch, data, cfg)
            colony.reseed_pending = False

        probs = selection_probabilities(colony, cfg)
        accepted: list[int] = []
        if cfg.move_enabled:
            employed = sorted(
                i for i, s in enumerate(colony.solutions) if s.role == ROLE_EMPLOYED
            )
            n_onlookers = colony.size - colony.n_employed - colony.n_scout
            targets = employed + [
                _roulette(probs, colony.rng) for _ in range(n_onlookers)
            ]
            for idx in targets:
                sol = colony.solutions[idx]
                f_best = colony.solutions[colony.best_index].fitness
                step = move_bee(f_best, sol.fitness, cfg)
                candidate = apply_move(sol, step, cfg, colony.rng)
                kept, ok = greedy_retain_or_revert(sol, candidate, data, arch, cfg)
                colony.solutions[idx] = kept
                if ok:
                    accepted.append(idx)
                    if kept.fitness < colony.solutions[colony.best_index].fitness:
                        colony.best_index = idx

        if cfg.hybrid_bp and cfg.learning_rate > 0:
            for _ in range(cfg.hybrid_sweeps):
                _refine_with_gradient(colony, range(colony.size), arch, data, cfg)

        colony.best_index = _best_index(colony, cfg.divergence_cap)
        fits = colony.fitness_vector()
        new_avg = float(np.mean(fits))
        ccr_avg = float(np.mean([s.ccr for s in colony.solutions]))
        adjust_roles(colony, improved=new_avg < prev_avg)
        prev_avg = new_avg

        record = metrics.IterationRecord(
            cycle=cycle,
            sse_best=float(fits.min()),
            sse_avg=new_avg,
            ccr_avg=ccr_avg,
            n_employed=colony.n_employed,
            n_scout=colony.n_scout,
        )
        records.append(record)
        if sink is not None:
            sink(record)
        if ccr_avg > cfg.ccr_threshold:
            terminated_by = "threshold"
            break

    summary = metrics.summarize(records, stability_window, terminated_by)
    return metrics.RunReport(
        algo="abc",
        dataset=metrics.dataset_meta(data, arch),
        config=asdict(cfg),
        records=tuple(records),
        summary=summary,
    )


def _reseed_scouts(colony: Colony, arch, data, cfg: AbcConfig) -> None:
    """Exploration: every scout abandons its source for a fresh random one."""
    n_params = nn.param_count(arch)
    for idx, sol in enumerate(colony.solutions):
        if sol.role != ROLE_SCOUT:
            continue
        sol.params = colony.rng.random(n_params)
        sol.fitness, sol.ccr = _score_params(sol.params, arch, data,
                                             cfg.divergence_cap)
        sol.settled = False
    colony.best_index = _best_index(colony, cfg.divergence_cap)


def _refine_with_gradient(colony: Colony, indices, arch, data, cfg: AbcConfig):
    """Hybrid step: one per-sample descent sweep over each retained source,
    kept only when it strictly improves that source.

    A sweep that overshoots (movement can leave parameters where the base
    rate is too hot) is retried at half and quarter rate before giving up,
    so sources do not freeze just because the full-rate sweep oscillates.
    """
    for idx in indices:
        sol = colony.solutions[idx]
        if sol.settled:
            continue
        net = nn.network_from_params(arch, sol.params)
        improved = False
        for rate in (cfg.learning_rate, cfg.learning_rate / 2, cfg.learning_rate / 4):
            try:
                params = nn.network_params(
                    nn.bp_sweep(net, data, rate, cfg.hybrid_batch)
                )
            except NumericOverflowError:
                continue
            f, c = _score_params(params, arch, data, cfg.divergence_cap)
            if f < sol.fitness:
                sol.params = params
                sol.fitness = f
                sol.ccr = c
                improved = True
                break
            if f == sol.fitness:  # already at rest; finer rates will not move it
                break
        if not improved:
            sol.settled = True


def _check_data(arch, data) -> None:
    sizes = tuple(int(s) for s in arch)
    if data.n_features != sizes[0]:
        raise ConfigError(
            f"architecture expects {sizes[0]} inputs, dataset has {data.n_features}"
        )
    if data.n_classes != sizes[-1]:
        raise ConfigError(
            f"architecture expects {sizes[-1]} outputs, dataset has {data.n_classes}"
        )


