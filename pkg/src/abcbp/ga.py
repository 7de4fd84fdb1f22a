"""Generational genetic-algorithm baseline over the same flat parameter
vectors, fitness and reporting pipeline as the bee-colony trainer.

Operators are conventional: roulette selection on quality 1 / (1 + error),
single-point crossover, per-gene Gaussian mutation, configurable elitism.
RNG draw order per child: one uniform per parent pick, one uniform for the
crossover decision (plus one integer for the cut when it fires), then one
uniform mask vector and one normal vector for mutation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import metrics
from . import network as nn
from .errors import ConfigError, NumericOverflowError, ShapeError


@dataclass(frozen=True)
class GaConfig:
    population: int = 10
    generations: int = 100
    crossover_rate: float = 0.9
    mutation_rate: float = 0.01
    mutation_sigma: float = 0.1
    elitism: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.population < 2:
            raise ConfigError("population must be at least 2")
        if self.generations < 1:
            raise ConfigError("generations must be at least 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigError("crossover_rate must be in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError("mutation_rate must be in [0, 1]")
        if self.mutation_sigma < 0:
            raise ConfigError("mutation_sigma must be >= 0")
        if not 0 <= self.elitism < self.population:
            raise ConfigError("elitism must be in [0, population)")


def ga_select(fitnesses, rng) -> int:
    """Roulette pick with probability proportional to 1 / (1 + error)."""
    fits = np.asarray(fitnesses, dtype=float)
    quality = 1.0 / (1.0 + fits)
    cum = np.cumsum(quality)
    r = rng.random() * cum[-1]
    return min(int(np.searchsorted(cum, r, side="right")), len(fits) - 1)


def ga_crossover(a, b, rng, cfg: GaConfig):
    """Single-point suffix swap with probability ``crossover_rate``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ShapeError(f"parent shapes differ: {a.shape} vs {b.shape}")
    if rng.random() >= cfg.crossover_rate or a.shape[0] < 2:
        return a.copy(), b.copy()
    cut = int(rng.integers(1, a.shape[0]))
    c1 = np.concatenate([a[:cut], b[cut:]])
    c2 = np.concatenate([b[:cut], a[cut:]])
    return c1, c2


def ga_mutate(p, rng, cfg: GaConfig) -> np.ndarray:
    """Per-gene Gaussian perturbation; both vectors are always drawn so the
    stream position does not depend on the rates."""
    p = np.asarray(p, dtype=float)
    mask = rng.random(p.shape[0]) < cfg.mutation_rate
    noise = rng.normal(0.0, cfg.mutation_sigma, p.shape[0]) if cfg.mutation_sigma > 0 \
        else np.zeros(p.shape[0])
    return p + noise * mask


def _score(params, arch, data, cap=1e6):
    try:
        net = nn.network_from_params(arch, params)
        P = nn.predictions(net, data.features)
    except NumericOverflowError:
        return cap, 0.0
    e = data.targets - P
    f = float(np.sum(np.sum(e * e, axis=1))) / data.n_samples
    if not math.isfinite(f) or f > cap:
        return cap, 0.0
    return f, metrics.ccr_from_predictions(P, data.targets)


def run_ga(cfg: GaConfig, arch, data, sink=None, parallel: bool = False,
           stability_window: int = metrics.DEFAULT_STABILITY_WINDOW) -> metrics.RunReport:
    """Evolve the population for ``generations`` generations, recording the
    same per-cycle schema as the bee-colony trainer."""
    cfg.validate()
    n_params = nn.param_count(arch)
    rng = np.random.default_rng(cfg.seed)
    pop = [rng.random(n_params) for _ in range(cfg.population)]
    scores: list[tuple[float, float] | None] = [None] * cfg.population

    records = []
    for gen in range(1, cfg.generations + 1):
        pending = [i for i, s in enumerate(scores) if s is None]
        if parallel:
            with ThreadPoolExecutor() as pool:
                fresh = list(pool.map(lambda i: _score(pop[i], arch, data), pending))
        else:
            fresh = [_score(pop[i], arch, data) for i in pending]
        for i, s in zip(pending, fresh):
            scores[i] = s
        fits = np.array([s[0] for s in scores])
        ccrs = np.array([s[1] for s in scores])

        record = metrics.IterationRecord(
            cycle=gen,
            sse_best=float(fits.min()),
            sse_avg=float(fits.mean()),
            ccr_avg=float(ccrs.mean()),
            n_employed=cfg.population,
            n_scout=0,
        )
        records.append(record)
        if sink is not None:
            sink(record)
        if gen == cfg.generations:
            break

        order = sorted(range(cfg.population), key=lambda i: (fits[i], i))
        next_pop = [pop[i] for i in order[: cfg.elitism]]
        next_scores = [scores[i] for i in order[: cfg.elitism]]
        while len(next_pop) < cfg.population:
            pa = pop[ga_select(fits, rng)]
            pb = pop[ga_select(fits, rng)]
            c1, c2 = ga_crossover(pa, pb, rng, cfg)
            for child in (c1, c2):
                if len(next_pop) >= cfg.population:
                    break
                next_pop.append(ga_mutate(child, rng, cfg))
                next_scores.append(None)
        pop, scores = next_pop, next_scores

    summary = metrics.summarize(records, stability_window, terminated_by="mcn")
    return metrics.RunReport(
        algo="ga",
        dataset=metrics.dataset_meta(data, arch),
        config=asdict(cfg),
        records=tuple(records),
        summary=summary,
    )
