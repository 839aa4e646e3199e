"""Small-instance verification battery for the approximation guarantee.

Each fixture pairs an exactly-enumerable objective (coverage, modular, or
least-squares log-likelihood) with a low-rank matroid. Verification
brute-forces the optimum and the restricted submodularity ratio, Monte
Carlos the randomized greedy, and checks the mean against the proven
ratio bound minus three standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algorithms import brute_force_opt, residual_random_greedy, standard_greedy
from .matroids import GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid
from .objectives import (
    RegressionProblem,
    coverage_function,
    least_squares_loglik,
    modular_function,
)
from .oracles import GammaEstimate, ValueOracle, estimate_gamma_restricted
from .seeding import trial_seed

__all__ = ["Fixture", "FixtureReport", "standard_fixtures", "verify_fixture"]


@dataclass(frozen=True)
class Fixture:
    """A named (objective factory, matroid) pair small enough to brute-force."""

    name: str
    matroid: Matroid
    make_oracle: Callable[[], ValueOracle]


@dataclass(frozen=True)
class FixtureReport:
    """Outcome of verifying the ratio bound on one fixture."""

    name: str
    gamma: GammaEstimate
    opt_set: frozenset[int]
    opt_value: float
    greedy_value: float
    mean_value: float
    stderr: float
    trials: int
    ratio_bound: float
    threshold: float
    passed: bool

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.gamma.witness_pair is not None:
            a, b = self.gamma.witness_pair
            witness = f"witness=({sorted(a)}, {sorted(b)})"
        else:
            witness = "witness=none"
        return (
            f"[{status}] {self.name}: gamma={self.gamma.gamma:.4f} "
            f"(pairs_checked={self.gamma.pairs_checked}, {witness}), "
            f"opt={self.opt_value:.6g}, "
            f"mean={self.mean_value:.6g} over {self.trials} runs, "
            f"bound={self.ratio_bound:.4f}*opt - 3se = {self.threshold:.6g}"
        )


def _random_coverage(num_sets: int, universe: int, seed: int) -> Callable[[], ValueOracle]:
    rng = np.random.default_rng(seed)
    sets = [
        frozenset(int(x) for x in np.flatnonzero(rng.random(universe) < 0.4))
        for _ in range(num_sets)
    ]
    weights = rng.uniform(0.5, 1.5, size=universe)
    return lambda: coverage_function(universe, sets, weights)


def _random_modular(num_elements: int, seed: int) -> Callable[[], ValueOracle]:
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.1, 2.0, size=num_elements)
    return lambda: modular_function(weights)


def _random_least_squares(rows: int, cols: int, seed: int) -> Callable[[], ValueOracle]:
    rng = np.random.default_rng(seed)
    design = rng.standard_normal((rows, cols))
    beta = np.zeros(cols)
    support = rng.choice(cols, size=max(2, cols // 3), replace=False)
    beta[support] = rng.choice([-1.0, 1.0], size=len(support))
    response = design @ beta + rng.standard_normal(rows)
    problem = RegressionProblem(design, response)
    return lambda: least_squares_loglik(problem)


def standard_fixtures() -> list[Fixture]:
    """The default battery: each objective family crossed with matroid variants."""
    triangle_cover = lambda: coverage_function(3, [{0, 1}, {1, 2}, {2}])
    fixtures = [
        Fixture("coverage-triangle-uniform", UniformMatroid(3, 2), triangle_cover),
        Fixture(
            "coverage-uniform",
            UniformMatroid(8, 3),
            _random_coverage(num_sets=8, universe=10, seed=11),
        ),
        Fixture(
            "coverage-partition",
            PartitionMatroid(
                (frozenset({0, 1, 2, 3}), frozenset({4, 5, 6}), frozenset({7, 8, 9})),
                (1, 1, 2),
            ),
            _random_coverage(num_sets=10, universe=12, seed=12),
        ),
        Fixture(
            "coverage-graphic",
            GraphicMatroid(
                5,
                ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2),
                 (1, 3), (2, 4), (0, 3), (1, 4), (0, 1), (2, 3)),
            ),
            _random_coverage(num_sets=12, universe=12, seed=13),
        ),
        Fixture(
            "modular-uniform", UniformMatroid(10, 4), _random_modular(10, seed=14)
        ),
        Fixture(
            "modular-partition",
            PartitionMatroid(
                (frozenset({0, 1, 2}), frozenset({3, 4, 5}), frozenset({6, 7, 8})),
                (1, 2, 1),
            ),
            _random_modular(9, seed=15),
        ),
        Fixture(
            "modular-graphic",
            GraphicMatroid(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (0, 1), (2, 3))),
            _random_modular(8, seed=16),
        ),
        Fixture(
            "lsq-uniform", UniformMatroid(6, 3), _random_least_squares(8, 6, seed=17)
        ),
        Fixture(
            "lsq-partition",
            PartitionMatroid(
                (frozenset({0, 1, 2}), frozenset({3, 4, 5}), frozenset({6, 7})),
                (1, 1, 1),
            ),
            _random_least_squares(10, 8, seed=18),
        ),
        Fixture(
            "lsq-graphic",
            GraphicMatroid(5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3), (2, 4), (0, 3), (1, 4))),
            _random_least_squares(12, 10, seed=19),
        ),
        Fixture(
            "coverage-contraction",
            UniformMatroid(9, 4).contract({0}),
            _random_coverage(num_sets=9, universe=11, seed=20),
        ),
    ]
    return fixtures


def verify_fixture(
    fixture: Fixture, trials: int = 500, master_seed: int = 2024
) -> FixtureReport:
    """Check the (1 + 1/gamma)^-2 guarantee on one fixture by Monte Carlo.

    The mean randomized-greedy value over ``trials`` seeded runs must be at
    least ratio * opt minus three standard errors.
    """
    matroid = fixture.matroid
    opt_set, opt_value = brute_force_opt(fixture.make_oracle(), matroid)
    gamma = estimate_gamma_restricted(
        fixture.make_oracle(), matroid, max_union_size=matroid.rank()
    )
    greedy_value = standard_greedy(fixture.make_oracle(), matroid).final_value
    oracle = fixture.make_oracle()
    finals = np.empty(trials)
    for t in range(trials):
        rng = np.random.default_rng(trial_seed(master_seed, t))
        finals[t] = residual_random_greedy(oracle, matroid, rng).final_value
    mean = float(finals.mean())
    stderr = float(finals.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    ratio_bound = (1.0 + 1.0 / gamma.gamma) ** -2
    threshold = ratio_bound * opt_value - 3.0 * stderr
    return FixtureReport(
        name=fixture.name,
        gamma=gamma,
        opt_set=opt_set,
        opt_value=opt_value,
        greedy_value=greedy_value,
        mean_value=mean,
        stderr=stderr,
        trials=trials,
        ratio_bound=ratio_bound,
        threshold=threshold,
        passed=mean >= threshold,
    )
