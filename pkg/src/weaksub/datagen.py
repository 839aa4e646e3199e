"""Synthetic instance generation for the benchmark experiments.

Covers the sparse-regression setup (AR-process design matrices, sign-valued
ground-truth coefficients whose support is a random base of the constraint
matroid, unit-variance response noise) plus random graphic and partition
matroids, and the synthetic inputs of the determinant and logistic
experiments. Everything is a pure function of its parameters and generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import lfilter
from scipy.special import expit

from .matroids import (
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    matroid_from_json,
    random_base,
)
from .objectives import (
    KernelGramian,
    LogisticProblem,
    RegressionProblem,
    gaussian_gram,
    least_squares_loglik,
)

__all__ = [
    "LinRegInstance",
    "ar_matrix",
    "random_graphic_matroid",
    "random_partition_matroid",
    "make_linreg_instance",
    "make_dpp_instance",
    "make_onehot_logistic_instance",
]


def ar_matrix(n: int, p: int, alpha: float, sigma2: float, rng) -> np.ndarray:
    """Matrix whose rows are independent order-1 autoregressive processes.

    Within a row, x_1 = e_1 and x_j = alpha * x_{j-1} + e_j with the e_j
    i.i.d. Normal(0, sigma2).
    """
    if abs(alpha) >= 1:
        raise ValueError("alpha must satisfy |alpha| < 1")
    if sigma2 < 0:
        raise ValueError("noise variance must be non-negative")
    shocks = rng.normal(0.0, np.sqrt(sigma2), size=(n, p))
    return lfilter([1.0], [1.0, -alpha], shocks, axis=1)


def random_graphic_matroid(num_vertices: int, num_edges: int, rng) -> GraphicMatroid:
    """Graphic matroid of a random multigraph.

    Each edge is an independently drawn uniformly random pair of distinct
    vertices; parallel edges can occur, self-loops cannot.
    """
    if num_vertices < 2:
        raise ValueError("need at least two vertices to draw distinct pairs")
    edges = []
    for _ in range(num_edges):
        u = int(rng.integers(num_vertices))
        v = int(rng.integers(num_vertices - 1))
        if v >= u:
            v += 1
        edges.append((u, v))
    return GraphicMatroid(num_vertices, tuple(edges))


def random_partition_matroid(p: int, num_blocks: int, rng) -> PartitionMatroid:
    """Partition matroid with simplex-uniform block sizes and binomial capacities.

    A block distribution is drawn uniformly from the simplex (normalized
    standard exponentials), each of the p elements is assigned i.i.d. from
    it, and block i's capacity is Binomial(|B_i|, 0.25).
    """
    if num_blocks < 1:
        raise ValueError("need at least one block")
    raw = rng.standard_exponential(num_blocks)
    cuts = np.cumsum(raw / raw.sum())
    assignment = np.minimum(
        np.searchsorted(cuts, rng.random(p), side="right"), num_blocks - 1
    )
    blocks = tuple(
        frozenset(int(e) for e in np.flatnonzero(assignment == i))
        for i in range(num_blocks)
    )
    capacities = tuple(int(rng.binomial(len(b), 0.25)) for b in blocks)
    return PartitionMatroid(blocks, capacities)


@dataclass
class LinRegInstance:
    """A generated sparse-regression instance with its ground truth."""

    problem: RegressionProblem
    beta_true: np.ndarray
    matroid: Matroid
    seed: int | None
    ground_truth_value: float

    @property
    def support(self) -> frozenset[int]:
        return frozenset(int(e) for e in np.flatnonzero(self.beta_true))

    def save(self, directory) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        np.savetxt(directory / "X.csv", self.problem.design, fmt="%.17g", delimiter=",")
        np.savetxt(directory / "y.csv", self.problem.response, fmt="%.17g", delimiter=",")
        np.savetxt(directory / "beta.csv", self.beta_true, fmt="%.17g", delimiter=",")
        with open(directory / "matroid.json", "w") as fh:
            json.dump(self.matroid.to_json(), fh)
        meta = {
            "seed": self.seed,
            "n": self.problem.design.shape[0],
            "p": self.problem.design.shape[1],
            "ground_truth_value": self.ground_truth_value,
        }
        with open(directory / "meta.json", "w") as fh:
            json.dump(meta, fh)

    @classmethod
    def load(cls, directory) -> "LinRegInstance":
        directory = Path(directory)
        design = np.atleast_2d(np.loadtxt(directory / "X.csv", delimiter=","))
        response = np.loadtxt(directory / "y.csv", delimiter=",")
        beta = np.loadtxt(directory / "beta.csv", delimiter=",")
        with open(directory / "matroid.json") as fh:
            matroid = matroid_from_json(json.load(fh))
        with open(directory / "meta.json") as fh:
            meta = json.load(fh)
        return cls(
            problem=RegressionProblem(design, response),
            beta_true=np.atleast_1d(beta),
            matroid=matroid,
            seed=meta.get("seed"),
            ground_truth_value=float(meta["ground_truth_value"]),
        )


def make_linreg_instance(
    n: int,
    p: int,
    matroid: Matroid,
    rng,
    *,
    seed: int | None = None,
    noise_scale: float = 1.0,
) -> LinRegInstance:
    """Sparse-regression instance constrained by ``matroid``.

    The coefficient support is sampled with the random-base process, each
    nonzero coefficient is a uniform sign, and y = X beta + noise with
    standard-normal noise (``noise_scale`` = 0 gives a noiseless instance
    for testing). The normalized log-likelihood of the true support is
    recorded as ``ground_truth_value``.
    """
    if matroid.n != p:
        raise ValueError("matroid ground-set size must equal the number of columns")
    design = ar_matrix(n, p, alpha=0.5, sigma2=10.0, rng=rng)
    support = random_base(matroid, rng)
    beta = np.zeros(p)
    for e in sorted(support):
        beta[e] = 1.0 if rng.random() < 0.5 else -1.0
    noise = rng.standard_normal(n) * noise_scale
    response = design @ beta + noise
    problem = RegressionProblem(design, response)
    truth = least_squares_loglik(problem).evaluate(support)
    return LinRegInstance(
        problem=problem,
        beta_true=beta,
        matroid=matroid,
        seed=seed,
        ground_truth_value=truth,
    )


def make_dpp_instance(
    num_items: int, dim: int, bandwidth: float, interval_length: int, rng
) -> tuple[KernelGramian, PartitionMatroid]:
    """Synthetic diversity instance: Gaussian Gramian of random feature vectors
    plus the pick-one-per-interval partition constraint."""
    vectors = rng.standard_normal((num_items, dim))
    gram = gaussian_gram(vectors, bandwidth)
    matroid = PartitionMatroid.from_intervals(num_items, interval_length, capacity=1)
    return gram, matroid


def make_onehot_logistic_instance(
    num_samples: int,
    num_groups: int,
    arity: int,
    rng,
    *,
    ridge: float = 1e-6,
    signal: float = 2.0,
) -> tuple[LogisticProblem, PartitionMatroid]:
    """Synthetic one-hot logistic instance with a pick-one-per-group constraint.

    Each sample has ``num_groups`` categorical variables of the given arity,
    one-hot encoded; labels are Bernoulli with log-odds driven by one
    signed weight per group on a random dummy.
    """
    categories = rng.integers(0, arity, size=(num_samples, num_groups))
    features = np.zeros((num_samples, num_groups * arity))
    rows = np.arange(num_samples)
    for g in range(num_groups):
        features[rows, g * arity + categories[:, g]] = 1.0
    true_w = np.zeros(num_groups * arity)
    for g in range(num_groups):
        dummy = g * arity + int(rng.integers(arity))
        true_w[dummy] = signal if rng.random() < 0.5 else -signal
    logits = features @ true_w
    labels = (rng.random(num_samples) < expit(logits)).astype(float)
    problem = LogisticProblem(features=features, labels=labels, ridge=ridge)
    blocks = tuple(
        frozenset(range(g * arity, (g + 1) * arity)) for g in range(num_groups)
    )
    matroid = PartitionMatroid(blocks, tuple(1 for _ in blocks))
    return problem, matroid
