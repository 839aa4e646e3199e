"""Objective set functions wrapped as value oracles.

Three experiment objectives (least-squares log-likelihood over column
subsets, determinant of I + X_S over a PSD Gramian, and logistic
log-likelihood over one-hot feature subsets) plus coverage and modular
functions used as exactly-submodular test fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
from scipy.special import expit

from .oracles import ValueOracle

__all__ = [
    "RegressionProblem",
    "KernelGramian",
    "LogisticProblem",
    "least_squares_loglik",
    "dpp_determinant",
    "gaussian_gram",
    "logistic_loglik",
    "coverage_function",
    "modular_function",
]

#: Singular values below this fraction of the largest are treated as zero
#: when solving column-subset least squares.
RANK_TOL = 1e-10


def _write_csv(path, header: str, rows: np.ndarray) -> None:
    np.savetxt(path, np.atleast_2d(rows), fmt="%.17g", delimiter=",",
               header=header, comments="")


def _read_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return np.atleast_2d(data)


@dataclass
class RegressionProblem:
    """Design matrix and response vector; columns are the ground-set elements."""

    design: np.ndarray
    response: np.ndarray

    def __post_init__(self) -> None:
        self.design = np.asarray(self.design, dtype=float)
        self.response = np.asarray(self.response, dtype=float).ravel()
        if self.design.ndim != 2:
            raise ValueError("design must be a 2-D matrix")
        if self.design.shape[0] != self.response.shape[0]:
            raise ValueError("design and response row counts differ")
        if min(self.design.shape) < 1:
            raise ValueError("design must have at least one row and column")

    @property
    def num_features(self) -> int:
        return self.design.shape[1]

    def to_csv(self, path) -> None:
        header = "response," + ",".join(f"x{j}" for j in range(self.num_features))
        _write_csv(path, header, np.column_stack([self.response, self.design]))

    @classmethod
    def from_csv(cls, path) -> "RegressionProblem":
        data = _read_csv(path)
        return cls(design=data[:, 1:], response=data[:, 0])


@dataclass
class KernelGramian:
    """Symmetric PSD Gaussian-kernel Gramian with unit diagonal."""

    matrix: np.ndarray
    bandwidth: float

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.bandwidth = float(self.bandwidth)
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Gramian must be square")
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if not np.allclose(m, m.T, atol=1e-9, rtol=0.0):
            raise ValueError("Gramian must be symmetric")
        if not np.allclose(np.diag(m), 1.0, atol=1e-9, rtol=0.0):
            raise ValueError("Gramian diagonal must be 1 (kernel self-similarity)")
        if m.shape[0] and np.linalg.eigvalsh(m).min() < -1e-8:
            raise ValueError("Gramian must be positive semidefinite")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def to_csv(self, path) -> None:
        np.savetxt(path, self.matrix, fmt="%.17g", delimiter=",",
                   header=f"bandwidth={self.bandwidth!r}")

    @classmethod
    def from_csv(cls, path) -> "KernelGramian":
        with open(path) as fh:
            first = fh.readline()
        if "bandwidth=" not in first:
            raise ValueError("missing bandwidth header line")
        bandwidth = float(first.split("bandwidth=")[1])
        matrix = np.loadtxt(path, delimiter=",")
        return cls(matrix=matrix, bandwidth=bandwidth)


@dataclass
class LogisticProblem:
    """Binary one-hot features, 0/1 labels, and a small ridge weight."""

    features: np.ndarray
    labels: np.ndarray
    ridge: float = 1e-6

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=float).ravel()
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features and labels row counts differ")
        if not np.isin(self.features, (0.0, 1.0)).all():
            raise ValueError("features must be binary")
        if not np.isin(self.labels, (0.0, 1.0)).all():
            raise ValueError("labels must be 0/1")
        if self.ridge < 0:
            raise ValueError("ridge must be non-negative")

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    def to_csv(self, path) -> None:
        header = "label," + ",".join(f"x{j}" for j in range(self.num_features))
        _write_csv(path, header, np.column_stack([self.labels, self.features]))

    @classmethod
    def from_csv(cls, path, ridge: float = 1e-6) -> "LogisticProblem":
        data = _read_csv(path)
        return cls(features=data[:, 1:], labels=data[:, 0], ridge=ridge)


def _check_columns(s: frozenset[int], p: int) -> list[int]:
    cols = sorted(s)
    if cols and (cols[0] < 0 or cols[-1] >= p):
        raise ValueError(f"column index out of range for p={p}: {cols}")
    return cols


def least_squares_loglik(problem: RegressionProblem) -> ValueOracle:
    """Normalized regression log-likelihood f(S) = ||y||^2 - min residual^2.

    The inner minimization over coefficients supported on S is solved by
    pivoted QR of the column submatrix; rank-deficient submatrices fall back
    to a least-norm-style solution through the pivoting cutoff, which leaves
    the (unique) residual unchanged. f(empty) is exactly 0.
    """
    design = problem.design
    y = problem.response
    y_norm2 = float(y @ y)
    p = problem.num_features

    def loglik(s: frozenset[int]) -> float:
        cols = _check_columns(s, p)
        if not cols:
            return 0.0
        sub = design[:, cols]
        beta = scipy.linalg.lstsq(
            sub, y, cond=RANK_TOL, lapack_driver="gelsy", check_finite=False
        )[0]
        resid = y - sub @ beta
        return y_norm2 - float(resid @ resid)

    return ValueOracle(loglik, name="least-squares-loglik")


def dpp_determinant(gram, *, normalized: bool = False) -> ValueOracle:
    """Diversity objective det(I + X_S) over a principal submatrix.

    ``gram`` may be a KernelGramian or any square PSD ndarray. f(empty) = 1;
    with ``normalized=True`` the oracle returns det(I + X_S) - 1 instead, for
    algorithms requiring f(empty) = 0.
    """
    matrix = gram.matrix if isinstance(gram, KernelGramian) else np.asarray(gram, float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("kernel matrix must be square")
    size = matrix.shape[0]
    shift = 1.0 if normalized else 0.0

    def det_value(s: frozenset[int]) -> float:
        idx = _check_columns(s, size)
        if not idx:
            return 1.0 - shift
        sub = matrix[np.ix_(idx, idx)]
        return float(np.linalg.det(np.eye(len(idx)) + sub)) - shift

    return ValueOracle(det_value, name="dpp-determinant")


def gaussian_gram(vectors, bandwidth: float) -> KernelGramian:
    """Gaussian-kernel Gramian: X_ij = exp(-||v_i - v_j||^2 / (2 bandwidth^2))."""
    pts = np.asarray(vectors, dtype=float)
    if pts.ndim != 2:
        raise ValueError("vectors must all have the same dimension")
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    sq_norms = np.einsum("ij,ij->i", pts, pts)
    d2 = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (pts @ pts.T)
    np.maximum(d2, 0.0, out=d2)
    kernel = np.exp(-d2 / (2.0 * bandwidth**2))
    kernel = (kernel + kernel.T) / 2.0
    np.fill_diagonal(kernel, 1.0)
    return KernelGramian(matrix=kernel, bandwidth=bandwidth)


def _fit_logistic(
    x: np.ndarray, y: np.ndarray, ridge: float,
    max_iter: int = 100, grad_tol: float = 1e-8,
) -> tuple[np.ndarray, float, bool]:
    """Damped Newton (IRLS) maximization of the ridge-penalized log-likelihood.

    Returns (weights, penalized log-likelihood, converged). Convergence means
    the gradient inf-norm dropped below ``grad_tol``.
    """
    m, d = x.shape

    def penalized(w: np.ndarray, z: np.ndarray) -> float:
        return float(y @ z - np.logaddexp(0.0, z).sum() - ridge * (w @ w))

    w = np.zeros(d)
    z = np.zeros(m)
    ll = penalized(w, z)
    if d == 0:
        return w, ll, True
    eye = np.eye(d)
    for _ in range(max_iter):
        prob = expit(z)
        grad = x.T @ (y - prob) - 2.0 * ridge * w
        if np.abs(grad).max() < grad_tol:
            return w, ll, True
        curv = prob * (1.0 - prob)
        hess = x.T @ (x * curv[:, None]) + 2.0 * ridge * eye
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hess, grad, rcond=None)[0]
        scale = 1.0
        for _ in range(40):
            w_new = w + scale * step
            z_new = x @ w_new
            ll_new = penalized(w_new, z_new)
            if ll_new >= ll - 1e-12:
                break
            scale /= 2.0
        w, z, ll = w_new, z_new, ll_new
    prob = expit(z)
    grad = x.T @ (y - prob) - 2.0 * ridge * w
    return w, ll, bool(np.abs(grad).max() < grad_tol)


def logistic_loglik(problem: LogisticProblem) -> ValueOracle:
    """Normalized logistic log-likelihood of the best weights supported on S.

    f(S) = g(S) - g(empty) where g maximizes the (ridge-penalized, no
    intercept) log-likelihood over weights with support in S; g(empty) is
    -m log 2. Non-convergence appends a warning to the oracle's ``flags``.
    """
    x = problem.features
    y = problem.labels
    ridge = problem.ridge
    p = problem.num_features
    base = -x.shape[0] * np.log(2.0)

    def loglik(s: frozenset[int]) -> float:
        cols = _check_columns(s, p)
        if not cols:
            return 0.0
        _, value, converged = _fit_logistic(x[:, cols], y, ridge)
        if not converged:
            oracle.flags.append(
                f"logistic solver did not converge for support {cols}"
            )
        return value - base

    oracle = ValueOracle(loglik, name="logistic-loglik")
    return oracle


def coverage_function(
    universe_size: int,
    sets: Sequence[Iterable[int]],
    weights: Sequence[float] | None = None,
) -> ValueOracle:
    """Weighted coverage f(S) = weight of the union of the selected sets.

    Monotone and submodular, so its submodularity ratio is exactly 1; the
    main use here is as a ground-truth fixture.
    """
    covered = [frozenset(int(x) for x in s) for s in sets]
    w = np.ones(universe_size) if weights is None else np.asarray(weights, float)
    if w.shape != (universe_size,):
        raise ValueError("one weight per universe point is required")
    for cov in covered:
        if cov and (min(cov) < 0 or max(cov) >= universe_size):
            raise ValueError("covered points must lie inside the universe")

    def cover_weight(s: frozenset[int]) -> float:
        union: set[int] = set()
        for e in s:
            union |= covered[e]
        return float(sum(w[x] for x in union))

    return ValueOracle(cover_weight, name="coverage")


def modular_function(weights: Sequence[float]) -> ValueOracle:
    """Additive set function f(S) = sum of element weights (gamma = 1)."""
    w = [float(x) for x in weights]

    def total(s: frozenset[int]) -> float:
        return sum(w[e] for e in s)

    return ValueOracle(total, name="modular")
