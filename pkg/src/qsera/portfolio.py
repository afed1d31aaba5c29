"""Equal-weight combinatorial portfolio selection tracking a benchmark.

Selections are bitmasks over the asset pool: bit ``i`` set means asset ``i``
is held.  With ``N_p`` assets held, each gets weight ``1/N_p``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import CapacityError, InputDomainError, UndefinedPortfolioError
from .pseudo_boolean import MultilinearPoly, from_point_values, power, rescale

MAX_ASSETS = 20


@dataclass(frozen=True, eq=False)
class AssetPool:
    mu: np.ndarray
    sigma: np.ndarray
    rho: np.ndarray

    def __post_init__(self) -> None:
        mu = np.asarray(self.mu, dtype=float).ravel()
        sigma = np.asarray(self.sigma, dtype=float).ravel()
        rho = np.asarray(self.rho, dtype=float)
        n = mu.size
        if n < 1:
            raise InputDomainError("asset pool is empty")
        if sigma.size != n or rho.shape != (n, n):
            raise InputDomainError(
                f"dimension mismatch: mu {mu.size}, sigma {sigma.size}, rho {rho.shape}"
            )
        if np.any(sigma < 0):
            raise InputDomainError("volatilities must be non-negative")
        if not np.allclose(rho, rho.T, rtol=0.0, atol=1e-12):
            raise InputDomainError("correlation matrix is not symmetric")
        if not np.all(np.diag(rho) == 1.0):
            raise InputDomainError("correlation matrix diagonal must be 1")
        if np.any(np.abs(rho) > 1.0):
            raise InputDomainError("correlations must lie in [-1, 1]")
        for name, arr in (("mu", mu), ("sigma", sigma), ("rho", rho)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_assets(self) -> int:
        return self.mu.size

    @property
    def covariance(self) -> np.ndarray:
        return np.outer(self.sigma, self.sigma) * self.rho


@dataclass(frozen=True)
class Benchmark:
    mu_b: float
    sigma_b: float
    n_b: int

    def __post_init__(self) -> None:
        if self.sigma_b < 0:
            raise InputDomainError("benchmark volatility must be non-negative")
        if int(self.n_b) != self.n_b or self.n_b < 1:
            raise InputDomainError("benchmark asset count must be a positive integer")


@dataclass(frozen=True)
class TrackingObjective:
    lambda_mu: float
    lambda_sigma2: float

    def __post_init__(self) -> None:
        lm, ls = self.lambda_mu, self.lambda_sigma2
        if not (0.0 <= lm <= 1.0 and 0.0 <= ls <= 1.0):
            raise InputDomainError("lambda weights must lie in [0, 1]")
        if lm + ls > 1.0 + 1e-12:
            raise InputDomainError("lambda_mu + lambda_sigma2 must not exceed 1")

    @property
    def lambda_budget(self) -> float:
        """Weight of the soft budget constraint, ``1 - lambda_mu - lambda_sigma2``."""
        return 1.0 - self.lambda_mu - self.lambda_sigma2


@dataclass(frozen=True)
class PortfolioProblem:
    pool: AssetPool
    benchmark: Benchmark
    weights: TrackingObjective

    def __post_init__(self) -> None:
        if self.benchmark.n_b > self.pool.num_assets:
            raise InputDomainError("benchmark asset count exceeds pool size")

    @property
    def num_assets(self) -> int:
        return self.pool.num_assets

    def objective(self, selection: int) -> float:
        return objective_value(self.pool, self.benchmark, self.weights, selection)

    def objective_values(self) -> np.ndarray:
        return objective_values(self.pool, self.benchmark, self.weights)

    def to_polynomial(self) -> MultilinearPoly:
        return objective_to_polynomial(self.pool, self.benchmark, self.weights)


def _selection_vector(pool: AssetPool, selection: int) -> np.ndarray:
    selection = int(selection)
    if not 0 <= selection < 1 << pool.num_assets:
        raise InputDomainError(f"selection {selection} out of range for {pool.num_assets} assets")
    return np.array([(selection >> i) & 1 for i in range(pool.num_assets)], dtype=float)


def portfolio_return(pool: AssetPool, selection: int) -> float:
    x = _selection_vector(pool, selection)
    n_p = x.sum()
    if n_p == 0:
        raise UndefinedPortfolioError("expected return of the empty portfolio is undefined")
    return float(x @ pool.mu / n_p)


def portfolio_variance(pool: AssetPool, selection: int) -> float:
    x = _selection_vector(pool, selection)
    n_p = x.sum()
    if n_p == 0:
        raise UndefinedPortfolioError("variance of the empty portfolio is undefined")
    return float(x @ pool.covariance @ x / n_p**2)


def objective_value(
    pool: AssetPool, benchmark: Benchmark, weights: TrackingObjective, selection: int
) -> float:
    """Benchmark-tracking objective in sum form, finite for the empty selection.

    lambda_mu * (sum x_i mu_i - N_p mu_b)^2
      + lambda_sigma2 * (sum x_i x_j C_ij - N_p^2 sigma_b^2)^2
      + (1 - lambda_mu - lambda_sigma2) * (N_p - N_b)^2
    """
    x = _selection_vector(pool, selection)
    n_p = x.sum()
    ret_gap = x @ pool.mu - n_p * benchmark.mu_b
    var_gap = x @ pool.covariance @ x - n_p**2 * benchmark.sigma_b**2
    return float(
        weights.lambda_mu * ret_gap**2
        + weights.lambda_sigma2 * var_gap**2
        + weights.lambda_budget * (n_p - benchmark.n_b) ** 2
    )


def _all_selections(num_assets: int) -> np.ndarray:
    z = np.arange(1 << num_assets)
    return ((z[:, None] >> np.arange(num_assets)) & 1).astype(float)


def objective_values(pool: AssetPool, benchmark: Benchmark, weights: TrackingObjective) -> np.ndarray:
    """Objective at every selection, index = selection bitmask."""
    if pool.num_assets > MAX_ASSETS:
        raise CapacityError(f"exhaustive enumeration is capped at {MAX_ASSETS} assets")
    x = _all_selections(pool.num_assets)
    n_p = x.sum(axis=1)
    ret_gap = x @ pool.mu - n_p * benchmark.mu_b
    var_gap = np.einsum("zi,ij,zj->z", x, pool.covariance, x) - n_p**2 * benchmark.sigma_b**2
    return (
        weights.lambda_mu * ret_gap**2
        + weights.lambda_sigma2 * var_gap**2
        + weights.lambda_budget * (n_p - benchmark.n_b) ** 2
    )


def objective_to_polynomial(
    pool: AssetPool, benchmark: Benchmark, weights: TrackingObjective
) -> MultilinearPoly:
    """Multilinear coefficients of the objective, interpolated from all point values."""
    return from_point_values(objective_values(pool, benchmark, weights))


def symbolic_expansion(
    pool: AssetPool, benchmark: Benchmark, weights: TrackingObjective
) -> MultilinearPoly:
    """Term-by-term expansion of the objective as a sum over index tuples.

    Constant and linear budget terms, a double sum for the return and budget
    quadratics, and a quadruple sum for the variance term; each group carries
    its lambda weight, and every product of x's collapses to the OR of the
    indices.  Used as an independent cross-check of
    :func:`objective_to_polynomial`.
    """
    n = pool.num_assets
    if n > 8:
        raise CapacityError("the quadruple-sum expansion is limited to 8 assets")
    mu, mu_b, n_b = pool.mu, benchmark.mu_b, benchmark.n_b
    sb2 = benchmark.sigma_b**2
    cov = pool.covariance
    lm, ls, lb = weights.lambda_mu, weights.lambda_sigma2, weights.lambda_budget
    acc = np.zeros(1 << n)
    acc[0] += lb * n_b**2
    for i in range(n):
        acc[1 << i] += -2.0 * lb * n_b
    for i, j in product(range(n), repeat=2):
        mask = (1 << i) | (1 << j)
        acc[mask] += lb + lm * (mu_b**2 - 2.0 * mu[i] * mu_b + mu[i] * mu[j])
    for i, j, k, l in product(range(n), repeat=4):
        mask = (1 << i) | (1 << j) | (1 << k) | (1 << l)
        acc[mask] += ls * (sb2 * sb2 - 2.0 * cov[i, j] * sb2 + cov[i, j] * cov[k, l])
    return MultilinearPoly.from_dense(acc)


# Worked example: four assets A, B, C, D (bit 0 = A) tracking a two-asset benchmark.
REFERENCE_POOL = AssetPool(
    mu=np.array([0.05, 0.01, 0.02, 0.04]),
    sigma=np.array([0.40, 0.10, 0.20, 0.30]),
    rho=np.array(
        [
            [1.0, 0.5, -0.4, -0.2],
            [0.5, 1.0, -0.1, -0.3],
            [-0.4, -0.1, 1.0, 0.3],
            [-0.2, -0.3, 0.3, 1.0],
        ]
    ),
)
REFERENCE_BENCHMARK = Benchmark(mu_b=0.043, sigma_b=0.195, n_b=2)
REFERENCE_WEIGHTS = TrackingObjective(lambda_mu=0.95, lambda_sigma2=0.049)
REFERENCE_PROBLEM = PortfolioProblem(REFERENCE_POOL, REFERENCE_BENCHMARK, REFERENCE_WEIGHTS)
ASSET_LABELS = "ABCD"

# Published rounded coefficients: f in units of 1e-3, g in units of 0.1, u_24 in units of 1.
PUBLISHED_TABLE = {
    "": (2.8, 8.1, 0.0),
    "A": (-1.1, 0.7, 0.0),
    "B": (-0.8, 0.5, 0.0),
    "C": (-1.3, 0.9, 0.1),
    "D": (-1.7, 1.1, 0.1),
    "AB": (-0.2, 0.1, 0.2),
    "AC": (-0.2, 0.1, 0.5),
    "AD": (0.0, 0.0, 0.6),
    "BC": (2.8, -1.9, -0.1),
    "BD": (1.1, -0.7, -0.1),
    "CD": (0.8, -0.6, 0.1),
    "ABC": (2.5, -1.6, -0.8),
    "ABD": (2.1, -1.4, -0.9),
    "ACD": (2.7, -1.8, -1.5),
    "BCD": (2.3, -1.5, -0.2),
    "ABCD": (3.9, -0.8, 1.8),
}
PUBLISHED_TABLE_SCALES = (1e-3, 0.1, 1.0)


def mask_label(mask: int, labels: str = ASSET_LABELS) -> str:
    return "".join(labels[i] for i in range(len(labels)) if mask >> i & 1)


def label_mask(label: str, labels: str = ASSET_LABELS) -> int:
    return sum(1 << labels.index(ch) for ch in label)


def published_table_comparison(
    problem: PortfolioProblem = REFERENCE_PROBLEM,
    f_min: float = 0.0,
    f_max: float = 0.015,
    n: int = 24,
) -> list[dict]:
    """Computed f, g, g^n coefficients next to the published rounded table.

    Values are expressed in the table's units.  ``flag`` marks the constant
    term, whose published value does not follow from the objective formula.
    """
    f = problem.to_polynomial()
    g = rescale(f, "min", f_min, f_max)
    gn = power(g, n)
    rows = []
    for label, published in sorted(PUBLISHED_TABLE.items(), key=lambda t: (len(t[0]), t[0])):
        mask = label_mask(label)
        computed = tuple(p[mask] / s for p, s in zip((f, g, gn), PUBLISHED_TABLE_SCALES))
        rows.append(
            {
                "term": label or "const",
                "f_computed": computed[0],
                "f_table": published[0],
                "g_computed": computed[1],
                "g_table": published[1],
                "u_computed": computed[2],
                "u_table": published[2],
                "flag": "constant-term discrepancy" if mask == 0 else "",
            }
        )
    return rows


def format_published_table_report(rows: list[dict]) -> str:
    head = (
        f"{'term':>6} | {'f x1e-3':>8} {'table':>6} | {'g x0.1':>8} {'table':>6} | "
        f"{'u_n':>8} {'table':>6} | flag"
    )
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(
            f"{r['term']:>6} | {r['f_computed']:8.3f} {r['f_table']:6.1f} | "
            f"{r['g_computed']:8.3f} {r['g_table']:6.1f} | "
            f"{r['u_computed']:8.3f} {r['u_table']:6.1f} | {r['flag']}"
        )
    return "\n".join(lines)
