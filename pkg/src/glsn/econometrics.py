"""OLS with AIC/adjusted-R2/VIF diagnostics, Pearson screening, and exhaustive
best-subset selection.

The selection protocol: fit every nonempty subset of the candidate variables,
mark a model admissible when every VIF stays under the threshold, and pick the
admissible model with the lowest AIC (ties: fewer variables, then variable
names). Variables and the response are Z-score standardized by default; the
gravity module fits in raw mode because it already works in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import stats

from .model import DataError

RANK_TOL = 1e-10  # smallest/largest singular value ratio treated as collinear
MAX_CANDIDATES = 20
# models within this AIC distance of the minimum are treated as equivalent and
# the tie-break (fewer variables, then names) applies; the standard reading of
# AIC differences under 2 as "no meaningful support for the larger model"
AIC_TIE_BAND = 2.0


@dataclass(frozen=True)
class DesignMatrix:
    variables: tuple[str, ...]
    x: np.ndarray  # (n_obs, n_vars), no intercept column
    response_name: str
    y: np.ndarray
    standardized: bool = False

    def __post_init__(self):
        if self.x.ndim != 2 or self.y.ndim != 1:
            raise DataError("design must be a 2-d matrix with a 1-d response")
        if self.x.shape[0] != self.y.shape[0]:
            raise DataError("row count mismatch between design and response")
        if len(self.variables) != self.x.shape[1]:
            raise DataError("variable name count mismatch")
        if len(set(self.variables)) != len(self.variables):
            raise DataError("duplicate variable names")
        if not (np.isfinite(self.x).all() and np.isfinite(self.y).all()):
            raise DataError("design contains non-finite values")

    @property
    def n_obs(self) -> int:
        return self.x.shape[0]

    def subset(self, names: tuple[str, ...]) -> "DesignMatrix":
        idx = [self.variables.index(n) for n in names]
        return DesignMatrix(
            variables=names,
            x=self.x[:, idx],
            response_name=self.response_name,
            y=self.y,
            standardized=self.standardized,
        )


def _zscore(col: np.ndarray, name: str) -> np.ndarray:
    sd = col.std(ddof=1)
    if sd == 0 or not np.isfinite(sd):
        raise DataError(f"column {name!r} is constant, cannot standardize")
    return (col - col.mean()) / sd


def standardize(design: DesignMatrix) -> DesignMatrix:
    """Z-score every column and the response, sample (n-1) standard deviation."""
    x = np.column_stack(
        [_zscore(design.x[:, j], design.variables[j]) for j in range(design.x.shape[1])]
    )
    y = _zscore(design.y, design.response_name)
    return DesignMatrix(
        variables=design.variables,
        x=x,
        response_name=design.response_name,
        y=y,
        standardized=True,
    )


@dataclass(frozen=True)
class RegressionReport:
    variables: tuple[str, ...]
    coefficients: dict[str, float]  # includes "intercept"
    ci95: dict[str, tuple[float, float]]
    p_values: dict[str, float]
    r2: float
    adjusted_r2: float
    aic: float
    vif: dict[str, float]  # math.inf marks exact collinearity
    n_obs: int
    k_params: int
    rss: float

    @property
    def max_vif(self) -> float:
        return max(self.vif.values()) if self.vif else 1.0


def aic_value(n_obs: int, rss: float, k_params: int) -> float:
    """N * ln(RSS/N) + 2K, intercept counted in K."""
    if rss <= 0:
        return -math.inf
    return n_obs * math.log(rss / n_obs) + 2 * k_params


def adjusted_r2_value(r2: float, n_obs: int, n_vars: int) -> float:
    """1 - (1 - R^2)(N - 1)/(N - K - 1), K = variable count without intercept."""
    return 1.0 - (1.0 - r2) * (n_obs - 1) / (n_obs - n_vars - 1)


def _lstsq_qr(xmat: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least squares via QR; raises on rank deficiency."""
    sv = np.linalg.svd(xmat, compute_uv=False)
    if sv[-1] <= RANK_TOL * sv[0]:
        raise DataError("design matrix is rank deficient (exactly collinear columns)")
    q, r = np.linalg.qr(xmat)
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - xmat @ beta
    return beta, resid


def ols_fit(design: DesignMatrix) -> RegressionReport:
    """Least-squares fit with intercept; t-based CIs and two-sided p-values."""
    n, k_vars = design.x.shape
    k_params = k_vars + 1
    if n <= k_params:
        raise DataError(f"need more than {k_params} observations, got {n}")
    xmat = np.column_stack([np.ones(n), design.x])
    beta, resid = _lstsq_qr(xmat, design.y)

    rss = float(resid @ resid)
    tss = float(((design.y - design.y.mean()) ** 2).sum())
    r2 = 1.0 if tss == 0 else 1.0 - rss / tss
    r2 = min(max(r2, 0.0), 1.0)

    dof = n - k_params
    sigma2 = rss / dof
    xtx_inv = np.linalg.inv(xmat.T @ xmat)
    se = np.sqrt(np.maximum(sigma2 * np.diag(xtx_inv), 0.0))
    tcrit = stats.t.ppf(0.975, dof)

    names = ("intercept",) + design.variables
    coefficients, ci95, p_values = {}, {}, {}
    for i, name in enumerate(names):
        b = float(beta[i])
        coefficients[name] = b
        if se[i] > 0:
            ci95[name] = (float(b - tcrit * se[i]), float(b + tcrit * se[i]))
            p_values[name] = float(2 * stats.t.sf(abs(b / se[i]), dof))
        else:
            ci95[name] = (b, b)
            p_values[name] = 0.0 if b != 0 else 1.0

    return RegressionReport(
        variables=design.variables,
        coefficients=coefficients,
        ci95=ci95,
        p_values=p_values,
        r2=r2,
        adjusted_r2=adjusted_r2_value(r2, n, k_vars),
        aic=aic_value(n, rss, k_params),
        vif=vif(design),
        n_obs=n,
        k_params=k_params,
        rss=rss,
    )


def vif(design: DesignMatrix) -> dict[str, float]:
    """VIF_j = 1 / (1 - R^2_j), column j regressed on the others plus intercept.

    Single-variable designs give exactly 1.0; exact collinearity gives inf.
    """
    n, k = design.x.shape
    if k == 0:
        return {}
    if k == 1:
        return {design.variables[0]: 1.0}
    out = {}
    for j in range(k):
        others = np.column_stack(
            [np.ones(n)] + [design.x[:, m] for m in range(k) if m != j]
        )
        yj = design.x[:, j]
        try:
            _, resid = _lstsq_qr(others, yj)
        except DataError:
            out[design.variables[j]] = math.inf
            continue
        rss = float(resid @ resid)
        tss = float(((yj - yj.mean()) ** 2).sum())
        if tss == 0:
            raise DataError(f"column {design.variables[j]!r} is constant")
        r2j = 1.0 - rss / tss
        if r2j >= 1.0 - RANK_TOL:
            out[design.variables[j]] = math.inf
        else:
            out[design.variables[j]] = 1.0 / (1.0 - r2j)
    return out


def pearson(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Sample Pearson correlation with two-sided p-value via the t-transform."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 3:
        raise DataError("pearson needs two equal-length vectors of length >= 3")
    if x.std(ddof=1) == 0 or y.std(ddof=1) == 0:
        raise DataError("pearson is undefined for constant input")
    r, p = stats.pearsonr(x, y)
    return float(r), float(p)


@dataclass(frozen=True)
class SubsetResult:
    variables: tuple[str, ...]
    report: RegressionReport
    admissible: bool


@dataclass(frozen=True)
class SelectionResult:
    table: tuple[SubsetResult, ...]  # canonical order: subset size, then names
    verdict: SubsetResult | None  # None when no subset is admissible
    vif_threshold: float


def select_model(
    design: DesignMatrix, vif_threshold: float = 5.0
) -> SelectionResult:
    """Fit every nonempty candidate subset; verdict = admissible model with
    minimal AIC, where models within AIC_TIE_BAND of the minimum tie and the
    tie resolves to fewer variables, then lexicographic names."""
    if not 1 <= len(design.variables) <= MAX_CANDIDATES:
        raise DataError(f"candidate count must be in [1, {MAX_CANDIDATES}]")
    if vif_threshold <= 1:
        raise DataError("vif_threshold must exceed 1")

    results = []
    for size in range(1, len(design.variables) + 1):
        for names in combinations(sorted(design.variables), size):
            report = ols_fit(design.subset(names))
            results.append(
                SubsetResult(
                    variables=names,
                    report=report,
                    admissible=report.max_vif < vif_threshold,
                )
            )

    admissible = [r for r in results if r.admissible]
    verdict = None
    if admissible:
        best_aic = min(r.report.aic for r in admissible)
        tied = [r for r in admissible if r.report.aic <= best_aic + AIC_TIE_BAND]
        verdict = min(tied, key=lambda r: (len(r.variables), r.variables, r.report.aic))
    return SelectionResult(
        table=tuple(results), verdict=verdict, vif_threshold=vif_threshold
    )
