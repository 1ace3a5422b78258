"""Nonparametric comparison machinery: Wilcoxon signed-rank and Friedman.

Both tests operate on per-problem results of competing algorithms. The
Wilcoxon test uses the exact null distribution of the rank sum for small
samples (enumerated over the observed, possibly tied, ranks) and a
tie-corrected normal approximation above that. The Friedman test ranks
algorithms within each problem row with mid-ranks and reports mean ranks,
a dense ordinal ranking, and the tie-corrected chi-square statistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats as sps

EXACT_LIMIT = 20


@dataclass(frozen=True)
class PairedSamples:
    """Per-problem paired results of two algorithms."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
            raise ValueError("paired samples must be 1-D and equally long")
        if a.shape[0] < 2:
            raise ValueError("need at least two pairs")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class ResultMatrix:
    """Problems x algorithms matrix of summary values (e.g. mean of best)."""

    problems: tuple[str, ...]
    algorithms: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.problems), len(self.algorithms)):
            raise ValueError("matrix shape must be (problems, algorithms)")
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix has missing or non-finite cells")
        object.__setattr__(self, "values", values)


class WilcoxonResult(NamedTuple):
    p_value: float
    t_plus: float
    t_minus: float


def _exact_two_sided_p(doubled_ranks: np.ndarray, doubled_t_plus: int) -> float:
    """Two-sided p from the exact null distribution of the rank sum.

    Signs are equiprobable under the null, so the doubled rank sum follows
    the subset-sum distribution of the observed doubled ranks (integers,
    which keeps the tabulation exact even with mid-ranks).
    """
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks:
        r = int(r)
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    n_assignments = float(2 ** len(doubled_ranks))
    p_le = counts[: doubled_t_plus + 1].sum() / n_assignments
    p_ge = counts[doubled_t_plus:].sum() / n_assignments
    return min(1.0, 2.0 * min(p_le, p_ge))


def wilcoxon_signed_rank(samples: PairedSamples) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on paired results.

    Zero differences are dropped (Wilcoxon's original procedure), absolute
    differences are ranked with mid-ranks on ties, and T+/T- are the rank
    sums of positive and negative differences. Exact p for n <= 20 pairs,
    tie-corrected normal approximation beyond.

    Raises ValueError("no information") when every difference is zero.
    """
    diff = samples.a - samples.b
    diff = diff[diff != 0.0]
    if diff.size == 0:
        raise ValueError("no information: all paired differences are zero")
    ranks = sps.rankdata(np.abs(diff), method="average")
    t_plus = float(ranks[diff > 0].sum())
    t_minus = float(ranks[diff < 0].sum())
    n = diff.size
    if n <= EXACT_LIMIT:
        doubled = np.rint(2.0 * ranks).astype(np.int64)
        p = _exact_two_sided_p(doubled, int(round(2.0 * t_plus)))
    else:
        # mean and variance of T+ over random signs; Var = sum(r_i^2)/4
        # already absorbs mid-rank ties (classical tie-correction form).
        mu = ranks.sum() / 2.0
        sigma = np.sqrt(np.sum(ranks**2) / 4.0)
        z = (t_plus - mu) / sigma
        p = float(2.0 * sps.norm.sf(abs(z)))
    return WilcoxonResult(p_value=p, t_plus=t_plus, t_minus=t_minus)


def _row_mid_ranks(values: np.ndarray) -> np.ndarray:
    return sps.rankdata(values, method="average")


def friedman_mean_ranks(matrix: ResultMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Mean mid-rank per algorithm plus a dense ordinal ranking.

    Within every problem row the algorithms are ranked ascending by value
    (smaller is better). Ordinal 1 goes to the smallest mean rank and equal
    mean ranks share their ordinal.
    """
    if len(matrix.algorithms) < 2 or len(matrix.problems) < 2:
        raise ValueError("friedman ranking needs >= 2 algorithms and >= 2 problems")
    row_ranks = np.vstack([_row_mid_ranks(row) for row in matrix.values])
    mean_ranks = row_ranks.mean(axis=0)
    distinct = np.unique(mean_ranks)
    ordinals = np.searchsorted(distinct, mean_ranks) + 1
    return mean_ranks, ordinals


def friedman_statistic(matrix: ResultMatrix) -> tuple[float, float]:
    """Tie-corrected Friedman chi-square and its chi-square tail p-value."""
    if len(matrix.algorithms) < 2 or len(matrix.problems) < 2:
        raise ValueError("friedman test needs >= 2 algorithms and >= 2 problems")
    n_problems, k = matrix.values.shape
    row_ranks = np.vstack([_row_mid_ranks(row) for row in matrix.values])
    mean_ranks = row_ranks.mean(axis=0)
    raw = 12.0 * n_problems / (k * (k + 1)) * np.sum((mean_ranks - (k + 1) / 2.0) ** 2)

    tie_sum = 0.0
    for row in matrix.values:
        _, counts = np.unique(row, return_counts=True)
        tie_sum += float(np.sum(counts.astype(float) ** 3 - counts))
    correction = 1.0 - tie_sum / (n_problems * k * (k**2 - 1))
    if correction <= 0.0:
        # every row fully tied: no discrimination at all
        return 0.0, 1.0
    statistic = float(raw / correction)
    p = float(sps.chi2.sf(statistic, df=k - 1))
    return statistic, p
