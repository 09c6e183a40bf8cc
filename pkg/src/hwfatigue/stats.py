"""Two-sided Wilcoxon rank-sum (Mann-Whitney) test with mid-rank ties.

The statistic is W, the sum of the pooled mid-ranks of the first sample.
Small pooled sizes use the exact permutation distribution of W conditional
on the observed tie pattern, computed by shift-convolution over the rank
multiset; larger sizes use the tie-corrected, continuity-corrected normal
approximation:

    mu_W    = n_a (n_a + n_b + 1) / 2
    sigma_W = sqrt( n_a n_b / 12 * ( (N + 1) - sum(t^3 - t) / (N (N - 1)) ) )
    z       = (|W - mu_W| - 0.5)_+ / sigma_W        (0.5 toward the mean)
    p       = 2 Phi(-z)

where N = n_a + n_b and t runs over tie-group sizes of the pooled values.
The two-sided exact p-value is min(1, 2 min(P(W <= w), P(W >= w))), both
tails including the observed value.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

# Maximum pooled size for which the exact distribution is used by default.
DEFAULT_EXACT_THRESHOLD = 25

# Fallback boundary of the int64 subset-count arithmetic in the exact path.
_EXACT_HARD_LIMIT = 64

# Canonical column order of the pairwise session comparisons.
SESSION_PAIRS = ((1, 2), (1, 3), (1, 4), (1, 5), (2, 3),
                 (2, 4), (2, 5), (3, 4), (3, 5), (4, 5))

Method = Literal["exact", "normal_approx"]


@dataclass(frozen=True)
class RankSumResult:
    """Outcome of one two-sample comparison."""

    rank_sum: float
    p_value: float
    method: Method
    n_a: int
    n_b: int


@dataclass(frozen=True)
class TestResult:
    """A rank-sum comparison of one session pair within one task."""

    __test__ = False  # keep pytest from collecting this despite the name

    task_id: int
    session_a: int
    session_b: int
    rank_sum: float
    p_value: float
    method: Method
    n_a: int
    n_b: int

    @property
    def pair_label(self) -> str:
        return f"S{self.session_a}-S{self.session_b}"


def midranks(values) -> np.ndarray:
    """Ranks of ``values`` with ties averaged (mid-ranks).

    Ranks are 1-based; a tie group occupying rank positions i..j receives
    (i + j) / 2.  The output always sums to n(n+1)/2.
    """
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {a.shape}")
    if a.size == 0:
        raise ValueError("cannot rank an empty series")
    order = np.argsort(a, kind="stable")
    s = a[order]
    boundary = np.empty(a.size, dtype=bool)
    boundary[0] = True
    boundary[1:] = s[1:] != s[:-1]
    starts = np.flatnonzero(boundary)
    counts = np.diff(np.append(starts, a.size))
    group_rank = starts + (counts + 1) / 2.0
    ranks = np.empty(a.size, dtype=np.float64)
    ranks[order] = np.repeat(group_rank, counts)
    return ranks


def _validate_two_samples(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("samples must be 1-d series")
    return a, b


def _rank_sum_counts(doubled: np.ndarray, k: int) -> np.ndarray:
    """Subset counts of the exact null distribution.

    ``doubled`` holds the pooled mid-ranks times two (integers even under
    ties).  Entry s of the result is the number of k-subsets of the pooled
    positions whose doubled ranks sum to s.  Shift-convolution dynamic
    programming; total count C(n, k) stays within int64 for n <= 64.
    """
    total_sum = int(doubled.sum())
    dp = np.zeros((k + 1, total_sum + 1), dtype=np.int64)
    dp[0, 0] = 1
    for r in doubled.tolist():
        for kk in range(k, 0, -1):
            dp[kk, r:] += dp[kk - 1, : total_sum + 1 - r]
    return dp[k]


def ranksum_exact(a, b) -> RankSumResult:
    """Exact two-sided rank-sum test.

    Enumerates (via dynamic programming) all C(n_a+n_b, n_a) equally likely
    assignments of the pooled mid-ranks to the first sample, so the result
    is permutation-exact conditional on the observed tie pattern.
    """
    a, b = _validate_two_samples(a, b)
    n_a, n_b = a.size, b.size
    if n_a + n_b > _EXACT_HARD_LIMIT:
        raise ValueError(f"exact method supports at most {_EXACT_HARD_LIMIT} pooled values")
    ranks = midranks(np.concatenate([a, b]))
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    w2 = int(doubled[:n_a].sum())
    counts = _rank_sum_counts(doubled, n_a)
    total = int(counts.sum())
    lower = int(counts[: w2 + 1].sum())
    upper = int(counts[w2:].sum())
    p = min(1.0, 2.0 * min(lower, upper) / total)
    return RankSumResult(rank_sum=w2 / 2.0, p_value=p, method="exact", n_a=n_a, n_b=n_b)


def ranksum_normal(a, b) -> RankSumResult:
    """Normal-approximation two-sided rank-sum test (tie and continuity
    corrected; see module docstring for the exact formulas)."""
    a, b = _validate_two_samples(a, b)
    n_a, n_b = a.size, b.size
    n = n_a + n_b
    pooled = np.concatenate([a, b])
    ranks = midranks(pooled)
    w = float(ranks[:n_a].sum())
    mu = n_a * (n + 1) / 2.0

    _, tie_sizes = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_sizes.astype(np.float64) ** 3 - tie_sizes))
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return RankSumResult(rank_sum=w, p_value=1.0, method="normal_approx",
                             n_a=n_a, n_b=n_b)
    z = max(abs(w - mu) - 0.5, 0.0) / math.sqrt(var)
    p = min(1.0, math.erfc(z / math.sqrt(2.0)))
    return RankSumResult(rank_sum=w, p_value=p, method="normal_approx",
                         n_a=n_a, n_b=n_b)


def ranksum(a, b, exact_threshold: int = DEFAULT_EXACT_THRESHOLD) -> RankSumResult:
    """Two-sided rank-sum test, exact for pooled sizes up to
    ``exact_threshold`` and normal-approximated above."""
    a, b = _validate_two_samples(a, b)
    if a.size + b.size <= exact_threshold:
        return ranksum_exact(a, b)
    return ranksum_normal(a, b)


def pairwise_session_tests(
    values_by_cell: Mapping[tuple[int, int], Sequence[float]],
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
) -> list[TestResult]:
    """All pairwise session comparisons, per task.

    ``values_by_cell`` maps (task_id, session_id) to the per-subject feature
    values of that cell.  For every task present, one comparison is emitted
    per session pair in :data:`SESSION_PAIRS` order (10 pairs when all five
    sessions have data).  A pair whose cells lack values is skipped with a
    warning.
    """
    results: list[TestResult] = []
    tasks = sorted({task for task, _ in values_by_cell})
    for task in tasks:
        cells = {session: np.asarray(values_by_cell[(task, session)], dtype=np.float64)
                 for t, session in values_by_cell if t == task}
        for session_a, session_b in SESSION_PAIRS:
            va = cells.get(session_a)
            vb = cells.get(session_b)
            if va is None or va.size == 0 or vb is None or vb.size == 0:
                warnings.warn(
                    f"task {task}: skipping S{session_a}-S{session_b}, "
                    "no data for one or both sessions",
                    stacklevel=2)
                continue
            r = ranksum(va, vb, exact_threshold=exact_threshold)
            results.append(TestResult(
                task_id=task, session_a=session_a, session_b=session_b,
                rank_sum=r.rank_sum, p_value=r.p_value, method=r.method,
                n_a=r.n_a, n_b=r.n_b))
    return results
