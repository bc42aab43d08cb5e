"""Nonparametric rank tests on frequency vectors and the paired t-test.

Kruskal-Wallis and Mann-Whitney use midranks with tie correction. Mann-Whitney
reports min(U_x, U_y) and enumerates the exact two-sided null when the pooled
size is at most 12 with no ties; otherwise it uses the tie-corrected normal
approximation with a 0.5 continuity correction. All two-sided p-values are
clamped to [0, 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.stats

ALPHA = 0.05

_EXACT_LIMIT_MW = 12
_EXACT_LIMIT_KW = 10


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    exact: bool
    tie_corrected: bool
    group_sizes: tuple[int, ...]

    def __post_init__(self):
        if not (0.0 <= self.p_value <= 1.0):
            raise ValueError(f"p-value out of [0, 1]: {self.p_value}")

    @property
    def significant(self) -> bool:
        return self.p_value < ALPHA


def _midranks(pooled: np.ndarray) -> np.ndarray:
    return scipy.stats.rankdata(pooled, method="average")


def _tie_term(ranks: np.ndarray) -> float:
    """Sum of t^3 - t over tie groups of the pooled sample."""
    _, counts = np.unique(ranks, return_counts=True)
    return float(np.sum(counts.astype(float) ** 3 - counts))


def _h_statistic(group_sizes, ranks: np.ndarray) -> float:
    """Tie-corrected Kruskal-Wallis H; 0 when every observation ties."""
    n = ranks.size
    start = 0
    ssq = 0.0
    for size in group_sizes:
        r = ranks[start : start + size].sum()
        ssq += r * r / size
        start += size
    h = 12.0 / (n * (n + 1)) * ssq - 3.0 * (n + 1)
    correction = 1.0 - _tie_term(ranks) / (n**3 - n)
    if correction <= 0.0:
        return 0.0
    return h / correction


def kruskal_wallis(groups, exact: bool = False) -> TestResult:
    """Kruskal-Wallis H-test across two or more groups.

    The reported p-value comes from the chi-square survival function with
    groups-1 degrees of freedom. With ``exact=True`` and a pooled size of at
    most 10 with no ties, the permutation null is enumerated instead.
    """
    groups = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(groups) < 2:
        raise ValueError("kruskal_wallis needs at least 2 groups")
    for i, g in enumerate(groups):
        if g.size == 0:
            raise ValueError(f"group {i} is empty")
    sizes = tuple(int(g.size) for g in groups)
    pooled = np.concatenate(groups)
    n = pooled.size
    ranks = _midranks(pooled)
    has_ties = _tie_term(ranks) > 0
    h = _h_statistic(sizes, ranks)

    if exact and n <= _EXACT_LIMIT_KW and not has_ties:
        count = 0
        total = 0
        for perm_ranks in _group_rank_assignments(sizes, n):
            total += 1
            if _h_statistic(sizes, perm_ranks) >= h - 1e-12:
                count += 1
        return TestResult(
            statistic=float(h),
            p_value=count / total,
            method="kruskal_wallis",
            exact=True,
            tie_corrected=has_ties,
            group_sizes=sizes,
        )

    p = float(scipy.stats.chi2.sf(h, df=len(groups) - 1))
    return TestResult(
        statistic=float(h),
        p_value=min(max(p, 0.0), 1.0),
        method="kruskal_wallis",
        exact=False,
        tie_corrected=has_ties,
        group_sizes=sizes,
    )


def _group_rank_assignments(sizes, n):
    """Yield every way of dealing ranks 1..n into groups of the given sizes."""
    all_ranks = tuple(range(1, n + 1))

    def rec(remaining, sizes_left):
        if not sizes_left:
            yield ()
            return
        size = sizes_left[0]
        for combo in itertools.combinations(remaining, size):
            rest = tuple(r for r in remaining if r not in combo)
            for tail in rec(rest, sizes_left[1:]):
                yield combo + tail

    for flat in rec(all_ranks, tuple(sizes)):
        yield np.asarray(flat, dtype=np.float64)


def mann_whitney(x, y, alternative: str = "two-sided") -> TestResult:
    """Mann-Whitney U-test; the reported statistic is min(U_x, U_y)."""
    if alternative != "two-sided":
        raise ValueError("only the two-sided alternative is supported")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0 or y.size == 0:
        raise ValueError("mann_whitney requires non-empty inputs")
    nx, ny = x.size, y.size
    pooled = np.concatenate([x, y])
    ranks = _midranks(pooled)
    has_ties = _tie_term(ranks) > 0
    ux = float(ranks[:nx].sum() - nx * (nx + 1) / 2.0)
    uy = nx * ny - ux
    u = min(ux, uy)

    if nx + ny <= _EXACT_LIMIT_MW and not has_ties:
        total = 0
        count = 0
        n = nx + ny
        for x_ranks in itertools.combinations(range(1, n + 1), nx):
            total += 1
            u_perm = sum(x_ranks) - nx * (nx + 1) / 2.0
            if min(u_perm, nx * ny - u_perm) <= u + 1e-12:
                count += 1
        return TestResult(
            statistic=u,
            p_value=count / total,
            method="mann_whitney",
            exact=True,
            tie_corrected=False,
            group_sizes=(nx, ny),
        )

    n = nx + ny
    tie_factor = 1.0 - _tie_term(ranks) / (n**3 - n)
    var = tie_factor * nx * ny * (n + 1) / 12.0
    if var <= 0.0:
        p = 1.0
    else:
        z = (u - nx * ny / 2.0 + 0.5) / np.sqrt(var)
        p = 2.0 * float(scipy.stats.norm.cdf(z))
    return TestResult(
        statistic=u,
        p_value=min(max(p, 0.0), 1.0),
        method="mann_whitney",
        exact=False,
        tie_corrected=has_ties,
        group_sizes=(nx, ny),
    )


def paired_t_test(a, b) -> TestResult:
    """Two-sided paired t-test with sample (n-1) standard deviation."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(
            f"paired_t_test requires equal-length 1-D inputs "
            f"(got {a.shape} vs {b.shape})"
        )
    n = a.size
    if n < 2:
        raise ValueError("paired_t_test requires at least 2 pairs")
    d = a - b
    sd = d.std(ddof=1)
    if sd == 0.0:
        raise ValueError("degenerate paired test: differences have zero variance")
    t = float(d.mean() / (sd / np.sqrt(n)))
    p = 2.0 * float(scipy.stats.t.sf(abs(t), df=n - 1))
    return TestResult(
        statistic=t,
        p_value=min(max(p, 0.0), 1.0),
        method="paired_t",
        exact=False,
        tie_corrected=False,
        group_sizes=(n, n),
    )
