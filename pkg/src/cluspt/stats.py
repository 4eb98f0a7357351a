"""Nonparametric tests for comparing algorithms over datasets.

Conventions: the input matrix has one row per algorithm and one column per
dataset, entries are mean costs (lower is better, rank 1 best). Ties take
mid-ranks. p-values come from the asymptotic chi-squared / F / normal
distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import stats as st

from .errors import DegenerateInput


def _midranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def _check_matrix(matrix):
    k = len(matrix)
    if k < 2:
        raise DegenerateInput("need at least 2 algorithms")
    n = len(matrix[0])
    if n < 2:
        raise DegenerateInput("need at least 2 datasets")
    if any(len(row) != n for row in matrix):
        raise DegenerateInput("missing cells: rows have unequal lengths")
    return k, n


def friedman_test(matrix):
    """Friedman chi-squared statistic, p-value and mean ranks."""
    k, n = _check_matrix(matrix)
    ranks_per_dataset = [_midranks([matrix[a][d] for a in range(k)])
                         for d in range(n)]
    mean_ranks = [sum(rd[a] for rd in ranks_per_dataset) / n for a in range(k)]
    chi2 = 12.0 * n / (k * (k + 1)) * (
        sum(r * r for r in mean_ranks) - k * (k + 1) ** 2 / 4.0)
    p = 1.0 - st.chi2.cdf(chi2, k - 1)
    return chi2, p, mean_ranks


def iman_davenport_test(matrix):
    """F-distributed sharpening of the Friedman statistic."""
    k, n = _check_matrix(matrix)
    chi2, _p, _ranks = friedman_test(matrix)
    denom = n * (k - 1) - chi2
    if denom <= 0:
        raise DegenerateInput("Iman-Davenport undefined: chi2 >= n(k-1)")
    ff = (n - 1) * chi2 / denom
    p = 1.0 - st.f.cdf(ff, k - 1, (k - 1) * (n - 1))
    return ff, p


def friedman_aligned_test(matrix):
    """Aligned-ranks variant: observations centered per dataset and ranked
    jointly across the whole matrix."""
    k, n = _check_matrix(matrix)
    aligned = []
    for d in range(n):
        loc = sum(matrix[a][d] for a in range(k)) / k
        aligned.extend(matrix[a][d] - loc for a in range(k))
    ranks = _midranks(aligned)  # index = d * k + a
    col_sums = [sum(ranks[d * k + a] for d in range(n)) for a in range(k)]
    row_sums = [sum(ranks[d * k + a] for a in range(k)) for d in range(n)]
    mean_ranks = [c / n for c in col_sums]
    num = (k - 1) * (sum(c * c for c in col_sums)
                     - (k * n * n / 4.0) * (k * n + 1) ** 2)
    den = (k * n * (k * n + 1) * (2 * k * n + 1)) / 6.0 \
        - sum(r * r for r in row_sums) / k
    if den == 0:
        raise DegenerateInput("aligned Friedman undefined for these data")
    t = num / den
    p = 1.0 - st.chi2.cdf(t, k - 1)
    return t, p, mean_ranks


def quade_test(matrix):
    """Quade test: dataset ranks weighted by the dataset's range."""
    k, n = _check_matrix(matrix)
    per_dataset = [_midranks([matrix[a][d] for a in range(k)]) for d in range(n)]
    ranges = [max(matrix[a][d] for a in range(k))
              - min(matrix[a][d] for a in range(k)) for d in range(n)]
    qranks = _midranks(ranges)
    s = [[qranks[d] * (per_dataset[d][a] - (k + 1) / 2.0) for a in range(k)]
         for d in range(n)]
    w = [[qranks[d] * per_dataset[d][a] for a in range(k)] for d in range(n)]
    sj = [sum(s[d][a] for d in range(n)) for a in range(k)]
    wj = [sum(w[d][a] for d in range(n)) for a in range(k)]
    mean_ranks = [x / (n * (n + 1) / 2.0) for x in wj]
    a_term = sum(v * v for row in s for v in row)
    b_term = sum(v * v for v in sj) / n
    if a_term == b_term:
        raise DegenerateInput("Quade undefined: no variation across algorithms")
    f = (n - 1) * b_term / (a_term - b_term)
    p = 1.0 - st.f.cdf(f, k - 1, (k - 1) * (n - 1))
    return f, p, mean_ranks


def holm_adjust(pvalues):
    """Step-down: adj_i = max_{j<=i} (m-j)*p_j over the ascending order."""
    m = len(pvalues)
    order = sorted(range(m), key=lambda i: pvalues[i])
    adj = [0.0] * m
    running = 0.0
    for pos, i in enumerate(order):
        running = max(running, (m - pos) * pvalues[i])
        adj[i] = min(1.0, running)
    return adj


def holland_adjust(pvalues):
    """Step-down Sidak variant: 1 - (1 - p_j)^(m-j)."""
    m = len(pvalues)
    order = sorted(range(m), key=lambda i: pvalues[i])
    adj = [0.0] * m
    running = 0.0
    for pos, i in enumerate(order):
        running = max(running, 1.0 - (1.0 - pvalues[i]) ** (m - pos))
        adj[i] = min(1.0, running)
    return adj


def hochberg_adjust(pvalues):
    """Step-up: adj_i = min_{j>=i} (m-j)*p_j over the ascending order."""
    m = len(pvalues)
    order = sorted(range(m), key=lambda i: pvalues[i])
    adj = [0.0] * m
    running = math.inf
    for pos in range(m - 1, -1, -1):
        i = order[pos]
        running = min(running, (m - pos) * pvalues[i])
        adj[i] = min(1.0, running)
    return adj


def hommel_adjust(pvalues):
    """Hommel's procedure (Wright 1992 algorithm)."""
    m = len(pvalues)
    order = sorted(range(m), key=lambda i: pvalues[i])
    p = [pvalues[i] for i in order]
    q = [min(m * p[j] / (j + 1) for j in range(m))] * m
    pa = list(q)
    for mm in range(m - 1, 1, -1):
        cut = m - mm + 1
        q1 = min(mm * p[j] / (j - cut + 2) for j in range(cut, m))
        for j in range(cut):
            q[j] = min(mm * p[j], q1)
        for j in range(cut, m):
            q[j] = q[cut - 1]
        pa = [max(a, b) for a, b in zip(pa, q)]
    adj_sorted = [min(1.0, max(a, b)) for a, b in zip(pa, p)]
    adj = [0.0] * m
    for pos, i in enumerate(order):
        adj[i] = adj_sorted[pos]
    return adj


def wilcoxon_signed_rank(a, b):
    """Signed-rank comparison of two paired samples.

    Returns (N, R+, R-, p) with R+ the rank sum where a < b (a better).
    Normal approximation with continuity and tie correction.
    """
    diffs = [x - y for x, y in zip(a, b) if x != y]
    n = len(diffs)
    if n == 0:
        raise DegenerateInput("all pairs tied; Wilcoxon undefined")
    ranks = _midranks([abs(d) for d in diffs])
    r_minus = sum(r for r, d in zip(ranks, diffs) if d > 0)   # a worse
    r_plus = sum(r for r, d in zip(ranks, diffs) if d < 0)    # a better
    t = min(r_plus, r_minus)
    mu = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    # tie correction over groups of equal |d|
    groups = {}
    for d in diffs:
        groups[abs(d)] = groups.get(abs(d), 0) + 1
    var -= sum(c ** 3 - c for c in groups.values()) / 48.0
    if var <= 0:
        raise DegenerateInput("zero variance in Wilcoxon statistic")
    z = (t - mu + 0.5) / math.sqrt(var)
    p = 2.0 * st.norm.cdf(z)
    return n, r_plus, r_minus, min(1.0, p)


@dataclass
class PosthocComparison:
    algorithm: str
    z: float
    p: float
    holm: float = 0.0
    holland: float = 0.0
    hochberg: float = 0.0
    hommel: float = 0.0


@dataclass
class RankingReport:
    statistic: float | None
    p_value: float | None
    mean_ranks: list
    control: str | None = None
    comparisons: list = field(default_factory=list)


@dataclass
class StatsReport:
    algorithms: list
    friedman: RankingReport
    iman_davenport_f: float | None
    iman_davenport_p: float | None
    aligned: RankingReport | None
    quade: RankingReport | None
    wilcoxon: dict  # (algo_a, algo_b) -> (N, R+, R-, p)


def _posthoc(names, mean_ranks, se):
    """z-tests of every algorithm against the lowest-rank control."""
    ctrl = min(range(len(names)), key=lambda i: (mean_ranks[i], i))
    comps = []
    for i in range(len(names)):
        if i == ctrl:
            continue
        z = (mean_ranks[i] - mean_ranks[ctrl]) / se
        p = 2.0 * (1.0 - st.norm.cdf(abs(z)))
        comps.append(PosthocComparison(algorithm=names[i], z=z, p=p))
    pvals = [c.p for c in comps]
    for attr, fn in (("holm", holm_adjust), ("holland", holland_adjust),
                     ("hochberg", hochberg_adjust), ("hommel", hommel_adjust)):
        for c, adj in zip(comps, fn(pvals)):
            setattr(c, attr, adj)
    return names[ctrl], comps


def friedman_suite(algorithms, matrix):
    """Full comparison report: Friedman + Iman-Davenport, aligned ranks,
    Quade, post-hoc adjusted p-values versus the lowest-ranked control and
    pairwise Wilcoxon tests. Degenerate sub-tests are reported as None."""
    k, n = _check_matrix(matrix)
    if len(algorithms) != k:
        raise DegenerateInput("algorithm name count does not match matrix")

    chi2, p, ranks = friedman_test(matrix)
    se = math.sqrt(k * (k + 1) / (6.0 * n))
    ctrl, comps = _posthoc(algorithms, ranks, se)
    fr = RankingReport(chi2, p, ranks, ctrl, comps)

    try:
        idf, idp = iman_davenport_test(matrix)
    except DegenerateInput:
        idf = idp = None

    try:
        t, ap, aranks = friedman_aligned_test(matrix)
        actrl, acomps = _posthoc(algorithms, aranks,
                                 math.sqrt(k * (n * k + 1) / 6.0))
        aligned = RankingReport(t, ap, aranks, actrl, acomps)
    except DegenerateInput:
        aligned = None

    try:
        f, qp, qranks = quade_test(matrix)
        qse = math.sqrt(k * (k + 1) * (2 * n + 1) * (k - 1)
                        / (18.0 * n * (n + 1)))
        qctrl, qcomps = _posthoc(algorithms, qranks, qse)
        quade = RankingReport(f, qp, qranks, qctrl, qcomps)
    except DegenerateInput:
        quade = None

    wilcoxon = {}
    for i in range(k):
        for j in range(i + 1, k):
            try:
                wilcoxon[(algorithms[i], algorithms[j])] = \
                    wilcoxon_signed_rank(matrix[i], matrix[j])
            except DegenerateInput:
                wilcoxon[(algorithms[i], algorithms[j])] = None
    return StatsReport(list(algorithms), fr, idf, idp, aligned, quade, wilcoxon)
