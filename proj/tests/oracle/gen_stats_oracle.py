#!/usr/bin/env python3
"""Freeze scipy reference p-values for the statistics parity tests.

Regenerate with:
    python3 tests/oracle/gen_stats_oracle.py > tests/data/stats_oracle.json

The C++ tests only read the resulting JSON; scipy is never needed at build time.
"""
import json
import sys

import numpy as np
import scipy
from scipy import stats

CASES_PER_TEST = 50


def draw(rng, n, tied):
    kind = rng.integers(0, 4)
    if kind == 0:
        x = rng.normal(rng.uniform(-5, 5), rng.uniform(0.5, 3), n)
    elif kind == 1:
        x = rng.exponential(rng.uniform(0.5, 4), n)
    elif kind == 2:
        x = rng.uniform(0, rng.uniform(1, 20), n)
    else:
        x = rng.lognormal(0, rng.uniform(0.2, 1), n)
    if tied:
        # quantize hard enough to guarantee repeated values
        x = np.round(x * 2) / 2
    return [float(v) for v in x]


def sizes(rng, count):
    return [int(rng.integers(5, 201)) for _ in range(count)]


def has_ties(values):
    return len(set(values)) != len(values)


def welch_cases(rng):
    out = []
    for i in range(CASES_PER_TEST):
        tied = i % 2 == 1
        na, nb = sizes(rng, 2)
        a, b = draw(rng, na, tied), draw(rng, nb, tied)
        r = stats.ttest_ind(a, b, equal_var=False)
        out.append({"groups": [a, b], "statistic": float(r.statistic), "p": float(r.pvalue)})
    return out


def mwu_cases(rng):
    out = []
    for i in range(CASES_PER_TEST):
        tied = i % 2 == 1
        # a handful of small cases so the exact path is exercised too
        if i % 10 == 0:
            na, nb = int(rng.integers(5, 9)), int(rng.integers(5, 9))
        else:
            na, nb = sizes(rng, 2)
        a, b = draw(rng, na, tied), draw(rng, nb, tied)
        exact = max(na, nb) <= 8 and not has_ties(a + b)
        r = stats.mannwhitneyu(a, b, alternative="two-sided", use_continuity=True,
                               method="exact" if exact else "asymptotic")
        out.append({"groups": [a, b], "statistic": float(r.statistic), "p": float(r.pvalue),
                    "exact": exact})
    return out


def anova_cases(rng):
    out = []
    for i in range(CASES_PER_TEST):
        tied = i % 2 == 1
        k = int(rng.integers(3, 6))
        groups = [draw(rng, n, tied) for n in sizes(rng, k)]
        r = stats.f_oneway(*groups)
        out.append({"groups": groups, "statistic": float(r.statistic), "p": float(r.pvalue)})
    return out


def kw_cases(rng):
    out = []
    for i in range(CASES_PER_TEST):
        tied = i % 2 == 1
        k = int(rng.integers(3, 6))
        groups = [draw(rng, n, tied) for n in sizes(rng, k)]
        r = stats.kruskal(*groups)
        out.append({"groups": groups, "statistic": float(r.statistic), "p": float(r.pvalue)})
    return out


def sw_cases(rng):
    out = []
    for i in range(CASES_PER_TEST):
        tied = i % 2 == 1
        x = draw(rng, int(rng.integers(5, 201)), tied)
        r = stats.shapiro(x)
        out.append({"groups": [x], "statistic": float(r.statistic), "p": float(r.pvalue)})
    return out


def anchors():
    rng = np.random.default_rng(20240501)
    normal50 = [float(v) for v in rng.standard_normal(50)]
    sw_n = stats.shapiro(normal50)
    expo100 = [float(v) for v in rng.exponential(1.0, 100)]
    sw_e = stats.shapiro(expo100)
    welch = stats.ttest_ind([1, 2, 3, 4, 5], [2, 3, 4, 5, 6], equal_var=False)
    anova = stats.f_oneway([1, 2, 3], [4, 5, 6], [7, 8, 9])
    # two groups of 100 standard-normal draws that both pass the normality gate
    seed = 0
    while True:
        g = np.random.default_rng(1000 + seed)
        a = [float(v) for v in g.standard_normal(100)]
        b = [float(v) for v in g.standard_normal(100)]
        pa, pb = stats.shapiro(a).pvalue, stats.shapiro(b).pvalue
        if pa >= 0.05 and pb >= 0.05:
            break
        seed += 1
    return {
        "sw_normal50": {"sample": normal50, "w": float(sw_n.statistic), "p": float(sw_n.pvalue)},
        "sw_expo100": {"sample": expo100, "w": float(sw_e.statistic), "p": float(sw_e.pvalue)},
        "welch_12345_23456": {"statistic": float(welch.statistic), "p": float(welch.pvalue)},
        "anova_123_456_789": {"statistic": float(anova.statistic), "p": float(anova.pvalue)},
        "two_normal_groups": {"groups": [a, b], "p_a": float(pa), "p_b": float(pb)},
    }


def main():
    rng = np.random.default_rng(7)
    doc = {
        "generator": f"scipy {scipy.__version__}, numpy {np.__version__}",
        "welch_t": welch_cases(rng),
        "mann_whitney_u": mwu_cases(rng),
        "one_way_anova": anova_cases(rng),
        "kruskal_wallis": kw_cases(rng),
        "shapiro_wilk": sw_cases(rng),
        "anchors": anchors(),
    }
    json.dump(doc, sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
