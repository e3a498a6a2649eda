"""Two-group comparison: Mann-Whitney U test and Cohen's d effect size.

The U test is rank-based with midranks for ties. For pooled sizes up to
EXACT_THRESHOLD the two-sided p-value is computed exactly by enumerating
every way of assigning the pooled values to the first group; larger samples
use the normal approximation with tie-corrected variance and continuity
correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, groupby
from statistics import mean, median, variance

from .errors import (
    DegenerateSampleError,
    EmptySampleError,
    ZeroPooledVarianceError,
)

EXACT_THRESHOLD = 20
DEFAULT_ALPHA = 0.05

METHOD_EXACT = "exact"
METHOD_NORMAL = "normal-approx"


@dataclass(frozen=True)
class GroupSample:
    """A labeled list of per-inspector effectiveness or efficiency values."""

    label: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise EmptySampleError(f"sample {self.label!r} has no values")

    @classmethod
    def of(cls, label: str, values) -> "GroupSample":
        return cls(label, tuple(float(v) for v in values))


@dataclass(frozen=True)
class ComparisonResult:
    u_statistic: float
    p_value: float
    method: str
    alpha: float
    reject_null: bool
    cohens_d: float | None

    def to_dict(self) -> dict:
        return {
            "u_statistic": self.u_statistic,
            "p_value": self.p_value,
            "method": self.method,
            "alpha": self.alpha,
            "reject_null": self.reject_null,
            "cohens_d": self.cohens_d,
        }


def midranks(values: list[float]) -> list[float]:
    """Ranks 1..n with tied values sharing the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    position = 0
    for _, run in groupby(order, key=lambda i: values[i]):
        indices = list(run)
        first = position + 1
        last = position + len(indices)
        rank = (first + last) / 2.0
        for index in indices:
            ranks[index] = rank
        position = last
    return ranks


def _u_from_ranks(ranks: list[float], n1: int) -> float:
    rank_sum = sum(ranks[:n1])
    return rank_sum - n1 * (n1 + 1) / 2.0


def _exact_p_value(ranks: list[float], n1: int, u_observed: float) -> float:
    """Two-sided p by full enumeration of group assignments.

    Every choice of n1 pooled positions for the first group is equally
    likely under the null; the p-value is the fraction whose U deviates
    from the null mean at least as much as the observed U. Midranks make
    every U a multiple of 0.5, so the comparisons are exact in floats.
    """
    n = len(ranks)
    n2 = n - n1
    center = n1 * n2 / 2.0
    offset = n1 * (n1 + 1) / 2.0
    observed_deviation = abs(u_observed - center)
    extreme = 0
    total = 0
    for chosen in combinations(range(n), n1):
        u = sum(ranks[i] for i in chosen) - offset
        if abs(u - center) >= observed_deviation:
            extreme += 1
        total += 1
    return extreme / total


def _tie_correction(ranks: list[float]) -> float:
    n = len(ranks)
    if n < 2:
        return 1.0
    tie_sum = 0
    for _, run in groupby(sorted(ranks)):
        t = len(list(run))
        tie_sum += t**3 - t
    return 1.0 - tie_sum / float(n**3 - n)


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))

def _normal_approx_p_value(ranks: list[float], n1: int, u_observed: float) -> float:
    n = len(ranks)
    n2 = n - n1
    center = n1 * n2 / 2.0
    correction = _tie_correction(ranks)
    if correction <= 0.0:
        return 1.0
    sd = math.sqrt(correction * n1 * n2 * (n + 1) / 12.0)
    if sd == 0.0:
        return 1.0
    z = (abs(u_observed - center) - 0.5) / sd
    if z < 0.0:
        z = 0.0
    return min(1.0, 2.0 * _normal_sf(z))


def mann_whitney(
    a: GroupSample, b: GroupSample, alpha: float = DEFAULT_ALPHA
) -> ComparisonResult:
    """Two-sided Mann-Whitney U test of samples a and b.

    The reported statistic is U for the first sample. Cohen's d is included
    when both samples have at least two values and spread; otherwise it is
    left unset.
    """
    n1 = len(a.values)
    n2 = len(b.values)
    pooled = list(a.values) + list(b.values)
    ranks = midranks(pooled)
    u_a = _u_from_ranks(ranks, n1)

    if n1 + n2 <= EXACT_THRESHOLD:
        p_value = _exact_p_value(ranks, n1, u_a)
        method = METHOD_EXACT
    else:
        p_value = _normal_approx_p_value(ranks, n1, u_a)
        method = METHOD_NORMAL

    try:
        d = cohens_d(a, b)
    except (DegenerateSampleError, ZeroPooledVarianceError):
        d = None

    return ComparisonResult(
        u_statistic=u_a,
        p_value=p_value,
        method=method,
        alpha=alpha,
        reject_null=p_value < alpha,
        cohens_d=d,
    )


def cohens_d(a: GroupSample, b: GroupSample) -> float:
    """Standardized mean difference with the pooled sample (n-1) SD."""
    n1 = len(a.values)
    n2 = len(b.values)
    if n1 < 2 or n2 < 2:
        raise DegenerateSampleError(
            "Cohen's d needs at least two values per sample "
            f"(got {n1} and {n2})"
        )
    s1_sq = variance(a.values)
    s2_sq = variance(b.values)
    pooled_sq = ((n1 - 1) * s1_sq + (n2 - 1) * s2_sq) / (n1 + n2 - 2)
    if pooled_sq == 0.0:
        raise ZeroPooledVarianceError(
            "both samples are constant; Cohen's d is undefined"
        )
    return (mean(a.values) - mean(b.values)) / math.sqrt(pooled_sq)


def hedges_g(a: GroupSample, b: GroupSample) -> float:
    """Cohen's d with the small-sample bias correction factor applied."""
    d = cohens_d(a, b)
    n = len(a.values) + len(b.values)
    return d * (1.0 - 3.0 / (4.0 * n - 9.0))


METRICS = ("effectiveness", "efficiency")


def compare_trials(
    scores_by_trial: dict[str, list[dict]],
    alpha: float = DEFAULT_ALPHA,
    drop_outliers: bool = False,
    outlier_threshold: float = 0.10,
) -> dict:
    """Per-trial two-group comparison of effectiveness and efficiency.

    ``scores_by_trial`` maps a trial name to records with ``group``,
    ``inspector``, ``effectiveness`` and ``efficiency`` fields. Exactly two
    groups must appear per trial, in any order; the first-seen group is the
    first sample (its U and the sign of d refer to it). With
    ``drop_outliers`` set, inspectors whose effectiveness falls below the
    threshold are discarded from both metrics.
    """
    report: dict = {"alpha": alpha, "trials": {}}
    for trial, records in scores_by_trial.items():
        if drop_outliers:
            records = [r for r in records if r["effectiveness"] >= outlier_threshold]
        group_order: list[str] = []
        for record in records:
            if record["group"] not in group_order:
                group_order.append(record["group"])
        if len(group_order) != 2:
            raise ValueError(
                f"trial {trial!r} must have exactly two groups, "
                f"found {len(group_order)}"
            )
        trial_report: dict = {"groups": group_order, "metrics": {}}
        for metric in METRICS:
            samples = [
                GroupSample.of(
                    label,
                    [r[metric] for r in records if r["group"] == label],
                )
                for label in group_order
            ]
            result = mann_whitney(samples[0], samples[1], alpha=alpha)
            corrected = None
            if result.cohens_d is not None:
                corrected = hedges_g(samples[0], samples[1])
            trial_report["metrics"][metric] = {
                **result.to_dict(),
                "cohens_d_corrected": corrected,
                "medians": {
                    sample.label: median(sample.values) for sample in samples
                },
                "sizes": {sample.label: len(sample.values) for sample in samples},
            }
        report["trials"][trial] = trial_report
    return report


def render_comparison_table(report: dict) -> str:
    """Fixed-width text table of a compare_trials report."""
    lines = []
    header = (
        f"{'trial':<12} {'metric':<14} {'median A':>10} {'median B':>10} "
        f"{'U':>8} {'p-value':>10} {'method':<13} {'reject':>6} {'d':>8}"
    )
    lines.append(header)
    lines.append("-" * len(header))
    for trial, trial_report in report["trials"].items():
        label_a, label_b = trial_report["groups"]
        for metric, stats in trial_report["metrics"].items():
            medians = stats["medians"]
            d = stats["cohens_d"]
            lines.append(
                f"{trial:<12} {metric:<14} {medians[label_a]:>10.3f} "
                f"{medians[label_b]:>10.3f} {stats['u_statistic']:>8.1f} "
                f"{stats['p_value']:>10.4f} {stats['method']:<13} "
                f"{str(stats['reject_null']):>6} "
                f"{d if d is not None else float('nan'):>8.2f}"
            )
    lines.append("")
    lines.append(f"alpha = {report['alpha']}; groups: A = first-listed, B = second")
    return "\n".join(lines)
