"""Similarity metrics with random-pair baselines and z-scores.

Each comparison returns a :class:`SimilarityReport` carrying the metric
value together with the analytic mean and standard deviation the metric
takes on two independently generated vectors of the same dimension. The
z-score turns "are these related?" into a significance test; by convention
|z| > 4 is treated as significant (callers can pick their own threshold).

Baselines for i.i.d. fair-coin vectors of dimension ``n``:

* Hamming: mean 1/2, sd sqrt(1/(4n))
* Jaccard: mean 1/3; no closed form for the sd, we use a delta-method
  approximation around the multinomial element counts, sd = sqrt(8/(27n))
* Cosine (bipolar): mean 0, sd sqrt(1/n)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Domain, Hypervector
from .errors import (
    BothAllZero,
    DimensionMismatch,
    EmptyCandidates,
    WrongDomainForMetric,
    ZeroNorm,
)

DEFAULT_Z_THRESHOLD = 4.0


class Metric(enum.Enum):
    HAMMING = "hamming"
    JACCARD = "jaccard"
    COSINE = "cosine"


@dataclass(frozen=True)
class SimilarityReport:
    value: float
    metric: Metric
    baseline_mean: float
    baseline_sd: float
    z_score: float

    def is_significant(self, threshold: float = DEFAULT_Z_THRESHOLD) -> bool:
        return abs(self.z_score) > threshold


def default_metric(domain: Domain) -> Metric:
    """Hamming for binary vectors, cosine otherwise."""
    return Metric.HAMMING if domain is Domain.BINARY else Metric.COSINE


def baseline(metric: Metric, dim: int) -> tuple[float, float]:
    """(mean, sd) of the metric on two independent random vectors."""
    if metric is Metric.HAMMING:
        return 0.5, math.sqrt(0.25 / dim)
    if metric is Metric.JACCARD:
        return 1.0 / 3.0, math.sqrt(8.0 / (27.0 * dim))
    return 0.0, 1.0 / math.sqrt(dim)


def _as_metric(metric) -> Metric:
    return metric if isinstance(metric, Metric) else Metric(str(metric).lower())


def similarity(u: Hypervector, v: Hypervector, metric=None) -> SimilarityReport:
    """Compare two hypervectors under the given (or domain-default) metric."""
    if u.dim != v.dim:
        raise DimensionMismatch(f"dim {u.dim} vs {v.dim}")
    metric = default_metric(u.domain) if metric is None else _as_metric(metric)

    if metric in (Metric.HAMMING, Metric.JACCARD):
        if u.domain is not Domain.BINARY or v.domain is not Domain.BINARY:
            raise WrongDomainForMetric(f"{metric.value} requires binary vectors")
        if metric is Metric.HAMMING:
            value = float(np.count_nonzero(u.data == v.data)) / u.dim
        else:
            inter = int(np.count_nonzero(u.data & v.data))
            union = int(np.count_nonzero(u.data | v.data))
            if union == 0:
                raise BothAllZero("jaccard of two all-zero vectors is undefined")
            value = inter / union
    else:
        if u.domain is Domain.BINARY or v.domain is Domain.BINARY:
            raise WrongDomainForMetric("cosine requires bipolar or real vectors")
        nu = float(np.linalg.norm(u.data.astype(np.float64)))
        nv = float(np.linalg.norm(v.data.astype(np.float64)))
        if nu == 0.0 or nv == 0.0:
            raise ZeroNorm("cosine of a zero-norm vector is undefined")
        value = float(np.dot(u.data.astype(np.float64), v.data.astype(np.float64)) / (nu * nv))

    mean, sd = baseline(metric, u.dim)
    return SimilarityReport(
        value=value,
        metric=metric,
        baseline_mean=mean,
        baseline_sd=sd,
        z_score=(value - mean) / sd,
    )


def top_k(
    query: Hypervector,
    candidates,
    k: int,
    metric=None,
) -> list[tuple[str, SimilarityReport]]:
    """Rank labelled candidates by similarity to the query.

    Descending by value; exact value ties break lexicographically by label
    so rankings are deterministic. ``k`` larger than the candidate list
    returns everything, ranked.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    candidates = list(candidates)
    if not candidates:
        raise EmptyCandidates("no candidates to rank")
    scored = [(label, similarity(query, hv, metric)) for label, hv in candidates]
    scored.sort(key=lambda item: (-item[1].value, item[0]))
    return scored[:k]
