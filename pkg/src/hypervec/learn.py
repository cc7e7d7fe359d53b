"""Prototype classification: bundle per class, retrain on mistakes, predict
by similarity.

Prototypes live as real-valued count vectors, because the retraining
correction ``wrong -= alpha * v`` / ``right += alpha * v`` needs real
arithmetic even over bipolar encodings. Binary {0,1} encodings are centered
to +/-1 before entering the counts so that cosine behaves symmetrically;
bipolar and real encodings are used as-is. A normalized (norm sqrt(dim))
prototype is cached per class and always recomputable from the counts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import Domain, Hypervector
from .errors import (
    DimensionMismatch,
    DomainMismatch,
    EmptyClass,
    SingleClass,
    UnknownLabel,
)
from .item_memory import ItemMemory, derive_seed
from .similarity import Metric, SimilarityReport, baseline


class AlphaSchedule(enum.Enum):
    CONSTANT = "constant"
    INVERSE_EPOCH = "inverse_epoch"


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    alpha: float = 1.0
    alpha_schedule: AlphaSchedule = AlphaSchedule.CONSTANT
    shuffle_seed: int = 0
    early_stop_patience: int = 0  # 0 disables patience-based stopping

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.early_stop_patience < 0:
            raise ValueError("early_stop_patience must be >= 0")

    def alpha_at(self, epoch: int) -> float:
        if self.alpha_schedule is AlphaSchedule.INVERSE_EPOCH:
            return self.alpha / epoch
        return self.alpha


@dataclass
class Model:
    """Class prototypes plus everything needed to reproduce encodings."""

    dim: int
    domain: Domain
    class_counts: dict[str, np.ndarray]
    encoder_config: dict | None = None
    item_memory: ItemMemory | None = None
    training_meta: dict = field(default_factory=dict)
    _prototypes: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for label in self.class_counts:
            self._refresh(label)

    @property
    def labels(self) -> list[str]:
        return sorted(self.class_counts)

    def _refresh(self, label: str) -> None:
        counts = self.class_counts[label]
        norm = float(np.linalg.norm(counts))
        if norm == 0.0:
            self._prototypes[label] = counts.copy()
        else:
            self._prototypes[label] = counts * (math.sqrt(self.dim) / norm)

    def prototype(self, label: str) -> np.ndarray:
        """Cached normalized prototype (norm sqrt(dim))."""
        return self._prototypes[label]

    def copy(self) -> "Model":
        return Model(
            dim=self.dim,
            domain=self.domain,
            class_counts={lbl: c.copy() for lbl, c in self.class_counts.items()},
            encoder_config=dict(self.encoder_config) if self.encoder_config else None,
            item_memory=self.item_memory,
            training_meta=dict(self.training_meta),
        )


def as_learn_vector(hv: Hypervector, dim: int, domain: Domain) -> np.ndarray:
    """Float view of an example: binary is centered to +/-1."""
    if hv.dim != dim:
        raise DimensionMismatch(f"dim {hv.dim} vs model dim {dim}")
    if hv.domain is not domain:
        raise DomainMismatch(f"{hv.domain.value} vs model domain {domain.value}")
    if domain is Domain.BINARY:
        return 2.0 * hv.data.astype(np.float64) - 1.0
    return hv.data.astype(np.float64)


def train_oneshot(labeled, classes=None, encoder_config: dict | None = None,
                  item_memory: ItemMemory | None = None) -> Model:
    """Build one prototype per class by summing its members' vectors."""
    labeled = list(labeled)
    if classes is None:
        classes = sorted({label for _, label in labeled})
    else:
        classes = sorted(classes)
    if len(classes) < 2:
        raise SingleClass(f"need at least two classes, got {classes}")
    seen = {label for _, label in labeled}
    for cls in classes:
        if cls not in seen:
            raise EmptyClass(f"class {cls!r} has no training examples")
    for _, label in labeled:
        if label not in classes:
            raise UnknownLabel(f"example labelled {label!r} outside declared classes")

    first_hv = labeled[0][0]
    dim, domain = first_hv.dim, first_hv.domain
    counts = {cls: np.zeros(dim, dtype=np.float64) for cls in classes}
    for hv, label in labeled:
        counts[label] += as_learn_vector(hv, dim, domain)
    return Model(
        dim=dim,
        domain=domain,
        class_counts=counts,
        encoder_config=encoder_config,
        item_memory=item_memory,
        training_meta={"method": "oneshot", "examples": len(labeled)},
    )


def _rank(model: Model, vec: np.ndarray, metric: Metric) -> list[tuple[str, SimilarityReport]]:
    mean, sd = baseline(Metric.COSINE if metric is Metric.COSINE else Metric.HAMMING,
                        model.dim)
    reports = []
    if metric is Metric.COSINE:
        vnorm = float(np.linalg.norm(vec))
        for label in model.labels:
            proto = model.prototype(label)
            pnorm = float(np.linalg.norm(proto))
            value = 0.0 if vnorm == 0.0 or pnorm == 0.0 \
                else float(np.dot(vec, proto) / (vnorm * pnorm))
            reports.append((label, SimilarityReport(
                value=value, metric=Metric.COSINE, baseline_mean=mean,
                baseline_sd=sd, z_score=(value - mean) / sd)))
    else:
        # Hamming on sign-thresholded prototypes, available behind the flag.
        qbits = vec > 0
        for label in model.labels:
            pbits = model.class_counts[label] > 0
            value = float(np.count_nonzero(qbits == pbits)) / model.dim
            reports.append((label, SimilarityReport(
                value=value, metric=Metric.HAMMING, baseline_mean=mean,
                baseline_sd=sd, z_score=(value - mean) / sd)))
    reports.sort(key=lambda item: (-item[1].value, item[0]))
    return reports


def predict(model: Model, hv: Hypervector,
            metric: Metric = Metric.COSINE) -> tuple[str, list[tuple[str, SimilarityReport]]]:
    """Most-similar prototype, plus the full ranking for explainability."""
    vec = as_learn_vector(hv, model.dim, model.domain)
    ranking = _rank(model, vec, metric)
    return ranking[0][0], ranking


def retrain(model: Model, labeled, cfg: TrainConfig) -> tuple[Model, list[float]]:
    """Cycle through the training set, correcting prototypes on mistakes.

    A misclassification of ``v`` (true B, predicted A) applies
    ``counts_A -= alpha * v`` and ``counts_B += alpha * v`` immediately
    (online updates). Returns the retrained model and the per-epoch
    accuracy trace, where accuracy counts predictions made at visit time.
    Stops early on a perfect epoch, or after ``early_stop_patience``
    consecutive epochs without improvement (when patience > 0).
    """
    labeled = list(labeled)
    model = model.copy()
    for _, label in labeled:
        if label not in model.class_counts:
            raise UnknownLabel(f"label {label!r} not in model classes")
    vectors = [as_learn_vector(hv, model.dim, model.domain) for hv, _ in labeled]
    labels = [label for _, label in labeled]

    trace: list[float] = []
    best = -1.0
    stale = 0
    epochs_run = 0
    for epoch in range(1, cfg.epochs + 1):
        epochs_run = epoch
        alpha = cfg.alpha_at(epoch)
        order = np.random.Generator(np.random.PCG64(
            derive_seed("retrain", cfg.shuffle_seed, epoch))).permutation(len(labeled))
        correct = 0
        for idx in order:
            vec, truth = vectors[idx], labels[idx]
            predicted = _rank(model, vec, Metric.COSINE)[0][0]
            if predicted == truth:
                correct += 1
            else:
                model.class_counts[predicted] -= alpha * vec
                model.class_counts[truth] += alpha * vec
                model._refresh(predicted)
                model._refresh(truth)
        accuracy = correct / len(labeled) if labeled else 1.0
        trace.append(accuracy)
        if accuracy == 1.0:
            break
        if accuracy > best:
            best = accuracy
            stale = 0
        else:
            stale += 1
            if cfg.early_stop_patience and stale >= cfg.early_stop_patience:
                break

    model.training_meta = dict(model.training_meta)
    model.training_meta.update({
        "retrain_epochs_run": epochs_run,
        "alpha": cfg.alpha,
        "alpha_schedule": cfg.alpha_schedule.value,
        "shuffle_seed": cfg.shuffle_seed,
    })
    return model, trace
