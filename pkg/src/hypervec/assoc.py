"""Cleanup (associative) memory: labelled hypervectors with noise-robust
nearest-neighbor recovery.

Queries are exact: whatever acceleration the memory builds internally, the
ranked result is identical to brute-force :func:`hypervec.similarity.top_k`
over all entries. Binary queries use a packed-bit popcount path (same
integer counts, so bit-for-bit the same values); cosine queries simply run
the brute-force scan.
"""

from __future__ import annotations

import threading

import numpy as np

from .core import Domain, Hypervector
from .errors import DimensionMismatch, DomainMismatch, DuplicateLabel, EmptyMemory
from .similarity import Metric, SimilarityReport, baseline, default_metric, top_k


class AssocMemory:
    """Append-only store of (label, hypervector) with top-k retrieval."""

    def __init__(self, dim: int | None = None, domain: Domain | None = None):
        self.dim = dim
        self.domain = domain
        self._entries: list[tuple[str, Hypervector]] = []
        self._labels: set[str] = set()
        self._lock = threading.Lock()
        self._packed: np.ndarray | None = None  # acceleration only
        self._packed_len = 0

    def __len__(self) -> int:
        return len(self._entries)

    def labels(self) -> list[str]:
        return [label for label, _ in self._entries]

    def store(self, label: str, hv: Hypervector) -> "AssocMemory":
        with self._lock:
            if label in self._labels:
                raise DuplicateLabel(f"label {label!r} already stored")
            if self.dim is None:
                self.dim, self.domain = hv.dim, hv.domain
            if hv.dim != self.dim:
                raise DimensionMismatch(f"dim {hv.dim} vs memory dim {self.dim}")
            if hv.domain is not self.domain:
                raise DomainMismatch(f"{hv.domain.value} vs memory "
                                     f"{self.domain.value}")
            self._labels.add(label)
            self._entries.append((label, hv))
        return self

    def _snapshot(self) -> list[tuple[str, Hypervector]]:
        with self._lock:
            return list(self._entries)

    def _packed_matrix(self, entries) -> np.ndarray:
        # Packed-bit cache for binary entries; rebuilt when entries grow.
        if self._packed is None or self._packed_len != len(entries):
            bits = np.stack([hv.data for _, hv in entries])
            self._packed = np.packbits(bits, axis=1)
            self._packed_len = len(entries)
        return self._packed

    def query(self, hv: Hypervector, k: int, metric=None,
              use_index: bool = True) -> list[tuple[str, SimilarityReport]]:
        """Top-k entries by similarity; results match brute-force exactly."""
        if k < 1:
            raise ValueError("k must be >= 1")
        entries = self._snapshot()
        if not entries:
            raise EmptyMemory("query on an empty memory")
        if metric is None:
            metric = default_metric(self.domain)
        if (use_index and metric is Metric.HAMMING
                and self.domain is Domain.BINARY and hv.dim == self.dim):
            return self._query_hamming_packed(hv, entries, k)
        return top_k(hv, entries, k, metric)

    def _query_hamming_packed(self, hv: Hypervector, entries, k: int):
        if hv.dim != self.dim:
            raise DimensionMismatch(f"dim {hv.dim} vs memory dim {self.dim}")
        matrix = self._packed_matrix(entries)
        q = np.packbits(hv.data)
        distances = np.bitwise_count(matrix ^ q).sum(axis=1, dtype=np.int64)
        # Value = 1 - dist/dim is strictly decreasing in distance, so ranking
        # by (distance, label) matches top_k's (-value, label) exactly.
        # Sort distances in numpy, then label-break ties only within the
        # group that can still reach rank k.
        order = np.argsort(distances, kind="stable")
        k = min(k, len(entries))
        kth_dist = int(distances[order[k - 1]])
        cut = int(np.searchsorted(distances[order], kth_dist, side="right"))
        head = sorted(((int(distances[i]), entries[i][0]) for i in order[:cut]))
        mean, sd = baseline(Metric.HAMMING, self.dim)
        out = []
        for dist, label in head[:k]:
            value = float(self.dim - dist) / self.dim
            out.append((label, SimilarityReport(
                value=value, metric=Metric.HAMMING, baseline_mean=mean,
                baseline_sd=sd, z_score=(value - mean) / sd)))
        return out

    # -- bulk I/O (same container format as model payloads) -------------

    def export_entries(self) -> list[tuple[str, Hypervector]]:
        return self._snapshot()

    @classmethod
    def from_entries(cls, entries) -> "AssocMemory":
        mem = cls()
        for label, hv in entries:
            mem.store(label, hv)
        return mem
