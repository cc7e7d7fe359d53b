"""Encoders for composite objects: sequences, records, sets, numeric
vectors, and graphs.

Sequence encoding supports three modes:

* bundled-positional: accumulate shift-tagged symbol vectors,
  ``[rho^0(v_1) + rho^1(v_2) + ...]``, one normalization at the end;
* bound-positional: bind the shift-tagged vectors,
  ``rho^0(v_1) o rho^1(v_2) o ...``;
* n-gram (k-mer): bind each length-n window with shifts relative to the
  window start, then bundle all windows.

All three accumulate contributions in ascending position/window order, so
encoder outputs are bit-identical to composing the same formula from the
core operations by hand -- including the real domain, where float addition
order matters.

A sequence element may be ``None`` to mark a masked position (e.g. an
ambiguous residue under the "skip" policy): masked positions contribute
nothing, keep their position index, and invalidate any n-gram window that
touches them.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Accumulator,
    Domain,
    Hypervector,
    SeededRandom,
    TieRule,
    accumulate,
    bind,
    bundle,
    dtype_of,
    permute,
    unbind,
    _rescale_to_atomic_norm,
)
from .errors import (
    DimensionMismatch,
    EmptyEdgeList,
    EmptyRecord,
    EmptySequence,
    EmptySet,
    NonFiniteInput,
    SelfLoopUnsupported,
    SequenceShorterThanN,
    UnknownEndpoint,
    UnknownSymbol,
    ZeroNorm,
)
from .item_memory import ItemMemory, derive_seed
from .similarity import DEFAULT_Z_THRESHOLD, SimilarityReport, similarity, top_k


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

class SeqMode(enum.Enum):
    BUNDLED = "bundled"
    BOUND = "bound"
    NGRAM = "ngram"


@dataclass
class SequenceEncoderConfig:
    """How to turn a symbol sequence into one hypervector."""

    memory: ItemMemory
    mode: SeqMode = SeqMode.NGRAM
    n: int = 1
    alphabet: tuple[str, ...] | None = None
    tie_rule: TieRule | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.alphabet is not None:
            self.alphabet = tuple(self.alphabet)

    def effective_tie_rule(self) -> TieRule | None:
        if self.tie_rule is not None:
            return self.tie_rule
        if self.memory.domain is Domain.BINARY:
            return SeededRandom(derive_seed(self.memory.global_seed, "sequence-tie"))
        return None  # bipolar defaults to ZeroTernary inside bundle()


def _symbol_rows(cfg: SequenceEncoderConfig, seq) -> tuple[np.ndarray, np.ndarray]:
    """(L x dim) matrix of atomic vectors plus a mask of concrete positions."""
    allowed = set(cfg.alphabet) if cfg.alphabet is not None else None
    mem = cfg.memory
    cache: dict[str, np.ndarray] = {}
    rows = np.empty((len(seq), mem.dim), dtype=dtype_of(mem.domain))
    mask = np.zeros(len(seq), dtype=bool)
    for i, sym in enumerate(seq):
        if sym is None:
            continue
        if allowed is not None and sym not in allowed:
            raise UnknownSymbol(f"symbol {sym!r} at position {i} not in alphabet")
        row = cache.get(sym)
        if row is None:
            row = cache[sym] = mem.get_symbol(sym).data
        rows[i] = row
        mask[i] = True
    return rows, mask


def sequence_accumulator(cfg: SequenceEncoderConfig, seq) -> Accumulator:
    """Pre-normalization accumulator for bundled and n-gram modes.

    Exposed separately so callers (and tests) can inspect exact counts,
    merge partial accumulators, or bundle once at the end.
    """
    seq = list(seq)
    if not seq:
        raise EmptySequence("cannot encode an empty sequence")
    mem = cfg.memory
    acc = Accumulator(mem.dim, mem.domain)

    if cfg.mode is SeqMode.BUNDLED:
        rows, mask = _symbol_rows(cfg, seq)
        if not mask.any():
            raise EmptySequence("sequence has no encodable symbols")
        for i in np.flatnonzero(mask):
            acc.counts += np.roll(rows[i], i % mem.dim)
            acc.items_added += 1
        return acc

    if cfg.mode is not SeqMode.NGRAM:
        raise ValueError("sequence_accumulator applies to bundled and ngram modes")

    if len(seq) < cfg.n:
        raise SequenceShorterThanN(f"length {len(seq)} < n={cfg.n}")
    rows, mask = _symbol_rows(cfg, seq)
    n = cfg.n
    w = len(seq) - n + 1
    # window j is valid when all n of its positions are concrete
    valid = np.ones(w, dtype=bool)
    for t in range(n):
        valid &= mask[t:t + w]
    if not valid.any():
        raise EmptySequence("no n-gram window free of masked symbols")

    grams = rows[0:w].copy()
    if mem.domain is Domain.BINARY:
        for t in range(1, n):
            grams ^= np.roll(rows[t:t + w], t % mem.dim, axis=1)
        acc.counts += grams[valid].sum(axis=0, dtype=np.int64)
    elif mem.domain is Domain.BIPOLAR:
        for t in range(1, n):
            grams *= np.roll(rows[t:t + w], t % mem.dim, axis=1)
        acc.counts += grams[valid].sum(axis=0, dtype=np.int64)
    else:
        for t in range(1, n):
            grams *= np.roll(rows[t:t + w], t % mem.dim, axis=1)
        for j in np.flatnonzero(valid):  # ascending order: float sums stay
            acc.counts += grams[j]       # identical to manual composition
    acc.items_added += int(valid.sum())
    return acc


def encode_sequence(cfg: SequenceEncoderConfig, seq) -> Hypervector:
    """Encode a symbol sequence per the configured mode."""
    seq = list(seq)
    if not seq:
        raise EmptySequence("cannot encode an empty sequence")

    if cfg.mode is SeqMode.BOUND:
        rows, mask = _symbol_rows(cfg, seq)
        concrete = np.flatnonzero(mask)
        if concrete.size == 0:
            raise EmptySequence("sequence has no encodable symbols")
        mem = cfg.memory
        out = np.roll(rows[concrete[0]], int(concrete[0]) % mem.dim)
        if mem.domain is Domain.BINARY:
            for i in concrete[1:]:
                out = out ^ np.roll(rows[i], int(i) % mem.dim)
        else:
            out = out.copy()
            for i in concrete[1:]:
                out = out * np.roll(rows[i], int(i) % mem.dim)
        return Hypervector(out, mem.domain)

    acc = sequence_accumulator(cfg, seq)
    return bundle(acc, tie_rule=cfg.effective_tie_rule())


# ---------------------------------------------------------------------------
# records (key-value) and sets
# ---------------------------------------------------------------------------

def encode_record(pairs, tie_rule: TieRule | None = None,
                  check_keys: bool = True) -> Hypervector:
    """Bundle of bound key-value pairs.

    Keys should be pairwise quasi-orthogonal; with ``check_keys`` a warning
    is emitted when any two keys are significantly similar (|z| >= 4), since
    correlated keys leak each other's values on query.
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptyRecord("record needs at least one key-value pair")
    if check_keys and len(pairs) > 1:
        keys = [k for k, _ in pairs]
        for i in range(len(keys)):
            for j in range(i + 1, len(keys)):
                rep = similarity(keys[i], keys[j])
                if abs(rep.z_score) >= DEFAULT_Z_THRESHOLD:
                    warnings.warn(
                        f"record keys {i} and {j} are not quasi-orthogonal "
                        f"(|z|={abs(rep.z_score):.1f})",
                        stacklevel=2,
                    )
                    break
    return bundle(accumulate(bind(k, v) for k, v in pairs), tie_rule=tie_rule)


def query_record(record: Hypervector, key: Hypervector, cleanup,
                 metric=None) -> tuple[str, SimilarityReport]:
    """Recover the value bound to ``key`` by unbinding and cleanup lookup.

    Returns the best cleanup match with its report; check the z-score to
    reject low-confidence retrievals (e.g. a key absent from the record).
    """
    noisy = unbind(key, record)
    return top_k(noisy, cleanup, 1, metric)[0]


def encode_set(items, tie_rule: TieRule | None = None) -> Hypervector:
    """Bundle a collection into a Bloom-filter-like membership sketch."""
    items = list(items)
    if not items:
        raise EmptySet("cannot encode an empty set")
    return bundle(accumulate(items), tie_rule=tie_rule)


def set_contains(set_hv: Hypervector, item: Hypervector,
                 threshold_z: float = DEFAULT_Z_THRESHOLD, metric=None) -> bool:
    """Probabilistic membership test: one-sided z-score above threshold.

    Members are detected with high probability; false positives follow the
    Gaussian tail of the baseline and grow with set size.
    """
    return similarity(set_hv, item, metric).z_score > threshold_z


# ---------------------------------------------------------------------------
# numeric vectors via random projection
# ---------------------------------------------------------------------------

class Distribution(enum.Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    SPARSE_TERNARY = "sparse_ternary"


class PostProcess(enum.Enum):
    NONE = "none"
    THRESHOLD = "threshold"
    NORMALIZE = "normalize"


@dataclass
class ProjectionConfig:
    """Random projection ``v = S x`` with a seeded, reproducible matrix."""

    in_dim: int
    dim: int
    distribution: Distribution = Distribution.GAUSSIAN
    seed: int = 0
    post: PostProcess = PostProcess.NONE
    density: float | None = None  # sparse ternary fill; default 1/sqrt(in_dim)
    threshold_domain: Domain = Domain.BIPOLAR
    _matrix: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.in_dim < 1 or self.dim < 1:
            raise ValueError("in_dim and dim must be positive")
        if self.density is not None and not 0.0 < self.density <= 1.0:
            raise ValueError("density must be in (0, 1]")
        if self.threshold_domain is Domain.REAL:
            raise ValueError("threshold output must be binary or bipolar")

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            rng = np.random.Generator(np.random.PCG64(
                derive_seed("projection", self.seed, self.in_dim, self.dim,
                            self.distribution.value, self.density)))
            if self.distribution is Distribution.GAUSSIAN:
                s = rng.standard_normal((self.dim, self.in_dim))
            elif self.distribution is Distribution.RADEMACHER:
                s = 2.0 * rng.integers(0, 2, (self.dim, self.in_dim)) - 1.0
            else:
                density = self.density if self.density is not None \
                    else 1.0 / math.sqrt(self.in_dim)
                u = rng.random((self.dim, self.in_dim))
                s = np.zeros((self.dim, self.in_dim))
                s[u < density / 2] = 1.0
                s[u > 1.0 - density / 2] = -1.0
            self._matrix = s
        return self._matrix


def project_vector(cfg: ProjectionConfig, x) -> Hypervector:
    """Project a numeric vector into the hyperdimensional space."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != cfg.in_dim:
        raise DimensionMismatch(f"expected length {cfg.in_dim}, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("projection input must be finite")
    v = cfg.matrix @ x
    if cfg.post is PostProcess.NONE:
        return Hypervector(v, Domain.REAL)
    if cfg.post is PostProcess.THRESHOLD:
        if cfg.threshold_domain is Domain.BINARY:
            return Hypervector((v > 0).astype(np.uint8), Domain.BINARY)
        return Hypervector(np.where(v >= 0, 1, -1).astype(np.int8), Domain.BIPOLAR)
    if float(np.linalg.norm(v)) == 0.0:
        raise ZeroNorm("cannot normalize the projection of a zero vector")
    return Hypervector(_rescale_to_atomic_norm(v), Domain.REAL)


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphEncoderConfig:
    directed: bool = False
    direction_shift: int = 1

    def __post_init__(self) -> None:
        if self.directed and self.direction_shift == 0:
            raise ValueError("direction_shift must be nonzero for directed graphs")


def encode_graph(cfg: GraphEncoderConfig, nodes, edges,
                 tie_rule: TieRule | None = None) -> Hypervector:
    """Bundle of edge vectors.

    Undirected edges bind the two node vectors (orientation-free by
    commutativity); directed edges shift the destination first, so (a, b)
    and (b, a) encode differently. Isolated nodes contribute nothing.
    """
    node_map = dict(nodes)
    edges = list(edges)
    if not edges:
        raise EmptyEdgeList("graph encoding needs at least one edge")
    acc = None
    for src, dst in edges:
        if src not in node_map:
            raise UnknownEndpoint(f"edge endpoint {src!r} has no node vector")
        if dst not in node_map:
            raise UnknownEndpoint(f"edge endpoint {dst!r} has no node vector")
        a, b = node_map[src], node_map[dst]
        if src == dst and a.domain is not Domain.REAL:
            raise SelfLoopUnsupported(
                f"self-loop on {src!r}: XOR/product self-binding degenerates")
        if cfg.directed:
            edge_hv = bind(a, permute(b, cfg.direction_shift))
        else:
            edge_hv = bind(a, b)
        if acc is None:
            acc = Accumulator(edge_hv.dim, edge_hv.domain)
        acc.add(edge_hv)
    return bundle(acc, tie_rule=tie_rule)
