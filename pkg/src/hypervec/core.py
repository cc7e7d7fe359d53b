"""Elementary hypervector algebra: generate, bundle, bind, permute.

Three element domains are supported:

* binary  -- {0, 1}, stored as uint8; bind is XOR, bundle is majority vote
* bipolar -- {-1, 0, +1}, stored as int8; 0 appears only as a tie marker
  produced by bundling and is rejected by bind
* real    -- finite float64; bind is element-wise product

Bundling is staged through an :class:`Accumulator` holding exact counts, so
the majority decision is taken once, after all inputs are added, and the
result is independent of input order (exact integer arithmetic for binary
and bipolar inputs).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainMismatch,
    EmptyBundle,
    ZeroElementBipolar,
    ZeroNorm,
)

DEFAULT_DIM = 10_000

# Atomic norm tolerance for real-domain vectors produced by generation or
# normalization.
NORM_RTOL = 1e-6


class Domain(enum.Enum):
    BINARY = "binary"
    BIPOLAR = "bipolar"
    REAL = "real"


_DTYPES = {
    Domain.BINARY: np.uint8,
    Domain.BIPOLAR: np.int8,
    Domain.REAL: np.float64,
}


def dtype_of(domain: Domain) -> type:
    """Storage dtype for a domain (uint8 / int8 / float64)."""
    return _DTYPES[domain]


@dataclass(frozen=True)
class Hypervector:
    """An immutable fixed-dimension vector in one element domain.

    Construction validates domain containment; the backing array is made
    read-only so instances are safe to share across threads.
    """

    data: np.ndarray
    domain: Domain

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=_DTYPES[self.domain])
        if arr.ndim != 1 or arr.size == 0:
            raise DimensionMismatch("hypervector must be a nonempty 1-D vector")
        if self.domain is Domain.BINARY:
            if arr.max(initial=0) > 1:
                raise DomainMismatch("binary elements must be 0 or 1")
        elif self.domain is Domain.BIPOLAR:
            if np.any(np.abs(arr.astype(np.int16)) > 1):
                raise DomainMismatch("bipolar elements must be -1, 0 or +1")
        else:
            if not np.all(np.isfinite(arr)):
                raise DomainMismatch("real elements must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypervector):
            return NotImplemented
        return self.domain is other.domain and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.domain, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"Hypervector(dim={self.dim}, domain={self.domain.value})"


class TieRule:
    """How bundling resolves elements with an exact vote tie."""


@dataclass(frozen=True)
class ZeroTernary(TieRule):
    """Keep ties as 0, upgrading bipolar outputs to ternary vectors.

    Not available for binary outputs (0 is a regular binary value).
    """


@dataclass(frozen=True)
class SeededRandom(TieRule):
    """Resolve each tied element with a deterministic coin derived from
    (seed, element index), so repeated runs agree bit for bit."""

    seed: int = 0


def _check_same_shape(u: Hypervector, v: Hypervector) -> None:
    if u.dim != v.dim:
        raise DimensionMismatch(f"dim {u.dim} vs {v.dim}")
    if u.domain is not v.domain:
        raise DomainMismatch(f"{u.domain.value} vs {v.domain.value}")


def random_hv(dim: int, domain: Domain, rng: np.random.Generator) -> Hypervector:
    """Draw a fresh atomic hypervector.

    Binary elements are fair Bernoulli draws, bipolar are Rademacher
    (+1/-1), and real vectors are standard normal rescaled to the atomic
    norm sqrt(dim).
    """
    if domain is Domain.BINARY:
        return Hypervector(rng.integers(0, 2, dim, dtype=np.uint8), domain)
    if domain is Domain.BIPOLAR:
        vals = rng.integers(0, 2, dim, dtype=np.int8)
        return Hypervector((2 * vals - 1).astype(np.int8), domain)
    vals = rng.standard_normal(dim)
    return Hypervector(_rescale_to_atomic_norm(vals), Domain.REAL)


def _rescale_to_atomic_norm(vals: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vals))
    if norm == 0.0:
        raise ZeroNorm("cannot rescale an all-zero vector to the atomic norm")
    return vals * (math.sqrt(vals.shape[0]) / norm)


@dataclass
class Accumulator:
    """Exact element-wise sums of added hypervectors.

    Counts are int64 for binary/bipolar inputs (commutative, associative,
    order-independent) and float64 for real inputs. Merging accumulators is
    plain count addition, which is how parallel bundling stays equal to
    sequential bundling.
    """

    dim: int
    domain: Domain
    counts: np.ndarray = field(init=False)
    items_added: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        dtype = np.float64 if self.domain is Domain.REAL else np.int64
        self.counts = np.zeros(self.dim, dtype=dtype)

    def add(self, hv: Hypervector) -> "Accumulator":
        if hv.dim != self.dim:
            raise DimensionMismatch(f"dim {hv.dim} vs accumulator dim {self.dim}")
        if hv.domain is not self.domain:
            raise DomainMismatch(f"{hv.domain.value} vs accumulator {self.domain.value}")
        self.counts += hv.data
        self.items_added += 1
        return self

    def merge(self, other: "Accumulator") -> "Accumulator":
        if other.dim != self.dim:
            raise DimensionMismatch(f"dim {other.dim} vs {self.dim}")
        if other.domain is not self.domain:
            raise DomainMismatch(f"{other.domain.value} vs {self.domain.value}")
        self.counts += other.counts
        self.items_added += other.items_added
        return self


def accumulate(hvs, dim: int | None = None, domain: Domain | None = None) -> Accumulator:
    """Build an accumulator from an iterable of hypervectors."""
    acc = None
    for hv in hvs:
        if acc is None:
            acc = Accumulator(dim if dim is not None else hv.dim,
                              domain if domain is not None else hv.domain)
        acc.add(hv)
    if acc is None:
        if dim is None or domain is None:
            raise EmptyBundle("no hypervectors to accumulate")
        acc = Accumulator(dim, domain)
    return acc


def _tie_coin(rule: SeededRandom, dim: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(rule.seed))
    return rng.integers(0, 2, dim, dtype=np.uint8)


def bundle(
    acc: Accumulator,
    tie_rule: TieRule | None = None,
    real_norm: str = "match_atomic",
) -> Hypervector:
    """Normalize an accumulator into a hypervector of its domain.

    Binary: element-wise majority; exact vote ties go to the tie rule
    (binary has no neutral element, so ``SeededRandom`` is required and is
    the default). Bipolar: sign of counts; ties become 0 under
    ``ZeroTernary`` (default) or a seeded coin. Real: counts are rescaled,
    either to the atomic norm sqrt(dim) (``match_atomic``, default) or by
    1/sqrt(n) (``inv_sqrt_n``).
    """
    if acc.items_added < 1:
        raise EmptyBundle("bundle of an empty accumulator")

    if acc.domain is Domain.REAL:
        if real_norm == "match_atomic":
            return Hypervector(_rescale_to_atomic_norm(acc.counts.copy()), Domain.REAL)
        if real_norm == "inv_sqrt_n":
            return Hypervector(acc.counts / math.sqrt(acc.items_added), Domain.REAL)
        raise ValueError(f"unknown real_norm {real_norm!r}")

    if acc.domain is Domain.BINARY:
        if tie_rule is None:
            tie_rule = SeededRandom(0)
        if not isinstance(tie_rule, SeededRandom):
            raise DomainMismatch("binary bundling has no neutral element; use SeededRandom")
        n = acc.items_added
        out = (2 * acc.counts > n).astype(np.uint8)
        ties = 2 * acc.counts == n
        if ties.any():
            out[ties] = _tie_coin(tie_rule, acc.dim)[ties]
        return Hypervector(out, Domain.BINARY)

    # bipolar
    if tie_rule is None:
        tie_rule = ZeroTernary()
    out = np.sign(acc.counts).astype(np.int8)
    if isinstance(tie_rule, SeededRandom):
        ties = acc.counts == 0
        if ties.any():
            coin = _tie_coin(tie_rule, acc.dim).astype(np.int8)
            out[ties] = (2 * coin - 1)[ties]
    elif not isinstance(tie_rule, ZeroTernary):
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    return Hypervector(out, Domain.BIPOLAR)


def bundle_hvs(hvs, tie_rule: TieRule | None = None, real_norm: str = "match_atomic") -> Hypervector:
    """Accumulate and normalize in one call."""
    return bundle(accumulate(hvs), tie_rule=tie_rule, real_norm=real_norm)


def _reject_bipolar_zeros(*hvs: Hypervector) -> None:
    for hv in hvs:
        if hv.domain is Domain.BIPOLAR and np.any(hv.data == 0):
            raise ZeroElementBipolar("bipolar bind requires vectors without 0 elements")


def bind(u: Hypervector, v: Hypervector) -> Hypervector:
    """Associate two hypervectors; the result is dissimilar to both.

    XOR for binary, element-wise product for bipolar and real. Commutative,
    and self-inverse in the binary/bipolar domains.
    """
    _check_same_shape(u, v)
    if u.domain is Domain.BINARY:
        return Hypervector(u.data ^ v.data, Domain.BINARY)
    if u.domain is Domain.BIPOLAR:
        _reject_bipolar_zeros(u, v)
        return Hypervector(u.data * v.data, Domain.BIPOLAR)
    return Hypervector(u.data * v.data, Domain.REAL)


def unbind(u: Hypervector, w: Hypervector) -> Hypervector:
    """Release the information bound with ``u`` from composite ``w``.

    Identical to :func:`bind` for binary and bipolar (XOR and +/-1 product
    are self-inverse). Real vectors unbind by element-wise division, the
    exact inverse for any nonzero elements.
    """
    _check_same_shape(u, w)
    if u.domain is Domain.REAL:
        if np.any(u.data == 0.0):
            raise ZeroNorm("real unbind requires a key without zero elements")
        return Hypervector(w.data / u.data, Domain.REAL)
    return bind(u, w)


def permute(v: Hypervector, i: int) -> Hypervector:
    """Circular shift by ``i`` positions (``i`` may be negative or > dim).

    ``permute(permute(v, i), -i) == v`` exactly, and a common shift
    distributes over bind and over accumulator addition.
    """
    i %= v.dim
    if i == 0:
        return v
    return Hypervector(np.roll(v.data, i), v.domain)
