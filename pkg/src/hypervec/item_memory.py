"""Deterministic codebook of atomic hypervectors.

Every entry is derived from a SHA-256 hash of (global_seed, dim, domain,
derivation), never from insertion order, so two memories built in different
orders -- or on different machines -- hold bit-identical vectors.

Besides plain random symbols the memory supports two structured
derivations:

* correlated symbols, which copy a fraction of a parent's elements so that
  semantic closeness shows up as similarity;
* level (bin) chains for scalar encoding, where each bin re-randomizes a
  fresh, disjoint slice of positions of the previous bin. Disjoint slices
  make similarity decay exactly monotonically with bin distance.
"""

from __future__ import annotations

import hashlib
import math
import threading
import warnings
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_DIM, Domain, Hypervector, random_hv
from .errors import DuplicateSymbol, OutOfRange, UnknownParent

LOW_DIM_WARNING = 1000


def derive_seed(*parts) -> int:
    """Collapse arbitrary parts into a stable 128-bit PCG64 seed."""
    text = "\x1f".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "little")


def _rng(*parts) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(*parts)))


@dataclass(frozen=True)
class LevelEncoderConfig:
    """Range discretization for scalar (level) encoding."""

    lo: float
    hi: float
    num_bins: int
    flip_fraction: float = 1.0
    clamp_out_of_range: bool = False

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("lo must be < hi")
        if self.num_bins < 2:
            raise ValueError("num_bins must be >= 2")
        if not 0.0 < self.flip_fraction <= 1.0:
            raise ValueError("flip_fraction must be in (0, 1]")

    def bin_of(self, x: float) -> int:
        if x < self.lo or x > self.hi:
            if not self.clamp_out_of_range:
                raise OutOfRange(f"{x} outside [{self.lo}, {self.hi}]")
            x = min(max(x, self.lo), self.hi)
        frac = (x - self.lo) / (self.hi - self.lo)
        return min(self.num_bins - 1, int(frac * self.num_bins))

    def step_size(self, dim: int) -> int:
        step = int(self.flip_fraction * dim / (self.num_bins - 1))
        if step < 1:
            raise ValueError(
                "flip_fraction * dim / (num_bins - 1) must be >= 1 so each "
                "level step changes at least one element"
            )
        return step

    def chain_key(self) -> str:
        return f"level({self.lo!r},{self.hi!r},{self.num_bins},{self.flip_fraction!r})"


class ItemMemory:
    """Seeded, reproducible symbol -> hypervector codebook."""

    def __init__(self, dim: int = DEFAULT_DIM, domain: Domain = Domain.BINARY,
                 global_seed: int = 0):
        if dim < 1:
            raise ValueError("dim must be positive")
        if dim < LOW_DIM_WARNING:
            warnings.warn(
                f"dim={dim} is below {LOW_DIM_WARNING}; random-pair similarity "
                "baselines get noisy at low dimension",
                stacklevel=2,
            )
        self.dim = dim
        self.domain = domain
        self.global_seed = int(global_seed)
        self.entries: dict[str, Hypervector] = {}
        self.provenance: dict[str, tuple] = {}
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.entries

    def symbols(self) -> list[str]:
        return sorted(self.entries)

    # -- derivations ----------------------------------------------------

    def get_symbol(self, symbol: str) -> Hypervector:
        """Fetch (or deterministically mint) the atomic vector for a symbol.

        Reads are lock-free; creation is serialized. A lost race would be
        harmless anyway, since derivation depends only on the seed and the
        symbol, never on timing.
        """
        hv = self.entries.get(symbol)
        if hv is None:
            with self._write_lock:
                hv = self.entries.get(symbol)
                if hv is None:
                    rng = _rng(self.global_seed, self.dim, self.domain.value,
                               "symbol", symbol)
                    hv = random_hv(self.dim, self.domain, rng)
                    self.entries[symbol] = hv
                    self.provenance[symbol] = ("random",)
        return hv

    def make_correlated(self, parent: str, child: str, fraction: float) -> Hypervector:
        """Mint ``child`` sharing ``ceil(fraction * dim)`` elements with ``parent``.

        For binary vectors the expected Hamming similarity to the parent is
        fraction + (1 - fraction) / 2.
        """
        if not 0.0 < fraction < 1.0:
            raise ValueError("fraction must be in (0, 1)")
        with self._write_lock:
            if parent not in self.entries:
                raise UnknownParent(f"parent symbol {parent!r} not in memory")
            if child in self.entries:
                raise DuplicateSymbol(f"symbol {child!r} already exists")
            rng = _rng(self.global_seed, self.dim, self.domain.value,
                       "correlated", parent, child, fraction)
            fresh = random_hv(self.dim, self.domain, rng).data.copy()
            n_copy = math.ceil(fraction * self.dim)
            copy_positions = rng.permutation(self.dim)[:n_copy]
            fresh[copy_positions] = self.entries[parent].data[copy_positions]
            hv = Hypervector(fresh, self.domain)
            self.entries[child] = hv
            self.provenance[child] = ("correlated", parent, fraction)
        return hv

    # -- level (bin) chains ---------------------------------------------

    def _level_chain(self, cfg: LevelEncoderConfig) -> list[Hypervector]:
        key = cfg.chain_key()
        if f"__{key}[0]" not in self.entries:
            with self._write_lock:
                if f"__{key}[0]" not in self.entries:
                    self._build_level_chain(cfg, key)
        return [self.entries[f"__{key}[{b}]"] for b in range(cfg.num_bins)]

    def _build_level_chain(self, cfg: LevelEncoderConfig, key: str) -> None:
        step = cfg.step_size(self.dim)
        rng = _rng(self.global_seed, self.dim, self.domain.value, "level", key)
        current = random_hv(self.dim, self.domain, rng).data.copy()
        order = rng.permutation(self.dim)
        for b in range(cfg.num_bins):
            name = f"__{key}[{b}]"
            self.entries[name] = Hypervector(current, self.domain)
            self.provenance[name] = ("level", key, b)
            if b + 1 < cfg.num_bins:
                positions = order[b * step:(b + 1) * step]
                fresh = random_hv(self.dim, self.domain, rng).data
                current = current.copy()
                current[positions] = fresh[positions]

    def level_hv(self, cfg: LevelEncoderConfig, bin_index: int) -> Hypervector:
        if not 0 <= bin_index < cfg.num_bins:
            raise OutOfRange(f"bin {bin_index} outside [0, {cfg.num_bins})")
        return self._level_chain(cfg)[bin_index]


def encode_scalar(cfg: LevelEncoderConfig, mem: ItemMemory, x: float) -> Hypervector:
    """Map a scalar to its bin's hypervector.

    Values in the same bin share a vector; similarity between bins decays
    monotonically with bin distance because each step along the chain
    re-randomizes a disjoint slice of positions.
    """
    return mem.level_hv(cfg, cfg.bin_of(x))


# -- serialization helpers (used by the container format) ----------------

def memory_state(mem: ItemMemory) -> dict:
    """JSON-safe description of a memory, minus the raw vectors."""
    return {
        "dim": mem.dim,
        "domain": mem.domain.value,
        "global_seed": mem.global_seed,
        "provenance": {sym: list(rec) for sym, rec in mem.provenance.items()},
    }


def memory_from_state(state: dict, vectors: dict[str, np.ndarray]) -> ItemMemory:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mem = ItemMemory(dim=int(state["dim"]), domain=Domain(state["domain"]),
                         global_seed=int(state["global_seed"]))
    for sym, rec in state.get("provenance", {}).items():
        mem.provenance[sym] = tuple(rec)
        mem.entries[sym] = Hypervector(vectors[sym], mem.domain)
    return mem
