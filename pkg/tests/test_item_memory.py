import numpy as np
import pytest

from hypervec import (
    Domain,
    ItemMemory,
    LevelEncoderConfig,
    Metric,
    encode_scalar,
    similarity,
)
from hypervec.errors import DuplicateSymbol, OutOfRange, UnknownParent
from hypervec.item_memory import memory_from_state, memory_state

DIM = 10_000
AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"


def test_repeated_lookup_is_identical():
    mem = ItemMemory(dim=DIM, global_seed=3)
    assert mem.get_symbol("K") == mem.get_symbol("K")
    assert similarity(mem.get_symbol("K"), mem.get_symbol("K")).value == 1.0


def test_same_seed_reproduces_across_instances():
    a = ItemMemory(dim=DIM, global_seed=11).get_symbol("GLU")
    b = ItemMemory(dim=DIM, global_seed=11).get_symbol("GLU")
    assert a == b


def test_insertion_order_does_not_matter():
    fwd = ItemMemory(dim=2048, global_seed=5)
    rev = ItemMemory(dim=2048, global_seed=5)
    for s in AMINO_ACIDS:
        fwd.get_symbol(s)
    for s in reversed(AMINO_ACIDS):
        rev.get_symbol(s)
    assert all(fwd.get_symbol(s) == rev.get_symbol(s) for s in AMINO_ACIDS)


def test_amino_acid_codebook_quasi_orthogonal():
    mem = ItemMemory(dim=DIM, global_seed=0)
    hvs = [mem.get_symbol(s) for s in AMINO_ACIDS]
    for i in range(len(hvs)):
        for j in range(i + 1, len(hvs)):
            assert abs(similarity(hvs[i], hvs[j]).value - 0.5) <= 0.025


def test_distinct_seeds_are_independent():
    a = ItemMemory(dim=DIM, global_seed=1).get_symbol("A")
    b = ItemMemory(dim=DIM, global_seed=2).get_symbol("A")
    assert abs(similarity(a, b).value - 0.5) <= 0.025


def test_domains_generate_valid_atoms():
    for domain in Domain:
        mem = ItemMemory(dim=4096, domain=domain, global_seed=9)
        hv = mem.get_symbol("x")
        assert hv.domain is domain
        if domain is Domain.BIPOLAR:
            assert not np.any(hv.data == 0)


def test_low_dim_warning():
    with pytest.warns(UserWarning, match="below 1000"):
        ItemMemory(dim=128)


# ---------------------------------------------------------------------------
# correlated symbols
# ---------------------------------------------------------------------------

def test_correlated_high_fraction():
    mem = ItemMemory(dim=DIM, global_seed=4)
    mem.get_symbol("parent")
    child = mem.make_correlated("parent", "child", 0.99)
    assert similarity(child, mem.get_symbol("parent")).value >= 0.985


def test_correlated_half_fraction():
    # expectation: fraction + (1 - fraction)/2 = 0.75
    mem = ItemMemory(dim=DIM, global_seed=4)
    mem.get_symbol("p")
    child = mem.make_correlated("p", "c", 0.5)
    assert abs(similarity(child, mem.get_symbol("p")).value - 0.75) <= 0.02


def test_correlated_child_independent_of_others():
    mem = ItemMemory(dim=DIM, global_seed=4)
    mem.get_symbol("p")
    child = mem.make_correlated("p", "c", 0.5)
    assert abs(similarity(child, mem.get_symbol("unrelated")).value - 0.5) <= 0.025


def test_correlated_errors():
    mem = ItemMemory(dim=2048, global_seed=0)
    with pytest.raises(UnknownParent):
        mem.make_correlated("ghost", "c", 0.5)
    mem.get_symbol("p")
    mem.make_correlated("p", "c", 0.5)
    with pytest.raises(DuplicateSymbol):
        mem.make_correlated("p", "c", 0.5)
    with pytest.raises(ValueError):
        mem.make_correlated("p", "c2", 1.5)


# ---------------------------------------------------------------------------
# scalar (level) encoding
# ---------------------------------------------------------------------------

def test_same_bin_same_vector():
    cfg = LevelEncoderConfig(lo=0.0, hi=10.0, num_bins=10)
    mem = ItemMemory(dim=DIM, global_seed=1)
    assert encode_scalar(cfg, mem, 0.0) == encode_scalar(cfg, mem, 0.999)
    assert encode_scalar(cfg, mem, 0.0) != encode_scalar(cfg, mem, 1.001)


def test_upper_edge_maps_to_last_bin():
    cfg = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=5)
    mem = ItemMemory(dim=2048, global_seed=1)
    assert encode_scalar(cfg, mem, 1.0) == mem.level_hv(cfg, 4)


def test_chain_ends_decorrelate():
    cfg = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=11, flip_fraction=1.0)
    mem = ItemMemory(dim=DIM, global_seed=2)
    first, last = mem.level_hv(cfg, 0), mem.level_hv(cfg, 10)
    assert abs(similarity(first, last).value - 0.5) <= 0.025


def test_adjacent_bins_similarity():
    # 1000 of 10000 positions re-randomized; half survive by chance: 0.95
    cfg = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=11, flip_fraction=1.0)
    mem = ItemMemory(dim=DIM, global_seed=2)
    for b in range(10):
        tau = similarity(mem.level_hv(cfg, b), mem.level_hv(cfg, b + 1)).value
        assert abs(tau - 0.95) <= 0.02


def test_monotone_level_similarity_exact():
    cfg = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=16, flip_fraction=0.8)
    for domain, metric in ((Domain.BINARY, Metric.HAMMING),
                           (Domain.BIPOLAR, Metric.COSINE)):
        mem = ItemMemory(dim=DIM, domain=domain, global_seed=6)
        for a in range(0, 16, 3):
            taus = [similarity(mem.level_hv(cfg, a), mem.level_hv(cfg, b),
                               metric).value for b in range(a, 16)]
            assert all(x >= y for x, y in zip(taus, taus[1:]))


def test_out_of_range_policy():
    strict = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=4)
    mem = ItemMemory(dim=2048, global_seed=0)
    with pytest.raises(OutOfRange):
        encode_scalar(strict, mem, 1.5)
    clamping = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=4,
                                  clamp_out_of_range=True)
    assert encode_scalar(clamping, mem, 1.5) == encode_scalar(clamping, mem, 1.0)
    assert encode_scalar(clamping, mem, -3.0) == encode_scalar(clamping, mem, 0.0)


def test_level_config_validation():
    with pytest.raises(ValueError):
        LevelEncoderConfig(lo=1.0, hi=0.0, num_bins=4)
    with pytest.raises(ValueError):
        LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=1)
    with pytest.raises(ValueError):
        LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=4, flip_fraction=0.0)
    # flip_fraction * dim / (num_bins - 1) must change at least one element
    starved = LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=200, flip_fraction=0.01)
    mem = ItemMemory(dim=DIM, global_seed=0)
    with pytest.raises(ValueError):
        encode_scalar(starved, mem, 0.5)


def test_level_chain_deterministic_across_instances():
    cfg = LevelEncoderConfig(lo=-5.0, hi=5.0, num_bins=8)
    a = ItemMemory(dim=4096, global_seed=13)
    b = ItemMemory(dim=4096, global_seed=13)
    assert encode_scalar(cfg, a, 2.2) == encode_scalar(cfg, b, 2.2)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_state_round_trip_bit_identical():
    mem = ItemMemory(dim=4096, global_seed=21)
    mem.get_symbol("A")
    mem.make_correlated("A", "A'", 0.3)
    encode_scalar(LevelEncoderConfig(lo=0.0, hi=1.0, num_bins=4), mem, 0.7)
    state = memory_state(mem)
    vectors = {sym: hv.data for sym, hv in mem.entries.items()}
    clone = memory_from_state(state, vectors)
    assert clone.global_seed == mem.global_seed
    assert set(clone.entries) == set(mem.entries)
    for sym in mem.entries:
        assert clone.entries[sym] == mem.entries[sym]
    assert clone.provenance == mem.provenance
