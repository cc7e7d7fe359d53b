import math

import numpy as np
import pytest

from hypervec import (
    AlphaSchedule,
    Domain,
    Hypervector,
    ItemMemory,
    Metric,
    SeqMode,
    SequenceEncoderConfig,
    TrainConfig,
    encode_sequence,
    predict,
    random_hv,
    retrain,
    train_oneshot,
)
from hypervec.errors import (
    DimensionMismatch,
    EmptyClass,
    SingleClass,
    UnknownLabel,
)

DIM = 10_000


def reads_from(ref, count, rng, read_len=150, mut=0.05):
    bases = "ACGT"
    out = []
    for _ in range(count):
        start = int(rng.integers(0, len(ref) - read_len + 1))
        read = list(ref[start:start + read_len])
        for i in range(read_len):
            if rng.random() < mut:
                read[i] = bases[(bases.index(read[i]) + int(rng.integers(1, 4))) % 4]
        out.append("".join(read))
    return out


def encoded_read_set(seed, per_class, n=5, ref_len=10_000, shared=0,
                     read_len=150):
    """Two-class synthetic reads; optionally the references share a prefix."""
    rng = np.random.default_rng(seed)
    bases = list("ACGT")
    prefix = "".join(rng.choice(bases, shared))
    refs = {
        "A": prefix + "".join(rng.choice(bases, ref_len - shared)),
        "B": prefix + "".join(rng.choice(bases, ref_len - shared)),
    }
    mem = ItemMemory(dim=DIM, domain=Domain.BIPOLAR, global_seed=seed)
    cfg = SequenceEncoderConfig(memory=mem, mode=SeqMode.NGRAM, n=n)
    data = []
    for label, ref in refs.items():
        for read in reads_from(ref, per_class, rng, read_len=read_len):
            data.append((encode_sequence(cfg, list(read)), label))
    return data


def accuracy(model, data):
    return float(np.mean([predict(model, hv)[0] == label for hv, label in data]))


# ---------------------------------------------------------------------------
# one-shot training
# ---------------------------------------------------------------------------

def test_single_example_prototype_equals_example(rng):
    a = random_hv(DIM, Domain.BIPOLAR, rng)
    b = random_hv(DIM, Domain.BIPOLAR, rng)
    model = train_oneshot([(a, "A"), (b, "B")])
    assert np.array_equal(model.prototype("A"), a.data.astype(np.float64))
    assert predict(model, a)[0] == "A"
    assert predict(model, a)[1][0][1].value == pytest.approx(1.0)


def test_two_identical_examples_prototype_is_that_hv(rng):
    a = random_hv(DIM, Domain.BIPOLAR, rng)
    b = random_hv(DIM, Domain.BIPOLAR, rng)
    model = train_oneshot([(a, "A"), (a, "A"), (b, "B")])
    assert np.array_equal(model.prototype("A"), a.data.astype(np.float64))


def test_training_errors(rng):
    a = random_hv(256, Domain.BIPOLAR, rng)
    with pytest.raises(SingleClass):
        train_oneshot([(a, "only")])
    with pytest.raises(EmptyClass):
        train_oneshot([(a, "A"), (a, "B")], classes=["A", "B", "C"])
    with pytest.raises(UnknownLabel):
        train_oneshot([(a, "A"), (a, "B"), (a, "D")], classes=["A", "B"])


def test_oneshot_separated_classes_training_accuracy():
    # reads from two random 10 kb references, n=5 n-gram encoding
    data = encoded_read_set(seed=1, per_class=150)
    model = train_oneshot(data)
    assert accuracy(model, data) >= 0.95


def test_held_out_accuracy_with_sufficient_gram_space():
    # 4^7 7-mers dwarf the ~10^4 reference windows, so read profiles are
    # nearly disjoint across classes; 400 training reads give ~6x reference
    # coverage and held-out accuracy clears 95%
    data = encoded_read_set(seed=2, per_class=500, n=7)
    per = len(data) // 2
    train = data[:400] + data[per:per + 400]
    held = data[400:per] + data[per + 400:]
    model = train_oneshot(train)
    assert accuracy(model, held) >= 0.95


def test_binary_examples_are_centered(rng):
    v = random_hv(DIM, Domain.BINARY, rng)
    w = random_hv(DIM, Domain.BINARY, rng)
    model = train_oneshot([(v, "V"), (w, "W")])
    assert set(np.unique(model.class_counts["V"])) == {-1.0, 1.0}
    assert predict(model, v)[0] == "V"


# ---------------------------------------------------------------------------
# prediction
# ---------------------------------------------------------------------------

def test_predict_returns_full_ranking(rng):
    data = [(random_hv(DIM, Domain.BIPOLAR, rng), lbl)
            for lbl in ("A", "B", "C")]
    model = train_oneshot(data)
    label, ranking = predict(model, data[0][0])
    assert label == "A"
    assert [lbl for lbl, _ in ranking][0] == "A"
    assert len(ranking) == 3
    values = [rep.value for _, rep in ranking]
    assert values == sorted(values, reverse=True)


def test_bundle_of_two_prototypes_ranks_third_last(rng):
    from hypervec import bundle_hvs
    wins = 0
    trials = 200
    for _ in range(trials):
        hvs = {lbl: random_hv(DIM, Domain.BIPOLAR, rng) for lbl in "ABC"}
        model = train_oneshot([(hv, lbl) for lbl, hv in hvs.items()])
        probe = bundle_hvs([hvs["A"], hvs["B"]])
        _, ranking = predict(model, probe)
        wins += ranking[-1][0] == "C"
    assert wins / trials >= 0.99


def test_prediction_invariant_to_positive_rescaling(rng):
    data = [(random_hv(DIM, Domain.REAL, rng), lbl) for lbl in ("A", "B")]
    model = train_oneshot(data)
    v = random_hv(DIM, Domain.REAL, rng)
    base_label, base_rank = predict(model, v)
    scaled = Hypervector(7.5 * v.data, Domain.REAL)
    label, rank = predict(model, scaled)
    assert label == base_label
    assert [l for l, _ in rank] == [l for l, _ in base_rank]


def test_argmax_invariant_under_increasing_transform(rng):
    data = [(random_hv(DIM, Domain.BIPOLAR, rng), lbl) for lbl in "ABCD"]
    model = train_oneshot(data)
    _, ranking = predict(model, random_hv(DIM, Domain.BIPOLAR, rng))
    values = [rep.value for _, rep in ranking]
    transformed = [math.exp(3 * v) + 1 for v in values]
    assert transformed == sorted(transformed, reverse=True)


def test_predict_dimension_mismatch(rng):
    data = [(random_hv(256, Domain.BIPOLAR, rng), lbl) for lbl in ("A", "B")]
    model = train_oneshot(data)
    with pytest.raises(DimensionMismatch):
        predict(model, random_hv(128, Domain.BIPOLAR, rng))


def test_hamming_prediction_flag(rng):
    data = [(random_hv(DIM, Domain.BINARY, rng), lbl) for lbl in ("A", "B")]
    model = train_oneshot(data)
    label, ranking = predict(model, data[0][0], metric=Metric.HAMMING)
    assert label == "A"
    assert ranking[0][1].metric is Metric.HAMMING


# ---------------------------------------------------------------------------
# retraining
# ---------------------------------------------------------------------------

def test_already_perfect_model_is_untouched(rng):
    data = [(random_hv(DIM, Domain.BIPOLAR, rng), lbl) for lbl in ("A", "B")]
    model = train_oneshot(data)
    retrained, trace = retrain(model, data, TrainConfig(epochs=5, alpha=1.0))
    assert trace == [1.0]  # early stop on first perfect epoch
    for lbl in model.labels:
        assert np.array_equal(model.class_counts[lbl],
                              retrained.class_counts[lbl])


def test_alpha_zero_changes_nothing(rng):
    gen = np.random.default_rng(3)
    data = [(random_hv(512, Domain.BIPOLAR, gen), f"{i % 2}") for i in range(20)]
    model = train_oneshot(data)
    retrained, trace = retrain(model, data, TrainConfig(epochs=3, alpha=0.0))
    for lbl in model.labels:
        assert np.array_equal(model.class_counts[lbl],
                              retrained.class_counts[lbl])
    assert len(trace) >= 1


def test_update_conservation(rng):
    # one correction moves mass between exactly two prototypes; their sum
    # is invariant
    data = [(random_hv(512, Domain.BIPOLAR, rng), lbl)
            for lbl in ("A", "B", "A", "B", "C", "C")]
    model = train_oneshot(data)
    total_before = sum(model.class_counts[lbl] for lbl in model.labels)
    hard = [(random_hv(512, Domain.BIPOLAR, rng), "A") for _ in range(10)]
    retrained, _ = retrain(model, data + hard, TrainConfig(epochs=1, alpha=0.5))
    total_after = sum(retrained.class_counts[lbl] for lbl in retrained.labels)
    assert np.allclose(total_before, total_after)


def test_retrain_unknown_label(rng):
    data = [(random_hv(256, Domain.BIPOLAR, rng), lbl) for lbl in ("A", "B")]
    model = train_oneshot(data)
    with pytest.raises(UnknownLabel):
        retrain(model, [(data[0][0], "Z")], TrainConfig(epochs=1))


def test_retrain_determinism(rng):
    data = [(random_hv(512, Domain.BIPOLAR, rng), f"{i % 3}") for i in range(30)]
    model = train_oneshot(data)
    cfg = TrainConfig(epochs=4, alpha=0.7, shuffle_seed=9)
    m1, t1 = retrain(model, data, cfg)
    m2, t2 = retrain(model, data, cfg)
    assert t1 == t2
    for lbl in m1.labels:
        assert np.array_equal(m1.class_counts[lbl], m2.class_counts[lbl])


def test_retrain_improves_on_overlapping_classes():
    # classes share 50% of their reference; retraining must fit the training
    # set better than one-shot bundling
    data = encoded_read_set(seed=5, per_class=100, shared=5_000)
    model = train_oneshot(data)
    base = accuracy(model, data)
    retrained, trace = retrain(model, data,
                               TrainConfig(epochs=10, alpha=1.0, shuffle_seed=5))
    assert accuracy(retrained, data) > base
    assert len(trace) <= 10


def test_inverse_epoch_schedule():
    cfg = TrainConfig(epochs=4, alpha=2.0,
                      alpha_schedule=AlphaSchedule.INVERSE_EPOCH)
    assert cfg.alpha_at(1) == 2.0
    assert cfg.alpha_at(4) == 0.5
    const = TrainConfig(epochs=4, alpha=2.0)
    assert const.alpha_at(4) == 2.0


def test_early_stop_patience(rng):
    gen = np.random.default_rng(11)
    # random labels on random vectors never reach accuracy 1.0 -> patience
    data = [(random_hv(256, Domain.BIPOLAR, gen), f"{i % 2}") for i in range(40)]
    model = train_oneshot(data)
    _, trace = retrain(model, data,
                       TrainConfig(epochs=50, alpha=1.0, early_stop_patience=3))
    assert len(trace) < 50


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError):
        TrainConfig(alpha=-1.0)
    with pytest.raises(ValueError):
        TrainConfig(early_stop_patience=-1)


def test_prototype_recompute_check(rng):
    data = [(random_hv(512, Domain.BIPOLAR, rng), lbl) for lbl in ("A", "B")]
    model = train_oneshot(data)
    for lbl in model.labels:
        counts = model.class_counts[lbl]
        expected = counts * (math.sqrt(model.dim) / np.linalg.norm(counts))
        assert np.array_equal(model.prototype(lbl), expected)
