"""Command-line pipeline: FASTA in, hypervectors / models / rankings out.

Subcommands:

* ``encode``  -- FASTA -> container of labelled hypervectors
* ``train``   -- FASTA + labels TSV -> model container (one-shot bundling,
  optional retraining epochs)
* ``predict`` -- model + FASTA -> TSV with per-class similarities
* ``search``  -- container + query FASTA -> top-k TSV ranking
* ``bench``   -- synthetic encoding throughput report

Runs are deterministic: same files, flags and seed give byte-identical
outputs at any ``--threads`` value, and every output starts with a
reproducibility header carrying the fully resolved configuration.

Exit codes: 0 ok, 2 input error, 3 config/version error, 4 internal error.
"""

from __future__ import annotations

import argparse
import resource
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .assoc import AssocMemory
from .container import load_hv_store, load_model, save_hv_store, save_model
from .core import DEFAULT_DIM, Domain, Hypervector
from .encoders import SeqMode, SequenceEncoderConfig, encode_sequence
from .errors import (
    CorruptContainer,
    DuplicateLabel,
    EmptyMemory,
    EmptySequence,
    SequenceShorterThanN,
    UnknownSymbol,
    VersionMismatch,
)
from .fasta import ALPHABETS, AMBIGUITY_POLICIES, FastaError, read_fasta, resolve_sequence
from .item_memory import ItemMemory
from .learn import Metric, Model, TrainConfig, predict, retrain, train_oneshot

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_INTERNAL = 4

_INPUT_ERRORS = (FastaError, CorruptContainer, UnknownSymbol, EmptySequence,
                 SequenceShorterThanN, DuplicateLabel, EmptyMemory, OSError)


class InputError(Exception):
    pass


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# encoder plumbing
# ---------------------------------------------------------------------------

def encoder_spec_from_args(args) -> dict:
    return {
        "dim": args.dim,
        "domain": args.domain,
        "mode": args.mode,
        "n": args.n,
        "seed": args.seed,
        "alphabet": args.alphabet,
        "ambiguous": args.ambiguous,
    }


def build_encoder(spec: dict, memory: ItemMemory | None = None):
    alphabet = ALPHABETS[spec["alphabet"]]
    if memory is None:
        memory = ItemMemory(dim=int(spec["dim"]), domain=Domain(spec["domain"]),
                            global_seed=int(spec["seed"]))
    symbols = list(alphabet.symbols)
    if spec["ambiguous"] == "symbol":
        symbols += sorted(alphabet.ambiguous)
    for sym in symbols:  # pre-mint atoms so worker threads only read
        memory.get_symbol(sym)
    cfg = SequenceEncoderConfig(
        memory=memory,
        mode=SeqMode(spec["mode"]),
        n=int(spec["n"]),
        alphabet=tuple(symbols),
    )
    return memory, cfg, alphabet


def encode_records(records, spec: dict, threads: int,
                   memory: ItemMemory | None = None) -> list[tuple[str, Hypervector]]:
    memory, cfg, alphabet = build_encoder(spec, memory)
    policy = spec["ambiguous"]
    seed = int(spec["seed"])

    def encode_one(record):
        rec_id, seq = record
        resolved = resolve_sequence(seq, alphabet, policy, seed, rec_id)
        try:
            return rec_id, encode_sequence(cfg, resolved)
        except (EmptySequence, SequenceShorterThanN) as exc:
            raise FastaError(f"record {rec_id!r}: {exc}") from exc

    if threads <= 1:
        return [encode_one(rec) for rec in records]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(encode_one, records))


def _spec_line(spec: dict, extra: dict | None = None) -> str:
    parts = [f"{key}={spec[key]}" for key in
             ("dim", "domain", "mode", "n", "seed", "alphabet", "ambiguous")]
    for key, val in (extra or {}).items():
        parts.append(f"{key}={val}")
    return " ".join(parts)


def read_labels_tsv(path) -> dict[str, str]:
    labels: dict[str, str] = {}
    with open(path, "rt", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2 or not cols[0] or not cols[1]:
                raise InputError(f"{path}:{lineno}: expected 'id<TAB>label'")
            if cols[0] in labels:
                raise InputError(f"{path}:{lineno}: duplicate id {cols[0]!r}")
            labels[cols[0]] = cols[1]
    if not labels:
        raise InputError(f"{path}: no label rows found")
    return labels


def _match_labels(records, labels: dict[str, str]) -> None:
    fasta_ids = {rec_id for rec_id, _ in records}
    missing = sorted(fasta_ids - set(labels))
    extra = sorted(set(labels) - fasta_ids)
    if missing or extra:
        detail = []
        if missing:
            detail.append(f"FASTA ids without labels: {', '.join(missing[:5])}")
        if extra:
            detail.append(f"label ids not in FASTA: {', '.join(extra[:5])}")
        raise InputError("ID mismatch between FASTA and labels TSV "
                         f"({'; '.join(detail)})")


def _check_spec_conflicts(stored: dict, args) -> dict:
    """Stored container config wins; explicit conflicting flags are errors."""
    for flag in ("dim", "domain", "mode", "n", "alphabet", "ambiguous", "seed"):
        given = getattr(args, flag, None)
        if given is not None and str(given) != str(stored[flag]):
            raise ConfigError(
                f"--{flag}={given} conflicts with the container's "
                f"{flag}={stored[flag]}")
    return stored


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_encode(args) -> int:
    records = read_fasta(args.fasta)
    spec = encoder_spec_from_args(args)
    encoded = encode_records(records, spec, args.threads)
    save_hv_store(args.output, encoded, dim=spec["dim"],
                  domain=Domain(spec["domain"]),
                  meta={"encoder": spec, "tool": f"hypervec {__version__}"})
    return EXIT_OK


def cmd_train(args) -> int:
    records = read_fasta(args.fasta)
    labels = read_labels_tsv(args.labels)
    _match_labels(records, labels)
    spec = encoder_spec_from_args(args)
    memory, _, _ = build_encoder(spec)
    encoded = encode_records(records, spec, args.threads, memory)
    labeled = [(hv, labels[rec_id]) for rec_id, hv in encoded]
    model = train_oneshot(labeled, encoder_config=spec, item_memory=memory)
    if args.epochs > 0:
        cfg = TrainConfig(epochs=args.epochs, alpha=args.alpha,
                          shuffle_seed=args.seed)
        model, trace = retrain(model, labeled, cfg)
        model.training_meta["trace"] = [round(v, 6) for v in trace]
    save_model(args.output, model)
    return EXIT_OK


def _load_model_checked(args) -> Model:
    model = load_model(args.model)
    if not model.encoder_config:
        raise ConfigError(f"{args.model}: model carries no encoder config")
    _check_spec_conflicts(model.encoder_config, args)
    return model


def cmd_predict(args) -> int:
    model = _load_model_checked(args)
    records = read_fasta(args.fasta)
    spec = model.encoder_config
    encoded = encode_records(records, spec, args.threads, model.item_memory)
    metric = Metric(args.metric)

    lines = [f"# hypervec predict v{__version__} format=1",
             f"# config: {_spec_line(spec, {'metric': metric.value})}",
             f"# model: {args.model} classes={','.join(model.labels)}",
             "# columns: id\tpredicted\t[label\tvalue\tz]*"]
    for rec_id, hv in encoded:
        label, ranking = predict(model, hv, metric=metric)
        cols = [rec_id, label]
        for cls, rep in ranking:
            cols += [cls, f"{rep.value:.6f}", f"{rep.z_score:.3f}"]
        lines.append("\t".join(cols))
    _write_text(args.output, lines)
    return EXIT_OK


def cmd_search(args) -> int:
    entries, header = load_hv_store(args.container)
    spec = header.get("encoder")
    if not spec:
        raise ConfigError(f"{args.container}: container carries no encoder "
                          "config; produce it with 'hypervec encode'")
    _check_spec_conflicts(spec, args)
    memory = AssocMemory.from_entries(entries)
    records = read_fasta(args.fasta)
    encoded = encode_records(records, spec, args.threads)
    metric = Metric(args.metric) if args.metric else None

    metric_name = metric.value if metric else "default"
    lines = [f"# hypervec search v{__version__} format=1",
             f"# config: {_spec_line(spec, {'k': args.k, 'metric': metric_name})}",
             f"# index: {args.container} entries={len(memory)}",
             "# columns: query_id\trank\tlabel\tvalue\tz"]
    for rec_id, hv in encoded:
        for rank, (label, rep) in enumerate(memory.query(hv, args.k, metric), 1):
            lines.append("\t".join([rec_id, str(rank), label,
                                    f"{rep.value:.6f}", f"{rep.z_score:.3f}"]))
    _write_text(args.output, lines)
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = encoder_spec_from_args(args)
    rng = np.random.default_rng(args.seed)
    bases = np.array(list(ALPHABETS[spec["alphabet"]].symbols))
    records = [(f"synthetic_{i}", "".join(rng.choice(bases, args.length)))
               for i in range(args.count)]
    start = time.perf_counter()
    encode_records(records, spec, args.threads)
    elapsed = time.perf_counter() - start
    total_bp = args.count * args.length
    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0
    lines = [
        f"# hypervec bench v{__version__}",
        f"# config: {_spec_line(spec, {'threads': args.threads})}",
        f"sequences          {args.count}",
        f"sequence_length    {args.length}",
        f"wall_seconds       {elapsed:.3f}",
        f"sequences_per_s    {args.count / elapsed:.1f}",
        f"mbp_per_s          {total_bp / elapsed / 1e6:.3f}",
        f"peak_rss_mb        {peak_mb:.1f}",
    ]
    _write_text(args.output, lines)
    return EXIT_OK


def _write_text(path, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "wt", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_encoder_flags(parser, defaults: bool = True) -> None:
    # With defaults=False the flags default to None so that only explicit
    # values can conflict with a container's stored configuration.
    d = (lambda v: v) if defaults else (lambda v: None)
    parser.add_argument("--dim", type=int, default=d(DEFAULT_DIM))
    parser.add_argument("--domain", choices=[dom.value for dom in Domain],
                        default=d("binary"))
    parser.add_argument("--mode", choices=[m.value for m in SeqMode],
                        default=d("ngram"))
    parser.add_argument("--n", type=int, default=d(5), help="n-gram (k-mer) size")
    parser.add_argument("--seed", type=int, default=d(42))
    parser.add_argument("--alphabet", choices=sorted(ALPHABETS),
                        default=d("dna"))
    parser.add_argument("--ambiguous", choices=AMBIGUITY_POLICIES,
                        default=d("skip"),
                        help="how to treat IUPAC ambiguity codes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypervec",
        description="Hyperdimensional sequence encoding, classification and search.")
    parser.add_argument("--version", action="version",
                        version=f"hypervec {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("encode", help="encode FASTA records into a container")
    p.add_argument("fasta")
    p.add_argument("-o", "--output", required=True)
    _add_encoder_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("train", help="train a prototype classifier")
    p.add_argument("fasta")
    p.add_argument("labels", help="TSV: record id <TAB> class label")
    p.add_argument("-o", "--output", required=True)
    _add_encoder_flags(p)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--epochs", type=int, default=0,
                   help="retraining epochs after one-shot bundling (0 = off)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify FASTA records with a model")
    p.add_argument("model")
    p.add_argument("fasta")
    p.add_argument("-o", "--output", default=None)
    _add_encoder_flags(p, defaults=False)
    p.add_argument("--metric", choices=["cosine", "hamming"], default="cosine")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("search", help="rank container entries against queries")
    p.add_argument("container")
    p.add_argument("fasta")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("-k", type=int, default=5)
    _add_encoder_flags(p, defaults=False)
    p.add_argument("--metric", choices=["hamming", "jaccard", "cosine"],
                   default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bench", help="synthetic encoding throughput")
    p.add_argument("-o", "--output", default=None)
    _add_encoder_flags(p)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--length", type=int, default=1000)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def _validate_common(args) -> None:
    if getattr(args, "threads", 1) < 1:
        raise ConfigError("--threads must be >= 1")
    if getattr(args, "dim", None) is not None and args.dim < 1:
        raise ConfigError("--dim must be positive")
    if getattr(args, "n", None) is not None and args.n < 1:
        raise ConfigError("--n must be >= 1")
    if getattr(args, "k", None) is not None and args.k < 1:
        raise ConfigError("-k must be >= 1")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate_common(args)
        return args.func(args)
    except InputError as exc:
        print(f"hypervec: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _INPUT_ERRORS as exc:
        print(f"hypervec: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, VersionMismatch) as exc:
        print(f"hypervec: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"hypervec: internal error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
