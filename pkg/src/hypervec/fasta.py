"""FASTA input (plain or gzip) and residue alphabets.

Parsing is strict: the first non-blank line must be a header, every record
needs sequence content, and duplicate ids are rejected -- all reported with
the offending line number. Sequences are uppercased.

Ambiguous residues (IUPAC codes like N, or X for proteins) are resolved by
policy:

* ``skip``   -- mask the position; n-gram windows touching it are dropped
* ``random`` -- substitute a concrete residue, chosen deterministically
  from (seed, record id, position) so runs stay byte-identical
* ``symbol`` -- treat the ambiguity code as an atomic symbol of its own
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass

from .errors import HDCError
from .item_memory import derive_seed

AMBIGUITY_POLICIES = ("skip", "random", "symbol")


class FastaError(HDCError):
    """Malformed FASTA input; message carries the line number."""


@dataclass(frozen=True)
class Alphabet:
    name: str
    symbols: tuple[str, ...]
    ambiguous: dict[str, str]  # code -> concrete expansion choices


_DNA_AMB = {"R": "AG", "Y": "CT", "S": "GC", "W": "AT", "K": "GT", "M": "AC",
            "B": "CGT", "D": "AGT", "H": "ACT", "V": "ACG", "N": "ACGT"}
_PROTEIN = "ACDEFGHIKLMNPQRSTVWY"
_PROTEIN_AMB = {"B": "DN", "Z": "EQ", "J": "IL", "X": _PROTEIN,
                "U": "C", "O": "K"}

ALPHABETS = {
    "dna": Alphabet("dna", tuple("ACGT"), dict(_DNA_AMB)),
    "rna": Alphabet("rna", tuple("ACGU"),
                    {c: exp.replace("T", "U") for c, exp in _DNA_AMB.items()}),
    "protein": Alphabet("protein", tuple(_PROTEIN), dict(_PROTEIN_AMB)),
}


def read_fasta(path) -> list[tuple[str, str]]:
    """Parse records as (id, sequence); id is the first header token."""
    opener = gzip.open if _is_gzip(path) else open
    records: list[tuple[str, str]] = []
    seen: set[str] = set()
    rec_id: str | None = None
    chunks: list[str] = []
    header_line = 0
    with opener(path, "rt", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith(">"):
                if rec_id is not None:
                    _close_record(records, rec_id, chunks, header_line)
                rec_id = line[1:].split()[0] if line[1:].split() else ""
                if not rec_id:
                    raise FastaError(f"line {lineno}: empty record id")
                if rec_id in seen:
                    raise FastaError(f"line {lineno}: duplicate record id {rec_id!r}")
                seen.add(rec_id)
                chunks = []
                header_line = lineno
            else:
                if rec_id is None:
                    raise FastaError(f"line {lineno}: sequence data before "
                                     "any '>' header")
                chunks.append(line.upper())
    if rec_id is not None:
        _close_record(records, rec_id, chunks, header_line)
    if not records:
        raise FastaError(f"{path}: no FASTA records found")
    return records


def _close_record(records, rec_id, chunks, header_line) -> None:
    seq = "".join(chunks)
    if not seq:
        raise FastaError(f"line {header_line}: record {rec_id!r} has no sequence")
    records.append((rec_id, seq))


def _is_gzip(path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(2) == b"\x1f\x8b"


def resolve_sequence(seq: str, alphabet: Alphabet, policy: str,
                     seed: int, record_id: str) -> list[str | None]:
    """Map residues to encoder symbols, applying the ambiguity policy.

    Returns one entry per position; ``None`` marks a masked position under
    the ``skip`` policy. Residues that are neither alphabet symbols nor
    known ambiguity codes raise FastaError.
    """
    if policy not in AMBIGUITY_POLICIES:
        raise ValueError(f"unknown ambiguity policy {policy!r}")
    concrete = set(alphabet.symbols)
    out: list[str | None] = []
    for pos, ch in enumerate(seq):
        if ch in concrete:
            out.append(ch)
            continue
        expansion = alphabet.ambiguous.get(ch)
        if expansion is None:
            raise FastaError(
                f"record {record_id!r}: residue {ch!r} at position {pos} is "
                f"not in the {alphabet.name} alphabet")
        if policy == "skip":
            out.append(None)
        elif policy == "symbol":
            out.append(ch)
        else:
            pick = derive_seed("ambiguous", seed, record_id, pos) % len(expansion)
            out.append(expansion[pick])
    return out
