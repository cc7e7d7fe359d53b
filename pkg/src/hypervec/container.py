"""Binary container file shared by encoded-HV stores and trained models.

Layout (all integers little-endian):

    magic   4 bytes  b"HVC1"
    version u32      format version (currently 1)
    hlen    u32      length of the JSON header in bytes
    header  hlen     UTF-8 JSON, self-describing (kind, dim, domain,
                     array directory, encoder config, seeds, ...)
    payload          raw little-endian array data, concatenated in
                     header-directory order
    crc     u32      CRC32 over header + payload

The header's ``arrays`` directory lists name, dtype, length and role for
every payload array, so a reader never guesses offsets. Round-trips are
bit-exact; a wrong checksum raises CorruptContainer and an unknown
magic/version raises VersionMismatch.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .core import Domain, Hypervector, dtype_of
from .errors import CorruptContainer, VersionMismatch
from .item_memory import ItemMemory, memory_from_state, memory_state
from .learn import Model

MAGIC = b"HVC1"
FORMAT_VERSION = 1

_ALLOWED_DTYPES = {"|u1", "|i1", "<f8", "<i8"}


def _canonical_dtype(dtype: np.dtype) -> str:
    # single-byte types have no byte order ('|'); force '<' on wider ones
    return dtype.str if dtype.itemsize == 1 else "<" + dtype.str[1:]


@dataclass
class Container:
    kind: str
    header: dict
    arrays: dict[tuple[str, str], np.ndarray]  # (role, name) -> data

    @property
    def dim(self) -> int:
        return int(self.header["dim"])

    @property
    def domain(self) -> Domain:
        return Domain(self.header["domain"])

    def arrays_with_role(self, role: str) -> list[tuple[str, np.ndarray]]:
        return [(name, data) for (r, name), data in self.arrays.items() if r == role]


def write_container(path, kind: str, dim: int, domain: Domain,
                    arrays, meta: dict | None = None) -> None:
    """Write arrays (iterable of (role, name, ndarray)) plus metadata."""
    directory = []
    payload_parts = []
    for role, name, data in arrays:
        data = np.ascontiguousarray(data)
        dtype = _canonical_dtype(data.dtype)
        if dtype not in _ALLOWED_DTYPES:
            raise ValueError(f"unsupported payload dtype {dtype}")
        directory.append({"role": role, "name": name, "dtype": dtype,
                          "length": int(data.shape[0])})
        payload_parts.append(data.astype(dtype, copy=False).tobytes())

    header = {"kind": kind, "dim": int(dim), "domain": domain.value,
              "arrays": directory}
    header.update(meta or {})
    header_bytes = json.dumps(header, sort_keys=True,
                              separators=(",", ":")).encode("utf-8")
    payload = b"".join(payload_parts)
    crc = zlib.crc32(header_bytes + payload) & 0xFFFFFFFF
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", FORMAT_VERSION, len(header_bytes)))
        fh.write(header_bytes)
        fh.write(payload)
        fh.write(struct.pack("<I", crc))


def read_container(path) -> Container:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 16 or blob[:4] != MAGIC:
        raise VersionMismatch(f"{path}: not a hypervec container")
    version, hlen = struct.unpack_from("<II", blob, 4)
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"{path}: format version {version}, "
                              f"expected {FORMAT_VERSION}")
    body_start = 12
    if len(blob) < body_start + hlen + 4:
        raise CorruptContainer(f"{path}: truncated container")
    header_bytes = blob[body_start:body_start + hlen]
    payload = blob[body_start + hlen:-4]
    (crc,) = struct.unpack_from("<I", blob, len(blob) - 4)
    if zlib.crc32(header_bytes + payload) & 0xFFFFFFFF != crc:
        raise CorruptContainer(f"{path}: checksum mismatch")
    try:
        header = json.loads(header_bytes.decode("utf-8"))
    except ValueError as exc:
        raise CorruptContainer(f"{path}: bad header JSON: {exc}") from exc

    arrays: dict[tuple[str, str], np.ndarray] = {}
    offset = 0
    for entry in header.get("arrays", []):
        dtype = np.dtype(entry["dtype"])
        nbytes = dtype.itemsize * int(entry["length"])
        if offset + nbytes > len(payload):
            raise CorruptContainer(f"{path}: payload shorter than directory")
        data = np.frombuffer(payload, dtype=dtype, count=int(entry["length"]),
                             offset=offset).copy()
        arrays[(entry["role"], entry["name"])] = data
        offset += nbytes
    if offset != len(payload):
        raise CorruptContainer(f"{path}: {len(payload) - offset} trailing payload bytes")
    return Container(kind=str(header.get("kind", "")), header=header, arrays=arrays)


# ---------------------------------------------------------------------------
# HV stores (cmd_encode output, associative-memory import/export)
# ---------------------------------------------------------------------------

def save_hv_store(path, entries, dim: int, domain: Domain,
                  meta: dict | None = None) -> None:
    """Persist labelled hypervectors: entries is an iterable of (label, hv)."""
    arrays = [("hv", label, hv.data) for label, hv in entries]
    write_container(path, "hv_store", dim, domain, arrays, meta)


def load_hv_store(path) -> tuple[list[tuple[str, Hypervector]], dict]:
    box = read_container(path)
    if box.kind != "hv_store":
        raise VersionMismatch(f"{path}: expected an hv_store container, "
                              f"found {box.kind!r}")
    domain = box.domain
    entries = [(name, Hypervector(data.astype(dtype_of(domain)), domain))
               for name, data in box.arrays_with_role("hv")]
    return entries, box.header


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

def save_model(path, model: Model) -> None:
    arrays = [("class_counts", label, model.class_counts[label])
              for label in model.labels]
    mem_meta = None
    if model.item_memory is not None:
        mem = model.item_memory
        mem_meta = memory_state(mem)
        for sym in sorted(mem.entries):
            arrays.append(("item", sym, mem.entries[sym].data))
    meta = {
        "classes": model.labels,
        "encoder": model.encoder_config,
        "item_memory": mem_meta,
        "training_meta": model.training_meta,
    }
    write_container(path, "model", model.dim, model.domain, arrays, meta)


def load_model(path) -> Model:
    box = read_container(path)
    if box.kind != "model":
        raise VersionMismatch(f"{path}: expected a model container, "
                              f"found {box.kind!r}")
    counts = {name: data.astype(np.float64)
              for name, data in box.arrays_with_role("class_counts")}
    memory: ItemMemory | None = None
    if box.header.get("item_memory"):
        domain = box.domain
        vectors = {name: data.astype(dtype_of(domain))
                   for name, data in box.arrays_with_role("item")}
        memory = memory_from_state(box.header["item_memory"], vectors)
    return Model(
        dim=box.dim,
        domain=box.domain,
        class_counts=counts,
        encoder_config=box.header.get("encoder"),
        item_memory=memory,
        training_meta=box.header.get("training_meta") or {},
    )
