"""hypervec: hyperdimensional computing for sequences, sets and graphs.

Quick tour::

    from hypervec import ItemMemory, Domain, bind, bundle_hvs, similarity

    mem = ItemMemory(dim=10_000, domain=Domain.BINARY, global_seed=7)
    ab = bind(mem.get_symbol("A"), mem.get_symbol("B"))
    rep = similarity(ab, mem.get_symbol("A"))   # dissimilar: |z| small
"""

from .core import (
    DEFAULT_DIM,
    Accumulator,
    Domain,
    Hypervector,
    SeededRandom,
    TieRule,
    ZeroTernary,
    accumulate,
    bind,
    bundle,
    bundle_hvs,
    permute,
    random_hv,
    unbind,
)
from .similarity import (
    DEFAULT_Z_THRESHOLD,
    Metric,
    SimilarityReport,
    baseline,
    default_metric,
    similarity,
    top_k,
)
from .item_memory import (
    ItemMemory,
    LevelEncoderConfig,
    derive_seed,
    encode_scalar,
)
from .encoders import (
    Distribution,
    GraphEncoderConfig,
    PostProcess,
    ProjectionConfig,
    SeqMode,
    SequenceEncoderConfig,
    encode_graph,
    encode_record,
    encode_sequence,
    encode_set,
    project_vector,
    query_record,
    sequence_accumulator,
    set_contains,
)
from .learn import (
    AlphaSchedule,
    Model,
    TrainConfig,
    predict,
    retrain,
    train_oneshot,
)
from .assoc import AssocMemory
from .container import (
    load_hv_store,
    load_model,
    read_container,
    save_hv_store,
    save_model,
    write_container,
)
from . import errors

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DIM",
    "DEFAULT_Z_THRESHOLD",
    "Accumulator",
    "AlphaSchedule",
    "AssocMemory",
    "Distribution",
    "Domain",
    "GraphEncoderConfig",
    "Hypervector",
    "ItemMemory",
    "LevelEncoderConfig",
    "Metric",
    "Model",
    "PostProcess",
    "ProjectionConfig",
    "SeededRandom",
    "SeqMode",
    "SequenceEncoderConfig",
    "SimilarityReport",
    "TieRule",
    "TrainConfig",
    "ZeroTernary",
    "accumulate",
    "baseline",
    "bind",
    "bundle",
    "bundle_hvs",
    "default_metric",
    "derive_seed",
    "encode_graph",
    "encode_record",
    "encode_scalar",
    "encode_sequence",
    "encode_set",
    "errors",
    "load_hv_store",
    "load_model",
    "permute",
    "predict",
    "project_vector",
    "query_record",
    "random_hv",
    "read_container",
    "retrain",
    "save_hv_store",
    "save_model",
    "sequence_accumulator",
    "set_contains",
    "similarity",
    "top_k",
    "train_oneshot",
    "unbind",
    "write_container",
]
