"""Exception types raised across the toolkit.

Every operation raises a named subclass of :class:`HDCError` so callers can
distinguish bad inputs (dimension/domain mixups, empty collections) from
file-level problems (corrupt or incompatible containers).
"""


class HDCError(Exception):
    """Base class for all hypervec errors."""


# ---- algebra / vector-level -------------------------------------------------

class DimensionMismatch(HDCError):
    """Operands have different dimensionality."""


class DomainMismatch(HDCError):
    """Operands live in different element domains, or an operation was asked
    for in a domain it does not support."""


class EmptyBundle(HDCError):
    """Bundle requested on an accumulator with no items."""


class ZeroElementBipolar(HDCError):
    """Bipolar bind/unbind received a vector containing 0 elements."""


class ZeroNorm(HDCError):
    """A norm-based operation received an all-zero vector."""


# ---- similarity -------------------------------------------------------------

class WrongDomainForMetric(HDCError):
    """Metric is undefined for the operands' element domain."""


class BothAllZero(HDCError):
    """Jaccard similarity of two all-zero vectors is undefined."""


class EmptyCandidates(HDCError):
    """top_k called with no candidates."""


# ---- item memory ------------------------------------------------------------

class UnknownParent(HDCError):
    """Correlated derivation references a symbol not in the memory."""


class DuplicateSymbol(HDCError):
    """Symbol already has an entry with a different derivation."""


class OutOfRange(HDCError):
    """Scalar outside the configured level-encoding range (and clamping off)."""


# ---- encoders ---------------------------------------------------------------

class EmptySequence(HDCError):
    """Sequence encoder received an empty sequence."""


class UnknownSymbol(HDCError):
    """Sequence contains a symbol outside the configured alphabet."""


class SequenceShorterThanN(HDCError):
    """Sequence shorter than the configured n-gram length."""


class EmptyRecord(HDCError):
    """Record encoder received no key-value pairs."""


class EmptySet(HDCError):
    """Set encoder received no items."""


class NonFiniteInput(HDCError):
    """Projection input contains NaN or infinity."""


class UnknownEndpoint(HDCError):
    """Graph edge references a node id that was not supplied."""


class SelfLoopUnsupported(HDCError):
    """Self-loops degenerate under XOR/product binding; rejected outside the
    real domain."""


class EmptyEdgeList(HDCError):
    """Graph encoder received no edges."""


# ---- learning ---------------------------------------------------------------

class SingleClass(HDCError):
    """Training needs at least two classes."""


class EmptyClass(HDCError):
    """A declared class has no training examples."""


class UnknownLabel(HDCError):
    """Retraining example labelled with a class the model does not have."""


# ---- associative memory -----------------------------------------------------

class DuplicateLabel(HDCError):
    """Label already stored in the memory."""


class EmptyMemory(HDCError):
    """Query on a memory with no entries."""


# ---- container files --------------------------------------------------------

class CorruptContainer(HDCError):
    """Container checksum or framing check failed."""


class VersionMismatch(HDCError):
    """Container format version or configuration is incompatible."""
