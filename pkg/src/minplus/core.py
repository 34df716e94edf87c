"""Shared domain types for (min,+) kernels: bounded integer matrices and
vectors, monotone-subsequence decompositions, Boolean characteristic
vectors, witness arrays, and outputs with an explicit +infinity sentinel.

Conventions used throughout the package:

* matrices are square and externally 1-based (entry(i, j) with i, j in 1..n);
  the backing numpy arrays are 0-based,
* vectors are 0-based (coordinates a_0 .. a_{n-1}),
* decomposition part indices are 0-based positions into their host sequence,
* witness indices are 1-based for matrix products and 0-based for
  convolutions, with -1 marking "no witness".

All types are immutable after construction (numpy buffers are marked
read-only), so they can be shared freely across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

#: Magnitude bound for entries of freshly constructed inputs.  Chosen so that
#: index-scaled shifts a + 2*k*M (k <= n <= MAX_DIMENSION, M <= ENTRY_BOUND)
#: stay far inside the 64-bit range.
ENTRY_BOUND = 2**31 - 1

#: Looser magnitude bound applied to shift-transformed matrices/vectors.
#: Any two values below this bound can be added without 64-bit overflow.
SHIFTED_ENTRY_BOUND = 2**62 - 1

#: Dimension cap backing the overflow argument above.
MAX_DIMENSION = 2**20

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

#: Sentinel stored in witness arrays where no witness exists.
NO_WITNESS = -1


class MinPlusError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(MinPlusError):
    """Two matrices (or a matrix and a decomposition set) disagree on n."""


class LengthMismatch(MinPlusError):
    """Two vectors (or a vector and a decomposition) disagree on length."""


class OverlapError(MinPlusError):
    """Two parts of a decomposition claim the same host index."""

    def __init__(self, index: int, first_part: int, second_part: int):
        super().__init__(
            f"index {index} appears in parts {first_part} and {second_part}"
        )
        self.index = index
        self.first_part = first_part
        self.second_part = second_part


class CoverageGapError(MinPlusError):
    """A decomposition does not cover every host index."""

    def __init__(self, index: int):
        super().__init__(f"index {index} is not covered by any part")
        self.index = index


class OrderViolation(MinPlusError):
    """A part's values do not satisfy its monotonicity tag."""

    def __init__(self, part: int, position: int, message: str = ""):
        super().__init__(
            message or f"part {part} breaks its order between positions "
            f"{position} and {position + 1}"
        )
        self.part = part
        self.position = position


class DirectionViolation(MinPlusError):
    """A decomposition part does not satisfy the direction an algorithm
    requires."""


class UniformViolation(MinPlusError):
    """A part that must be constant-valued is not."""


class PrecisionWindowExceeded(MinPlusError):
    """Convolution inputs too large for the exact transform window."""


class IndexOutOfRange(MinPlusError):
    """A subsequence index falls outside its host sequence."""


def checked_add(x: int, y: int) -> int:
    """Exact integer sum, refusing to produce a value outside 64 bits.

    Both operands are expected to be within the 64-bit range already; the
    guard is on the result, so pairs like 2**62 + 2**62 raise rather than
    silently wrapping in downstream int64 arithmetic.
    """
    s = int(x) + int(y)
    if s < INT64_MIN or s > INT64_MAX:
        raise OverflowError(f"{x} + {y} leaves the 64-bit range")
    return s


class MonotoneTag(enum.Enum):
    """Direction of a monotone subsequence.

    UNIFORM (all values equal) satisfies both the non-decreasing and the
    non-increasing order, and is accepted wherever either is required.
    """

    NON_DECREASING = "nondec"
    NON_INCREASING = "noninc"
    UNIFORM = "uniform"


def values_satisfy(values: np.ndarray, tag: MonotoneTag) -> bool:
    """Whether a value sequence satisfies the (weak) order of ``tag``."""
    if len(values) <= 1:
        return True
    diffs = np.diff(values)
    if tag is MonotoneTag.NON_DECREASING:
        return bool(np.all(diffs >= 0))
    if tag is MonotoneTag.NON_INCREASING:
        return bool(np.all(diffs <= 0))
    return bool(np.all(diffs == 0))


@dataclass(frozen=True)
class Subsequence:
    """A tagged subsequence of a host sequence, stored as 0-based positions.

    ``indices`` must be strictly increasing.  Empty subsequences are legal;
    they are used to pad decompositions to a common part count.
    """

    indices: tuple[int, ...]
    tag: MonotoneTag

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        for a, b in zip(self.indices, self.indices[1:]):
            if b <= a:
                raise ValueError(f"indices not strictly increasing: {a} !< {b}")
        if self.indices and self.indices[0] < 0:
            raise ValueError("negative subsequence index")

    def __len__(self) -> int:
        return len(self.indices)

    def values(self, host: np.ndarray) -> np.ndarray:
        """Host values read at this subsequence's positions."""
        return host[list(self.indices)]


@dataclass(frozen=True)
class Decomposition:
    """A list of tagged subsequences meant to partition ``{0..host_length-1}``.

    Construction performs only structural checks so that invalid candidates
    can still be built and then rejected by :func:`validate_decomposition`.
    """

    host_length: int
    parts: tuple[Subsequence, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if self.host_length < 1:
            raise ValueError("host_length must be >= 1")

    @property
    def part_count(self) -> int:
        return len(self.parts)

    def padded(self, count: int) -> "Decomposition":
        """Copy with empty UNIFORM parts appended up to ``count`` parts."""
        if count < self.part_count:
            raise ValueError(
                f"cannot pad {self.part_count} parts down to {count}"
            )
        extra = tuple(
            Subsequence((), MonotoneTag.UNIFORM)
            for _ in range(count - self.part_count)
        )
        return Decomposition(self.host_length, self.parts + extra)


IntSeq = Union[Sequence[int], np.ndarray]


def _as_int64(values: IntSeq, what: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == np.int64:
        return arr
    if arr.dtype.kind not in "iu":
        raise TypeError(f"{what} must hold integers, got dtype {arr.dtype}")
    return arr.astype(np.int64)


class IntVector:
    """Dense vector of bounded signed integers, 0-based."""

    __slots__ = ("coords",)

    def __init__(self, coords: IntSeq, *, entry_bound: int = ENTRY_BOUND):
        arr = _as_int64(coords, "vector").copy()
        if arr.ndim != 1:
            raise ValueError("vector input must be one-dimensional")
        n = arr.shape[0]
        if n < 1 or n > MAX_DIMENSION:
            raise ValueError(f"vector length {n} outside [1, {MAX_DIMENSION}]")
        if np.abs(arr).max() > entry_bound:
            raise ValueError(
                f"coordinate magnitude exceeds the bound {entry_bound}"
            )
        arr.setflags(write=False)
        self.coords = arr

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        return int(self.coords[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntVector) and np.array_equal(
            self.coords, other.coords
        )

    def __hash__(self):
        return hash((self.n, self.coords.tobytes()))

    def __repr__(self) -> str:
        return f"IntVector({self.coords.tolist()!r})"


class IntMatrix:
    """Dense square matrix of bounded signed integers, externally 1-based."""

    __slots__ = ("entries",)

    def __init__(self, entries: IntSeq, *, entry_bound: int = ENTRY_BOUND):
        arr = _as_int64(entries, "matrix").copy()
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"matrix must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n < 1 or n > MAX_DIMENSION:
            raise ValueError(f"dimension {n} outside [1, {MAX_DIMENSION}]")
        if np.abs(arr).max() > entry_bound:
            raise ValueError(
                f"entry magnitude exceeds the bound {entry_bound}"
            )
        arr.setflags(write=False)
        self.entries = arr

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> int:
        """Entry at 1-based row i, column j."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexOutOfRange(f"({i}, {j}) outside [1, {self.n}]^2")
        return int(self.entries[i - 1, j - 1])

    def row(self, i: int) -> np.ndarray:
        """Row i (1-based) as a read-only array."""
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"row {i} outside [1, {self.n}]")
        return self.entries[i - 1]

    def col(self, j: int) -> np.ndarray:
        """Column j (1-based) as a read-only array."""
        if not 1 <= j <= self.n:
            raise IndexOutOfRange(f"column {j} outside [1, {self.n}]")
        return self.entries[:, j - 1]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.entries.T, entry_bound=SHIFTED_ENTRY_BOUND)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and np.array_equal(
            self.entries, other.entries
        )

    def __hash__(self):
        return hash((self.n, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"IntMatrix({self.entries.tolist()!r})"


class BoolVector:
    """Characteristic Boolean vector (one bit per host position)."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.asarray(bits)
        if arr.dtype != np.bool_:
            arr = arr.astype(bool)
        else:
            arr = arr.copy()
        if arr.ndim != 1:
            raise ValueError("bool vector must be one-dimensional")
        arr.setflags(write=False)
        self.bits = arr

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "BoolVector":
        bits = np.zeros(n, dtype=bool)
        for i in indices:
            if not 0 <= i < n:
                raise IndexOutOfRange(f"index {i} outside [0, {n})")
            bits[i] = True
        return cls(bits)

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def indices(self) -> tuple[int, ...]:
        """Positions of the set bits, ascending."""
        return tuple(int(i) for i in np.flatnonzero(self.bits))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, BoolVector) and np.array_equal(
            self.bits, other.bits
        )

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BoolVector({self.bits.astype(int).tolist()!r})"


class BoolMatrix:
    """Square Boolean matrix."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.asarray(bits)
        if arr.dtype != np.bool_:
            arr = arr.astype(bool)
        else:
            arr = arr.copy()
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"bool matrix must be square, got {arr.shape}")
        arr.setflags(write=False)
        self.bits = arr

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, BoolMatrix) and np.array_equal(
            self.bits, other.bits
        )

    def __hash__(self):
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BoolMatrix({self.bits.astype(int).tolist()!r})"


class WitnessArray:
    """Extreme witnesses for a Boolean product (2-D, 1-based witness values)
    or a Boolean convolution (1-D, 0-based witness values).

    Cells without a witness hold :data:`NO_WITNESS`.
    """

    __slots__ = ("values",)

    def __init__(self, values: np.ndarray):
        arr = np.asarray(values, dtype=np.int64).copy()
        if arr.ndim not in (1, 2):
            raise ValueError("witness array must be 1-D or 2-D")
        arr.setflags(write=False)
        self.values = arr

    @property
    def defined(self) -> np.ndarray:
        """Boolean mask of cells that have a witness."""
        return self.values != NO_WITNESS

    def get(self, *pos: int):
        """Witness at (i, j) (1-based cell, matrix) or (k,) (convolution);
        None where the product/convolution bit is 0."""
        if self.values.ndim == 2:
            i, j = pos
            v = self.values[i - 1, j - 1]
        else:
            (k,) = pos
            v = self.values[k]
        return None if v == NO_WITNESS else int(v)

    def __eq__(self, other) -> bool:
        return isinstance(other, WitnessArray) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash((self.values.shape, self.values.tobytes()))

    def __repr__(self) -> str:
        return f"WitnessArray({self.values.tolist()!r})"


class MinPlusOutput:
    """Result of a (min,+) product (2-D) or convolution (1-D).

    Entries are either finite 64-bit integers or +infinity; infinity is a
    mask bit, never an encoded large number, so no arithmetic is ever
    performed on it.
    """

    __slots__ = ("values", "finite")

    def __init__(self, values: np.ndarray, finite: np.ndarray | None = None):
        arr = np.asarray(values, dtype=np.int64).copy()
        if finite is None:
            fin = np.ones(arr.shape, dtype=bool)
        else:
            fin = np.asarray(finite, dtype=bool).copy()
        if fin.shape != arr.shape:
            raise ValueError("values and finiteness mask shapes differ")
        arr[~fin] = 0  # canonical filler under the mask
        arr.setflags(write=False)
        fin.setflags(write=False)
        self.values = arr
        self.finite = fin

    @property
    def is_matrix(self) -> bool:
        return self.values.ndim == 2

    @property
    def all_finite(self) -> bool:
        return bool(self.finite.all())

    def entry(self, i: int, j: int):
        """Matrix entry at 1-based (i, j); None encodes +infinity."""
        if not self.is_matrix:
            raise ValueError("entry() applies to matrix outputs")
        return int(self.values[i - 1, j - 1]) if self.finite[i - 1, j - 1] else None

    def coord(self, k: int):
        """Convolution coordinate c_k (0-based); None encodes +infinity."""
        if self.is_matrix:
            raise ValueError("coord() applies to vector outputs")
        return int(self.values[k]) if self.finite[k] else None

    def __eq__(self, other) -> bool:
        if not isinstance(other, MinPlusOutput):
            return False
        return bool(
            self.values.shape == other.values.shape
            and np.array_equal(self.finite, other.finite)
            and np.array_equal(
                self.values[self.finite], other.values[other.finite]
            )
        )

    def __hash__(self):
        return hash(
            (self.values.shape, self.values.tobytes(), self.finite.tobytes())
        )

    def __repr__(self) -> str:
        return (
            f"MinPlusOutput(values={self.values.tolist()!r}, "
            f"finite={self.finite.tolist()!r})"
        )


@dataclass
class OpCounters:
    """Mutable tally of the expensive calls an algorithm run performs.

    Passed into the (min,+) algorithms by callers that want the cost
    structure (tests, CLI provenance, benchmarks).
    """

    witness_matrix_calls: int = 0
    witness_conv_calls: int = 0
    bool_products: int = 0
    bool_convolutions: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "witness_matrix_calls": self.witness_matrix_calls,
            "witness_conv_calls": self.witness_conv_calls,
            "bool_products": self.bool_products,
            "bool_convolutions": self.bool_convolutions,
        }


def validate_decomposition(d: Decomposition, host: IntVector | IntSeq) -> None:
    """Check that ``d`` is a partition of the host's positions and that every
    part satisfies its monotonicity tag; raise on the first violation.

    Raises OverlapError, CoverageGapError, IndexOutOfRange, LengthMismatch or
    OrderViolation (naming the offending part and position).
    """
    values = host.coords if isinstance(host, IntVector) else _as_int64(host, "host")
    n = values.shape[0]
    if d.host_length != n:
        raise LengthMismatch(
            f"decomposition is for length {d.host_length}, host has {n}"
        )
    owner = np.full(n, -1, dtype=np.int64)
    for p, part in enumerate(d.parts):
        for i in part.indices:
            if i >= n:
                raise IndexOutOfRange(f"part {p} index {i} outside [0, {n})")
            if owner[i] >= 0:
                raise OverlapError(i, int(owner[i]), p)
            owner[i] = p
    uncovered = np.flatnonzero(owner < 0)
    if uncovered.size:
        raise CoverageGapError(int(uncovered[0]))
    for p, part in enumerate(d.parts):
        vals = part.values(values)
        if not values_satisfy(vals, part.tag):
            diffs = np.diff(vals)
            if part.tag is MonotoneTag.NON_DECREASING:
                bad = int(np.flatnonzero(diffs < 0)[0])
            elif part.tag is MonotoneTag.NON_INCREASING:
                bad = int(np.flatnonzero(diffs > 0)[0])
            else:
                bad = int(np.flatnonzero(diffs != 0)[0])
            raise OrderViolation(p, bad)
