"""Bit-packed Boolean vectors, Hamming-space primitives, and datasets.

A :class:`BitVector` stores its coordinates packed into a single Python
integer (64-bit words end to end, coordinate ``i`` at bit position ``i``).
Bits at positions >= ``dim`` are forced to zero at construction, so storage
equality is vector equality and distance kernels never need to mask.

Vectors are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionMismatchError, EmptyInputError, ParseError

WORD_BITS = 64

__all__ = [
    "BitVector",
    "Dataset",
    "hamming_distance",
    "inner_product",
    "complement",
    "load_dataset",
    "dump_dataset",
    "bit_matrix",
    "pack_rows",
    "pack_vectors",
]


class BitVector:
    """A fixed-dimension 0/1 vector packed into 64-bit words.

    Attributes:
        dim:  Number of coordinates.
        bits: Packed storage as a nonnegative int; bit ``i`` is coordinate
              ``i`` and all bits at positions >= dim are zero.
    """

    __slots__ = ("dim", "bits")

    def __init__(self, dim: int, bits: int):
        if dim <= 0:
            raise ValueError(f"dim must be positive, got {dim}")
        if bits < 0:
            raise ValueError("bits must be nonnegative")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "bits", bits & ((1 << dim) - 1))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("BitVector is immutable")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVector":
        acc = 0
        n = 0
        for v in values:
            if v not in (0, 1):
                raise ValueError(f"coordinate values must be 0 or 1, got {v!r}")
            acc |= v << n
            n += 1
        if n == 0:
            raise ValueError("cannot build a 0-dimensional vector")
        return cls(n, acc)

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        """Parse a 0/1 string; the leftmost character is coordinate 0."""
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(len(s), int(s[::-1], 2))

    @classmethod
    def zeros(cls, dim: int) -> "BitVector":
        return cls(dim, 0)

    @classmethod
    def ones(cls, dim: int) -> "BitVector":
        return cls(dim, (1 << dim) - 1)

    @classmethod
    def random(cls, rng: np.random.Generator, dim: int) -> "BitVector":
        nbytes = (dim + 7) // 8
        data = rng.integers(0, 256, size=nbytes, dtype=np.uint16).astype(np.uint8)
        return cls(dim, int.from_bytes(data.tobytes(), "little"))

    @property
    def words(self) -> tuple[int, ...]:
        """The packed 64-bit words, low word first."""
        n_words = (self.dim + WORD_BITS - 1) // WORD_BITS
        mask = (1 << WORD_BITS) - 1
        return tuple((self.bits >> (WORD_BITS * w)) & mask for w in range(n_words))

    def weight(self) -> int:
        """Hamming weight |x| (population count)."""
        return self.bits.bit_count()

    def get(self, i: int) -> int:
        if not 0 <= i < self.dim:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def to_string(self) -> str:
        return format(self.bits, f"0{self.dim}b")[::-1]

    def to_hex(self) -> str:
        """Lowercase hex of the coordinate string read as a binary numeral (MSB first)."""
        width = (self.dim + 3) // 4
        padded = int(self.to_string().ljust(width * 4, "0"), 2)
        return format(padded, f"0{width}x")

    @classmethod
    def from_hex(cls, s: str, dim: int) -> "BitVector":
        width = (dim + 3) // 4
        if len(s) != width:
            raise ValueError(f"expected {width} hex digits for dim={dim}, got {len(s)}")
        bit_str = format(int(s, 16), f"0{width * 4}b")[:dim]
        return cls.from_string(bit_str)

    def __iter__(self) -> Iterator[int]:
        b = self.bits
        for _ in range(self.dim):
            yield b & 1
            b >>= 1

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.dim == other.dim
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.bits))

    def __repr__(self) -> str:
        shown = self.to_string() if self.dim <= 64 else self.to_string()[:61] + "..."
        return f"BitVector({shown})"


def _check_same_dim(u: BitVector, v: BitVector) -> None:
    if u.dim != v.dim:
        raise DimensionMismatchError(f"dimension mismatch: {u.dim} != {v.dim}")


def hamming_distance(u: BitVector, v: BitVector) -> int:
    """Number of coordinates where u and v differ."""
    _check_same_dim(u, v)
    return (u.bits ^ v.bits).bit_count()


def inner_product(u: BitVector, v: BitVector) -> int:
    """Number of coordinates where u and v are both 1."""
    _check_same_dim(u, v)
    return (u.bits & v.bits).bit_count()


def complement(u: BitVector) -> BitVector:
    """Flip every coordinate."""
    return BitVector(u.dim, u.bits ^ ((1 << u.dim) - 1))


def concat(vectors: Sequence[BitVector]) -> BitVector:
    """Concatenate vectors into one, first vector in the low coordinates."""
    acc = 0
    total = 0
    for v in vectors:
        acc |= v.bits << total
        total += v.dim
    return BitVector(total, acc)


@dataclass(frozen=True)
class Dataset:
    """Red and blue vector collections sharing one dimension.

    Results elsewhere reference members by (color, 0-based index), so the
    tuples keep file order.
    """

    dim: int
    red: tuple[BitVector, ...]
    blue: tuple[BitVector, ...]

    def __post_init__(self):
        for side in (self.red, self.blue):
            for v in side:
                if v.dim != self.dim:
                    raise DimensionMismatchError(
                        f"dataset dim {self.dim} but member has dim {v.dim}"
                    )

    @classmethod
    def from_lists(cls, red: Sequence[BitVector], blue: Sequence[BitVector]) -> "Dataset":
        members = list(red) + list(blue)
        if not members:
            raise EmptyInputError("dataset needs at least one vector to fix its dimension")
        return cls(members[0].dim, tuple(red), tuple(blue))


# ---------------------------------------------------------------------------
# File formats.
#
# text01:  line "R", one 0/1 string per red vector, line "B", blue vectors.
#          All vector lines share one length; "#" starts a comment line.
# hex:     header line "dim=<d>", then the same R/B structure with vectors
#          written as lowercase hex (coordinate string read MSB-first).
# ---------------------------------------------------------------------------

FORMATS = ("text01", "hex")


def load_dataset(source: str | bytes | IO, format: str = "text01") -> Dataset:
    """Parse a dataset from a string, bytes, or file-like object.

    Raises:
        ParseError: ragged lines, alphabet violations, or missing headers,
            with the offending 1-based line number.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if isinstance(source, bytes):
        text = source.decode("ascii")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")

    dim: int | None = None
    red: list[BitVector] = []
    blue: list[BitVector] = []
    current: list[BitVector] | None = None
    seen = {"R": False, "B": False}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if format == "hex" and line.startswith("dim="):
            if dim is not None:
                raise ParseError("duplicate dim= header", lineno)
            try:
                dim = int(line[4:])
            except ValueError:
                raise ParseError(f"bad dimension {line[4:]!r}", lineno) from None
            if dim <= 0:
                raise ParseError(f"dimension must be positive, got {dim}", lineno)
            continue
        if line in ("R", "B"):
            if seen[line]:
                raise ParseError(f"duplicate section header {line}", lineno)
            if line == "B" and not seen["R"]:
                raise ParseError("section B before section R", lineno)
            seen[line] = True
            current = red if line == "R" else blue
            continue
        if current is None:
            raise ParseError("vector before any section header", lineno)
        try:
            if format == "text01":
                vec = BitVector.from_string(line)
            else:
                if dim is None:
                    raise ParseError("vector before dim= header", lineno)
                vec = BitVector.from_hex(line, dim)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if dim is None:
            dim = vec.dim
        elif vec.dim != dim:
            raise ParseError(f"expected {dim} coordinates, got {vec.dim}", lineno)
        current.append(vec)

    if not seen["R"] or not seen["B"]:
        missing = "R" if not seen["R"] else "B"
        raise ParseError(f"missing section header {missing}")
    if dim is None:
        raise ParseError("dataset contains no vectors, dimension unknown")
    return Dataset(dim, tuple(red), tuple(blue))


def dump_dataset(ds: Dataset, format: str = "text01") -> str:
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    out = io.StringIO()
    if format == "hex":
        out.write(f"dim={ds.dim}\n")
    out.write("R\n")
    for v in ds.red:
        out.write((v.to_string() if format == "text01" else v.to_hex()) + "\n")
    out.write("B\n")
    for v in ds.blue:
        out.write((v.to_string() if format == "text01" else v.to_hex()) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# numpy views used by the batch kernels.
# ---------------------------------------------------------------------------


def bit_matrix(vectors: Sequence[BitVector], dim: int | None = None) -> np.ndarray:
    """Stack vectors into an (n, dim) uint8 matrix of raw coordinates."""
    if dim is None:
        if not vectors:
            raise EmptyInputError("need at least one vector or an explicit dim")
        dim = vectors[0].dim
    nbytes = (dim + 7) // 8
    rows = np.frombuffer(
        b"".join(v.bits.to_bytes(nbytes, "little") for v in vectors), dtype=np.uint8
    ).reshape(len(vectors), nbytes)
    return np.unpackbits(rows, axis=1, bitorder="little", count=dim)


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack an (n, d) 0/1 matrix into (n, ceil(d/64)) uint64 words."""
    n, d = bits.shape
    packed8 = np.packbits(bits.astype(np.uint8), axis=1, bitorder="little")
    pad = (-packed8.shape[1]) % 8
    if pad:
        packed8 = np.pad(packed8, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed8).view(np.uint64)


def pack_vectors(vectors: Sequence[BitVector], dim: int | None = None) -> np.ndarray:
    """Pack vectors straight into (n, ceil(dim/64)) uint64 words."""
    if dim is None:
        if not vectors:
            raise EmptyInputError("need at least one vector or an explicit dim")
        dim = vectors[0].dim
    n_words = (dim + WORD_BITS - 1) // WORD_BITS
    out = np.empty((len(vectors), n_words), dtype=np.uint64)
    nbytes = n_words * 8
    for i, v in enumerate(vectors):
        out[i] = np.frombuffer(v.bits.to_bytes(nbytes, "little"), dtype=np.uint64)
    return out


def packed_distance_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All-pairs Hamming distances between packed uint64 row sets."""
    # (n, 1, W) xor (1, m, W) -> popcount -> sum words
    x = a[:, None, :] ^ b[None, :, :]
    return np.bitwise_count(x).sum(axis=2, dtype=np.int64)
