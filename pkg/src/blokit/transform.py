"""The BLO (block logic operation) enrollment transform.

A feature vector is cut into blocks of a fixed odd size b.  Each block is
mapped to b-1 bits by XORing every bit with the middle (pivot) bit and
dropping the pivot; the outputs are concatenated into the protected
template.  The map is deterministic and keyless.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from pathlib import Path

from .bits import BitString, FeatureVector
from .errors import InvalidArgumentError, MalformedInputError

BLO_MAGIC = b"BLO1"
BLO_VERSION = 1


class PaddingPolicy(enum.Enum):
    """How inputs whose length is not a multiple of the block size are handled."""

    ZERO_PAD = "zero-pad"
    TRUNCATE = "truncate"


_POLICY_BYTE = {PaddingPolicy.ZERO_PAD: 0x00, PaddingPolicy.TRUNCATE: 0x01}
_BYTE_POLICY = {v: k for k, v in _POLICY_BYTE.items()}


@dataclass(frozen=True)
class TransformParams:
    """Transform configuration: odd block size and padding policy."""

    block_size: int
    padding: PaddingPolicy = PaddingPolicy.ZERO_PAD

    def __post_init__(self) -> None:
        if self.block_size < 3:
            raise InvalidArgumentError(f"block size must be at least 3, got {self.block_size}")
        if self.block_size % 2 == 0:
            raise InvalidArgumentError(f"block size must be odd, got {self.block_size}")

    @property
    def pivot_index(self) -> int:
        """0-based index of the middle bit consumed by the XORs."""
        return (self.block_size - 1) // 2


@dataclass(frozen=True)
class ProtectedTemplate:
    """The transformed template plus the parameters that produced it."""

    data: BitString
    params: TransformParams
    original_length: int
    block_count: int

    def __post_init__(self) -> None:
        b = self.params.block_size
        if self.block_count < 1:
            raise InvalidArgumentError("template must hold at least one block")
        if self.data.length != self.block_count * (b - 1):
            raise InvalidArgumentError(
                f"template holds {self.data.length} bits, "
                f"expected {self.block_count} blocks of {b - 1}"
            )
        expected = _block_count(self.original_length, self.params)
        if expected != self.block_count:
            raise InvalidArgumentError(
                f"{self.original_length}-bit input yields {expected} blocks "
                f"under {self.params.padding.value}, not {self.block_count}"
            )

    def same_template(self, other: "ProtectedTemplate") -> bool:
        """Matching-equivalence: equal payload under equal parameters.

        Forged inputs live in the padded domain, so their re-transform can
        differ from the target in ``original_length`` while matching
        everywhere it counts.
        """
        return self.params == other.params and self.data == other.data


def _block_count(length: int, params: TransformParams) -> int:
    b = params.block_size
    if params.padding is PaddingPolicy.TRUNCATE:
        if length < b:
            raise InvalidArgumentError(f"{length}-bit input is shorter than one {b}-bit block")
        return length // b
    if length < 1:
        raise InvalidArgumentError("input must contain at least one bit")
    return -(-length // b)


def _aligned_value(bs: BitString, params: TransformParams) -> "tuple[int, int]":
    """Apply the padding policy; return (value, block count)."""
    n = _block_count(bs.length, params)
    total = n * params.block_size
    if total >= bs.length:
        return bs.value << (total - bs.length), n
    return bs.value >> (bs.length - total), n


def _coerce(fv: "FeatureVector | BitString") -> BitString:
    return fv.data if isinstance(fv, FeatureVector) else fv


def _transform_block_value(block: int, shift: int, out_mask: int) -> int:
    # shift = distance of the pivot bit from the LSB end of the block
    merged = ((block >> (shift + 1)) << shift) | (block & ((1 << shift) - 1))
    if (block >> shift) & 1:
        merged ^= out_mask
    return merged


def _transform_value(value: int, nblocks: int, b: int) -> int:
    shift = b - 1 - (b - 1) // 2
    block_mask = (1 << b) - 1
    out_mask = (1 << (b - 1)) - 1
    low_mask = (1 << shift) - 1
    out = 0
    for i in range(nblocks - 1, -1, -1):
        block = (value >> (i * b)) & block_mask
        merged = ((block >> (shift + 1)) << shift) | (block & low_mask)
        if (block >> shift) & 1:
            merged ^= out_mask
        out |= merged << (i * (b - 1))
    return out


def segment(fv: "FeatureVector | BitString", params: TransformParams) -> "list[BitString]":
    """Cut the input into consecutive block-size slices after padding/truncation."""
    bs = _coerce(fv)
    value, n = _aligned_value(bs, params)
    b = params.block_size
    mask = (1 << b) - 1
    return [BitString((value >> ((n - 1 - i) * b)) & mask, b) for i in range(n)]


def transform_block(block: BitString) -> BitString:
    """Map one odd-length block to one bit fewer: XOR all bits with the pivot, drop it."""
    b = block.length
    if b < 3 or b % 2 == 0:
        raise InvalidArgumentError(f"block length must be odd and >= 3, got {b}")
    shift = b - 1 - (b - 1) // 2
    out = _transform_block_value(block.value, shift, (1 << (b - 1)) - 1)
    return BitString(out, b - 1)


def transform(fv: "FeatureVector | BitString", params: TransformParams) -> ProtectedTemplate:
    """Transform a feature vector into its protected template.

    Deterministic: equal inputs always give bit-identical templates.
    """
    bs = _coerce(fv)
    value, n = _aligned_value(bs, params)
    out = _transform_value(value, n, params.block_size)
    return ProtectedTemplate(
        data=BitString(out, n * (params.block_size - 1)),
        params=params,
        original_length=bs.length,
        block_count=n,
    )


def write_template_file(path: "str | Path", tpl: ProtectedTemplate) -> None:
    """Write the '.blo' codec: magic, version, policy, sizes, packed payload."""
    if tpl.original_length >= 1 << 32 or tpl.data.length >= 1 << 32:
        raise InvalidArgumentError("lengths do not fit the 32-bit header fields")
    header = struct.pack(
        ">4sBBHII",
        BLO_MAGIC,
        BLO_VERSION,
        _POLICY_BYTE[tpl.params.padding],
        tpl.params.block_size,
        tpl.original_length,
        tpl.data.length,
    )
    Path(path).write_bytes(header + tpl.data.pack())


def read_template_file(path: "str | Path") -> ProtectedTemplate:
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:4] != BLO_MAGIC:
        raise MalformedInputError(f"{path}: not a template file (bad magic)")
    _, version, policy_byte, block_size, original_length, data_bits = struct.unpack(
        ">4sBBHII", raw[:16]
    )
    if version != BLO_VERSION:
        raise MalformedInputError(f"{path}: unsupported version {version}")
    if policy_byte not in _BYTE_POLICY:
        raise MalformedInputError(f"{path}: unknown padding policy byte {policy_byte:#x}")
    try:
        params = TransformParams(block_size, _BYTE_POLICY[policy_byte])
        data = BitString.unpack(raw[16:], data_bits)
        if data_bits % (block_size - 1):
            raise InvalidArgumentError(
                f"payload of {data_bits} bits is not a whole number of blocks"
            )
        return ProtectedTemplate(
            data=data,
            params=params,
            original_length=original_length,
            block_count=data_bits // (block_size - 1),
        )
    except InvalidArgumentError as exc:
        raise MalformedInputError(f"{path}: {exc}") from exc
