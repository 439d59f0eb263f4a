"""Binary code with random access to single codeword bits.

The code is a Reed-Solomon code over GF(2^w) concatenated with the Hadamard
code.  A message of n_tilde symbols (w bits each, symbol i in message bits
[i*w, (i+1)*w), least-significant bit first) is a polynomial p of degree
below n_tilde.  Codeword bit indices have 2w bits and parse as (alpha, z)
with alpha in the high word; the bit value is the GF(2) inner product of
p(alpha) and the mask z.

Bit positions are computed on demand in O(n_tilde) field operations, which
is what makes the code usable as the inner code of a seed-restricted
extractor: no codeword is ever materialized unless a caller asks for all
positions explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bits import BitString
from .gf2 import get_field


@dataclass(frozen=True)
class CodeSpec:
    field_width: int
    message_symbols: int

    def __post_init__(self):
        if self.field_width < 1:
            raise ValueError(f"field width must be >= 1, got {self.field_width}")
        if not 1 <= self.message_symbols <= (1 << self.field_width):
            raise ValueError(
                f"message symbols must be in [1, 2^{self.field_width}], "
                f"got {self.message_symbols}"
            )

    @property
    def message_bits(self) -> int:
        return self.message_symbols * self.field_width

    @property
    def index_bits(self) -> int:
        return 2 * self.field_width

    @property
    def codeword_bits(self) -> int:
        return 1 << self.index_bits

    def to_json_dict(self) -> dict:
        return {"w": self.field_width, "messageSymbols": self.message_symbols}

    @classmethod
    def from_json_dict(cls, data: dict) -> "CodeSpec":
        return cls(field_width=data["w"], message_symbols=data["messageSymbols"])


def _message_coeffs(spec: CodeSpec, x: BitString) -> list[int]:
    w = spec.field_width
    if len(x) != spec.message_bits:
        raise ValueError(
            f"message is {len(x)} bits, spec wants {spec.message_bits}"
        )
    value = x.to_int()
    mask = (1 << w) - 1
    return [(value >> (i * w)) & mask for i in range(spec.message_symbols)]


def encode_bit(spec: CodeSpec, x: BitString, index: int) -> int:
    """Codeword bit at ``index`` for message ``x``."""
    if not 0 <= index < spec.codeword_bits:
        raise ValueError(f"index {index} outside [0, {spec.codeword_bits})")
    w = spec.field_width
    alpha = index >> w
    z = index & ((1 << w) - 1)
    field = get_field(w)
    acc = 0
    for c in reversed(_message_coeffs(spec, x)):
        acc = field.mul(acc, alpha) ^ c
    return (acc & z).bit_count() & 1


def code_distance(spec: CodeSpec) -> Fraction:
    """Designed relative distance: (1 - (n_tilde - 1)/2^w) / 2."""
    return (1 - Fraction(spec.message_symbols - 1, 1 << spec.field_width)) / 2


_BATCH_WIDTH_LIMIT = 8


@lru_cache(maxsize=None)
def _vector_tables(width: int) -> tuple[np.ndarray, np.ndarray]:
    """(mul, parity) lookup tables for vectorized encoding; width <= 8."""
    q = 1 << width
    field = get_field(width)
    mul = np.zeros((q, q), dtype=np.uint16)
    for a in range(q):
        for b in range(q):
            mul[a, b] = field.mul(a, b)
    masked = np.bitwise_and(np.arange(q, dtype=np.uint16)[:, None], np.arange(q, dtype=np.uint16)[None, :])
    parity = np.zeros((q, q), dtype=np.uint8)
    v = masked.astype(np.uint32)
    while v.max() > 0:
        parity ^= (v & 1).astype(np.uint8)
        v >>= 1
    return mul, parity


def evaluate_messages(spec: CodeSpec, xs: Sequence[int]) -> np.ndarray:
    """Polynomial evaluations p_x(alpha) for every message and every alpha.

    Returns an array of shape (len(xs), 2^w) of field elements.  Requires
    field width <= 8 so lookup tables stay small; larger widths take the
    scalar path through :func:`encode_bit`.
    """
    w = spec.field_width
    if w > _BATCH_WIDTH_LIMIT:
        raise ValueError(f"vectorized encoding supports width <= {_BATCH_WIDTH_LIMIT}")
    q = 1 << w
    mul, _ = _vector_tables(w)
    values = np.asarray(list(xs), dtype=np.int64)
    if values.size and (values.min() < 0 or values.max() >> spec.message_bits):
        raise ValueError("message out of range for spec")
    coeffs = [
        ((values >> (i * w)) & (q - 1)).astype(np.uint16)
        for i in range(spec.message_symbols)
    ]
    alphas = np.arange(q, dtype=np.uint16)
    acc = np.zeros((len(values), q), dtype=np.uint16)
    for c in reversed(coeffs):
        acc = mul[acc, alphas[None, :]] ^ c[:, None]
    return acc


def encode_all_positions(spec: CodeSpec, xs: Sequence[int]) -> np.ndarray:
    """Full codewords, shape (len(xs), 2^(2w)) of 0/1 bytes.

    Position alpha * 2^w + z holds the parity of p_x(alpha) AND z, exactly
    as :func:`encode_bit` computes it one bit at a time.
    """
    w = spec.field_width
    q = 1 << w
    _, parity = _vector_tables(w)
    evals = evaluate_messages(spec, xs)
    out = parity[evals.astype(np.intp)]
    return out.reshape(len(evals), q * q)
