"""GF(2) polynomial arithmetic and the binary extension fields GF(2^w).

Polynomials over GF(2) are nonnegative integers whose binary digits are the
coefficients: bit i is the coefficient of z^i.  Field elements of GF(2^w)
are integers below 2^w, reduced modulo the canonical irreducible polynomial
returned by :func:`field_modulus`.

The modulus for each width is not taken from a table; it is found by a
deterministic scan (smallest polynomial with constant term 1 that passes a
gcd-based irreducibility test), so any independent implementation of the
same rule lands on the same field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import FieldMismatchError

MAX_FIELD_WIDTH = 32

# Widths up to this get full exp/log tables; larger fields fall back to
# shift-and-xor multiplication and extended-gcd inversion.
_TABLE_WIDTH_LIMIT = 16


def gf2x_degree(a: int) -> int:
    """Degree of a GF(2) polynomial; -1 for the zero polynomial."""
    return a.bit_length() - 1


def gf2x_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def gf2x_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = gf2x_degree(b)
    q = 0
    while True:
        da = gf2x_degree(a)
        if da < db:
            return q, a
        shift = da - db
        q ^= 1 << shift
        a ^= b << shift


def gf2x_mod(a: int, b: int) -> int:
    return gf2x_divmod(a, b)[1]


def gf2x_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2x_mod(a, b)
    return a


def _gf2x_invmod(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` via the extended Euclidean algorithm."""
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    s, s1 = 1, 0
    r, r1 = a, m
    while r1:
        q, rem = gf2x_divmod(r, r1)
        r, r1 = r1, rem
        s, s1 = s1, s ^ gf2x_mul(q, s1)
    if r != 1:
        raise ZeroDivisionError(f"{a:#x} is not invertible modulo {m:#x}")
    return gf2x_mod(s, m)


def _gf2x_mulmod(a: int, b: int, m: int) -> int:
    return gf2x_mod(gf2x_mul(a, b), m)


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def gf2x_irreducible(f: int) -> bool:
    """Rabin irreducibility test for a GF(2) polynomial.

    f of degree r is irreducible iff z^(2^r) = z (mod f) and, for every
    prime p dividing r, gcd(z^(2^(r/p)) - z, f) is constant.
    """
    r = gf2x_degree(f)
    if r < 1:
        return False
    z = 0b10
    # power = z^(2^k) mod f, advanced by repeated squaring
    power = gf2x_mod(z, f)
    checkpoints = {r // p for p in _prime_factors(r)}
    for k in range(1, r + 1):
        power = _gf2x_mulmod(power, power, f)
        if k in checkpoints:
            if gf2x_degree(gf2x_gcd(power ^ gf2x_mod(z, f), f)) > 0:
                return False
    return power == gf2x_mod(z, f)


@lru_cache(maxsize=None)
def field_modulus(width: int) -> int:
    """Canonical irreducible degree-``width`` polynomial over GF(2).

    Returns the smallest (as a (width+1)-bit integer) irreducible polynomial
    with nonzero constant term.  Deterministic by construction.
    """
    if width < 1 or width > MAX_FIELD_WIDTH:
        raise ValueError(f"field width must be in [1, {MAX_FIELD_WIDTH}], got {width}")
    candidate = (1 << width) | 1
    while candidate < (1 << (width + 1)):
        if gf2x_irreducible(candidate):
            return candidate
        candidate += 2
    raise AssertionError(f"no irreducible polynomial of degree {width}")


class GF2Field:
    """Arithmetic in GF(2^w) on plain integers below 2^w."""

    def __init__(self, width: int):
        self.width = width
        self.modulus = field_modulus(width)
        self.order = 1 << width
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if width <= _TABLE_WIDTH_LIMIT:
            self._build_tables()

    def _mul_raw(self, a: int, b: int) -> int:
        result = 0
        top = self.order
        while b:
            if b & 1:
                result ^= a
            a <<= 1
            if a & top:
                a ^= self.modulus
            b >>= 1
        return result

    def _build_tables(self):
        # z = 0b10 need not generate the whole multiplicative group, so scan
        # for the first element that does.
        size = self.order - 1
        for g in range(2, self.order):
            exp = [1] * (2 * size)
            log = [0] * self.order
            v = 1
            ok = True
            for i in range(size):
                exp[i] = v
                if v == 1 and i > 0:
                    ok = False
                    break
                log[v] = i
                v = self._mul_raw(v, g)
            if ok and v == 1:
                for i in range(size, 2 * size):
                    exp[i] = exp[i - size]
                self._exp = exp
                self._log = log
                return
        if self.order == 2:
            self._exp = [1, 1]
            self._log = [0, 0]
            return
        raise AssertionError(f"no generator found for GF(2^{self.width})")

    def check(self, a: int) -> int:
        if a < 0 or a >= self.order:
            raise ValueError(f"{a} is not an element of GF(2^{self.width})")
        return a

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^w)")
        if a == 1:
            return 1
        if self._exp is not None:
            return self._exp[(self.order - 1) - self._log[a]]
        return _gf2x_invmod(a, self.modulus)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def exp_log_tables(self) -> tuple[list[int], list[int]]:
        """(exp, log) tables for vectorized callers; width must be small."""
        if self._exp is None:
            raise ValueError(f"no tables for width {self.width} > {_TABLE_WIDTH_LIMIT}")
        return self._exp, self._log


@lru_cache(maxsize=None)
def get_field(width: int) -> GF2Field:
    return GF2Field(width)


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(2^w), tagged with its field width.

    Mixing widths in arithmetic raises :class:`FieldMismatchError`; there is
    no implicit embedding between fields.
    """

    value: int
    width: int

    def __post_init__(self):
        if self.width < 1 or self.width > MAX_FIELD_WIDTH:
            raise ValueError(f"bad field width {self.width}")
        if self.value < 0 or self.value >> self.width:
            raise ValueError(
                f"value {self.value} outside GF(2^{self.width})"
            )

    def _check_same_field(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if self.width != other.width:
            raise FieldMismatchError(
                f"cannot mix GF(2^{self.width}) and GF(2^{other.width})"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        return FieldElement(self.value ^ other.value, self.width)

    __sub__ = __add__
    __xor__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        return FieldElement(get_field(self.width).mul(self.value, other.value), self.width)

    def inverse(self) -> "FieldElement":
        return FieldElement(get_field(self.width).inv(self.value), self.width)

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(get_field(self.width).pow(self.value, e), self.width)

    def __repr__(self) -> str:
        return f"FieldElement({self.value:#x}, width={self.width})"


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Product in GF(2^w); widths must match."""
    return a * b


def gf_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse; raises ZeroDivisionError on zero."""
    return a.inverse()
