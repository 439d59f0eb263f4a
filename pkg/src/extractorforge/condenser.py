"""Strong lossless condenser built from iterated polynomial powering.

The source is read as a polynomial f of degree below n_tilde over GF(2^w).
A seed y in GF(2^w) maps to the output symbols f^(h^i)(y) mod E for
i = 0 .. m' - 1, where E is a fixed irreducible polynomial of degree
n_tilde and h is a power of two.  The strong form appends the seed.

Parameter resolution, smallest field width w such that

  * the source fits: n_tilde = ceil(n / w) <= 2^w,
  * h = 2^ceil(log2(max(2, 2 n_tilde / eps))) and
    w >= ceil(log2(n_tilde * h^2 / eps)),
  * (2^k - 1) * (n_tilde - 1) <= eps * 2^w,
  * m' = min(ceil((k + 2 ceil(log2(1/eps))) / w) + 1, n_tilde) gives
    k <= m' * w <= (1 + alpha) * k + w.

The third inequality is what makes the unique-neighbor check a theorem at
desk scale rather than an empirical hope: two distinct source polynomials
already agree on coordinate i = 0 for at most n_tilde - 1 seeds, so a union
bound over the support caps the colliding fraction of (x, y) pairs by
(2^k - 1)(n_tilde - 1) / 2^w <= eps, for every support of size 2^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bits import BitString
from .errors import InfeasibleParameterError
from .gf2 import get_field
from .poly import FieldPoly, find_irreducible, poly_pow_mod

_MAX_SEED_WIDTH = 24


@dataclass(frozen=True)
class CondenserSpec:
    n: int
    k: int
    epsilon: Fraction
    alpha: Fraction
    field_width: int
    message_symbols: int
    power: int
    output_symbols: int
    modulus: FieldPoly

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.power < 2 or self.power & (self.power - 1):
            raise ValueError(f"power must be a power of two >= 2, got {self.power}")
        if not 1 <= self.output_symbols <= self.message_symbols:
            raise ValueError("output symbols must be in [1, message symbols]")
        if self.modulus.degree != self.message_symbols:
            raise ValueError("modulus degree must equal the message symbol count")
        if self.output_bits < self.k:
            raise ValueError("output shorter than the entropy it must preserve")

    @property
    def seed_bits(self) -> int:
        return self.field_width

    @property
    def output_bits(self) -> int:
        return self.output_symbols * self.field_width

    def to_json_dict(self) -> dict:
        return {
            "type": "guv",
            "n": self.n,
            "k": self.k,
            "epsilon": [self.epsilon.numerator, self.epsilon.denominator],
            "alpha": [self.alpha.numerator, self.alpha.denominator],
            "w": self.field_width,
            "messageSymbols": self.message_symbols,
            "h": self.power,
            "outputSymbols": self.output_symbols,
            "modulusE": list(self.modulus.coeffs),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CondenserSpec":
        return cls(
            n=data["n"],
            k=data["k"],
            epsilon=Fraction(*data["epsilon"]),
            alpha=Fraction(*data["alpha"]),
            field_width=data["w"],
            message_symbols=data["messageSymbols"],
            power=data["h"],
            output_symbols=data["outputSymbols"],
            modulus=FieldPoly(tuple(data["modulusE"]), data["w"]),
        )


def _ceil_log2(value: Fraction) -> int:
    if value <= 0:
        raise ValueError("log of a nonpositive value")
    bits = 0
    while (1 << bits) < value:
        bits += 1
    return bits


def build_condenser(
    n: int, k: int, epsilon: Fraction | float, alpha: Fraction | float
) -> CondenserSpec:
    """Smallest-seed spec satisfying the documented inequalities."""
    epsilon = Fraction(epsilon)
    alpha = Fraction(alpha)
    if not 0 < k <= n:
        raise InfeasibleParameterError(
            f"need 0 < k <= n, got k={k}, n={n}", constraint="0 < k <= n"
        )
    if alpha <= 0:
        raise InfeasibleParameterError(
            f"alpha must be positive, got {alpha}", constraint="alpha > 0"
        )
    if not 0 < epsilon < 1:
        raise InfeasibleParameterError(
            f"epsilon must be in (0, 1), got {epsilon}", constraint="0 < epsilon < 1"
        )
    log_eps_inv = _ceil_log2(1 / epsilon)
    last_failure = "no width fits the source"
    for w in range(2, _MAX_SEED_WIDTH + 1):
        n_tilde = -(-n // w)
        if n_tilde > 1 << w:
            continue
        h = 1 << _ceil_log2(max(Fraction(2), Fraction(2 * n_tilde) / epsilon))
        if w < _ceil_log2(Fraction(n_tilde * h * h) / epsilon):
            last_failure = "w >= log2(n_tilde * h^2 / eps)"
            continue
        if ((1 << k) - 1) * (n_tilde - 1) > epsilon * (1 << w):
            last_failure = "(2^k - 1)(n_tilde - 1) <= eps * 2^w"
            continue
        m_out = min(-(-(k + 2 * log_eps_inv) // w) + 1, n_tilde)
        if m_out * w < k:
            last_failure = "m' * w >= k"
            continue
        if m_out * w > (1 + alpha) * k + w:
            last_failure = "m' * w <= (1 + alpha) k + w"
            continue
        return CondenserSpec(
            n=n,
            k=k,
            epsilon=epsilon,
            alpha=alpha,
            field_width=w,
            message_symbols=n_tilde,
            power=h,
            output_symbols=m_out,
            modulus=find_irreducible(w, n_tilde),
        )
    raise InfeasibleParameterError(
        f"no feasible condenser for n={n}, k={k}, eps={epsilon}, alpha={alpha}; "
        f"last violated constraint: {last_failure}",
        constraint=last_failure,
    )


def _message_poly(spec: CondenserSpec, x: BitString) -> FieldPoly:
    if len(x) != spec.n:
        raise ValueError(f"source is {len(x)} bits, spec wants {spec.n}")
    w = spec.field_width
    value = x.to_int()
    mask = (1 << w) - 1
    coeffs = tuple((value >> (i * w)) & mask for i in range(spec.message_symbols))
    return FieldPoly(coeffs, w)


@lru_cache(maxsize=8)
def _power_exponents(power: int, count: int) -> tuple[int, ...]:
    return tuple(power**i for i in range(count))


def residue_powers(spec: CondenserSpec, x: BitString) -> list[FieldPoly]:
    """The polynomials f^(h^i) mod E for i = 0 .. m' - 1.

    Each is derived from the previous by an h-th power, so the chain costs
    m' * log2(h) squarings.
    """
    f = _message_poly(spec, x) % spec.modulus
    out = [f]
    for _ in range(1, spec.output_symbols):
        out.append(poly_pow_mod(out[-1], spec.power, spec.modulus))
    return out


def guv_condense(spec: CondenserSpec, x: BitString, y: BitString) -> BitString:
    """Output symbols f^(h^i)(y), concatenated least-significant-symbol first."""
    if len(y) != spec.seed_bits:
        raise ValueError(f"seed is {len(y)} bits, spec wants {spec.seed_bits}")
    yv = y.to_int()
    w = spec.field_width
    value = 0
    for i, poly in enumerate(residue_powers(spec, x)):
        value |= poly.eval_int(yv) << (i * w)
    return BitString(value, spec.output_bits)


def strong_form(spec: CondenserSpec, x: BitString, y: BitString) -> BitString:
    """Condensed output with the seed appended."""
    return guv_condense(spec, x, y) + y


class StrongCondenserMap:
    """Callable (x, y) -> C(x, y) || y with per-source caching for speed."""

    def __init__(self, spec: CondenserSpec):
        self.spec = spec
        self.input_bits = spec.n
        self.seed_bits = spec.seed_bits
        self.output_bits = spec.output_bits + spec.seed_bits

    def __call__(self, x: BitString, y: BitString) -> BitString:
        return strong_form(self.spec, x, y)

    def image_table(self, xs: list[int]) -> np.ndarray:
        """Packed strong-form images for every (x, y), shape (len(xs), 2^d).

        Entry [i, y] equals strong_form(spec, x_i, y).to_int(); the packed
        value must fit in a signed 64-bit integer.
        """
        spec = self.spec
        w = spec.field_width
        if self.output_bits > 62:
            raise ValueError("packed strong-form image does not fit in int64")
        field = get_field(w)
        exp, log = field.exp_log_tables()
        exp_arr = np.asarray(exp, dtype=np.int64)
        log_arr = np.asarray(log, dtype=np.int64)
        q = 1 << w
        ys = np.arange(q, dtype=np.int64)
        out = np.zeros((len(xs), q), dtype=np.int64)
        for row, xv in enumerate(xs):
            polys = residue_powers(spec, BitString(xv, spec.n))
            packed = ys << spec.output_bits
            for i, poly in enumerate(polys):
                acc = np.zeros(q, dtype=np.int64)
                for c in reversed(poly.coeffs):
                    nz = (acc != 0) & (ys != 0)
                    prod = np.zeros(q, dtype=np.int64)
                    prod[nz] = exp_arr[log_arr[acc[nz]] + log_arr[ys[nz]]]
                    acc = prod ^ c
                packed = packed | (acc << (i * w))
            out[row] = packed
        return out
