"""Independent reference implementations used as test oracles.

Everything here is deliberately written differently from the package code:
list-based polynomial arithmetic, trial-division irreducibility, explicit
matrices.  Tests compare package results against these.
"""

from fractions import Fraction

from extractorforge.bits import BitString
from extractorforge.gf2 import get_field


def ref_gf2x_mul(a: int, b: int) -> int:
    """Product of GF(2) polynomials via explicit exponent sets."""
    result = 0
    for i in range(a.bit_length()):
        if (a >> i) & 1:
            for j in range(b.bit_length()):
                if (b >> j) & 1:
                    result ^= 1 << (i + j)
    return result


def ref_gf2x_mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def trial_division_irreducible(f: int) -> bool:
    """Irreducibility by scanning all candidate divisors of degree <= deg/2."""
    degree = f.bit_length() - 1
    if degree < 1:
        return False
    for d in range(2, 1 << (degree // 2 + 1)):
        if d.bit_length() - 1 < 1:
            continue
        if ref_gf2x_mod(f, d) == 0:
            return False
    return True


def ref_field_mul(a: int, b: int, width: int, modulus: int) -> int:
    return ref_gf2x_mod(ref_gf2x_mul(a, b), modulus)


def ref_poly_divmod(num: list[int], den: list[int], width: int):
    """Long division of coefficient lists (lowest degree first) over GF(2^w)."""
    field = get_field(width)

    def deg(p):
        d = len(p) - 1
        while d >= 0 and p[d] == 0:
            d -= 1
        return d

    num = list(num)
    dn, dd = deg(num), deg(den)
    if dd < 0:
        raise ZeroDivisionError
    quot = [0] * (max(dn - dd + 1, 1))
    inv_lead = field.inv(den[dd])
    while deg(num) >= dd:
        dn = deg(num)
        factor = field.mul(num[dn], inv_lead)
        shift = dn - dd
        quot[shift] = factor
        for i in range(dd + 1):
            num[shift + i] ^= field.mul(factor, den[i])
    return quot, num


def ref_poly_pow_mod(f: list[int], e: int, modulus: list[int], width: int) -> list[int]:
    """f^e mod modulus by plain repeated multiplication (no squaring trick)."""
    field = get_field(width)

    def mul(p, q):
        out = [0] * (len(p) + len(q) - 1 if p and q else 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] ^= field.mul(a, b)
        return out

    result = [1]
    _, result = ref_poly_divmod(result, modulus, width)
    for _ in range(e):
        result = mul(result, f)
        _, result = ref_poly_divmod(result, modulus, width)
    # strip trailing zeros for comparison
    while len(result) > 0 and result[-1] == 0:
        result.pop()
    return result


def ref_codeword(width: int, symbols: int, x: int) -> list[int]:
    """Full concatenated codeword for message x, one bit per index."""
    field = get_field(width)
    q = 1 << width
    coeffs = [(x >> (i * width)) & (q - 1) for i in range(symbols)]
    bits = []
    for alpha in range(q):
        value = 0
        for c in reversed(coeffs):
            value = field.mul(value, alpha) ^ c
        for z in range(q):
            bits.append(bin(value & z).count("1") % 2)
    return bits


def ref_toeplitz_matrix(seed_bits: list[int], n: int, m: int) -> list[list[int]]:
    return [[seed_bits[i - j + n - 1] for j in range(n)] for i in range(m)]


def ref_matrix_vector(matrix: list[list[int]], x_bits: list[int]) -> list[int]:
    return [sum(r * v for r, v in zip(row, x_bits)) % 2 for row in matrix]


def ref_joint_seed_output_distance(extract, n_support, t, m, support):
    """Exact distance of (Y, E(X, Y)) from uniform by direct enumeration,
    written independently of the oracle module."""
    counts = {}
    for x in support:
        for y in range(1 << t):
            e = extract(x, BitString(y, t)).to_int()
            counts[(y, e)] = counts.get((y, e), 0) + 1
    total_pairs = len(support) * (1 << t)
    uniform = Fraction(1, (1 << t) * (1 << m))
    dist = Fraction(0)
    for y in range(1 << t):
        for e in range(1 << m):
            p = Fraction(counts.get((y, e), 0), total_pairs)
            dist += abs(p - uniform)
    return dist / 2


def grid_min_distance_to_capped(probs: list[Fraction], kappa: int, steps: int):
    """Brute-force minimum distance from ``probs`` to any distribution with
    min-entropy >= kappa, over a simplex grid with the given resolution.

    The candidate domain is the original outcomes plus enough fresh outcomes
    to hold the displaced mass.  Exhaustive over compositions of ``steps``.
    """
    cap = Fraction(1, 1 << kappa)
    extra = max(0, (1 << kappa) - len(probs))
    domain = len(probs) + extra
    best = None

    def compositions(remaining, slots):
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in compositions(remaining - first, slots - 1):
                yield (first,) + rest

    for combo in compositions(steps, domain):
        candidate = [Fraction(c, steps) for c in combo]
        if any(p > cap for p in candidate):
            continue
        dist = (
            sum(
                abs(candidate[i] - (probs[i] if i < len(probs) else Fraction(0)))
                for i in range(domain)
            )
            / 2
        )
        if best is None or dist < best:
            best = dist
    return best
