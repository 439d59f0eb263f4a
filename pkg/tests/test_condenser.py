from fractions import Fraction

import numpy as np
import pytest

from extractorforge.bits import BitString
from extractorforge.condenser import (
    CondenserSpec,
    StrongCondenserMap,
    build_condenser,
    guv_condense,
    residue_powers,
    strong_form,
)
from extractorforge.detrand import CounterRng
from extractorforge.errors import InfeasibleParameterError
from extractorforge.oracle import injective_fraction, sample_flat_sources
from extractorforge.poly import FieldPoly, find_irreducible

from helpers import ref_poly_pow_mod


def _manual_spec():
    # w=3, n_tilde=2, h=2, m'=2: small enough to trace by hand
    return CondenserSpec(
        n=6,
        k=3,
        epsilon=Fraction(1, 2),
        alpha=Fraction(4),
        field_width=3,
        message_symbols=2,
        power=2,
        output_symbols=2,
        modulus=find_irreducible(3, 2),
    )


def test_constant_message_ignores_seed():
    spec = _manual_spec()
    x = BitString(0b000101, 6)  # only the low symbol is nonzero
    outputs = {guv_condense(spec, x, BitString(y, 3)).to_int() for y in range(8)}
    assert len(outputs) == 1


def test_single_symbol_output_is_one_evaluation():
    spec = CondenserSpec(
        n=6,
        k=2,
        epsilon=Fraction(1, 2),
        alpha=Fraction(4),
        field_width=3,
        message_symbols=2,
        power=2,
        output_symbols=1,
        modulus=find_irreducible(3, 2),
    )
    x = BitString(0b110101, 6)
    f = FieldPoly((0b101, 0b110), 3)
    for y in range(8):
        out = guv_condense(spec, x, BitString(y, 3))
        assert out.to_int() == f.eval_int(y)


def test_small_instance_matches_naive_powering():
    spec = _manual_spec()
    rng = CounterRng(0x6D4)
    for _ in range(20):
        xv = rng.below(64)
        yv = rng.below(8)
        x = BitString(xv, 6)
        out = guv_condense(spec, x, BitString(yv, 3))
        coeffs = [xv & 7, (xv >> 3) & 7]
        expected = 0
        for i in range(2):
            power = ref_poly_pow_mod(coeffs, 2**i, list(spec.modulus.coeffs), 3)
            from extractorforge.gf2 import get_field

            field = get_field(3)
            acc = 0
            for c in reversed(power if power else [0]):
                acc = field.mul(acc, yv) ^ c
            expected |= acc << (3 * i)
        assert out.to_int() == expected


def test_residue_powers_chain():
    spec = _manual_spec()
    x = BitString(0b110101, 6)
    polys = residue_powers(spec, x)
    assert len(polys) == 2
    expect = ref_poly_pow_mod([0b101, 0b110], 2, list(spec.modulus.coeffs), 3)
    assert list(polys[1].coeffs) == expect


def test_strong_form_appends_seed():
    spec = _manual_spec()
    x = BitString(0b011011, 6)
    y = BitString(0b101, 3)
    sf = strong_form(spec, x, y)
    assert len(sf) == spec.output_bits + spec.seed_bits
    assert sf[spec.output_bits :] == y
    assert sf[0 : spec.output_bits] == guv_condense(spec, x, y)


def test_build_full_entropy_becomes_passthrough():
    spec = build_condenser(10, 10, Fraction(1, 4), Fraction(1, 2))
    assert spec.message_symbols == 1
    assert spec.output_symbols == 1
    assert spec.output_bits == 10
    # single-symbol messages are constants: the output is the input
    for xv in (0, 5, 1023):
        x = BitString(xv, 10)
        for yv in (0, 9):
            assert guv_condense(spec, x, BitString(yv, spec.seed_bits)).to_int() == xv
    cmap = StrongCondenserMap(spec)
    src = sample_flat_sources(10, 4, 1, seed=3)[0]
    assert injective_fraction(cmap, src, spec.seed_bits) == 1


def test_build_desk_scale_instance():
    spec = build_condenser(12, 6, Fraction(1, 4), 1)
    assert spec.output_bits <= (1 + spec.alpha) * spec.k + spec.seed_bits
    assert spec.output_bits >= spec.k
    # documented collision budget: support * (n_tilde - 1) <= eps * field
    assert ((1 << spec.k) - 1) * (spec.message_symbols - 1) <= spec.epsilon * (
        1 << spec.field_width
    )


def test_build_epsilon_monotonicity():
    widths = []
    for eps in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)):
        widths.append(build_condenser(12, 6, eps, 1).field_width)
    assert widths == sorted(widths)


def test_build_rejects_impossible_alpha():
    # n too long for a passthrough width, and alpha too small for the
    # two-symbol output budget
    with pytest.raises(InfeasibleParameterError) as exc:
        build_condenser(40, 8, Fraction(1, 4), Fraction(1, 1000))
    assert "m' * w <= (1 + alpha) k + w" in exc.value.constraint
    # the same shape succeeds once alpha gives the output room
    assert build_condenser(40, 8, Fraction(1, 4), 1).output_bits >= 8


def test_build_validations():
    with pytest.raises(InfeasibleParameterError):
        build_condenser(8, 0, Fraction(1, 4), 1)
    with pytest.raises(InfeasibleParameterError):
        build_condenser(8, 9, Fraction(1, 4), 1)
    with pytest.raises(InfeasibleParameterError):
        build_condenser(8, 4, Fraction(2), 1)


def test_build_deterministic():
    assert build_condenser(12, 6, Fraction(1, 4), 1) == build_condenser(
        12, 6, Fraction(1, 4), 1
    )


def test_image_table_matches_strong_form():
    spec = build_condenser(12, 6, Fraction(1, 4), 1)
    cmap = StrongCondenserMap(spec)
    rng = CounterRng(0x1A81E)
    xs = [rng.below(1 << 12) for _ in range(6)]
    table = cmap.image_table(xs)
    for row, xv in enumerate(xs):
        for yv in (0, 1, 100, (1 << spec.seed_bits) - 1):
            expect = strong_form(spec, BitString(xv, 12), BitString(yv, spec.seed_bits))
            assert int(table[row, yv]) == expect.to_int()


def test_injectivity_on_sampled_sources():
    spec = build_condenser(12, 6, Fraction(1, 4), 1)
    cmap = StrongCondenserMap(spec)
    for source in sample_flat_sources(12, 6, 5, seed=8):
        xs = [x.to_int() for x in source.support]
        frac = injective_fraction(
            cmap, source, spec.seed_bits, image_table=cmap.image_table(xs)
        )
        assert frac >= 1 - spec.epsilon


def test_spec_validation():
    with pytest.raises(ValueError):
        CondenserSpec(
            n=6,
            k=3,
            epsilon=Fraction(1, 2),
            alpha=Fraction(4),
            field_width=3,
            message_symbols=2,
            power=3,  # not a power of two
            output_symbols=2,
            modulus=find_irreducible(3, 2),
        )
    with pytest.raises(ValueError):
        CondenserSpec(
            n=6,
            k=3,
            epsilon=Fraction(1, 2),
            alpha=Fraction(4),
            field_width=3,
            message_symbols=2,
            power=2,
            output_symbols=3,  # more outputs than message symbols
            modulus=find_irreducible(3, 2),
        )
