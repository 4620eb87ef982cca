import math
from fractions import Fraction

import numpy as np
import pytest

import derham as dr
from derham.errors import DomainError, ResourceLimitError
from derham.oracles import AffineDigitFamily


CANTOR_FAM = AffineDigitFamily(3, (Fraction(1, 2), Fraction(0), Fraction(1, 2)),
                               (Fraction(0), Fraction(1, 2), Fraction(1, 2)))


def test_family_tiling_enforced():
    with pytest.raises(DomainError):
        AffineDigitFamily(2, (0.5, 0.5), (0.0, 0.4))
    with pytest.raises(DomainError):
        AffineDigitFamily(2, (0.5, 0.5), (0.1, 0.6))
    with pytest.raises(DomainError):
        AffineDigitFamily(2, (1.0, 0.5), (0.0, 1.0))


def test_family_from_system(bern14, minkowski):
    fam = AffineDigitFamily.from_system(bern14)
    assert fam.rates == (0.25, 0.75)
    assert fam.offsets == (0.0, 0.25)
    with pytest.raises(DomainError):
        AffineDigitFamily.from_system(minkowski)


def test_series_examples():
    assert dr.affine_digit_series(CANTOR_FAM, dr.MadicDigits(3, (1,))) == Fraction(1, 2)
    bern = AffineDigitFamily(2, (Fraction(1, 4), Fraction(3, 4)),
                             (Fraction(0), Fraction(1, 4)))
    assert dr.affine_digit_series(bern, dr.MadicDigits(2, (1, 1))) == Fraction(7, 16)
    oka = AffineDigitFamily.from_system(dr.build_preset("okamoto", (0.2, 0.6)))
    assert dr.affine_digit_series(oka, dr.MadicDigits(3, (2,))) == 0.6


def test_series_base_mismatch():
    with pytest.raises(DomainError):
        dr.affine_digit_series(CANTOR_FAM, dr.MadicDigits(2, (1,)))


def test_series_matches_solver(cantor, bern14, okamoto26):
    rng = np.random.Generator(np.random.PCG64(17))
    for sys_ in (cantor, bern14, okamoto26):
        fam = AffineDigitFamily.from_system(sys_)
        for _ in range(100):
            n = int(rng.integers(1, 21))
            d = dr.MadicDigits(sys_.m, tuple(int(x) for x in rng.integers(0, sys_.m, n)))
            assert abs(dr.eval_G_madic(sys_, d) - float(dr.affine_digit_series(fam, d))) < 1e-12


def test_question_mark_values():
    assert dr.minkowski_q(Fraction(1, 2)) == Fraction(1, 2)
    assert dr.minkowski_q(Fraction(2, 3)) == Fraction(3, 4)
    assert dr.minkowski_q(Fraction(1, 3)) == Fraction(1, 4)
    assert dr.minkowski_q(Fraction(0)) == 0
    assert dr.minkowski_q(Fraction(1)) == 1
    # ? maps the golden-ratio-like rationals to dyadics: 3/5 = [0;1,1,2]
    assert dr.minkowski_q(Fraction(3, 5)) == Fraction(5, 8)


def test_question_mark_input_checks():
    with pytest.raises(DomainError):
        dr.minkowski_q(0.5)
    with pytest.raises(DomainError):
        dr.minkowski_q(Fraction(5, 4))
    with pytest.raises(DomainError):
        dr.minkowski_q(Fraction(1, 10**9 + 7))


def test_stern_brocot_values():
    assert dr.minkowski_q_inverse(dr.MadicDigits(2, (1,))) == Fraction(1, 2)
    assert dr.minkowski_q_inverse(dr.MadicDigits(2, (1, 1))) == Fraction(2, 3)
    assert dr.minkowski_q_inverse(dr.MadicDigits(2, (0, 1))) == Fraction(1, 3)
    with pytest.raises(DomainError):
        dr.minkowski_q_inverse(dr.MadicDigits(3, (1,)))


def test_stern_brocot_overflow_guard():
    # alternating digits grow the mediants like Fibonacci numbers
    with pytest.raises(ResourceLimitError):
        dr.minkowski_q_inverse(dr.MadicDigits(2, (0, 1) * 60))


def test_question_mark_round_trip():
    rng = np.random.Generator(np.random.PCG64(23))
    for _ in range(200):
        n = int(rng.integers(1, 21))
        d = dr.MadicDigits(2, tuple(int(x) for x in rng.integers(0, 2, n)))
        assert dr.minkowski_q(dr.minkowski_q_inverse(d)) == d.value()


def test_takagi_values():
    assert dr.takagi(0.0) == 0.0
    assert dr.takagi(0.5, terms=50) == 0.5
    assert dr.takagi(0.25, terms=50) == 0.5


def test_takagi_symmetry():
    xs = np.linspace(0.0, 1.0, 1001)
    assert np.max(np.abs(dr.takagi(xs) - dr.takagi(1.0 - xs))) < 1e-12


def test_takagi_array_matches_scalar():
    xs = np.array([0.1, 0.3, 0.7])
    arr = dr.takagi(xs, terms=40)
    assert arr.shape == (3,)
    for x, v in zip(xs, arr):
        assert v == dr.takagi(float(x), terms=40)


def test_takagi_truncation():
    xs = np.linspace(0.0, 1.0, 97)
    assert np.max(np.abs(dr.takagi(xs, 12) - dr.takagi(xs, 60))) <= 2.0 ** -12


def test_takagi_terms_check():
    with pytest.raises(DomainError):
        dr.takagi(0.5, terms=0)
