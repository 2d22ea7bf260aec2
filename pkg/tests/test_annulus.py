import pytest
from hypothesis import given, strategies as st

from skeinym.annulus import (AnnulusElement, annulus_mul, annulus_pairing, annulus_ym, kirby_partial,
                             solve_handleslide_coeffs)
from skeinym.errors import RegimeError
from skeinym.numerics import Param
from skeinym.recoupling import quantum_int

S = AnnulusElement.basis
HALF = Param.generic(0.5)

coeff_maps = st.dictionaries(st.integers(0, 12), st.integers(-5, 5), max_size=5)


def test_mul_examples():
    x = AnnulusElement({0: 2.0, 3: -1.0, 7: 0.5})
    assert annulus_mul(None, S(0), x) == x
    assert annulus_mul(None, S(1), S(1)) == S(0) + S(2)
    assert annulus_mul(None, S(2), S(3)) == S(1) + S(3) + S(5)


def test_mul_truncates_at_root():
    p = Param.root_of_unity(4)
    assert annulus_mul(p, S(1), S(2)) == S(1)


@given(coeff_maps, coeff_maps, coeff_maps)
def test_mul_commutative_associative(a, b, c):
    x, y, z = AnnulusElement(a), AnnulusElement(b), AnnulusElement(c)
    assert annulus_mul(None, x, y) == annulus_mul(None, y, x)
    assert annulus_mul(None, annulus_mul(None, x, y), z) == annulus_mul(None, x, annulus_mul(None, y, z))


def test_ym_examples():
    assert annulus_ym(S(0)) == 1
    assert annulus_ym(S(3)) == 0
    assert annulus_ym(annulus_mul(None, S(1), S(1))) == 1


def test_pairing_orthonormal():
    for i in range(21):
        assert annulus_pairing(None, S(i), S(i)) == 1
    assert annulus_pairing(None, S(2), S(4)) == 0


@given(coeff_maps, coeff_maps)
def test_pairing_is_dot_product(a, b):
    want = sum(a[i] * b[i] for i in a if i in b)
    assert annulus_pairing(None, AnnulusElement(a), AnnulusElement(b)) == want


def test_kirby_partial_examples():
    assert kirby_partial(HALF, 0) == S(0)
    k1 = kirby_partial(HALF, 1)
    assert k1.coefficient(0) == 1
    assert k1.coefficient(1) == pytest.approx(-4.25)
    r3 = kirby_partial(Param.root_of_unity(3), 10)
    assert set(r3.coeffs) == {0, 1}
    assert r3.coefficient(1) == pytest.approx(-1.0, rel=1e-12)


@pytest.mark.parametrize("t", [0.5, -1.0])
def test_kirby_eigen_relation(t):
    p = Param.from_value(t)
    n = 200
    omega = kirby_partial(p, n)
    lhs = annulus_mul(p, S(1), omega)
    two = quantum_int(p, 2)
    for j in range(n):
        want = complex(two * omega.coefficient(j) * -1)
        assert complex(lhs.coefficient(j)) == pytest.approx(want, rel=1e-12)


def test_kirby_large_coefficients_stay_scaled():
    omega = kirby_partial(HALF, 600)
    top = omega.coefficient(600)
    assert top.abs_log2() == pytest.approx(2 * 600 - __import__("math").log2(1 - 1 / 16), rel=1e-12)


def test_handleslide_coefficients():
    alpha = solve_handleslide_coeffs(HALF, 50)
    assert alpha[0].to_complex() == 1
    assert alpha[1].to_complex() == pytest.approx(-4.25)
    for i, a in enumerate(alpha):
        want = quantum_int(HALF, i + 1) * (-1 if i % 2 else 1)
        assert abs((a - want).to_complex()) <= 1e-12 * abs(want.to_complex())
    with pytest.raises(RegimeError):
        solve_handleslide_coeffs(Param.root_of_unity(5), 3)
