import cmath
import json
import math
import random

import pytest

from skeinym.numerics import Param
from skeinym.torus import (PairClass, TorusElement, act_sl2, chebyshev_power, commutator, dump_expression,
                           invariant_trace, load_expression, mu, torus_basis_mul, torus_mul, torus_ym)

T = 0.5
E8 = cmath.exp(1j * math.pi / 8)
B = TorusElement.basis


def close(x: TorusElement, y: TorusElement, tol=1e-12):
    d = x - y
    return abs(d.empty) <= tol and all(abs(c) <= tol for c in d.coeffs.values())


def scale_of(x: TorusElement) -> float:
    return max([abs(x.empty), 1.0] + [abs(c) for c in x.coeffs.values()])


def random_element(rng, terms=6, span=5):
    coeffs = {}
    for _ in range(rng.randint(1, terms)):
        key = (rng.randint(-span, span), rng.randint(-span, span))
        coeffs[key] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return TorusElement(complex(rng.uniform(-1, 1)) if rng.random() < 0.3 else 0j, coeffs)


def test_pair_class():
    assert PairClass.of(-2, 3) == (2, -3)
    assert PairClass.of(0, -4) == (0, 4)
    assert B(-1, -1) == B(1, 1)
    assert TorusElement(0j, {(0, 0): 1.0}).empty == 2


def test_basis_mul_examples():
    assert close(torus_basis_mul(T, (1, 0), (0, 1)), B(1, 1, T) + B(1, -1, 1 / T))
    assert close(torus_basis_mul(T, (1, 0), (1, 0)), B(2, 0) + TorusElement(2.0))
    assert close(torus_basis_mul(T, (2, 0), (1, 0)), B(3, 0) + B(1, 0))
    x = random_element(random.Random(1))
    assert close(torus_mul(T, TorusElement.unit(), x), x)


def test_commutator_example():
    got = commutator(T, B(1, 0), B(0, 1))
    assert close(got, (B(1, 1) - B(1, -1)).scale(T - 1 / T))


def test_classical_commutative():
    rng = random.Random(2)
    for _ in range(50):
        x, y = random_element(rng), random_element(rng)
        assert close(commutator(-1, x, y), TorusElement())


def test_associative():
    rng = random.Random(3)
    for _ in range(30):
        x, y, z = (random_element(rng, 3, 3) for _ in range(3))
        assert close(torus_mul(E8, torus_mul(E8, x, y), z), torus_mul(E8, x, torus_mul(E8, y, z)), 1e-10)


def test_mu_examples():
    m = mu(TorusElement.unit())
    assert m.empty == 1 and all(v == 0 for v in m.homology.values())
    assert mu(B(2, 0)).homology[(0, 0)] == 1
    assert mu(B(3, 5)).homology[(1, 1)] == 1


@pytest.mark.parametrize("t", [T, E8])
def test_commutators_in_kernel(t):
    rng = random.Random(4)
    for _ in range(100):
        x, y = random_element(rng, 4, 3), random_element(rng, 4, 3)
        z = commutator(t, x, y)
        m = mu(z)
        tol = 1e-13 * scale_of(z)
        assert abs(m.empty) < 1e-12
        assert all(abs(v) < tol for v in m.homology.values())


def test_trace_examples():
    assert torus_ym(TorusElement.unit()) == 1
    assert torus_ym(B(3, 5)) == 0
    assert torus_ym(torus_mul(T, B(1, 0), B(1, 0))) == 2


@pytest.mark.parametrize("t", [T, E8])
def test_trace_kills_commutators(t):
    rng = random.Random(5)
    for _ in range(1000):
        x, y = random_element(rng), random_element(rng)
        assert abs(torus_ym(commutator(t, x, y))) < 1e-12


def test_invariant_traces():
    rng = random.Random(6)
    w = (0.3, -1.2, 2.5)
    mats = [(1, 1, 0, 1), (0, -1, 1, 0), (2, 1, 1, 1)]
    for _ in range(100):
        x, y = random_element(rng), random_element(rng)
        z = commutator(T, x, y)
        assert abs(invariant_trace(z, *w)) < 1e-13 * scale_of(z)
        for m in mats:
            assert invariant_trace(act_sl2(x, *m), *w) == pytest.approx(invariant_trace(x, *w), abs=1e-12)
    with pytest.raises(ValueError):
        act_sl2(B(1, 0), 1, 1, 1, 1)


def test_sl2_action_is_algebra_map():
    rng = random.Random(7)
    m = (2, 1, 1, 1)
    for _ in range(30):
        x, y = random_element(rng, 3, 3), random_element(rng, 3, 3)
        lhs = act_sl2(torus_mul(E8, x, y), *m)
        rhs = torus_mul(E8, act_sl2(x, *m), act_sl2(y, *m))
        assert close(lhs, rhs, 1e-10)


@pytest.mark.parametrize("t", [T, E8, Param.root_of_unity(5)])
def test_chebyshev(t):
    for p, q in [(1, 0), (0, 1), (1, 1), (2, 3), (3, -2)]:
        assert close(chebyshev_power(t, p, q, 0), TorusElement(2.0))
        for d in range(1, 7):
            assert close(chebyshev_power(t, p, q, d), B(d * p, d * q), 1e-9)


def test_json_round_trip():
    rng = random.Random(8)
    x = random_element(rng)
    text = json.dumps(dump_expression(x))
    assert load_expression(text) == x
    y = load_expression([{"p": 1, "q": 0, "re": 1.0}, {"p": -1, "q": 0, "re": 2.0, "im": 1.0}])
    assert y == B(1, 0, 3 + 1j)
    z = load_expression({"terms": [], "empty": {"re": 0.5, "im": -1}})
    assert z.empty == 0.5 - 1j
