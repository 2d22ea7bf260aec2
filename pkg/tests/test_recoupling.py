import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.physics.wigner import wigner_6j

from skeinym.errors import AdmissibilityError, DomainError, RegimeError
from skeinym.numerics import Param
from skeinym.recoupling import (admissible, check_est1, est2_bound, est2_quantity, quantum_factorial,
                                quantum_int, sixj, tet, theta, vertex_constant)
from skeinym.verify import orthogonality_sums, random_tet_labels

HALF = Param.generic(0.5)
CLASSICAL = Param.classical(-1)


# exact oracle at t = 1/2, u = 1/4
def q_exact(n, u=Fraction(1, 4)):
    return (u ** n - u ** -n) / (u - 1 / u)


def qf_exact(n):
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= q_exact(k)
    return out


def theta_exact(a, b, c):
    s = (a + b + c) // 2
    return (-1) ** s * qf_exact(s + 1) * qf_exact(s - a) * qf_exact(s - b) * qf_exact(s - c) / (
        qf_exact(a) * qf_exact(b) * qf_exact(c))


def tet_exact(a, b, e, c, d, f):
    tri = [(a + d + e) // 2, (b + c + e) // 2, (a + b + f) // 2, (c + d + f) // 2]
    sq = [(a + b + c + d) // 2, (a + c + e + f) // 2, (b + d + e + f) // 2]
    pre = Fraction(1)
    for bj in sq:
        for ai in tri:
            pre *= qf_exact(bj - ai)
    for x in (a, b, c, d, e, f):
        pre /= qf_exact(x)
    total = Fraction(0)
    for s in range(max(tri), min(sq) + 1):
        den = Fraction(1)
        for ai in tri:
            den *= qf_exact(s - ai)
        for bj in sq:
            den *= qf_exact(bj - s)
        total += (-1) ** s * qf_exact(s + 1) / den
    return pre * total


def rel(x, y):
    return abs(x - y) / abs(y)


def test_qint_examples():
    for p in (HALF, CLASSICAL, Param.generic(0.3 + 0.4j), Param.root_of_unity(5)):
        assert quantum_int(p, 1).to_complex() == pytest.approx(1.0)
    assert quantum_int(CLASSICAL, 5).to_complex() == 5
    assert quantum_int(HALF, 2).to_complex() == pytest.approx(4.25, rel=1e-15)
    assert quantum_int(Param.root_of_unity(3), 3).to_complex() == 0


def test_qint_matches_definition():
    for t in (0.5, 0.93, 1.7, 0.3 + 0.4j, -0.8, 2j):
        p = Param.generic(t)
        u = complex(t) ** 2
        for n in range(0, 40):
            want = (u ** n - u ** -n) / (u - 1 / u)
            got = quantum_int(p, n).to_complex()
            assert got == pytest.approx(want, rel=1e-12, abs=1e-300)


def test_qint_root_of_unity_sin_ratio():
    for r in range(3, 13):
        p = Param.root_of_unity(r)
        for n in range(0, r):
            want = math.sin(n * math.pi / r) / math.sin(math.pi / r)
            assert quantum_int(p, n).to_complex() == pytest.approx(want, abs=1e-13)


def test_qint_inversion_symmetry():
    # error grows like n * eps * |log t|
    for n in (3, 50, 700):
        lo, hi = quantum_int(Param.generic(0.4), n), quantum_int(Param.generic(2.5), n)
        assert lo.exp == hi.exp
        assert rel(lo.sig, hi.sig) < 1e-11


def test_qint_huge_index():
    # [n] ~ u^-(n-1) / (1 - u^2): far outside double range
    p = Param.generic(0.5)
    q = quantum_int(p, 5000)
    assert q.abs_log2() == pytest.approx(2 * 4999 - math.log2(1 - 1 / 16), rel=1e-12)


def test_qfact_examples():
    assert quantum_factorial(HALF, 0).to_complex() == 1
    assert quantum_factorial(CLASSICAL, 4).to_complex() == 24
    assert quantum_factorial(HALF, 2).to_complex() == pytest.approx(4.25)
    assert quantum_factorial(CLASSICAL, 170).abs_log2() == pytest.approx(math.log2(math.factorial(170)), rel=1e-14)
    with pytest.raises(DomainError):
        quantum_factorial(Param.root_of_unity(5), 5)


def test_qfact_large_against_exact_log():
    n = 2000
    got = quantum_factorial(HALF, n).abs_log2()
    want = math.fsum(math.log2(abs(float(q_exact(k)))) if k < 300 else 2 * (k - 1) - math.log2(1 - 1 / 16)
                     for k in range(1, n + 1))
    assert got == pytest.approx(want, rel=1e-12)


def test_admissible():
    assert admissible(None, 1, 1, 2)
    assert not admissible(None, 1, 1, 1)
    assert not admissible(None, 1, 1, 4)
    r4 = Param.root_of_unity(4)
    assert admissible(r4, 1, 1, 2)
    assert not admissible(r4, 2, 2, 2)
    assert not admissible(r4, 3, 3, 0)


def test_theta_examples():
    assert theta(HALF, 0, 0, 0).to_complex() == 1
    assert theta(HALF, 1, 1, 0).to_complex() == pytest.approx(-4.25)
    assert theta(CLASSICAL, 1, 1, 2).to_complex() == pytest.approx(3.0)
    for a in range(8):
        assert rel(theta(HALF, a, a, 0).to_complex(), (-1) ** a * quantum_int(HALF, a + 1).to_complex()) < 1e-14
    with pytest.raises(AdmissibilityError):
        theta(HALF, 1, 2, 2)


def test_theta_against_exact():
    for a, b, c in itertools.product(range(7), repeat=3):
        if admissible(None, a, b, c):
            assert rel(theta(HALF, a, b, c).to_complex(), float(theta_exact(a, b, c))) < 1e-13


def test_theta_classical_closed_form():
    for a, b, c in itertools.product(range(9), repeat=3):
        if admissible(None, a, b, c):
            s = (a + b + c) // 2
            want = (-1) ** s * Fraction(math.factorial(s + 1) * math.factorial(s - a) * math.factorial(s - b)
                                        * math.factorial(s - c), math.factorial(a) * math.factorial(b) * math.factorial(c))
            assert theta(CLASSICAL, a, b, c).to_complex() == pytest.approx(float(want), rel=1e-14)


def test_tet_examples():
    assert tet(HALF, 0, 0, 0, 0, 0, 0).to_complex() == 1
    assert rel(tet(HALF, 1, 1, 2, 1, 1, 0).to_complex(), theta(HALF, 1, 1, 2).to_complex()) < 1e-14
    for a, c, e in itertools.product(range(6), repeat=3):
        if admissible(None, a, c, e):
            assert rel(tet(HALF, a, a, e, c, c, 0).to_complex(), theta(HALF, a, c, e).to_complex()) < 1e-13


def test_tet_against_exact():
    labels = random_tet_labels(random.Random(3), 8, 150)
    for lab in labels.tolist():
        want = float(tet_exact(*lab))
        assert rel(tet(HALF, *lab).to_complex(), want) < 1e-11


# each tetrahedron edge in (a, b, e, c, d, f) order as a pair of trivalent vertices
EDGE_ENDS = [frozenset(x) for x in ((0, 2), (1, 2), (0, 1), (1, 3), (0, 3), (2, 3))]


def permuted(labels, perm):
    by_pair = dict(zip(EDGE_ENDS, labels))
    return [by_pair[frozenset(perm[v] for v in pair)] for pair in EDGE_ENDS]


def test_tet_full_symmetry_group():
    p = Param.generic(0.7)
    for lab in random_tet_labels(random.Random(11), 10, 40).tolist():
        base = tet(p, *lab).to_complex()
        images = {tuple(permuted(lab, perm)) for perm in itertools.permutations(range(4))}
        for img in images:
            assert rel(tet(p, *img).to_complex(), base) < 1e-12


def test_tet_classical_matches_wigner():
    for lab in random_tet_labels(random.Random(5), 8, 60).tolist():
        a, b, e, c, d, f = lab
        w = float(wigner_6j(*(Fraction(x, 2) for x in (a, d, e, c, b, f))))
        th = 1.0
        for tr in ((a, d, e), (b, c, e), (a, b, f), (c, d, f)):
            th *= abs(theta(CLASSICAL, *tr).to_complex())
        got = abs(tet(CLASSICAL, *lab).to_complex())
        assert got == pytest.approx(abs(w) * math.sqrt(th), rel=1e-10, abs=1e-12)


def test_tet_large_colors_finite():
    v = tet(HALF, 300, 300, 300, 300, 300, 300)
    assert not v.is_zero() and not v.fits_double()
    assert math.isfinite(v.abs_log2())


def test_sixj_trivial_and_orthogonality():
    assert sixj(HALF, 0, 0, 0, 0, 0, 0).to_complex() == pytest.approx(1.0)
    for p in (Param.generic(0.7), Param.generic(0.6 + 0.3j), Param.root_of_unity(5), CLASSICAL):
        frames, sums = orthogonality_sums(p, 4)
        delta = (frames[:, 4] == frames[:, 5]).astype(float)
        assert np.max(np.abs(sums - delta)) < 1e-10


def test_est1_examples():
    z = check_est1(HALF, 0, 0, 0, 0, 0, 0)
    assert z.holds and z.lhs.to_complex() == pytest.approx(1) and z.rhs.to_complex() == pytest.approx(1)
    for i, k in itertools.product(range(0, 31), [(2, 2, 2), (0, 2, 2), (4, 2, 2), (1, 1, 2), (6, 4, 4)]):
        if all(admissible(None, i, i, kk) for kk in k):
            assert check_est1(HALF, i, i, i, *k).holds


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([0.3, 0.5, 0.9, 1.5]))
def test_est1_random(seed, t):
    p = Param.generic(t)
    for lab in random_tet_labels(random.Random(seed), 20, 5).tolist():
        assert check_est1(p, *lab).holds


def test_est2_examples():
    assert est2_quantity(HALF, 0, 0, 0, 0).to_complex() == pytest.approx(1.0)
    assert est2_bound(HALF, 0, 0, 0, 0).to_complex() == pytest.approx(1.0)
    for k in [(2, 2, 2), (0, 2, 2), (4, 2, 2), (2, 4, 2), (4, 4, 4), (6, 4, 2)]:
        for i in range(max(k) // 2, 31):
            q = est2_quantity(HALF, i, *k)
            b = est2_bound(HALF, i, *k)
            assert q.abs_log2() <= b.abs_log2() + 1e-9
    with pytest.raises(RegimeError):
        est2_bound(Param.generic(1.5), 3, 2, 2, 2)


def test_vertex_constant_slot():
    k = (4, 2, 2)
    best = vertex_constant(HALF, *k)
    assert best == min(vertex_constant(HALF, *k, slot=s) for s in range(3))
