import math

import numpy as np
import pytest

from schatten_iso.derivatives import (DerivativeReport, commutative_second_derivative, compare_with_fd,
                                      diagonal_second_difference, differentiability_probe,
                                      finite_difference, schatten_first_derivative, schatten_power_path,
                                      schatten_second_derivative, trace_derivative)
from schatten_iso.divdiff import exponential, power, sine
from schatten_iso.errors import DomainError, SingularOperand, ZeroCoordinate
from schatten_iso.linalg import matrix_function

from oracles import gapped_spectrum, random_hermitian

X = np.array([[0.0, 1.0], [1.0, 0.0]])


def trace_path(f, A, B):
    return lambda t: float(np.trace(matrix_function(A + t * B, f)).real)


def test_report_fields():
    rep = DerivativeReport(1, 2.0, 2.5)
    assert rep.abs_err == 0.5 and rep.rel_err == 0.25
    assert DerivativeReport(1, 0.1, 0.2).rel_err == pytest.approx(0.1)


def test_trace_derivative_linear(rng):
    A, B = random_hermitian(3, rng), random_hermitian(3, rng)
    assert trace_derivative(power(1), A, B, 1) == pytest.approx(np.trace(B).real)


def test_trace_derivative_square(rng):
    A, B = random_hermitian(3, rng), random_hermitian(3, rng)
    assert trace_derivative(power(2), A, B, 2) == pytest.approx(2 * np.trace(B @ B).real)


def test_trace_derivative_cube_example():
    A = np.diag([1.0, 2.0])
    assert trace_derivative(power(3), A, X, 1) == pytest.approx(0.0, abs=1e-14)
    assert finite_difference(trace_path(power(3), A, X), 0.0, 1) == pytest.approx(0.0, abs=1e-10)


def test_trace_derivative_cube_second_order_exact(rng):
    A, B = random_hermitian(4, rng), random_hermitian(4, rng)
    assert trace_derivative(power(3), A, B, 2) == pytest.approx(6 * np.trace(A @ B @ B).real, rel=1e-12)


def test_trace_derivative_third_order_exact(rng):
    A, B = random_hermitian(3, rng), random_hermitian(3, rng)
    assert trace_derivative(power(3), A, B, 3) == pytest.approx(6 * np.trace(B @ B @ B).real, rel=1e-12)


def test_trace_derivative_degenerate_spectrum(rng):
    A = random_hermitian(4, rng, spectrum=[1.0, 1.0, -0.5, 2.0])
    B = random_hermitian(4, rng)
    for r in (1, 2):
        exact = trace_derivative(exponential(), A, B, r)
        fd = finite_difference(trace_path(math.exp, A, B), 0.0, r)
        assert abs(exact - fd) <= 1e-5 * max(1.0, abs(exact))


def test_first_derivative_examples():
    A = np.diag([1.0, -1.0])
    assert schatten_first_derivative(A, np.eye(2), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert schatten_first_derivative(A, np.diag([1.0, 0.0]), 0.5) == pytest.approx(0.5)
    B = np.array([[0.3, 1 - 2j], [1 + 2j, -0.7]])
    assert schatten_first_derivative(np.eye(2), B, 1.0) == pytest.approx(np.trace(B).real)


def test_first_derivative_singular():
    with pytest.raises(SingularOperand):
        schatten_first_derivative(np.diag([1.0, 0.0]), X, 0.5)


def test_first_derivative_linear_in_b(rng):
    A = random_hermitian(3, rng, spectrum=[-2.0, 0.7, 1.5])
    B1, B2 = random_hermitian(3, rng), random_hermitian(3, rng)
    lhs = schatten_first_derivative(A, 2 * B1 - 3 * B2, 0.4)
    rhs = 2 * schatten_first_derivative(A, B1, 0.4) - 3 * schatten_first_derivative(A, B2, 0.4)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_second_derivative_zero_perturbation():
    assert schatten_second_derivative(np.diag([2.0, 1.0]), np.zeros((2, 2)), 0.5) == 0.0


def test_second_derivative_repeated_node():
    # eigenvalues of I + tX are 1 +- t, so the path is (1+t)^(1/2) + (1-t)^(1/2)
    val = schatten_second_derivative(np.eye(2), X, 0.5)
    assert val == pytest.approx(-0.5, rel=1e-12)
    g = lambda t: (1 + t) ** 0.5 + abs(1 - t) ** 0.5
    assert finite_difference(g, 0.0, 2) == pytest.approx(val, rel=1e-6)


def test_second_derivative_negative_example():
    A = np.diag([2.0, 1.0])
    val = schatten_second_derivative(A, X, 0.7)
    fd = finite_difference(schatten_power_path(A, X, 0.7), 0.0, 2)
    assert val < 0
    assert abs(val - fd) <= 1e-4 * max(1.0, abs(val))


def test_second_derivative_sign_flip_symmetry(rng):
    A = random_hermitian(3, rng, spectrum=[0.6, 1.2, 2.5])
    B = random_hermitian(3, rng)
    assert schatten_second_derivative(-A, B, 0.5) == pytest.approx(schatten_second_derivative(A, B, 0.5), rel=1e-12)


def test_second_derivative_eps_checked():
    with pytest.raises(DomainError):
        schatten_second_derivative(np.diag([2.0, 1.0]), X, 0.5, eps=1.5)
    with pytest.raises(SingularOperand):
        schatten_second_derivative(np.diag([2.0, 0.0]), X, 0.5)


def test_indefinite_second_derivative_matches_fd(rng):
    A = random_hermitian(4, rng, spectrum=[-2.0, -0.8, 0.9, 1.7])
    B = random_hermitian(4, rng)
    val = schatten_second_derivative(A, B, 0.4)
    fd = finite_difference(schatten_power_path(A, B, 0.4), 0.0, 2)
    assert abs(val - fd) <= 1e-4 * max(1.0, abs(val))


def test_diagonal_second_difference_readings():
    vals = diagonal_second_difference(2.0, 0.5)
    assert vals["recursion"] == pytest.approx(0.5 * (-0.5) * 2.0 ** -1.5 / 2)
    assert vals["inline_formula"] == pytest.approx(0.5 * (-0.5) * 2.0 ** -0.5)
    g = lambda t: abs(2.0 + t) ** 0.5
    assert finite_difference(g, 0.0, 2) / 2 == pytest.approx(vals["recursion"], rel=1e-6)


def test_finite_difference_examples():
    assert finite_difference(lambda t: t * t, 0.0, 2) == pytest.approx(2.0, abs=1e-8)
    assert finite_difference(abs, 1.0, 1) == pytest.approx(1.0, abs=1e-8)
    assert finite_difference(lambda t: math.sqrt(1 + t * t), 0.0, 2) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        finite_difference(abs, 0.0, 3)


def test_compare_with_fd():
    rep = compare_with_fd(2.0, lambda t: t * t, 2)
    assert rep.abs_err <= 1e-8


@pytest.mark.parametrize("g, expected", [
    (abs, 0),
    (lambda t: t * abs(t), 1),
    (lambda t: (1 + abs(t) ** 0.5) ** (1 / 3) - abs(t) ** 0.25, 0),
    (lambda t: t * t, 5),
    (math.cos, 5),
    (lambda t: abs(t) ** 3, 2),
])
def test_probe_classes(g, expected):
    assert differentiability_probe(g, 0.0) == expected


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_probe_binomial_not_differentiable(q):
    p = 0.25
    assert differentiability_probe(lambda t: (1 + abs(t) ** q) ** (p / q), 0.0) == 0


def test_commutative_examples():
    assert commutative_second_derivative([1.0, 1.0], [0.0, 0.0], 0.5) == 0.0
    assert commutative_second_derivative([1.0, 1.0], [1.0, 0.0], 0.5) == pytest.approx(-0.25)
    assert commutative_second_derivative([1.0, -1.0], [1.0, 1.0], 0.5) == pytest.approx(-0.5)


def test_commutative_errors():
    with pytest.raises(ZeroCoordinate):
        commutative_second_derivative([1.0, 0.0], [1.0, 1.0], 0.5)
    with pytest.raises(ValueError):
        commutative_second_derivative([1.0, 2.0], [1.0], 0.5)


def test_random_gapped_trace_pairs(rng):
    for _ in range(10):
        A = random_hermitian(4, rng, spectrum=gapped_spectrum(4, rng, -3, 3, 0.1, 0.5))
        B = random_hermitian(4, rng)
        f = sine()
        for r in (1, 2):
            exact = trace_derivative(f, A, B, r)
            fd = finite_difference(trace_path(math.sin, A, B), 0.0, r)
            assert abs(exact - fd) <= 1e-5 * max(1.0, abs(exact))
