import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qxent.optimize import (BudgetExhausted, CountingObjective, coordinate_descent, fd_gradient_descent,
                            fourier_coordinate_descent, golden_section)


def periodic_bowl(x):
    # separable, minimum 0 at x = (0.3, -1.2, 2.0)
    return float(np.sum(1 - np.cos(np.asarray(x) - np.array([0.3, -1.2, 2.0]))))


@given(st.floats(-5, 5), st.floats(0.1, 3))
def test_golden_section_quadratic(c, width):
    x, fx = golden_section(lambda t: (t - c) ** 2, c - width, c + 2 * width, tol=1e-9)
    assert abs(x - c) < 1e-6


def test_counting_objective_budget_and_ties():
    obj = CountingObjective(lambda x: 1.0, max_evals=3)
    obj(np.array([1.0]))
    obj(np.array([2.0]))
    obj(np.array([3.0]))
    with pytest.raises(BudgetExhausted):
        obj(np.array([4.0]))
    assert obj.n_evals == 3
    assert obj.best_x.tolist() == [1.0]
    assert obj.trace == [1.0, 1.0, 1.0]


def test_coordinate_descent_periodic():
    obj = CountingObjective(periodic_bowl, max_evals=5000)
    coordinate_descent(obj, np.array([2.0, 2.0, -2.0]))
    assert obj.best_f < 1e-10


def test_fourier_descent_exact_on_sinusoids():
    obj = CountingObjective(periodic_bowl, max_evals=500)
    fourier_coordinate_descent(obj, np.array([2.0, 2.0, -2.0]))
    # a separable sinusoid is solved in one sweep of three-point fits
    assert obj.best_f < 1e-12
    assert obj.n_evals <= 1 + 2 * 3 * 3


def test_fourier_descent_half_frequencies():
    f = lambda x: float(np.sum(1 - np.cos((np.asarray(x) - 1.0) / 2)))
    obj = CountingObjective(f, max_evals=500)
    fourier_coordinate_descent(obj, np.array([-3.0, 5.0]), period=4 * math.pi, harmonics=2)
    assert obj.best_f < 1e-12


def test_fd_gradient_descent_quadratic():
    obj = CountingObjective(lambda x: float(np.sum((np.asarray(x) - 1.5) ** 2)), max_evals=3000)
    fd_gradient_descent(obj, np.zeros(3), lr=0.4)
    assert obj.best_f < 1e-8
