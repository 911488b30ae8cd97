import numpy as np
import pytest

from halfline import (
    NonFiniteError,
    ValidationError,
    evaluate,
    free,
    piecewise_constant,
    sampled_table,
    square_barrier,
    square_well,
    validate,
)


def test_square_well_values():
    V = square_well(10.0, 1.0)
    assert evaluate(V, 0.5) == -10.0
    assert evaluate(V, 2.0) == 0.0


def test_free_is_zero_everywhere():
    V = free()
    for r in (0.0, 0.3, 1.0, 7.5):
        assert evaluate(V, r) == 0.0


def test_compact_support_is_exact():
    # zero beyond R must be exact, not approximate
    for V in (
        square_well(3.0, 2.5),
        square_barrier(4.0, 2.0),
        piecewise_constant([0.5, 1.0, 2.0], [1.0, -2.0, 0.5]),
        sampled_table([0.0, 0.5, 1.0], [1.0, 0.3, 0.0]),
    ):
        r = V.support_radius + np.array([1e-15, 1e-6, 0.1, 10.0])
        assert np.all(evaluate(V, r) == 0.0)


def test_moment_integral_square_well():
    # closed form: depth * R^2 / 2
    rep = validate(square_well(10.0, 1.0))
    assert rep.moment_integral == pytest.approx(5.0, rel=1e-12)
    rep = validate(square_well(3.0, 2.0))
    assert rep.moment_integral == pytest.approx(3.0 * 4.0 / 2.0, rel=1e-12)


def test_moment_integral_free():
    assert validate(free()).moment_integral == 0.0


def test_barrier_nonnegative():
    rep = validate(square_barrier(4.0, 2.0))
    assert rep.is_nonnegative
    assert "no eigenvalues" in rep.note


def test_well_not_nonnegative():
    rep = validate(square_well(10.0, 1.0))
    assert not rep.is_nonnegative
    assert rep.moment_integral >= 0.0


def test_piecewise_evaluation_and_moment():
    V = piecewise_constant([1.0, 2.0], [2.0, -1.0])
    assert evaluate(V, 0.5) == 2.0
    assert evaluate(V, 1.0) == 2.0  # right-closed segments
    assert evaluate(V, 1.5) == -1.0
    assert evaluate(V, 2.5) == 0.0
    # sum |v_i| (e_i^2 - e_{i-1}^2)/2
    assert validate(V).moment_integral == pytest.approx(2.0 * 0.5 + 1.0 * 1.5, rel=1e-12)


def test_sampled_table_interpolates():
    V = sampled_table([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
    assert evaluate(V, 0.5) == pytest.approx(1.0)
    assert evaluate(V, 1.5) == pytest.approx(1.0)
    # adaptive quadrature against the closed form of r * |tent(r)|
    exact = 2.0 / 3.0 + 4.0 / 3.0  # int_0^1 2r^2 + int_1^2 r(4-2r)
    assert validate(V).moment_integral == pytest.approx(exact, rel=1e-9)


def test_sampled_table_rejects_nonfinite():
    with pytest.raises(NonFiniteError):
        sampled_table([0.0, 1.0], [0.0, np.inf])
    with pytest.raises(NonFiniteError):
        sampled_table([0.0, 1.0], [np.nan, 0.0])


def test_bad_construction_rejected():
    with pytest.raises(ValidationError):
        square_well(1.0, -1.0)
    with pytest.raises(ValidationError):
        piecewise_constant([1.0, 0.5], [1.0, 1.0])
    with pytest.raises(ValidationError):
        sampled_table([0.0], [1.0])


def test_random_piecewise_support_property(rng):
    # vanishing beyond R holds for every constructible potential
    for _ in range(25):
        m = rng.integers(1, 5)
        edges = np.sort(rng.uniform(0.1, 5.0, size=m))
        vals = rng.uniform(-10, 10, size=m)
        V = piecewise_constant(edges, vals)
        r = V.support_radius * (1.0 + rng.uniform(1e-12, 3.0, size=20))
        assert np.all(evaluate(V, r) == 0.0)
        assert np.all(np.isfinite(evaluate(V, np.linspace(0, V.support_radius, 50))))
