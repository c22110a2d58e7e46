import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from evanskit.contour import Contour, count_eigs, multiplicity_at, winding
from evanskit.errors import ContourResolutionError, OnSpectrum
from evanskit.intervalmodel import Theta2x2, det_n_theta, sincqrt


def test_simple_zero_and_pole():
    c = Contour.circle(1 + 1j, 0.5)
    assert winding(lambda z: z - (1 + 1j), c).winding == 1
    assert winding(lambda z: 1 / (z - (1 + 1j)), c).winding == -1


def test_sincqrt_has_one_zero_in_window():
    assert winding(sincqrt, Contour.rectangle(5, 15, 1), vectorized=True).winding == 1


def test_essential_singularity():
    assert multiplicity_at(lambda z: z**2 * np.exp(1 / z), 0, 0.3) == 2
    assert multiplicity_at(lambda z: np.exp(1 / z), 0, 0.1) == 0


def test_det_n_theta_zero_is_simple():
    th = Theta2x2.scalar(1j)
    assert multiplicity_at(lambda z: det_n_theta(z, th), np.pi**2, 1.0, vectorized=True) == 1


def test_nonvanishing_function():
    assert multiplicity_at(lambda z: np.exp(z) + 3, 0, 0.5) == 0
    assert count_eigs(lambda z: 1.0, 0, 10, 1) == 0


def test_interval_counts():
    th = Theta2x2.scalar(1j)
    f = lambda z: det_n_theta(z, th)  # noqa: E731
    assert count_eigs(f, 5, 45, 0.5, vectorized=True) == 2
    assert count_eigs(f, 0.5, 5, 0.5, vectorized=True) == 0


def test_zero_on_contour():
    with pytest.raises(OnSpectrum):
        winding(lambda z: z - 2, Contour.rectangle(2, 4, 1))


def test_refinement_limit():
    # 40 turns of phase on 12 initial samples need more than one bisection
    with pytest.raises(ContourResolutionError):
        winding(lambda z: z**40, Contour.circle(0, 1, initial_samples=12, max_refine_depth=1))


def test_near_full_turn_is_not_aliased():
    # double zero 0.03 outside the first sample spacing: the raw jump wraps to a small angle
    f = lambda z: (z + 1.125 + 0.875j) ** 2  # noqa: E731
    assert winding(f, Contour.circle(0.3, 1.7)).winding == 2


def test_delta_halving_avoids_zero_on_side():
    # zero at 3 + 0.5i sits exactly on the top edge for delta = 0.5
    f = lambda z: (z - 3 - 0.5j) * (z - 3 + 0.5j) * (z - 4)  # noqa: E731
    assert count_eigs(f, 2, 5, 0.5) == 1


def test_invalid_contours():
    with pytest.raises(ValueError):
        Contour.rectangle(3, 2, 1)
    with pytest.raises(ValueError):
        Contour.rectangle(1, 2, 0)
    with pytest.raises(ValueError):
        Contour.circle(0, -1)


roots = st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False), min_size=1, max_size=5)


def _off_rectangle(r, gap=1e-3):
    # distance from r to the boundary of [-2, 2.5] x [-1.5, 1.5]
    dx = max(-2 - r.real, 0, r.real - 2.5)
    dy = max(-1.5 - r.imag, 0, r.imag - 1.5)
    outside = math.hypot(dx, dy)
    inside = min(r.real + 2, 2.5 - r.real, r.imag + 1.5, 1.5 - r.imag)
    return outside > gap if outside > 0 else inside > gap


@settings(max_examples=30, deadline=None)
@given(roots, roots)
def test_winding_additive_over_products(zs, ws):
    c = Contour.rectangle(-2, 2.5, 1.5)
    assume(all(_off_rectangle(r) for r in zs + ws))
    f = lambda z: np.prod([z - r for r in zs])  # noqa: E731
    g = lambda z: 1 / np.prod([z - r for r in ws])  # noqa: E731
    a = winding(f, c).winding
    b = winding(g, c).winding
    ab = winding(lambda z: f(z) * g(z), c).winding
    assert ab == a + b
    inside = lambda r: -2 < r.real < 2.5 and abs(r.imag) < 1.5  # noqa: E731
    assert a == sum(inside(r) for r in zs)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False), min_size=1, max_size=4),
       st.complex_numbers(max_magnitude=1, allow_nan=False))
def test_exponential_factor_invisible(zs, a):
    c = Contour.circle(0.3, 1.7)
    assume(all(abs(abs(r - 0.3) - 1.7) > 1e-3 for r in zs))
    f = lambda z: np.prod([z - r for r in zs])  # noqa: E731
    base = winding(f, c).winding
    assert winding(lambda z: np.exp(a * z**2 + z) * f(z), c).winding == base


def test_rectangle_and_circle_agree():
    f = lambda z: (z - 1) * (z - 1.5 - 0.2j) * (z + 3)  # noqa: E731
    assert winding(f, Contour.rectangle(0, 2.5, 1)).winding == winding(f, Contour.circle(1.25, 1.2)).winding == 2
