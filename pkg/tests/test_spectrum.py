"""Spectrum-region geometry and the equal-modulus solvers.

Oracles: closed-form minima rho^2(1 - gamma^2) = 4 rho^2/(p p'), bisection
on the monotone modulus along boundary lines, and direct arithmetic with
the parameterization Lambda(z) = -(z^2 + rho^2).
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from hypharm.space import SpaceError, gamma_p, make_space
from hypharm.spectrum import (
    NoSolutionError,
    SpectrumRegion,
    counterexample_pair,
    equal_modulus_solve,
    lambda_map,
    min_modulus_on_spectrum,
    one_sided_pair,
    spectrum_contains,
)

H3 = make_space("H3")
SYM23 = make_space("sym:2,3")  # rho = 4


# ---------------------------------------------------------------------------
# membership


def test_contains_vertex_for_every_p():
    for space in (H3, SYM23):
        w = -space.rho**2
        for p in (1.0, 1.3, 2.0, 5.0):
            assert spectrum_contains(space, p, w)


def test_contains_p2_is_the_real_ray():
    rho2 = H3.rho**2
    assert spectrum_contains(H3, 2.0, -(1.0 + rho2))
    assert not spectrum_contains(H3, 2.0, -rho2 + 1j)
    assert not spectrum_contains(H3, 2.0, -0.5 * rho2)  # right of the ray tip


def test_contains_origin_only_at_p1():
    # w = 0 needs z = i rho, i.e. the full strip |Im z| <= rho
    assert spectrum_contains(H3, 1.0, 0.0)
    assert not spectrum_contains(H3, 1.5, 0.0)


def test_contains_rejects_bad_exponent():
    with pytest.raises(SpaceError):
        spectrum_contains(H3, 0.9, -1.0)


def test_boundary_points_inside_displaced_points_outside():
    region = SpectrumRegion(H3, 1.5)
    alphas = np.linspace(-4.0, 4.0, 41)
    curve = region.boundary(alphas)
    for alpha, w in zip(alphas, curve):
        assert region.contains(w)
        if alpha == 0.0:
            continue
        # outward normal of the left-opening parabola (rotate the tangent)
        g = region.gamma * H3.rho
        n = np.array([2.0 * g, -2.0 * alpha])
        n = n / np.hypot(*n)
        w_out = w + 1e-3 * (n[0] + 1j * n[1])
        assert not region.contains(w_out)


def test_region_conjugate_exponent_symmetry():
    r15 = SpectrumRegion(H3, 1.5)
    r3 = SpectrumRegion(H3, 3.0)
    assert r15.gamma == pytest.approx(r3.gamma, abs=1e-15)
    a = np.linspace(-2.0, 2.0, 9)
    assert np.allclose(r15.boundary(a), r3.boundary(a))
    for w in (-1.0 + 0.5j, -3.0 - 1.0j, 0.2 + 0.1j):
        assert spectrum_contains(H3, 1.5, w) == spectrum_contains(H3, 3.0, w)


def test_nesting_boundary_points_of_larger_p_lie_in_smaller_p():
    # gamma shrinks as p rises toward 2, so the regions shrink
    alphas = np.linspace(-5.0, 5.0, 25)
    for p_small, p_big in ((1.2, 1.5), (1.5, 2.0), (1.2, 2.0)):
        curve = SpectrumRegion(H3, p_big).boundary(alphas)
        assert all(spectrum_contains(H3, p_small, w) for w in curve)
    # and not conversely: the smaller-p boundary pokes outside the bigger-p region
    curve = SpectrumRegion(H3, 1.2).boundary(np.array([0.5, 1.0]))
    assert not any(spectrum_contains(H3, 1.5, w) for w in curve)


# ---------------------------------------------------------------------------
# minimum modulus


def test_min_modulus_closed_forms():
    assert min_modulus_on_spectrum(H3, 2.0) == pytest.approx(1.0, abs=1e-8)
    assert min_modulus_on_spectrum(H3, 1.5) == pytest.approx(8.0 / 9.0, abs=1e-8)
    rho2 = SYM23.rho**2
    for p in (1.25, 1.5, 2.0):
        pprime = p / (p - 1.0)
        want = 4.0 * rho2 / (p * pprime)
        assert min_modulus_on_spectrum(SYM23, p) == pytest.approx(want, abs=1e-8 * rho2)


def test_min_modulus_conjugate_mapping_and_validation():
    assert min_modulus_on_spectrum(H3, 3.0) == pytest.approx(
        min_modulus_on_spectrum(H3, 1.5), abs=1e-12
    )
    with pytest.raises(SpaceError):
        min_modulus_on_spectrum(H3, 1.0)


# ---------------------------------------------------------------------------
# equal-modulus solver


def test_solver_endpoint_is_vertex():
    gamma = 0.4
    floor = H3.rho**2 * (1.0 - gamma**2)
    s, theta = equal_modulus_solve(H3, gamma, floor)
    assert s == pytest.approx(0.0, abs=1e-12)
    assert theta == pytest.approx(math.pi, abs=1e-12)


def test_solver_real_axis_arithmetic():
    s, theta = equal_modulus_solve(H3, 0.0, 2.0)  # |Lambda(s)| = s^2 + 1
    assert s == pytest.approx(1.0, abs=1e-12)
    assert theta == pytest.approx(math.pi, abs=1e-12)


def test_solver_against_bisection_oracle():
    gamma, T = 0.25, 3.0
    s, theta = equal_modulus_solve(H3, gamma, T)

    def modulus_sq(x):
        return (x * x + 0.9375) ** 2 + 0.25 * x * x - 9.0

    s_ref = brentq(modulus_sq, 0.0, 5.0, xtol=1e-14)
    assert s == pytest.approx(s_ref, abs=1e-10)
    w = lambda_map(H3, s + 1j * gamma)
    assert abs(w) == pytest.approx(T, abs=1e-12)
    assert cmath.phase(w) % (2.0 * math.pi) == pytest.approx(theta, abs=1e-12)


def test_solver_no_solution_below_line_minimum():
    with pytest.raises(NoSolutionError):
        equal_modulus_solve(H3, 0.5, 0.5)  # floor is 0.75


def test_solver_validation():
    with pytest.raises(SpaceError):
        equal_modulus_solve(H3, -0.1, 1.0)
    with pytest.raises(SpaceError):
        equal_modulus_solve(H3, 1.2, 1.0)
    with pytest.raises(SpaceError):
        equal_modulus_solve(H3, 0.3, 0.0)


@given(
    gamma=st.floats(min_value=0.0, max_value=0.95),
    bump=st.floats(min_value=0.0, max_value=50.0),
)
@settings(max_examples=60, deadline=None)
def test_solver_roundtrip_property(gamma, bump):
    floor = SYM23.rho**2 * (1.0 - gamma**2)
    T = floor + bump
    s, theta = equal_modulus_solve(SYM23, gamma, T)
    w = lambda_map(SYM23, s + 1j * gamma * SYM23.rho)
    assert abs(w) == pytest.approx(T, rel=1e-10)
    assert 0.0 < theta <= 2.0 * math.pi


def test_modulus_monotone_along_lines():
    s = np.linspace(0.0, 5.0, 400)
    for gamma in (0.0, 0.3, 0.7, 1.0):
        z = s + 1j * gamma * H3.rho
        mod = np.abs(-(z * z + H3.rho**2))
        assert np.all(np.diff(mod) > 0.0)


# ---------------------------------------------------------------------------
# counterexample constructors


def test_counterexample_pair_geometry():
    pair = counterexample_pair(H3, 1.5, 1.0)
    g_p = gamma_p(1.5) * H3.rho
    lams = [pt.lam for _, pt in pair.combination.terms]
    eigs = pair.combination.eigenvalues
    for lam, eig, phase in zip(lams, eigs, (pair.theta, pair.psi)):
        assert abs(lam.imag) < g_p  # strictly inside the strip
        assert abs(eig) == pytest.approx(pair.target_modulus, abs=1e-10)
        assert cmath.phase(eig) % (2.0 * math.pi) == pytest.approx(phase, abs=1e-12)
    assert abs(lams[0] ** 2 - lams[1] ** 2) > 1e-6  # genuinely two eigenvalues
    assert 1.5 < pair.q < pair.r < 2.0
    assert pair.target_modulus == pytest.approx(
        abs(lambda_map(H3, 1.0 + 1j * g_p)), abs=1e-14
    )


def test_counterexample_pair_infeasible_and_invalid_inputs():
    with pytest.raises(NoSolutionError):
        counterexample_pair(H3, 1.98, 0.001)  # target below the inner-line minima
    with pytest.raises(SpaceError):
        counterexample_pair(H3, 1.5, 0.0)
    with pytest.raises(SpaceError):
        counterexample_pair(H3, 2.0, 1.0)
    with pytest.raises(SpaceError):
        counterexample_pair(H3, 2.5, 1.0)


def test_one_sided_pair_moduli_below_alpha_scale():
    combo = one_sided_pair(H3, 1.0)
    scale = 1.0 + H3.rho**2
    for eig in combo.eigenvalues:
        assert abs(eig) / scale < 1.0
    with pytest.raises(SpaceError):
        one_sided_pair(H3, 0.0)


def test_lambda_map_vertex():
    assert lambda_map(H3, 0.0) == pytest.approx(-1.0)
    assert lambda_map(SYM23, 0.0) == pytest.approx(-16.0)
