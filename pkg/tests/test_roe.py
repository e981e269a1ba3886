"""Power-sequence engine: exact coefficient action and verdict logic.

Oracles: closed-form spherical functions on the three-dimensional real
hyperbolic space, exact coefficient arithmetic for Laplacian powers, the
equal-modulus solver from the spectrum module, and elementary sine
combinations for the flat baseline.
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypharm.errors import NumericsError
from hypharm.roe import (
    EigenCombination,
    NormSpec,
    RoeConfig,
    RoeReport,
    euclid_roe_demo,
    eigen_residual,
    laplacian_power,
    roe_verify,
)
from hypharm.space import SpaceError, gamma_p, make_space
from hypharm.spectrum import counterexample_pair, equal_modulus_solve, lambda_map, one_sided_pair
from hypharm.spherical import SpectralPoint

H3 = make_space("H3")
H4 = make_space("sym:3,0")


# ---------------------------------------------------------------------------
# combination construction and evaluation


def test_combination_validation():
    with pytest.raises(SpaceError):
        EigenCombination(H3, ())
    with pytest.raises(SpaceError):
        EigenCombination.from_lambdas(H3, [1.0, -1.0])  # equal up to sign
    with pytest.raises(SpaceError):
        EigenCombination.from_lambdas(H3, [1.0, 2.0], [1.0])
    pt_wrong = SpectralPoint.for_space(H4, 1.0)
    with pytest.raises(SpaceError):
        EigenCombination(H3, ((1.0, pt_wrong),))


def test_combination_evaluates_to_sum_of_closed_forms():
    combo = EigenCombination.from_lambdas(H3, [1.0, 2.0], [2.0, -1.0j])
    t = np.linspace(0.2, 5.0, 17)
    want = 2.0 * np.sin(t) / np.sinh(t) - 1.0j * np.sin(2.0 * t) / (2.0 * np.sinh(t))
    got = combo.evaluate(t)
    assert np.allclose(got, want, rtol=1e-7, atol=1e-10)


# ---------------------------------------------------------------------------
# laplacian_power


def test_power_zero_is_identity():
    combo = EigenCombination.from_lambdas(H3, [0.5, 1.5])
    assert laplacian_power(combo, 0) is combo


def test_power_single_term_cubes_eigenvalue():
    combo = EigenCombination.from_lambdas(H3, [1.0])
    eig = combo.eigenvalues[0]  # -(1 + rho^2) = -2 on H3
    cubed = laplacian_power(combo, 3)
    assert cubed.coefficients[0] == pytest.approx(eig**3)
    assert eig == pytest.approx(-2.0)


def test_negative_power_rejects_zero_eigenvalue():
    combo = EigenCombination.from_lambdas(H3, [1j * H3.rho])  # eigenvalue 0
    with pytest.raises(SpaceError):
        laplacian_power(combo, -1)


def test_counterexample_powers_share_one_modulus():
    pair = counterexample_pair(H3, 1.5, 1.0)
    T = pair.target_modulus
    for k in range(0, 9):
        powered = laplacian_power(pair.combination, k)
        for c in powered.coefficients:
            assert abs(c) == pytest.approx(T**k, rel=1e-10)


@given(
    j=st.integers(min_value=-4, max_value=4),
    k=st.integers(min_value=-4, max_value=4),
    lam=st.floats(min_value=0.2, max_value=3.0),
)
@settings(max_examples=40, deadline=None)
def test_power_composition_additivity(j, k, lam):
    combo = EigenCombination.from_lambdas(H3, [lam, lam + 1.0], [1.0 + 0.5j, -2.0])
    once = laplacian_power(laplacian_power(combo, j), k)
    direct = laplacian_power(combo, j + k)
    for a, b in zip(once.coefficients, direct.coefficients):
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


# ---------------------------------------------------------------------------
# eigen_residual


def test_residual_vanishes_for_single_term():
    combo = EigenCombination.from_lambdas(H3, [0.7])
    grid = np.linspace(0.1, 8.0, 160)
    assert eigen_residual(combo, combo.eigenvalues[0], grid) <= 1e-8


def test_residual_scale_invariant():
    grid = np.linspace(0.1, 8.0, 160)
    a = EigenCombination.from_lambdas(H3, [0.5, 1.3], [1.0, 1.0])
    b = EigenCombination.from_lambdas(H3, [0.5, 1.3], [5.0, 5.0])
    w = -2.0
    assert eigen_residual(a, w, grid) == pytest.approx(
        eigen_residual(b, w, grid), rel=1e-12
    )


def test_residual_large_for_counterexample():
    pair = counterexample_pair(H3, 1.5, 1.0)
    w = lambda_map(H3, 1.0 - 1j * gamma_p(1.5) * H3.rho)
    grid = np.linspace(0.1, 10.0, 200)
    assert eigen_residual(pair.combination, w, grid) >= 0.1


def test_residual_rejects_vanishing_combination():
    combo = EigenCombination.from_lambdas(H3, [1.0], [0.0])
    with pytest.raises(NumericsError):
        eigen_residual(combo, -2.0, np.linspace(0.1, 5.0, 50))


# ---------------------------------------------------------------------------
# roe_verify: forward (eigenfunction) instances


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_forward_suite_weak_norm(alpha):
    combo = EigenCombination.from_lambdas(H3, [alpha])
    z = alpha**2 + H3.rho**2
    report = roe_verify(
        H3, combo, z, norm="weak_pprime", k_range=(-8, 8), truncation_R=40.0,
        theorem_tag="two_sided_forward",
    )
    v0 = report.per_k_values[report.ks.index(0)]
    for v in report.per_k_values:
        assert v <= 3.0 * v0 and v >= v0 / 3.0
    assert report.eigen_residual <= 1e-6
    assert report.verdict == "eigenfunction"
    assert report.theorem_tag == "two_sided_forward"


def test_boundary_suite_weak_and_ball_average():
    # spectral parameter on the lower strip boundary for p = 1.5; the
    # critical modulus 4 rho^2 / (p p') makes every normalized power the
    # same size
    p = 1.5
    pprime = 3.0
    lam = -1j * gamma_p(p) * H3.rho
    combo = EigenCombination.from_lambdas(H3, [lam])
    z = 4.0 * H3.rho**2 / (p * pprime)
    for kind in ("weak_pprime", "M_pprime"):
        report = roe_verify(
            H3, combo, z, norm=NormSpec(kind=kind, p=pprime),
            k_range=(0, 12), truncation_R=40.0,
        )
        assert report.verdict == "eigenfunction"
        assert report.eigen_residual <= 1e-6
        assert report.bound_M < math.inf


def test_weighted_sup_boundary_route():
    p = 1.5
    lam = -1j * gamma_p(p) * H3.rho
    combo = EigenCombination.from_lambdas(H3, [lam])
    z = 4.0 * H3.rho**2 / (p * (p / (p - 1.0)))
    report = roe_verify(
        H3, combo, z, norm=NormSpec(kind="sup_weighted_infty", p=p),
        k_range=(0, 12), truncation_R=30.0,
    )
    # the weight is the function itself, so every normalized power has
    # sup-ratio exactly one
    assert np.allclose(report.per_k_values, 1.0, rtol=1e-6)
    assert report.verdict == "eigenfunction"


def test_phi_ratio_route():
    alpha = 1.0
    combo = EigenCombination.from_lambdas(H3, [alpha])
    z = alpha**2 + H3.rho**2
    report = roe_verify(
        H3, combo, z, norm=NormSpec(kind="sup_phi_ratio", lam_ref=alpha),
        k_range=(-6, 6), truncation_R=30.0,
    )
    assert np.allclose(report.per_k_values, 1.0, rtol=1e-6)
    assert report.verdict == "eigenfunction"


# ---------------------------------------------------------------------------
# roe_verify: sharpness and exclusion instances


def test_sharpness_pair_bounded_not_eigen():
    pair = counterexample_pair(H3, 1.5, 1.0)
    report = roe_verify(
        H3, pair.combination, pair.target_modulus,
        norm=NormSpec(kind="weak_pprime", p=3.0),
        k_range=(0, 20), truncation_R=40.0,
        theorem_tag="equal_modulus_pair",
    )
    v0 = report.per_k_values[0]
    for v in report.per_k_values:
        assert v <= 3.0 * v0 and v >= v0 / 3.0
    assert report.eigen_residual >= 0.1
    assert report.verdict == "bounded_not_eigen"


def test_sharpness_survives_target_inflation():
    # pushing the shared modulus 10% into the interior keeps boundedness
    pair = counterexample_pair(H3, 1.5, 1.0)
    T = 1.1 * pair.target_modulus
    lams = []
    for expo in (pair.q, pair.r):
        g = gamma_p(expo)
        s, _ = equal_modulus_solve(H3, g, T)
        lams.append(s - 1j * g * H3.rho)
    combo = EigenCombination.from_lambdas(H3, lams, [1.0, 1.0])
    report = roe_verify(
        H3, combo, T, norm=NormSpec(kind="weak_pprime", p=3.0),
        k_range=(0, 20), truncation_R=40.0,
    )
    assert report.verdict == "bounded_not_eigen"


def test_one_sided_pair_backward_blowup():
    combo = one_sided_pair(H3, 1.0)
    z = 1.0 + H3.rho**2
    report = roe_verify(
        H3, combo, z, norm="weak_pprime", k_range=(-10, 0), truncation_R=40.0,
        theorem_tag="one_sided_backward",
    )
    ks = report.ks
    v_m10 = report.per_k_values[ks.index(-10)]
    v_m1 = report.per_k_values[ks.index(-1)]
    assert v_m10 >= 10.0 * v_m1
    assert report.verdict == "unbounded"


def test_zero_parameter_term_unbounded_in_truncation():
    combo = EigenCombination.from_lambdas(H3, [0.0])
    z = H3.rho**2
    report = roe_verify(
        H3, combo, z, norm="weak_pprime", k_range=(-2, 2), truncation_R=40.0,
    )
    assert report.verdict == "unbounded"
    assert report.stability > 0.2  # truncated weak norm keeps growing
    small = roe_verify(
        H3, combo, z, norm="weak_pprime", k_range=(0, 0), truncation_R=10.0,
    )
    assert report.per_k_values[2] >= 1.2 * small.per_k_values[0]


def test_no_equal_modulus_family_below_threshold():
    # below min-modulus no line inside the strip reaches the target, so no
    # combination with spectral parameters in S_p can share that modulus
    from hypharm.spectrum import NoSolutionError, min_modulus_on_spectrum

    p = 1.5
    z = 0.9 * min_modulus_on_spectrum(H3, p)
    g_p = gamma_p(p)
    for g in (0.0, g_p / 2.0, g_p):
        with pytest.raises(NoSolutionError):
            equal_modulus_solve(H3, g, z)


def test_roe_verify_validation():
    combo = EigenCombination.from_lambdas(H3, [1.0])
    with pytest.raises(SpaceError):
        roe_verify(H4, combo, 2.0)
    with pytest.raises(SpaceError):
        roe_verify(H3, combo, 0.0)
    with pytest.raises(SpaceError):
        roe_verify(H3, combo, 2.0, k_range=(3, 1))
    with pytest.raises(SpaceError):
        roe_verify(H3, combo, 2.0, truncation_R=-1.0)
    with pytest.raises(SpaceError):
        roe_verify(H3, combo, 2.0, norm="no_such_norm")
    with pytest.raises(SpaceError):
        NormSpec(kind="sup_phi_ratio")  # missing lam_ref


def test_report_serializes_to_json():
    combo = EigenCombination.from_lambdas(H3, [1.0])
    report = roe_verify(H3, combo, 2.0, k_range=(0, 2), truncation_R=20.0)
    text = json.dumps(report.as_dict())
    back = json.loads(text)
    assert back["verdict"] == report.verdict
    assert len(back["per_k_values"]) == 3


# ---------------------------------------------------------------------------
# euclidean baseline


def test_euclid_pure_sine_is_eigenfunction():
    report = euclid_roe_demo(1.0, [(1.0, 1.0)], k_range=(-10, 10))
    assert report.verdict == "eigenfunction"
    assert report.eigen_residual <= 1e-12
    assert np.allclose(report.per_k_values, 1.0)


def test_euclid_subharmonic_blows_up_backward():
    report = euclid_roe_demo(1.0, [(1.0, 1.0), (1.0, 0.5)], k_range=(-10, 0))
    ks = report.ks
    v_m10 = report.per_k_values[ks.index(-10)]
    v_m1 = report.per_k_values[ks.index(-1)]
    assert report.verdict == "unbounded"
    assert v_m10 / v_m1 >= 10.0


def test_euclid_superharmonic_blows_up_forward():
    report = euclid_roe_demo(1.0, [(1.0, 1.0), (1.0, 2.0)], k_range=(0, 10))
    assert report.verdict == "unbounded"
    assert report.per_k_values[-1] > 1e4 * report.per_k_values[0]


def test_euclid_validation():
    with pytest.raises(SpaceError):
        euclid_roe_demo(0.0, [(1.0, 1.0)])
    with pytest.raises(SpaceError):
        euclid_roe_demo(1.0, [])
    with pytest.raises(SpaceError):
        euclid_roe_demo(1.0, [(1.0, 0.0)])


def test_euclid_phase_term_supported():
    report = euclid_roe_demo(1.0, [(1.0, 1.0, 0.7)], k_range=(-4, 4))
    assert report.verdict == "eigenfunction"


def test_config_thresholds_are_adjustable():
    combo = EigenCombination.from_lambdas(H3, [1.0])
    report = roe_verify(H3, combo, 2.0, k_range=(0, 2), truncation_R=20.0)
    assert report.verdict == "eigenfunction"
    # an impossible ratio threshold (< 1) demotes every run to unbounded
    absurd = RoeConfig(bounded_ratio=0.99)
    demoted = roe_verify(
        H3, combo, 2.0, k_range=(0, 2), truncation_R=20.0, config=absurd
    )
    assert demoted.verdict == "unbounded"
