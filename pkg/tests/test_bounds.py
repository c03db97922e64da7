"""Projection coefficients and the tail-energy bounds/identities."""

import numpy as np
import pytest

from halfshift import (
    DpssParams,
    Sequence,
    ShiftSpec,
    TailWindow,
    compute_dpss,
    dpss_coeffs,
    even_subsample_basis,
    random_unit_sequence,
    tail_bound,
    tail_energy_exact,
    tail_equality,
    upsampled_tail_bound,
)


def _leading_member_sequence(n):
    basis = even_subsample_basis(n)
    return Sequence(n_half=n // 2, values=basis.members[0])


def test_coeffs_of_leading_basis_member():
    n = 8
    r = _leading_member_sequence(n)
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    coeffs = dpss_coeffs(r, dset).values
    assert abs(coeffs[0] - 1.0 / np.sqrt(2.0)) < 1e-9
    assert np.max(np.abs(coeffs[1 : n + 1])) < 1e-9


def test_coeffs_zero_sequence():
    n = 8
    zero = Sequence(n_half=n // 2, values=np.zeros(n + 1))
    dset = compute_dpss(DpssParams(2 * n + 1, 0.2))
    assert np.all(dpss_coeffs(zero, dset).values == 0.0)


def test_coeff_magnitudes_pair_up_for_real_input(rng):
    n = 8
    vals = rng.standard_normal(n + 1)
    r = Sequence(n_half=n // 2, values=vals / np.linalg.norm(vals))
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    a = np.abs(dpss_coeffs(r, dset).values)
    assert np.max(np.abs(a - a[::-1])) < 1e-9


def test_coeffs_length_mismatch_rejected(rng):
    r = random_unit_sequence(8, rng)
    with pytest.raises(ValueError, match="length"):
        dpss_coeffs(r, compute_dpss(DpssParams(23, 0.25)))


def test_bound_zero_sequence():
    zero = Sequence(n_half=4, values=np.zeros(9))
    report = tail_bound(zero, 0.25)
    assert report.bound_value == 0.0
    assert report.exact_value == 0.0


@pytest.mark.parametrize("w", [0.1, 0.25, 0.5])
def test_bound_dominates_exact_tail(w, rng):
    for _ in range(10):
        r = random_unit_sequence(8, rng)
        report = tail_bound(r, w)
        assert report.slack >= -1e-10
        assert report.bound_value >= 0.0


def test_bound_components_sum(rng):
    report = tail_bound(random_unit_sequence(8, rng), 0.3)
    assert abs(report.components.sum() - report.bound_value) < 1e-12
    assert report.components.shape == (17,)


def test_bound_for_leading_member_full_band():
    r = _leading_member_sequence(8)
    report = tail_bound(r, 0.5)
    assert report.slack >= -1e-10


def test_equality_zero_sequence():
    zero = Sequence(n_half=2, values=np.zeros(5))
    report = tail_equality(zero)
    assert report.bound_value == 0.0
    assert report.exact_value == 0.0


@pytest.mark.parametrize("n", [2, 8, 16])
def test_full_band_identity_random(n, rng):
    for _ in range(25):
        r = random_unit_sequence(n, rng)
        report = tail_equality(r)
        if abs(report.exact_value) >= 1e-6:
            assert abs(report.slack) / abs(report.exact_value) < 1e-8
        else:
            assert abs(report.slack) < 1e-12


def test_full_band_identity_leading_member():
    n = 8
    r = _leading_member_sequence(n)
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    lam0 = dset.eigenvalues[0]
    lam0_pair = dset.eigenvalues[-1]  # equals 1 - lam0
    report = tail_equality(r)
    assert abs(report.bound_value - 4.0 * lam0 * lam0_pair) < 1e-12
    assert abs(report.slack) < 1e-12


def test_upsampled_bound_zero_sequence():
    zero = Sequence(n_half=2, values=np.zeros(5))
    rhs, a_term = upsampled_tail_bound(zero, 0.25, TailWindow(2, 2))
    assert rhs == 0.0
    assert a_term == 0.0


@pytest.mark.parametrize("w", [0.1, 0.25, 0.4])
@pytest.mark.parametrize("n", [4, 8])
def test_upsampled_bound_dominates(w, n, rng):
    for window in (TailWindow(n // 2, n // 2), TailWindow(n // 2 + 1, n // 2 + 2)):
        r = random_unit_sequence(n, rng)
        lhs = tail_energy_exact(r, ShiftSpec(w, 0.5), window)
        rhs, a_term = upsampled_tail_bound(r, w, window)
        assert rhs >= lhs - 1e-10
        assert a_term >= 0.0


def test_upsampled_bound_full_band_dominates_equality(rng):
    n = 8
    r = random_unit_sequence(n, rng)
    window = TailWindow(n // 2, n // 2 + 1)
    exact = tail_energy_exact(r, ShiftSpec(0.5, 0.5), window)
    rhs, _ = upsampled_tail_bound(r, 0.5, window)
    assert rhs >= exact - 1e-10


def test_componentwise_a_variant_differs(rng):
    # The diagnostic variant drops the cross terms of the squared
    # interpolation, so it generally disagrees with the default.
    r = random_unit_sequence(8, rng)
    window = TailWindow(4, 4)
    _, a_default = upsampled_tail_bound(r, 0.25, window)
    _, a_diag = upsampled_tail_bound(r, 0.25, window, a_variant="componentwise")
    assert a_diag >= 0.0
    assert abs(a_default - a_diag) > 1e-12
    with pytest.raises(ValueError):
        upsampled_tail_bound(r, 0.25, window, a_variant="bogus")
