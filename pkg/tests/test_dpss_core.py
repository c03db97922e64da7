"""DPSS set computation: eigensolver contract, symmetries, subsampled basis."""

import numpy as np
import pytest
from scipy.signal import windows

from halfshift import (
    DpssParams,
    DpssSet,
    FamilyMismatchError,
    SizeLimitError,
    compute_dpss,
    dpss_diagnostics,
    even_subsample_basis,
    flip_pairing_report,
    kernel_matrix,
)

# Golden top eigenvalues frozen from an independent 50-digit-precision dense
# symmetric eigensolve of the same kernel (tolerance 1e-10 in the checks).
GOLDEN_LAMBDA0 = {
    (35, 0.25): 1.0,  # 1 - 7.8366e-26, below double resolution
    (19, 0.25): 0.9999999999998995,
    (33, 0.1): 0.9999999841800278,
}
GOLDEN_LAMBDA1_33_01 = 0.9999986996147448


def test_params_validation():
    with pytest.raises(ValueError, match="odd"):
        DpssParams(4, 0.25)
    with pytest.raises(ValueError, match="odd"):
        DpssParams(2, 0.25)
    with pytest.raises(ValueError):
        DpssParams(19, 0.6)
    with pytest.raises(ValueError):
        DpssParams(19, 0.5)
    with pytest.raises(ValueError):
        DpssParams(19, 0.0)


def test_size_limit():
    with pytest.raises(SizeLimitError):
        compute_dpss(DpssParams(8195, 0.25))
    with pytest.raises(SizeLimitError):
        compute_dpss(DpssParams(101, 0.25), max_length=99)


def test_trace_identity_smallest():
    dset = compute_dpss(DpssParams(3, 0.25))
    assert abs(dset.eigenvalues.sum() - 1.5) < 1e-12


@pytest.mark.parametrize("length,w", [(19, 0.25), (35, 0.25), (33, 0.1)])
def test_diagnostics_within_contract(length, w):
    diag = dpss_diagnostics(compute_dpss(DpssParams(length, w)))
    assert diag["unit_energy"] < 1e-12
    assert diag["orthonormality"] < 1e-9
    assert diag["eigen_residual"] < 1e-9
    assert diag["trace"] < 1e-9
    assert diag["rayleigh"] < 1e-10


@pytest.mark.parametrize("length,w", sorted(GOLDEN_LAMBDA0))
def test_golden_top_eigenvalue(length, w):
    dset = compute_dpss(DpssParams(length, w))
    assert abs(dset.eigenvalues[0] - GOLDEN_LAMBDA0[(length, w)]) < 1e-10


def test_golden_second_eigenvalue():
    dset = compute_dpss(DpssParams(33, 0.1))
    assert abs(dset.eigenvalues[1] - GOLDEN_LAMBDA1_33_01) < 1e-10


@pytest.mark.parametrize("length,w", [(19, 0.25), (35, 0.25), (33, 0.1)])
def test_eigenvalues_ordered_in_unit_interval(length, w):
    lam = compute_dpss(DpssParams(length, w)).eigenvalues
    assert np.all(np.diff(lam) <= 0.0)
    assert lam[0] <= 1.0 and lam[-1] >= 0.0
    # interior strictness is resolvable at these desk scales
    assert lam[0] > lam[-1]
    mid = (length - 1) // 2
    assert 0.0 < lam[mid] < 1.0


@pytest.mark.parametrize("n", [2, 8, 16])
def test_middle_eigenvalue_is_half(n):
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    assert abs(dset.eigenvalues[n + 1] - 0.5) < 1e-10


@pytest.mark.parametrize("n", [8, 16])
def test_flip_pairing_clean_sets(n):
    report = flip_pairing_report(compute_dpss(DpssParams(2 * n + 3, 0.25)))
    assert report.flip < 1e-9
    assert report.pairing < 1e-9


def test_flip_residual_sign_invariant():
    dset = compute_dpss(DpssParams(19, 0.25))
    vectors = dset.vectors.copy()
    vectors[3] = -vectors[3]
    tampered = DpssSet(params=dset.params, vectors=vectors, eigenvalues=dset.eigenvalues)
    report = flip_pairing_report(tampered)
    assert report.flip < 1e-9


def test_pairing_detects_tampered_eigenvalue():
    dset = compute_dpss(DpssParams(19, 0.25))
    lam = dset.eigenvalues.copy()
    lam[0] = lam[0] + 0.01
    tampered = DpssSet(params=dset.params, vectors=dset.vectors.copy(), eigenvalues=lam)
    report = flip_pairing_report(tampered)
    assert report.pairing >= 0.01


def test_flip_detects_tampered_vector():
    dset = compute_dpss(DpssParams(19, 0.25))
    vectors = dset.vectors.copy()
    vectors[1] = vectors[2]
    tampered = DpssSet(params=dset.params, vectors=vectors, eigenvalues=dset.eigenvalues)
    assert flip_pairing_report(tampered).flip > 1e-3


def test_family_mismatch_rejected():
    with pytest.raises(FamilyMismatchError):
        flip_pairing_report(compute_dpss(DpssParams(19, 0.2)))
    with pytest.raises(FamilyMismatchError):
        # length 21 = 2*9 + 3 has odd N, outside the family
        flip_pairing_report(compute_dpss(DpssParams(21, 0.25)))


def test_spectral_consistency_uses_kernel():
    dset = compute_dpss(DpssParams(19, 0.25))
    k = kernel_matrix(dset.params)
    rayleigh = np.einsum("ij,ij->i", dset.vectors, dset.vectors @ k)
    assert np.max(np.abs(rayleigh - dset.eigenvalues)) < 1e-10


def test_basis_smallest_case():
    basis = even_subsample_basis(2)
    assert basis.members.shape == (3, 3)
    gram = basis.members @ basis.members.T
    assert np.max(np.abs(gram - np.eye(3))) < 1e-9


def test_parent_middle_member_even_samples_vanish():
    n = 8
    parent = compute_dpss(DpssParams(2 * n + 3, 0.25))
    even = parent.even_sample_matrix(n // 2)[:, n + 1]
    assert np.max(np.abs(even)) < 1e-9


def test_basis_members_unit_norm():
    basis = even_subsample_basis(16)
    norms = np.linalg.norm(basis.members, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-12


@pytest.mark.parametrize("n", [2, 6, 12, 20])
def test_basis_gram_identity(n):
    basis = even_subsample_basis(n)
    gram = basis.members @ basis.members.T
    assert np.max(np.abs(gram - np.eye(n + 1))) < 1e-9


def test_basis_rejects_odd_or_small():
    with pytest.raises(ValueError):
        even_subsample_basis(5)
    with pytest.raises(ValueError):
        even_subsample_basis(0)


def _canon(v):
    idx = np.argmax(np.abs(v) > 1e-8 * np.max(np.abs(v)))
    return v if v[idx] > 0 else -v


def test_cross_validation_against_scipy_windows():
    # Well-separated top of the spectrum: member-wise comparison is meaningful.
    length, w = 33, 0.1
    dset = compute_dpss(DpssParams(length, w))
    tapers, ratios = windows.dpss(length, length * w, Kmax=6, return_ratios=True, norm=2)
    for l in range(4):
        ours = _canon(dset.vectors[l])
        theirs = _canon(tapers[l])
        assert np.max(np.abs(ours - theirs)) < 1e-7
    assert np.max(np.abs(dset.eigenvalues[:4] - ratios[:4])) < 1e-7


def test_cross_validation_subspace_quarter_band():
    # Near-1 eigenvalues cluster below float resolution at (19, 0.25); the
    # leading invariant subspace is still well conditioned, so compare
    # projectors rather than individual members.
    length, w, k = 19, 0.25, 3
    dset = compute_dpss(DpssParams(length, w))
    tapers = windows.dpss(length, length * w, Kmax=k, norm=2)
    p_ours = dset.vectors[:k].T @ dset.vectors[:k]
    p_scipy = tapers.T @ tapers
    assert np.max(np.abs(p_ours - p_scipy)) < 1e-6


def test_sets_are_immutable_and_cached():
    a = compute_dpss(DpssParams(19, 0.25))
    b = compute_dpss(DpssParams(19, 0.25))
    assert a.vectors is b.vectors
    with pytest.raises(ValueError):
        a.vectors[0, 0] = 1.0
