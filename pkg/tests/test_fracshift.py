"""Fractional shift operator, energy closed forms, and the truncated oracle."""

import math

import numpy as np
import pytest

from halfshift import (
    DpssParams,
    HorizonExceededError,
    NumericalFaultError,
    Sequence,
    ShiftSpec,
    TailWindow,
    apply_shift,
    compute_dpss,
    random_unit_sequence,
    tail_energy_exact,
    tail_energy_truncated,
    total_energy,
    upsample2,
)
from halfshift.fracshift import _clamp_tail

IMPULSE = Sequence(n_half=1, values=[0.0, 1.0, 0.0])
IMPULSE_TAIL = 1.0 - 8.0 / math.pi**2  # window holds sinc(+-0.5) = 2/pi


def test_sequence_validation():
    with pytest.raises(ValueError):
        Sequence(n_half=0, values=[1.0])
    with pytest.raises(ValueError):
        Sequence(n_half=1, values=[1.0, 2.0])
    with pytest.raises(ValueError):
        Sequence(n_half=1, values=[1.0, np.nan, 0.0])
    with pytest.raises(ValueError):
        Sequence.centered([1.0, 2.0, 3.0, 4.0])
    seq = Sequence.centered([1.0, 2.0, 3.0])
    assert seq.n_half == 1 and seq.n == 2


def test_shift_spec_validation():
    with pytest.raises(ValueError):
        ShiftSpec(0.0, 0.5)
    with pytest.raises(ValueError):
        ShiftSpec(0.6, 0.5)
    with pytest.raises(ValueError):
        ShiftSpec(0.25, math.inf)
    with pytest.raises(ValueError):
        TailWindow(-1, 2)


def test_upsample2_definition():
    out = upsample2(Sequence.centered([0.0, 1.0, 0.0]))
    np.testing.assert_array_equal(out.values, [0, 0, 1, 0, 0])
    out = upsample2(Sequence.centered([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(out.values, [1, 0, 2, 0, 3])
    assert out.n_half == 2


def test_upsample2_preserves_energy(rng):
    r = random_unit_sequence(8, rng)
    assert abs(upsample2(r).energy() - r.energy()) < 1e-15


def test_full_band_zero_shift_is_identity(rng):
    r = random_unit_sequence(6, rng)
    spec = ShiftSpec(0.5, 0.0)
    on_support = apply_shift(r, spec, (-3, 3))
    np.testing.assert_array_equal(on_support, r.values)
    outside = apply_shift(r, spec, (4, 10))
    assert np.max(np.abs(outside)) == 0.0


def test_impulse_half_sample_values():
    samples = apply_shift(IMPULSE, ShiftSpec(0.5, 0.5), (0, 1))
    assert abs(samples[0] - 2.0 / math.pi) < 1e-15
    assert abs(samples[1] - 2.0 / math.pi) < 1e-15


@pytest.mark.parametrize("n", [2, 4, 8, 16, 32])
@pytest.mark.parametrize("w", [0.1, 0.25, 0.4, 0.5])
def test_half_shift_equals_upsampled_integer_shift(n, w, rng):
    for _ in range(3):
        r = random_unit_sequence(n, rng)
        lhs = apply_shift(r, ShiftSpec(w, 0.5), (-2 * n, 2 * n))
        rhs = apply_shift(upsample2(r), ShiftSpec(w / 2.0, 1.0), (-4 * n, 4 * n))[::2]
        assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("tau", [0.0, 0.3, 0.5, 1.7])
def test_full_band_energy_is_preserved(tau, rng):
    r = random_unit_sequence(8, rng)
    assert abs(total_energy(r, ShiftSpec(0.5, tau)) - 1.0) < 1e-12


def test_total_energy_shift_invariant(rng):
    r = random_unit_sequence(8, rng)
    for w in (0.1, 0.25, 0.4):
        values = [total_energy(r, ShiftSpec(w, tau)) for tau in (0.0, 0.3, 0.5, 1.7)]
        assert max(values) - min(values) < 1e-12


@pytest.mark.parametrize("w,l", [(0.3, 0), (0.3, 3), (0.5, 2), (0.2, 5)])
def test_dpss_member_energy_matches_eigenvalue(w, l):
    # member of the set (2N+1, W/2): total shifted energy is lambda / W^2
    n = 8
    dset = compute_dpss(DpssParams(2 * n + 1, 0.5 * w))
    member = Sequence(n_half=n, values=dset.vectors[l])
    energy = total_energy(member, ShiftSpec(0.5 * w, 0.0))
    assert abs(energy - dset.eigenvalues[l] / w**2) < 1e-10


@pytest.mark.parametrize("w,l", [(0.3, 0), (0.3, 4), (0.5, 3)])
def test_dpss_member_tail_matches_eigenvalue_product(w, l):
    n = 8
    dset = compute_dpss(DpssParams(2 * n + 1, 0.5 * w))
    member = Sequence(n_half=n, values=dset.vectors[l])
    tail = tail_energy_exact(member, ShiftSpec(0.5 * w, 0.0), TailWindow(2 * n, 2 * n))
    lam = dset.eigenvalues[l]
    assert abs(tail - lam * (1.0 - lam) / w**2) < 1e-9


def test_total_energy_agrees_with_wide_window_sum(rng):
    r = random_unit_sequence(4, rng)
    spec = ShiftSpec(0.25, 0.3)
    total = total_energy(r, spec)
    horizon = 200_000
    partial = float(np.sum(np.abs(apply_shift(r, spec, (-horizon, horizon))) ** 2))
    # remainder decays like 1/H; at this horizon that is a few 1e-6
    assert abs(total - partial) < 1e-4
    assert total >= partial - 1e-12


def test_upsampled_energy_doubles(rng):
    r = random_unit_sequence(8, rng)
    for w in (0.1, 0.25, 0.5):
        doubled = total_energy(upsample2(r), ShiftSpec(w / 2.0, 0.3))
        assert abs(doubled - 2.0 * total_energy(r, ShiftSpec(w, 0.3))) < 1e-10


def test_zero_tail_for_zero_sequence():
    zero = Sequence(n_half=1, values=[0.0, 0.0, 0.0])
    spec = ShiftSpec(0.25, 0.5)
    assert tail_energy_exact(zero, spec, TailWindow(1, 1)) == 0.0
    result = tail_energy_truncated(zero, spec, TailWindow(1, 1), 1e-10)
    assert result.value == 0.0
    assert result.horizon == 1024


def test_impulse_tail_closed_form():
    tail = tail_energy_exact(IMPULSE, ShiftSpec(0.5, 0.5), TailWindow(0, 1))
    assert abs(tail - IMPULSE_TAIL) < 1e-12


def test_impulse_tail_truncated_oracle():
    # The remainder of the literal partial sum decays like 0.2/H, so a
    # moderate tolerance converges within the horizon cap.
    tol = 3e-7
    value, horizon = tail_energy_truncated(IMPULSE, ShiftSpec(0.5, 0.5), TailWindow(0, 1), tol)
    assert horizon >= 2**19
    assert abs(value - IMPULSE_TAIL) < 1e-6


def test_truncated_oracle_rejects_unreachable_tolerance():
    # tol = 1e-10 needs a horizon of ~1e9 while the cap is 2**26.
    with pytest.raises(HorizonExceededError):
        tail_energy_truncated(IMPULSE, ShiftSpec(0.5, 0.5), TailWindow(0, 1), 1e-10)


def test_truncated_oracle_agrees_with_exact(rng):
    tol = 1e-5
    for case in range(12):
        n = (2, 4, 8)[case % 3]
        w = (0.5, 0.5, 0.25)[case % 3]
        r = random_unit_sequence(n, rng)
        window = TailWindow(n // 2, n // 2)
        spec = ShiftSpec(w, 0.5)
        exact = tail_energy_exact(r, spec, window)
        value, _ = tail_energy_truncated(r, spec, window, tol)
        assert abs(exact - value) <= max(tol, 1e-9)
        assert value <= exact + 1e-12  # partial sums can only undershoot


def test_tail_clamp_behavior():
    assert _clamp_tail(0.0) == 0.0
    assert _clamp_tail(1e-20) == 1e-20
    with pytest.warns(RuntimeWarning):
        assert _clamp_tail(-1e-13) == 0.0
    with pytest.raises(NumericalFaultError):
        _clamp_tail(-1e-11)


def test_window_covering_support_leaves_no_tail(rng):
    r = random_unit_sequence(8, rng)
    with np.testing.suppress_warnings() as sup:
        sup.filter(RuntimeWarning)
        tail = tail_energy_exact(r, ShiftSpec(0.5, 0.0), TailWindow(4, 4))
    assert abs(tail) < 1e-14


@pytest.mark.parametrize("left,right", [(4, 5), (5, 5), (6, 7)])
def test_full_band_tail_equality_through_upsampling(left, right, rng):
    n = 8
    r = random_unit_sequence(n, rng)
    lhs = tail_energy_exact(r, ShiftSpec(0.5, 0.5), TailWindow(left, right))
    rhs = tail_energy_exact(
        upsample2(r), ShiftSpec(0.25, 0.0), TailWindow(2 * left + 1, 2 * right - 1)
    )
    assert abs(lhs - rhs) < 1e-9
