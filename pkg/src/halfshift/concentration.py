"""Energy concentration of index-limited sequences after a half-sample shift.

For a unit-energy sequence on ``-N/2 .. N/2`` (N even), shifted by half a
sample at full band, the fraction of energy landing in ``[-N/2, N/2+1]`` has
an exact closed form in the quarter-band DPSS coefficients
``a_l = sum_n r[n] s_l[2n]`` of the set of length ``2N+3``:

    concentration = 1 / (1 + Q / (P - 1/8)),

    Q = sum_{l=0}^{N} |a_l|^2 lambda_l lambda*_l,
    P = sum_{l=0}^{N} |a_l|^2 (lambda_l^2 + lambda*_l^2) / 2,

where ``lambda*_l = lambda_{2N+2-l} = 1 - lambda_l`` is the paired eigenvalue.
``8 Q`` is the tail energy and ``8 P - 1`` the window energy; together they
reproduce the (unit) total exactly, because the coefficients satisfy
``sum_{l<=N} |a_l|^2 = 1/2`` for every unit-energy input.  Folding the paired
eigenvalue moments into the half index range is what makes the closed form an
identity; the single-sided variant that keeps only ``lambda_l^2`` in ``P``
(reported as ``unpaired_formula_value``) is not exact and is retained for
comparison only.

The basis member with the largest leading coefficient maximizes the
concentration, which orders the even-subsample basis by decreasing
concentration; member 0 is the global optimum over all unit-energy inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds import CoeffVector, dpss_coeffs
from .dpss_core import DpssParams, OrthoBasis, compute_dpss, even_subsample_basis
from .errors import NumericalFaultError
from .fracshift import Sequence, ShiftSpec, apply_shift, total_energy

# Unit-energy tolerance below which inputs are used as-is.
_UNIT_ENERGY_TOL = 1e-10
# Energy deviations beyond this trigger an explicit normalization notice.
_NORMALIZE_NOTICE_TOL = 0.1
# Reported concentrations this close to 1 are clamped to exactly 1.0.
_CONCENTRATION_CLAMP = 1e-12
_DEGENERATE_DENOMINATOR_TOL = 1e-12
_FULL_BAND_HALF_SHIFT = ShiftSpec(half_bandwidth=0.5, shift=0.5)


@dataclass(frozen=True)
class ConcentrationReport:
    """Concentration of a sequence after the full-band half-sample shift.

    Attributes
    ----------
    coeffs : CoeffVector
        Quarter-band projection coefficients (all ``2N+3`` of them).
    window_energy : float
        Shifted energy inside ``[-N/2, N/2+1]``, summed directly.
    tail_energy : float
        Closed-form tail ``8 Q``.
    total_energy : float
        Closed-form total (1 up to rounding for unit-energy input).
    concentration : float
        Reported concentration in ``(0, 1]``: the direct ratio, clamped to
        1.0 when within 1e-12 of it.
    formula_value : float
        Paired closed form; matches ``direct_value`` to rounding.  NaN when
        the denominator is degenerate (see ``degenerate_denominator``).
    direct_value : float
        ``window_energy / total_energy``.
    unpaired_formula_value : float
        Single-sided closed-form variant, for comparison only.
    degenerate_denominator : bool
        True when the closed-form denominator is too close to zero to be
        meaningful; ``concentration`` then rests on the direct ratio alone.
    was_normalized : bool
        True when the input was internally rescaled to unit energy.
    """

    coeffs: CoeffVector
    window_energy: float
    tail_energy: float
    total_energy: float
    concentration: float
    formula_value: float
    direct_value: float
    unpaired_formula_value: float
    degenerate_denominator: bool
    was_normalized: bool


class OptimalSequenceResult(NamedTuple):
    sequence: Sequence
    report: ConcentrationReport
    leading_mode_closed_form: float


class MatrixFormCheck(NamedTuple):
    numerator_quad: float
    denominator_quad: float


@dataclass(frozen=True)
class RankedBasis:
    """Even-subsample basis with members ordered by decreasing concentration."""

    members: OrthoBasis
    concentrations: np.ndarray


def _paired_moments(dset, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenvalue products for the retained range: lam, paired 1-lam, both exact."""
    lam_top = dset.eigenvalues[: n + 1]
    lam_pair = dset.eigenvalues[::-1][: n + 1]
    return lam_top, lam_pair, lam_top * lam_pair


def _normalized_input(r: Sequence) -> tuple[Sequence, bool]:
    energy = r.energy()
    if energy == 0.0:
        raise ValueError("zero-energy input")
    norm = math.sqrt(energy)
    if abs(norm - 1.0) <= _UNIT_ENERGY_TOL:
        return r, False
    if abs(norm - 1.0) > _NORMALIZE_NOTICE_TOL:
        warnings.warn(
            f"input energy {energy:.6g} deviates from 1 by more than 10%; "
            "normalizing internally",
            RuntimeWarning,
            stacklevel=3,
        )
    return Sequence(n_half=r.n_half, values=r.values / norm), True


def concentration(r: Sequence) -> ConcentrationReport:
    """Concentration report for a sequence (normalized internally if needed).

    Evaluates the paired closed form and, independently, the direct ratio of
    window to total energy through the shift operator; the two agree to
    rounding.  Inputs more than 10% away from unit energy trigger an explicit
    normalization notice.

    Raises
    ------
    ValueError
        For zero-energy input (or odd support extent, which the Sequence
        type already excludes).
    """
    rn, was_normalized = _normalized_input(r)
    n = rn.n
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    coeffs = dpss_coeffs(rn, dset)
    a2 = np.abs(coeffs.values[: n + 1]) ** 2
    lam_top, lam_pair, lam_prod = _paired_moments(dset, n)

    q_tail = float(np.sum(a2 * lam_prod))
    p_paired = float(np.sum(a2 * 0.5 * (lam_top**2 + lam_pair**2)))
    p_raw = float(np.sum(a2 * lam_top**2))

    tail = 8.0 * q_tail
    denominator = p_paired - 0.125
    degenerate = denominator <= _DEGENERATE_DENOMINATOR_TOL
    formula = math.nan if degenerate else 1.0 / (1.0 + q_tail / denominator)
    raw_denominator = p_raw - 0.125
    unpaired = (
        math.nan
        if raw_denominator <= _DEGENERATE_DENOMINATOR_TOL
        else 1.0 / (1.0 + q_tail / raw_denominator)
    )

    window = float(
        np.sum(np.abs(apply_shift(rn, _FULL_BAND_HALF_SHIFT, (-(n // 2), n // 2 + 1))) ** 2)
    )
    total = total_energy(rn, _FULL_BAND_HALF_SHIFT)
    direct = window / total
    reported = 1.0 if direct > 1.0 - _CONCENTRATION_CLAMP else direct

    return ConcentrationReport(
        coeffs=coeffs,
        window_energy=window,
        tail_energy=tail,
        total_energy=total,
        concentration=reported,
        formula_value=formula,
        direct_value=direct,
        unpaired_formula_value=unpaired,
        degenerate_denominator=degenerate,
        was_normalized=was_normalized,
    )


def optimal_sequence(n: int) -> OptimalSequenceResult:
    """The unit-energy sequence of maximal concentration on support extent ``n``.

    Returns the leading even-subsample basis member ``sqrt(2) s_0[2k]``, its
    concentration report, and separately the single-mode closed form
    ``1 / (1 + lambda_0 (1 - lambda_0) / (lambda_0^2 - 1/8))`` evaluated with
    the leading eigenvalue alone.  That single-mode value uses the unpaired
    denominator; the report's ``formula_value``/``direct_value`` pair is the
    numerically adjudicated concentration.

    Raises
    ------
    ValueError
        If ``n`` is odd or ``< 2``.
    """
    basis = even_subsample_basis(n)
    rstar = Sequence(n_half=n // 2, values=basis.members[0])
    report = concentration(rstar)
    lam0 = float(basis.source_eigenvalues[0])
    leading = 1.0 / (1.0 + lam0 * (1.0 - lam0) / (lam0**2 - 0.125))
    return OptimalSequenceResult(
        sequence=rstar, report=report, leading_mode_closed_form=leading
    )


def ranked_basis(n: int) -> RankedBasis:
    """Even-subsample basis with per-member concentrations, ordered nonincreasing.

    Each member's concentration is evaluated through the full report path
    (closed form cross-checked against the direct ratio).  The ordering is
    verified, not assumed; a violation raises
    :class:`~halfshift.errors.NumericalFaultError`.
    """
    basis = even_subsample_basis(n)
    values = np.empty(basis.size)
    for l in range(basis.size):
        rep = concentration(Sequence(n_half=n // 2, values=basis.members[l]))
        values[l] = rep.formula_value if not rep.degenerate_denominator else rep.direct_value
    if np.any(np.diff(values) > 1e-12):
        raise NumericalFaultError("basis concentrations are not nonincreasing")
    values.setflags(write=False)
    return RankedBasis(members=basis, concentrations=values)


def matrix_form_check(r: Sequence) -> MatrixFormCheck:
    """Quadratic-form arrangement of the concentration numerator and denominator.

    Builds the even-sample matrix ``S`` (``S[k, l] = s_l[2k]``, no sqrt(2)
    scaling) over the retained members ``l = 0 .. N`` and evaluates

        q1 = || diag(lambda lambda*)^(1/2) S' r ||^2
        q2 = || diag(lambda^2)^(1/2)      S' r ||^2

    where ``lambda*`` is the paired eigenvalue, so ``lambda lambda* =
    lambda (1 - lambda)`` exactly.  Both are required to match the
    member-by-member scalar sums within 1e-10; a mismatch raises
    :class:`~halfshift.errors.NumericalFaultError` rather than reordering
    anything silently.
    """
    rn, _ = _normalized_input(r)
    n = rn.n
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    smat = dset.even_sample_matrix(rn.n_half)[:, : n + 1]  # (N+1, N+1), column l
    lam_top, lam_pair, lam_prod = _paired_moments(dset, n)
    projected = smat.T @ rn.values
    q1 = float(np.sum(lam_prod * np.abs(projected) ** 2))
    q2 = float(np.sum(lam_top**2 * np.abs(projected) ** 2))

    coeffs = dpss_coeffs(rn, dset).values[: n + 1]
    scalar_q1 = math.fsum(
        lam_prod[l] * abs(coeffs[l]) ** 2 for l in range(n + 1)
    )
    scalar_q2 = math.fsum(
        lam_top[l] ** 2 * abs(coeffs[l]) ** 2 for l in range(n + 1)
    )
    if abs(q1 - scalar_q1) > 1e-10 or abs(q2 - scalar_q2) > 1e-10:
        raise NumericalFaultError(
            "matrix quadratic forms disagree with scalar sums: "
            f"|dq1|={abs(q1 - scalar_q1):.3e}, |dq2|={abs(q2 - scalar_q2):.3e}"
        )
    return MatrixFormCheck(numerator_quad=q1, denominator_quad=q2)


def sample_concentrations(n: int, count: int, seed: int) -> np.ndarray:
    """Closed-form concentrations of ``count`` seeded random unit-energy sequences.

    Vectorized helper for optimality sweeps: draws complex standard-normal
    sequences on support extent ``n``, normalizes each, and evaluates the
    paired closed form for all of them.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"support extent must be even and >= 2, got {n}")
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((count, n + 1)) + 1j * rng.standard_normal((count, n + 1))
    draws /= np.linalg.norm(draws, axis=1, keepdims=True)
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    smat = dset.even_sample_matrix(n // 2)[:, : n + 1]  # (N+1, N+1)
    lam_top, lam_pair, lam_prod = _paired_moments(dset, n)
    a2 = np.abs(draws @ smat) ** 2  # (count, N+1)
    q_tail = a2 @ lam_prod
    p_paired = a2 @ (0.5 * (lam_top**2 + lam_pair**2))
    return 1.0 / (1.0 + q_tail / (p_paired - 0.125))
