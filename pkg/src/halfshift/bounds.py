"""Leakage-energy bounds for half-sample shifted index-limited sequences.

For a sequence supported on ``-N/2 .. N/2`` (N even), the energy leaking
outside ``[-N/2, N/2]`` after a half-sample shift with half-bandwidth ``W`` is
bounded by a weighted sum of DPSS projection coefficients,

    tail <= sum_{l=0}^{2N} |a_l / W|^2 lambda_l (1 - lambda_l),

with ``a_l = sum_n r[n] s_l[2n]`` over the set of parameters ``(2N+1, W/2)``.
At full band (``W = 0.5``) the tail outside ``[-N/2, N/2+1]`` is given exactly
by ``8 sum_{l=0}^{N} |a_l|^2 lambda_l (1 - lambda_l)`` over the quarter-band
set of length ``2N+3``.  A tightened inequality relates the tail to that of
the two-fold upsampled sequence minus a boundary correction term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dpss_core import DpssParams, DpssSet, compute_dpss
from .fracshift import Sequence, ShiftSpec, TailWindow, apply_shift, tail_energy_exact, upsample2


@dataclass(frozen=True)
class CoeffVector:
    """Projection coefficients of a sequence onto the even samples of a DPSS set.

    ``values[l] = sum_n r[n] s_l[2n]`` for every member of the generating set.
    """

    values: np.ndarray
    source_params: DpssParams

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.source_params.length,):
            raise ValueError(
                f"values must have shape ({self.source_params.length},), got {vals.shape}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class BoundReport:
    """A bound (or identity) value with its exact counterpart and per-member split.

    ``components`` sums to ``bound_value``; ``slack = bound_value - exact_value``
    is nonnegative up to rounding for the inequality and of rounding size for
    the full-band identity.
    """

    bound_value: float
    exact_value: float | None
    slack: float | None
    components: np.ndarray


class UpsampledTailBound(NamedTuple):
    rhs: float
    a_term: float


def dpss_coeffs(r: Sequence, dpss_set: DpssSet) -> CoeffVector:
    """Even-sample projection coefficients ``a_l = sum_n r[n] s_l[2n]``.

    The set length must be ``2N+1`` or ``2N+3`` for a sequence of support
    extent ``N``, so the even samples ``s_l[2n]``, ``n = -N/2 .. N/2``, exist.
    """
    n = r.n
    m = dpss_set.length
    if m not in (2 * n + 1, 2 * n + 3):
        raise ValueError(
            f"set length {m} does not match sequence support extent {n}: "
            f"expected {2 * n + 1} or {2 * n + 3}"
        )
    even = dpss_set.even_sample_matrix(r.n_half)  # (N+1, M)
    return CoeffVector(values=even.T @ r.values, source_params=dpss_set.params)


def tail_bound(r: Sequence, w: float) -> BoundReport:
    """Upper bound on the tail energy outside ``[-N/2, N/2]`` after a half-sample shift.

    Builds the DPSS set ``(2N+1, W/2)``, forms the per-member contributions
    ``|a_l / W|^2 lambda_l (1 - lambda_l)``, and also evaluates the exact tail
    through the closed-form energy split for comparison.

    Parameters
    ----------
    r : Sequence
    w : float
        Shift half-bandwidth, ``0 < w <= 0.5``.
    """
    spec = ShiftSpec(half_bandwidth=w, shift=0.5)
    n = r.n
    dset = compute_dpss(DpssParams(2 * n + 1, 0.5 * w))
    coeffs = dpss_coeffs(r, dset)
    lam = dset.eigenvalues
    components = np.abs(coeffs.values / w) ** 2 * lam * (1.0 - lam)
    bound = float(components.sum())
    exact = tail_energy_exact(r, spec, TailWindow(n // 2, n // 2))
    return BoundReport(
        bound_value=bound, exact_value=exact, slack=bound - exact, components=components
    )


def tail_equality(r: Sequence) -> BoundReport:
    """Exact tail energy outside ``[-N/2, N/2+1]`` for the full-band half-sample shift.

    Evaluates ``8 sum_{l=0}^{N} |a_l|^2 lambda_l (1 - lambda_l)`` over the
    quarter-band set of length ``2N+3``.  The factors ``1 - lambda_l`` are
    taken from the paired members, which keeps them accurate when
    ``lambda_l`` saturates at 1 in double precision.  The same tail computed
    through the closed-form energy split is reported as ``exact_value``.
    """
    n = r.n
    dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
    coeffs = dpss_coeffs(r, dset)
    lam_top = dset.eigenvalues[: n + 1]
    lam_pair = dset.eigenvalues[::-1][: n + 1]  # equals 1 - lam_top by construction
    components = 8.0 * np.abs(coeffs.values[: n + 1]) ** 2 * lam_top * lam_pair
    value = float(components.sum())
    exact = tail_energy_exact(
        r, ShiftSpec(half_bandwidth=0.5, shift=0.5), TailWindow(n // 2, n // 2 + 1)
    )
    return BoundReport(
        bound_value=value, exact_value=exact, slack=value - exact, components=components
    )


def upsampled_tail_bound(
    r: Sequence, w: float, window: TailWindow, a_variant: str = "interpolated"
) -> UpsampledTailBound:
    """Tail bound through the two-fold upsampled sequence, minus a boundary term.

    The tail of the half-sample shifted ``r`` outside ``[-l, m]`` is at most
    the tail of the unshifted band-limited upsampled sequence outside
    ``[-2l, 2m]`` minus ``A``, where ``A`` collects the two interpolated
    samples at indices ``-2l-1`` and ``-2l-2``:

        A = sum_{i=1,2} |(B_{W/2} (r up 2))[-2l-i]|^2.

    ``a_variant="componentwise"`` instead evaluates the diagnostic variant
    ``sum_{i=1,2} sum_q |r[q]|^2 sinc^2(2W(-l-i/2-q))``, which drops the cross
    terms of the squared interpolation; the inequality is only guaranteed for
    the default variant.

    Returns
    -------
    UpsampledTailBound
        ``(rhs, a_term)`` with ``rhs = upsampled tail - a_term``.
    """
    up = upsample2(r)
    half_spec = ShiftSpec(half_bandwidth=0.5 * w, shift=0.0)
    upsampled_tail = tail_energy_exact(
        up, half_spec, TailWindow(2 * window.left, 2 * window.right)
    )
    if a_variant == "interpolated":
        edge = apply_shift(up, half_spec, (-2 * window.left - 2, -2 * window.left - 1))
        a_term = float(np.sum(np.abs(edge) ** 2))
    elif a_variant == "componentwise":
        q = r.support
        a_term = 0.0
        for i in (1, 2):
            kern = np.sinc(2.0 * w * (-window.left - i / 2.0 - q))
            a_term += float(np.sum(np.abs(r.values) ** 2 * kern**2))
    else:
        raise ValueError(f"unknown a_variant {a_variant!r}")
    return UpsampledTailBound(rhs=upsampled_tail - a_term, a_term=a_term)
