"""Band-limited fractional shifts of index-limited sequences and their energies.

The shift operator with half-bandwidth ``W`` and shift ``tau`` maps a sequence
``r`` to

    (B r)[n] = sum_q r[q] sinc(2 W (n - tau - q)),

with ``sinc(x) = sin(pi x) / (pi x)``.  The output is band-limited to ``|f| <=
W`` and generally has infinite extent even for finite inputs.  Its total
energy admits the closed quadratic form

    sum_n |(B r)[n]|^2 = (1 / 2W) sum_{q,q'} r[q] conj(r[q']) sinc(2W (q - q')),

independent of ``tau``; tail energies outside a kept window follow exactly as
total minus the finite window sum.  A truncated partial-sum oracle is provided
as an independent cross-check.

All arithmetic is complex; real inputs are just a special case.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import HorizonExceededError, NumericalFaultError

# Tail energies are total minus window; rounding may leave a tiny negative.
_NEGATIVE_TAIL_TOL = 1e-12

_ORACLE_START_HORIZON = 1024
_ORACLE_MAX_HORIZON = 2**26
_ORACLE_CHUNK = 1 << 16


@dataclass(frozen=True)
class Sequence:
    """Finite complex sequence on the centered support ``-N/2 .. N/2``, N even.

    Parameters
    ----------
    n_half : int
        Samples per side of center (``N/2 >= 1``).
    values : array_like
        ``N + 1`` finite complex values, ``values[j]`` at index ``n = j - n_half``.
    """

    n_half: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if int(self.n_half) != self.n_half or self.n_half < 1:
            raise ValueError(f"n_half must be a positive integer, got {self.n_half}")
        object.__setattr__(self, "n_half", int(self.n_half))
        vals = np.asarray(self.values, dtype=np.complex128).copy()
        if vals.shape != (2 * self.n_half + 1,):
            raise ValueError(
                f"values must have shape ({2 * self.n_half + 1},), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals.view(np.float64))):
            raise ValueError("sequence values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def centered(cls, values) -> "Sequence":
        """Build from values alone; the support is inferred (length must be odd)."""
        vals = np.asarray(values)
        if vals.ndim != 1 or vals.size % 2 == 0 or vals.size < 3:
            raise ValueError("need an odd number (>= 3) of values on a centered support")
        return cls(n_half=(vals.size - 1) // 2, values=vals)

    @property
    def n(self) -> int:
        """Support extent ``N`` (even): indices run over ``-N/2 .. N/2``."""
        return 2 * self.n_half

    @property
    def support(self) -> np.ndarray:
        return np.arange(-self.n_half, self.n_half + 1)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def one_norm(self) -> float:
        return float(np.sum(np.abs(self.values)))


@dataclass(frozen=True)
class ShiftSpec:
    """Half-bandwidth ``W`` in ``(0, 0.5]`` and real shift ``tau`` in samples."""

    half_bandwidth: float
    shift: float

    def __post_init__(self) -> None:
        w = float(self.half_bandwidth)
        tau = float(self.shift)
        if not (0.0 < w <= 0.5):
            raise ValueError(f"half_bandwidth must lie in (0, 0.5], got {w}")
        if not math.isfinite(tau):
            raise ValueError("shift must be finite")
        object.__setattr__(self, "half_bandwidth", w)
        object.__setattr__(self, "shift", tau)


@dataclass(frozen=True)
class TailWindow:
    """Kept region ``[-left, right]``; everything outside is tail."""

    left: int
    right: int

    def __post_init__(self) -> None:
        if int(self.left) != self.left or int(self.right) != self.right:
            raise ValueError("window bounds must be integers")
        object.__setattr__(self, "left", int(self.left))
        object.__setattr__(self, "right", int(self.right))
        if self.left < 0 or self.right < 0:
            raise ValueError(
                f"window bounds must be nonnegative, got ({self.left}, {self.right})"
            )


class TruncatedTailEnergy(NamedTuple):
    value: float
    horizon: int


def upsample2(r: Sequence) -> Sequence:
    """Two-fold upsampling by zero insertion: output support doubles to ``[-N, N]``."""
    out = np.zeros(2 * r.n + 1, dtype=np.complex128)
    out[::2] = r.values
    return Sequence(n_half=r.n, values=out)


def apply_shift(r: Sequence, spec: ShiftSpec, window: tuple[int, int]) -> np.ndarray:
    """Samples of the shifted sequence over ``window = (n0, n1)`` inclusive.

    Each sample is the finite sum ``sum_q r[q] sinc(2W (n - tau - q))`` over
    the support of ``r``; the evaluation window may lie anywhere.
    """
    n0, n1 = int(window[0]), int(window[1])
    if n1 < n0:
        raise ValueError(f"window must satisfy n0 <= n1, got ({n0}, {n1})")
    nout = np.arange(n0, n1 + 1)
    w, tau = spec.half_bandwidth, spec.shift
    kernel = np.sinc(2.0 * w * (nout[:, None] - tau - r.support[None, :]))
    return kernel @ r.values


def total_energy(r: Sequence, spec: ShiftSpec) -> float:
    """Total energy of the shifted sequence via the closed quadratic form.

    Equals ``(1/2W) * conj(r)' G r`` with ``G[q, q'] = sinc(2W (q - q'))``;
    the value does not depend on ``spec.shift``.
    """
    q = r.support
    gram = np.sinc(2.0 * spec.half_bandwidth * (q[:, None] - q[None, :]))
    quad = np.vdot(r.values, gram @ r.values).real
    return float(quad / (2.0 * spec.half_bandwidth))


def window_energy(r: Sequence, spec: ShiftSpec, window: tuple[int, int]) -> float:
    """Energy of the shifted sequence inside the inclusive index window."""
    samples = apply_shift(r, spec, window)
    return float(np.sum(np.abs(samples) ** 2))


def _clamp_tail(value: float) -> float:
    """Clamp tiny negative tail energies; larger negatives are internal faults."""
    if value >= 0.0:
        return value
    if value >= -_NEGATIVE_TAIL_TOL:
        warnings.warn(
            f"tail energy {value:.3e} clamped to 0 (within rounding tolerance)",
            RuntimeWarning,
            stacklevel=3,
        )
        return 0.0
    raise NumericalFaultError(
        f"tail energy {value:.3e} is negative beyond tolerance {-_NEGATIVE_TAIL_TOL:.1e}"
    )


def tail_energy_exact(r: Sequence, spec: ShiftSpec, window: TailWindow) -> float:
    """Energy of the shifted sequence outside the kept window ``[-left, right]``.

    Computed exactly as total energy (closed form) minus the window sum, so
    window plus tail reproduces the total by construction.  Values within
    ``1e-12`` below zero are clamped to zero with a warning; anything lower
    raises :class:`~halfshift.errors.NumericalFaultError`.
    """
    total = total_energy(r, spec)
    kept = window_energy(r, spec, (-window.left, window.right))
    return _clamp_tail(total - kept)


def _truncation_remainder_bound(
    r: Sequence, spec: ShiftSpec, window: TailWindow, horizon: int
) -> float:
    """Upper bound on the tail-sum remainder beyond ``|n| > horizon``.

    Uses ``|(B r)[n]| <= ||r||_1 / (pi 2W dist)`` with the distance from the
    evaluation point to the shifted support, summed by integral comparison.
    """
    w = spec.half_bandwidth
    denom = horizon - window.right - abs(spec.shift) - r.n
    if denom <= 0.0:
        return math.inf
    return r.one_norm() ** 2 / (math.pi**2 * (2.0 * w) ** 2) * (2.0 / denom)


def _outside_window_sum(
    r: Sequence, spec: ShiftSpec, window: TailWindow, lo: int, hi: int
) -> float:
    """Sum of |shifted|^2 over indices in [lo, hi] that lie outside the window."""
    pieces: list[float] = []
    for a, b in ((lo, min(hi, -window.left - 1)), (max(lo, window.right + 1), hi)):
        start = a
        while start <= b:
            stop = min(start + _ORACLE_CHUNK - 1, b)
            pieces.append(window_energy(r, spec, (start, stop)))
            start = stop + 1
    return math.fsum(pieces)


def tail_energy_truncated(
    r: Sequence, spec: ShiftSpec, window: TailWindow, tol: float
) -> TruncatedTailEnergy:
    """Independent tail-energy oracle: truncated partial sums with doubling horizon.

    Sums ``|(B r)[n]|^2`` outside the kept window over ``|n| <= H``, doubling
    ``H`` from 1024 until the last doubling changes the value by less than
    ``tol`` and the analytic remainder bound drops below ``tol``.  Partial
    sums use fixed-order compensated accumulation, so results are
    deterministic.

    The remainder decays like ``1/H``, so the certifiable tolerance is limited
    by the horizon cap ``2**26``: roughly ``||r||_1^2 / (2 pi^2 W^2 H)``.  When
    the analytic bound provably cannot reach ``tol`` within the cap the error
    is raised up front instead of summing to the cap first.

    Returns
    -------
    TruncatedTailEnergy
        ``(value, horizon)`` with the horizon actually used.

    Raises
    ------
    HorizonExceededError
        If the tolerance cannot be certified within the horizon cap.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    l1 = r.one_norm()
    if l1 > 0.0:
        coeff = l1**2 / (math.pi**2 * (2.0 * spec.half_bandwidth) ** 2) * 2.0
        min_horizon = window.right + abs(spec.shift) + r.n + coeff / tol
        if min_horizon > _ORACLE_MAX_HORIZON:
            raise HorizonExceededError(
                f"remainder bound cannot reach tol={tol:.1e} within horizon "
                f"{_ORACLE_MAX_HORIZON} (needs H > {min_horizon:.3e})"
            )

    horizon = _ORACLE_START_HORIZON
    covered_lo, covered_hi = -horizon, horizon
    value = _outside_window_sum(r, spec, window, covered_lo, covered_hi)
    prev: float | None = None
    while True:
        if _truncation_remainder_bound(r, spec, window, horizon) < tol and (
            prev is None or abs(value - prev) < tol
        ):
            return TruncatedTailEnergy(value=value, horizon=horizon)
        if horizon >= _ORACLE_MAX_HORIZON:
            raise HorizonExceededError(
                f"no convergence to tol={tol:.1e} within horizon {_ORACLE_MAX_HORIZON}"
            )
        prev = value
        horizon *= 2
        value += _outside_window_sum(r, spec, window, -horizon, covered_lo - 1)
        value += _outside_window_sum(r, spec, window, covered_hi + 1, horizon)
        covered_lo, covered_hi = -horizon, horizon


def random_unit_sequence(n: int, rng: np.random.Generator) -> Sequence:
    """Random complex unit-energy sequence on support ``-n/2 .. n/2`` (n even)."""
    if n % 2 != 0 or n < 2:
        raise ValueError(f"support extent must be even and >= 2, got {n}")
    vals = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    vals /= np.linalg.norm(vals)
    return Sequence(n_half=n // 2, values=vals)
