"""Discrete prolate spheroidal sequence (DPSS) sets on centered integer supports.

A DPSS set with parameters ``(M, W')`` consists of the eigenvectors of the
symmetric concentration kernel

    K[n, m] = 2 W' sinc(2 W' (n - m)),    n, m = -(M-1)/2 .. (M-1)/2,

with ``sinc(x) = sin(pi x) / (pi x)``.  Member ``s_l`` has eigenvalue
``lambda_l``; eigenvalues lie in ``(0, 1)`` and are ordered nonincreasing.
Every member is unit-energy (``sum_n s_l[n]^2 = 1``).

The quarter-band family (``W' = 0.25``) carries extra exact structure: the
sign-alternating time reversal ``(T v)[n] = (-1)**(n+1) v[-n]`` conjugates the
kernel onto its complement, ``T K T = I - K``.  Consequently member ``l`` and
member ``M-1-l`` are related by ``s_l[n] = (-1)**(n+1) s_{M-1-l}[-n]`` and
their eigenvalues pair up as ``lambda_l + lambda_{M-1-l} = 1``; the middle
eigenvalue is exactly one half and the middle member vanishes on even indices.

Plateau eigenvalues cluster closer than double-precision resolution once
``M`` is a few dozen, so a generic dense eigensolver returns an arbitrary
rotation inside each cluster and the member-wise symmetries above are lost.
:func:`compute_dpss` therefore solves the dense kernel in a structure
preserving way: the eigenproblem is split into exact parity blocks (the
kernel commutes with index reversal, so every member is symmetric or
antisymmetric), and for the quarter-band family the lower spectral half is
generated from the upper half through the exact reversal map.  The mirrored
vectors are genuine eigenvectors (the map is an exact conjugacy, so eigen
residuals are preserved) and all pair symmetries then hold to rounding even
when plateau eigenvalues tie.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, toeplitz

from .errors import FamilyMismatchError, NumericalFaultError, SizeLimitError

DEFAULT_MAX_LENGTH = 8193

# Entries smaller than this (relative to the member's peak) are treated as zero
# when scanning for the first nonzero entry of the sign convention.
_SIGN_SCAN_RTOL = 1e-8

_GRAM_TOL = 1e-9


@dataclass(frozen=True)
class DpssParams:
    """DPSS set parameters: odd length and half-bandwidth strictly inside (0, 0.5).

    Parameters
    ----------
    length : int
        Number of samples ``M``, odd and at least 3.  The support is the
        centered integer range ``-(M-1)/2 .. (M-1)/2``.
    half_bandwidth : float
        Concentration half-bandwidth ``W'`` in cycles/sample, ``0 < W' < 0.5``.
        ``W' = 0.5`` makes the kernel the identity (every vector is an
        eigenvector), so it is rejected; full-band behavior has closed forms
        in :mod:`halfshift.fracshift` and needs no DPSS set.
    """

    length: int
    half_bandwidth: float

    def __post_init__(self) -> None:
        if int(self.length) != self.length:
            raise ValueError("length must be an integer")
        object.__setattr__(self, "length", int(self.length))
        if self.length < 3 or self.length % 2 == 0:
            raise ValueError(f"length must be odd and >= 3, got {self.length}")
        w = float(self.half_bandwidth)
        object.__setattr__(self, "half_bandwidth", w)
        if not (0.0 < w < 0.5):
            raise ValueError(f"half_bandwidth must lie strictly inside (0, 0.5), got {w}")

    @property
    def half_support(self) -> int:
        """Samples per side of center: support is ``-half_support .. half_support``."""
        return (self.length - 1) // 2

    @property
    def is_quarter_band_family(self) -> bool:
        """True for the (2N+3, 0.25) family with even N, i.e. length = 3 mod 4."""
        return self.half_bandwidth == 0.25 and self.length % 4 == 3


@dataclass(frozen=True)
class DpssSet:
    """A computed DPSS set.

    Attributes
    ----------
    params : DpssParams
    vectors : ndarray, shape (M, M)
        Row ``l`` holds member ``s_l`` on the centered support; column ``j``
        corresponds to index ``n = j - (M-1)/2``.
    eigenvalues : ndarray, shape (M,)
        Nonincreasing, inside ``[0, 1]``.  Values produced by
        :func:`compute_dpss` are clipped to ``[0, 1]``: at large lengths the
        plateau eigenvalues are closer to 1 (or 0) than one double-precision
        ulp, so open-interval strictness is representable only at desk scales.

    Instances produced by :func:`compute_dpss` satisfy the full numerical
    contract (see :func:`dpss_diagnostics`).  Direct construction performs
    only structural validation, which keeps fault-injection tests possible.
    """

    params: DpssParams
    vectors: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self) -> None:
        vec = np.asarray(self.vectors, dtype=np.float64)
        lam = np.asarray(self.eigenvalues, dtype=np.float64)
        m = self.params.length
        if vec.shape != (m, m):
            raise ValueError(f"vectors must have shape ({m}, {m}), got {vec.shape}")
        if lam.shape != (m,):
            raise ValueError(f"eigenvalues must have shape ({m},), got {lam.shape}")
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def length(self) -> int:
        return self.params.length

    @property
    def support(self) -> np.ndarray:
        h = self.params.half_support
        return np.arange(-h, h + 1)

    def member(self, l: int) -> np.ndarray:
        """Member ``s_l`` as a 1-D array on the centered support."""
        return self.vectors[l]

    def even_sample_matrix(self, k_half: int) -> np.ndarray:
        """Matrix ``E`` with ``E[k, l] = s_l[2k]`` for ``k = -k_half .. k_half``.

        Raises ``ValueError`` if ``2 * k_half`` exceeds the support.
        """
        h = self.params.half_support
        if 2 * k_half > h:
            raise ValueError(f"even-sample range +-{2 * k_half} exceeds support +-{h}")
        cols = h + 2 * np.arange(-k_half, k_half + 1)
        return self.vectors[:, cols].T


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal basis of the half-support space built from even DPSS samples.

    Attributes
    ----------
    n_half : int
        Half support; members live on ``-n_half .. n_half``.
    members : ndarray, shape (N+1, N+1)
        Row ``l`` is ``b_l[k] = sqrt(2) * s_l[2k]`` from the quarter-band
        parent set of length ``2N+3``, ordered by decreasing parent
        eigenvalue.
    source_eigenvalues : ndarray, shape (N+1,)
        Eigenvalues of the generating members.
    """

    n_half: int
    members: np.ndarray
    source_eigenvalues: np.ndarray

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def support(self) -> np.ndarray:
        return np.arange(-self.n_half, self.n_half + 1)


def kernel_matrix(params: DpssParams) -> np.ndarray:
    """Dense symmetric concentration kernel ``K[n, m] = 2W' sinc(2W'(n-m))``."""
    d = np.arange(params.length)
    row = 2.0 * params.half_bandwidth * np.sinc(2.0 * params.half_bandwidth * d)
    return toeplitz(row)


def _alternating_flip(vec: np.ndarray, half_support: int) -> np.ndarray:
    """Apply ``(T v)[n] = (-1)**(n+1) v[-n]`` in storage order."""
    m = vec.shape[-1]
    sign = np.where((np.arange(m) + half_support + 1) % 2 == 0, 1.0, -1.0)
    return sign * vec[..., ::-1]


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    """Flip sign so the first above-threshold entry (left to right) is positive."""
    peak = np.max(np.abs(vec))
    if peak == 0.0:
        return vec
    idx = int(np.argmax(np.abs(vec) > _SIGN_SCAN_RTOL * peak))
    return vec if vec[idx] > 0 else -vec


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _parity_split_eigh(kernel: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a centrosymmetric kernel block-wise by parity.

    The kernel commutes with index reversal, so its eigenvectors can be taken
    exactly symmetric or antisymmetric.  Solving the two parity blocks
    separately pins that structure bit-exactly even where plateau eigenvalues
    are degenerate to rounding; a generic dense solve would return arbitrary
    mixtures there.  Returns eigenvalues (descending, stable merge with the
    symmetric block first on ties) and the matching eigenvectors as rows.
    """
    m = kernel.shape[0]
    h = (m - 1) // 2
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    sym = np.zeros((m, h + 1))
    sym[h, 0] = 1.0
    for k in range(1, h + 1):
        sym[h + k, k] = inv_sqrt2
        sym[h - k, k] = inv_sqrt2
    antisym = np.zeros((m, h))
    for k in range(1, h + 1):
        antisym[h + k, k - 1] = inv_sqrt2
        antisym[h - k, k - 1] = -inv_sqrt2

    lam_parts = []
    vec_parts = []
    for basis in (sym, antisym):
        block = basis.T @ kernel @ basis
        lam_b, w_b = eigh(block)
        lam_parts.append(lam_b)
        vec_parts.append((basis @ w_b).T)  # rows; parity holds bit-exactly
    lam = np.concatenate(lam_parts)
    vectors = np.vstack(vec_parts)
    order = np.argsort(-lam, kind="stable")
    return lam[order], vectors[order]


@functools.lru_cache(maxsize=128)
def _compute_dpss_cached(length: int, half_bandwidth: float) -> DpssSet:
    params = DpssParams(length, half_bandwidth)
    lam, vectors = _parity_split_eigh(kernel_matrix(params))
    lam = lam.copy()
    vectors = vectors.copy()
    np.clip(lam, 0.0, 1.0, out=lam)

    if half_bandwidth == 0.25:
        # Mirror the lower half through the exact reversal conjugacy so the
        # pair symmetries hold to rounding despite plateau eigenvalue ties.
        h = params.half_support
        for l in range(h):
            vectors[length - 1 - l] = _alternating_flip(vectors[l], h)
            lam[length - 1 - l] = 1.0 - lam[l]

    for l in range(length):
        vectors[l] = _canonical_sign(vectors[l])

    if np.any(np.diff(lam) > 0.0):
        raise NumericalFaultError("eigenvalues not nonincreasing after solve")

    return DpssSet(params=params, vectors=_freeze(vectors), eigenvalues=_freeze(lam))


def compute_dpss(params: DpssParams, *, max_length: int = DEFAULT_MAX_LENGTH) -> DpssSet:
    """Compute a DPSS set by dense eigendecomposition of the concentration kernel.

    Eigenvalues are returned nonincreasing and clipped to ``[0, 1]`` (rounding
    can push plateau values a few ulp outside).  Members are sign-canonicalized
    so each one's first nonzero entry, scanning from the left support edge, is
    positive, and carry exact parity from the block solve.  For the
    quarter-band family the lower spectral half is generated from the upper
    half via the exact sign-alternating reversal, which makes the
    reversal/pairing identities exact; see the module docstring.

    Results are cached per parameter pair; sets are immutable and safe to
    share across threads.

    Parameters
    ----------
    params : DpssParams
    max_length : int, optional
        Size limit for the dense solve (default 8193).

    Raises
    ------
    SizeLimitError
        If ``params.length`` exceeds ``max_length``.
    """
    if params.length > max_length:
        raise SizeLimitError(
            f"length {params.length} exceeds the configured maximum {max_length}"
        )
    return _compute_dpss_cached(params.length, params.half_bandwidth)


def dpss_diagnostics(dpss_set: DpssSet) -> dict[str, float]:
    """Residuals of the defining numerical contract of a DPSS set.

    Returns a dict with:

    - ``unit_energy``: max deviation of member energies from 1
    - ``orthonormality``: max absolute Gram defect
    - ``eigen_residual``: max-norm of ``K s_l - lambda_l s_l`` over all l
    - ``trace``: deviation of ``sum(lambda)`` from ``2 W' M``
    - ``rayleigh``: max deviation of ``s_l' K s_l`` from ``lambda_l``
    """
    k = kernel_matrix(dpss_set.params)
    v = dpss_set.vectors
    lam = dpss_set.eigenvalues
    gram = v @ v.T
    kv = v @ k  # row l = K s_l
    rayleigh = np.einsum("ij,ij->i", v, kv)
    return {
        "unit_energy": float(np.max(np.abs(np.diag(gram) - 1.0))),
        "orthonormality": float(np.max(np.abs(gram - np.eye(dpss_set.length)))),
        "eigen_residual": float(np.max(np.abs(kv - lam[:, None] * v))),
        "trace": float(abs(lam.sum() - 2.0 * dpss_set.params.half_bandwidth * dpss_set.length)),
        "rayleigh": float(np.max(np.abs(rayleigh - lam))),
    }


@dataclass(frozen=True)
class FlipPairingResiduals:
    """Worst-case residuals of the quarter-band pair symmetries."""

    flip: float
    pairing: float


def flip_pairing_report(dpss_set: DpssSet) -> FlipPairingResiduals:
    """Residuals of the reversal and eigenvalue-pairing symmetries of a set.

    For a set with parameters ``(2N+3, 0.25)``, N even, member ``l`` should
    equal the sign-alternating reversal of member ``2N+2-l`` up to overall
    sign, and ``lambda_l + lambda_{2N+2-l}`` should equal 1.  The flip
    residual is evaluated sign-agnostically (minimum over both polarities),
    so members stored with either sign convention report identically.  The
    middle member is excluded from the flip check; the symmetry there fixes
    only its even samples.

    Returns the maxima over all checked members.  Residuals stay below 1e-9
    for sets produced by :func:`compute_dpss`; tampered eigenvalues or
    vectors surface directly in the corresponding residual.

    Raises
    ------
    FamilyMismatchError
        If the set is not from the quarter-band family (2N+3, 0.25), N even.
    """
    params = dpss_set.params
    if not params.is_quarter_band_family:
        raise FamilyMismatchError(
            "flip/pairing symmetries require half_bandwidth 0.25 and length 2N+3 "
            f"with N even; got ({params.length}, {params.half_bandwidth})"
        )
    h = params.half_support
    lam = dpss_set.eigenvalues
    pairing = float(np.max(np.abs(lam + lam[::-1] - 1.0)))
    flip = 0.0
    for l in range(h):
        partner = _alternating_flip(dpss_set.vectors[params.length - 1 - l], h)
        member = dpss_set.vectors[l]
        resid = min(
            float(np.max(np.abs(member - partner))),
            float(np.max(np.abs(member + partner))),
        )
        flip = max(flip, resid)
    return FlipPairingResiduals(flip=flip, pairing=pairing)


def even_subsample_basis(n: int) -> OrthoBasis:
    """Orthonormal basis of the length ``n+1`` space from even DPSS samples.

    For even support extent ``n`` the vectors ``sqrt(2) * s_l[2k]``,
    ``k = -n/2 .. n/2``, ``l = 0 .. n``, drawn from the quarter-band set of
    length ``2n+3``, are orthonormal.  Members are ordered by decreasing
    parent eigenvalue.

    Parameters
    ----------
    n : int
        Support extent ``N`` of the target space (even, >= 2); members live
        on ``-N/2 .. N/2``.

    Raises
    ------
    ValueError
        If ``n`` is odd or ``< 2``.
    NumericalFaultError
        If the resulting Gram matrix deviates from identity beyond 1e-9.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"support extent must be even and >= 2, got {n}")
    parent = compute_dpss(DpssParams(2 * n + 3, 0.25))
    members = np.sqrt(2.0) * parent.even_sample_matrix(n // 2).T[: n + 1]
    gram_defect = float(np.max(np.abs(members @ members.T - np.eye(n + 1))))
    if gram_defect > _GRAM_TOL:
        raise NumericalFaultError(
            f"even-subsample basis Gram defect {gram_defect:.3e} exceeds {_GRAM_TOL}"
        )
    return OrthoBasis(
        n_half=n // 2,
        members=_freeze(members.copy()),
        source_eigenvalues=_freeze(parent.eigenvalues[: n + 1].copy()),
    )
