"""Seeded property-verification suite covering the package's numerical contracts.

Each check evaluates one family of identities or inequalities at configured
sizes and emits one :class:`ReportRow` per case and metric.  Rows are plain
records with a stable key set, so serialized reports are diffable; identical
configurations (including the seed) produce identical rows.

Check identifiers, selectable via ``only``:

- ``dpss``        eigensolver contract and quarter-band pair symmetries
- ``lemma1``      half-sample shift equals integer shift of the upsampled input
- ``lemma2``      tail inequality through the upsampled sequence, with boundary term
- ``lemma3``      full-band tail equality through the upsampled sequence
- ``lemma4``      even-subsample orthonormality (and middle-member even samples)
- ``theorem1``    general-bandwidth tail bound dominates the exact tail
- ``equality``    full-band tail identity matches the exact tail
- ``theorem2``    concentration closed form matches the direct energy ratio
- ``corollary1``  leading basis member is optimal; ranking is monotone
- ``energy``      shift-invariance and upsampling relations of total energy
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Iterator

import numpy as np

from .bounds import tail_bound, tail_equality, upsampled_tail_bound
from .concentration import (
    concentration,
    optimal_sequence,
    ranked_basis,
    sample_concentrations,
)
from .dpss_core import DpssParams, compute_dpss, dpss_diagnostics, flip_pairing_report
from .fracshift import (
    Sequence,
    ShiftSpec,
    TailWindow,
    apply_shift,
    random_unit_sequence,
    tail_energy_exact,
    total_energy,
    upsample2,
)

CHECK_IDS = (
    "dpss",
    "lemma1",
    "lemma2",
    "lemma3",
    "lemma4",
    "theorem1",
    "equality",
    "theorem2",
    "corollary1",
    "energy",
)

_MAX_SEED = 2**64


@dataclass(frozen=True)
class RunConfig:
    """Configuration of a verification run.

    ``tol``, when set, replaces every check's default tolerance; leave it
    ``None`` to use the per-check defaults listed in the check functions.
    """

    seed: int = 42
    n_list: tuple[int, ...] = (2, 4, 8, 16)
    w_list: tuple[float, ...] = (0.1, 0.25, 0.4, 0.5)
    tol: float | None = None
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self) -> None:
        if not (0 <= int(self.seed) < _MAX_SEED):
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 2 or n % 2 for n in n_list):
            raise ValueError(f"n_list entries must be even and >= 2, got {self.n_list}")
        object.__setattr__(self, "n_list", n_list)
        w_list = tuple(float(w) for w in self.w_list)
        if not w_list or any(not (0.0 < w <= 0.5) for w in w_list):
            raise ValueError(f"w_list entries must lie in (0, 0.5], got {self.w_list}")
        object.__setattr__(self, "w_list", w_list)
        if self.tol is not None and not float(self.tol) > 0.0:
            raise ValueError("tol must be positive")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"output_format must be 'csv' or 'json', got {self.output_format}")


@dataclass(frozen=True)
class ReportRow:
    """One verified quantity: schema is stable (see README for the column set)."""

    check: str
    case: str
    metric: str
    value: float
    target: float | None
    residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _row(
    check: str,
    case: str,
    metric: str,
    value: float,
    residual: float,
    tolerance: float,
    target: float | None = None,
) -> ReportRow:
    return ReportRow(
        check=check,
        case=case,
        metric=metric,
        value=float(value),
        target=None if target is None else float(target),
        residual=float(residual),
        tolerance=float(tolerance),
        passed=bool(residual <= tolerance),
    )


def _rng(config: RunConfig, *path: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, *path])


def _tol(config: RunConfig, default: float) -> float:
    return default if config.tol is None else float(config.tol)


def _check_dpss(config: RunConfig) -> Iterator[ReportRow]:
    fixed = ((19, 0.25), (35, 0.25), (33, 0.1))
    metric_tols = {
        "eigen_residual": 1e-9,
        "orthonormality": 1e-9,
        "trace": 1e-9,
        "unit_energy": 1e-12,
        "rayleigh": 1e-10,
    }
    for length, w in fixed:
        dset = compute_dpss(DpssParams(length, w))
        diag = dpss_diagnostics(dset)
        case = f"M={length},W'={w}"
        for metric, default in metric_tols.items():
            yield _row("dpss", case, metric, diag[metric], diag[metric], _tol(config, default))
    for n in config.n_list:
        dset = compute_dpss(DpssParams(2 * n + 3, 0.25))
        case = f"family N={n}"
        residuals = flip_pairing_report(dset)
        yield _row("dpss", case, "flip", residuals.flip, residuals.flip, _tol(config, 1e-9))
        yield _row(
            "dpss", case, "pairing", residuals.pairing, residuals.pairing, _tol(config, 1e-9)
        )
        mid = dset.eigenvalues[n + 1]
        yield _row(
            "dpss", case, "middle_eigenvalue", mid, abs(mid - 0.5), _tol(config, 1e-10), 0.5
        )


def _check_lemma1(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        for j, w in enumerate(config.w_list):
            rng = _rng(config, 1, i, j)
            worst = 0.0
            for _ in range(3):
                r = random_unit_sequence(n, rng)
                lhs = apply_shift(r, ShiftSpec(w, 0.5), (-2 * n, 2 * n))
                rhs = apply_shift(upsample2(r), ShiftSpec(w / 2.0, 1.0), (-4 * n, 4 * n))[::2]
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            yield _row("lemma1", f"N={n},W={w}", "max_sample_residual", worst, worst,
                       _tol(config, 1e-12))


def _check_lemma2(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        for j, w in enumerate(config.w_list):
            rng = _rng(config, 2, i, j)
            for window in (TailWindow(n // 2, n // 2), TailWindow(n // 2 + 1, n // 2 + 2)):
                r = random_unit_sequence(n, rng)
                lhs = tail_energy_exact(r, ShiftSpec(w, 0.5), window)
                rhs, _ = upsampled_tail_bound(r, w, window)
                slack = rhs - lhs
                yield _row(
                    "lemma2",
                    f"N={n},W={w},window=({window.left},{window.right})",
                    "slack",
                    slack,
                    max(0.0, -slack),
                    _tol(config, 1e-10),
                )


def _check_lemma3(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        rng = _rng(config, 3, i)
        r = random_unit_sequence(n, rng)
        up = upsample2(r)
        for left, right in ((n // 2, n // 2 + 1), (n // 2 + 1, n // 2 + 1), (n // 2 + 2, n // 2 + 3)):
            lhs = tail_energy_exact(r, ShiftSpec(0.5, 0.5), TailWindow(left, right))
            rhs = tail_energy_exact(
                up, ShiftSpec(0.25, 0.0), TailWindow(2 * left + 1, 2 * right - 1)
            )
            resid = abs(lhs - rhs)
            yield _row(
                "lemma3",
                f"N={n},window=({left},{right})",
                "equality_residual",
                resid,
                resid,
                _tol(config, 1e-9),
                target=rhs,
            )


def _check_lemma4(config: RunConfig) -> Iterator[ReportRow]:
    from .dpss_core import even_subsample_basis

    for n in config.n_list:
        basis = even_subsample_basis(n)
        gram = basis.members @ basis.members.T
        defect = float(np.max(np.abs(gram - np.eye(basis.size))))
        yield _row("lemma4", f"N={n}", "gram_defect", defect, defect, _tol(config, 1e-9))
        parent = compute_dpss(DpssParams(2 * n + 3, 0.25))
        mid_even = float(np.max(np.abs(parent.even_sample_matrix(n // 2)[:, n + 1])))
        yield _row(
            "lemma4", f"N={n}", "middle_even_samples", mid_even, mid_even, _tol(config, 1e-9)
        )


def _check_theorem1(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        for j, w in enumerate(config.w_list):
            rng = _rng(config, 4, i, j)
            worst = np.inf
            for _ in range(5):
                r = random_unit_sequence(n, rng)
                report = tail_bound(r, w)
                worst = min(worst, report.slack)
            yield _row(
                "theorem1",
                f"N={n},W={w}",
                "min_slack",
                worst,
                max(0.0, -worst),
                _tol(config, 1e-10),
            )


def _equality_residual(value: float, exact: float) -> tuple[float, float]:
    """Residual and default tolerance: relative above 1e-6, absolute near zero."""
    if abs(exact) >= 1e-6:
        return abs(value - exact) / abs(exact), 1e-8
    return abs(value - exact), 1e-12


def _check_equality(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        rng = _rng(config, 5, i)
        worst_resid, worst_tol = 0.0, 1e-8
        for _ in range(10):
            r = random_unit_sequence(n, rng)
            report = tail_equality(r)
            resid, tol = _equality_residual(report.bound_value, report.exact_value)
            if resid / tol > worst_resid / worst_tol:
                worst_resid, worst_tol = resid, tol
        yield _row(
            "equality", f"N={n}", "identity_residual", worst_resid, worst_resid,
            _tol(config, worst_tol)
        )


def _check_theorem2(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        rng = _rng(config, 6, i)
        worst_match = 0.0
        worst_ident = 0.0
        for _ in range(10):
            r = random_unit_sequence(n, rng)
            report = concentration(r)
            worst_match = max(worst_match, abs(report.formula_value - report.direct_value))
            a2 = np.abs(report.coeffs.values[: n + 1]) ** 2
            lam = compute_dpss(DpssParams(2 * n + 3, 0.25)).eigenvalues
            paired_mean = 0.5 * (lam[: n + 1] + lam[::-1][: n + 1])
            worst_ident = max(worst_ident, abs(float(np.sum(a2 * paired_mean)) - 0.25))
        yield _row(
            "theorem2", f"N={n}", "formula_vs_direct", worst_match, worst_match,
            _tol(config, 1e-8)
        )
        yield _row(
            "theorem2", f"N={n}", "paired_coefficient_identity", worst_ident, worst_ident,
            _tol(config, 1e-9), target=0.25,
        )


def _check_corollary1(config: RunConfig) -> Iterator[ReportRow]:
    for i, n in enumerate(config.n_list):
        optimum = optimal_sequence(n)
        best = optimum.report.formula_value
        samples = sample_concentrations(n, 2000, seed=int(_rng(config, 7, i).integers(2**63)))
        excess = float(np.max(samples) - best)
        yield _row(
            "corollary1", f"N={n}", "random_search_excess", excess, max(0.0, excess),
            _tol(config, 1e-9),
        )
        ranked = ranked_basis(n)
        mono = float(np.max(np.diff(ranked.concentrations), initial=-np.inf))
        yield _row(
            "corollary1", f"N={n}", "ranking_monotone", mono, max(0.0, mono),
            _tol(config, 1e-12),
        )
        member0_gap = abs(float(ranked.concentrations[0]) - best)
        yield _row(
            "corollary1", f"N={n}", "member0_is_optimum", member0_gap, member0_gap,
            _tol(config, 1e-12),
        )


def _check_energy(config: RunConfig) -> Iterator[ReportRow]:
    taus = (0.0, 0.3, 0.5, 1.7)
    for i, n in enumerate(config.n_list):
        rng = _rng(config, 8, i)
        r = random_unit_sequence(n, rng)
        for j, w in enumerate(config.w_list):
            totals = [total_energy(r, ShiftSpec(w, tau)) for tau in taus]
            spread = max(totals) - min(totals)
            yield _row(
                "energy", f"N={n},W={w}", "shift_invariance", spread, spread,
                _tol(config, 1e-12),
            )
            alias = abs(
                total_energy(upsample2(r), ShiftSpec(w / 2.0, 0.3))
                - 2.0 * total_energy(r, ShiftSpec(w, 0.3))
            )
            yield _row(
                "energy", f"N={n},W={w}", "upsample_energy_doubling", alias, alias,
                _tol(config, 1e-10),
            )


_CHECKS: dict[str, Callable[[RunConfig], Iterator[ReportRow]]] = {
    "dpss": _check_dpss,
    "lemma1": _check_lemma1,
    "lemma2": _check_lemma2,
    "lemma3": _check_lemma3,
    "lemma4": _check_lemma4,
    "theorem1": _check_theorem1,
    "equality": _check_equality,
    "theorem2": _check_theorem2,
    "corollary1": _check_corollary1,
    "energy": _check_energy,
}


def run_verification(config: RunConfig, only: str | None = None) -> list[ReportRow]:
    """Run the verification suite (optionally one check) and return its rows."""
    if only is not None and only not in _CHECKS:
        raise ValueError(f"unknown check {only!r}; valid: {', '.join(CHECK_IDS)}")
    rows: list[ReportRow] = []
    for check_id in CHECK_IDS:
        if only is not None and check_id != only:
            continue
        rows.extend(_CHECKS[check_id](config))
    return rows


def all_passed(rows: list[ReportRow]) -> bool:
    return all(row.passed for row in rows)
