"""Command-line front end: DPSS sets, shifts, tail energies, bounds, verification.

Subcommands: ``dpss``, ``shift``, ``tail``, ``bound``, ``equality``,
``concentration``, ``basis``, ``verify``.  Results go to ``--out`` when given,
else to ``$HALFSHIFT_OUT_DIR/<command>.<format>`` when that variable is set,
else to stdout.  JSON uses shortest round-trip float encoding; CSV uses fixed
17-significant-digit formatting.  Identical inputs (including seeds) produce
byte-identical JSON.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import tail_bound, tail_equality
from .concentration import concentration as concentration_report
from .concentration import ranked_basis
from .dpss_core import DpssParams, compute_dpss
from .errors import HorizonExceededError
from .fracshift import (
    Sequence,
    ShiftSpec,
    TailWindow,
    apply_shift,
    tail_energy_exact,
    tail_energy_truncated,
    total_energy,
)
from .verify import CHECK_IDS, ReportRow, RunConfig, all_passed, run_verification

OUT_DIR_ENV = "HALFSHIFT_OUT_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _fmt(x) -> str:
    """Fixed 17-significant-digit float formatting for CSV cells."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_text(text: str, out_path: Path | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        out_path.write_text(text)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in fieldnames})
    return buf.getvalue()


def _resolve_out(args, command: str) -> Path | None:
    if args.out is not None:
        return Path(args.out)
    env_dir = os.environ.get(OUT_DIR_ENV)
    if env_dir:
        return Path(env_dir) / f"{command}.{args.format}"
    return None


def _read_sequence(path: str) -> Sequence:
    """Read a sequence from CSV with columns ``n, re, im`` (header mandatory)."""
    entries: dict[int, complex] = {}
    try:
        handle = open(path, newline="")
    except OSError:
        raise
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header 'n,re,im'") from None
        cols = [c.strip().lower() for c in header]
        if cols[:3] != ["n", "re", "im"]:
            raise ValueError(f"{path}:1: expected header 'n,re,im', got {','.join(header)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                n = int(row[0])
                re_part = float(row[1])
                im_part = float(row[2]) if len(row) > 2 and row[2].strip() else 0.0
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed row {row!r}: {exc}") from None
            if n in entries:
                raise ValueError(f"{path}:{lineno}: duplicate index n={n}")
            entries[n] = complex(re_part, im_part)
    if not entries:
        raise ValueError(f"{path}: no data rows")
    n_max = max(abs(n) for n in entries)
    expected = set(range(-n_max, n_max + 1))
    if set(entries) != expected or n_max < 1 or (2 * n_max) % 2 != 0:
        missing = sorted(expected - set(entries))
        raise ValueError(
            f"{path}: indices must cover the centered range -{n_max}..{n_max}"
            + (f" (missing {missing[:5]}...)" if missing else "")
        )
    values = np.array([entries[n] for n in range(-n_max, n_max + 1)])
    return Sequence(n_half=n_max, values=values)


def _sequence_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV file with columns n,re,im")


def _out_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None, help="output path (default: env dir or stdout)")


def _window_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--window",
        nargs=2,
        type=int,
        required=True,
        metavar=("N0", "N1"),
        help="inclusive index range [N0, N1]",
    )


# ---------------------------------------------------------------- subcommands


def _cmd_dpss(args) -> int:
    params = DpssParams(args.length, args.half_bandwidth)
    dset = compute_dpss(params)
    support = dset.support
    rows = [
        {
            "l": l,
            "lambda": float(dset.eigenvalues[l]),
            "n": int(support[j]),
            "value": float(dset.vectors[l, j]),
        }
        for l in range(dset.length)
        for j in range(dset.length)
    ]
    payload = {
        "command": "dpss",
        "length": params.length,
        "half_bandwidth": params.half_bandwidth,
        "rows": rows,
    }
    text = (
        _json_text(payload)
        if args.format == "json"
        else _csv_text(["l", "lambda", "n", "value"], rows)
    )
    _write_text(text, _resolve_out(args, "dpss"))
    return EXIT_OK


def _cmd_shift(args) -> int:
    r = _read_sequence(args.input)
    spec = ShiftSpec(args.half_bandwidth, args.tau)
    n0, n1 = args.window
    samples = apply_shift(r, spec, (n0, n1))
    total = total_energy(r, spec)
    window_energy = float(np.sum(np.abs(samples) ** 2))
    tail = total - window_energy
    if -1e-12 <= tail < 0.0:
        tail = 0.0
    sample_rows = [
        {"record": "sample", "n": int(n0 + i), "re": float(s.real), "im": float(s.imag)}
        for i, s in enumerate(samples)
    ]
    energy_rows = [
        {"record": "total_energy", "value": total},
        {"record": "window_energy", "value": window_energy},
        {"record": "tail_energy", "value": tail},
    ]
    payload = {
        "command": "shift",
        "half_bandwidth": spec.half_bandwidth,
        "tau": spec.shift,
        "window": [n0, n1],
        "samples": [{k: v for k, v in row.items() if k != "record"} for row in sample_rows],
        "total_energy": total,
        "window_energy": window_energy,
        "tail_energy": tail,
    }
    text = (
        _json_text(payload)
        if args.format == "json"
        else _csv_text(["record", "n", "re", "im", "value"], sample_rows + energy_rows)
    )
    _write_text(text, _resolve_out(args, "shift"))
    return EXIT_OK


def _tail_window(n0: int, n1: int) -> TailWindow:
    if n0 > 0 or n1 < 0:
        raise ValueError(f"kept region [N0, N1] must contain 0, got [{n0}, {n1}]")
    return TailWindow(left=-n0, right=n1)


def _cmd_tail(args) -> int:
    r = _read_sequence(args.input)
    spec = ShiftSpec(args.half_bandwidth, args.tau)
    window = _tail_window(*args.window)
    exact = tail_energy_exact(r, spec, window)
    truncated = tail_energy_truncated(r, spec, window, args.tol)
    payload = {
        "command": "tail",
        "half_bandwidth": spec.half_bandwidth,
        "tau": spec.shift,
        "window": [-window.left, window.right],
        "tol": args.tol,
        "exact": exact,
        "truncated": truncated.value,
        "horizon": truncated.horizon,
        "difference": exact - truncated.value,
    }
    rows = [
        {"metric": k, "value": payload[k]}
        for k in ("exact", "truncated", "horizon", "difference")
    ]
    text = _json_text(payload) if args.format == "json" else _csv_text(["metric", "value"], rows)
    _write_text(text, _resolve_out(args, "tail"))
    return EXIT_OK


def _bound_payload(command: str, report) -> tuple[dict, list[dict]]:
    rows = [
        {"record": "bound_value", "value": report.bound_value},
        {"record": "exact_value", "value": report.exact_value},
        {"record": "slack", "value": report.slack},
    ] + [
        {"record": "component", "l": l, "value": float(c)}
        for l, c in enumerate(report.components)
    ]
    payload = {
        "command": command,
        "bound_value": report.bound_value,
        "exact_value": report.exact_value,
        "slack": report.slack,
        "components": [float(c) for c in report.components],
    }
    return payload, rows


def _cmd_bound(args) -> int:
    r = _read_sequence(args.input)
    report = tail_bound(r, args.half_bandwidth)
    payload, rows = _bound_payload("bound", report)
    payload["half_bandwidth"] = args.half_bandwidth
    text = (
        _json_text(payload)
        if args.format == "json"
        else _csv_text(["record", "l", "value"], rows)
    )
    _write_text(text, _resolve_out(args, "bound"))
    return EXIT_OK


def _cmd_equality(args) -> int:
    r = _read_sequence(args.input)
    report = tail_equality(r)
    payload, rows = _bound_payload("equality", report)
    text = (
        _json_text(payload)
        if args.format == "json"
        else _csv_text(["record", "l", "value"], rows)
    )
    _write_text(text, _resolve_out(args, "equality"))
    return EXIT_OK


def _cmd_concentration(args) -> int:
    if (args.n is None) == (args.input is None):
        raise ValueError("provide exactly one of --n or --input")
    if args.n is not None:
        if args.n % 2 or args.n < 2:
            raise ValueError(f"--n must be even and >= 2, got {args.n}")
        ranked = ranked_basis(args.n)
        rows = [
            {
                "l": l,
                "concentration": float(ranked.concentrations[l]),
                "lambda": float(ranked.members.source_eigenvalues[l]),
            }
            for l in range(ranked.members.size)
        ]
        payload = {"command": "concentration", "n": args.n, "rows": rows}
        text = (
            _json_text(payload)
            if args.format == "json"
            else _csv_text(["l", "concentration", "lambda"], rows)
        )
    else:
        r = _read_sequence(args.input)
        report = concentration_report(r)
        coeff_rows = [
            {"record": "coeff", "l": l, "re": float(c.real), "im": float(c.imag)}
            for l, c in enumerate(report.coeffs.values)
        ]
        scalar_keys = (
            "window_energy",
            "tail_energy",
            "total_energy",
            "concentration",
            "formula_value",
            "direct_value",
            "unpaired_formula_value",
        )
        payload = {"command": "concentration"}
        payload.update({k: getattr(report, k) for k in scalar_keys})
        payload["degenerate_denominator"] = report.degenerate_denominator
        payload["was_normalized"] = report.was_normalized
        payload["coeffs"] = [
            {"l": row["l"], "re": row["re"], "im": row["im"]} for row in coeff_rows
        ]
        scalar_rows = [{"record": k, "value": getattr(report, k)} for k in scalar_keys]
        text = (
            _json_text(payload)
            if args.format == "json"
            else _csv_text(["record", "l", "re", "im", "value"], scalar_rows + coeff_rows)
        )
    _write_text(text, _resolve_out(args, "concentration"))
    return EXIT_OK


def _cmd_basis(args) -> int:
    if args.n % 2 or args.n < 2:
        raise ValueError(f"--n must be even and >= 2, got {args.n}")
    ranked = ranked_basis(args.n)
    support = ranked.members.support
    rows = [
        {
            "l": l,
            "concentration": float(ranked.concentrations[l]),
            "lambda": float(ranked.members.source_eigenvalues[l]),
            "n": int(support[j]),
            "value": float(ranked.members.members[l, j]),
        }
        for l in range(ranked.members.size)
        for j in range(ranked.members.size)
    ]
    payload = {"command": "basis", "n": args.n, "rows": rows}
    text = (
        _json_text(payload)
        if args.format == "json"
        else _csv_text(["l", "concentration", "lambda", "n", "value"], rows)
    )
    _write_text(text, _resolve_out(args, "basis"))
    return EXIT_OK


def _load_config_file(path: str) -> dict:
    with open(path) as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = set(data) - {"seed", "n_list", "w_list", "tol", "output_format", "output_path"}
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    return data


def _cmd_verify(args) -> int:
    settings: dict = {}
    if args.config is not None:
        settings.update(_load_config_file(args.config))
    if args.seed is not None:
        settings["seed"] = args.seed
    if args.n_list is not None:
        settings["n_list"] = tuple(args.n_list)
    if args.w_list is not None:
        settings["w_list"] = tuple(args.w_list)
    if args.tol is not None:
        settings["tol"] = args.tol
    settings["output_format"] = args.format
    if args.out is not None:
        settings["output_path"] = str(args.out)
    config = RunConfig(**settings)
    rows = run_verification(config, only=args.only)
    passed = all_passed(rows)
    row_dicts = [row.as_dict() for row in rows]
    payload = {
        "command": "verify",
        "config": {
            "seed": config.seed,
            "n_list": list(config.n_list),
            "w_list": list(config.w_list),
            "tol": config.tol,
            "only": args.only,
        },
        "rows": row_dicts,
        "passed": passed,
    }
    fieldnames = ["check", "case", "metric", "value", "target", "residual", "tolerance", "passed"]
    text = (
        _json_text(payload)
        if args.format == "json"
        else _csv_text(fieldnames, row_dicts)
    )
    out_path = Path(config.output_path) if config.output_path else _resolve_out(args, "verify")
    _write_text(text, out_path)
    if not passed:
        failing = next(row for row in rows if not row.passed)
        print(
            f"verification FAILED: {failing.check} [{failing.case}] {failing.metric}: "
            f"residual {failing.residual:.3e} > tolerance {failing.tolerance:.3e}",
            file=sys.stderr,
        )
        return EXIT_VERIFY_FAILED
    return EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfshift",
        description="DPSS sets, band-limited fractional shifts, tail-energy "
        "bounds, and concentration-ranked bases.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dpss", help="compute a DPSS set")
    p.add_argument("--length", type=int, required=True, help="number of samples (odd)")
    p.add_argument("-w", "--half-bandwidth", type=float, required=True)
    _out_args(p)
    p.set_defaults(func=_cmd_dpss)

    p = sub.add_parser("shift", help="apply a band-limited fractional shift")
    _sequence_args(p)
    p.add_argument("-w", "--half-bandwidth", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    _window_args(p)
    _out_args(p)
    p.set_defaults(func=_cmd_shift)

    p = sub.add_parser("tail", help="exact and truncated tail energies")
    _sequence_args(p)
    p.add_argument("-w", "--half-bandwidth", type=float, required=True)
    p.add_argument("--tau", type=float, default=0.5)
    _window_args(p)
    p.add_argument("--tol", type=float, default=1e-6, help="oracle tolerance (default 1e-6)")
    _out_args(p)
    p.set_defaults(func=_cmd_tail)

    p = sub.add_parser("bound", help="tail-energy upper bound after a half-sample shift")
    _sequence_args(p)
    p.add_argument("-w", "--half-bandwidth", type=float, required=True)
    _out_args(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("equality", help="full-band exact tail identity")
    _sequence_args(p)
    _out_args(p)
    p.set_defaults(func=_cmd_equality)

    p = sub.add_parser("concentration", help="concentration report or ranked table")
    p.add_argument("--n", type=int, default=None, help="support extent (even)")
    p.add_argument("--input", default=None, help="CSV file with columns n,re,im")
    _out_args(p)
    p.set_defaults(func=_cmd_concentration)

    p = sub.add_parser("basis", help="concentration-ranked orthonormal basis")
    p.add_argument("--n", type=int, required=True, help="support extent (even)")
    _out_args(p)
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("verify", help="run the property-verification suite")
    p.add_argument("--config", default=None, help="JSON config file mirroring RunConfig")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-list", type=int, nargs="+", default=None)
    p.add_argument("--w-list", type=float, nargs="+", default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--only", choices=CHECK_IDS, default=None)
    _out_args(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, HorizonExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
