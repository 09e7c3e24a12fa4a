"""Command-line front end: verification suites, energy evaluation, sweeps,
minimization, and tail diagnostics, with CSV/JSON outputs and a run manifest.

Exit codes: 0 all pass-gated records passed, 1 at least one record failed,
2 usage or configuration error.  Outputs are written atomically (temp file +
rename) into the --out directory; timestamps live only in the manifest so the
data files are byte-identical across reruns of the same config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from importlib import metadata
from pathlib import Path

import numpy as np

from .ansatz import SWEEP_CSV_HEADER, eps_sweep, mollify, vertical_two_shock
from .besov import (HGrid, VerificationRecord, hkm1_balance, hkm2_residual,
                    records_to_csv, records_to_json, verify_b2s, verify_l3,
                    verify_lp, verify_lp_eps, tail_mass)
from .energy import energy_eps, gradient_eps
from .entropy import (JumpProfile, div_sigma_identity, duality_gap,
                      entropy_production, jump_cost, div_sigma_jump_measure,
                      rankine_hugoniot_check)
from .errors import SmecticError
from .fields import (GridSpec, TorusField, as_admissible, inner, load_field,
                     random_band_limited, save_field)
from .minimize import MinimizeOptions, lowest_mode_pins, minimize
from .operators import d1, shift1

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- config and argument plumbing -------------------------------------------

def _parse_grid(text: str) -> GridSpec:
    try:
        n1, n2 = text.lower().split("x")
        return GridSpec(int(n1), int(n2))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad --grid {text!r}, expected N1xN2") from exc


def _parse_eps_list(text: str) -> list[float]:
    """Either a single float or a dyadic range `2^-a..2^-b`."""
    if ".." in text:
        lo, hi = text.split("..")
        vals = []
        for part in (lo, hi):
            if not part.startswith("2^"):
                raise ValueError(f"range endpoints must be dyadic 2^-k, got {part!r}")
        a = int(lo[2:])
        b = int(hi[2:])
        step = -1 if a > b else 1
        return [2.0 ** e for e in range(a, b + step, step)]
    return [float(text)]


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_records(records: list[VerificationRecord], out: Path, stem: str,
                   fmt: str) -> None:
    if fmt == "csv":
        _atomic_write(out / f"{stem}.csv", records_to_csv(records))
    else:
        _atomic_write(out / f"{stem}.json", records_to_json(records))


def _manifest(out: Path, command: str, config: dict, t0: float) -> None:
    try:
        version = metadata.version("smectic")
    except metadata.PackageNotFoundError:
        version = "unknown"
    _atomic_write(out / "manifest.json", json.dumps({
        "command": command,
        "config": config,
        "version": version,
        "elapsed_seconds": time.time() - t0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }, indent=2) + "\n")


def _exit_from(records: list[VerificationRecord]) -> int:
    return EXIT_PASS if all(r.passed for r in records) else EXIT_FAIL


# -- commands ----------------------------------------------------------------

def _cmd_verify(args) -> tuple[list[VerificationRecord], dict]:
    grid = args.grid
    records = []
    rng_fields = [random_band_limited(grid, seed=args.seed + i, kmax=args.kmax,
                                      amplitude=0.5) for i in range(args.nfields)]
    for i, w in enumerate(rng_fields):
        # Parseval: spectral vs grid L2 norm
        spec_norm = float(np.sqrt(np.sum(np.abs(w.spectrum) ** 2)))
        grid_norm = float(np.sqrt(np.mean(w.samples ** 2)))
        res = abs(spec_norm - grid_norm) / max(grid_norm, 1e-300)
        records.append(VerificationRecord(
            name="parseval", lhs=spec_norm, rhs=grid_norm,
            ratio_or_residual=res, params={"seed": args.seed + i},
            passed=res <= 1e-12, tolerance=1e-12))
        # multiplier adjointness: <d1 f, g> = -<f, d1 g>
        g2 = rng_fields[(i + 1) % len(rng_fields)]
        lhs, rhs = inner(d1(w), g2), -inner(w, d1(g2))
        res = abs(lhs - rhs) / max(abs(lhs), 1e-300)
        records.append(VerificationRecord(
            name="adjointness", lhs=lhs, rhs=rhs, ratio_or_residual=res,
            params={"seed": args.seed + i}, passed=res <= 1e-12, tolerance=1e-12))
        # shift group law
        res = (shift1(shift1(w, 0.3), 0.45) - shift1(w, 0.75)).l2() / w.l2()
        records.append(VerificationRecord(
            name="shift_group_law", lhs=res, rhs=0.0, ratio_or_residual=res,
            params={"seed": args.seed + i}, passed=res <= 1e-12, tolerance=1e-12))
        records.append(hkm2_residual(w, 0.1))
        records.append(div_sigma_identity(w))
        # gradient vs central differences
        v = rng_fields[(i + 1) % len(rng_fields)]
        t = 1e-5
        eps = 0.0625
        plus = energy_eps(as_admissible(w + t * v, tol=1e-6), eps).energy_eps
        minus = energy_eps(as_admissible(w + (-t) * v, tol=1e-6), eps).energy_eps
        numeric = (plus - minus) / (2 * t)
        analytic = inner(gradient_eps(w, eps), v)
        res = abs(numeric - analytic) / max(abs(numeric), 1e-300)
        records.append(VerificationRecord(
            name="gradient_check", lhs=numeric, rhs=analytic,
            ratio_or_residual=res, params={"seed": args.seed + i, "eps": eps},
            passed=res <= 1e-5, tolerance=1e-5))
    return records, {}


def _cmd_energy(args) -> tuple[list[VerificationRecord], dict]:
    if args.field:
        w = as_admissible(load_field(args.field))
    else:
        w = random_band_limited(args.grid, seed=args.seed, kmax=args.kmax,
                                amplitude=0.5)
    reports = {repr(eps): json.loads(energy_eps(w, eps).to_json())
               for eps in args.eps}
    return [], {"energy.json": json.dumps(reports, indent=2) + "\n"}


def _cmd_besov(args) -> tuple[list[VerificationRecord], dict]:
    w = random_band_limited(args.grid, seed=args.seed, kmax=args.kmax,
                            amplitude=0.5)
    hs = HGrid()
    records = list(verify_l3(w, hs)) + list(verify_b2s(w, hs))
    records.append(verify_lp(w, args.p))
    for eps in args.eps:
        records.append(verify_lp_eps(w, args.p, eps))
    records.append(hkm2_residual(w, 0.125))
    records.append(hkm1_balance(w, 0.125))
    return records, {}


def _cmd_entropy(args) -> tuple[list[VerificationRecord], dict]:
    if args.profile:
        profile = JumpProfile.from_json(Path(args.profile).read_text())
    else:
        profile = vertical_two_shock(args.c)
    records = rankine_hugoniot_check(profile)
    extra = {}
    if all(r.passed for r in records):
        jc = jump_cost(profile)
        extra["entropy.json"] = json.dumps({
            "jump_cost": jc,
            "div_sigma_jump_measure": div_sigma_jump_measure(profile),
        }, indent=2) + "\n"
    if args.field:
        w = as_admissible(load_field(args.field))
        records.append(div_sigma_identity(w))
        records.append(VerificationRecord(
            name="entropy_production", lhs=entropy_production(w), rhs=0.0,
            ratio_or_residual=entropy_production(w), params={}, passed=True))
        for eps in args.eps:
            phi = TorusField.from_samples(w.grid, np.sin(
                2 * np.pi * np.repeat(w.grid.x1(), w.grid.n2, axis=1)) / (2 * np.pi))
            records.append(duality_gap(w, phi, eps))
    return records, extra


def _cmd_sweep(args) -> tuple[list[VerificationRecord], dict]:
    profile = vertical_two_shock(args.c)
    recs = eps_sweep(profile, args.eps, args.grid)
    lines = [",".join(SWEEP_CSV_HEADER)]
    for r in recs:
        lines.append(",".join(r.csv_row()))
    return [], {"sweep.csv": "\n".join(lines) + "\n"}


def _cmd_minimize(args) -> tuple[list[VerificationRecord], dict]:
    eps = args.eps[0]
    if args.field:
        w0 = as_admissible(load_field(args.field))
    else:
        w0 = random_band_limited(args.grid, seed=args.seed, kmax=args.kmax,
                                 amplitude=0.05)
    anchor = None
    if args.pins > 0:
        anchor = lowest_mode_pins(w0, args.pins)
    opts = MinimizeOptions(max_iters=args.max_iters, anchor=anchor)
    w, report = minimize(w0, eps, opts)
    extra = {"minimize.json": report.to_json() + "\n"}
    if args.save_final:
        save_field(w, Path(args.out) / "final")
    hist = report.energy_history
    monotone = all(hist[i + 1] <= hist[i] for i in range(len(hist) - 1))
    records = [VerificationRecord(
        name="minimize_monotone", lhs=hist[-1], rhs=hist[0],
        ratio_or_residual=0.0 if monotone else 1.0,
        params={"eps": eps, "termination": report.termination},
        passed=monotone)]
    return records, extra


def _cmd_tail(args) -> tuple[list[VerificationRecord], dict]:
    w = random_band_limited(args.grid, seed=args.seed, kmax=args.kmax,
                            amplitude=0.5)
    lines = ["m,tail_mass"]
    prev = None
    records = []
    for m in (4, 8, 16, 32):
        t = tail_mass(w, m, m ** 4)
        lines.append(f"{m},{t!r}")
        if prev is not None:
            records.append(VerificationRecord(
                name="tail_monotone", lhs=t, rhs=prev, ratio_or_residual=t - prev,
                params={"m": m}, passed=t <= prev))
        prev = t
    return records, {"tail.csv": "\n".join(lines) + "\n"}


_COMMANDS = {
    "verify": _cmd_verify,
    "energy": _cmd_energy,
    "besov": _cmd_besov,
    "entropy": _cmd_entropy,
    "sweep": _cmd_sweep,
    "minimize": _cmd_minimize,
    "tail": _cmd_tail,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smectic",
        description="Pseudo-spectral smectic energy laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--grid", default="256x256")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--eps", default="0.0625",
                       help="single value or dyadic range 2^-a..2^-b")
        p.add_argument("--p", type=float, default=2.0)
        p.add_argument("--s", type=float, default=0.5)
        p.add_argument("--c", type=float, default=0.5)
        p.add_argument("--kmax", type=int, default=16)
        p.add_argument("--nfields", type=int, default=5)
        p.add_argument("--max-iters", type=int, default=500)
        p.add_argument("--pins", type=int, default=0)
        p.add_argument("--field", default=None, help="input field (NAME or NAME.json)")
        p.add_argument("--profile", default=None, help="jump profile JSON path")
        p.add_argument("--save-final", action="store_true")
        p.add_argument("--out", default=".")
        p.add_argument("--config", default=None, help="JSON config file; flags override")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _merge_config(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    """Apply JSON config values for every option not given on the command line."""
    if not args.config:
        return args
    config = json.loads(Path(args.config).read_text())
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_")
                for a in argv if a.startswith("--")}
    for key, value in config.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ValueError(f"unknown config key {key!r}")
        if attr not in explicit:
            setattr(args, attr, value)
    return args


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args, argv)
        args.grid = _parse_grid(str(args.grid)) if not isinstance(args.grid, GridSpec) else args.grid
        args.eps = _parse_eps_list(str(args.eps))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    t0 = time.time()
    out = Path(args.out)
    try:
        records, extra = _COMMANDS[args.command](args)
    except SmecticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if records:
        _write_records(records, out, args.command, args.format)
    for name, text in extra.items():
        _atomic_write(out / name, text)
    config_echo = {k: (repr(v) if isinstance(v, GridSpec) else v)
                   for k, v in vars(args).items()}
    _manifest(out, args.command, config_echo, t0)
    n_fail = sum(not r.passed for r in records)
    print(f"{args.command}: {len(records) - n_fail}/{len(records)} records passed"
          if records else f"{args.command}: done")
    return _exit_from(records)


if __name__ == "__main__":
    sys.exit(main())
