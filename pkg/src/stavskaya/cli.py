"""Command-line harness: simulate, sweep, certify, verify, enumerate.

Every run is fully determined by its config (seed included); replica streams
are derived per replica, so thread scheduling cannot change any output.  CSV
output uses '.' decimals, '\\n' line endings, UTF-8.  Exit codes for certify:
0 certificate written, 2 no certificate found, 1 error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds, contours, verify
from .process import density_replicas, simulate_density
from .rng import RngStream


def worker_count(tasks: int) -> int:
    """Parallel width for replica/grid maps, capped by STAVSKAYA_THREADS."""
    cap = os.environ.get("STAVSKAYA_THREADS", "")
    try:
        limit = max(1, int(cap)) if cap else 1
    except ValueError:
        limit = 1
    return max(1, min(limit, tasks))


@dataclass(frozen=True)
class ExperimentConfig:
    """One command's resolved parameters; round-trips losslessly through JSON."""

    command: str
    alpha: float | None = None
    m: int = 100
    t_max: int = 100
    replicas: int = 4
    seed: int = 0
    tol: float = 1e-4
    grid: tuple[float, ...] = ()
    n_levels: int = 8
    out: str | None = None
    max_mode: bool = False
    inject_fault: float = 0.0

    def to_json(self) -> str:
        data = dataclasses.asdict(self)
        data["grid"] = list(self.grid)
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        data["grid"] = tuple(data.get("grid", ()))
        return cls(**data)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline="\n"), True
    except OSError as exc:
        raise RuntimeError(f"cannot open output file {path!r}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    handle, close = _open_out(path)
    try:
        handle.write(text)
    finally:
        if close:
            handle.close()


def _replica_map(fn, replicas: int):
    workers = worker_count(replicas)
    if workers == 1:
        return [fn(r) for r in range(replicas)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(replicas)))


def cmd_simulate(cfg: ExperimentConfig) -> int:
    rng = RngStream(cfg.seed)
    rows = _replica_map(
        lambda r: simulate_density(cfg.m, cfg.t_max, cfg.alpha, rng.replica(r)),
        cfg.replicas,
    )
    lines = ["t,replica,density"]
    for r, densities in enumerate(rows):
        for t, d in enumerate(densities):
            lines.append(f"{t},{r},{float(d)!r}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return 0


def cmd_sweep(cfg: ExperimentConfig) -> int:
    if not cfg.grid:
        raise RuntimeError("sweep needs --grid with at least one alpha")
    if any(not 0.0 <= a <= 1.0 for a in cfg.grid):
        raise RuntimeError("sweep grid values must lie in [0, 1]")
    lines = ["alpha,replica,t_final,density"]
    # same streams for every alpha: per-window-cell draws make the runs coupled
    for alpha in cfg.grid:
        rng = RngStream(cfg.seed)
        finals = _replica_map(
            lambda r, a=alpha: simulate_density(cfg.m, cfg.t_max, a, rng.replica(r))[-1],
            cfg.replicas,
        )
        for r, d in enumerate(finals):
            lines.append(f"{float(alpha)!r},{r},{cfg.t_max},{float(d)!r}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return 0


def cmd_certify(cfg: ExperimentConfig) -> int:
    if cfg.max_mode:
        value = bounds.max_certified_alpha(cfg.tol)
        _write(cfg.out, json.dumps({"max_certified_alpha": value, "tol": cfg.tol}) + "\n")
        print(f"max certified alpha = {value:.6f} (tol {cfg.tol:g})", file=sys.stderr)
        return 0
    cert = bounds.certify_alpha(cfg.alpha)
    if cert is None:
        print(f"no certificate found at alpha={cfg.alpha}", file=sys.stderr)
        return 2
    if not cert.revalidate():
        raise RuntimeError("freshly built certificate failed revalidation")
    _write(cfg.out, bounds.certificate_to_json(cert))
    print(
        f"certified alpha={cert.alpha} at p={cert.p:.6f}, q={cert.q:.6f}: "
        f"radius {cert.lambda_pf:.6f}, window {cert.m_threshold}, "
        f"bound {cert.bound():.6f}",
        file=sys.stderr,
    )
    return 0


def cmd_verify(cfg: ExperimentConfig) -> int:
    results, notes = verify.run_battery(
        coupling_trials=max(1, cfg.replicas),
        mc_replicas=max(100, cfg.m),
        n_max=cfg.n_levels,
        base_seed=cfg.seed,
        fault=cfg.inject_fault,
    )
    lines = [r.line() for r in results]
    lines.append("notes:")
    lines.extend(f"  - {note}" for note in notes)
    _write(cfg.out, "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


def cmd_enumerate(cfg: ExperimentConfig) -> int:
    levels = contours.s_table_recurrence(cfg.n_levels)
    lines = ["n,r,i,t,k,count"]
    lines.extend(
        f"{n},{r},{i},{t},{k},{c}" for n, r, i, t, k, c in contours.table_rows(levels)
    )
    _write(cfg.out, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stavskaya",
        description="Simulate the Stavskaya automaton and certify its survival regime.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p_sim = sub.add_parser("simulate", help="density trajectories from all-ones")
    p_sim.add_argument("--alpha", type=float, required=True)
    p_sim.add_argument("--m", type=int, default=1000, help="observed cells")
    p_sim.add_argument("--t-max", type=int, default=1000, help="time steps")
    p_sim.add_argument("--replicas", type=int, default=4)
    common(p_sim)

    p_sweep = sub.add_parser("sweep", help="final density across an alpha grid")
    p_sweep.add_argument(
        "--grid", required=True,
        help="comma-separated alphas, e.g. 0.05,0.25,0.33,0.40",
    )
    p_sweep.add_argument("--m", type=int, default=2000)
    p_sweep.add_argument("--t-max", type=int, default=2000)
    p_sweep.add_argument("--replicas", type=int, default=8)
    common(p_sweep)

    p_cert = sub.add_parser("certify", help="survival certificate at one alpha")
    p_cert.add_argument("--alpha", type=float, default=None)
    p_cert.add_argument("--tol", type=float, default=1e-4)
    p_cert.add_argument(
        "--max", action="store_true", dest="max_mode",
        help="report the largest certifiable alpha instead",
    )
    common(p_cert)

    p_ver = sub.add_parser("verify", help="cross-module oracle battery")
    p_ver.add_argument("--replicas", type=int, default=2000,
                       help="coupling trials per (alpha, t)")
    p_ver.add_argument("--m", type=int, default=20000,
                       help="Monte Carlo replicas for the bound check")
    p_ver.add_argument("--n-levels", type=int, default=9,
                       help="table levels for the equality check")
    p_ver.add_argument("--inject-fault", type=float, default=0.0,
                       help=argparse.SUPPRESS)  # negative control for tests
    common(p_ver)

    p_enum = sub.add_parser("enumerate", help="dump the dual path tables as CSV")
    p_enum.add_argument("--n-levels", type=int, default=8)
    common(p_enum)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    grid: tuple[float, ...] = ()
    if getattr(args, "grid", None):
        grid = tuple(float(x) for x in str(args.grid).split(",") if x.strip())
    return ExperimentConfig(
        command=args.command,
        alpha=getattr(args, "alpha", None),
        m=getattr(args, "m", 100),
        t_max=getattr(args, "t_max", 100),
        replicas=getattr(args, "replicas", 4),
        seed=getattr(args, "seed", 0),
        tol=getattr(args, "tol", 1e-4),
        grid=grid,
        n_levels=getattr(args, "n_levels", 8),
        out=getattr(args, "out", None),
        max_mode=getattr(args, "max_mode", False),
        inject_fault=getattr(args, "inject_fault", 0.0),
    )


_COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    if cfg.command == "certify" and not cfg.max_mode and cfg.alpha is None:
        print("certify needs --alpha (or --max)", file=sys.stderr)
        return 1
    if cfg.command == "simulate" and not 0.0 <= (cfg.alpha or 0.0) <= 1.0:
        print(f"alpha must lie in [0, 1], got {cfg.alpha}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[cfg.command](cfg)
    except (ValueError, RuntimeError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
