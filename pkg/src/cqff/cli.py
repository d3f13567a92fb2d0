"""
Command line runner.

    python -m cqff moments [--config cfg.json]
    python -m cqff matrices --config cfg.json --out run/
    python -m cqff evolve --config cfg.json --mode sampled --shots 8192
    python -m cqff compare-trotter --config cfg.json
    python -m cqff bounds
    python -m cqff reproduce fig5 --out figs/

Exit codes: 0 success, 2 config error, 3 numerical contract violation.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments as ex
from .errors import ConfigError, ContractError, PauliParseError


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON experiment config")
    common.add_argument("--out", type=Path, help="output directory (default: print to stdout)")
    common.add_argument("--seed", type=int, help="override the estimator seed")
    common.add_argument("--shots", type=int, help="override the shot count")
    common.add_argument("--mode", choices=["exact", "sampled"], help="override the estimator mode")
    common.add_argument("--cutoff", type=float, help="relative rank cutoff for E")
    common.add_argument("--k", type=int, dest="K", help="moment order K")

    p = argparse.ArgumentParser(prog="cqff", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("moments", parents=[common], help="moment-set sizes per level")
    sub.add_parser("matrices", parents=[common], help="emit D, E and observable matrices")
    sub.add_parser("evolve", parents=[common], help="fidelity and observable trace")
    sub.add_parser("compare-trotter", parents=[common], help="CQFF vs Trotter fidelity")
    b = sub.add_parser("bounds", parents=[common], help="perturbation-bound trial suites")
    b.add_argument("--trials", type=int, default=100)
    r = sub.add_parser("reproduce", parents=[common], help="regenerate a table or figure")
    r.add_argument("target", choices=ex.REPRODUCE_TARGETS)
    return p


def _overrides(args) -> dict:
    est = {}
    if args.seed is not None:
        est["seed"] = args.seed
    if args.shots is not None:
        est["shots"] = args.shots
    if args.mode is not None:
        est["mode"] = args.mode
    out = {"estimator": est} if est else {}
    if args.cutoff is not None:
        out["cutoff"] = args.cutoff
    if args.K is not None:
        out["K"] = args.K
    return out


def _config(args) -> dict:
    cfg = ex.load_config(args.config) if args.config else ex.merge_config(None)
    for key, val in _overrides(args).items():
        if key == "estimator":
            cfg["estimator"].update(val)
        else:
            cfg[key] = val
    return ex.validate_config(cfg)


def _emit(args, cfg, name: str, text: str):
    if args.out is None:
        sys.stdout.write(text)
        return
    files = [ex.write(args.out, name, text)]
    ex.write(args.out, "manifest.json", ex.json_text(ex.manifest(cfg, args.command, files)))


def run(args) -> None:
    if args.command == "reproduce":
        files = ex.reproduce(args.target, args.out or Path("reproduce") / args.target, _overrides(args))
        print("\n".join(files))
        return
    cfg = _config(args)
    if args.command == "moments":
        if args.config is None:
            table = ex.moment_table()
        else:
            h = ex.build_hamiltonian(cfg["hamiltonian"])
            ms = ex.build_moment_set(h, cfg["K"])
            table = [{"hamiltonian": cfg["hamiltonian"], "n_qubits": h.n_qubits, "sizes": ms.level_sizes()[1:]}]
        lines = ["hamiltonian  n_qubits  sizes(K=1..)"]
        for row in table:
            hs = row["hamiltonian"]
            name = hs if isinstance(hs, str) else hs.get("builtin", "custom")
            lines.append(f"{name:<12} {row['n_qubits']:<9} {' '.join(map(str, row['sizes']))}")
        _emit(args, cfg, "moments.txt", "\n".join(lines) + "\n")
    elif args.command == "matrices":
        _emit(args, cfg, "matrices.json", ex.json_text(ex.matrices_document(cfg)))
    elif args.command == "evolve":
        _emit(args, cfg, "evolve.csv", ex.csv_text(ex.EVOLVE_HEADER, ex.evolve_rows(cfg)))
    elif args.command == "compare-trotter":
        _emit(args, cfg, "compare_trotter.csv", ex.csv_text(ex.COMPARE_HEADER, ex.compare_trotter_rows(cfg)))
    elif args.command == "bounds":
        rows = ex.bounds_summary(args.trials, cfg["estimator"].get("seed", 0))
        lines = [f"{'suite':<20} {'trials':>6} {'checked':>8} {'violations':>10}  result"]
        for r in rows:
            verdict = "PASS" if r["violations"] == 0 else "FAIL"
            lines.append(f"{r['suite']:<20} {r['trials']:>6} {r['preconditions_met']:>8} {r['violations']:>10}  {verdict}")
        _emit(args, cfg, "bounds.txt", "\n".join(lines) + "\n")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        run(args)
    except (ConfigError, PauliParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return 3
    return 0
