"""
Config-driven experiment runs: moment tables, D/E emission, evolution traces,
the Trotter comparison and the perturbation-bound trial suites.

A config is a plain dict (usually loaded from JSON). Unknown keys are an
error; missing keys take the defaults in DEFAULTS.
"""
from __future__ import annotations

import copy
import csv
import io
import json
import platform
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .backend import EstimatorConfig, prepare_basis_state, prepare_layered_random_state
from .errors import ConfigError
from .evolve import e_norm, fast_forward, fidelity_vs_exact, initial_alpha, observable_trace
from .hamiltonian import HamiltonianSpec, builtin
from .moments import MomentSet, build_moment_set
from .overlaps import OverlapMatrices, assemble, assemble_observable
from .pauli import parse_label
from .perturb import bauer_fike, davis_kahan, stewart_bound
from .speceig import DEFAULT_CUTOFF, SAMPLED_CUTOFF, EigenSolution, solve
from .trotter import CALIBRATED_NOISE_P, TrotterConfig, fidelity_curve

DEFAULTS = {
    "hamiltonian": {"builtin": "H1", "n_qubits": 2},
    "initial_state": {"layered": {"layers": 5, "seed": 0}},
    "K": 1,
    "estimator": {"mode": "exact", "shots": 8192, "seed": 0},
    "time_grid": {"t_max": 10.0, "points": 200},
    "observable": "Z1",
    "observable_mode": "exact",
    "cutoff": None,
    "trotter": {"delta_t": 0.5, "noise_p": None, "n_max": 10_000, "grid": "linear", "n_stop": 200, "points": 201},
}

# Figure experiments: model, size, start state, observable and the K values shown.
FIGURES = {
    "fig1": {"hamiltonian": {"builtin": "H1", "n_qubits": 2}, "observable": "Z1", "Ks": [1]},
    "fig2": {"hamiltonian": {"builtin": "H1", "n_qubits": 3}, "observable": "Z1", "Ks": [1, 2]},
    "fig3": {"hamiltonian": {"builtin": "H2", "n_qubits": 4}, "observable": "Y2", "Ks": [1, 2]},
    "fig4": {"hamiltonian": {"builtin": "H2", "n_qubits": 5}, "observable": "Y2", "Ks": [1, 2, 3]},
}

TABLE1_ROWS = [("H1", 2, 1), ("H1", 3, 2), ("H2", 4, 2), ("H2", 5, 3), ("H3", 2, 1)]


def merge_config(user: dict | None) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    for key, val in (user or {}).items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "trotter" and isinstance(val, dict):
            unknown = set(val) - set(DEFAULTS["trotter"])
            if unknown:
                raise ConfigError(f"unknown trotter keys {sorted(unknown)}")
            cfg[key].update(val)
        elif key == "estimator" and isinstance(val, dict):
            cfg[key].update(val)
        else:
            cfg[key] = copy.deepcopy(val)
    return validate_config(cfg)


def validate_config(cfg: dict) -> dict:
    """Reject scalar settings that would otherwise fail deep inside the pipeline."""
    K = cfg["K"]
    if isinstance(K, bool) or not isinstance(K, int) or K < 0:
        raise ConfigError(f"K must be a non-negative integer, got {K!r}")
    if cfg["cutoff"] is not None and not float(cfg["cutoff"]) >= 0:
        raise ConfigError(f"cutoff must be non-negative, got {cfg['cutoff']!r}")
    if int(cfg["time_grid"]["points"]) < 1:
        raise ConfigError("time_grid.points must be at least 1")
    return cfg


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            return merge_config(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def build_hamiltonian(spec: dict) -> HamiltonianSpec:
    """
    {"builtin": "H1"|"H2"|"H3", "n_qubits": n, ...model kwargs} or
    {"n_qubits": n, "terms": [[coeff, label], ...]} where coeff is a number
    or a [re, im] pair.
    """
    spec = dict(spec)
    try:
        if "builtin" in spec:
            name = spec.pop("builtin")
            n = spec.pop("n_qubits", None)
            if "couplings" in spec:
                spec["couplings"] = tuple(spec["couplings"])
            return builtin(name, n, **spec)
        n = spec["n_qubits"]
        pairs = []
        for coeff, label in spec["terms"]:
            if isinstance(coeff, (list, tuple)):
                coeff = complex(coeff[0], coeff[1])
            pairs.append((coeff, label))
        return HamiltonianSpec.from_labels(pairs, n)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad hamiltonian spec: {exc}") from exc


def build_state(spec: dict, n_qubits: int) -> np.ndarray:
    if "basis" in spec:
        state = prepare_basis_state(spec["basis"])
    elif "layered" in spec:
        lay = spec["layered"]
        state = prepare_layered_random_state(n_qubits, lay.get("layers", 5), lay.get("seed", 0))
    else:
        raise ConfigError(f"initial_state needs 'basis' or 'layered', got {sorted(spec)}")
    if state.shape[0] != 1 << n_qubits:
        raise ConfigError("initial state size does not match the Hamiltonian")
    return state


def estimator_of(cfg: dict) -> EstimatorConfig:
    est = cfg["estimator"]
    try:
        return EstimatorConfig(est.get("mode", "exact"), int(est.get("shots", 8192)), int(est.get("seed", 0)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cutoff_of(cfg: dict) -> float:
    if cfg["cutoff"] is not None:
        return float(cfg["cutoff"])
    return SAMPLED_CUTOFF if cfg["estimator"].get("mode") == "sampled" else DEFAULT_CUTOFF


def time_grid(cfg: dict) -> np.ndarray:
    g = cfg["time_grid"]
    return np.linspace(0.0, float(g["t_max"]), int(g["points"]))


@dataclass
class Run:
    """Everything the fast-forwarding pipeline produces for one config and one K."""

    h: HamiltonianSpec
    phi: np.ndarray
    ms: MomentSet
    overlaps: OverlapMatrices
    sol: EigenSolution
    alpha0: np.ndarray

    def alpha(self, T):
        return fast_forward(self.sol, self.overlaps.E, self.alpha0, T)


def run_pipeline(cfg: dict, K: int | None = None) -> Run:
    h = build_hamiltonian(cfg["hamiltonian"])
    phi = build_state(cfg["initial_state"], h.n_qubits)
    ms = build_moment_set(h, cfg["K"] if K is None else K)
    om = assemble(ms, h, phi, estimator_of(cfg))
    sol = solve(om.D, om.E, cutoff_of(cfg))
    return Run(h, phi, ms, om, sol, initial_alpha(ms, om.E))


def observable_spec(label: str, n_qubits: int) -> HamiltonianSpec:
    return HamiltonianSpec(n_qubits, ((1.0, parse_label(label, n_qubits)),))


def evolve_rows(cfg: dict, K: int | None = None) -> list[list[float]]:
    """Rows of t, fidelity, observable, norm, im_diagnostic."""
    run = run_pipeline(cfg, K)
    ts = time_grid(cfg)
    alphas = run.alpha(ts)
    fid = fidelity_vs_exact(run.h, run.phi, run.ms, alphas, ts)
    obs = observable_spec(cfg["observable"], run.h.n_qubits)
    obs_cfg = estimator_of(cfg) if cfg["observable_mode"] == "sampled" else EstimatorConfig()
    M = assemble_observable(run.ms, obs, run.phi, obs_cfg)
    vals, im = observable_trace(alphas, M)
    norms = e_norm(alphas, run.overlaps.E)
    return [list(r) for r in zip(ts, np.atleast_1d(fid), vals, norms, im)]


def exact_observable_rows(cfg: dict) -> list[list[float]]:
    from .backend import exact_evolve

    h = build_hamiltonian(cfg["hamiltonian"])
    phi = build_state(cfg["initial_state"], h.n_qubits)
    ts = time_grid(cfg)
    psi = exact_evolve(h, phi, ts)
    O = parse_label(cfg["observable"], h.n_qubits).to_matrix()
    vals = np.einsum("ti,ij,tj->t", psi.conj(), O, psi).real
    return [[t, v] for t, v in zip(ts, vals)]


def moment_table(rows=TABLE1_ROWS) -> list[dict]:
    out = []
    for name, n, kmax in rows:
        ms = build_moment_set(builtin(name, n), kmax)
        out.append({"hamiltonian": name, "n_qubits": n, "sizes": ms.level_sizes()[1:]})
    return out


def matrices_document(cfg: dict) -> dict:
    run = run_pipeline(cfg)
    est = estimator_of(cfg)
    doc = {
        "n_qubits": run.h.n_qubits,
        "K": run.ms.K,
        "hamiltonian": run.h.to_json(),
        "estimator": est.to_json(),
        "seeds": {"estimator": est.rng_seed, "initial_state": cfg["initial_state"]},
        "ops": run.ms.labels(),
        "D": complex_matrix_json(run.overlaps.D),
        "E": complex_matrix_json(run.overlaps.E),
        "distinct_strings": run.overlaps.meta["distinct_strings"],
    }
    if cfg.get("observable"):
        obs = observable_spec(cfg["observable"], run.h.n_qubits)
        obs_cfg = est if cfg["observable_mode"] == "sampled" else EstimatorConfig()
        doc["observables"] = {
            cfg["observable"]: complex_matrix_json(assemble_observable(run.ms, obs, run.phi, obs_cfg))
        }
    return doc


def trotter_steps(cfg: dict) -> np.ndarray:
    tc = cfg["trotter"]
    stop = int(tc["n_stop"])
    if tc["grid"] == "linear":
        return np.unique(np.linspace(0, stop, int(tc["points"])).round().astype(np.int64))
    if tc["grid"] == "log":
        return np.unique(np.concatenate([[0], np.geomspace(1, stop, int(tc["points"])).round()]).astype(np.int64))
    raise ConfigError(f"unknown trotter grid {tc['grid']!r}")


def compare_trotter_rows(cfg: dict) -> list[list]:
    """Rows of N, t, fidelity_trotter, fidelity_cqff_k1, fidelity_cqff_k2; Trotter is None past n_max."""
    tc = cfg["trotter"]
    dt = float(tc["delta_t"])
    noise = CALIBRATED_NOISE_P if tc["noise_p"] is None else float(tc["noise_p"])
    steps = trotter_steps(cfg)
    ts = steps * dt
    h = build_hamiltonian(cfg["hamiltonian"])
    phi = build_state(cfg["initial_state"], h.n_qubits)
    cqff = []
    for K in (1, 2):
        run = run_pipeline(cfg, K)
        cqff.append(np.atleast_1d(fidelity_vs_exact(h, phi, run.ms, run.alpha(ts), ts)))
    in_range = steps[steps <= int(tc["n_max"])]
    trot = fidelity_curve(h, phi, in_range, TrotterConfig(delta_t=dt, noise_p=noise))
    trot = list(trot) + [None] * (len(steps) - len(in_range))
    return [[int(n), t, f, k1, k2] for n, t, f, k1, k2 in zip(steps, ts, trot, *cqff)]


def _random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


def _random_pd(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a @ a.conj().T / n + 0.2 * np.eye(n)


def _unit_hermitian(rng, n, size):
    a = _random_hermitian(rng, n)
    return size * a / np.linalg.norm(a, 2)


def bound_trials(trials: int = 100, seed: int = 0, eps: float = 1e-3) -> dict[str, list]:
    """
    Seeded random trials of the three perturbation bounds.

    Each trial draws L in 2..10, a Hermitian D and positive definite E, then
    perturbs both by Hermitian matrices of spectral norm `eps`. Davis-Kahan
    splits at the largest gap of the unperturbed spectrum.
    """
    rng = np.random.default_rng(seed)
    out = {"stewart": [], "bauer_fike": [], "davis_kahan": []}
    for _ in range(trials):
        n = int(rng.integers(2, 11))
        D, E = _random_hermitian(rng, n), _random_pd(rng, n)
        D_t = D + _unit_hermitian(rng, n, eps)
        E_t = E + _unit_hermitian(rng, n, eps)
        out["stewart"].append(stewart_bound(D, E, D_t, E_t))
        out["bauer_fike"].append(bauer_fike(E, E_t))
        lam = solve(D, E).lambdas
        split = int(np.argmax(np.diff(lam))) + 1
        out["davis_kahan"].append(davis_kahan(D, E, D_t, E_t, split))
    return out


def sampled_bauer_fike_trials(trials: int = 100, shots: int = 1024, seed: int = 0) -> list:
    """Bauer-Fike on exact vs shot-sampled E for the H1 3-qubit K=1 moment set."""
    h = builtin("H1", 3)
    ms = build_moment_set(h, 1)
    reports = []
    for k in range(trials):
        phi = prepare_layered_random_state(3, 5, seed + k)
        E = assemble(ms, h, phi).E
        E_t = assemble(ms, h, phi, EstimatorConfig("sampled", shots, seed + k)).E
        reports.append(bauer_fike(E, E_t))
    return reports


def bounds_summary(trials: int = 100, seed: int = 0) -> list[dict]:
    suites = bound_trials(trials, seed)
    suites["bauer_fike_sampled"] = sampled_bauer_fike_trials(trials, seed=seed)
    rows = []
    for name, reps in suites.items():
        met = [r for r in reps if r.preconditions_met]
        rows.append({
            "suite": name,
            "trials": len(reps),
            "preconditions_met": len(met),
            "violations": sum(not r.holds for r in met),
        })
    return rows


# ---- output -----------------------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def complex_matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def manifest(cfg: dict, command: str, files: list[str]) -> dict:
    return {
        "command": command,
        "config": cfg,
        "files": sorted(files),
        "versions": {
            "cqff": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }


def write(out_dir: Path, name: str, text: str) -> str:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text)
    return name


EVOLVE_HEADER = ["t", "fidelity", "observable", "norm", "im_diagnostic"]
COMPARE_HEADER = ["N", "t", "fidelity_trotter", "fidelity_cqff_k1", "fidelity_cqff_k2"]
REPRODUCE_TARGETS = ("table1", "fig1", "fig2", "fig3", "fig4", "fig5")


def reproduce(target: str, out_dir, overrides: dict | None = None) -> list[str]:
    """
    Regenerate one table or figure as CSV/JSON files under `out_dir`.

    Figures default to an 8192-shot sampled estimator; `overrides` is merged
    into every config (e.g. {"estimator": {"mode": "exact"}}).
    """
    out_dir = Path(out_dir)
    if target not in REPRODUCE_TARGETS:
        raise ConfigError(f"unknown target {target!r}; choose from {', '.join(REPRODUCE_TARGETS)}")
    base = {"estimator": {"mode": "sampled", "shots": 8192, "seed": 0}}
    files = []
    if target == "table1":
        cfg = merge_config(overrides)
        files.append(write(out_dir, "table1.json", json_text(moment_table())))
    elif target == "fig5":
        cfg = merge_config({**base, "hamiltonian": {"builtin": "H3"}, "initial_state": {"basis": "10"},
                            **(overrides or {})})
        cfg["estimator"] = {**base["estimator"], **(overrides or {}).get("estimator", {})}
        lin = copy.deepcopy(cfg)
        lin["trotter"].update(grid="linear", n_stop=200, points=201)
        files.append(write(out_dir, "fig5a.csv", csv_text(COMPARE_HEADER, compare_trotter_rows(lin))))
        log = copy.deepcopy(cfg)
        log["trotter"].update(grid="log", n_stop=2_500_000, points=61)
        files.append(write(out_dir, "fig5b.csv", csv_text(COMPARE_HEADER, compare_trotter_rows(log))))
    else:
        fig = FIGURES[target]
        cfg = merge_config({**base, "hamiltonian": fig["hamiltonian"], "observable": fig["observable"],
                            **(overrides or {})})
        cfg["estimator"] = {**base["estimator"], **(overrides or {}).get("estimator", {})}
        for K in fig["Ks"]:
            files.append(write(out_dir, f"{target}_K{K}.csv", csv_text(EVOLVE_HEADER, evolve_rows(cfg, K))))
        files.append(write(out_dir, f"{target}_exact.csv", csv_text(["t", "observable"], exact_observable_rows(cfg))))
    files.append(write(out_dir, f"{target}_manifest.json", json_text(manifest(cfg, f"reproduce {target}", files))))
    return files
