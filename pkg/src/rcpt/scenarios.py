"""Scenario configs, presets and sweep execution behind the command line.

A scenario is a plain mapping, normally read from TOML::

    name = "my-run"
    model = "nesb"
    representations = ["rc", "eff"]
    outputs = ["heat_currents"]
    workers = 2

    [parameters]
    delta = 1.0
    frequency = 20.0

    [[sweep]]
    parameter = "coupling"
    values = [1.0, 2.0, 4.0]        # or: start = 1.0, stop = 4.0, num = 7

Several ``[[sweep]]`` tables form a Cartesian grid; the first table varies
slowest.  Parameters not given take the model defaults in `SCHEMAS`.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .equilibrium import gibbs, gsb_mfgs_closed_form, mfgs_rc, populations_coherences
from .errors import ConfigError, RcptError, UndefinedEfficiency
from .models import (ChainSpec, DqdSpec, GsbSpec, NesbSpec, QarSpec, chain_hamiltonian,
                     chain_magnetization, cooling_boundary, dqd, dqd_hamiltonian,
                     dqd_number_operator, gap_ratio, gsb, nesb, qar, qar_hamiltonian,
                     sigma_theta, spin_chain, thermoelectric_efficiency)
from .operators import pauli
from .redfield import reduced_state, solve
from .spectral import Brownian
from .transforms import canonical_representation

SHORT_NAMES = {"original": "bmr", "rc-extended": "rc", "effective": "eff"}

_BATH = {"coupling": 0.0, "frequency": 20.0, "width": 0.0071, "cutoff": 1000.0, "levels": 0}

SCHEMAS = {
    "gsb": {**_BATH, "delta": 1.0, "theta": math.pi / 4, "temperature": 0.5},
    "nesb": {**_BATH, "delta": 1.0, "t_left": 1.0, "t_right": 0.5},
    "qar": {**_BATH, "delta": 0.3, "t_cold": 0.25, "t_hot": 0.5, "t_work": 1.5,
            "hot_width": 0.0071, "work_width": 0.0071, "hot_work_cutoff": 1000.0, "top": 1.0},
    "dqd": {**_BATH, "frequency": 100.0, "width": 1 / (2 * math.pi), "eps_l": 0.0, "eps_r": 2.0,
            "U": 1000.0, "gamma_l": 0.1, "gamma_r": 0.1, "t_l": 10.0, "t_r": 1.0, "t_ph": 1.0,
            "mu_l": -0.3, "mu_r": -0.2},
    # jx = J, jy = anisotropy * J: anisotropy 1 is the XX chain, 0 the Ising chain
    "chain": {**_BATH, "frequency": 10.0, "n_sites": 2, "delta": 1.0, "J": 0.2, "anisotropy": 1.0,
              "jz": 0.0, "t_left": 0.5, "t_right": 1.0},
}
INTEGER_KEYS = {"levels", "n_sites"}

OBSERVABLES = {
    "gsb": ("populations", "coherences", "heat_currents", "spectrum_gaps", "mfgs"),
    "nesb": ("populations", "coherences", "heat_currents"),
    "qar": ("populations", "heat_currents", "cooling_boundary"),
    "dqd": ("populations", "heat_currents", "charge_current", "efficiency"),
    "chain": ("populations", "heat_currents", "magnetization"),
}
# observables that need the steady state of the master equation
_NEEDS_SOLVE = {"populations", "coherences", "heat_currents", "charge_current", "efficiency", "magnetization"}

BATH_NAMES = {
    "gsb": ("bath",),
    "nesb": ("left", "right"),
    "qar": ("cold", "hot", "work"),
    "dqd": ("left", "right", "phonon"),
}
TOP_KEYS = {"name", "model", "representations", "outputs", "parameters", "sweep", "workers", "notes"}


# ---------------------------------------------------------------------------
# validation


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _sweep_values(entry: dict, where: str) -> list:
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: sweep entries must be tables")
    extra = set(entry) - {"parameter", "values", "start", "stop", "num"}
    if extra:
        raise ConfigError(f"{where}.{sorted(extra)[0]}: unknown sweep key")
    if "values" in entry:
        values = entry["values"]
        if not isinstance(values, list):
            raise ConfigError(f"{where}.values: must be a list")
    elif {"start", "stop", "num"} <= set(entry):
        num = entry["num"]
        if not (isinstance(num, int) and not isinstance(num, bool) and num >= 1):
            raise ConfigError(f"{where}.num: must be a positive integer")
        if not (_is_number(entry["start"]) and _is_number(entry["stop"])):
            raise ConfigError(f"{where}.start: start/stop must be numbers")
        values = np.linspace(entry["start"], entry["stop"], num).tolist()
    else:
        raise ConfigError(f"{where}.values: give either values or start/stop/num")
    if not values:
        raise ConfigError(f"{where}.values: sweep grid is empty")
    if not all(_is_number(v) for v in values):
        raise ConfigError(f"{where}.values: sweep values must be finite numbers")
    d = np.diff(values)
    if len(values) > 1 and not (np.all(d > 0) or np.all(d < 0)):
        raise ConfigError(f"{where}.values: sweep grid must be strictly monotone")
    return [float(v) if not isinstance(v, int) else v for v in values]


def resolve(config: dict) -> dict:
    """Validate a raw config and return it with defaults filled in and grids expanded.

    Raises ConfigError naming the offending key.
    """
    if not isinstance(config, dict):
        raise ConfigError("config: top level must be a table")
    extra = set(config) - TOP_KEYS
    if extra:
        raise ConfigError(f"{sorted(extra)[0]}: unknown top-level key")
    model = config.get("model")
    if model not in SCHEMAS:
        raise ConfigError(f"model: expected one of {sorted(SCHEMAS)}, got {model!r}")
    schema = SCHEMAS[model]

    reps = config.get("representations", ["bmr", "rc", "eff"])
    if not isinstance(reps, list) or not reps:
        raise ConfigError("representations: must be a non-empty list")
    try:
        reps = [SHORT_NAMES[canonical_representation(str(r))] for r in reps]
    except RcptError as exc:
        raise ConfigError(f"representations: {exc}") from None
    if len(set(reps)) != len(reps):
        raise ConfigError("representations: duplicate entries")

    outputs = config.get("outputs", [])
    if not isinstance(outputs, list):
        raise ConfigError("outputs: must be a list")
    for o in outputs:
        if o not in OBSERVABLES[model]:
            raise ConfigError(f"outputs: {o!r} is not available for model {model} "
                              f"(choose from {', '.join(OBSERVABLES[model])})")

    params = dict(schema)
    given = config.get("parameters", {})
    if not isinstance(given, dict):
        raise ConfigError("parameters: must be a table")
    for key, value in given.items():
        if key not in schema:
            raise ConfigError(f"parameters.{key}: unknown parameter for model {model}")
        if not _is_number(value):
            raise ConfigError(f"parameters.{key}: must be a finite number")
        if key in INTEGER_KEYS and value != int(value):
            raise ConfigError(f"parameters.{key}: must be an integer")
        params[key] = int(value) if key in INTEGER_KEYS else float(value)

    sweep = config.get("sweep", [])
    if isinstance(sweep, dict):
        sweep = [sweep]
    if not isinstance(sweep, list):
        raise ConfigError("sweep: must be a table or an array of tables")
    resolved_sweep, seen = [], set()
    for i, entry in enumerate(sweep):
        where = f"sweep[{i}]"
        name = entry.get("parameter") if isinstance(entry, dict) else None
        if name not in schema:
            raise ConfigError(f"{where}.parameter: unknown parameter {name!r} for model {model}")
        if name in seen:
            raise ConfigError(f"{where}.parameter: {name} swept twice")
        seen.add(name)
        values = _sweep_values(entry, where)
        if name in INTEGER_KEYS and any(v != int(v) for v in values):
            raise ConfigError(f"{where}.values: {name} takes integers")
        resolved_sweep.append({"parameter": name, "values": values})

    workers = config.get("workers", 1)
    if not (isinstance(workers, int) and not isinstance(workers, bool) and workers >= 0):
        raise ConfigError("workers: must be a nonnegative integer (0 = all cores)")
    notes = config.get("notes", [])
    if not (isinstance(notes, list) and all(isinstance(n, str) for n in notes)):
        raise ConfigError("notes: must be a list of strings")

    out = {
        "name": str(config.get("name", model)),
        "model": model,
        "representations": reps,
        "outputs": list(outputs),
        "parameters": params,
        "sweep": resolved_sweep,
        "workers": workers,
        "notes": notes,
    }
    # physical checks on every grid point, so that bad values surface before any solve
    for point in grid_points(out):
        try:
            make_spec(model, point)
        except RcptError as exc:
            bad = {k: point[k] for k in seen} if seen else {}
            raise ConfigError(f"parameters: {exc}" + (f" at {bad}" if bad else "")) from None
    return out


def grid_points(resolved: dict) -> list[dict]:
    base = resolved["parameters"]
    names = [s["parameter"] for s in resolved["sweep"]]
    grids = [s["values"] for s in resolved["sweep"]]
    points = []
    for combo in itertools.product(*grids):
        p = dict(base)
        for k, v in zip(names, combo):
            p[k] = int(v) if k in INTEGER_KEYS else float(v)
        points.append(p)
    return points


# ---------------------------------------------------------------------------
# model construction


def _brownian(p) -> Brownian:
    return Brownian(p["coupling"], p["frequency"], p["width"], p["cutoff"])


def make_spec(model: str, p: dict):
    if model == "gsb":
        return GsbSpec(p["delta"], p["theta"], _brownian(p), p["temperature"])
    if model == "nesb":
        b = _brownian(p)
        return NesbSpec(p["delta"], b, b, p["t_left"], p["t_right"])
    if model == "qar":
        return QarSpec(p["delta"], _brownian(p), p["t_cold"], p["t_hot"], p["t_work"],
                       p["hot_width"], p["work_width"], p["hot_work_cutoff"], p["top"])
    if model == "dqd":
        return DqdSpec(p["eps_l"], p["eps_r"], p["U"], p["gamma_l"], p["gamma_r"], p["t_l"], p["t_r"],
                       p["mu_l"], p["mu_r"], _brownian(p), p["t_ph"])
    if model == "chain":
        n = p["n_sites"]
        b = _brownian(p)
        temps = tuple(np.linspace(p["t_left"], p["t_right"], n).tolist()) if n > 1 else (p["t_left"],)
        return ChainSpec((p["delta"],) * n, p["J"], p["anisotropy"] * p["J"], p["jz"], (b,) * n, temps)
    raise ConfigError(f"model: unknown model {model!r}")


_BUILDERS = {"gsb": gsb, "nesb": nesb, "qar": qar, "dqd": dqd, "chain": spin_chain}


def build_model(model: str, p: dict, representation: str):
    levels = p.get("levels") or None
    return _BUILDERS[model](make_spec(model, p), representation, levels)


def bare_hamiltonian(model: str, p: dict):
    if model in ("gsb", "nesb"):
        return p["delta"] * pauli("z")
    if model == "qar":
        return qar_hamiltonian(p["delta"], p["top"])
    if model == "dqd":
        return dqd_hamiltonian(p["eps_l"], p["eps_r"], p["U"])
    spec = make_spec(model, p)
    return chain_hamiltonian(spec.deltas, spec.jx, spec.jy, spec.jz)


def system_dim(model: str, p: dict) -> int:
    return {"gsb": 2, "nesb": 2, "qar": 3, "dqd": 4}.get(model) or 2 ** p["n_sites"]


def bath_names(model: str, p: dict) -> tuple:
    if model == "chain":
        return tuple(f"site{a}" for a in range(p["n_sites"]))
    return BATH_NAMES[model]


# ---------------------------------------------------------------------------
# observables


def columns(model: str, p: dict, observable: str) -> list[str]:
    d = system_dim(model, p)
    if observable in ("populations", "mfgs"):
        cols = [f"p{i}" for i in range(d)]
        return cols + (["coherence"] if observable == "mfgs" else [])
    if observable == "coherences":
        return [f"c{i}{j}" for i in range(d) for j in range(i + 1, d)]
    if observable == "heat_currents":
        return [f"j_{b}" for b in bath_names(model, p)]
    if observable == "charge_current":
        return ["je_left", "je_right"]
    if observable == "efficiency":
        return ["power", "heat_in", "eta"]
    if observable == "spectrum_gaps":
        return ["gap_ratio", "gap_ratio_closed_form"]
    if observable == "cooling_boundary":
        return ["delta_boundary", "inside_window"]
    if observable == "magnetization":
        return ["magnetization"]
    raise ConfigError(f"outputs: unknown observable {observable!r}")


def _gsb_gap(p, rep):
    delta = p["delta"]
    if rep == "bmr":
        return 1.0
    if rep == "eff":
        H = build_model("gsb", p, "eff").hamiltonian
    else:
        H = build_model("gsb", p, "rc").hamiltonian
    e = np.linalg.eigvalsh(H.data)
    return float(e[1] - e[0]) / (2 * delta)


def _gsb_mfgs(p, rep):
    beta = 1 / p["temperature"]
    H_s = p["delta"] * pauli("z")
    if rep == "bmr":
        rho = gibbs(H_s, beta)
    elif rep == "rc":
        M = p.get("levels") or None
        rho = mfgs_rc(H_s, sigma_theta(p["theta"]), p["coupling"], p["frequency"], beta, M=M)
    else:
        rho = gsb_mfgs_closed_form(p["delta"], p["theta"], p["coupling"], p["frequency"], beta)
    pops, cohs = populations_coherences(rho.data, H_s)
    return list(pops) + list(cohs)


def evaluate(model: str, p: dict, rep: str, outputs) -> tuple[dict, dict]:
    """Values per observable and solver diagnostics for one grid point and representation."""
    values, diag = {}, {}
    result = None
    if any(o in _NEEDS_SOLVE for o in outputs):
        m = build_model(model, p, rep)
        N = dqd_number_operator() if model == "dqd" else None
        result = solve(m, number_operator=N)
        diag = {k: result.diagnostics[k] for k in ("residual", "rcond", "retained_states", "full_dim")}
        diag["rc_levels"] = [r.levels for r in m.rc_meta]
    H_s = bare_hamiltonian(model, p)
    for o in outputs:
        if o in ("populations", "coherences"):
            pops, cohs = populations_coherences(reduced_state(result), H_s)
            values[o] = list(pops) if o == "populations" else list(cohs)
        elif o == "heat_currents":
            values[o] = list(result.heat_currents)
        elif o == "charge_current":
            values[o] = list(result.charge_currents[:2])
        elif o == "efficiency":
            j_e, j_u = result.charge_currents[0], result.heat_currents[0]
            power = j_e * (p["mu_r"] - p["mu_l"])
            heat_in = j_u - p["mu_l"] * j_e
            try:
                eta = thermoelectric_efficiency(result, p["mu_l"], p["mu_r"])
            except UndefinedEfficiency:
                eta = float("nan")
            values[o] = [power, heat_in, eta]
        elif o == "magnetization":
            mz = chain_magnetization(p["n_sites"]).data
            values[o] = [float(np.real(np.trace(reduced_state(result) @ mz)))]
        elif o == "spectrum_gaps":
            values[o] = [_gsb_gap(p, rep), gap_ratio(p["theta"], p["coupling"], p["frequency"])]
        elif o == "mfgs":
            values[o] = _gsb_mfgs(p, rep)
        elif o == "cooling_boundary":
            b = 1 / p["t_cold"], 1 / p["t_hot"], 1 / p["t_work"]
            edge = cooling_boundary(p["coupling"], p["frequency"], *b)
            values[o] = [edge, float(p["delta"] < edge)]
    return values, diag


def _run_point(task):
    model, p, reps, outputs = task
    out = {}
    for rep in reps:
        try:
            values, diag = evaluate(model, p, rep, outputs)
            out[rep] = ("ok", values, diag)
        except (RcptError, np.linalg.LinAlgError, ArithmeticError) as exc:
            msg = " ".join(f"{type(exc).__name__}: {exc}".split())
            out[rep] = (f"error: {msg}", {}, {})
    return out


# ---------------------------------------------------------------------------
# execution and output


def _fmt(v) -> str:
    return "%.17g" % v


def _gnuplot(csv_name: str, xcol: int, xlabel: str, first: int, last: int) -> str:
    return (
        "# plot helper, run with: gnuplot -p <this file>\n"
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{xlabel}'\n"
        f"plot for [i={first}:{last}] '{csv_name}' using {xcol}:i with linespoints\n"
    )


def run_scenario(resolved: dict, out_dir, workers: int | None = None) -> dict:
    """Evaluate every grid point, write CSVs, gnuplot helpers and the manifest.

    Returns the manifest.  Point failures are recorded per row, so the caller
    decides how to report them (``manifest["failures"]``).
    """
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model, reps, outputs = resolved["model"], resolved["representations"], resolved["outputs"]
    points = grid_points(resolved)
    swept = [s["parameter"] for s in resolved["sweep"]]
    n_workers = resolved["workers"] if workers is None else workers
    if n_workers == 0:
        n_workers = os.cpu_count() or 1

    if outputs:
        tasks = [(model, p, reps, outputs) for p in points]
        if n_workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                results = list(pool.map(_run_point, tasks))
        else:
            results = [_run_point(t) for t in tasks]
    else:
        results = []

    files = []
    base_cols = ["index"] + swept + ["status"]
    for rep in reps:
        for obs in outputs or [None]:
            stem = f"{rep}_{obs}" if obs else rep
            obs_cols = columns(model, resolved["parameters"], obs) if obs else []
            path = out_dir / f"{stem}.csv"
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(base_cols + obs_cols)
                for i, res in enumerate(results):
                    status, values, _ = res[rep]
                    row = [str(i)] + [_fmt(points[i][k]) for k in swept] + [status]
                    vals = values.get(obs) if status == "ok" else None
                    row += [_fmt(v) for v in vals] if vals is not None else ["nan"] * len(obs_cols)
                    w.writerow(row)
            files.append(path.name)
            if obs_cols:
                # x axis: the fastest-varying sweep parameter
                xcol = len(swept) + 1 if swept else 1
                gp = out_dir / f"{stem}.gp"
                first = len(base_cols) + 1
                gp.write_text(_gnuplot(path.name, xcol, swept[-1] if swept else "index",
                                       first, first + len(obs_cols) - 1))
                files.append(gp.name)

    failures = sum(1 for res in results for rep in reps if res[rep][0] != "ok")
    manifest = {
        "tool": "rcpt",
        "version": __version__,
        "config": resolved,
        "notes": resolved["notes"],
        "points": [
            {"index": i, "sweep": {k: points[i][k] for k in swept},
             "results": {rep: {"status": res[rep][0], "diagnostics": res[rep][2]} for rep in reps}}
            for i, res in enumerate(results)
        ],
        "failures": failures,
        "files": files,
        "workers": n_workers,
        "wall_time_s": time.perf_counter() - t0,
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, default=_json_default)
        fh.write("\n")
    return manifest


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_config(path) -> dict:
    """Read a TOML config, or the ``config`` block of a run manifest (``.json``)."""
    path = Path(path)
    try:
        text = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from None
        if not isinstance(data, dict) or "config" not in data:
            raise ConfigError("config: JSON input must be a run manifest with a 'config' block")
        return data["config"]
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    try:
        return tomllib.loads(text.decode())
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config: invalid TOML ({exc})") from None


# ---------------------------------------------------------------------------
# presets: fixed parameter blocks for the standard scans


def _lin(start, stop, num):
    return np.linspace(start, stop, num).tolist()


PRESETS = {
    "fig3-spectrum": {
        "model": "gsb",
        "representations": ["rc", "eff"],
        "outputs": ["spectrum_gaps"],
        "parameters": {"delta": 1.0, "frequency": 20.0, "levels": 60},
        "sweep": [{"parameter": "theta", "values": [0.0, math.pi / 4, math.pi / 2]},
                  {"parameter": "coupling", "values": _lin(0.0, 30.0, 31)}],
    },
    "fig4-thermalization": {
        "model": "gsb",
        "representations": ["bmr", "rc", "eff"],
        "outputs": ["populations", "coherences", "mfgs"],
        "parameters": {"delta": 1.0, "theta": math.pi / 4, "width": 0.0071, "frequency": 20.0,
                       "cutoff": 1000.0, "temperature": 0.5},
        # lambda = 0 itself leaves the spin decoupled in the RC picture (no unique steady state)
        "sweep": [{"parameter": "coupling", "values": [0.01] + _lin(0.5, 20.0, 40)}],
    },
    "fig5-nesb": {
        "model": "nesb",
        "representations": ["rc", "eff"],
        "outputs": ["heat_currents"],
        "parameters": {"delta": 1.0, "t_left": 1.0, "t_right": 0.5, "width": 0.0071, "cutoff": 1000.0},
        "sweep": [{"parameter": "frequency", "values": [10.0, 20.0]},
                  {"parameter": "coupling", "values": _lin(0.5, 12.0, 24)}],
        "workers": 0,
    },
    "fig6-cooling-window": {
        "model": "qar",
        "representations": ["rc", "eff"],
        "outputs": ["heat_currents", "cooling_boundary"],
        "parameters": {"t_cold": 0.25, "t_hot": 0.5, "t_work": 1.5},
        "sweep": [{"parameter": "frequency", "values": [10.0, 20.0]},
                  {"parameter": "coupling", "values": _lin(0.0, 10.0, 20)},
                  {"parameter": "delta", "values": _lin(0.025, 0.975, 20)}],
        "workers": 0,
    },
    "fig7-dqd-current": {
        "model": "dqd",
        "representations": ["bmr", "rc", "eff"],
        "outputs": ["charge_current"],
        "parameters": {"eps_r": 2.0, "eps_l": 0.0, "t_l": 10.0, "t_r": 1.0, "frequency": 100.0,
                       "mu_l": -0.3, "mu_r": -0.2, "t_ph": 1.0, "width": 1 / (2 * math.pi),
                       "gamma_l": 0.1, "gamma_r": 0.1},
        "sweep": [{"parameter": "coupling", "values": _lin(0.0, 100.0, 21)}],
        "notes": ["width = 1/(2 pi) = 0.159 follows from 2 pi gamma Omega = 100 "
                  "with Omega = 100; it is far broader than the 0.0071 used by the other presets"],
    },
    "fig8-thermoelectric": {
        "model": "dqd",
        "representations": ["bmr", "rc", "eff"],
        "outputs": ["charge_current", "heat_currents", "efficiency"],
        "parameters": {"eps_r": 2.0, "eps_l": 0.0, "t_l": 10.0, "t_r": 1.0, "frequency": 100.0,
                       "mu_l": -0.3, "t_ph": 1.0, "width": 1 / (2 * math.pi),
                       "gamma_l": 0.1, "gamma_r": 0.1, "coupling": 17.3},
        "sweep": [{"parameter": "mu_r", "values": _lin(-0.3, 0.1, 41)}],
        "notes": ["width = 1/(2 pi) is derived from 2 pi gamma Omega = 100 with Omega = 100"],
    },
    "fig9-chain": {
        "model": "chain",
        "representations": ["rc"],
        "outputs": ["magnetization"],
        "parameters": {"delta": 1.0, "t_left": 0.5, "t_right": 0.5, "frequency": 10.0},
        "sweep": [{"parameter": "anisotropy", "values": [0.0, 1.0]},
                  {"parameter": "J", "values": _lin(0.1, 3.0, 10)},
                  {"parameter": "coupling", "values": _lin(0.5, 5.0, 10)}],
        "notes": ["anisotropy = 0 is the Ising chain (J_y = 0), anisotropy = 1 the XX chain (J_y = J_x)"],
        "workers": 0,
    },
    "fig10-chain": {
        "model": "chain",
        "representations": ["rc"],
        "outputs": ["heat_currents"],
        "parameters": {"delta": 1.0, "t_left": 0.5, "t_right": 1.0, "frequency": 10.0},
        "sweep": [{"parameter": "anisotropy", "values": [0.0, 1.0]},
                  {"parameter": "J", "values": _lin(0.1, 3.0, 10)},
                  {"parameter": "coupling", "values": _lin(0.5, 5.0, 10)}],
        "notes": ["anisotropy = 0 is the Ising chain (J_y = 0), anisotropy = 1 the XX chain (J_y = J_x)"],
        "workers": 0,
    },
}


def preset(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError(f"preset: unknown preset {name!r} (see list-presets)")
    cfg = json.loads(json.dumps(PRESETS[name]))  # deep copy
    cfg["name"] = name
    return cfg
