"""Command line driver: JSON config in, CSV and JSON artefacts out.

A run config names a model (diffusion1d, diffusion2d, wave1d), a patch grid,
a diffusivity profile (inline values or a seeded log-normal draw), a coupling
scheme, and a task.  Tasks:

    eigen       full spectrum, macro/micro split, gap and kernel diagnostics
    simulate    time integration, trajectory CSV with physical positions
    homogenize  K2, K4, beta of the profile plus slow-branch samples
    sweep       error tables against the spectral reference over coupling
                order or patch count (fixed microscale spacing)
    check       operator health report, optionally consistency against the
                assembled full lattice when the grid has one (r = 1)

Exit codes: 0 success, 1 malformed config (schema or cross-field semantics),
2 numerical precondition failure (incompatible single-phase assembly, lost
symmetry, branch separation, unstable step and the like).

All floating point output is formatted with %.17g and JSON keys are sorted,
so identical configs reproduce artefacts byte for byte.  Sweep points can be
evaluated concurrently: set the PATCHTOOTH_WORKERS environment variable (or
the "workers" config key); results are merged in config order regardless of
completion order.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import geometry
from .assembly import (
    assemble_patch_1d,
    assemble_patch_2d,
    assemble_wave,
    symmetry_defect,
)
from .coupling import CouplingSpec, weights_for
from .homogenize import (
    BranchSeparationError,
    FitResidualError,
    extract_coefficients,
    slow_branch,
)
from .microscale import (
    DiffusivityProfile1D,
    DiffusivityProfile2D,
    full_lattice_operator_1d,
    full_lattice_operator_2d,
    random_lognormal_profile,
    random_lognormal_profile_2d,
)
from .spectra import (
    SymmetryPreconditionError,
    convergence_slope,
    eigen_general,
    eigen_symmetric,
    error_table,
)
from .timestep import StabilityError, StateVector, conserved_mass, evolve_exact, evolve_rk4


class ConfigError(ValueError):
    """Config is structurally valid JSON but semantically unusable."""


_GRID_1D = {
    "type": "object",
    "properties": {
        "L": {"type": "number", "exclusiveMinimum": 0},
        "N": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
    },
    "required": ["L", "N", "n", "r"],
    "additionalProperties": False,
}

_POSITIVE_ROW = {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1}

_PROFILE = {
    "type": "object",
    "oneOf": [
        {
            "properties": {
                "kind": {"const": "inline"},
                "values": _POSITIVE_ROW,
                "period": {"type": "integer", "minimum": 1},
            },
            "required": ["kind", "values"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "kind": {"const": "inline"},
                "kx": {"type": "array", "items": _POSITIVE_ROW, "minItems": 1},
                "ky": {"type": "array", "items": _POSITIVE_ROW, "minItems": 1},
                "periods": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 2,
                    "maxItems": 2,
                },
            },
            "required": ["kind", "kx", "ky"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "kind": {"const": "lognormal"},
                "period": {"type": "integer", "minimum": 1},
                "periods": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 2,
                    "maxItems": 2,
                },
                "sigma": {"type": "number", "minimum": 0},
                "seed": {"type": "integer", "minimum": 0},
            },
            "required": ["kind", "sigma", "seed"],
            "additionalProperties": False,
        },
    ],
}

_INITIAL = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["sine", "constant", "random"]},
        "mode": {"type": "integer", "minimum": 0},
        "modes": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 2,
            "maxItems": 2,
        },
        "amplitude": {"type": "number"},
        "offset": {"type": "number"},
        "value": {"type": "number"},
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "model": {"enum": ["diffusion1d", "diffusion2d", "wave1d"]},
        "grid": {
            "oneOf": [
                _GRID_1D,
                {
                    "type": "object",
                    "properties": {"x": _GRID_1D, "y": _GRID_1D},
                    "required": ["x", "y"],
                    "additionalProperties": False,
                },
            ]
        },
        "profile": _PROFILE,
        "coupling": {
            "type": "object",
            "properties": {
                "scheme": {"enum": ["spectral", "lagrangian"]},
                "order": {"type": "integer", "minimum": 1},
            },
            "required": ["scheme"],
            "additionalProperties": False,
        },
        "ensemble": {"type": "boolean"},
        "allow_incompatible": {"type": "boolean"},
        "epsilon": {"type": "number", "minimum": 0},
        "task": {"enum": ["eigen", "simulate", "homogenize", "sweep", "check"]},
        "eigen": {
            "type": "object",
            "properties": {"n_macro": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        "simulate": {
            "type": "object",
            "properties": {
                "integrator": {"enum": ["exact", "rk4"]},
                "t_final": {"type": "number", "exclusiveMinimum": 0},
                "snapshots": {"type": "integer", "minimum": 1},
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "steps": {"type": "integer", "minimum": 1},
                "stride": {"type": "integer", "minimum": 1},
                "allow_unstable": {"type": "boolean"},
                "initial": _INITIAL,
            },
            "additionalProperties": False,
        },
        "homogenize": {
            "type": "object",
            "properties": {
                "node_spacing": {"type": "number", "exclusiveMinimum": 0},
                "node_count": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
        },
        "sweep": {
            "type": "object",
            "properties": {
                "parameter": {"enum": ["order", "patches"]},
                "values": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 1,
                },
                "modes": {"type": "integer", "minimum": 1},
            },
            "required": ["parameter", "values"],
            "additionalProperties": False,
        },
        "out": {"type": "string"},
        "workers": {"type": "integer", "minimum": 1},
    },
    "required": ["model", "grid", "profile", "coupling", "task"],
    "additionalProperties": False,
}


def _fmt(x) -> str:
    return "%.17g" % float(x)


def _validate_config(config: dict) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: len(e.absolute_path))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        path = "".join(f"[{part!r}]" for part in best.absolute_path) or "(top level)"
        raise ConfigError(f"at {path}: {best.message}")

    model = config["model"]
    grid_is_2d = "x" in config["grid"]
    if (model == "diffusion2d") != grid_is_2d:
        raise ConfigError(
            f"model {model} and grid shape disagree: "
            f"{'2D' if grid_is_2d else '1D'} grid supplied"
        )
    profile = config["profile"]
    profile_is_2d = "kx" in profile or "periods" in profile
    if (model == "diffusion2d") != profile_is_2d:
        raise ConfigError(
            f"model {model} and profile shape disagree: "
            f"{'2D' if profile_is_2d else '1D'} profile supplied"
        )
    if profile["kind"] == "lognormal" and not profile_is_2d and "period" not in profile:
        raise ConfigError("a 1D lognormal profile needs a period")
    if config["coupling"]["scheme"] == "lagrangian" and "order" not in config["coupling"]:
        raise ConfigError("lagrangian coupling needs an order")
    if config["coupling"]["scheme"] == "spectral" and "order" in config["coupling"]:
        raise ConfigError("spectral coupling takes no order")

    task = config["task"]
    if task == "homogenize" and model != "diffusion1d":
        raise ConfigError("homogenize works on the 1D diffusion symbol only")
    if task == "sweep":
        if model == "wave1d":
            raise ConfigError("sweep compares symmetric spectra; wave model unsupported")
        if "sweep" not in config:
            raise ConfigError("the sweep task needs a sweep section")
        sweep = config["sweep"]
        if sweep["parameter"] == "order" and config["coupling"]["scheme"] != "spectral":
            raise ConfigError(
                "an order sweep varies the Lagrangian order against the "
                "spectral reference; set coupling.scheme to spectral"
            )
        if sweep["parameter"] == "patches" and model != "diffusion1d":
            raise ConfigError("patch-count sweeps are 1D only")
    if task == "simulate":
        sim = config.get("simulate", {})
        integrator = sim.get("integrator", "rk4" if model == "wave1d" else "exact")
        if model == "wave1d" and integrator == "exact":
            raise ConfigError("the wave system is not symmetric; use the rk4 integrator")
        if integrator == "exact" and "t_final" not in sim:
            raise ConfigError("exact integration needs t_final")
        if integrator == "rk4" and not ("dt" in sim and "steps" in sim):
            raise ConfigError("rk4 integration needs dt and steps")


def _build_profile(config: dict):
    spec = config["profile"]
    if spec["kind"] == "inline":
        if "kx" in spec:
            return DiffusivityProfile2D.from_json(spec)
        return DiffusivityProfile1D.from_json(spec)
    if "periods" in spec:
        px, py = spec["periods"]
        return random_lognormal_profile_2d(px, py, spec["sigma"], spec["seed"])
    return random_lognormal_profile(spec["period"], spec["sigma"], spec["seed"])


def _build_grid(config: dict):
    g = config["grid"]
    if "x" in g:
        return geometry.build_grid_2d(
            g["x"]["L"], g["x"]["N"], g["x"]["n"], g["x"]["r"],
            g["y"]["L"], g["y"]["N"], g["y"]["n"], g["y"]["r"],
        )
    return geometry.build_grid_1d(g["L"], g["N"], g["n"], g["r"])


def _build_coupling(config: dict) -> CouplingSpec:
    c = config["coupling"]
    return CouplingSpec(scheme=c["scheme"], order=c.get("order"))


def _assemble(config: dict):
    profile = _build_profile(config)
    grid = _build_grid(config)
    coupling = _build_coupling(config)
    ens = bool(config.get("ensemble", False))
    allow = bool(config.get("allow_incompatible", False))
    if config["model"] == "diffusion2d":
        op = assemble_patch_2d(grid, profile, coupling, ensemble=ens,
                               allow_incompatible=allow)
    else:
        op = assemble_patch_1d(grid, profile, coupling, ensemble=ens,
                               allow_incompatible=allow)
    if config["model"] == "wave1d":
        op = assemble_wave(op, epsilon=float(config.get("epsilon", 0.02)))
    return op


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_eigen_csv(path: Path, values: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "real", "imag", "magnitude"])
        for rank, lam in enumerate(values, start=1):
            writer.writerow(
                [rank, _fmt(np.real(lam)), _fmt(np.imag(lam)), _fmt(np.abs(lam))]
            )


def _task_eigen(config: dict, op, out: Path) -> None:
    n_macro = config.get("eigen", {}).get("n_macro")
    if config["model"] == "wave1d":
        report = eigen_general(op, n_macro=n_macro)
        extra = {"max_real_part": float(np.max(np.real(report.eigenvalues)))}
    else:
        report = eigen_symmetric(op, n_macro=n_macro)
        extra = {"max_eigenvalue": float(np.max(np.real(report.eigenvalues)))}
    sym = symmetry_defect(op)
    _write_eigen_csv(out / "eigenvalues.csv", report.eigenvalues)
    _write_json(out / "summary.json", {
        "model": config["model"],
        "dimension": op.dimension,
        "n_macro": int(report.n_macro),
        "zero_mode_magnitude": report.zero_mode_magnitude,
        "gap_ratio": report.gap_ratio,
        "symmetry": {"defect": sym.defect, "scale": sym.scale, "relative": sym.relative},
        **extra,
    })


def _initial_values(init: dict, positions: np.ndarray, L: float) -> np.ndarray:
    kind = init.get("kind", "sine")
    if kind == "constant":
        return np.full(positions.size, float(init.get("value", 1.0)))
    if kind == "random":
        rng = np.random.default_rng(int(init.get("seed", 0)))
        return rng.standard_normal(positions.size)
    amplitude = float(init.get("amplitude", 1.0))
    offset = float(init.get("offset", 0.0))
    mode = int(init.get("mode", 1))
    return offset + amplitude * np.sin(2.0 * np.pi * mode * positions / L)


def _positions_1d(grid: geometry.PatchGrid1D) -> np.ndarray:
    return np.concatenate([grid.positions(I) for I in range(grid.N)])


def _initial_state(config: dict, op) -> StateVector:
    init = config.get("simulate", {}).get("initial", {"kind": "sine"})
    layout = op.layout
    base = layout["base"] if layout["kind"] == "wave" else layout
    members = base["members"]
    if base["kind"] == "diffusion2d":
        gx, gy = op.grid.x, op.grid.y
        if init.get("kind", "sine") == "sine":
            mx, my = init.get("modes", (1, 1))
            amplitude = float(init.get("amplitude", 1.0))
            offset = float(init.get("offset", 0.0))
            per_member = np.empty(gy.N * gx.N * gx.n * gy.n)
            for J in range(gy.N):
                yv = gy.positions(J)
                for I in range(gx.N):
                    xv = gx.positions(I)
                    block = offset + amplitude * np.outer(
                        np.sin(2 * np.pi * my * yv / gy.L),
                        np.sin(2 * np.pi * mx * xv / gx.L),
                    )
                    start = (J * gx.N + I) * gx.n * gy.n
                    per_member[start : start + gx.n * gy.n] = block.reshape(-1)
        else:
            flat = np.arange(gy.N * gx.N * gx.n * gy.n, dtype=float)
            per_member = _initial_values(init, flat, max(flat.size, 1))
        u = np.tile(per_member, members)
    else:
        grid = op.grid
        pos = _positions_1d(grid)
        per_member = _initial_values(init, pos, grid.L)
        u = np.tile(per_member, members)
    if layout["kind"] == "wave":
        u = np.concatenate([u, np.zeros_like(u)])
    return StateVector(values=u, time=0.0)


def _trajectory_rows(op, traj, stride: int):
    layout = op.layout
    is_wave = layout["kind"] == "wave"
    base = layout["base"] if is_wave else layout
    members = base["members"]
    ensemble = base["ensemble"]
    if base["kind"] == "diffusion2d":
        gx, gy = op.grid.x, op.grid.y
        header = ["t"] + (["member"] if ensemble else []) + [
            "I", "J", "i", "j", "x", "y", "value",
        ]
        xs = [gx.positions(I) for I in range(gx.N)]
        ys = [gy.positions(J) for J in range(gy.N)]
        yield header
        for snap in range(0, traj.times.size, stride):
            t = traj.times[snap]
            state = traj.states[snap]
            for e in range(members):
                for J in range(gy.N):
                    for I in range(gx.N):
                        for j in range(1, gy.n + 1):
                            for i in range(1, gx.n + 1):
                                idx = ((e * gy.N + J) * gx.N + I) * gx.n * gy.n + (
                                    j - 1
                                ) * gx.n + (i - 1)
                                row = [_fmt(t)]
                                if ensemble:
                                    row.append(e)
                                row += [I, J, i, j, _fmt(xs[I][i - 1]),
                                        _fmt(ys[J][j - 1]), _fmt(state[idx])]
                                yield row
    else:
        grid = op.grid
        header = ["t"] + (["field"] if is_wave else []) + (
            ["member"] if ensemble else []
        ) + ["patch", "interior", "position", "value"]
        pos = [grid.positions(I) for I in range(grid.N)]
        half = layout["half"] if is_wave else None
        yield header
        for snap in range(0, traj.times.size, stride):
            t = traj.times[snap]
            state = traj.states[snap]
            fields = (("u", state[:half]), ("v", state[half:])) if is_wave else (
                (None, state),
            )
            for name, vec in fields:
                for e in range(members):
                    for I in range(grid.N):
                        for i in range(1, grid.n + 1):
                            idx = (e * grid.N + I) * grid.n + (i - 1)
                            row = [_fmt(t)]
                            if is_wave:
                                row.append(name)
                            if ensemble:
                                row.append(e)
                            row += [I, i, _fmt(pos[I][i - 1]), _fmt(vec[idx])]
                            yield row


def _task_simulate(config: dict, op, out: Path) -> None:
    sim = config.get("simulate", {})
    integrator = sim.get("integrator", "rk4" if config["model"] == "wave1d" else "exact")
    state = _initial_state(config, op)
    if integrator == "exact":
        t_final = float(sim["t_final"])
        snapshots = int(sim.get("snapshots", 10))
        times = np.linspace(0.0, t_final, snapshots + 1)
        traj = evolve_exact(op, state, times)
    else:
        traj = evolve_rk4(
            op, state, float(sim["dt"]), int(sim["steps"]),
            allow_unstable=bool(sim.get("allow_unstable", False)),
        )
    stride = int(sim.get("stride", 1))
    with open(out / "trajectory.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in _trajectory_rows(op, traj, stride):
            writer.writerow(row)
    sums, drift = conserved_mass(traj)
    _write_json(out / "summary.json", {
        "model": config["model"],
        "integrator": integrator,
        "snapshots": int(traj.times.size),
        "initial_mass": float(sums[0]),
        "mass_drift": drift,
        "final_time": float(traj.times[-1]),
    })


def _task_homogenize(config: dict, op, out: Path) -> None:
    params = config.get("homogenize", {})
    profile = op.profile
    d = op.grid.d
    coeffs = extract_coefficients(
        profile, d,
        node_spacing=float(params.get("node_spacing", 0.02)),
        node_count=int(params.get("node_count", 8)),
    )
    _write_json(out / "homogenize.json", {
        "K2": coeffs.K2,
        "K4": coeffs.K4,
        "beta": coeffs.beta,
        "d": coeffs.d,
        "fit_residual": coeffs.fit_residual,
    })
    spacing = float(params.get("node_spacing", 0.02))
    count = int(params.get("node_count", 8))
    with open(out / "slow_branch.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "eigenvalue"])
        for m in range(1, count + 1):
            k = spacing * m
            writer.writerow([_fmt(k), _fmt(slow_branch(profile, k))])


def _sweep_point(config: dict, parameter: str, value: int, modes: int):
    base_grid = _build_grid(config)
    profile = _build_profile(config)
    ens = bool(config.get("ensemble", False))
    if parameter == "order":
        grid = base_grid
        test_coupling = CouplingSpec(scheme="lagrangian", order=value)
    else:
        r = geometry.ratio_for_spacing(base_grid.L, value, base_grid.n, base_grid.d)
        grid = geometry.build_grid_1d(base_grid.L, value, base_grid.n, r)
        test_coupling = _build_coupling(config)
    assemble = assemble_patch_2d if config["model"] == "diffusion2d" else assemble_patch_1d
    test_op = assemble(grid, profile, test_coupling, ensemble=ens)
    ref_op = assemble(grid, profile, CouplingSpec(scheme="spectral"), ensemble=ens)
    table = error_table(eigen_symmetric(test_op), eigen_symmetric(ref_op), modes)
    return list(table.relative_errors)


def _task_sweep(config: dict, op, out: Path) -> None:
    sweep = config["sweep"]
    parameter = sweep["parameter"]
    values = list(sweep["values"])
    modes = int(sweep.get("modes", 3))
    workers = int(os.environ.get("PATCHTOOTH_WORKERS", config.get("workers", 1)))

    def point(value):
        return _sweep_point(config, parameter, value, modes)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(point, values))
    else:
        rows = [point(v) for v in values]
    with open(out / "sweep.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([parameter] + [f"err_mode_{k}" for k in range(1, modes + 1)])
        for value, errs in zip(values, rows):
            writer.writerow([value] + [_fmt(e) for e in errs])
    summary = {"parameter": parameter, "values": values, "modes": modes}
    if parameter == "patches" and len(values) >= 3:
        slopes = []
        for k in range(modes):
            errs = [rows[i][k] for i in range(len(values))]
            if all(e > 0 for e in errs):
                slopes.append(convergence_slope(values, errs))
            else:
                slopes.append(None)
        summary["slopes"] = slopes
    _write_json(out / "summary.json", summary)


def _full_lattice_reference(config: dict, op):
    """Assembled full-lattice counterpart, or (None, reason) if there is none."""
    base = op.layout
    if base["kind"] == "wave":
        return None, "full-lattice comparison is defined for diffusion models"
    if base["ensemble"]:
        return None, "ensemble runs have no single full-lattice counterpart"
    if base["kind"] == "diffusion2d":
        gx, gy = op.grid.x, op.grid.y
        if not (gx.r == 1.0 and gy.r == 1.0):
            return None, "patches only tile the lattice at r = 1"
        shape = (gx.N * gx.n, gy.N * gy.n)
        if shape[0] * shape[1] > 4096:
            return None, f"full lattice {shape} too large for a dense comparison"
        return (
            full_lattice_operator_2d(op.profile, shape, (gx.d, gy.d)),
            None,
        )
    grid = op.grid
    if grid.r != 1.0:
        return None, "patches only tile the lattice at r = 1"
    M = grid.N * grid.n
    if M > 4096:
        return None, f"full lattice of {M} points too large for a dense comparison"
    return full_lattice_operator_1d(op.profile, M, grid.d), None


def _task_check(config: dict, op, out: Path) -> None:
    sym = symmetry_defect(op)
    dim = op.dimension
    if op.layout["kind"] == "wave":
        half = op.layout["half"]
        kernel_vec = np.concatenate([np.ones(half), np.zeros(half)])
    else:
        kernel_vec = np.ones(dim)
    kernel_residual = float(np.max(np.abs(op.matrix @ kernel_vec)))
    payload = {
        "model": config["model"],
        "dimension": dim,
        "symmetry": {"defect": sym.defect, "scale": sym.scale, "relative": sym.relative},
        "kernel_residual": kernel_residual,
        "diagnostics": [
            list(item) for item in op.layout.get("base", op.layout).get("diagnostics", [])
        ],
    }
    if op.layout["kind"] == "wave":
        report = eigen_general(op)
        payload["max_real_part"] = float(np.max(np.real(report.eigenvalues)))
        payload["zero_mode_magnitude"] = report.zero_mode_magnitude
    elif sym.relative <= 1e-10:
        report = eigen_symmetric(op)
        payload["max_eigenvalue"] = float(np.max(np.real(report.eigenvalues)))
        payload["zero_mode_magnitude"] = report.zero_mode_magnitude
        payload["gap_ratio"] = report.gap_ratio
        full, reason = _full_lattice_reference(config, op)
        if full is None:
            payload["consistency"] = {"available": False, "reason": reason}
        else:
            patch_vals = np.sort(np.real(report.eigenvalues))
            full_vals = np.sort(np.linalg.eigvalsh(full.matrix))
            scale = float(np.max(np.abs(full_vals)))
            # The denominator floor keeps the kernel rows from reading
            # round-off noise as relative error.
            err = float(
                np.max(np.abs(patch_vals - full_vals) / np.maximum(np.abs(full_vals), 1e-9 * scale))
            )
            payload["consistency"] = {"available": True, "max_relative_error": err}
    else:
        payload["note"] = (
            "operator is not symmetric; spectral diagnostics skipped "
            "(rerun without allow_incompatible for a usable operator)"
        )
    _write_json(out / "check.json", payload)


_TASKS = {
    "eigen": _task_eigen,
    "simulate": _task_simulate,
    "homogenize": _task_homogenize,
    "sweep": _task_sweep,
    "check": _task_check,
}


def run(config: dict, outdir=None) -> int:
    """Validate a config, execute its task, write artefacts; returns exit code."""
    try:
        _validate_config(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    out = Path(outdir if outdir is not None else config.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    try:
        op = _assemble(config)
        _TASKS[config["task"]](config, op, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (
        SymmetryPreconditionError,
        BranchSeparationError,
        FitResidualError,
        StabilityError,
        ValueError,
        RuntimeError,
    ) as exc:
        print(f"numerical precondition failed: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="patchtooth",
        description="Self-adjoint patch scheme for heterogeneous lattice diffusion.",
    )
    parser.add_argument("--config", required=True, help="path to a JSON run config")
    parser.add_argument("--out", default=None, help="output directory (default: config's 'out' or '.')")
    parser.add_argument(
        "--task", default=None,
        choices=["eigen", "simulate", "homogenize", "sweep", "check"],
        help="override the task named in the config",
    )
    args = parser.parse_args(argv)
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 1
    if args.task is not None:
        config = dict(config)
        config["task"] = args.task
    return run(config, outdir=args.out)


if __name__ == "__main__":
    sys.exit(main())
