"""Experiment runner: strict JSON configs in, deterministic CSV/JSON tables out.

Scenarios:
  landauer-spin-chain      exact erasure dynamics against an XY-chain bath
  landauer-random-matrix   exact erasure dynamics against a two-band random bath
  swap-engine              closed-form repeated-swap engine per-cycle table
  engine-error-scaling     instantaneous-swap discrepancy versus bath size

Configs are parsed strictly: unknown keys, missing required fields and
out-of-range values are rejected with path-qualified messages. All applied
defaults are echoed into each table's metadata block, so re-running from the
echoed config reproduces the outputs byte for byte.

Exit codes: 0 success, 2 config error, 3 runtime/physics error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    BOUND_KINDS,
    TIMPANARO_BRANCH_NOTE,
    BoundSeries,
    bound_clausius_1865,
    bound_goold_series,
    bound_landauer_1961,
    bound_reebwolf_2014,
    bound_timpanaro_2020,
)
from .engine import (
    SwapEngineParams,
    cycle_quantities,
    discontinuity_errors,
    run_engine,
)
from .models import (
    COUPLING_VARIANCE_NOTE,
    SYSTEM_LABEL,
    InitialCondition,
    RandomMatrixModel,
    SpinChainModel,
    build_random_matrix,
    build_spin_chain,
    prepare_initial,
    random_matrix_bath_labels,
    spin_chain_bath_labels,
)
from .qdyn import (
    SpectralDecomposition,
    evolve,
    partial_trace,
)
from .thermo import (
    BathSpectrum,
    build_trajectory,
    canonical_relative_entropy,
    energy_coarse_graining,
    entropy_ledger,
    sigma_tilde,
)

SCENARIOS = (
    "landauer-spin-chain",
    "landauer-random-matrix",
    "swap-engine",
    "engine-error-scaling",
)

FORMATS = ("csv", "json")

_MISSING = object()


class ConfigError(ValueError):
    """Config rejection with the offending key path."""

    def __init__(self, path: str, message: str):
        self.path = path or "<root>"
        super().__init__(f"{self.path}: {message}")


class _Section:
    """Strict view over one level of the config tree; unknown keys are fatal."""

    def __init__(self, data: object, path: str = ""):
        if not isinstance(data, dict):
            raise ConfigError(path, "expected a JSON object")
        self._data = dict(data)
        self._path = path

    def _sub(self, key: str) -> str:
        return f"{self._path}.{key}" if self._path else key

    def _pop(self, key: str, default: object = _MISSING) -> object:
        if key in self._data:
            return self._data.pop(key)
        if default is _MISSING:
            raise ConfigError(self._sub(key), "missing required key")
        return default

    def has(self, key: str) -> bool:
        return key in self._data

    def number(
        self,
        key: str,
        default: object = _MISSING,
        minimum: float | None = None,
        strict_minimum: float | None = None,
    ) -> float:
        raw = self._pop(key, default)
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ConfigError(self._sub(key), f"expected a number, got {raw!r}")
        val = float(raw)
        if minimum is not None and val < minimum:
            raise ConfigError(self._sub(key), f"must be >= {minimum}, got {val}")
        if strict_minimum is not None and val <= strict_minimum:
            raise ConfigError(self._sub(key), f"must be > {strict_minimum}, got {val}")
        return val

    def integer(
        self, key: str, default: object = _MISSING, minimum: int | None = None
    ) -> int:
        raw = self._pop(key, default)
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ConfigError(self._sub(key), f"expected an integer, got {raw!r}")
        if minimum is not None and raw < minimum:
            raise ConfigError(self._sub(key), f"must be >= {minimum}, got {raw}")
        return raw

    def string(
        self,
        key: str,
        default: object = _MISSING,
        choices: tuple[str, ...] | None = None,
    ) -> str:
        raw = self._pop(key, default)
        if not isinstance(raw, str):
            raise ConfigError(self._sub(key), f"expected a string, got {raw!r}")
        if choices is not None and raw not in choices:
            raise ConfigError(
                self._sub(key), f"expected one of {list(choices)}, got {raw!r}"
            )
        return raw

    def string_list(
        self,
        key: str,
        default: object = _MISSING,
        choices: tuple[str, ...] | None = None,
    ) -> tuple[str, ...]:
        raw = self._pop(key, default)
        if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
            raise ConfigError(self._sub(key), "expected a list of strings")
        if choices is not None:
            for x in raw:
                if x not in choices:
                    raise ConfigError(
                        self._sub(key), f"expected entries from {list(choices)}, got {x!r}"
                    )
        if len(set(raw)) != len(raw):
            raise ConfigError(self._sub(key), "entries must be unique")
        return tuple(raw)

    def integer_list(
        self, key: str, default: object = _MISSING, minimum: int | None = None
    ) -> tuple[int, ...]:
        raw = self._pop(key, default)
        if not isinstance(raw, list) or not raw:
            raise ConfigError(self._sub(key), "expected a non-empty list of integers")
        out = []
        for x in raw:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ConfigError(self._sub(key), f"expected integers, got {x!r}")
            if minimum is not None and x < minimum:
                raise ConfigError(self._sub(key), f"entries must be >= {minimum}, got {x}")
            out.append(x)
        return tuple(out)

    def section(self, key: str, allow_missing: bool = True) -> "_Section | None":
        if key not in self._data and allow_missing:
            return None
        raw = self._pop(key)
        return _Section(raw, self._sub(key))

    def finish(self) -> None:
        if self._data:
            key = sorted(self._data)[0]
            raise ConfigError(self._sub(key), "unknown key")


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated scenario configuration with all defaults applied.

    ``resolved`` is the JSON-compatible echo of the effective configuration;
    parsing it again yields an identical config.
    """

    scenario: str
    seed: int
    output_dir: str
    formats: tuple[str, ...]
    resolved: dict
    spin_chain: SpinChainModel | None = None
    random_matrix: RandomMatrixModel | None = None
    engine: SwapEngineParams | None = None
    system_state: str | None = None
    beta0: float | None = None
    t_max: float | None = None
    n_points: int | None = None
    bound_kinds: tuple[str, ...] | None = None
    n_bins: int | None = None
    n_cycles: int | None = None
    n_values: tuple[int, ...] | None = None


def _parse_initial(top: _Section) -> tuple[str, float, dict]:
    sec = top.section("initial")
    if sec is None:
        return "maximally_mixed", 4.0, {"system_state": "maximally_mixed", "t0": 0.25}
    state = sec.string(
        "system_state", "maximally_mixed", choices=("maximally_mixed", "excited", "ground")
    )
    has_t0, has_beta0 = sec.has("t0"), sec.has("beta0")
    if has_t0 and has_beta0:
        raise ConfigError(sec._sub("beta0"), "give either t0 or beta0, not both")
    if has_beta0:
        beta0 = sec.number("beta0")
        echo: dict = {"system_state": state, "beta0": beta0}
    else:
        t0 = sec.number("t0", 0.25)
        if t0 == 0.0:
            raise ConfigError(sec._sub("t0"), "t0 must be nonzero (use beta0 for infinite temperature)")
        beta0 = 1.0 / t0
        echo = {"system_state": state, "t0": t0}
    sec.finish()
    return state, beta0, echo


def _parse_time_grid(top: _Section) -> tuple[float, int, dict]:
    sec = top.section("time_grid")
    if sec is None:
        return 10.0, 400, {"t_max": 10.0, "n_points": 400}
    t_max = sec.number("t_max", 10.0, strict_minimum=0.0)
    n_points = sec.integer("n_points", 400, minimum=2)
    sec.finish()
    return t_max, n_points, {"t_max": t_max, "n_points": n_points}


def _parse_coarse_graining(top: _Section, default_bins: int) -> tuple[int | None, dict | None]:
    sec = top.section("coarse_graining")
    if sec is None:
        return None, None
    n_bins = sec.integer("n_bins", default_bins, minimum=1)
    sec.finish()
    return n_bins, {"n_bins": n_bins}


def _parse_engine(top: _Section) -> SwapEngineParams:
    sec = top.section("engine")
    if sec is None:
        return SwapEngineParams()
    params = SwapEngineParams(
        gap_system=sec.number("gap_system", 1.0, strict_minimum=0.0),
        gap_hot=sec.number("gap_hot", 1.5, strict_minimum=0.0),
        t_cold=sec.number("t_cold", 1.0 / 3.0, strict_minimum=0.0),
        t_hot0=sec.number("t_hot0", 1.0, strict_minimum=0.0),
        n_qubits=sec.integer("n_qubits", 100, minimum=1),
    )
    sec.finish()
    return params


def _engine_echo(p: SwapEngineParams) -> dict:
    return {
        "gap_system": p.gap_system,
        "gap_hot": p.gap_hot,
        "t_cold": p.t_cold,
        "t_hot0": p.t_hot0,
        "n_qubits": p.n_qubits,
    }


def parse_config(text: str) -> ExperimentConfig:
    """Validate a JSON config document and apply scenario defaults."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from None

    top = _Section(data)
    scenario = top.string("scenario", choices=SCENARIOS)
    seed = top.integer("seed", 0)

    out_sec = top.section("output")
    if out_sec is None:
        output_dir, formats = "out", ("csv",)
    else:
        output_dir = out_sec.string("directory", "out")
        formats = out_sec.string_list("formats", ["csv"], choices=FORMATS)
        if not formats:
            raise ConfigError("output.formats", "at least one format is required")
        out_sec.finish()

    resolved: dict = {
        "scenario": scenario,
        "seed": seed,
        "output": {"directory": output_dir, "formats": list(formats)},
    }
    common = dict(
        scenario=scenario, seed=seed, output_dir=output_dir, formats=formats
    )

    if scenario == "landauer-spin-chain":
        sec = top.section("model", allow_missing=False)
        model = SpinChainModel(
            n_bath_spins=sec.integer("n_bath_spins", minimum=1),
            field_system=sec.number("field_system", 1.0),
            field_bath=sec.number("field_bath", 1.0),
            coupling_chain=sec.number("coupling_chain", 1.0),
            coupling_sb=sec.number("coupling_sb", 1.0),
        )
        sec.finish()
        state, beta0, initial_echo = _parse_initial(top)
        t_max, n_points, grid_echo = _parse_time_grid(top)
        kinds = top.string_list("bounds", list(BOUND_KINDS), choices=BOUND_KINDS)
        default_bins = math.ceil(math.sqrt(2**model.n_bath_spins))
        n_bins, cg_echo = _parse_coarse_graining(top, default_bins)
        top.finish()
        resolved.update(
            model={
                "n_bath_spins": model.n_bath_spins,
                "field_system": model.field_system,
                "field_bath": model.field_bath,
                "coupling_chain": model.coupling_chain,
                "coupling_sb": model.coupling_sb,
            },
            initial=initial_echo,
            time_grid=grid_echo,
            bounds=list(kinds),
        )
        if cg_echo is not None:
            resolved["coarse_graining"] = cg_echo
        return ExperimentConfig(
            **common,
            resolved=resolved,
            spin_chain=model,
            system_state=state,
            beta0=beta0,
            t_max=t_max,
            n_points=n_points,
            bound_kinds=kinds,
            n_bins=n_bins,
        )

    if scenario == "landauer-random-matrix":
        sec = top.section("model")
        if sec is None:
            model = RandomMatrixModel(seed=seed)
        else:
            model = RandomMatrixModel(
                eps0=sec.number("eps0", 0.0),
                eps1=sec.number("eps1", 1.0),
                width=sec.number("width", 1.0, strict_minimum=0.0),
                v0=sec.integer("v0", 10, minimum=1),
                v1=sec.integer("v1", 100, minimum=1),
                coupling=sec.number("coupling", 0.3),
                coupling_variance=sec.number(
                    "coupling_variance", 1.0, strict_minimum=0.0
                ),
                seed=seed,
            )
            sec.finish()
        state, beta0, initial_echo = _parse_initial(top)
        t_max, n_points, grid_echo = _parse_time_grid(top)
        kinds = top.string_list("bounds", list(BOUND_KINDS), choices=BOUND_KINDS)
        n_bins, cg_echo = _parse_coarse_graining(top, default_bins=4)
        top.finish()
        resolved.update(
            model={
                "eps0": model.eps0,
                "eps1": model.eps1,
                "width": model.width,
                "v0": model.v0,
                "v1": model.v1,
                "coupling": model.coupling,
                "coupling_variance": model.coupling_variance,
            },
            initial=initial_echo,
            time_grid=grid_echo,
            bounds=list(kinds),
        )
        if cg_echo is not None:
            resolved["coarse_graining"] = cg_echo
        return ExperimentConfig(
            **common,
            resolved=resolved,
            random_matrix=model,
            system_state=state,
            beta0=beta0,
            t_max=t_max,
            n_points=n_points,
            bound_kinds=kinds,
            n_bins=n_bins,
        )

    if scenario == "swap-engine":
        params = _parse_engine(top)
        n_cycles = top.integer("n_cycles", params.n_qubits, minimum=1)
        if n_cycles > params.n_qubits:
            raise ConfigError(
                "n_cycles", f"must be <= engine.n_qubits = {params.n_qubits}"
            )
        top.finish()
        resolved.update(engine=_engine_echo(params), n_cycles=n_cycles)
        return ExperimentConfig(
            **common, resolved=resolved, engine=params, n_cycles=n_cycles
        )

    # engine-error-scaling: n_qubits is replaced per swept N
    params = _parse_engine(top)
    n_values = top.integer_list("n_values", [25, 50, 100, 200], minimum=2)
    top.finish()
    resolved.update(engine=_engine_echo(params), n_values=list(n_values))
    return ExperimentConfig(
        **common, resolved=resolved, engine=params, n_values=n_values
    )


@dataclass(frozen=True)
class OutputTable:
    """Named rectangular result with a self-describing metadata block."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    metadata: dict

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(
                    f"table {self.name!r} row {i} has {len(row)} fields, "
                    f"expected {len(self.columns)}"
                )


def _metadata(cfg: ExperimentConfig, notes: list[str]) -> dict:
    return {
        "artifact_version": __version__,
        "config": cfg.resolved,
        "notes": sorted(notes),
    }


def _bound_column(series: BoundSeries) -> list[float | None]:
    return [
        float(v) if d else None for v, d in zip(series.values, series.defined)
    ]


def _run_landauer(cfg: ExperimentConfig) -> list[OutputTable]:
    if cfg.scenario == "landauer-spin-chain":
        h_sys, h_bath, v_int, space = build_spin_chain(cfg.spin_chain)
        bath_labels = spin_chain_bath_labels(cfg.spin_chain.n_bath_spins)
    else:
        model = replace(cfg.random_matrix, seed=cfg.seed)
        h_sys, h_bath, v_int, space = build_random_matrix(model)
        bath_labels = random_matrix_bath_labels()

    spec = BathSpectrum.from_embedded(h_bath, bath_labels)
    ic = InitialCondition(system_state=cfg.system_state, bath_beta0=cfg.beta0)
    rho0 = prepare_initial(ic, h_sys, spec)
    h_total = h_sys + h_bath + v_int
    times = np.linspace(0.0, cfg.t_max, cfg.n_points)
    states = evolve(rho0, h_total, times)
    traj = build_trajectory(states, times, spec, keep_system=(SYSTEM_LABEL,))

    beta0 = float(traj.beta[0])
    d_ss = traj.S_S - traj.S_S[0]
    sigma_series = d_ss + (traj.S_B_eff - traj.S_B_eff[0])
    sigma_prime_series = d_ss - beta0 * traj.Q
    divergence_series = np.array(
        [canonical_relative_entropy(spec, float(b), beta0) for b in traj.beta]
    )
    with np.errstate(divide="ignore"):
        temperature = np.where(traj.beta != 0.0, 1.0 / traj.beta, np.inf)

    bound_columns: dict[str, list[float | None]] = {}
    for kind in cfg.bound_kinds:
        if kind == "landauer1961":
            series = bound_landauer_1961(traj)
        elif kind == "clausius1865":
            series = bound_clausius_1865(traj, spec)
        elif kind == "reebwolf2014":
            series = bound_reebwolf_2014(traj, spec.dim)
        elif kind == "goold2015":
            series = bound_goold_series(
                SpectralDecomposition.from_operator(h_total),
                partial_trace(rho0, (SYSTEM_LABEL,)),
                partial_trace(rho0, bath_labels),
                beta0,
                times,
                space,
            )
        else:
            series = bound_timpanaro_2020(traj, spec)
        bound_columns[kind] = _bound_column(series)

    columns = (
        "t",
        "E_B",
        "beta",
        "T",
        "Q",
        "S_S",
        "Sigma",
        "Sigma_prime",
        "divergence",
    ) + tuple(f"bound_{kind}" for kind in cfg.bound_kinds)
    rows = tuple(
        (
            float(traj.times[i]),
            float(traj.E_B[i]),
            float(traj.beta[i]),
            float(temperature[i]),
            float(traj.Q[i]),
            float(traj.S_S[i]),
            float(sigma_series[i]),
            float(sigma_prime_series[i]),
            float(divergence_series[i]),
        )
        + tuple(bound_columns[kind][i] for kind in cfg.bound_kinds)
        for i in range(traj.n_points)
    )

    notes = [COUPLING_VARIANCE_NOTE] if cfg.random_matrix is not None else []
    if "timpanaro2020" in cfg.bound_kinds:
        notes.append(TIMPANARO_BRANCH_NOTE)
    meta = _metadata(cfg, notes)

    ledger = entropy_ledger(traj, spec)
    if cfg.n_bins is not None:
        cg = energy_coarse_graining(spec, cfg.n_bins)
        rho_b_final = partial_trace(states[-1], bath_labels)
        ledger = replace(
            ledger, sigma_tilde=sigma_tilde(traj, rho_b_final, cg, spec)
        )
    summary = OutputTable(
        name="summary",
        columns=("sigma", "sigma_prime", "divergence", "w_ext_max", "sigma_tilde"),
        rows=(
            (
                ledger.sigma,
                ledger.sigma_prime,
                ledger.divergence,
                ledger.w_ext_max,
                ledger.sigma_tilde,
            ),
        ),
        metadata=meta,
    )
    trajectory = OutputTable(
        name="trajectory", columns=columns, rows=rows, metadata=meta
    )
    return [trajectory, summary]


def _run_swap_engine(cfg: ExperimentConfig) -> list[OutputTable]:
    params = cfg.engine
    traj = run_engine(params, cfg.n_cycles)
    work, q_hot, q_cold, _ = cycle_quantities(params)
    rows = tuple(
        (
            k + 1,
            (k + 1) * work,
            (k + 1) * q_hot,
            (k + 1) * q_cold,
            traj.cycles[k].t_hot_after,
            float(traj.sigma[k]),
            float(traj.sigma_prime[k]),
            float(traj.eta[k]),
            float(traj.eta_prime[k]),
        )
        for k in range(traj.n_cycles)
    )
    table = OutputTable(
        name="cycles",
        columns=(
            "n",
            "W_tot",
            "Q_H_tot",
            "Q_C_tot",
            "T_H",
            "Sigma",
            "Sigma_prime",
            "eta",
            "eta_prime",
        ),
        rows=rows,
        metadata=_metadata(cfg, []),
    )
    return [table]


def _run_error_scaling(cfg: ExperimentConfig) -> list[OutputTable]:
    points = discontinuity_errors(cfg.engine, list(cfg.n_values))
    rows = tuple((pt.n_qubits, pt.e_abs, pt.e_rel) for pt in points)
    table = OutputTable(
        name="error_scaling",
        columns=("N", "e_abs", "e_rel"),
        rows=rows,
        metadata=_metadata(cfg, []),
    )
    return [table]


def run_scenario(cfg: ExperimentConfig) -> list[OutputTable]:
    """Execute the configured scenario; outputs are deterministic given config+seed."""
    if cfg.scenario in ("landauer-spin-chain", "landauer-random-matrix"):
        return _run_landauer(cfg)
    if cfg.scenario == "swap-engine":
        return _run_swap_engine(cfg)
    return _run_error_scaling(cfg)


def _csv_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    x = float(value)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_cell(value: object) -> object:
    if value is None:
        return None
    if isinstance(value, bool) or isinstance(value, int):
        return value
    x = float(value)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def emit(tables: list[OutputTable], cfg: ExperimentConfig) -> list[Path]:
    """Write one file per table per requested format; returns the paths."""
    out_dir = Path(cfg.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc

    written: list[Path] = []
    for table in tables:
        if "csv" in cfg.formats:
            path = out_dir / f"{table.name}.csv"
            try:
                with path.open("w", newline="") as fh:
                    writer = csv.writer(fh, lineterminator="\n")
                    writer.writerow(table.columns)
                    for row in table.rows:
                        writer.writerow([_csv_cell(v) for v in row])
            except OSError as exc:
                raise OSError(f"failed writing {path}: {exc}") from exc
            written.append(path)
        if "json" in cfg.formats:
            path = out_dir / f"{table.name}.json"
            payload = {
                "name": table.name,
                "metadata": table.metadata,
                "columns": list(table.columns),
                "rows": [
                    {col: _json_cell(v) for col, v in zip(table.columns, row)}
                    for row in table.rows
                ],
            }
            try:
                path.write_text(
                    json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
                    + "\n"
                )
            except OSError as exc:
                raise OSError(f"failed writing {path}: {exc}") from exc
            written.append(path)
    return written


def _with_overrides(
    cfg: ExperimentConfig, args: argparse.Namespace
) -> ExperimentConfig:
    """Fold CLI flags into the config and its resolved echo."""
    resolved = json.loads(json.dumps(cfg.resolved))
    updates: dict = {}
    if args.seed is not None:
        updates["seed"] = args.seed
        resolved["seed"] = args.seed
    if args.output_dir is not None:
        updates["output_dir"] = str(args.output_dir)
        resolved["output"]["directory"] = str(args.output_dir)
    if args.format:
        formats = tuple(dict.fromkeys(args.format))
        updates["formats"] = formats
        resolved["output"]["formats"] = list(formats)
    if not updates:
        return cfg
    return replace(cfg, resolved=resolved, **updates)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finbath",
        description="Finite-bath entropy production experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario config")
    run_p.add_argument("config", type=Path, help="path to a JSON config")
    run_p.add_argument("--output-dir", type=Path, default=None)
    run_p.add_argument("--seed", type=int, default=None, help="overrides config seed")
    run_p.add_argument(
        "--format", action="append", choices=FORMATS, default=None
    )

    val_p = sub.add_parser("validate", help="parse and validate a config")
    val_p.add_argument("config", type=Path)

    sub.add_parser("list-scenarios", help="print the available scenarios")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-scenarios":
        for name in SCENARIOS:
            print(name)
        return 0

    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print(f"ok: {cfg.scenario}")
        return 0

    cfg = _with_overrides(cfg, args)
    try:
        tables = run_scenario(cfg)
        paths = emit(tables, cfg)
    except Exception as exc:  # noqa: BLE001 - runtime/physics failures map to exit 3
        print(f"error [{cfg.scenario}]: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
