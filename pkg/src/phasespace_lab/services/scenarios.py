"""Scenario registry: load configs, dispatch to runners, write results."""

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import structlog
import yaml
from joblib import Parallel, delayed
from pydantic import ValidationError

from phasespace_lab.config import settings
from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import Grid1D, PhaseGrid, PhasePoint
from phasespace_lab.models.reports import AscentConfig, AscentReport, CenterTrajectory, QuadSpec
from phasespace_lab.models.scenario import MaskSpec, ResultRow, RunResult, Scenario, ScenarioConfig
from phasespace_lab.models.signals import Signal
from phasespace_lab.services import optimize
from phasespace_lab.services.concentration import (
    antipodal_residual,
    concentration_value,
    correlation_proxy,
    default_bound_threshold,
    field_norm,
    interference_block,
    interference_limit_prediction,
    lieb_constant,
    lp_norm,
    surviving_pair_graph,
    visibility_constant,
)
from phasespace_lab.services.phase_space import (
    born_jordan,
    cross_wigner,
    polarization_residual,
    tau_wigner,
    wigner,
    wigner_covariance_phase,
)
from phasespace_lab.services.signals import (
    gaussian,
    guard_check,
    hermite,
    normalize,
    packet_fits,
    random_signal,
    tf_shift,
)
from phasespace_lab.utils.constants import (
    BJ_CONTRAST_NODES_PER_UNIT,
    BJ_CONTRAST_ORDER,
    BJ_CONTRAST_SHARE,
    CHAIN_SCALE_MAX,
    CHAIN_STEPS,
    CHAIN_TAU_BANDS,
    DEFAULT_FAMILY_SIZE,
    DEFAULT_LIEB_P,
    DEFAULT_R_LIST,
    DEFAULT_TAU,
    DEFAULT_TOLERANCES,
    DEFAULT_TRIALS,
    DEFAULT_XI_LIST,
    MONOTONE_FLOOR_SHARE,
    MONOTONE_FROM_R,
    WITNESS_RANGE,
    SCENARIO_DESCRIPTIONS,
    WEAK_PROXY_LIMIT,
)
from phasespace_lab.utils.errors import (
    ConfigError,
    GuardViolationError,
    PairGraphInvariantError,
    ScenarioError,
    TrajectoryError,
)
from phasespace_lab.utils.serialization import write_ascent_report, write_run_result

logger = structlog.get_logger()


@dataclass
class _Outcome:
    rows: list[ResultRow]
    checks: dict[str, bool]
    grid: dict[str, Any] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)
    ascent: tuple[AscentReport, AscentConfig] | None = None


# ═══════════════════════════════════════════════════════════════
# Config loading and validation
# ═══════════════════════════════════════════════════════════════


def _read_config_file(path: str | Path) -> Any:
    """Parse YAML (JSON is a subset); unreadable files raise OSError."""
    return yaml.safe_load(Path(path).read_text(encoding="utf-8"))


def _violations(exc: ValidationError) -> list[str]:
    out = []
    for err in exc.errors():
        msg = err["msg"].removeprefix("Value error, ")
        loc = ".".join(str(part) for part in err["loc"])
        for part in msg.split("; "):
            out.append(f"{loc}: {part}" if loc else part)
    return out


def _check_raw(raw: Any) -> tuple[ScenarioConfig | None, list[str]]:
    if not isinstance(raw, dict):
        return None, ["config must be a mapping of keys to values"]
    try:
        return ScenarioConfig.model_validate(raw), []
    except ValidationError as exc:
        return None, _violations(exc)


def validate(path: str | Path) -> list[str]:
    """Every schema violation in the config at ``path``; empty when valid. Never computes."""
    try:
        raw = _read_config_file(path)
    except yaml.YAMLError as exc:
        return [f"not valid YAML/JSON: {exc}"]
    return _check_raw(raw)[1]


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        raw = _read_config_file(path)
    except yaml.YAMLError as exc:
        raise ConfigError([f"not valid YAML/JSON: {exc}"]) from exc
    cfg, problems = _check_raw(raw)
    if problems:
        raise ConfigError(problems)
    return cfg


def list_scenarios() -> list[tuple[str, str]]:
    return [(s.value, text) for s, text in SCENARIO_DESCRIPTIONS.items()]


# ═══════════════════════════════════════════════════════════════
# Shared helpers
# ═══════════════════════════════════════════════════════════════


def _tolerance(cfg: ScenarioConfig) -> float:
    return cfg.tolerance if cfg.tolerance is not None else DEFAULT_TOLERANCES[cfg.scenario]


def _grid_echo(grid: Grid1D, n_lags: int | None = None) -> dict[str, Any]:
    return {"n": grid.n, "dt": grid.dt, "n_lags": n_lags or grid.n}


def _next_pow2(x: float) -> int:
    return 1 << max(0, math.ceil(math.log2(x)))


def _build_mask(spec: MaskSpec, pg: PhaseGrid) -> DomainMask:
    """Rasterize Ω on the rows its x interval covers, then crop."""
    bounds = spec.x_bounds
    if bounds is not None:
        lo, hi = bounds
        start = min(max(pg.xgrid.index_of(lo) - 1, 0), pg.xgrid.n - 1)
        stop = max(min(pg.xgrid.index_of(hi) + 2, pg.xgrid.n), start + 1)
        pg = pg.window(start, stop - start)
    return spec.to_mask(pg).cropped()


def _antipodal_mask_spec(cfg: ScenarioConfig) -> MaskSpec:
    """Ω as seen by time-direction packets.

    Frequency-direction packets π(0, ±r)g are the Fourier transforms of π(±r, 0)g,
    and Wf̂(ξ, −x) = Wf(x, ξ), so they are run along x against the rotated Ω.
    """
    return cfg.mask if cfg.direction == "time" else cfg.mask.rotated()


def _antipodal_grid(cfg: ScenarioConfig, reach: float) -> tuple[Grid1D, int]:
    """Working grid and lag count for packets at (±reach, 0).

    n grows at fixed dt until the packets clear the guard; lags are padded so each
    ξ-fringe of period 1/(2·reach) holds ``fringe_samples`` samples.
    """
    grid = cfg.grid.to_grid()
    n = grid.n
    while not packet_fits(Grid1D(n=n, dt=grid.dt), reach):
        n *= 2
    if n != grid.n:
        logger.info("grid_enlarged", scenario=cfg.scenario.value, n_from=grid.n, n_to=n)
        grid = Grid1D(n=n, dt=grid.dt)
    lags = max(grid.n, _next_pow2(settings.fringe_samples * reach / grid.dt))
    return grid, lags


def monotone_tail(rows: list[ResultRow], start: float, floor: float) -> bool:
    """Defects from ``param ≥ start`` on never grow, unless the larger one stays ≤ ``floor``."""
    tail = [row.defect for row in sorted(rows, key=lambda r: r.param) if row.param >= start]
    return all(b <= a or b <= floor for a, b in zip(tail, tail[1:]))


def _shifted_packet(g: Signal, z: PhasePoint, operation: str) -> Signal:
    moved = tf_shift(g, z)
    guard_check(moved, operation, strict=True)
    return moved


# ═══════════════════════════════════════════════════════════════
# Runners
# ═══════════════════════════════════════════════════════════════


def _run_interference_limit(cfg: ScenarioConfig, threads: int) -> _Outcome:
    r_list = sorted(cfg.r_list or DEFAULT_R_LIST)
    grid, lags = _antipodal_grid(cfg, max(r_list))
    mask = _build_mask(_antipodal_mask_spec(cfg), PhaseGrid.for_wigner(grid, lags))
    g = gaussian(grid, normalized=True)
    predicted = interference_limit_prediction(g, g, PhasePoint(), mask, cfg.p).limit

    def measure(r: float) -> float:
        a = PhasePoint(x=r)
        block = interference_block(g, g, a, -a, n_lags=lags, rows=mask.row_window)
        return lp_norm(block, mask, cfg.p)

    measured = Parallel(n_jobs=threads, prefer="threads")(delayed(measure)(r) for r in r_list)
    rows = [ResultRow.compare(r, m, predicted) for r, m in zip(r_list, measured)]
    tol = _tolerance(cfg)
    floor = MONOTONE_FLOOR_SHARE * tol
    return _Outcome(
        rows=rows,
        checks={
            "final_defect": rows[-1].defect <= tol,
            "monotone_tail": monotone_tail(rows, MONOTONE_FROM_R, floor),
        },
        grid=_grid_echo(grid, lags),
        extras={"visibility_constant": visibility_constant(cfg.p), "monotone_floor": floor},
    )


def _run_semicontinuity(cfg: ScenarioConfig, threads: int) -> _Outcome:
    xi_list = sorted(cfg.xi_list or DEFAULT_XI_LIST)
    grid, lags = _antipodal_grid(cfg, max(xi_list))
    mask = _build_mask(_antipodal_mask_spec(cfg), PhaseGrid.for_wigner(grid, lags))
    g = gaussian(grid, normalized=True)
    wg = wigner(g, n_lags=lags, rows=mask.row_window)
    limit = visibility_constant(cfg.p) * lp_norm(wg, mask, cfg.p) / g.energy
    witnesses = [gaussian(grid, PhasePoint(x=i, xi=j), normalized=True) for i in WITNESS_RANGE for j in WITNESS_RANGE]

    def sequence(r: float) -> Signal:
        a = PhasePoint(x=r)
        return _shifted_packet(g, a, "semicontinuity") + _shifted_packet(g, -a, "semicontinuity")

    def measure(r: float) -> tuple[float, float]:
        u = sequence(r)
        w = wigner(u, n_lags=lags, rows=mask.row_window)
        return lp_norm(w, mask, cfg.p) / u.energy, correlation_proxy(u, witnesses)

    measured = Parallel(n_jobs=threads, prefer="threads")(delayed(measure)(r) for r in xi_list)
    rows = [ResultRow.compare(r, m, limit) for r, (m, _) in zip(xi_list, measured)]
    weak_proxy = measured[-1][1]

    # Born–Jordan of the last element, without lag padding
    u_last = sequence(xi_list[-1])
    bj_mask = _build_mask(_antipodal_mask_spec(cfg), PhaseGrid.for_wigner(grid))
    nodes = BJ_CONTRAST_NODES_PER_UNIT * _next_pow2(xi_list[-1])
    panels = -(-max(cfg.bj_nodes, nodes) // BJ_CONTRAST_ORDER)
    spec = QuadSpec(order=BJ_CONTRAST_ORDER, nodes=panels * BJ_CONTRAST_ORDER, tol=cfg.bj_tol, check=False)
    bj = born_jordan(u_last, u_last, spec, rows=bj_mask.row_window, threads=threads)
    bj_value = lp_norm(bj, bj_mask, cfg.p) / u_last.energy

    return _Outcome(
        rows=rows,
        checks={
            "final_defect": rows[-1].defect <= _tolerance(cfg),
            "weak_proxy": weak_proxy <= WEAK_PROXY_LIMIT,
            "born_jordan_contrast": bj_value <= BJ_CONTRAST_SHARE * limit,
        },
        grid=_grid_echo(grid, lags),
        extras={"wigner_limit": limit, "weak_proxy": weak_proxy, "born_jordan_value": bj_value},
    )


def _run_maximize(cfg: ScenarioConfig, threads: int) -> _Outcome:
    grid = cfg.grid.to_grid()
    mask = _build_mask(cfg.mask, PhaseGrid.for_wigner(grid))
    acfg = AscentConfig(
        p=cfg.p,
        kind=cfg.kind,
        mask=mask,
        max_iter=cfg.max_iter,
        restarts=cfg.restarts,
        seed=cfg.seed,
        threads=threads,
    )
    report = optimize.maximize(acfg)
    candidate = concentration_value(
        gaussian(grid, mask.nearest_cell(mask.centroid()), normalized=True), mask, cfg.p
    )
    moyal = cfg.mask.shape == "full" and cfg.p == 2
    predicted = 1.0 if moyal else candidate
    row = ResultRow.compare(cfg.p, report.best_value, predicted)
    slack = acfg.tol * max(1.0, abs(candidate))
    checks = {
        "monotone_trace": all(b >= a for a, b in zip(report.trace, report.trace[1:])),
        "coarse_bound": report.best_value <= 2 * mask.measure ** (1 / cfg.p) + acfg.tol,
        "dominates_gaussian": report.best_value >= candidate - slack,
    }
    if moyal:
        checks["moyal"] = row.defect <= _tolerance(cfg)
    return _Outcome(
        rows=[row],
        checks=checks,
        grid=_grid_echo(grid),
        extras={
            "gaussian_candidate": candidate,
            # distance to the attained p = ∞ value 2
            "linfty_gap": 1 - report.best_value / 2,
            "converged": report.converged,
            "best_restart": report.best_restart,
            "iterations": report.iterations,
            "measure": mask.measure,
        },
        ascent=(report, acfg),
    )


def _run_linfty(cfg: ScenarioConfig, threads: int) -> _Outcome:
    grid = cfg.grid.to_grid()
    mask = _build_mask(cfg.mask, PhaseGrid.for_wigner(grid))
    result = optimize.linfty_optimizer(mask, cfg.kind, odd=cfg.odd)
    row = ResultRow.compare(1.0 if cfg.odd else 0.0, result.value, 2.0)
    return _Outcome(
        rows=[row],
        checks={"attained": row.defect <= _tolerance(cfg)},
        grid=_grid_echo(grid),
        extras={"center_x": result.center.x, "center_xi": result.center.xi},
    )


def _family_checks(values: list[float], sup: float, tol: float) -> dict[str, bool]:
    mags = [abs(v) for v in values]
    return {
        "strictly_below": all(v < sup for v in mags),
        "increasing": all(b > a for a, b in zip(mags, mags[1:])),
        "approaches_sup": mags[-1] >= (1 - tol) * sup,
    }


def _run_tau_sup(cfg: ScenarioConfig, threads: int) -> _Outcome:
    tau = cfg.tau
    family = optimize.tau_linfty_family(tau, DEFAULT_FAMILY_SIZE, widths=cfg.sigma_list)
    log_s = math.log(tau / (1 - tau))
    closed = [family.sup_predicted * math.exp(-math.pi * log_s**2 / (2 * s**2)) for s in family.widths]
    closed_error = max(abs(v - c) for v, c in zip(family.values, closed))
    checks = _family_checks(family.values, family.sup_predicted, _tolerance(cfg))
    checks["closed_form"] = closed_error <= 1e-8
    return _Outcome(
        rows=[ResultRow.compare(s, v, family.sup_predicted) for s, v in zip(family.widths, family.values)],
        checks=checks,
        extras={"tau": tau, "closed_form_error": closed_error},
    )


def _run_bj_sup(cfg: ScenarioConfig, threads: int) -> _Outcome:
    family = optimize.bj_linfty_family(DEFAULT_FAMILY_SIZE, odd=cfg.odd, widths=cfg.sigma_list)
    checks = _family_checks(family.values, family.sup_predicted, _tolerance(cfg))
    checks["khat"] = family.khat_check <= 1e-8
    return _Outcome(
        rows=[ResultRow.compare(s, abs(v), family.sup_predicted) for s, v in zip(family.widths, family.values)],
        checks=checks,
        extras={"khat_check": family.khat_check, "odd": cfg.odd},
    )


def _run_lieb_check(cfg: ScenarioConfig, threads: int) -> _Outcome:
    p_list = sorted(cfg.p_list or DEFAULT_LIEB_P)
    trials = cfg.trials or DEFAULT_TRIALS[Scenario.LIEB_CHECK]
    grid = cfg.grid.to_grid()
    band = 1 / (8 * grid.dt)
    tol = _tolerance(cfg)

    def ratios(k: int) -> list[float]:
        f = random_signal(cfg.seed + k, band, grid)
        w = wigner(f)
        return [field_norm(w, p) / f.energy for p in p_list]

    table = np.array(Parallel(n_jobs=threads, prefer="threads")(delayed(ratios)(k) for k in range(trials)))
    rows, checks, counts = [], {}, {}
    for j, p in enumerate(p_list):
        bound = lieb_constant(p)
        col = table[:, j]
        if p >= 2:
            worst = float(col.max())
            violations = int(np.sum(col > bound * (1 + tol)))
        else:
            worst = float(col.min())
            violations = int(np.sum(col < bound * (1 - tol)))
        rows.append(ResultRow.compare(p, worst, bound))
        checks[f"no_violations_p{p:g}"] = violations == 0
        counts[f"violations_p{p:g}"] = violations
    return _Outcome(rows=rows, checks=checks, grid=_grid_echo(grid), extras={"trials": trials, **counts})


def _localized(grid: Grid1D, rng: np.random.Generator) -> Signal:
    coeffs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    total = hermite(grid, 0).scaled(coeffs[0])
    for k in range(1, 4):
        total = total + hermite(grid, k).scaled(coeffs[k])
    return normalize(total)


def _roll_residual(lhs: np.ndarray, rhs: np.ndarray, row_shift: int) -> float:
    """max |lhs − rhs| / max |lhs| away from the rows the roll wrapped."""
    margin = abs(row_shift)
    inner_rows = slice(margin, lhs.shape[0] - margin)
    scale = max(float(np.max(np.abs(lhs))), np.finfo(float).tiny)
    return float(np.max(np.abs(lhs[inner_rows] - rhs[inner_rows]))) / scale


def _run_covariance_check(cfg: ScenarioConfig, threads: int) -> _Outcome:
    trials = cfg.trials or DEFAULT_TRIALS[Scenario.COVARIANCE_CHECK]
    tau = cfg.tau if cfg.tau is not None and not math.isclose(cfg.tau, 0.5) else DEFAULT_TAU
    grid = cfg.grid.to_grid()
    pg = PhaseGrid.for_wigner(grid)
    dt, dxi = grid.dt, pg.dxi
    rng = np.random.default_rng(cfg.seed)
    x_mesh, xi_mesh = np.meshgrid(pg.x, pg.xi, indexing="ij")

    rows = []
    worst = dict.fromkeys(("wigner", "tau", "tau_distinct", "antipodal", "polarization"), 0.0)
    for trial in range(trials):
        f, g = _localized(grid, rng), _localized(grid, rng)
        ka, kb, ja, jb = (int(k) for k in rng.integers(-16, 17, size=4))
        a = PhasePoint(x=2 * dt * ka, xi=2 * dxi * ja)
        b = PhasePoint(x=2 * dt * kb, xi=2 * dxi * jb)

        # W(π(a)f, π(b)g)(z) = phase(z)·W(f,g)(z − c) with c = (a+b)/2 on the grid
        lhs = cross_wigner(tf_shift(f, a), tf_shift(g, b)).values
        base = np.roll(cross_wigner(f, g).values, (ka + kb, ja + jb), axis=(0, 1))
        d = a - b
        phase = wigner_covariance_phase(a, b, PhasePoint()) * np.exp(2j * np.pi * (x_mesh * d.xi - xi_mesh * d.x))
        w_res = _roll_residual(lhs, phase * base, ka + kb)

        # joint shift of a τ-Wigner moves it by a
        shift = PhasePoint(x=dt * ka, xi=dxi * ja)
        t_lhs = tau_wigner(tf_shift(f, shift), tf_shift(g, shift), tau).values
        t_rhs = np.roll(tau_wigner(f, g, tau).values, (ka, ja), axis=(0, 1))
        t_res = _roll_residual(t_lhs, t_rhs, ka)

        # distinct shifts: |W_τ(π(a)f, π(b)g)(z)| = |W_τ(f,g)(z − c_τ(a,b))| with c_τ on the grid
        kc, jc = (int(k) for k in rng.integers(-16, 17, size=2))
        d = PhasePoint(x=float(rng.uniform(-1, 1)), xi=float(rng.uniform(-1, 1)))
        a_t = PhasePoint(x=dt * kc + tau * d.x, xi=dxi * jc + (1 - tau) * d.xi)
        b_t = a_t - d
        d_lhs = np.abs(tau_wigner(tf_shift(f, a_t), tf_shift(g, b_t), tau).values)
        d_rhs = np.roll(np.abs(tau_wigner(f, g, tau).values), (kc, jc), axis=(0, 1))
        d_res = _roll_residual(d_lhs, d_rhs, kc)

        scale = float(np.max(np.abs(cross_wigner(f, f).values)))
        a_res = antipodal_residual(f, PhasePoint(x=dt * kb, xi=dxi * jb)) / scale
        p_res = polarization_residual(f, g, float(rng.uniform(0, 2 * math.pi))) / scale

        residuals = {"wigner": w_res, "tau": t_res, "tau_distinct": d_res, "antipodal": a_res, "polarization": p_res}
        worst = {name: max(worst[name], value) for name, value in residuals.items()}
        rows.append(ResultRow.compare(trial, max(residuals.values()), 0.0))

    tol = _tolerance(cfg)
    return _Outcome(
        rows=rows,
        checks={f"{name}_covariance": value <= tol for name, value in worst.items()},
        grid=_grid_echo(grid),
        extras={"tau": tau, **{f"max_{name}_residual": value for name, value in worst.items()}},
    )


def chain_trajectories(
    tau: float, rng: np.random.Generator, bound: float
) -> tuple[list[CenterTrajectory], set[tuple[int, int]]]:
    """Linear escaping paths z = w·s grouped into planted chains w, Mw, M²w, …

    M = diag(−(1−τ)/τ, −τ/(1−τ)) makes c_τ(w, Mw) = 0, so consecutive members
    form surviving pairs. At τ = 1/2, M = −I and chains are antipodal pairs.
    """
    symmetric = math.isclose(tau, 0.5)
    m = np.array([-(1 - tau) / tau, -tau / (1 - tau)])
    spread = 1 / tau + 1 / (1 - tau) if symmetric else max(1 / tau + 1 / (1 - tau), 1 / abs(1 - 2 * tau))
    divergence = 4 * bound * spread
    scales = np.geomspace(1.0, CHAIN_SCALE_MAX, CHAIN_STEPS)

    directions, planted = [], set()
    for _ in range(int(rng.integers(1, 4))):
        length = 2 if symmetric else int(rng.integers(1, 5))
        chain = [rng.standard_normal(2)]
        for _ in range(length - 1):
            chain.append(m * chain[-1])
        shortest = min(float(np.hypot(*w)) for w in chain)
        chain = [w * (rng.uniform(1.0, 3.0) / shortest) for w in chain] if shortest < 1 else chain
        first = len(directions)
        directions.extend(chain)
        planted.update((first + i, first + i + 1) for i in range(length - 1))

    trajectories = [
        CenterTrajectory(
            points=[PhasePoint(x=float(w[0] * s), xi=float(w[1] * s)) for s in scales],
            divergence_threshold=divergence,
        )
        for w in directions
    ]
    return trajectories, planted


def _run_chain_graph(cfg: ScenarioConfig, threads: int) -> _Outcome:
    trials = cfg.trials or DEFAULT_TRIALS[Scenario.CHAIN_GRAPH]
    rng = np.random.default_rng(cfg.seed)
    bound = default_bound_threshold()
    rows = []
    rejected = mismatched = broken = 0
    for trial in range(trials):
        if cfg.tau is not None:
            tau = cfg.tau
        else:
            lo, hi = CHAIN_TAU_BANDS[int(rng.integers(0, len(CHAIN_TAU_BANDS)))]
            tau = float(rng.uniform(lo, hi))
        trajectories, planted = chain_trajectories(tau, rng, bound)
        try:
            graph = surviving_pair_graph(trajectories, tau, bound)
        except TrajectoryError:
            rejected += 1
            continue
        except PairGraphInvariantError as exc:
            logger.warning("pair_graph_broken", trial=trial, tau=tau, error=str(exc))
            broken += 1
            continue
        found = set(graph.edges)
        if found != planted:
            mismatched += 1
        rows.append(ResultRow.compare(trial, len(found), len(planted)))
    return _Outcome(
        rows=rows,
        checks={"chain_invariants": broken == 0, "planted_edges_recovered": mismatched == 0},
        extras={"trials": trials, "rejected": rejected, "mismatched": mismatched, "broken": broken},
    )


_RUNNERS: dict[Scenario, Callable[[ScenarioConfig, int], _Outcome]] = {
    Scenario.INTERFERENCE_LIMIT: _run_interference_limit,
    Scenario.SEMICONTINUITY: _run_semicontinuity,
    Scenario.MAXIMIZE: _run_maximize,
    Scenario.LINFTY: _run_linfty,
    Scenario.TAU_SUP: _run_tau_sup,
    Scenario.BJ_SUP: _run_bj_sup,
    Scenario.LIEB_CHECK: _run_lieb_check,
    Scenario.COVARIANCE_CHECK: _run_covariance_check,
    Scenario.CHAIN_GRAPH: _run_chain_graph,
}


# ═══════════════════════════════════════════════════════════════
# Entry point
# ═══════════════════════════════════════════════════════════════


def run(
    config: ScenarioConfig,
    out_dir: str | Path | None = None,
    threads: int | None = None,
) -> RunResult:
    """Run one scenario and write ``<scenario>.csv`` and ``<scenario>.json`` to the output directory."""
    runner = _RUNNERS[config.scenario]
    jobs = threads or settings.threads
    logger.info("scenario_started", scenario=config.scenario.value, seed=config.seed, threads=jobs)
    start = time.perf_counter()
    try:
        outcome = runner(config, jobs)
    except GuardViolationError as exc:
        raise ScenarioError(config.scenario.value, str(exc)) from exc
    wall = time.perf_counter() - start

    result = RunResult(
        scenario=config.scenario,
        config=config.echo(),
        grid=outcome.grid,
        rows=outcome.rows,
        checks=outcome.checks,
        tolerance=_tolerance(config),
        extras=outcome.extras,
        wall_time=wall,
    )
    target = Path(out_dir or config.output or settings.output_dir)
    csv_path, json_path = write_run_result(result, target)
    if outcome.ascent is not None:
        report, acfg = outcome.ascent
        write_ascent_report(report, acfg, target / f"{config.scenario.value}.ascent.json")
    logger.info(
        "scenario_finished",
        scenario=config.scenario.value,
        passed=result.passed,
        wall_time=round(wall, 3),
        csv=str(csv_path),
        summary=str(json_path),
    )
    return result
