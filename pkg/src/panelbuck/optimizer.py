"""Buckling-constrained thickness sizing.

`run_eigenopt` drives the stability-metric loop: analyze the design, rank
sections by their buckling-stability values, then either grow the most
stabilizing sections (when the constraint is violated) or shrink the sections
whose removal costs the least load factor (when there is margin). Shrink
steps are scaled so the *predicted* load factor never crosses the constraint:
the additive beta model is linear in the step scale, so the largest safe
scale has a closed form. Prediction targets a small guard band above the
constraint to absorb the beta model's second-order optimism; when not even a
vanishing shrink is predicted safe, the iteration holds and the objective
window terminates the run.

`run_baseline_fd` is the comparison optimizer: projected steepest descent on
mass with a finite-difference constraint gradient, accepting only feasible
iterates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import AnalysisResult, analyze
from .errors import EmptyMoveSetError, InfeasibleProblemError, PanelBuckError
from .model import DesignVector, PanelModel, make_design, mass, thickness_array
from .stability import StabilityReport, fd_lambda_sensitivity, stability_report

_BOUND_SNAP = 1e-12  # relative closeness at which a thickness counts as at-bound


@dataclass(frozen=True)
class OptimizationProblem:
    """Minimize mass subject to lambda_1 >= lambda_min and the section bounds."""

    model: PanelModel
    initial_design: DesignVector
    lambda_min: float = 1.30

    def __post_init__(self):
        if not (self.lambda_min > 0.0):
            raise ValueError("lambda_min must be positive")
        thickness_array(self.model, self.initial_design)

    @property
    def lb(self) -> np.ndarray:
        return self.model.lower_bounds()

    @property
    def ub(self) -> np.ndarray:
        return self.model.upper_bounds()


@dataclass(frozen=True)
class EigenOptConfig:
    theta0: float = 0.20        # fraction of eligible sections moved per iteration
    theta_decay: float = 1.0    # multiplicative decay of theta per iteration
    eta: float = 0.05           # relative thickness step
    max_iters: int = 200
    rel_tol: float = 1e-3       # relative mass change for convergence
    window: int = 5             # iterations the mass must be stable over
    modes: int = 25             # eigenvalues reported per iteration
    guard_margin: float = 0.01  # shrink prediction targets lambda_min*(1+this)
    mixed_moves: bool = False   # grow and shrink in the same iteration
    eig_method: str = "auto"

    def __post_init__(self):
        if not (0.0 < self.theta0 <= 1.0):
            raise ValueError("theta0 must be in (0, 1]")
        if not (0.0 < self.theta_decay <= 1.0):
            raise ValueError("theta_decay must be in (0, 1]")
        if not (0.0 < self.eta):
            raise ValueError("eta must be positive")
        if self.max_iters < 0 or self.window < 1 or self.modes < 1:
            raise ValueError("max_iters, window and modes must be sensible")
        if not (self.rel_tol > 0.0 and self.guard_margin >= 0.0):
            raise ValueError("rel_tol must be positive and guard_margin non-negative")


@dataclass(frozen=True)
class BaselineFDConfig:
    step0: float = 0.05       # initial relative shrink per accepted step
    fd_eta: float = 0.02      # relative step of the constraint-gradient probes
    max_iters: int = 40
    rel_tol: float = 1e-3
    window: int = 5
    backtracks: int = 20
    modes: int = 5
    guard_margin: float = 0.01
    eig_method: str = "auto"


@dataclass(frozen=True)
class Move:
    """One applied thickness change."""

    section_id: int
    direction: str  # "increase" | "decrease"
    delta_t: float

    def encode(self) -> str:
        sign = "+" if self.direction == "increase" else "-"
        return f"{self.section_id}:{sign}{self.delta_t!r}"


@dataclass
class IterationRecord:
    iter: int
    design: DesignVector
    mass: float
    lambda_1: float
    lambdas: tuple[float, ...]
    moves: tuple[Move, ...]
    feasible: bool


@dataclass(frozen=True)
class OptimizationHistory:
    records: tuple[IterationRecord, ...]
    termination: str  # "converged" | "max_iters" | "error"
    best_feasible: int | None
    fe_solves: int
    error: str | None = None

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]


def _at_upper(t, ub):
    return t >= ub * (1.0 - _BOUND_SNAP)


def _at_lower(t, lb):
    return t <= lb * (1.0 + _BOUND_SNAP)


def rank_sections(
    model: PanelModel,
    design: DesignVector,
    report: StabilityReport,
    mode: str,
    theta: float,
) -> list[Move]:
    """Ordered nominal moves: the ceil(theta * eligible) best sections.

    grow: by beta_plus descending, skipping sections at the upper bound.
    shrink: by beta_minus descending (closest to zero first, i.e. the least
    predicted load-factor loss), skipping sections at the lower bound.
    Ties break toward the lower section id.
    """
    if not (0.0 < theta <= 1.0):
        raise ValueError("theta must be in (0, 1]")
    if mode not in ("grow", "shrink"):
        raise ValueError(f"mode must be grow or shrink, got {mode!r}")
    t = design.as_array()
    lb, ub = model.lower_bounds(), model.upper_bounds()
    eligible = []
    for row in report.rows:
        i = row.section_id
        if mode == "grow":
            if _at_upper(t[i], ub[i]):
                continue
            eligible.append((-row.beta_plus, i, row.delta_t, "increase"))
        else:
            if _at_lower(t[i], lb[i]) or row.delta_t_decrease <= 0.0:
                continue
            eligible.append((-row.beta_minus, i, row.delta_t_decrease, "decrease"))
    if not eligible:
        raise EmptyMoveSetError(f"no section eligible to {mode}")
    eligible.sort()  # beta descending, then section id ascending
    count = max(1, math.ceil(theta * len(eligible)))
    return [Move(i, direction, dt) for _, i, dt, direction in eligible[:count]]


def _apply_moves(model: PanelModel, design: DesignVector, moves) -> tuple[DesignVector, tuple[Move, ...]]:
    """Clamp moves into the box and report the deltas actually applied."""
    t = design.as_array().copy()
    lb, ub = model.lower_bounds(), model.upper_bounds()
    applied = []
    for mv in moves:
        i = mv.section_id
        if mv.direction == "increase":
            new = min(t[i] + mv.delta_t, ub[i])
        else:
            new = max(t[i] - mv.delta_t, lb[i])
        dt = abs(new - t[i])
        if dt > 0.0:
            applied.append(Move(i, mv.direction, float(dt)))
            t[i] = new
    return make_design(model, t), tuple(applied)


def eigenopt_step(
    problem: OptimizationProblem,
    design: DesignVector,
    analysis: AnalysisResult,
    report: StabilityReport,
    config: EigenOptConfig,
    theta: float | None = None,
) -> tuple[DesignVector, tuple[Move, ...]]:
    """One planning + application step. Empty moves mean the iteration holds."""
    if theta is None:
        theta = config.theta0
    lam1 = analysis.modes.critical
    model = problem.model

    if config.mixed_moves:
        moves = _plan_mixed(problem, design, report, lam1, theta, config)
        return _apply_moves(model, design, moves)

    if lam1 < problem.lambda_min:
        try:
            moves = rank_sections(model, design, report, "grow", theta)
        except EmptyMoveSetError as exc:
            raise InfeasibleProblemError(
                "constraint violated with every section at its upper bound"
            ) from exc
        return _apply_moves(model, design, moves)

    try:
        moves = rank_sections(model, design, report, "shrink", theta)
    except EmptyMoveSetError:
        return design, ()
    target = problem.lambda_min * (1.0 + config.guard_margin)
    margin = lam1 - target
    if margin <= 0.0:
        return design, ()  # inside the guard band: hold
    beta_sum = sum(report.rows[m.section_id].beta_minus for m in moves)
    if lam1 + beta_sum < target:
        s = margin / max(-beta_sum, 1e-300)
        if s < 1e-9:
            return design, ()
        moves = [Move(m.section_id, m.direction, m.delta_t * s) for m in moves]
    return _apply_moves(model, design, moves)


def _plan_mixed(problem, design, report, lam1, theta, config) -> list[Move]:
    """Experimental simultaneous grow+shrink planning (mixed_moves=True)."""
    model = problem.model
    try:
        grows = rank_sections(model, design, report, "grow", theta)
    except EmptyMoveSetError:
        grows = []
    taken = {m.section_id for m in grows}
    try:
        shrinks = [
            m for m in rank_sections(model, design, report, "shrink", theta)
            if m.section_id not in taken
        ]
    except EmptyMoveSetError:
        shrinks = []
    if not grows and not shrinks:
        raise InfeasibleProblemError("no admissible move in either direction")
    if lam1 >= problem.lambda_min and shrinks:
        target = problem.lambda_min * (1.0 + config.guard_margin)
        predicted = lam1
        predicted += sum(report.rows[m.section_id].beta_plus for m in grows)
        beta_shrink = sum(report.rows[m.section_id].beta_minus for m in shrinks)
        if predicted + beta_shrink < target:
            s = max(predicted - target, 0.0) / max(-beta_shrink, 1e-300)
            if s < 1e-9:
                shrinks = []
            else:
                shrinks = [Move(m.section_id, m.direction, m.delta_t * min(s, 1.0))
                           for m in shrinks]
    return grows + shrinks


def check_convergence(history: OptimizationHistory | list, config) -> str:
    """"converged" once the last `window` records are feasible with a relative
    mass spread at most rel_tol; "max_iters" at the iteration cap; else "continue"."""
    records = history.records if isinstance(history, OptimizationHistory) else history
    if not records:
        raise ValueError("need at least one record")
    w = config.window
    if len(records) >= w:
        tail = records[-w:]
        if all(r.feasible for r in tail):
            masses = np.array([r.mass for r in tail])
            spread = (masses.max() - masses.min()) / max(abs(masses.mean()), 1e-300)
            if spread <= config.rel_tol:
                return "converged"
    if records[-1].iter >= config.max_iters:
        return "max_iters"
    return "continue"


def _best_feasible(records) -> int | None:
    best = None
    for r in records:
        if r.feasible and (best is None or r.mass < records[best].mass):
            best = r.iter
    return best


def _record(it, model, design, analysis, lambda_min) -> IterationRecord:
    lam = analysis.modes.eigenvalues
    return IterationRecord(
        iter=it,
        design=design,
        mass=mass(model, design),
        lambda_1=float(lam[0]),
        lambdas=tuple(float(v) for v in lam),
        moves=(),
        feasible=bool(lam[0] >= lambda_min),
    )


def run_eigenopt(problem: OptimizationProblem, config: EigenOptConfig | None = None) -> OptimizationHistory:
    """Full stability-metric sizing loop; deterministic for identical inputs."""
    if config is None:
        config = EigenOptConfig()
    model = problem.model
    design = problem.initial_design
    records: list[IterationRecord] = []
    fe_solves = 0
    termination = "max_iters"
    error = None

    for it in range(config.max_iters + 1):
        try:
            analysis = analyze(model, design, m=config.modes, method=config.eig_method)
        except PanelBuckError as exc:
            termination, error = "error", f"analysis failed at iteration {it}: {exc}"
            break
        fe_solves += 1
        rec = _record(it, model, design, analysis, problem.lambda_min)
        records.append(rec)
        decision = check_convergence(records, config)
        if decision != "continue":
            termination = decision
            break
        theta = config.theta0 * config.theta_decay**it
        report = stability_report(model, design, analysis.modes, eta=config.eta)
        try:
            design, moves = eigenopt_step(problem, design, analysis, report, config, theta)
        except InfeasibleProblemError:
            if it == 0:
                raise
            termination, error = "error", "constraint unreachable: all sections at upper bound"
            break
        rec.moves = moves

    return OptimizationHistory(
        tuple(records), termination, _best_feasible(records), fe_solves, error
    )


def run_baseline_fd(problem: OptimizationProblem, config: BaselineFDConfig | None = None) -> OptimizationHistory:
    """Projected finite-difference descent that only visits feasible designs."""
    if config is None:
        config = BaselineFDConfig()
    model = problem.model
    lb, ub = problem.lb, problem.ub
    areas_rho = model.section_areas() * model.material.density  # mass gradient

    design = problem.initial_design
    analysis = analyze(model, design, m=config.modes, method=config.eig_method)
    fe_solves = 1
    if analysis.modes.critical < problem.lambda_min:
        raise InfeasibleProblemError("baseline optimizer needs a feasible start")
    records = [_record(0, model, design, analysis, problem.lambda_min)]
    termination = "max_iters"
    alpha = config.step0
    target = problem.lambda_min * (1.0 + config.guard_margin)

    for it in range(1, config.max_iters + 1):
        decision = check_convergence(records, config)
        if decision != "continue":
            termination = decision
            break
        t = design.as_array()
        lam1 = records[-1].lambda_1
        # constraint gradient by one-sided differences, full re-analysis each
        grad = np.empty(model.n_sections)
        for i in range(model.n_sections):
            dt = config.fd_eta * t[i]
            grad[i] = fd_lambda_sensitivity(
                model, design, i, dt, "increase", lambda_base=lam1, modes=1
            ) / dt
            fe_solves += 1
        gnorm2 = float(grad @ grad)

        accepted = False
        step = alpha
        for _ in range(config.backtracks):
            delta = -step * t  # uniform relative mass descent
            predicted = lam1 + float(grad @ delta)
            if predicted < target and gnorm2 > 0.0:
                delta = delta + grad * ((target - predicted) / gnorm2)
            trial = np.clip(t + delta, lb, ub)
            if np.max(np.abs(trial - t)) <= 1e-15:
                break
            trial_design = make_design(model, trial)
            analysis = analyze(model, trial_design, m=config.modes, method=config.eig_method)
            fe_solves += 1
            if analysis.modes.critical >= problem.lambda_min:
                moves = tuple(
                    Move(i, "increase" if d > 0 else "decrease", abs(float(d)))
                    for i, d in enumerate(trial - t) if d != 0.0
                )
                records[-1].moves = moves
                design = trial_design
                records.append(_record(it, model, design, analysis, problem.lambda_min))
                alpha = min(config.step0, step * 1.5)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            termination = "converged"  # no feasible progress left at any step size
            break

    return OptimizationHistory(
        tuple(records), termination, _best_feasible(records), fe_solves, None
    )
