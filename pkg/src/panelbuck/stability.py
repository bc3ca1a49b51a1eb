"""Per-section buckling-stability metrics and their brute-force oracle.

For a thickness perturbation of one section, the first-order change of the
critical load factor is the quadratic form of the first buckling mode against
that section's stiffness change:

    beta_i(+/-) = u_1^T [dk_i](+/-) u_1,   [dk_i](+/-) = k_i(t +/- dt) - k_i(t)

with u_1 normalized so u_1^T K_ss u_1 = 1 and K_ss frozen at the current
design. `fd_lambda_sensitivity` re-runs the whole analysis at the perturbed
design instead, giving the exact delta the approximation is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .assembly import build_dof_map, element_dof_indices
from .eigen import BucklingModes, analyze
from .elements import element_stiffness
from .errors import StepTooLargeError
from .model import PanelModel, thickness_array

DIRECTIONS = ("increase", "decrease")


@dataclass(frozen=True)
class SectionDelta:
    """Assembled stiffness change of one section, embedded on the free dofs."""

    section_id: int
    direction: str
    delta_t: float
    delta_k: sp.csr_matrix

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")


@dataclass(frozen=True)
class SectionStability:
    """Both stability values of one section and the steps they used."""

    section_id: int
    thickness: float
    delta_t: float           # nominal step eta * t, used for the increase
    delta_t_decrease: float  # decrease step, capped so t - dt >= lower bound
    beta_plus: float
    beta_minus: float


@dataclass(frozen=True)
class StabilityReport:
    """Per-section stability values computed from buckling mode 1."""

    rows: tuple[SectionStability, ...]
    eta: float
    mode_used: int = 1

    def __len__(self) -> int:
        return len(self.rows)

    def beta_plus(self) -> np.ndarray:
        return np.array([r.beta_plus for r in self.rows])

    def beta_minus(self) -> np.ndarray:
        return np.array([r.beta_minus for r in self.rows])


def section_delta_stiffness(
    model: PanelModel,
    design,
    section_id: int,
    delta_t: float,
    direction: str,
    dof_map=None,
) -> SectionDelta:
    """Difference of the section's assembled stiffness at the perturbed thickness."""
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    if delta_t < 0.0:
        raise StepTooLargeError("delta_t must be non-negative")
    t = thickness_array(model, design)
    t0 = float(t[section_id])
    t1 = t0 + delta_t if direction == "increase" else t0 - delta_t
    if t1 <= 0.0:
        raise StepTooLargeError(
            f"section {section_id}: thickness {t0} with step {delta_t} "
            "would become non-positive"
        )
    if dof_map is None:
        dof_map = build_dof_map(model)
    dx, dy = model.element_size
    mat = model.material
    dk = element_stiffness(dx, dy, t1, mat).matrix - element_stiffness(dx, dy, t0, mat).matrix

    eids = np.fromiter(model.sections[section_id].element_ids, dtype=np.int64)
    gdof = element_dof_indices(model, dof_map)[eids]
    rows = np.repeat(gdof, 24, axis=1).ravel()
    cols = np.tile(gdof, (1, 24)).ravel()
    vals = np.tile(dk.ravel(), eids.size)
    keep = (rows >= 0) & (cols >= 0)
    n = dof_map.n_free
    mat_out = sp.coo_matrix((vals[keep], (rows[keep], cols[keep])), shape=(n, n)).tocsr()
    mat_out = (mat_out + mat_out.T) * 0.5
    return SectionDelta(section_id, direction, delta_t, mat_out)


def buckling_stability(modes: BucklingModes, delta: SectionDelta) -> float:
    """Quadratic form of buckling mode 1 against the section stiffness change."""
    u1 = modes.eigenvectors[:, 0]
    return float(u1 @ (delta.delta_k @ u1))


def fd_lambda_sensitivity(
    model: PanelModel,
    design,
    section_id: int,
    delta_t: float,
    direction: str,
    lambda_base: float | None = None,
    modes: int = 1,
) -> float:
    """Exact first-eigenvalue change from a full re-analysis at the perturbed design.

    Bounds are not applied: the oracle may probe outside the design box as
    long as the thickness stays positive.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    t = thickness_array(model, design).copy()
    sign = 1.0 if direction == "increase" else -1.0
    t[section_id] += sign * delta_t
    if t[section_id] <= 0.0:
        raise StepTooLargeError(
            f"section {section_id}: perturbed thickness {t[section_id]} <= 0"
        )
    if lambda_base is None:
        lambda_base = analyze(model, design, m=modes).modes.critical
    lam = analyze(model, t, m=modes).modes.critical
    return float(lam - lambda_base)


def step_sizes(model: PanelModel, design, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nominal and decrease-capped perturbation steps per section.

    The nominal step is eta * t_i. The decrease leg is additionally capped so
    t_i - dt stays at or above the lower bound (zero when already there); the
    increase leg keeps the nominal step so sections sitting at the lower
    bound still rank for growth.
    """
    t = thickness_array(model, design)
    nominal = eta * t
    dec = np.minimum(nominal, t - model.lower_bounds())
    return nominal, np.maximum(dec, 0.0)


def stability_report(
    model: PanelModel,
    design,
    modes: BucklingModes,
    eta: float = 0.05,
) -> StabilityReport:
    """Both beta values for every section at the relative step eta."""
    if not (0.0 < eta):
        raise ValueError("eta must be positive")
    t = thickness_array(model, design)
    nominal, dec = step_sizes(model, design, eta)
    dof_map = build_dof_map(model)
    rows = []
    for i in range(model.n_sections):
        dk_p = section_delta_stiffness(model, design, i, float(nominal[i]), "increase", dof_map)
        bp = buckling_stability(modes, dk_p)
        if dec[i] > 0.0:
            dk_m = section_delta_stiffness(model, design, i, float(dec[i]), "decrease", dof_map)
            bm = buckling_stability(modes, dk_m)
        else:
            bm = 0.0  # at the lower bound: no admissible decrease
        rows.append(SectionStability(i, float(t[i]), float(nominal[i]), float(dec[i]), bp, bm))
    return StabilityReport(tuple(rows), eta)
