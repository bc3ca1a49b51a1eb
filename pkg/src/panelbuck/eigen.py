"""Generalized buckling eigenproblem (K - lambda * K_ss) u = 0.

The pencil is attacked through its reciprocal form K_ss u = mu K u with
mu = 1/lambda: K is positive definite, so the largest positive mu are the
critical load factors. Small systems go through a dense full-spectrum solve;
larger ones use ARPACK with K factorized (shift-invert about zero), seeded
with a fixed start vector so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .assembly import AssembledSystem, StaticSolution, assemble, assemble_geometric, static_solve
from .errors import DegenerateModeError, EigenSolverError, NoBucklingModeError
from .model import PanelModel

DENSE_DOF_THRESHOLD = 500
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class BucklingModes:
    """Ascending load factors and K_ss-normalized eigenvectors.

    eigenvectors[:, j] satisfies u_j^T K_ss u_j = 1 and has its first
    non-negligible component positive.
    """

    eigenvalues: np.ndarray   # (m,) ascending, all positive
    eigenvectors: np.ndarray  # (n_free, m)
    m: int

    @property
    def critical(self) -> float:
        return float(self.eigenvalues[0])


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for j in range(out.shape[1]):
        v = out[:, j]
        nz = np.nonzero(np.abs(v) > 1e-12 * np.abs(v).max())[0]
        if nz.size and v[nz[0]] < 0.0:
            out[:, j] = -v
    return out


def buckling_solve(
    system: AssembledSystem,
    m: int = 25,
    method: str = "auto",
    dense_threshold: int = DENSE_DOF_THRESHOLD,
) -> BucklingModes:
    """Smallest m positive load factors with K_ss-normalized eigenvectors.

    method: "auto" picks dense below `dense_threshold` free dofs, otherwise
    the ARPACK path; "dense"/"iterative" force one.
    """
    if system.K_ss is None:
        raise ValueError("system has no geometric stiffness; run assemble_geometric")
    n = system.n_free
    if not (1 <= m <= n):
        raise ValueError(f"mode count {m} outside 1..{n}")
    if method not in ("auto", "dense", "iterative"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "dense" if n <= dense_threshold else "iterative"
    if method == "iterative" and m + 1 >= n:
        method = "dense"  # ARPACK needs k < n

    if method == "dense":
        mu, vec = sla.eigh(system.K_ss.toarray(), system.K.toarray())
    else:
        k = min(m + 3, n - 1)
        try:
            mu, vec = spla.eigsh(
                system.K_ss, k=k, M=system.K, which="LA",
                v0=np.ones(n), maxiter=1000, tol=0,
            )
        except spla.ArpackNoConvergence as exc:
            raise EigenSolverError(f"ARPACK failed to converge: {exc}") from exc

    cutoff = 1e-12 * max(np.abs(mu).max(), 1e-300)
    pos = np.nonzero(mu > cutoff)[0]
    if pos.size == 0:
        raise NoBucklingModeError("no positive buckling eigenvalue found")
    order = pos[np.argsort(mu[pos])[::-1]][:m]  # largest mu = smallest lambda
    mu_sel = mu[order]
    lam = 1.0 / mu_sel
    # dense/ARPACK both return K-orthonormal vectors; rescale to u^T K_ss u = 1
    vecs = vec[:, order] / np.sqrt(mu_sel)
    vecs = _fix_signs(vecs)

    worst = _worst_residual(system, lam, vecs)
    if worst > RESIDUAL_RTOL:
        raise EigenSolverError(f"eigenpair residual {worst:.2e} exceeds {RESIDUAL_RTOL}")
    return BucklingModes(lam, vecs, int(lam.size))


def _worst_residual(system: AssembledSystem, lam: np.ndarray, vecs: np.ndarray) -> float:
    worst = 0.0
    for j in range(lam.size):
        u = vecs[:, j]
        ku = system.K @ u
        r = np.linalg.norm(ku - lam[j] * (system.K_ss @ u)) / np.linalg.norm(ku)
        worst = max(worst, r)
    return worst


def rayleigh_quotient(system: AssembledSystem, u: np.ndarray) -> float:
    """Load-factor estimate u^T K u / u^T K_ss u for an arbitrary vector."""
    if system.K_ss is None:
        raise ValueError("system has no geometric stiffness; run assemble_geometric")
    u = np.asarray(u, dtype=float)
    num = float(u @ (system.K @ u))
    den = float(u @ (system.K_ss @ u))
    scale = np.abs(u).max() ** 2 * abs(system.K_ss).max()
    if abs(den) <= 1e-14 * max(scale, 1e-300):
        raise DegenerateModeError("u^T K_ss u vanishes for this vector")
    return num / den


@dataclass(frozen=True)
class AnalysisResult:
    """One full pre-buckling + eigenvalue analysis of a design."""

    system: AssembledSystem
    static: StaticSolution
    modes: BucklingModes


def analyze(model: PanelModel, design, m: int = 25, method: str = "auto") -> AnalysisResult:
    """Assemble, solve the static pre-buckling state, and extract m buckling modes.

    m is capped at the free dof count so coarse meshes stay usable.
    """
    system = assemble(model, design)
    sol = static_solve(system)
    system = assemble_geometric(model, design, sol, system=system)
    modes = buckling_solve(system, m=min(m, system.n_free), method=method)
    return AnalysisResult(system, sol, modes)
