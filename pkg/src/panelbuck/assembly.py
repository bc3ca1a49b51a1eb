"""Global assembly, boundary-condition reduction, and the pre-buckling solve.

Boundary conditions are applied by numbering only the free dofs; tied dofs
(the loaded edge's in-plane displacement) share one reduced index, which both
enforces the tie and accumulates the consistent nodal loads onto it. The
stress-stiffness matrix is stored with the destabilizing-positive sign, so
the buckling pencil is (K - lambda * K_ss) with lambda > 0 in compression.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .elements import (
    BENDING_DOFS,
    BENDING_SIGNS,
    _plane_stress_law,
    element_stiffness,
    geometric_stiffness_parts,
    membrane_strain_operator,
)
from .errors import EmptySystemError, SingularSystemError
from .model import LoadCase, PanelModel, thickness_array

N_DOF = 6  # per node: u, v, w, thx, thy, thz


@dataclass(frozen=True)
class DofMap:
    """Node/dof -> reduced index (-1 when constrained); tied dofs share an index."""

    index: np.ndarray  # (n_nodes, 6) int
    n_free: int

    def reduce(self, full: np.ndarray) -> np.ndarray:
        """Fold a full-length nodal vector into the reduced space (summing ties)."""
        out = np.zeros(self.n_free)
        flat = self.index.ravel()
        mask = flat >= 0
        np.add.at(out, flat[mask], full.ravel()[mask])
        return out

    def expand(self, reduced: np.ndarray) -> np.ndarray:
        """Scatter a reduced vector back to full nodal layout (zeros where fixed)."""
        flat = self.index.ravel()
        out = np.zeros(flat.size)
        mask = flat >= 0
        out[mask] = reduced[flat[mask]]
        return out.reshape(self.index.shape)


@dataclass(frozen=True)
class AssembledSystem:
    """Reduced global matrices sharing one dof map. K_ss is None until the
    geometric assembly has run."""

    K: sp.csr_matrix
    K_ss: sp.csr_matrix | None
    dof_map: DofMap
    model: PanelModel
    thicknesses: np.ndarray  # per-section values K was assembled with

    @property
    def n_free(self) -> int:
        return self.dof_map.n_free


@dataclass(frozen=True)
class StaticSolution:
    """Pre-buckling displacement field and element membrane resultants."""

    displacements: np.ndarray        # (n_free,)
    membrane_resultants: np.ndarray  # (n_elements, 3): Nx, Ny, Nxy


def build_dof_map(model: PanelModel) -> DofMap:
    """Number the free dofs after eliminating supports and merging ties."""
    nn = model.n_nodes
    constrained = np.zeros((nn, N_DOF), dtype=bool)
    bcs = model.bcs
    for edge in bcs.out_of_plane_edges:
        constrained[model.edge_nodes(edge), 2] = True
    axis = model.load.axis
    constrained[model.edge_nodes(model.fixed_edge), axis] = True
    lateral = 1 - axis
    for edge in bcs.lateral_roller_edges:
        constrained[model.edge_nodes(edge), lateral] = True
    for edge in bcs.clamped_edges:
        constrained[model.edge_nodes(edge), :] = True
    if bcs.pin_corner:
        constrained[model.node_id(0, 0), lateral] = True

    master = -np.ones((nn, N_DOF), dtype=np.int64)  # -1: self
    if bcs.tie_loaded_edge:
        loaded = model.edge_nodes(model.load.loaded_edge)
        keep = [n for n in loaded if not constrained[n, axis]]
        if keep:
            head = keep[0]
            for n in keep[1:]:
                master[n, axis] = head

    index = -np.ones((nn, N_DOF), dtype=np.int64)
    nxt = 0
    for n in range(nn):
        for d in range(N_DOF):
            if constrained[n, d]:
                continue
            m = master[n, d]
            if m >= 0:
                index[n, d] = index[m, d]
            else:
                index[n, d] = nxt
                nxt += 1
    return DofMap(index, nxt)


def element_dof_indices(model: PanelModel, dof_map: DofMap) -> np.ndarray:
    """(n_elements, 24) reduced dof index per element entry (-1 when fixed)."""
    conn = model.element_nodes()
    return dof_map.index[conn].reshape(model.n_elements, 24)


def _scatter_symmetric(values: np.ndarray, gdof: np.ndarray, n_free: int) -> sp.csr_matrix:
    """COO-scatter per-element dense blocks into a symmetric reduced CSR matrix."""
    nel, nd, _ = values.shape
    rows = np.repeat(gdof, nd, axis=1).ravel()
    cols = np.tile(gdof, (1, nd)).ravel()
    vals = values.reshape(nel, -1).ravel()
    keep = (rows >= 0) & (cols >= 0)
    K = sp.coo_matrix(
        (vals[keep], (rows[keep], cols[keep])), shape=(n_free, n_free)
    ).tocsr()
    return (K + K.T) * 0.5


def assemble(model: PanelModel, design) -> AssembledSystem:
    """Global stiffness on the free dofs; K_ss left empty."""
    t = thickness_array(model, design)
    dof_map = build_dof_map(model)
    if dof_map.n_free == 0:
        raise EmptySystemError("boundary conditions removed every dof")
    dx, dy = model.element_size
    k_sections = np.stack([
        element_stiffness(dx, dy, float(ti), model.material).matrix for ti in t
    ])
    gdof = element_dof_indices(model, dof_map)
    values = kernels.gather_stiffness(model.section_of_element(), k_sections)
    K = _scatter_symmetric(values, gdof, dof_map.n_free)
    return AssembledSystem(K, None, dof_map, model, t)


def load_vector(model: PanelModel, dof_map: DofMap, load: LoadCase | None = None) -> np.ndarray:
    """Consistent nodal loads of the uniform edge line load, reduced (ties summed)."""
    if load is None:
        load = model.load
    nodes = model.edge_nodes(load.loaded_edge)
    seg = model.width / model.nx if load.axis == 1 else model.height / model.ny
    full = np.zeros((model.n_nodes, N_DOF))
    weights = np.full(nodes.size, seg)
    weights[0] = weights[-1] = seg / 2.0
    full[nodes, load.axis] = load.sign * load.reference_magnitude * weights
    return dof_map.reduce(full)


def static_solve(system: AssembledSystem, load: LoadCase | None = None) -> StaticSolution:
    """Direct solve of K d = f plus one refinement step; recovers centroidal
    membrane resultants per element."""
    model = system.model
    f = load_vector(model, system.dof_map, load)
    try:
        lu = spla.splu(system.K.tocsc())
        d = lu.solve(f)
        d += lu.solve(f - system.K @ d)
    except RuntimeError as exc:
        raise SingularSystemError(f"stiffness factorization failed: {exc}") from exc
    fn = np.linalg.norm(f)
    if fn > 0.0:
        resid = np.linalg.norm(system.K @ d - f) / fn
        if not np.isfinite(resid) or resid > 1e-8:
            raise SingularSystemError(
                f"static solve residual {resid:.2e}; system is singular or "
                "severely ill-conditioned"
            )
    return StaticSolution(d, _membrane_resultants(system, d))


def _membrane_resultants(system: AssembledSystem, d: np.ndarray) -> np.ndarray:
    model = system.model
    full = system.dof_map.expand(d)  # (n_nodes, 6)
    conn = model.element_nodes()
    u_elems = full[conn][:, :, :2].reshape(model.n_elements, 8)
    dx, dy = model.element_size
    b0 = membrane_strain_operator(dx / 2.0, dy / 2.0)
    mat = model.material
    law = _plane_stress_law(mat.poisson_ratio) * (
        mat.youngs_modulus / (1.0 - mat.poisson_ratio**2)
    )
    t_elems = system.thicknesses[model.section_of_element()]
    return kernels.membrane_resultants(u_elems, b0, law, t_elems)


def assemble_geometric(
    model: PanelModel,
    design,
    sol: StaticSolution,
    system: AssembledSystem | None = None,
) -> AssembledSystem:
    """Fill K_ss from the pre-buckling resultants (destabilizing-positive sign).

    Passing the system from `assemble` reuses K and the dof map; otherwise
    they are rebuilt, keeping this a pure function of (model, design, sol).
    """
    if system is None:
        system = assemble(model, design)
    dx, dy = model.element_size
    gxx, gyy, gxy = geometric_stiffness_parts(dx / 2.0, dy / 2.0)
    kg12 = kernels.geometric_values(
        np.ascontiguousarray(sol.membrane_resultants), gxx, gyy, gxy
    )
    signed = kg12 * np.outer(BENDING_SIGNS, BENDING_SIGNS)
    gdof = element_dof_indices(model, system.dof_map)[:, BENDING_DOFS]
    K_ss = -_scatter_symmetric(signed, gdof, system.n_free)
    return AssembledSystem(system.K, K_ss, system.dof_map, model, system.thicknesses)
