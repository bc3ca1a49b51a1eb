"""Panel definition: geometry, structured mesh, thickness sections, loads, supports.

The panel is a flat rectangle in the x-y plane meshed into nx*ny axis-aligned
rectangular elements. Elements are numbered row-major from the bottom-left
corner (element e sits at row e // nx, column e % nx); nodes likewise on the
(nx+1)*(ny+1) grid. Each element belongs to exactly one thickness section,
the design variables of the sizing problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, InvalidDesignError, PartitionError

EDGES = ("bottom", "top", "left", "right")

# load compresses the panel inward from the loaded edge
_LOAD_AXIS = {"bottom": 1, "top": 1, "left": 0, "right": 0}
_LOAD_SIGN = {"bottom": +1.0, "top": -1.0, "left": +1.0, "right": -1.0}
_OPPOSITE = {"bottom": "top", "top": "bottom", "left": "right", "right": "left"}


@dataclass(frozen=True)
class Material:
    """Linear-elastic isotropic material."""

    youngs_modulus: float
    poisson_ratio: float
    density: float

    def __post_init__(self):
        if not (self.youngs_modulus > 0.0):
            raise GeometryError("youngs_modulus must be positive")
        if not (0.0 <= self.poisson_ratio < 0.5):
            raise GeometryError("poisson_ratio must lie in [0, 0.5)")
        if not (self.density > 0.0):
            raise GeometryError("density must be positive")


@dataclass(frozen=True)
class Section:
    """Group of elements sharing one thickness design variable."""

    id: int
    element_ids: tuple[int, ...]
    lower_bound: float
    upper_bound: float

    def __post_init__(self):
        if not self.element_ids:
            raise PartitionError(f"section {self.id} has no elements")
        if not (0.0 < self.lower_bound < self.upper_bound):
            raise GeometryError(
                f"section {self.id}: need 0 < lower_bound < upper_bound, "
                f"got [{self.lower_bound}, {self.upper_bound}]"
            )


@dataclass(frozen=True)
class LoadCase:
    """Compressive reference line load applied along one edge."""

    reference_magnitude: float
    loaded_edge: str = "top"

    def __post_init__(self):
        if not (self.reference_magnitude > 0.0):
            raise GeometryError("reference_magnitude must be positive")
        if self.loaded_edge not in EDGES:
            raise GeometryError(f"unknown edge {self.loaded_edge!r}")

    @property
    def axis(self) -> int:
        """In-plane dof index (0=u, 1=v) of the load direction."""
        return _LOAD_AXIS[self.loaded_edge]

    @property
    def sign(self) -> float:
        return _LOAD_SIGN[self.loaded_edge]


@dataclass(frozen=True)
class BoundaryConditions:
    """Per-edge support flags.

    out_of_plane_edges carry w = 0 (simple support). The edge opposite the
    loaded one is fixed in the load direction; the loaded edge's in-plane
    displacement is tied uniform so the reference load stays a pure resultant.
    lateral_roller_edges suppress the in-plane displacement transverse to the
    load, and one corner is pinned to kill the remaining in-plane rigid mode.
    """

    out_of_plane_edges: tuple[str, ...] = EDGES
    lateral_roller_edges: tuple[str, ...] = ()
    clamped_edges: tuple[str, ...] = ()
    tie_loaded_edge: bool = True
    pin_corner: bool = True

    def __post_init__(self):
        for e in self.out_of_plane_edges + self.lateral_roller_edges + self.clamped_edges:
            if e not in EDGES:
                raise GeometryError(f"unknown edge {e!r} in boundary conditions")


@dataclass(frozen=True)
class PanelModel:
    """Immutable panel model: geometry, mesh, sections, material, load, supports."""

    width: float
    height: float
    nx: int
    ny: int
    material: Material
    sections: tuple[Section, ...]
    load: LoadCase
    bcs: BoundaryConditions = field(default_factory=BoundaryConditions)

    def __post_init__(self):
        if not (self.width > 0.0 and self.height > 0.0):
            raise GeometryError("panel width and height must be positive")
        if self.nx < 1 or self.ny < 1:
            raise GeometryError("nx and ny must be at least 1")
        seen: set[int] = set()
        for sec in self.sections:
            for e in sec.element_ids:
                if e < 0 or e >= self.n_elements or e in seen:
                    raise PartitionError(
                        f"section {sec.id}: element {e} is out of range or duplicated"
                    )
                seen.add(e)
        if len(seen) != self.n_elements:
            missing = self.n_elements - len(seen)
            raise PartitionError(f"{missing} elements belong to no section")

    # -- mesh bookkeeping ------------------------------------------------

    @property
    def n_elements(self) -> int:
        return self.nx * self.ny

    @property
    def n_nodes(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    @property
    def n_sections(self) -> int:
        return len(self.sections)

    @property
    def element_size(self) -> tuple[float, float]:
        """(dx, dy) of every mesh rectangle."""
        return self.width / self.nx, self.height / self.ny

    @property
    def element_area(self) -> float:
        dx, dy = self.element_size
        return dx * dy

    def node_id(self, row: int, col: int) -> int:
        return row * (self.nx + 1) + col

    def node_coords(self) -> np.ndarray:
        """(n_nodes, 2) array of node x, y positions."""
        xs = np.linspace(0.0, self.width, self.nx + 1)
        ys = np.linspace(0.0, self.height, self.ny + 1)
        xx, yy = np.meshgrid(xs, ys)
        return np.column_stack([xx.ravel(), yy.ravel()])

    def element_nodes(self) -> np.ndarray:
        """(n_elements, 4) connectivity, counterclockwise from bottom-left."""
        nnx = self.nx + 1
        conn = np.empty((self.n_elements, 4), dtype=np.int64)
        e = 0
        for r in range(self.ny):
            base = r * nnx
            for c in range(self.nx):
                n0 = base + c
                conn[e] = (n0, n0 + 1, n0 + 1 + nnx, n0 + nnx)
                e += 1
        return conn

    def edge_nodes(self, edge: str) -> np.ndarray:
        """Node ids along one edge, in ascending coordinate order."""
        if edge == "bottom":
            return np.array([self.node_id(0, c) for c in range(self.nx + 1)])
        if edge == "top":
            return np.array([self.node_id(self.ny, c) for c in range(self.nx + 1)])
        if edge == "left":
            return np.array([self.node_id(r, 0) for r in range(self.ny + 1)])
        if edge == "right":
            return np.array([self.node_id(r, self.nx) for r in range(self.ny + 1)])
        raise GeometryError(f"unknown edge {edge!r}")

    @property
    def fixed_edge(self) -> str:
        """Edge opposite the loaded one, fixed in the load direction."""
        return _OPPOSITE[self.load.loaded_edge]

    def section_of_element(self) -> np.ndarray:
        """(n_elements,) map element id -> section index."""
        out = np.empty(self.n_elements, dtype=np.int64)
        for i, sec in enumerate(self.sections):
            out[list(sec.element_ids)] = i
        return out

    def section_areas(self) -> np.ndarray:
        return np.array([len(s.element_ids) * self.element_area for s in self.sections])

    def lower_bounds(self) -> np.ndarray:
        return np.array([s.lower_bound for s in self.sections])

    def upper_bounds(self) -> np.ndarray:
        return np.array([s.upper_bound for s in self.sections])


@dataclass(frozen=True)
class DesignVector:
    """Per-section thicknesses, validated against the section bounds."""

    thicknesses: tuple[float, ...]
    clamped: tuple[int, ...] = ()

    def __post_init__(self):
        t = np.asarray(self.thicknesses, dtype=float)
        if not np.all(np.isfinite(t)):
            raise InvalidDesignError("thicknesses must be finite")
        if np.any(t <= 0.0):
            raise InvalidDesignError("thicknesses must be positive")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.thicknesses, dtype=float)

    def __len__(self) -> int:
        return len(self.thicknesses)


def thickness_array(model: PanelModel, design) -> np.ndarray:
    """Accept a DesignVector or a bare per-section array; validate the length.

    Bare arrays bypass bound checking on purpose: the finite-difference
    oracle probes designs outside the box.
    """
    t = design.as_array() if isinstance(design, DesignVector) else np.asarray(design, float)
    if t.shape != (model.n_sections,):
        raise InvalidDesignError(
            f"expected {model.n_sections} thicknesses, got shape {t.shape}"
        )
    if not np.all(np.isfinite(t)):
        raise InvalidDesignError("thicknesses must be finite")
    if np.any(t <= 0.0):
        raise InvalidDesignError("thicknesses must be positive")
    return t


def make_design(model: PanelModel, raw, clamped: tuple[int, ...] = ()) -> DesignVector:
    """Construct a DesignVector, enforcing lb <= t <= ub strictly."""
    t = thickness_array(model, raw)
    lb, ub = model.lower_bounds(), model.upper_bounds()
    eps = 1e-12
    if np.any(t < lb * (1 - eps) - eps) or np.any(t > ub * (1 + eps) + eps):
        raise InvalidDesignError("thicknesses violate the section bounds")
    t = np.clip(t, lb, ub)  # snap float dust onto the bounds
    return DesignVector(tuple(float(v) for v in t), clamped)


def apply_design(model: PanelModel, raw) -> DesignVector:
    """Clamp raw thicknesses into the design box, recording clamped entries."""
    t = np.asarray(raw, dtype=float)
    if t.shape != (model.n_sections,):
        raise InvalidDesignError(
            f"expected {model.n_sections} thicknesses, got shape {t.shape}"
        )
    if not np.all(np.isfinite(t)):
        raise InvalidDesignError("raw design contains non-finite values")
    lb, ub = model.lower_bounds(), model.upper_bounds()
    clamped = np.nonzero((t < lb) | (t > ub))[0]
    t = np.clip(t, lb, ub)
    return DesignVector(tuple(float(v) for v in t), tuple(int(i) for i in clamped))


def mass(model: PanelModel, design) -> float:
    """Panel mass: sum over sections of density * area * thickness."""
    t = thickness_array(model, design)
    return float(np.dot(model.section_areas(), t) * model.material.density)


def strip_sections(nx: int, ny: int, rows_per_section, lb: float, ub: float) -> tuple[Section, ...]:
    """Build horizontal-strip sections from explicit row lists (bottom-up)."""
    rows_per_section = [list(r) for r in rows_per_section]
    if nx < 2 and len(rows_per_section) > 1:
        raise GeometryError("strip-sectioned panels need nx >= 2")
    secs = []
    for i, rows in enumerate(rows_per_section):
        eids = []
        for r in rows:
            if r < 0 or r >= ny:
                raise PartitionError(f"section {i}: row {r} outside mesh of {ny} rows")
            eids.extend(range(r * nx, (r + 1) * nx))
        secs.append(Section(i, tuple(eids), lb, ub))
    return tuple(secs)


def even_strip_rows(ny: int, count: int) -> list[list[int]]:
    """Split ny mesh rows into `count` equal strips; error if not divisible."""
    if count < 1:
        raise PartitionError("strip count must be at least 1")
    if ny % count != 0:
        raise PartitionError(
            f"{count} equal strips do not partition {ny} element rows; "
            "give explicit row lists instead"
        )
    per = ny // count
    return [list(range(i * per, (i + 1) * per)) for i in range(count)]


def balanced_strip_rows(ny: int, count: int) -> list[list[int]]:
    """Near-even symmetric split used for the library defaults (16 rows -> 3,3,4,3,3)."""
    base = ny // count
    extra = ny - base * count
    sizes = [base] * count
    mid = count // 2
    order = sorted(range(count), key=lambda i: (abs(i - mid), i))
    for k in range(extra):
        sizes[order[k]] += 1
    rows, at = [], 0
    for s in sizes:
        rows.append(list(range(at, at + s)))
        at += s
    return rows


DEFAULTS = {
    "width": 1.0,
    "height": 1.0,
    "nx": 16,
    "ny": 16,
    "E": 70.0e9,
    "nu": 0.33,
    "rho": 2700.0,
    "n_sections": 5,
    "lb": 0.001,
    "ub": 1.0,
    "t0": 0.005,
    "load_magnitude": 11000.0,
    "loaded_edge": "top",
}


def build_panel_model(
    width: float = DEFAULTS["width"],
    height: float = DEFAULTS["height"],
    nx: int = DEFAULTS["nx"],
    ny: int = DEFAULTS["ny"],
    material: Material | None = None,
    sections=None,
    load: LoadCase | None = None,
    bcs: BoundaryConditions | None = None,
) -> PanelModel:
    """Assemble a PanelModel from parts, filling library defaults for the rest.

    `sections` may be a tuple of Section objects, an int strip count (must
    divide ny), or a list of row-index lists. When omitted, a balanced
    5-strip layout with the default bounds is used.
    """
    if material is None:
        material = Material(DEFAULTS["E"], DEFAULTS["nu"], DEFAULTS["rho"])
    if load is None:
        load = LoadCase(DEFAULTS["load_magnitude"], DEFAULTS["loaded_edge"])
    if bcs is None:
        bcs = BoundaryConditions()
    if sections is None:
        rows = balanced_strip_rows(ny, min(DEFAULTS["n_sections"], ny))
        sections = strip_sections(nx, ny, rows, DEFAULTS["lb"], DEFAULTS["ub"])
    elif isinstance(sections, int):
        rows = even_strip_rows(ny, sections)
        sections = strip_sections(nx, ny, rows, DEFAULTS["lb"], DEFAULTS["ub"])
    elif sections and not isinstance(sections[0], Section):
        sections = strip_sections(nx, ny, sections, DEFAULTS["lb"], DEFAULTS["ub"])
    else:
        sections = tuple(sections)
    return PanelModel(width, height, nx, ny, material, sections, load, bcs)
