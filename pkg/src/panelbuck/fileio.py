"""Model description files and report writers.

The model file is a UTF-8 JSON document:

    {
      "width": 1.0, "height": 1.0, "nx": 16, "ny": 16,
      "material": {"E": 7.0e10, "nu": 0.33, "rho": 2700.0},
      "sections": [
        {"rows": [0, 1, 2], "lb": 0.001, "ub": 1.0, "t0": 0.005},
        ...
      ],
      "load": {"edge": "top", "magnitude": 11000.0},
      "bcs": {"lateral_rollers": ["left", "right"]}
    }

`sections` may instead be {"strips": N, "lb": ..., "ub": ..., "t0": ...} for
N equal horizontal strips (N must divide ny), and each section entry may give
an explicit "elements" list instead of "rows". Omitted optional fields fall
back to the library defaults; unknown fields are rejected.

All writers emit plain CSV (shortest round-trip float formatting) or sorted
JSON, so outputs are byte-deterministic for identical inputs.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .errors import ParseError
from .model import (
    DEFAULTS,
    EDGES,
    BoundaryConditions,
    DesignVector,
    LoadCase,
    Material,
    PanelModel,
    Section,
    balanced_strip_rows,
    even_strip_rows,
    make_design,
    strip_sections,
)


def fixture_path(name: str):
    """Path to a bundled fixture file (e.g. "panel5.json")."""
    return resources.files("panelbuck") / "fixtures" / name


def _reject_unknown(obj: dict, allowed, where: str):
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ParseError(f"{where}: unknown field(s) {', '.join(unknown)}")


def _get_number(obj: dict, key: str, where: str, default=None, integer=False):
    if key not in obj:
        if default is None:
            raise ParseError(f"{where}: missing required field '{key}'")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}.{key}: expected a number, got {type(v).__name__}")
    if integer:
        if int(v) != v:
            raise ParseError(f"{where}.{key}: expected an integer, got {v}")
        return int(v)
    return float(v)


def _parse_material(obj, where="material") -> Material:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    _reject_unknown(obj, ("E", "nu", "rho"), where)
    return Material(
        _get_number(obj, "E", where, DEFAULTS["E"]),
        _get_number(obj, "nu", where, DEFAULTS["nu"]),
        _get_number(obj, "rho", where, DEFAULTS["rho"]),
    )


def _parse_load(obj, where="load") -> LoadCase:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    _reject_unknown(obj, ("edge", "magnitude"), where)
    edge = obj.get("edge", DEFAULTS["loaded_edge"])
    if edge not in EDGES:
        raise ParseError(f"{where}.edge: unknown edge {edge!r}")
    return LoadCase(_get_number(obj, "magnitude", where, DEFAULTS["load_magnitude"]), edge)


def _parse_edge_list(v, where) -> tuple[str, ...]:
    if not isinstance(v, list) or not all(isinstance(e, str) for e in v):
        raise ParseError(f"{where}: expected a list of edge names")
    for e in v:
        if e not in EDGES:
            raise ParseError(f"{where}: unknown edge {e!r}")
    return tuple(v)


def _parse_bcs(obj, where="bcs") -> BoundaryConditions:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    allowed = ("out_of_plane", "lateral_rollers", "clamped", "tie_loaded_edge", "pin_corner")
    _reject_unknown(obj, allowed, where)
    kwargs = {}
    if "out_of_plane" in obj:
        kwargs["out_of_plane_edges"] = _parse_edge_list(obj["out_of_plane"], f"{where}.out_of_plane")
    if "lateral_rollers" in obj:
        kwargs["lateral_roller_edges"] = _parse_edge_list(obj["lateral_rollers"], f"{where}.lateral_rollers")
    if "clamped" in obj:
        kwargs["clamped_edges"] = _parse_edge_list(obj["clamped"], f"{where}.clamped")
    for key in ("tie_loaded_edge", "pin_corner"):
        if key in obj:
            if not isinstance(obj[key], bool):
                raise ParseError(f"{where}.{key}: expected a boolean")
            kwargs[key] = obj[key]
    return BoundaryConditions(**kwargs)


def _parse_int_list(v, where) -> list[int]:
    if not isinstance(v, list) or not v:
        raise ParseError(f"{where}: expected a non-empty list of integers")
    out = []
    for e in v:
        if isinstance(e, bool) or not isinstance(e, int):
            raise ParseError(f"{where}: expected integers, got {e!r}")
        out.append(e)
    return out


def _parse_sections(obj, nx: int, ny: int):
    """Returns (sections tuple, t0 array)."""
    if isinstance(obj, dict):
        _reject_unknown(obj, ("strips", "lb", "ub", "t0"), "sections")
        count = _get_number(obj, "strips", "sections", integer=True)
        lb = _get_number(obj, "lb", "sections", DEFAULTS["lb"])
        ub = _get_number(obj, "ub", "sections", DEFAULTS["ub"])
        t0 = _get_number(obj, "t0", "sections", DEFAULTS["t0"])
        rows = even_strip_rows(ny, count)
        return strip_sections(nx, ny, rows, lb, ub), np.full(count, t0)
    if not isinstance(obj, list) or not obj:
        raise ParseError("sections: expected a non-empty list or a strips object")
    secs, t0s = [], []
    for i, entry in enumerate(obj):
        where = f"sections[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        _reject_unknown(entry, ("rows", "elements", "lb", "ub", "t0"), where)
        if ("rows" in entry) == ("elements" in entry):
            raise ParseError(f"{where}: give exactly one of 'rows' or 'elements'")
        lb = _get_number(entry, "lb", where, DEFAULTS["lb"])
        ub = _get_number(entry, "ub", where, DEFAULTS["ub"])
        if not (0.0 < lb < ub):
            raise ParseError(f"{where}: need 0 < lb < ub, got [{lb}, {ub}]")
        t0s.append(_get_number(entry, "t0", where, DEFAULTS["t0"]))
        if "rows" in entry:
            rows = _parse_int_list(entry["rows"], f"{where}.rows")
            eids = tuple(r * nx + c for r in rows for c in range(nx))
        else:
            eids = tuple(_parse_int_list(entry["elements"], f"{where}.elements"))
        secs.append(Section(i, eids, lb, ub))
    return tuple(secs), np.array(t0s)


def parse_model_dict(doc: dict) -> tuple[PanelModel, DesignVector]:
    """Validate a parsed JSON document into a model and its initial design."""
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")
    allowed = ("width", "height", "nx", "ny", "material", "sections", "load", "bcs")
    _reject_unknown(doc, allowed, "top level")
    width = _get_number(doc, "width", "top level", DEFAULTS["width"])
    height = _get_number(doc, "height", "top level", DEFAULTS["height"])
    nx = _get_number(doc, "nx", "top level", DEFAULTS["nx"], integer=True)
    ny = _get_number(doc, "ny", "top level", DEFAULTS["ny"], integer=True)
    material = _parse_material(doc.get("material", {}))
    load = _parse_load(doc.get("load", {}))
    bcs = _parse_bcs(doc.get("bcs", {}))
    if "sections" in doc:
        sections, t0 = _parse_sections(doc["sections"], nx, ny)
    else:
        rows = balanced_strip_rows(ny, min(DEFAULTS["n_sections"], ny))
        sections = strip_sections(nx, ny, rows, DEFAULTS["lb"], DEFAULTS["ub"])
        t0 = np.full(len(sections), DEFAULTS["t0"])
    model = PanelModel(width, height, nx, ny, material, sections, load, bcs)
    design = make_design(model, t0)
    return model, design


def parse_model_file(path) -> tuple[PanelModel, DesignVector]:
    """Read, parse and validate a model description file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_model_dict(doc)


def model_to_dict(model: PanelModel, design: DesignVector) -> dict:
    """Serialize a model + design back into the file schema."""
    return {
        "width": model.width,
        "height": model.height,
        "nx": model.nx,
        "ny": model.ny,
        "material": {
            "E": model.material.youngs_modulus,
            "nu": model.material.poisson_ratio,
            "rho": model.material.density,
        },
        "sections": [
            {
                "elements": sorted(sec.element_ids),
                "lb": sec.lower_bound,
                "ub": sec.upper_bound,
                "t0": design.thicknesses[i],
            }
            for i, sec in enumerate(model.sections)
        ],
        "load": {"edge": model.load.loaded_edge, "magnitude": model.load.reference_magnitude},
        "bcs": {
            "out_of_plane": list(model.bcs.out_of_plane_edges),
            "lateral_rollers": list(model.bcs.lateral_roller_edges),
            "clamped": list(model.bcs.clamped_edges),
            "tie_loaded_edge": model.bcs.tie_loaded_edge,
            "pin_corner": model.bcs.pin_corner,
        },
    }


def save_model(model: PanelModel, design: DesignVector, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(model_to_dict(model, design), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------- writers

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")


def write_history_csv(history, path) -> None:
    """iter, mass, lambda_1, feasible, moves, then one thickness column per section."""
    n = len(history.records[0].design)
    header = ["iter", "mass", "lambda_1", "feasible", "moves"] + [
        f"t_{i + 1}" for i in range(n)
    ]
    rows = []
    for r in history.records:
        moves = ";".join(m.encode() for m in r.moves)
        rows.append([r.iter, r.mass, r.lambda_1, r.feasible, moves, *r.design.thicknesses])
    _write_csv(path, header, rows)


def write_summary_json(history, path) -> None:
    final = history.final
    summary = {
        "status": history.termination,
        "iters": final.iter,
        "final_mass": final.mass,
        "final_lambda1": final.lambda_1,
        "best_feasible_iter": history.best_feasible,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_series_csvs(history, out_dir) -> list:
    """Plot-ready series: one row per iteration, matching the history CSV."""
    out_dir = _as_dir(out_dir)
    recs = history.records
    paths = []
    p = out_dir / "series_mass.csv"
    _write_csv(p, ["iter", "mass"], [[r.iter, r.mass] for r in recs])
    paths.append(p)
    p = out_dir / "series_lambda1.csv"
    _write_csv(p, ["iter", "lambda_1"], [[r.iter, r.lambda_1] for r in recs])
    paths.append(p)
    n = len(recs[0].design)
    p = out_dir / "series_thickness.csv"
    _write_csv(
        p,
        ["iter"] + [f"t_{i + 1}" for i in range(n)],
        [[r.iter, *r.design.thicknesses] for r in recs],
    )
    paths.append(p)
    return paths


def write_stability_csv(report, path) -> None:
    _write_csv(
        path,
        ["section_id", "t", "delta_t", "beta_plus", "beta_minus"],
        [
            [r.section_id, r.thickness, r.delta_t, r.beta_plus, r.beta_minus]
            for r in report.rows
        ],
    )


def write_eigenvalues_csv(modes, path) -> None:
    _write_csv(
        path,
        ["mode", "lambda"],
        [[j + 1, lam] for j, lam in enumerate(modes.eigenvalues)],
    )


def write_mode_shapes_csv(model: PanelModel, dof_map, modes, path) -> None:
    """Nodal (x, y, w) triples for every computed mode."""
    coords = model.node_coords()
    rows = []
    for j in range(modes.m):
        w_full = dof_map.expand(modes.eigenvectors[:, j])[:, 2]
        for n in range(model.n_nodes):
            rows.append([j + 1, n, coords[n, 0], coords[n, 1], w_full[n]])
    _write_csv(path, ["mode", "node", "x", "y", "w"], rows)


def write_comparison_csv(entries, path) -> None:
    """Comparison table rows: (name, history) pairs."""
    rows = []
    for name, h in entries:
        f = h.final
        rows.append([name, f.mass, f.lambda_1, f.iter, h.fe_solves, h.termination])
    _write_csv(
        path,
        ["optimizer", "final_mass", "final_lambda1", "iterations", "fe_solves", "termination"],
        rows,
    )


def _as_dir(p):
    from pathlib import Path

    d = Path(p)
    d.mkdir(parents=True, exist_ok=True)
    return d
