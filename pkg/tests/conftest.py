import numpy as np
import pytest

from panelbuck import (
    BoundaryConditions,
    LoadCase,
    Material,
    build_panel_model,
    make_design,
    parse_model_file,
)
from panelbuck.fileio import fixture_path

ALU = Material(70.0e9, 0.33, 2700.0)


@pytest.fixture(scope="session")
def desk():
    """The bundled desk-scale 5-strip panel and its initial design."""
    return parse_model_file(fixture_path("panel5.json"))


@pytest.fixture(scope="session")
def small_roller_model():
    """8x8 mesh, 4 mirror-symmetric strips, roller sides: cheap dense-path model."""
    model = build_panel_model(
        nx=8, ny=8,
        material=ALU,
        sections=[[0, 1], [2, 3], [4, 5], [6, 7]],
        load=LoadCase(11000.0, "top"),
        bcs=BoundaryConditions(lateral_roller_edges=("left", "right")),
    )
    return model, make_design(model, np.full(4, 0.005))


@pytest.fixture(scope="session")
def plate_model():
    """Single-section square plate with the default (free lateral) supports."""
    model = build_panel_model(nx=12, ny=12, material=ALU,
                              sections=1, load=LoadCase(15000.0, "top"))
    return model, make_design(model, [0.005])


def analytic_uniaxial_ncr(model, t):
    """Classical critical line load of the simply supported square plate."""
    mat = model.material
    D = mat.youngs_modulus * t**3 / (12.0 * (1.0 - mat.poisson_ratio**2))
    return 4.0 * np.pi**2 * D / model.width**2
