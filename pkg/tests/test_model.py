import numpy as np
import pytest

from panelbuck import (
    GeometryError,
    InvalidDesignError,
    LoadCase,
    Material,
    PartitionError,
    Section,
    apply_design,
    build_panel_model,
    make_design,
    mass,
)
from panelbuck.model import balanced_strip_rows, even_strip_rows

from conftest import ALU


def square_model(nx=2, ny=2, sections=1, rho=2700.0, load=None):
    return build_panel_model(
        nx=nx, ny=ny, material=Material(70e9, 0.33, rho),
        sections=sections, load=load or LoadCase(1000.0, "top"),
    )


class TestBuild:
    def test_counts_single_section(self):
        m = square_model(2, 2, 1)
        assert m.n_elements == 4
        assert m.n_nodes == 9
        assert set(m.sections[0].element_ids) == {0, 1, 2, 3}

    def test_five_even_strips(self):
        m = square_model(8, 10, 5)
        assert all(len(s.element_ids) == 16 for s in m.sections)

    def test_indivisible_strip_count(self):
        with pytest.raises(PartitionError):
            square_model(8, 7, 5)

    def test_non_partitioning_sections(self):
        secs = (Section(0, (0, 1), 0.001, 1.0), Section(1, (1, 2, 3), 0.001, 1.0))
        with pytest.raises(PartitionError):
            build_panel_model(nx=2, ny=2, material=ALU, sections=secs,
                              load=LoadCase(1.0, "top"))

    def test_incomplete_partition(self):
        secs = (Section(0, (0, 1, 2), 0.001, 1.0),)
        with pytest.raises(PartitionError):
            build_panel_model(nx=2, ny=2, material=ALU, sections=secs,
                              load=LoadCase(1.0, "top"))

    def test_degenerate_geometry(self):
        with pytest.raises(GeometryError):
            build_panel_model(width=0.0, nx=2, ny=2, sections=1)
        with pytest.raises(GeometryError):
            Material(-1.0, 0.3, 2700.0)
        with pytest.raises(GeometryError):
            Material(70e9, 0.5, 2700.0)
        with pytest.raises(GeometryError):
            LoadCase(0.0, "top")

    def test_section_area_partition(self):
        m = square_model(8, 10, 5)
        assert abs(m.section_areas().sum() - m.width * m.height) <= 1e-12

    def test_balanced_rows_symmetric(self):
        rows = balanced_strip_rows(16, 5)
        sizes = [len(r) for r in rows]
        assert sizes == [3, 3, 4, 3, 3]
        assert sum(sizes) == 16
        assert even_strip_rows(10, 5) == [[0, 1], [2, 3], [4, 5], [6, 7], [8, 9]]


class TestMass:
    def test_single_section_value(self):
        m = square_model(4, 4, 1)
        d = make_design(m, [0.01])
        assert mass(m, d) == pytest.approx(27.0, rel=1e-14)

    def test_partition_invariance(self):
        m = square_model(5, 5, 5)
        d = make_design(m, np.full(5, 0.01))
        assert mass(m, d) == pytest.approx(27.0, rel=1e-14)

    def test_homogeneity(self):
        m = square_model(4, 4, 2)
        rng = np.random.default_rng(0)
        for _ in range(5):
            t = rng.uniform(0.002, 0.4, size=2)
            c = rng.uniform(0.5, 2.0)
            assert mass(m, c * t) == pytest.approx(c * mass(m, t), rel=1e-13)


class TestApplyDesign:
    def test_at_lower_bound_no_clamp(self):
        m = square_model(4, 4, 2)
        d = apply_design(m, [0.001, 0.001])
        assert d.thicknesses == (0.001, 0.001)
        assert d.clamped == ()

    def test_above_upper_bound_clamped(self):
        m = square_model(4, 4, 2)
        d = apply_design(m, [1.5, 0.01])
        assert d.thicknesses[0] == 1.0
        assert d.clamped == (0,)

    def test_nan_rejected(self):
        m = square_model(4, 4, 2)
        with pytest.raises(InvalidDesignError):
            apply_design(m, [float("nan"), 0.01])

    def test_idempotent(self):
        m = square_model(4, 4, 2)
        d1 = apply_design(m, [2.0, 0.0005])
        d2 = apply_design(m, d1.as_array())
        assert d1.thicknesses == d2.thicknesses
        assert d2.clamped == ()

    def test_make_design_rejects_out_of_bounds(self):
        m = square_model(4, 4, 2)
        with pytest.raises(InvalidDesignError):
            make_design(m, [2.0, 0.01])
        with pytest.raises(InvalidDesignError):
            make_design(m, [0.01])  # wrong length
