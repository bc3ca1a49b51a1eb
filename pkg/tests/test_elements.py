import numpy as np
import pytest

from panelbuck.elements import (
    BENDING_DOFS,
    DRILLING_DOFS,
    MEMBRANE_DOFS,
    bending_block,
    element_geometric_stiffness,
    element_stiffness,
    membrane_block,
)

from conftest import ALU

DX, DY, T = 0.08, 0.0625, 0.005


def test_thickness_scaling_membrane_and_bending():
    km1 = membrane_block(DX, DY, T, ALU)
    km2 = membrane_block(DX, DY, 2 * T, ALU)
    assert np.allclose(km2, 2.0 * km1, rtol=1e-14, atol=0.0)
    kb1 = bending_block(DX, DY, T, ALU)
    kb2 = bending_block(DX, DY, 2 * T, ALU)
    assert np.allclose(kb2, 8.0 * kb1, rtol=1e-14, atol=0.0)


def test_symmetry_exact():
    k = element_stiffness(DX, DY, T, ALU).matrix
    assert np.array_equal(k, k.T)


def test_rigid_body_modes():
    """Six zero-energy displacement modes; everything else carries energy."""
    k = element_stiffness(DX, DY, T, ALU).matrix
    x = np.array([0.0, DX, DX, 0.0])
    y = np.array([0.0, 0.0, DY, DY])
    modes = []
    for dof in (0, 1, 2):  # translations
        v = np.zeros(24)
        v[dof::6] = 1.0
        modes.append(v)
    v = np.zeros(24)  # in-plane rotation about z (displacements only)
    v[0::6], v[1::6] = -y, x
    modes.append(v)
    v = np.zeros(24)  # tilt about x: w = y, thx = dw/dy = 1
    v[2::6], v[3::6] = y, 1.0
    modes.append(v)
    v = np.zeros(24)  # tilt about y: w = -x, thy = -dw/dx = 1
    v[2::6], v[4::6] = -x, 1.0
    modes.append(v)

    scale = np.abs(k).max()
    for v in modes:
        assert abs(v @ k @ v) <= 1e-12 * scale * (v @ v)

    # rank check: exactly 6 near-zero eigenvalues
    w = np.linalg.eigvalsh(k)
    near_zero = np.sum(np.abs(w) <= 1e-10 * scale)
    assert near_zero == 6


def test_drilling_dofs_regularized():
    k = element_stiffness(DX, DY, T, ALU).matrix
    assert np.all(k[DRILLING_DOFS, DRILLING_DOFS] > 0.0)
    off = k[np.ix_(DRILLING_DOFS, np.setdiff1d(np.arange(24), DRILLING_DOFS))]
    assert np.all(off == 0.0)


def test_membrane_patch_test():
    """Constant-stress field is reproduced exactly on a 2x2 element patch."""
    nxe = nye = 2
    nn = (nxe + 1) * (nye + 1)
    km = membrane_block(DX, DY, T, ALU)[np.ix_(MEMBRANE_DOFS, MEMBRANE_DOFS)]
    K = np.zeros((2 * nn, 2 * nn))
    for r in range(nye):
        for c in range(nxe):
            n0 = r * (nxe + 1) + c
            nodes = (n0, n0 + 1, n0 + 1 + nxe + 1, n0 + nxe + 1)
            gd = [2 * n + d for n in nodes for d in (0, 1)]
            K[np.ix_(gd, gd)] += km

    # linear displacement field -> constant strain
    a = (3e-4, -1e-4, 2e-4, 5e-5, -2e-4, 1e-4)
    coords = np.array([(c * DX, r * DY) for r in range(nye + 1) for c in range(nxe + 1)])
    u_exact = np.empty(2 * nn)
    u_exact[0::2] = a[0] + a[1] * coords[:, 0] + a[2] * coords[:, 1]
    u_exact[1::2] = a[3] + a[4] * coords[:, 0] + a[5] * coords[:, 1]

    boundary = [n for n in range(nn) if n != 4]  # node 4 is the interior one
    fixed = [2 * n + d for n in boundary for d in (0, 1)]
    free = [2 * 4, 2 * 4 + 1]
    rhs = -K[np.ix_(free, fixed)] @ u_exact[fixed]
    sol = np.linalg.solve(K[np.ix_(free, free)], rhs)
    assert np.allclose(sol, u_exact[free], rtol=1e-10, atol=1e-16)


class TestGeometric:
    def test_zero_resultants(self):
        kg = element_geometric_stiffness(DX, DY, (0.0, 0.0, 0.0))
        assert np.all(kg == 0.0)

    def test_linearity(self):
        n = (123.0, -456.0, 78.0)
        kg1 = element_geometric_stiffness(DX, DY, n)
        kg3 = element_geometric_stiffness(DX, DY, tuple(3.0 * v for v in n))
        assert np.allclose(kg3, 3.0 * kg1, rtol=1e-13, atol=0.0)
        parts = [element_geometric_stiffness(DX, DY, v)
                 for v in ((n[0], 0, 0), (0, n[1], 0), (0, 0, n[2]))]
        assert np.allclose(kg1, sum(parts), rtol=1e-13, atol=1e-18)

    def test_couples_only_out_of_plane(self):
        kg = element_geometric_stiffness(DX, DY, (1.0, 2.0, 3.0))
        inplane = np.setdiff1d(np.arange(24), BENDING_DOFS)
        assert np.all(kg[inplane, :] == 0.0)
        assert np.all(kg[:, inplane] == 0.0)
        assert np.array_equal(kg, kg.T)
