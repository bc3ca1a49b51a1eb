"""Flat-shell element matrices on axis-aligned rectangles.

Each 4-node element carries 6 dofs per node, ordered (u, v, w, thx, thy, thz):
a bilinear plane-stress membrane on (u, v), a 12-dof non-conforming Kirchhoff
plate on (w, thx, thy), and a weak penalty on the drilling rotation thz so the
6-dof node never goes singular. Rotations follow the right-hand convention
about the global axes, so thx = dw/dy and thy = -dw/dx.

The plate interpolation is the classical 12-term polynomial
{1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3, x^3 y, x y^3}; its shape
functions are obtained numerically by inverting the nodal-value matrix, which
avoids transcribing closed-form coefficients. All integrals use Gauss rules
exact for the integrand degree, so the matrices are exact up to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import Material

# Gauss-Legendre points/weights on [-1, 1]
_G3 = np.sqrt(3.0 / 5.0)
_G4A = np.sqrt(3.0 / 7.0 - 2.0 / 7.0 * np.sqrt(6.0 / 5.0))
_G4B = np.sqrt(3.0 / 7.0 + 2.0 / 7.0 * np.sqrt(6.0 / 5.0))
_W4A = (18.0 + np.sqrt(30.0)) / 36.0
_W4B = (18.0 - np.sqrt(30.0)) / 36.0
GAUSS = {
    2: (np.array([-1.0, 1.0]) / np.sqrt(3.0), np.array([1.0, 1.0])),
    3: (np.array([-_G3, 0.0, _G3]), np.array([5.0, 8.0, 5.0]) / 9.0),
    4: (np.array([-_G4B, -_G4A, _G4A, _G4B]), np.array([_W4B, _W4A, _W4A, _W4B])),
}

# node corners in natural coordinates, counterclockwise from bottom-left
XI_NODE = np.array([-1.0, 1.0, 1.0, -1.0])
ETA_NODE = np.array([-1.0, -1.0, 1.0, 1.0])

# exponents (p, q) of the 12 plate monomials xi^p * eta^q
_PLATE_EXPONENTS = (
    (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3), (3, 1), (1, 3),
)

# dof bookkeeping within the 24-dof element vector
MEMBRANE_DOFS = np.array([6 * n + d for n in range(4) for d in (0, 1)])
# plate block in local order (w, w_x, w_y) per node -> global (w, thy, thx)
BENDING_DOFS = np.array([6 * n + d for n in range(4) for d in (2, 4, 3)])
BENDING_SIGNS = np.array([s for _ in range(4) for s in (1.0, -1.0, 1.0)])
DRILLING_DOFS = np.array([6 * n + 5 for n in range(4)])

DRILLING_PENALTY_FACTOR = 1e-6


def _monomials(xi: float, eta: float, dxi: int = 0, deta: int = 0) -> np.ndarray:
    """The 12 plate monomials (or a natural-coordinate derivative) at (xi, eta)."""
    out = np.empty(12)
    for k, (p, q) in enumerate(_PLATE_EXPONENTS):
        cp = 1.0
        for _ in range(dxi):
            cp *= p
            p -= 1
        cq = 1.0
        for _ in range(deta):
            cq *= q
            q -= 1
        out[k] = 0.0 if (p < 0 or q < 0) else cp * cq * xi**p * eta**q
    return out


@lru_cache(maxsize=32)
def _plate_coeff_inverse(a: float, b: float) -> np.ndarray:
    """Inverse nodal matrix mapping generalized coords -> (w, w_x, w_y) per node.

    a, b are the element half-lengths; physical derivatives carry 1/a, 1/b.
    """
    A = np.zeros((12, 12))
    for i in range(4):
        xi, eta = XI_NODE[i], ETA_NODE[i]
        A[3 * i + 0] = _monomials(xi, eta)
        A[3 * i + 1] = _monomials(xi, eta, dxi=1) / a
        A[3 * i + 2] = _monomials(xi, eta, deta=1) / b
    return np.linalg.inv(A)


def _plane_stress_law(nu: float) -> np.ndarray:
    return np.array([
        [1.0, nu, 0.0],
        [nu, 1.0, 0.0],
        [0.0, 0.0, (1.0 - nu) / 2.0],
    ])


@lru_cache(maxsize=32)
def membrane_stiffness_unit(a: float, b: float, nu: float) -> np.ndarray:
    """8x8 membrane stiffness for unit extensional rigidity E*t/(1-nu^2)."""
    law = _plane_stress_law(nu)
    pts, wts = GAUSS[2]
    k = np.zeros((8, 8))
    for i, xi in enumerate(pts):
        for j, eta in enumerate(pts):
            B = np.zeros((3, 8))
            for n in range(4):
                dNx = XI_NODE[n] * (1.0 + ETA_NODE[n] * eta) / (4.0 * a)
                dNy = ETA_NODE[n] * (1.0 + XI_NODE[n] * xi) / (4.0 * b)
                B[0, 2 * n] = dNx
                B[1, 2 * n + 1] = dNy
                B[2, 2 * n] = dNy
                B[2, 2 * n + 1] = dNx
            k += wts[i] * wts[j] * (B.T @ law @ B) * (a * b)
    return k


@lru_cache(maxsize=32)
def bending_stiffness_unit(a: float, b: float, nu: float) -> np.ndarray:
    """12x12 plate stiffness for unit flexural rigidity D = E t^3 / 12(1-nu^2).

    Local dof order (w, w_x, w_y) per node.
    """
    Ainv = _plate_coeff_inverse(a, b)
    law = _plane_stress_law(nu)
    pts, wts = GAUSS[3]
    k = np.zeros((12, 12))
    for i, xi in enumerate(pts):
        for j, eta in enumerate(pts):
            B = np.vstack([
                _monomials(xi, eta, dxi=2) / a**2,
                _monomials(xi, eta, deta=2) / b**2,
                2.0 * _monomials(xi, eta, dxi=1, deta=1) / (a * b),
            ]) @ Ainv
            k += wts[i] * wts[j] * (B.T @ law @ B) * (a * b)
    return k


@lru_cache(maxsize=32)
def geometric_stiffness_parts(a: float, b: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Geometry-only 12x12 blocks (Gxx, Gyy, Gxy).

    The element geometric stiffness under constant membrane resultants is
    kg = Nx*Gxx + Ny*Gyy + Nxy*Gxy in the local (w, w_x, w_y) ordering.
    """
    Ainv = _plate_coeff_inverse(a, b)
    pts, wts = GAUSS[4]
    gxx = np.zeros((12, 12))
    gyy = np.zeros((12, 12))
    gxy = np.zeros((12, 12))
    for i, xi in enumerate(pts):
        for j, eta in enumerate(pts):
            gx = (_monomials(xi, eta, dxi=1) / a) @ Ainv
            gy = (_monomials(xi, eta, deta=1) / b) @ Ainv
            w = wts[i] * wts[j] * (a * b)
            gxx += w * np.outer(gx, gx)
            gyy += w * np.outer(gy, gy)
            gxy += w * (np.outer(gx, gy) + np.outer(gy, gx))
    return gxx, gyy, gxy


def membrane_strain_operator(a: float, b: float) -> np.ndarray:
    """3x8 centroidal strain-displacement matrix of the membrane."""
    B = np.zeros((3, 8))
    for n in range(4):
        dNx = XI_NODE[n] / (4.0 * a)
        dNy = ETA_NODE[n] / (4.0 * b)
        B[0, 2 * n] = dNx
        B[1, 2 * n + 1] = dNy
        B[2, 2 * n] = dNy
        B[2, 2 * n + 1] = dNx
    return B


def _expand_bending(k12: np.ndarray) -> np.ndarray:
    """Scatter a local plate block into the 24-dof layout with rotation signs."""
    k24 = np.zeros((24, 24))
    signed = k12 * np.outer(BENDING_SIGNS, BENDING_SIGNS)
    k24[np.ix_(BENDING_DOFS, BENDING_DOFS)] = signed
    return k24


def membrane_block(dx: float, dy: float, t: float, mat: Material) -> np.ndarray:
    """24x24 matrix holding only the membrane stiffness (linear in t)."""
    a, b = dx / 2.0, dy / 2.0
    unit = membrane_stiffness_unit(a, b, mat.poisson_ratio)
    k24 = np.zeros((24, 24))
    factor = mat.youngs_modulus * t / (1.0 - mat.poisson_ratio**2)
    k24[np.ix_(MEMBRANE_DOFS, MEMBRANE_DOFS)] = factor * unit
    return k24


def bending_block(dx: float, dy: float, t: float, mat: Material) -> np.ndarray:
    """24x24 matrix holding only the plate-bending stiffness (cubic in t)."""
    a, b = dx / 2.0, dy / 2.0
    unit = bending_stiffness_unit(a, b, mat.poisson_ratio)
    D = mat.youngs_modulus * t**3 / (12.0 * (1.0 - mat.poisson_ratio**2))
    return _expand_bending(D * unit)


@dataclass(frozen=True)
class ElementStiffness:
    """Symmetric 24x24 element stiffness in the (u, v, w, thx, thy, thz) layout."""

    matrix: np.ndarray
    element_id: int = -1


def element_stiffness(dx: float, dy: float, t: float, mat: Material,
                      element_id: int = -1) -> ElementStiffness:
    """Full element stiffness: membrane + bending + drilling penalty.

    The drilling penalty is DRILLING_PENALTY_FACTOR times the largest
    diagonal entry, enough to keep thz regular without polluting the
    membrane/bending scaling in t.
    """
    if not (dx > 0.0 and dy > 0.0 and t > 0.0):
        raise ValueError("element dimensions and thickness must be positive")
    k = membrane_block(dx, dy, t, mat) + bending_block(dx, dy, t, mat)
    pen = DRILLING_PENALTY_FACTOR * k.diagonal().max()
    k[DRILLING_DOFS, DRILLING_DOFS] += pen
    k = (k + k.T) * 0.5
    return ElementStiffness(k, element_id)


def element_geometric_stiffness(dx: float, dy: float, resultants) -> np.ndarray:
    """24x24 geometric (initial-stress) stiffness for constant (Nx, Ny, Nxy).

    Linear in each resultant; couples only the out-of-plane dofs.
    """
    nx_, ny_, nxy_ = (float(v) for v in resultants)
    if not all(np.isfinite([nx_, ny_, nxy_])):
        raise ValueError("membrane resultants must be finite")
    a, b = dx / 2.0, dy / 2.0
    gxx, gyy, gxy = geometric_stiffness_parts(a, b)
    kg = nx_ * gxx + ny_ * gyy + nxy_ * gxy
    k24 = _expand_bending(kg)
    return (k24 + k24.T) * 0.5
