"""Pure-numpy implementations of the element-batch kernels."""

import numpy as np


def geometric_values(resultants, gxx, gyy, gxy):
    """Per-element 12x12 geometric stiffness: kg[e] = Nx*Gxx + Ny*Gyy + Nxy*Gxy."""
    return (
        resultants[:, 0, None, None] * gxx
        + resultants[:, 1, None, None] * gyy
        + resultants[:, 2, None, None] * gxy
    )


def membrane_resultants(u_elems, b0, law, t_elems):
    """Per-element centroidal (Nx, Ny, Nxy) from membrane displacements."""
    strains = u_elems @ b0.T
    return (strains @ law.T) * t_elems[:, None]


def gather_stiffness(section_of_elem, k_sections):
    """Per-element stiffness values picked from the per-section table."""
    return k_sections[section_of_elem]
