"""Numba-jitted implementations of the element-batch kernels."""

import numpy as np
from numba import njit


@njit(cache=True)
def geometric_values(resultants, gxx, gyy, gxy):
    nel = resultants.shape[0]
    out = np.empty((nel, 12, 12))
    for e in range(nel):
        nx_ = resultants[e, 0]
        ny_ = resultants[e, 1]
        nxy_ = resultants[e, 2]
        for i in range(12):
            for j in range(12):
                out[e, i, j] = nx_ * gxx[i, j] + ny_ * gyy[i, j] + nxy_ * gxy[i, j]
    return out


@njit(cache=True)
def membrane_resultants(u_elems, b0, law, t_elems):
    nel = u_elems.shape[0]
    out = np.empty((nel, 3))
    for e in range(nel):
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        for k in range(8):
            u = u_elems[e, k]
            s0 += b0[0, k] * u
            s1 += b0[1, k] * u
            s2 += b0[2, k] * u
        t = t_elems[e]
        for i in range(3):
            out[e, i] = t * (law[i, 0] * s0 + law[i, 1] * s1 + law[i, 2] * s2)
    return out


@njit(cache=True)
def gather_stiffness(section_of_elem, k_sections):
    nel = section_of_elem.shape[0]
    n = k_sections.shape[1]
    m = k_sections.shape[2]
    out = np.empty((nel, n, m))
    for e in range(nel):
        s = section_of_elem[e]
        for i in range(n):
            for j in range(m):
                out[e, i, j] = k_sections[s, i, j]
    return out
