"""Benchmark the numba kernels against the pure-numpy fallback.

    python -m panelbuck.bench [--sizes 1024,4096,16384,65536] [--repeat 5]

Times the per-element batch operations that dominate assembly: geometric
stiffness value construction, membrane resultant recovery, and the
per-section stiffness gather. Also times one full analysis per backend on a
square mesh for an end-to-end view (where the sparse solvers, common to both
backends, dominate).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import kernels
from .eigen import analyze
from .elements import geometric_stiffness_parts, membrane_strain_operator, _plane_stress_law
from .model import build_panel_model, make_design


def _time(fn, repeat: int) -> float:
    fn()  # warm-up (JIT compile on the numba path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(nel: int, repeat: int) -> dict[str, dict[str, float]]:
    rng = np.random.default_rng(1234)
    resultants = rng.normal(size=(nel, 3))
    gxx, gyy, gxy = geometric_stiffness_parts(0.03, 0.04)
    u_elems = rng.normal(size=(nel, 8))
    b0 = membrane_strain_operator(0.03, 0.04)
    law = _plane_stress_law(0.33) * 7.0e10
    t_elems = np.full(nel, 0.005)
    sections = rng.integers(0, 5, size=nel)
    k_sections = rng.normal(size=(5, 24, 24))

    cases = {
        "geometric_values": lambda: kernels.geometric_values(resultants, gxx, gyy, gxy),
        "membrane_resultants": lambda: kernels.membrane_resultants(u_elems, b0, law, t_elems),
        "gather_stiffness": lambda: kernels.gather_stiffness(sections, k_sections),
    }
    out: dict[str, dict[str, float]] = {}
    for backend in ("numpy", "numba"):
        try:
            kernels.use_backend(backend)
        except ImportError:
            continue
        out[backend] = {name: _time(fn, repeat) for name, fn in cases.items()}
    return out


def bench_analysis(n: int, repeat: int) -> dict[str, float]:
    model = build_panel_model(nx=n, ny=n, sections=1)
    design = make_design(model, [0.005])
    out = {}
    for backend in ("numpy", "numba"):
        try:
            kernels.use_backend(backend)
        except ImportError:
            continue
        out[backend] = _time(lambda: analyze(model, design, m=3), repeat)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1024,4096,16384,65536")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--mesh", type=int, default=48, help="mesh size for the end-to-end case")
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'elements':>10} {'kernel':<22} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}")
    for nel in sizes:
        res = bench_kernels(nel, args.repeat)
        for name in res.get("numpy", {}):
            tn = res["numpy"][name] * 1e3
            tb = res.get("numba", {}).get(name)
            tb_ms = tb * 1e3 if tb is not None else float("nan")
            speed = tn / tb_ms if tb_ms and np.isfinite(tb_ms) else float("nan")
            print(f"{nel:>10} {name:<22} {tn:>12.3f} {tb_ms:>12.3f} {speed:>8.2f}")

    res = bench_analysis(args.mesh, max(2, args.repeat // 2))
    print(f"\nfull analysis, {args.mesh}x{args.mesh} mesh (sparse solvers dominate):")
    for backend, t in res.items():
        print(f"  {backend:<6} {t * 1e3:10.1f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
