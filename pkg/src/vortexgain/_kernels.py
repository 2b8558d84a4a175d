"""Hot numeric kernels: numba-compiled loops with a pure-numpy fallback.

The numba backend is the default whenever numba imports cleanly; setting the
environment variable ``VORTEXGAIN_NO_NUMBA`` to anything but ``0`` or empty
selects the numpy path instead (read once at import). Every entry point also
takes an explicit ``backend`` argument so the two paths can be compared in
one process; ``benchmarks/bench_kernels.py`` does exactly that.

Both backends integrate the same classical fixed-step RK4 scheme. For the
linear constant-coefficient probe system the numpy path composes the
one-step RK4 transfer matrix by binary exponentiation, which is the same
map as the stepwise loop and keeps large grids fast without JIT.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def _env_disables_numba() -> bool:
    return os.environ.get("VORTEXGAIN_NO_NUMBA", "0").strip() not in ("", "0")


DEFAULT_BACKEND = "numba" if (HAVE_NUMBA and not _env_disables_numba()) else "numpy"


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def _resolve_backend(backend: str | None) -> str:
    chosen = DEFAULT_BACKEND if backend is None else backend
    if chosen not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {chosen!r}")
    if chosen == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return chosen


# ---------------------------------------------------------------------------
# RK4 for the linear 2x2 probe system  dp/dz = A(r, phi) p, A constant in z.


def _rk4_linear_numpy(a11, a12, a21, a22, p1, p2, z, steps):
    h = z / steps
    b11, b12, b21, b22 = h * a11, h * a12, h * a21, h * a22

    def mul(x, y):
        x11, x12, x21, x22 = x
        y11, y12, y21, y22 = y
        return (
            x11 * y11 + x12 * y21,
            x11 * y12 + x12 * y22,
            x21 * y11 + x22 * y21,
            x21 * y12 + x22 * y22,
        )

    one = np.ones_like(b11)
    zero = np.zeros_like(b11)
    ident = (one, zero, zero, one)

    # T = I + B + B^2/2 + B^3/6 + B^4/24 (the one-step RK4 map), Horner form.
    t = (one + b11 / 4.0, b12 / 4.0, b21 / 4.0, one + b22 / 4.0)
    for k in (3.0, 2.0, 1.0):
        t = mul((b11, b12, b21, b22), t)
        t = (one + t[0] / k, t[1] / k, t[2] / k, one + t[3] / k)

    total = ident
    base = t
    e = int(steps)
    while e:
        if e & 1:
            total = mul(base, total)
        base = mul(base, base) if e > 1 else base
        e >>= 1

    q1 = total[0] * p1 + total[1] * p2
    q2 = total[2] * p1 + total[3] * p2
    return q1, q2


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _rk4_linear_numba(a11, a12, a21, a22, p1, p2, z, steps):  # pragma: no cover - jit
        n = a11.shape[0]
        h = z / steps
        out1 = np.empty(n, dtype=np.complex128)
        out2 = np.empty(n, dtype=np.complex128)
        for i in prange(n):
            m11 = a11[i]
            m12 = a12[i]
            m21 = a21[i]
            m22 = a22[i]
            u1 = p1[i]
            u2 = p2[i]
            for _ in range(steps):
                k11 = m11 * u1 + m12 * u2
                k12 = m21 * u1 + m22 * u2
                t1 = u1 + 0.5 * h * k11
                t2 = u2 + 0.5 * h * k12
                k21 = m11 * t1 + m12 * t2
                k22 = m21 * t1 + m22 * t2
                t1 = u1 + 0.5 * h * k21
                t2 = u2 + 0.5 * h * k22
                k31 = m11 * t1 + m12 * t2
                k32 = m21 * t1 + m22 * t2
                t1 = u1 + h * k31
                t2 = u2 + h * k32
                k41 = m11 * t1 + m12 * t2
                k42 = m21 * t1 + m22 * t2
                u1 = u1 + (h / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
                u2 = u2 + (h / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
            out1[i] = u1
            out2[i] = u2
        return out1, out2


def rk4_linear(a11, a12, a21, a22, p1, p2, z, steps, backend=None):
    """Advance the coupled probe pair by ``steps`` RK4 steps over distance z.

    All array arguments share one shape; the coefficient arrays hold the
    z-independent coupling matrix (growth rates already folded in).
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    chosen = _resolve_backend(backend)
    shape = np.shape(p1)
    args = [np.ascontiguousarray(a, dtype=np.complex128).ravel() for a in (a11, a12, a21, a22, p1, p2)]
    if chosen == "numba":
        q1, q2 = _rk4_linear_numba(*args, float(z), int(steps))
    else:
        q1, q2 = _rk4_linear_numpy(*args, float(z), int(steps))
    return q1.reshape(shape), q2.reshape(shape)


# ---------------------------------------------------------------------------
# RK4 for the weak-probe system closed over the exact stationary atomic
# amplitudes (arrow-structured 3x3 solve at every stage).


def _exact_rates_numpy(u1, u2, c1, c2, d1f, dy):
    denom = d1f * dy - (np.abs(u1) ** 2 + np.abs(u2) ** 2)
    phi_y = (np.conj(u1) * c1 + np.conj(u2) * c2) / denom
    phi_u1 = (c1 + u1 * phi_y) / d1f
    phi_u2 = (c2 + u2 * phi_y) / d1f
    g = 1j * np.conj(phi_y)
    return g * phi_u1, g * phi_u2


def _rk4_exact_numpy(c1, c2, u1, u2, d1f, d2f, z, steps):
    h = z / steps
    dy = d2f - 1j
    u1 = u1.copy()
    u2 = u2.copy()
    for _ in range(steps):
        k11, k12 = _exact_rates_numpy(u1, u2, c1, c2, d1f, dy)
        k21, k22 = _exact_rates_numpy(u1 + 0.5 * h * k11, u2 + 0.5 * h * k12, c1, c2, d1f, dy)
        k31, k32 = _exact_rates_numpy(u1 + 0.5 * h * k21, u2 + 0.5 * h * k22, c1, c2, d1f, dy)
        k41, k42 = _exact_rates_numpy(u1 + h * k31, u2 + h * k32, c1, c2, d1f, dy)
        u1 = u1 + (h / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
        u2 = u2 + (h / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
    return u1, u2


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _rk4_exact_numba(c1, c2, u1_0, u2_0, d1f, d2f, z, steps):  # pragma: no cover - jit
        n = c1.shape[0]
        h = z / steps
        dy = d2f - 1j
        out1 = np.empty(n, dtype=np.complex128)
        out2 = np.empty(n, dtype=np.complex128)
        for i in prange(n):
            b1 = c1[i]
            b2 = c2[i]
            u1 = u1_0[i]
            u2 = u2_0[i]
            for _ in range(steps):
                k11 = 0.0j
                k12 = 0.0j
                k21 = 0.0j
                k22 = 0.0j
                k31 = 0.0j
                k32 = 0.0j
                k41 = 0.0j
                k42 = 0.0j
                for stage in range(4):
                    if stage == 0:
                        v1, v2 = u1, u2
                    elif stage == 1:
                        v1, v2 = u1 + 0.5 * h * k11, u2 + 0.5 * h * k12
                    elif stage == 2:
                        v1, v2 = u1 + 0.5 * h * k21, u2 + 0.5 * h * k22
                    else:
                        v1, v2 = u1 + h * k31, u2 + h * k32
                    denom = d1f * dy - (abs(v1) ** 2 + abs(v2) ** 2)
                    phi_y = (np.conj(v1) * b1 + np.conj(v2) * b2) / denom
                    phi_u1 = (b1 + v1 * phi_y) / d1f
                    phi_u2 = (b2 + v2 * phi_y) / d1f
                    g = 1j * np.conj(phi_y)
                    f1 = g * phi_u1
                    f2 = g * phi_u2
                    if stage == 0:
                        k11, k12 = f1, f2
                    elif stage == 1:
                        k21, k22 = f1, f2
                    elif stage == 2:
                        k31, k32 = f1, f2
                    else:
                        k41, k42 = f1, f2
                u1 = u1 + (h / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
                u2 = u2 + (h / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
            out1[i] = u1
            out2[i] = u2
        return out1, out2


def rk4_raman_exact(c1, c2, u1, u2, delta_1f, delta_2f, z, steps, backend=None):
    """RK4 over the probe pair with the stationary atomic system solved
    exactly (not adiabatically eliminated) at every stage.

    ``c1``/``c2`` are the complex pump couplings per sample, ``u1``/``u2``
    the dimensionless probe couplings.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    chosen = _resolve_backend(backend)
    shape = np.shape(u1)
    args = [np.ascontiguousarray(a, dtype=np.complex128).ravel() for a in (c1, c2, u1, u2)]
    if chosen == "numba":
        q1, q2 = _rk4_exact_numba(*args, float(delta_1f), float(delta_2f), float(z), int(steps))
    else:
        q1, q2 = _rk4_exact_numpy(*args, float(delta_1f), float(delta_2f), float(z), int(steps))
    return q1.reshape(shape), q2.reshape(shape)
