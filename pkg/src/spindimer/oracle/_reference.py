"""Pure-Python RK4 step-doubling integrator.

This is both the fallback used when the compiled kernel is unavailable and
the only path for Hamiltonians given as arbitrary Python callables. The
control logic is mirrored line for line in ``_native.pyx``.
"""

from __future__ import annotations

import numpy as np

OK, STEP_LIMIT, TOL_UNREACHABLE = 0, 1, 2

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 4.0


def integrate(hfunc, y0, t_out, hbar, abs_tol, rel_tol, h_init, max_steps, adaptive):
    """Integrate i hbar dy/dt = H(t) y from t = 0 through the sorted ``t_out``.

    Returns ``(ys, steps, status, t_fail)``; ``ys[k]`` is y at ``t_out[k]``.
    """
    y = np.array(y0, dtype=complex)
    ys = np.empty((len(t_out),) + y.shape, dtype=complex)
    scale = -1j / hbar

    def f(t, v):
        return scale * (hfunc(t) @ v)

    t = 0.0
    h = float(h_init)
    steps = 0
    for k, target in enumerate(t_out):
        while t < target:
            last = t + h >= target
            hh = target - t if last else h
            k1 = f(t, y)
            full = _rk4(f, t, y, k1, hh)
            if adaptive:
                half = 0.5 * hh
                mid = _rk4(f, t, y, k1, half)
                two = _rk4(f, t + half, mid, f(t + half, mid), half)
                diff = two - full
                err = np.max(np.abs(diff)) / 15.0
                tol = abs_tol + rel_tol * np.max(np.abs(two))
                fac = _FAC_MAX if err == 0.0 else min(_FAC_MAX, max(_FAC_MIN, _SAFETY * (tol / err) ** 0.2))
                steps += 1
                if steps > max_steps:
                    return ys, steps, STEP_LIMIT, t
                if err <= tol:
                    y = two + diff / 15.0
                    t = target if last else t + hh
                    if not last or fac < 1.0:
                        h = hh * fac
                else:
                    h = hh * fac
                    if h < 1e-14 * max(1.0, abs(t)):
                        return ys, steps, TOL_UNREACHABLE, t
            else:
                steps += 1
                if steps > max_steps:
                    return ys, steps, STEP_LIMIT, t
                y = full
                t = target if last else t + hh
        ys[k] = y
    return ys, steps, OK, t


def _rk4(f, t, y, k1, h):
    k2 = f(t + 0.5 * h, y + (0.5 * h) * k1)
    k3 = f(t + 0.5 * h, y + (0.5 * h) * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
