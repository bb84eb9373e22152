"""Adaptive Simpson quadrature."""

from __future__ import annotations

from .errors import QuadratureFailure

DEFAULT_TOL = 1e-10
MAX_DEPTH = 40


def adaptive_simpson(f, a: float, b: float, tol: float = DEFAULT_TOL, max_depth: int = MAX_DEPTH) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Intervals are bisected until the Simpson error estimate of each piece
    falls below its share of ``tol``; each accepted piece carries the usual
    Richardson correction. Raises QuadratureFailure if a piece still fails the
    test after ``max_depth`` bisections.
    """
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    total = 0.0
    # explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) * (flo + 4.0 * flm + fmid) / 6.0
        right = (hi - mid) * (fmid + 4.0 * frm + fhi) / 6.0
        delta = left + right - est
        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        elif depth >= max_depth:
            raise QuadratureFailure(
                f"adaptive Simpson did not reach tol={tol:g} on [{lo:.6g}, {hi:.6g}] "
                f"after {max_depth} bisections"
            )
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    return total
