"""Fixed-step classical Runge-Kutta for linear systems with held inputs.

Integrates ``dx/dt = A x + B u(t)`` where ``u`` is piecewise constant:
within step ``j`` every stage sees ``u[j]``.
"""
import numpy as np
from numba import njit

__all__ = ["rk4_linear_zoh"]


@njit(cache=True)
def _rk4_linear_zoh(A, B, U, x0, h):
    n_steps = U.shape[0]
    m = x0.shape[0]
    p = U.shape[1]
    out = np.empty((n_steps, m))
    x = x0.copy()
    w = np.empty(m)
    k1 = np.empty(m)
    k2 = np.empty(m)
    k3 = np.empty(m)
    k4 = np.empty(m)
    tmp = np.empty(m)
    for r in range(m):
        out[0, r] = x[r]
    for j in range(n_steps - 1):
        for r in range(m):
            s = 0.0
            for c in range(p):
                s += B[r, c] * U[j, c]
            w[r] = s
        for r in range(m):
            s = w[r]
            for c in range(m):
                s += A[r, c] * x[c]
            k1[r] = s
        for r in range(m):
            tmp[r] = x[r] + 0.5 * h * k1[r]
        for r in range(m):
            s = w[r]
            for c in range(m):
                s += A[r, c] * tmp[c]
            k2[r] = s
        for r in range(m):
            tmp[r] = x[r] + 0.5 * h * k2[r]
        for r in range(m):
            s = w[r]
            for c in range(m):
                s += A[r, c] * tmp[c]
            k3[r] = s
        for r in range(m):
            tmp[r] = x[r] + h * k3[r]
        for r in range(m):
            s = w[r]
            for c in range(m):
                s += A[r, c] * tmp[c]
            k4[r] = s
        for r in range(m):
            x[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r])
        for r in range(m):
            out[j + 1, r] = x[r]
    return out


def rk4_linear_zoh(A, B, U, x0, h):
    """Return the state at every sample, shape ``(len(U), len(x0))``.

    Row 0 is ``x0``; row ``j + 1`` is one RK4 step of size ``h`` from row ``j``
    with input ``U[j]`` held over the step. The last input row is unused.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    U = np.ascontiguousarray(U, dtype=np.float64)
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    if A.shape != (x0.size, x0.size) or B.shape != (x0.size, U.shape[1]):
        raise ValueError("inconsistent system shapes")
    if U.shape[0] < 1:
        raise ValueError("need at least one sample")
    return _rk4_linear_zoh(A, B, U, x0, float(h))
