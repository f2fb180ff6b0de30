"""Pure-numpy Clenshaw evaluation, used when the compiled extension is absent.

Identical recurrence to the Cython kernel; the coefficient loop runs in
Python, vectorised over the evaluation points.
"""

import numpy as np


def cheb_eval(coeffs: np.ndarray, xs: np.ndarray, out: np.ndarray) -> None:
    n = coeffs.shape[0]
    if n == 0:
        out[:] = 0.0
        return
    if n == 1:
        out[:] = coeffs[0]
        return
    x2 = 2.0 * xs
    b1 = np.zeros_like(xs)
    b2 = np.zeros_like(xs)
    for k in range(n - 1, 0, -1):
        b0 = coeffs[k] + x2 * b1 - b2
        b2 = b1
        b1 = b0
    np.copyto(out, coeffs[0] + xs * b1 - b2)
