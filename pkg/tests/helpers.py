"""Shared test utilities."""

import numpy as np


def find_plateau(values, rel_tol=0.05, min_len=3):
    """Longest contiguous window whose values vary less than rel_tol of mean.

    Returns (i, j) inclusive indices, or None if no window of at least
    min_len points qualifies.
    """
    values = list(values)
    best = None
    n = len(values)
    for i in range(n):
        for j in range(i + min_len - 1, n):
            window = values[i:j + 1]
            if max(window) - min(window) <= rel_tol * (sum(window) / len(window)):
                if best is None or (j - i) > (best[1] - best[0]):
                    best = (i, j)
    return best


def transfer_matrix_solution(u0, l, eps):
    """Independent oracle: solve the four matching equations directly.

    Unknowns (R, C, D, T) of the three-region solution, from value and slope
    continuity at x = 0 and x = l; no shared code with the closed forms.
    """
    k = np.sqrt(eps)
    chi = np.sqrt(u0 - eps)
    ep, em = np.exp(chi * l), np.exp(-chi * l)
    etr = np.exp(1j * k * l)
    A = np.array(
        [
            [-1.0, 1.0, 1.0, 0.0],
            [-1j * k, -chi, chi, 0.0],
            [0.0, ep, em, -etr],
            [0.0, chi * ep, -chi * em, -1j * k * etr],
        ],
        dtype=complex,
    )
    rhs = np.array([1.0, -1j * k, 0.0, 0.0], dtype=complex)
    R, C, D, T = np.linalg.solve(A, rhs)
    return R, C, D, T
