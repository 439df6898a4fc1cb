import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.sparse.csgraph import connected_components

from sharpe_pi.core.exceptions import NumericalError

PIVOT_TOL = 1e-12


class DenseSystem:
    """
    LU factorization (partial pivoting) of a square matrix, reusable across
    right-hand sides.

    Raises:
        NumericalError if a pivot is numerically zero relative to the matrix scale
    """

    def __init__(self, matrix: np.ndarray, label: str = "linear system"):
        self.label = label
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            self._lu, self._piv = lu_factor(matrix, check_finite=True)

        scale = max(1.0, float(np.abs(matrix).max()))
        smallest_pivot = float(np.abs(np.diag(self._lu)).min())
        if smallest_pivot <= PIVOT_TOL * scale:
            raise NumericalError(
                f"{label} is numerically singular (smallest pivot {smallest_pivot:.3e})")

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return lu_solve((self._lu, self._piv), rhs)

    def solve_transposed(self, rhs: np.ndarray) -> np.ndarray:
        return lu_solve((self._lu, self._piv), rhs, trans=1)


def is_irreducible(P: np.ndarray) -> bool:
    """True when the directed graph of positive transitions is strongly connected."""
    n_components, _ = connected_components((P > 0.0).astype(float), directed=True, connection="strong")
    return n_components == 1
