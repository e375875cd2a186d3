"""Dense complex kernels for bipartite operators.

Composite index convention, used by every reshuffling map in the package:
the product basis vector e_i (x) e_k of C^m (x) C^n sits at row-major
position i*n + k.  All reshapes below are plain views under this
convention, so realignment and partial transpose are entry permutations
and preserve the Frobenius norm exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionError,
    NumericalError,
    ParameterError,
    PreconditionError,
)

HERMITIAN_RTOL = 1e-10
DEFAULT_KRON_CAP = 4096

# Testing hook: when set, svd() raises NumericalError unconditionally.  Used
# by the CLI's --inject-svd-failure flag to exercise the numerical-failure
# exit path deterministically.
_SVD_FAILURE_INJECTED = False


def inject_svd_failure(enabled: bool) -> None:
    global _SVD_FAILURE_INJECTED
    _SVD_FAILURE_INJECTED = bool(enabled)


def _as_complex_matrix(mat, what: str = "matrix") -> np.ndarray:
    arr = np.asarray(mat, dtype=np.complex128)
    if arr.ndim != 2:
        raise ParameterError(f"{what} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{what} contains NaN or Inf entries")
    return arr


def is_hermitian(mat: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    if mat.shape[0] != mat.shape[1] or mat.size == 0:
        return mat.size == 0
    scale = max(1.0, float(np.max(np.abs(mat))))
    return float(np.max(np.abs(mat - mat.conj().T))) <= rtol * scale


@dataclass(frozen=True)
class BipartiteOperator:
    """A square matrix on C^m (x) C^n together with its split (m, n).

    The hermitian flag is part of the value: when True the matrix is
    conjugate-symmetric within HERMITIAN_RTOL relative to its largest entry.
    Instances are immutable; the wrapped array is marked read-only.
    """

    mat: np.ndarray
    dim_a: int
    dim_b: int
    hermitian: bool = False

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionError(f"subsystem dimensions must be >= 1, got ({self.dim_a}, {self.dim_b})")
        d = self.dim_a * self.dim_b
        if self.mat.shape != (d, d):
            raise DimensionError(
                f"matrix shape {self.mat.shape} does not match dims {self.dim_a}x{self.dim_b} (expected {(d, d)})"
            )
        if self.hermitian and not is_hermitian(self.mat):
            raise PreconditionError("hermitian flag set but matrix is not hermitian within tolerance")

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)


def bipartite(mat, dim_a: int, dim_b: int, *, symmetrize: bool = False) -> BipartiteOperator:
    """Wrap a matrix as a BipartiteOperator, detecting hermiticity.

    With symmetrize=True the matrix is replaced by (M + M^dag)/2 before the
    flag is computed.  Symmetrization never happens implicitly.
    """
    arr = _as_complex_matrix(mat, "operator")
    if symmetrize:
        arr = (arr + arr.conj().T) / 2.0
    arr = arr.copy()
    arr.flags.writeable = False
    return BipartiteOperator(arr, dim_a, dim_b, hermitian=is_hermitian(arr))


def kron(a, b, *, max_side: int = DEFAULT_KRON_CAP) -> np.ndarray:
    """Kronecker product with a size cap on the result."""
    aa = np.asarray(a, dtype=np.complex128)
    bb = np.asarray(b, dtype=np.complex128)
    rows = aa.shape[0] * bb.shape[0] if aa.ndim == 2 and bb.ndim == 2 else aa.size * bb.size
    cols = aa.shape[1] * bb.shape[1] if aa.ndim == 2 and bb.ndim == 2 else 1
    if max(rows, cols) > max_side:
        raise DimensionError(f"kron result side {max(rows, cols)} exceeds cap {max_side}")
    return np.kron(aa, bb)


def partial_trace(x: BipartiteOperator, which: str) -> np.ndarray:
    """Trace out one subsystem; which is "A" or "B".

    Tracing out "B" leaves the m x m marginal on the first factor.
    """
    m, n = x.dims
    t = x.mat.reshape(m, n, m, n)
    if which == "B":
        return np.einsum("ikjk->ij", t)
    if which == "A":
        return np.einsum("ikil->kl", t)
    raise ParameterError(f'which must be "A" or "B", got {which!r}')


def partial_transpose(x: BipartiteOperator) -> BipartiteOperator:
    """Transpose the second factor only."""
    m, n = x.dims
    t = x.mat.reshape(m, n, m, n).transpose(0, 3, 2, 1).reshape(m * n, m * n)
    return bipartite(t, m, n)


def swap_operator(n: int) -> BipartiteOperator:
    """The operator on C^n (x) C^n exchanging the factors: S(v (x) w) = w (x) v."""
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    s = np.zeros((n * n, n * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            s[a * n + b, b * n + a] = 1.0
    return bipartite(s, n, n)


def realign(x: BipartiteOperator) -> np.ndarray:
    """Realignment map: the m^2 x n^2 matrix L with

        L[(i, j), (k, l)] = x[(i, k), (j, l)]

    where row pairs (i, j) run over the first factor twice and column pairs
    (k, l) over the second factor twice, both row-major.  This is a pure
    entry permutation, so Frobenius norms are preserved exactly.  On a
    rank-one input |v><w| it factorizes as V (x) conj(W) with V, W the m x n
    matricizations of v and w; their ranks are the Schmidt ranks.
    """
    m, n = x.dims
    return np.ascontiguousarray(
        x.mat.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)
    )


def realign_inverse(l: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Invert realign(): returns the mn x mn matrix whose realignment is l."""
    arr = _as_complex_matrix(l, "realigned matrix")
    m, n = dim_a, dim_b
    if arr.shape != (m * m, n * n):
        raise DimensionError(f"expected shape {(m * m, n * n)}, got {arr.shape}")
    return np.ascontiguousarray(
        arr.reshape(m, m, n, n).transpose(0, 2, 1, 3).reshape(m * n, m * n)
    )


def svd(mat) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD, M = U diag(s) Vh, singular values descending."""
    arr = _as_complex_matrix(mat)
    if _SVD_FAILURE_INJECTED:
        raise NumericalError("svd failure injected by testing hook")
    try:
        return np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"svd did not converge: {exc}") from exc


def eig_hermitian(mat, *, rtol: float = HERMITIAN_RTOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a hermitian matrix, eigenvalues descending.

    Returns (w, V) with eigenvector columns V[:, i] matching w[i].  Raises
    PreconditionError if the input is not hermitian within rtol.
    """
    arr = _as_complex_matrix(mat)
    if not is_hermitian(arr, rtol):
        raise PreconditionError("eig_hermitian requires a hermitian matrix")
    try:
        w, v = np.linalg.eigh((arr + arr.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigh did not converge: {exc}") from exc
    order = np.argsort(w)[::-1]
    return np.real(w[order]), v[:, order]


class MatrixNorms(NamedTuple):
    operator: float
    trace: float
    frobenius: float


def matrix_norms(mat) -> MatrixNorms:
    """Operator, trace, and Frobenius norms, all from one SVD."""
    s = svd(mat)[1]
    if s.size == 0:
        return MatrixNorms(0.0, 0.0, 0.0)
    return MatrixNorms(float(s[0]), float(np.sum(s)), float(np.sqrt(np.sum(s * s))))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product <A, B> = Tr(A^dag B)."""
    return complex(np.vdot(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128)))
