"""Dense complex matrix primitives for multipartite density matrices.

Conventions used throughout the package:

* subsystems are 0-indexed and a composite basis index decomposes with
  subsystem 0 slowest (standard Kronecker ordering);
* matrices are numpy ``complex128`` arrays, stored row-major;
* every operation is pure and returned arrays are marked read-only, so
  values can be shared freely between threads.
"""

import hashlib
from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import InvalidInputError, NumericalError

# Tolerances. Double-precision SVD/eig noise scales with the matrix norm,
# hence the Frobenius scaling of the hermiticity check.
HERM_TOL_SCALE = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
PURITY_TOL = 1e-9
RECON_TOL = 1e-9
NORMALIZE_MAX_DEV = 1e-3

# Guard against runaway Kronecker growth; everything here is desk scale.
MAX_KRON_DIM = 4096


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, order="C")
    out.setflags(write=False)
    return out


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array, raising on anything else."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def matrix_fingerprint(a: np.ndarray) -> str:
    """Short identifying string for error messages (shape, norm, content hash)."""
    arr = np.ascontiguousarray(a, dtype=complex)
    digest = hashlib.sha256(arr.tobytes()).hexdigest()[:12]
    return f"{arr.shape[0]}x{arr.shape[1]} matrix, fro={np.linalg.norm(arr):.6e}, sha256:{digest}"


def kron(a, b, max_dim: int = MAX_KRON_DIM) -> np.ndarray:
    """Kronecker product with the first factor's indices varying slowest."""
    am = as_matrix(a, "a")
    bm = as_matrix(b, "b")
    rows = am.shape[0] * bm.shape[0]
    cols = am.shape[1] * bm.shape[1]
    if rows > max_dim or cols > max_dim:
        raise InvalidInputError(
            f"Kronecker product shape ({rows}, {cols}) exceeds the size limit {max_dim}"
        )
    return _freeze(np.kron(am, bm))


def vec(a) -> np.ndarray:
    """Column-stack a matrix into an (m*n, 1) column vector.

    Ordering is [a_11, ..., a_m1, a_12, ..., a_m2, ..., a_mn]^T, i.e. the
    first column first.
    """
    arr = as_matrix(a)
    return _freeze(arr.reshape(-1, 1, order="F"))


def transpose(a) -> np.ndarray:
    return _freeze(as_matrix(a).T)


def conjugate(a) -> np.ndarray:
    return _freeze(as_matrix(a).conj())


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return _freeze(as_matrix(a).conj().T)


def singular_values(a) -> np.ndarray:
    """Singular values in decreasing order (read-only float array)."""
    arr = as_matrix(a)
    try:
        s = np.linalg.svd(arr, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge for {matrix_fingerprint(arr)}") from exc
    s = np.maximum(s, 0.0)
    s.setflags(write=False)
    return s


def trace_norm(a) -> float:
    """Sum of singular values. Equals the trace for Hermitian PSD input."""
    return float(singular_values(a).sum())


@dataclass(frozen=True)
class DensityMatrix:
    """Square complex matrix plus the ordered subsystem dimensions.

    Construction checks hermiticity (within ``HERM_TOL_SCALE * max(1, fro)``)
    and unit trace (within ``TRACE_TOL``). Positivity is *not* enforced here:
    states read from files often carry rounding-scale negative eigenvalues,
    so the PSD check is on demand via :meth:`validate_psd`.
    """

    mat: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = as_matrix(self.mat, "density matrix")
        rows, cols = mat.shape
        if rows != cols:
            raise InvalidInputError(f"density matrix must be square, got shape {mat.shape}")
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise InvalidInputError(f"subsystem dimensions must be positive, got {dims}")
        if prod(dims) != rows:
            raise InvalidInputError(
                f"dims {dims} multiply to {prod(dims)}, but the matrix side is {rows}"
            )
        herm_tol = HERM_TOL_SCALE * max(1.0, float(np.linalg.norm(mat)))
        residual = float(np.abs(mat - mat.conj().T).max()) if mat.size else 0.0
        if residual > herm_tol:
            raise InvalidInputError(
                f"matrix is not Hermitian: max |m - m^dag| = {residual:.3e} > {herm_tol:.3e}"
            )
        tr = complex(mat.trace())
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidInputError(
                f"trace must be 1 within {TRACE_TOL:g}, got {tr:.12g}"
            )
        object.__setattr__(self, "mat", _freeze(mat))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def subsystem_count(self) -> int:
        return len(self.dims)

    def trace(self) -> complex:
        return complex(self.mat.trace())

    def hermiticity_residual(self) -> float:
        return float(np.abs(self.mat - self.mat.conj().T).max())

    def purity(self) -> float:
        """tr(rho^2); equals the squared Frobenius norm for Hermitian input."""
        return float(np.vdot(self.mat, self.mat).real)

    def min_eigenvalue(self) -> float:
        try:
            return float(np.linalg.eigvalsh(self.mat).min())
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"eigensolver did not converge for {matrix_fingerprint(self.mat)}"
            ) from exc

    def validate_psd(self, tol: float = PSD_TOL) -> None:
        """Raise unless the minimum eigenvalue is at least ``-tol``."""
        low = self.min_eigenvalue()
        if low < -tol:
            raise InvalidInputError(
                f"matrix is not positive semidefinite: min eigenvalue {low:.3e} < -{tol:g}"
            )


def density_matrix(mat, dims, normalize: bool = False) -> DensityMatrix:
    """Build a :class:`DensityMatrix`, optionally rescaling a near-unit trace.

    With ``normalize=True`` the matrix is divided by its trace provided
    |tr - 1| <= ``NORMALIZE_MAX_DEV``; a larger deviation is rejected rather
    than silently rescaled.
    """
    arr = as_matrix(mat, "density matrix")
    if normalize:
        tr = complex(arr.trace())
        if abs(tr - 1.0) > NORMALIZE_MAX_DEV:
            raise InvalidInputError(
                f"trace {tr:.12g} deviates from 1 by more than {NORMALIZE_MAX_DEV:g}; "
                "refusing to auto-normalize"
            )
        if tr != 1.0:
            arr = arr / tr
    return DensityMatrix(arr, tuple(dims))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not in ``keep``.

    ``keep`` is a non-empty collection of 0-based subsystem indices; the
    result's dims are the kept dimensions in ascending index order.
    """
    kept = sorted(set(int(k) for k in keep)) if not isinstance(keep, int) else [keep]
    n = len(rho.dims)
    if not kept:
        raise InvalidInputError("keep must name at least one subsystem")
    if kept[0] < 0 or kept[-1] >= n:
        raise InvalidInputError(f"keep indices {kept} out of range for {n} subsystems")
    tensor = rho.mat.reshape(rho.dims + rho.dims)
    row_axes = list(range(n))
    col_axes = [k if k not in kept else n + k for k in range(n)]
    out_axes = kept + [n + k for k in kept]
    reduced = np.einsum(tensor, row_axes + col_axes, out_axes)
    side = prod(rho.dims[k] for k in kept)
    return DensityMatrix(reduced.reshape(side, side), tuple(rho.dims[k] for k in kept))


def pure_separability_check(rho: DensityMatrix) -> bool:
    """Decide separability of a *pure* state by reconstruction from marginals.

    A pure state is separable exactly when it equals the tensor product of
    its single-subsystem reduced matrices; we test that within ``RECON_TOL``
    in Frobenius norm. Non-pure input (tr(rho^2) < 1 - ``PURITY_TOL``) is a
    precondition failure.
    """
    purity = rho.purity()
    if purity < 1.0 - PURITY_TOL:
        raise InvalidInputError(
            f"pure_separability_check requires a pure state: tr(rho^2) = {purity:.12g}"
        )
    recon = np.ones((1, 1), dtype=complex)
    for k in range(len(rho.dims)):
        recon = np.kron(recon, partial_trace(rho, [k]).mat)
    return float(np.linalg.norm(rho.mat - recon)) <= RECON_TOL
