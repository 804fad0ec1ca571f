"""Dense complex Hermitian linear algebra for small operators.

Eigendecompositions with eigenvalue clustering, spectral matrix functions
under a pseudo-inverse convention on rank-deficient inputs, Kronecker
products, and pinching (dephasing into another operator's eigenbasis).
All logarithms are natural; conversion to bits is presentation-only.
"""

from __future__ import annotations

import dataclasses

import numpy as np

# Relative gap below which adjacent eigenvalues are grouped into one cluster.
CLUSTER_RTOL = 1e-8

# Eigenvalues at or below SUPPORT_RTOL * max|eigenvalue| count as exact zeros.
SUPPORT_RTOL = 1e-12

# Largest matrix dimension any operation will build.
DEFAULT_DIM_CAP = 4096


class HermitianError(ValueError):
    """Invalid input to a Hermitian-matrix operation."""


class SizeCapError(ValueError):
    """Requested matrix dimension exceeds the configured cap."""


class EigenConvergenceError(RuntimeError):
    """Eigendecomposition did not reach the required residual."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class HermitianMatrix:
    """Immutable dense Hermitian matrix with a lazily cached spectrum.

    The constructor rejects non-finite entries and (unless ``atol=None``)
    inputs whose asymmetry exceeds ``atol``; the stored matrix is the exact
    Hermitian average ``(M + M^dag)/2``. Instances are safe to share across
    threads: the entry array is read-only and the spectrum cache is either
    populated once or recomputed idempotently.
    """

    __slots__ = ("_mat", "_spectrum")

    def __init__(self, entries, *, atol: float | None = 1e-12):
        m = np.asarray(entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise HermitianError(f"expected a square matrix, got shape {m.shape}")
        if m.size and not np.all(np.isfinite(m)):
            raise HermitianError("matrix entries must be finite")
        if atol is not None and m.size:
            asym = float(np.max(np.abs(m - m.conj().T)))
            if asym > atol:
                raise HermitianError(
                    f"matrix is not Hermitian: max |M - M^dag| = {asym:.3e} > {atol:.1e}"
                )
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self._mat = m
        self._spectrum = None

    @property
    def mat(self) -> np.ndarray:
        """Read-only complex entry array."""
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    @property
    def spectrum(self) -> "Spectrum":
        if self._spectrum is None:
            self._spectrum = eig_hermitian(self)
        return self._spectrum

    def trace(self) -> float:
        return float(np.trace(self._mat).real)

    def operator_norm(self) -> float:
        w = self.spectrum.eigenvalues
        return float(np.max(np.abs(w))) if w.size else 0.0

    def min_eigenvalue(self) -> float:
        w = self.spectrum.eigenvalues
        return float(w[-1]) if w.size else 0.0

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


@dataclasses.dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition with descending eigenvalues and gap clusters.

    ``clusters`` is a tuple of half-open index ranges ``(start, stop)`` into
    the descending eigenvalue array; members of one cluster differ by at most
    ``CLUSTER_RTOL * max|eigenvalue|`` and a near-degenerate run longer than
    that span is split rather than merged, so the cluster count can only
    overestimate the number of distinct eigenvalues.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clusters: tuple[tuple[int, int], ...]

    @property
    def distinct_count(self) -> int:
        return len(self.clusters)

    def cluster_projectors(self) -> list[np.ndarray]:
        """Orthogonal projectors onto each eigenvalue cluster."""
        vs = self.eigenvectors
        return [vs[:, a:b] @ vs[:, a:b].conj().T for a, b in self.clusters]


def _cluster_ranges(w: np.ndarray, rtol: float = CLUSTER_RTOL) -> tuple[tuple[int, int], ...]:
    n = len(w)
    if n == 0:
        return ()
    tol = rtol * float(np.max(np.abs(w)))
    ranges = []
    start = 0
    for i in range(1, n):
        # split on a clear gap, or when the running span turns ambiguous
        if (w[i - 1] - w[i]) > tol or (w[start] - w[i]) > tol:
            ranges.append((start, i))
            start = i
    ranges.append((start, n))
    return tuple(ranges)


def eig_hermitian(m: HermitianMatrix) -> Spectrum:
    """Eigendecomposition of ``m`` with descending, clustered eigenvalues.

    Deterministic for identical input. Raises :class:`EigenConvergenceError`
    carrying the reconstruction residual when the decomposition fails to
    reproduce the matrix to 1e-10 in Frobenius norm.
    """
    try:
        w, v = np.linalg.eigh(m.mat)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"eigendecomposition failed: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    residual = float(np.linalg.norm((v * w) @ v.conj().T - m.mat))
    if residual > 1e-10:
        raise EigenConvergenceError(
            f"eigendecomposition residual {residual:.3e} exceeds 1e-10", residual
        )
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(w, v, _cluster_ranges(w))


def _rebuild(v: np.ndarray, values: np.ndarray) -> HermitianMatrix:
    return HermitianMatrix((v * values) @ v.conj().T, atol=None)


def matrix_power(m: HermitianMatrix, p: float, *, support_tol: float = SUPPORT_RTOL) -> HermitianMatrix:
    """Spectral power ``m^p`` with zeros kept at zero (pseudo-inverse style).

    Eigenvalues within ``support_tol * max|eigenvalue|`` of zero map to zero.
    A fractional ``p`` on an eigenvalue decisively below zero is a domain
    error; integer powers act on the full spectrum.
    """
    spec = m.spectrum
    w = spec.eigenvalues
    if w.size == 0:
        return m
    cut = support_tol * float(np.max(np.abs(w)))
    out = np.zeros_like(w)
    if float(p).is_integer():
        ip = int(p)
        if ip >= 0:
            out = w.astype(float) ** ip
        else:
            keep = np.abs(w) > cut
            out[keep] = w[keep] ** ip
    else:
        if np.any(w < -cut):
            raise HermitianError(
                f"fractional power {p} of a matrix with negative eigenvalue {w[-1]:.3e}"
            )
        keep = w > cut
        out[keep] = w[keep] ** p
    return _rebuild(spec.eigenvectors, out)


def matrix_log(m: HermitianMatrix, *, support_tol: float = SUPPORT_RTOL) -> HermitianMatrix:
    """Spectral natural log on the support of ``m``; the kernel maps to zero."""
    spec = m.spectrum
    w = spec.eigenvalues
    if w.size == 0:
        return m
    cut = support_tol * float(np.max(np.abs(w)))
    if np.any(w < -cut):
        raise HermitianError(f"log of a matrix with negative eigenvalue {w[-1]:.3e}")
    out = np.zeros_like(w)
    keep = w > cut
    out[keep] = np.log(w[keep])
    return _rebuild(spec.eigenvectors, out)


def matrix_exp(m: HermitianMatrix) -> HermitianMatrix:
    """Spectral exponential of ``m``."""
    spec = m.spectrum
    return _rebuild(spec.eigenvectors, np.exp(spec.eigenvalues))


def matrix_function(m: HermitianMatrix, f, *, support_tol: float = SUPPORT_RTOL) -> HermitianMatrix:
    """Tagged dispatcher: ``("power", p)``, ``"log"``, or ``"exp"``."""
    if isinstance(f, tuple) and len(f) == 2 and f[0] == "power":
        return matrix_power(m, f[1], support_tol=support_tol)
    if f == "log":
        return matrix_log(m, support_tol=support_tol)
    if f == "exp":
        return matrix_exp(m)
    raise ValueError(f"unknown matrix function tag {f!r}")


def tensor(a: HermitianMatrix, b: HermitianMatrix, *, dim_cap: int = DEFAULT_DIM_CAP) -> HermitianMatrix:
    """Kronecker product ``a (x) b``."""
    new_dim = a.dim * b.dim
    if new_dim > dim_cap:
        raise SizeCapError(f"tensor dimension {new_dim} exceeds cap {dim_cap}")
    return HermitianMatrix(np.kron(a.mat, b.mat), atol=None)


def identity(dim: int) -> HermitianMatrix:
    return HermitianMatrix(np.eye(dim), atol=None)


def pinch(sigma: HermitianMatrix, rho: HermitianMatrix) -> HermitianMatrix:
    """Dephase ``rho`` into the eigenbasis of ``sigma``.

    Sums ``E_i rho E_i`` over sigma's eigenvalue-cluster projectors; trace
    preserving, and the result commutes with sigma up to the cluster widths.
    """
    if sigma.dim != rho.dim:
        raise HermitianError(f"dimension mismatch: {sigma.dim} vs {rho.dim}")
    vs = sigma.spectrum.eigenvectors
    out = np.zeros_like(rho.mat)
    for a, b in sigma.spectrum.clusters:
        block = vs[:, a:b]
        out += block @ (block.conj().T @ rho.mat @ block) @ block.conj().T
    return HermitianMatrix(out, atol=None)


@dataclasses.dataclass(frozen=True)
class SpectralInfo:
    operator_norm: float
    min_eigenvalue: float
    distinct_count_v: int
    support_projector: HermitianMatrix


def spectral_utilities(m: HermitianMatrix, *, support_tol: float = SUPPORT_RTOL) -> SpectralInfo:
    """Operator norm, minimum eigenvalue, cluster count v, support projector."""
    spec = m.spectrum
    w = spec.eigenvalues
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    keep = (w > support_tol * norm).astype(float)
    return SpectralInfo(
        operator_norm=norm,
        min_eigenvalue=float(w[-1]) if w.size else 0.0,
        distinct_count_v=spec.distinct_count,
        support_projector=_rebuild(spec.eigenvectors, keep),
    )
