"""
Dense subspace kernel.

SVD-based rank decisions, the Moore-Penrose pseudoinverse, orthonormal
subspace bases, angles between subspaces, the reduced minimum modulus,
alternating projections and projections that are orthogonal for a
diagonally weighted inner product.

Everything here is a pure function of its (immutable) inputs.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .errors import DimensionError, InvalidInputError, WeightError

EPS = np.finfo(float).eps


@dataclasses.dataclass(frozen=True)
class Tolerance:
    """
    Numerical thresholds.

    Parameters
    ----------
    rank_rtol : float or None
        Singular values below ``rank_rtol * sigma_max`` count as zero.
        ``None`` selects ``max(rows, cols) * eps * 64`` per matrix.
    angle_atol : float
        Absolute threshold for angle and intersection decisions: a
        principal direction whose sine is at most ``angle_atol`` is an
        intersection direction.
    """

    rank_rtol: float | None = None
    angle_atol: float = 1e-8

    def __post_init__(self):
        if self.rank_rtol is not None and not 0.0 < self.rank_rtol < 1.0:
            raise InvalidInputError(f"rank_rtol must lie in (0, 1), got {self.rank_rtol}")
        if not 0.0 < self.angle_atol < 1.0:
            raise InvalidInputError(f"angle_atol must lie in (0, 1), got {self.angle_atol}")

    def rtol_for(self, shape) -> float:
        if self.rank_rtol is not None:
            return self.rank_rtol
        return max(max(shape, default=1), 1) * EPS * 64


DEFAULT_TOL = Tolerance()


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D float array, or raise InvalidInputError."""
    arr = np.array(a, dtype=float)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def as_vector(x, name="vector") -> np.ndarray:
    arr = np.array(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def singular_values(a) -> np.ndarray:
    a = as_matrix(a)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def _rank_from_sv(s, shape, tol):
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rtol_for(shape) * s[0]))


def numerical_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    a = as_matrix(a)
    return _rank_from_sv(singular_values(a), a.shape, tol)


def spectral_norm(a) -> float:
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0


def pinv(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """
    Moore-Penrose pseudoinverse from the SVD with a relative cutoff.

    >>> pinv([[2.0, 0.0], [0.0, 0.0]])
    array([[0.5, 0. ],
           [0. , 0. ]])
    """
    a = as_matrix(a)
    if a.size == 0:
        return np.zeros(a.shape[::-1])
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    r = _rank_from_sv(s, a.shape, tol)
    return (vh[:r].T / s[:r]) @ u[:, :r].T


@dataclasses.dataclass(frozen=True, eq=False)
class Subspace:
    """
    A subspace of R^d held as a ``d x k`` matrix with orthonormal columns.

    ``k == 0`` is the zero subspace. Build from arbitrary spanning vectors
    with :meth:`span`; the constructor expects the basis to be orthonormal
    already and checks it.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis, "basis")
        d, k = b.shape
        if k > d:
            raise InvalidInputError(f"basis has {k} columns in dimension {d}")
        if k and np.max(np.abs(b.T @ b - np.eye(k))) > 1e-8:
            raise InvalidInputError("basis columns are not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def span(cls, vectors, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Span of the columns of ``vectors``."""
        return column_space(vectors, tol)

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(np.zeros((d, 0)))

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(np.eye(d))

    @classmethod
    def coordinate(cls, d: int, indices) -> "Subspace":
        """span{e_i : i in indices} (0-based)."""
        return cls(np.eye(d)[:, sorted(set(int(i) for i in indices))])

    def contains(self, x, atol=1e-8) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.linalg.norm(x - self.basis @ (self.basis.T @ x)) <= atol * max(1.0, np.linalg.norm(x)))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


@dataclasses.dataclass(frozen=True)
class AngleData:
    """Cosine and sine of the angle between two subspaces, after removing their intersection."""

    cosine: float
    sine: float
    intersection_dim: int

    @property
    def radians(self) -> float:
        return float(np.arctan2(self.sine, self.cosine))


def column_space(a, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    a = as_matrix(a)
    if a.size == 0:
        return Subspace.zero(a.shape[0])
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    return Subspace(u[:, : _rank_from_sv(s, a.shape, tol)])


def null_space(a, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    a = as_matrix(a)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    return Subspace(vh[_rank_from_sv(s, a.shape, tol):].T.copy())


def orthogonal_complement(s: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    if s.dim == 0:
        return Subspace.full(s.ambient_dim)
    return null_space(s.basis.T, tol)


def project(s: Subspace) -> np.ndarray:
    """Orthogonal projection onto ``s``."""
    return s.basis @ s.basis.T


def _check_same_ambient(m: Subspace, n: Subspace):
    if m.ambient_dim != n.ambient_dim:
        raise DimensionError(f"subspaces live in R^{m.ambient_dim} and R^{n.ambient_dim}")


def _split(m: Subspace, n: Subspace, tol: Tolerance):
    # Returns bases of M∩N, M ⊖ (M∩N) and N ⊖ (M∩N).
    # Intersection directions are detected by their sines (singular values
    # of (I - P_M) Q_N), which stay resolvable when the cosine is within
    # rounding of 1.
    qm, qn = m.basis, n.basis
    d = m.ambient_dim
    if m.dim == 0 or n.dim == 0:
        return np.zeros((d, 0)), qm, qn
    resid = qn - qm @ (qm.T @ qn)
    _, sines, vh = np.linalg.svd(resid, full_matrices=True)
    k = min(int(np.count_nonzero(sines <= tol.angle_atol)), m.dim, n.dim)
    q = n.dim
    inter = qn @ vh[q - k:].T
    n_tilde = qn @ vh[: q - k].T
    if k == 0:
        return inter, qm, n_tilde
    y = qm.T @ inter
    uy, _, _ = np.linalg.svd(y, full_matrices=True)
    m_tilde = qm @ uy[:, k:]
    return inter, m_tilde, n_tilde


def intersect(m: Subspace, n: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the intersection of ``m`` and ``n``."""
    _check_same_ambient(m, n)
    inter, _, _ = _split(m, n, tol)
    return Subspace(inter)


def angle(m: Subspace, n: Subspace, tol: Tolerance = DEFAULT_TOL) -> AngleData:
    """
    Angle between two subspaces.

    The cosine is the largest singular value of ``Q_M~^T Q_N~`` where ``M~``
    and ``N~`` are ``m`` and ``n`` with their common part removed. When one
    of the deflated subspaces is zero the cosine is 0 and the sine 1.
    """
    _check_same_ambient(m, n)
    inter, mt, nt = _split(m, n, tol)
    k = inter.shape[1]
    if mt.shape[1] == 0 or nt.shape[1] == 0:
        return AngleData(0.0, 1.0, k)
    c = mt.T @ nt
    cos = min(float(np.linalg.svd(c, compute_uv=False)[0]), 1.0)
    # sine as min over unit x in N~ of dist(x, M~); accurate when cos ~ 1
    sin = float(np.linalg.svd(nt - mt @ c, compute_uv=False)[-1])
    return AngleData(cos, min(sin, 1.0), k)


def reduced_min_modulus(a, tol: Tolerance = DEFAULT_TOL, floor: float = 0.0) -> float:
    """
    Smallest nonzero singular value of ``a``; 0 for the zero matrix.

    Singular values at or below ``floor`` also count as zero, which lets a
    caller match the resolution of an angle decision.
    """
    a = as_matrix(a)
    s = singular_values(a)
    s = s[: _rank_from_sv(s, a.shape, tol)]
    s = s[s > floor]
    return float(s[-1]) if s.size else 0.0


def alternating_projection_error(p: Subspace, q: Subspace, k: int, tol: Tolerance = DEFAULT_TOL) -> float:
    """Spectral norm of ``(P_p P_q)^k - P_{p∩q}``."""
    _check_same_ambient(p, q)
    if int(k) < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    pq = project(p) @ project(q)
    return spectral_norm(np.linalg.matrix_power(pq, int(k)) - project(intersect(p, q, tol)))


@dataclasses.dataclass(frozen=True, eq=False)
class Weight:
    """
    Positive diagonal weight ``D``; defines ``<x, y>_D = <Dx, y>``.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise WeightError(f"weight must be a nonempty 1-D array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise WeightError("weight has non-finite entries")
        if np.any(v <= 0):
            raise WeightError(f"weight entries must be positive, min is {v.min()!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def identity(cls, m: int) -> "Weight":
        return cls(np.ones(m))

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def condition(self) -> float:
        return float(self.values.max() / self.values.min())

    def matrix(self) -> np.ndarray:
        return np.diag(self.values)


def as_weight(d, size=None) -> Weight:
    w = d if isinstance(d, Weight) else Weight(d)
    if size is not None and w.size != size:
        raise DimensionError(f"weight has {w.size} entries, expected {size}")
    return w


def d_projection(n: Subspace, d) -> np.ndarray:
    """
    Idempotent onto ``n`` along the D-orthogonal complement of ``n``.

    ``D @ Q`` is symmetric, which is what D-orthogonality means.
    """
    w = as_weight(d, n.ambient_dim)
    m = n.ambient_dim
    if n.dim == 0:
        return np.zeros((m, m))
    root = np.sqrt(w.values)
    y, _ = np.linalg.qr(root[:, None] * n.basis)
    return (y @ y.T) / root[:, None] * root[None, :]
