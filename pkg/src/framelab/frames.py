"""
Finite frames held as synthesis matrices.

A frame of ``m`` vectors in R^d is the ``d x m`` matrix ``T`` whose n-th
column is ``f_n``. The frame is a frame for its span ``W = R(T)``, which
need not be all of R^d. Index sets are 0-based.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .errors import InvalidInputError, NotInSpanError
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    as_matrix,
    as_vector,
    column_space,
    numerical_rank,
    pinv,
    project,
    reduced_min_modulus,
    spectral_norm,
)


@dataclasses.dataclass(frozen=True, eq=False)
class Frame:
    """Frame vectors stored as the columns of ``synthesis``."""

    synthesis: np.ndarray

    def __post_init__(self):
        t = as_matrix(self.synthesis, "synthesis")
        if t.shape[1] < 1:
            raise InvalidInputError("a frame needs at least one vector")
        t.setflags(write=False)
        object.__setattr__(self, "synthesis", t)

    @classmethod
    def from_vectors(cls, vectors) -> "Frame":
        return cls(np.array(vectors, dtype=float).T)

    @property
    def ambient_dim(self) -> int:
        return self.synthesis.shape[0]

    @property
    def count(self) -> int:
        return self.synthesis.shape[1]

    @property
    def vectors(self) -> np.ndarray:
        """Frame vectors as rows."""
        return self.synthesis.T

    def span(self, tol: Tolerance = DEFAULT_TOL) -> Subspace:
        return column_space(self.synthesis, tol)

    def subfamily(self, indices) -> "Frame":
        return Frame(self.synthesis[:, list(index_set(indices, self.count))])

    def __repr__(self):
        return f"Frame(ambient_dim={self.ambient_dim}, count={self.count})"


@dataclasses.dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float

    def is_tight(self, rtol=1e-9) -> bool:
        return abs(self.upper - self.lower) <= rtol * max(self.upper, 1e-300)


@dataclasses.dataclass(frozen=True)
class SubframeReport:
    bounds: FrameBounds
    spans_W: bool
    independent: bool


def index_set(indices, m: int) -> tuple:
    """Validate a 0-based index set over ``m`` frame vectors; returns a sorted tuple."""
    try:
        idx = sorted(set(int(i) for i in indices))
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad index set {indices!r}") from exc
    if not idx:
        raise InvalidInputError("index set is empty")
    if idx[0] < 0 or idx[-1] >= m:
        raise InvalidInputError(f"index set {idx} out of range for {m} vectors")
    return tuple(idx)


def frame_operator(f: Frame) -> np.ndarray:
    """S = T T^T."""
    return f.synthesis @ f.synthesis.T


def frame_bounds(f: Frame, tol: Tolerance = DEFAULT_TOL) -> FrameBounds:
    """Optimal bounds on W: ``A = gamma(T)^2``, ``B = ||T||^2``."""
    upper = spectral_norm(f.synthesis)
    if upper == 0.0:
        raise InvalidInputError("zero synthesis matrix has no frame bounds")
    return FrameBounds(reduced_min_modulus(f.synthesis, tol) ** 2, upper**2)


def is_tight(f: Frame, tol: Tolerance = DEFAULT_TOL, rtol=1e-9) -> bool:
    """Whether ``S = A P_W``; equivalent to ``A == B``."""
    b = frame_bounds(f, tol)
    s = frame_operator(f)
    pw = project(f.span(tol))
    return bool(np.max(np.abs(s - b.lower * pw)) <= rtol * b.upper)


def canonical_dual(f: Frame, tol: Tolerance = DEFAULT_TOL) -> Frame:
    """Vectors ``S^+ f_n``; ``S^+`` inverts S on W."""
    frame_bounds(f, tol)
    return Frame(pinv(frame_operator(f), tol) @ f.synthesis)


def canonical_parseval(f: Frame, tol: Tolerance = DEFAULT_TOL) -> Frame:
    """Vectors ``(S^+)^{1/2} f_n``: a Parseval frame for W with the same nullspace."""
    s = frame_operator(f)
    lam, v = np.linalg.eigh(s)
    keep = lam > tol.rtol_for(s.shape) * max(lam.max(initial=0.0), 0.0)
    root_inv = (v[:, keep] / np.sqrt(lam[keep])) @ v[:, keep].T
    return Frame(root_inv @ f.synthesis)


def frame_coefficients(f: Frame, x, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """
    Minimal-norm coefficients ``c = T^+ x``, i.e. ``c_n = <x, S^+ f_n>``.

    Raises
    ------
    NotInSpanError
        If ``x`` is not in the span of the frame.
    """
    x = as_vector(x, "x")
    if x.size != f.ambient_dim:
        raise InvalidInputError(f"x has length {x.size}, frame lives in R^{f.ambient_dim}")
    c = pinv(f.synthesis, tol) @ x
    resid = np.linalg.norm(f.synthesis @ c - x)
    if resid > tol.angle_atol * max(np.linalg.norm(x), np.finfo(float).tiny):
        raise NotInSpanError(f"x is not in the span of the frame (residual {resid:.3e})")
    return c


def subframe_analysis(f: Frame, indices, tol: Tolerance = DEFAULT_TOL) -> SubframeReport:
    """Bounds of the frame sequence ``F_I`` for its own span, plus rank flags."""
    idx = index_set(indices, f.count)
    t_i = f.synthesis[:, list(idx)]
    r_i = numerical_rank(t_i, tol)
    upper = spectral_norm(t_i) ** 2
    lower = reduced_min_modulus(t_i, tol) ** 2
    return SubframeReport(
        bounds=FrameBounds(lower, upper),
        spans_W=r_i == numerical_rank(f.synthesis, tol),
        independent=r_i == len(idx),
    )


def mercedes_frame() -> Frame:
    """Three unit vectors at 120 degrees in R^2; tight with bound 3/2."""
    h = np.sqrt(3.0) / 2.0
    return Frame.from_vectors([[1.0, 0.0], [-0.5, h], [-0.5, -h]])
