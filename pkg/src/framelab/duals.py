"""
Oblique and weighted dual frames.

Setting: ``T`` (``d x m``) synthesises a frame for ``W = R(T)`` and ``B``
(``d x k``) synthesises a sampling frame for ``M = R(B)``, with
``R^d = W ∔ M^perp``. A dual ``{g_n}`` in ``M`` reconstructs every
``f`` in ``W`` as ``f = sum <f, g_n> f_n``. The duals here are returned as
the ``d x m`` matrix ``G`` whose columns are the ``g_n``, so the
reconstruction coefficients of ``f`` are ``G^T f``.
"""
from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg

from .errors import DimensionError, GeometryError, InvalidInputError, NotInSpanError
from .frames import Frame
from .subspace import (
    DEFAULT_TOL,
    Tolerance,
    Weight,
    angle,
    as_matrix,
    as_vector,
    as_weight,
    column_space,
    d_projection,
    null_space,
    numerical_rank,
    orthogonal_complement,
    pinv,
    spectral_norm,
)

MINIMAL_L2 = "minimal-l2"
WEIGHTED = "weighted-D"


def chi_d(a, d, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """
    Generalized inverse ``D^{-1/2} (A D^{-1/2})^+``.

    ``chi_d(A, D) @ A`` is the projection onto the D-orthogonal complement
    of ``N(A)`` along ``N(A)``.

    >>> chi_d([[1.0, 1.0]], [1.0, 4.0]).ravel()
    array([0.8, 0.2])
    """
    a = as_matrix(a)
    w = as_weight(d, a.shape[1])
    r = 1.0 / np.sqrt(w.values)
    return r[:, None] * pinv(a * r[None, :], tol)


@dataclasses.dataclass(frozen=True, eq=False)
class ObliqueDualProblem:
    """
    Frame for ``W``, sampling synthesis ``B`` with ``R(B) = M`` and a weight
    on the ``m`` frame coefficients. Construction checks the direct sum
    ``R^d = W ∔ M^perp`` and raises :class:`GeometryError` when it fails.
    """

    frame: Frame
    sampling: np.ndarray
    weight: Weight
    tol: Tolerance = DEFAULT_TOL
    direct_sum_cosine: float = dataclasses.field(init=False, default=0.0)

    def __post_init__(self):
        b = as_matrix(self.sampling, "sampling")
        t = self.frame.synthesis
        if b.shape[0] != t.shape[0]:
            raise DimensionError(f"sampling lives in R^{b.shape[0]}, frame in R^{t.shape[0]}")
        w = as_weight(self.weight, self.frame.count)
        object.__setattr__(self, "sampling", b)
        object.__setattr__(self, "weight", w)

        tol = self.tol
        rank_t = numerical_rank(t, tol)
        rank_b = numerical_rank(b, tol)
        rank_bt = numerical_rank(b.T @ t, tol)
        a = angle(column_space(t, tol), orthogonal_complement(column_space(b, tol), tol), tol)
        # a common direction of W and M^perp means cosine 1
        c = 1.0 if a.intersection_dim else a.cosine
        object.__setattr__(self, "direct_sum_cosine", c)
        if not rank_t == rank_b == rank_bt:
            raise GeometryError(
                f"direct sum W + M^perp fails: rank(T)={rank_t}, rank(B)={rank_b}, rank(B^T T)={rank_bt}"
            )
        if c >= 1 - tol.angle_atol:
            raise GeometryError(
                f"direct sum W + M^perp is degenerate: angle(W, M^perp) cosine = {c!r}"
                + (f" ({a.intersection_dim}-dimensional intersection)" if a.intersection_dim else "")
            )

    @classmethod
    def build(cls, frame, sampling=None, weight=None, tol: Tolerance = DEFAULT_TOL) -> "ObliqueDualProblem":
        """Defaults: ``B`` the identity (``M = R^d``), ``D`` the identity."""
        frame = frame if isinstance(frame, Frame) else Frame(frame)
        if sampling is None:
            sampling = np.eye(frame.ambient_dim)
        if weight is None:
            weight = Weight.identity(frame.count)
        return cls(frame, sampling, weight, tol)


@dataclasses.dataclass(frozen=True, eq=False)
class DualFrame:
    frame: Frame
    provenance: str

    @property
    def vectors(self) -> np.ndarray:
        return self.frame.vectors


def oblique_dual(p: ObliqueDualProblem) -> DualFrame:
    """Minimal-``l2`` oblique dual ``g_n = B (T^T B)^+ e_n``."""
    t, b = p.frame.synthesis, p.sampling
    return DualFrame(Frame(b @ pinv(t.T @ b, p.tol)), MINIMAL_L2)


def weighted_synthesis(p: ObliqueDualProblem, positive_root: bool = False) -> np.ndarray:
    """
    ``B (D^{-1/2} T^T B)^+ D^{-1/2}``, the dual whose coefficients minimise
    ``||.||_D``.

    ``positive_root=True`` uses ``D^{1/2}`` in both places instead. That
    variant reconstructs but does not minimise the D-norm; it exists for
    comparison only.
    """
    t, b = p.frame.synthesis, p.sampling
    root = np.sqrt(p.weight.values)
    s = root if positive_root else 1.0 / root
    return b @ pinv(s[:, None] * (t.T @ b), p.tol) * s[None, :]


def weighted_dual(p: ObliqueDualProblem, positive_root: bool = False) -> DualFrame:
    return DualFrame(Frame(weighted_synthesis(p, positive_root)), WEIGHTED)


def dual_coefficients(dual: DualFrame, f) -> np.ndarray:
    """Reconstruction coefficients ``<f, g_n>``."""
    return dual.frame.synthesis.T @ as_vector(f, "f")


def minimality_oracle(p: ObliqueDualProblem, f) -> np.ndarray:
    """
    Coefficients of least D-norm among all ``c`` with ``T c = f``.

    Solved directly: a particular solution plus an orthonormal basis ``Z``
    of ``N(T)`` parametrise the feasible set ``c0 + Z z``; then ``z``
    minimises ``||D^{1/2} (c0 + Z z)||`` by least squares. Uses scipy's
    LAPACK drivers rather than this package's pseudoinverse.

    Raises
    ------
    NotInSpanError
        If ``f`` is not in ``W``.
    """
    t = p.frame.synthesis
    f = as_vector(f, "f")
    if f.size != t.shape[0]:
        raise DimensionError(f"f has length {f.size}, frame lives in R^{t.shape[0]}")
    c0, *_ = scipy.linalg.lstsq(t, f)
    resid = np.linalg.norm(t @ c0 - f)
    if resid > p.tol.angle_atol * max(1.0, np.linalg.norm(f)):
        raise NotInSpanError(f"f is not in W (residual {resid:.3e})")
    z = scipy.linalg.null_space(t)
    if z.shape[1] == 0:
        return c0
    root = np.sqrt(p.weight.values)
    coef, *_ = scipy.linalg.lstsq(root[:, None] * z, -root * c0)
    return c0 + z @ coef


@dataclasses.dataclass(frozen=True)
class ProbeResult:
    max_dual_norm: float
    max_projection_norm: float
    table: list
    sandwich_ok: bool


def weight_sup_probe(
    frame: Frame,
    sampling=None,
    samples: int = 200,
    seed: int = 0,
    weight_range=(1e-3, 1e3),
    tol: Tolerance = DEFAULT_TOL,
) -> ProbeResult:
    """
    Sample weights and record ``||G_D||`` with ``||I - P_{D,N(T)}||``.

    Weights are log-uniform over ``weight_range``, drawn from ``seed``. On
    each sample the two inequalities

        ||G_D|| <= ||B|| ||(T^T B)^+|| ||I - P_{D,N(T)}||
        ||I - P_{D,N(T)}|| <= ||T^T|| ||G_D||

    are checked; ``sandwich_ok`` records whether all held. Each row also
    carries ``identity_error``, the largest entry of
    ``G_D^T T + P_{D,N(T)} - I``. A bounded table
    over a finite sample is evidence, not a proof that the sup is finite.
    """
    lo, hi = (float(v) for v in weight_range)
    if not (0 < lo < hi and np.isfinite(hi)):
        raise InvalidInputError(f"weight range must satisfy 0 < lo < hi, got {weight_range!r}")
    if int(samples) < 1:
        raise InvalidInputError(f"samples must be >= 1, got {samples}")
    base = ObliqueDualProblem.build(frame, sampling, tol=tol)
    t, b = base.frame.synthesis, base.sampling
    n_t = null_space(t, tol)
    ident = np.eye(base.frame.count)
    factor = spectral_norm(b) * spectral_norm(pinv(t.T @ b, tol))
    norm_tt = spectral_norm(t.T)
    rng = np.random.default_rng(seed)
    table, ok = [], True
    for i in range(int(samples)):
        w = Weight(np.exp(rng.uniform(np.log(lo), np.log(hi), size=base.frame.count)))
        p = ObliqueDualProblem(base.frame, b, w, tol)
        g = weighted_synthesis(p)
        proj = d_projection(n_t, w)
        g_norm = spectral_norm(g)
        q_norm = spectral_norm(ident - proj)
        slack = 1e-9
        upper_ok = g_norm <= factor * q_norm * (1 + slack)
        lower_ok = q_norm <= norm_tt * g_norm * (1 + slack)
        ok = ok and upper_ok and lower_ok
        table.append(
            {
                "sample": i,
                "condition": w.condition,
                "dual_norm": g_norm,
                "projection_norm": q_norm,
                "identity_error": float(np.max(np.abs(g.T @ t + proj - ident))),
            }
        )
    return ProbeResult(
        max_dual_norm=max(r["dual_norm"] for r in table),
        max_projection_norm=max(r["projection_norm"] for r in table),
        table=table,
        sandwich_ok=ok,
    )
