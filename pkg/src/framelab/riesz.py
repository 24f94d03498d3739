"""
Riesz and conditional Riesz behaviour read off the synthesis nullspace.

A frame is Riesz when all its subfamilies share frame bounds; this is
governed by the angles ``c[N(T), M_I]`` between the nullspace of ``T`` and
the coordinate subspaces ``M_I = span{e_i : i in I}``. In finite dimension
every supremum below is attained and < 1, so results are reported as
quantitative worst cases. The Cassa family shows the bounds degrading as
the dimension grows.

All index sets are 0-based tuples.
"""
from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np

from .errors import InvalidInputError
from .frames import Frame, FrameBounds, canonical_parseval, index_set, subframe_analysis
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    alternating_projection_error,
    angle,
    column_space,
    intersect,
    null_space,
    project,
    reduced_min_modulus,
    spectral_norm,
)

# slack for the inequalities checked along the way
_REL = 1e-9
_ABS = 1e-12
# cosines this close are ties
_TIE = 64 * np.finfo(float).eps


@dataclasses.dataclass(frozen=True)
class RieszCertificate:
    sup_cosine: float
    worst_subset: tuple
    uniform_lower: float
    uniform_upper: float
    exhaustive: bool
    subsets_checked: int
    sandwich_ok: bool


@dataclasses.dataclass(frozen=True)
class ChainReport:
    sup_cosine: float
    cosines: list
    bounds: list
    guaranteed_lower: float


@dataclasses.dataclass(frozen=True)
class DensityReport:
    gaps: list
    captured_dims: list
    nullspace_dim: int
    density_step: int | None
    ap_errors: list
    ap_predicted: list


@dataclasses.dataclass(frozen=True)
class CompatibilityProfile:
    """
    Witnesses for the equivalent descriptions of a compatible nullspace.

    Per step ``n`` (prefix ``{0..n-1}``) the lists hold ``c_n``, the
    angle between the nullspace and the prefix coordinate space, the
    density gap and the lower bound ``A_n`` of the Parseval-normalised
    truncation. Steps are 1-based counts of the prefix length.
    """

    local_sup: list
    global_cosines: list
    density_gaps: list
    captured_dims: list
    lower_bounds: list
    all_subsets_sup: float
    independent_sup: float
    density_step: int | None
    containment_step: int | None
    stabilization_step: int
    parseval_link_error: float


@dataclasses.dataclass(frozen=True)
class CassaSpec:
    r: float
    generators: int

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 1):
            raise InvalidInputError(f"Cassa parameter r must exceed 1, got {self.r}")
        if int(self.generators) != self.generators or self.generators < 1:
            raise InvalidInputError(f"need at least one generator, got {self.generators}")

    @property
    def ambient(self) -> int:
        return 4 * int(self.generators) + 2


@dataclasses.dataclass(frozen=True, eq=False)
class CassaFrame:
    frame: Frame
    nullspace: Subspace
    generators: np.ndarray


def nonempty_subsets(m: int):
    """All nonempty subsets of range(m), by cardinality then lexicographically."""
    return itertools.chain.from_iterable(itertools.combinations(range(m), k) for k in range(1, m + 1))


def _sampled_subsets(m: int, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    seen = set()
    for i in range(m):
        seen.add((i,))
        seen.add(tuple(j for j in range(m) if j != i))
    seen.add(tuple(range(m)))
    for _ in range(samples):
        mask = rng.integers(0, 2, size=m).astype(bool)
        if mask.any():
            seen.add(tuple(np.flatnonzero(mask).tolist()))
    return sorted(seen, key=lambda s: (len(s), s))


def _first_attaining(values, subsets, atol):
    best = max(values)
    for v, s in zip(values, subsets):
        if v >= best - atol:
            return best, s


def riesz_certificate(
    f: Frame,
    tol: Tolerance = DEFAULT_TOL,
    max_exhaustive: int = 18,
    samples: int = 4096,
    seed: int = 0,
) -> RieszCertificate:
    """
    Worst angle between ``N(T)`` and the coordinate subspaces, and the
    uniform lower frame bound over subfamilies.

    All nonempty subsets are enumerated when ``f.count <= max_exhaustive``;
    otherwise singletons, their complements, the full set and ``samples``
    seeded uniform subsets are checked and ``exhaustive`` is False. On every
    subset ``gamma(T) s <= gamma(T_I) <= ||T|| s`` is checked, with ``s``
    the sine of ``c[N(T), M_I]``; the result is ``sandwich_ok``. For that
    check ``gamma(T_I)`` ignores singular values below
    ``gamma(T) * angle_atol``: those belong to directions the angle
    computation already treats as intersection. Subfamilies of zero vectors
    carry no bound and are skipped for ``uniform_lower``.
    """
    t = f.synthesis
    m = f.count
    nt = null_space(t, tol)
    g_t = reduced_min_modulus(t, tol)
    norm_t = spectral_norm(t)
    exhaustive = m <= max_exhaustive
    subsets = list(nonempty_subsets(m)) if exhaustive else _sampled_subsets(m, samples, seed)
    cosines = []
    lower = math.inf
    sandwich_ok = True
    for idx in subsets:
        a = angle(nt, Subspace.coordinate(m, idx), tol)
        cosines.append(a.cosine)
        t_i = t[:, list(idx)]
        g = reduced_min_modulus(t_i, tol)
        if g == 0.0:
            continue
        lower = min(lower, g * g)
        g = reduced_min_modulus(t_i, tol, floor=g_t * tol.angle_atol)
        if g_t * a.sine > g * (1 + _REL) + _ABS or g > norm_t * a.sine * (1 + _REL) + _ABS:
            sandwich_ok = False
    sup, worst = _first_attaining(cosines, subsets, _TIE)
    return RieszCertificate(
        sup_cosine=sup,
        worst_subset=worst,
        uniform_lower=lower if math.isfinite(lower) else 0.0,
        uniform_upper=norm_t**2,
        exhaustive=exhaustive,
        subsets_checked=len(subsets),
        sandwich_ok=sandwich_ok,
    )


def canonical_chain(m: int) -> list:
    """Prefixes {0}, {0,1}, ..., {0..m-1}."""
    return [tuple(range(k)) for k in range(1, m + 1)]


def validate_chain(chain, m: int) -> list:
    steps = [index_set(step, m) for step in chain]
    if not steps:
        raise InvalidInputError("chain is empty")
    for k, (a, b) in enumerate(zip(steps, steps[1:]), start=1):
        if not set(a) <= set(b):
            raise InvalidInputError(f"chain is not nested at step {k}: {list(a)} is not inside {list(b)}")
    if steps[-1] != tuple(range(m)):
        raise InvalidInputError(f"chain does not end at the full index set of {m} vectors")
    return steps


def conditional_riesz_check(f: Frame, chain=None, tol: Tolerance = DEFAULT_TOL) -> ChainReport:
    """
    Angles ``c[N(T), M_{I_k}]`` and bounds of ``F_{I_k}`` along a nested chain.

    The lower bound of every ``F_{I_k}`` is at least
    ``gamma(T)^2 (1 - sup_cosine^2)``, reported as ``guaranteed_lower``.
    """
    steps = validate_chain(canonical_chain(f.count) if chain is None else chain, f.count)
    nt = null_space(f.synthesis, tol)
    cosines = [angle(nt, Subspace.coordinate(f.count, s), tol).cosine for s in steps]
    bounds = [subframe_analysis(f, s, tol).bounds for s in steps]
    sup = max(cosines)
    return ChainReport(
        sup_cosine=sup,
        cosines=cosines,
        bounds=bounds,
        guaranteed_lower=reduced_min_modulus(f.synthesis, tol) ** 2 * (1 - sup * sup),
    )


def nullspace_density(f: Frame, chain=None, tol: Tolerance = DEFAULT_TOL, ap_power: int = 3) -> DensityReport:
    """
    How fast ``N ∩ M_{I_k}`` fills the nullspace ``N`` along a chain.

    ``gaps[k] = ||P_{N ∩ M_{I_k}} - P_N||``. Since the captured part is nested
    in ``N`` the gap is 1 until ``N`` is fully captured, then 0;
    ``captured_dims`` shows the progress in between. As a cross-check the
    alternating-projection error ``||(P_N Q_k)^j - P_N ∧ Q_k||`` is returned
    next to its predicted value ``c[N, M_{I_k}]^(2j-1)`` with ``j = ap_power``.
    """
    steps = validate_chain(canonical_chain(f.count) if chain is None else chain, f.count)
    nt = null_space(f.synthesis, tol)
    p_n = project(nt)
    gaps, dims, ap, pred = [], [], [], []
    for s in steps:
        q = Subspace.coordinate(f.count, s)
        captured = intersect(nt, q, tol)
        gaps.append(spectral_norm(project(captured) - p_n))
        dims.append(captured.dim)
        ap.append(alternating_projection_error(nt, q, ap_power, tol))
        pred.append(angle(nt, q, tol).cosine ** (2 * ap_power - 1))
    step = next((k + 1 for k, g in enumerate(gaps) if g <= tol.angle_atol), None)
    return DensityReport(gaps, dims, nt.dim, step, ap, pred)


def compatibility_profile(f: Frame, tol: Tolerance = DEFAULT_TOL, max_exhaustive: int = 18) -> CompatibilityProfile:
    """
    Per-prefix witnesses for compatibility of ``N = N(T)``.

    For each prefix length ``n``: ``N_n = N ∩ M_n``; ``c_n`` is the sup of
    ``c[N_n, M_J]`` over nonempty ``J`` in the prefix; ``c[N, M_n]``;
    the gap ``||P_{N_n} - P_N||``; and ``A_n``, the smallest lower frame
    bound over subfamilies of the Parseval-normalised first ``n`` vectors
    (``nan`` when those vectors are all zero). ``A_n = 1 - c_n^2`` is
    expected and its worst deviation is ``parseval_link_error``.

    ``all_subsets_sup`` is the sup of ``c[N, M_I]`` over every nonempty
    ``I``; ``independent_sup`` restricts to ``I`` with ``N ∩ M_I = {0}``.
    ``stabilization_step`` is the first ``n`` from which ``c_n`` no longer
    changes.
    """
    t = f.synthesis
    m = f.count
    if m > max_exhaustive:
        raise InvalidInputError(f"{m} vectors exceed the enumeration limit {max_exhaustive}")
    n_full = null_space(t, tol)
    p_full = project(n_full)
    local, glob, gaps, dims, lowers = [], [], [], [], []
    link = 0.0
    for n in range(1, m + 1):
        prefix = Subspace.coordinate(m, range(n))
        n_n = intersect(n_full, prefix, tol)
        dims.append(n_n.dim)
        gaps.append(spectral_norm(project(n_n) - p_full))
        glob.append(angle(n_full, prefix, tol).cosine)
        c_n = 0.0
        for j in nonempty_subsets(n):
            c_n = max(c_n, angle(n_n, Subspace.coordinate(m, j), tol).cosine)
        local.append(c_n)

        g = canonical_parseval(Frame(t[:, :n]), tol).synthesis
        a_n = math.inf
        for j in nonempty_subsets(n):
            gam = reduced_min_modulus(g[:, list(j)], tol)
            if gam > 0.0:
                a_n = min(a_n, gam * gam)
        if math.isfinite(a_n):
            link = max(link, abs(a_n - (1.0 - c_n * c_n)))
            lowers.append(a_n)
        else:
            lowers.append(math.nan)

    all_sup, indep_sup = 0.0, 0.0
    for idx in nonempty_subsets(m):
        a = angle(n_full, Subspace.coordinate(m, idx), tol)
        all_sup = max(all_sup, a.cosine)
        if a.intersection_dim == 0:
            indep_sup = max(indep_sup, a.cosine)

    atol = tol.angle_atol
    density = next((k + 1 for k, g in enumerate(gaps) if g <= atol), None)
    containment = next((k + 1 for k, d in enumerate(dims) if d == n_full.dim), None)
    stable = m
    while stable > 1 and abs(local[stable - 2] - local[-1]) <= atol:
        stable -= 1
    return CompatibilityProfile(
        local_sup=local,
        global_cosines=glob,
        density_gaps=gaps,
        captured_dims=dims,
        lower_bounds=lowers,
        all_subsets_sup=all_sup,
        independent_sup=indep_sup,
        density_step=density,
        containment_step=containment,
        stabilization_step=stable,
        parseval_link_error=link,
    )


def cassa_generators(spec: CassaSpec) -> np.ndarray:
    """
    Columns ``x_n = e_{4n-3} - r e_{4n-2} + sum_{j=0..3} r^{-(4n-3+j)} e_{4n-1+j}``
    (1-based coordinates), truncated to ``spec.ambient`` coordinates.
    """
    r = float(spec.r)
    d = spec.ambient
    x = np.zeros((d, spec.generators))
    for n in range(1, spec.generators + 1):
        col = x[:, n - 1]
        terms = [(4 * n - 3, 1.0), (4 * n - 2, -r)]
        terms += [(4 * n - 1 + j, r ** -(4 * n - 3 + j)) for j in range(4)]
        for pos, val in terms:
            if pos <= d:
                col[pos - 1] = val
    return x


def cassa_frame(spec: CassaSpec, tol: Tolerance = DEFAULT_TOL) -> CassaFrame:
    """
    Parseval frame whose synthesis nullspace is spanned by the Cassa generators.

    ``T = Q^T`` with ``Q`` an orthonormal basis of ``N^perp``; ``T`` is a
    coisometry, so the frame is Parseval and ``N(T) = N``.
    """
    x = cassa_generators(spec)
    n = column_space(x, tol)
    q = null_space(x.T, tol).basis
    return CassaFrame(frame=Frame(q.T.copy()), nullspace=n, generators=x)


def cassa_cosine_bound(spec: CassaSpec, n: int) -> float:
    """Lower bound ``sqrt((1 + r^2) / ||x_n||^2)`` on the nullspace angle once x_n's head is visible."""
    x = cassa_generators(spec)[:, n - 1]
    return math.sqrt((1 + spec.r**2) / float(x @ x))
