"""
Acceptance suite. Each test checks one criterion at its stated tolerance
and prints a single PASS/FAIL line with the worst observed residual.
"""
import json
import math
import time

import numpy as np
import pytest

from framelab import (
    CassaSpec,
    Frame,
    ObliqueDualProblem,
    Subspace,
    Weight,
    alternating_projection_error,
    angle,
    canonical_dual,
    cassa_frame,
    cli,
    compatibility_profile,
    conditional_riesz_check,
    d_projection,
    frame_bounds,
    frame_coefficients,
    minimality_oracle,
    pinv,
    project,
    reduced_min_modulus,
    riesz_certificate,
    weight_sup_probe,
    weighted_dual,
)
from framelab.duals import dual_coefficients, weighted_synthesis
from framelab.frames import mercedes_frame
from framelab.subspace import null_space, orthogonal_complement, spectral_norm

import _rand

EPS = np.finfo(float).eps


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number}: {title} -- {detail}")
    assert ok, detail


# ---------------------------------------------------------------------------


def test_criterion_1_pinv_gamma(capsys):
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        rows, cols = (int(v) for v in rng.integers(1, 13, size=2))
        rank = int(rng.integers(1, min(rows, cols) + 1))
        a = _rand.controlled(rng, rows, cols, rank)
        x = pinv(a)
        na, nx = spectral_norm(a), spectral_norm(x)
        res = [
            spectral_norm(a @ x @ a - a) / na,
            spectral_norm(x @ a @ x - x) / nx,
            spectral_norm((a @ x).T - a @ x),
            spectral_norm((x @ a).T - x @ a),
        ]
        g = reduced_min_modulus(a)
        for other in (1 / nx, reduced_min_modulus(a.T), math.sqrt(reduced_min_modulus(a.T @ a))):
            res.append(abs(g - other) / g)
        worst = max(worst, *res)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10
    report(capsys, 1, "pseudoinverse and gamma", ok, f"500 matrices, worst relative residual {worst:.2e}, {elapsed:.2f} s")


def test_criterion_2_angles(capsys):
    rng = np.random.default_rng(1002)
    d = 10
    worst, worst_kw, skipped = 0.0, 0.0, 0
    for i in range(300):
        k = int(rng.integers(0, 4)) if i % 2 else 0
        p = int(rng.integers(1, 5))
        q = int(rng.integers(0, d - k - p + 1))
        m, n, kk = _rand.planted_pair(rng, d, k, p, q)
        a = angle(m, n)
        res = [
            abs(a.cosine - angle(n, m).cosine),
            abs(a.cosine - angle(orthogonal_complement(m), orthogonal_complement(n)).cosine),
            abs(a.cosine - spectral_norm(project(m) @ project(n) - project(kk))),
        ]
        prod = project(orthogonal_complement(n)) @ project(m)
        if spectral_norm(prod) > 1e-12:
            res.append(abs(angle(n, m).sine - reduced_min_modulus(prod)))
        else:
            skipped += 1
        worst = max(worst, *res)
        for j in range(1, 5):
            worst_kw = max(worst_kw, abs(alternating_projection_error(m, n, j) - a.cosine ** (2 * j - 1)))
    ok = worst <= 1e-8 and worst_kw <= 1e-7
    report(
        capsys, 2, "angle laws", ok,
        f"300 pairs in R^10, worst law residual {worst:.2e}, worst alternating-projection residual {worst_kw:.2e}"
        f", {skipped} pairs with M inside N skipped for the sine law",
    )


def test_criterion_3_sandwich(capsys):
    rng = np.random.default_rng(1003)
    violations, worst_eq = 0, 0.0
    for i in range(300):
        d, m = (int(v) for v in rng.integers(2, 9, size=2))
        t = _rand.controlled(rng, d, m, int(rng.integers(1, min(d, m) + 1)), spread=1)
        nt = null_space(t)
        if i % 3 == 0 and nt.dim:
            # M meets N(T) in a line
            mm = Subspace(_rand.orthonormal_of(np.hstack([nt.basis[:, :1], rng.standard_normal((m, int(rng.integers(1, m))))])))
        else:
            mm = _rand.subspace(rng, m, int(rng.integers(1, m + 1)))
        s = angle(nt, mm).sine
        g = reduced_min_modulus(t @ project(mm))
        if not (reduced_min_modulus(t) * s <= g * (1 + 1e-9) + 1e-12 and g <= spectral_norm(t) * s * (1 + 1e-9) + 1e-12):
            violations += 1
        # coisometry T = Q^T
        r = int(rng.integers(1, m + 1))
        c = _rand.orthonormal(rng, m, r).T
        worst_eq = max(worst_eq, abs(reduced_min_modulus(c @ project(mm)) - angle(null_space(c), mm).sine))
    ok = violations == 0 and worst_eq <= 1e-9
    report(capsys, 3, "gamma sandwich", ok, f"300 pairs, {violations} violations, coisometry equality residual {worst_eq:.2e}")


def test_criterion_4_frames(capsys):
    rng = np.random.default_rng(1004)
    mb = frame_bounds(mercedes_frame())
    f3 = frame_bounds(Frame.from_vectors([[1, 0], [1, 0], [0, 1]]))
    err_bounds = max(abs(mb.lower - 1.5), abs(mb.upper - 1.5), abs(f3.lower - 1.0), abs(f3.upper - 2.0))
    worst_rec, losses = 0.0, 0
    for _ in range(100):
        d = int(rng.integers(1, 7))
        m = int(rng.integers(d, d + 6))
        f = Frame(_rand.controlled(rng, d, m, int(rng.integers(1, d + 1)), spread=1.5))
        t = f.synthesis
        dual = canonical_dual(f).synthesis
        x = _rand.in_span(rng, t)
        worst_rec = max(worst_rec, np.linalg.norm(t @ (dual.T @ x) - x) / np.linalg.norm(x))
        c = frame_coefficients(f, x)
        z = null_space(t).basis
        alts = c[:, None] + z @ rng.standard_normal((z.shape[1], 50))
        losses += int(np.sum(np.linalg.norm(alts, axis=0) < np.linalg.norm(c)))
    ok = err_bounds <= 1e-12 and worst_rec <= 1e-9 and losses == 0
    report(
        capsys, 4, "frame bounds, canonical dual, minimal coefficients", ok,
        f"bound error {err_bounds:.1e}, worst reconstruction {worst_rec:.2e}, {losses} of 5000 alternatives shorter",
    )


def structured_frame(rng):
    d = int(rng.integers(3, 7))
    r1 = int(rng.integers(1, d))
    m1 = int(rng.integers(r1, r1 + 5))
    m2 = int(rng.integers(0, min(d - r1, 10 - m1) + 1))
    t1 = rng.standard_normal((d, r1)) @ rng.standard_normal((r1, m1))
    return Frame(np.hstack([t1, rng.standard_normal((d, m2))]))


def test_criterion_5_riesz(capsys):
    c = riesz_certificate(Frame.from_vectors([[1, 0], [1, 0], [0, 1]]))
    f3_ok = abs(c.sup_cosine - math.sqrt(0.5)) <= 1e-12 and abs(c.uniform_lower - 1.0) <= 1e-12 and c.exhaustive
    rng = np.random.default_rng(1005)
    disagreements, worst, m_max = 0, 0.0, 0
    for _ in range(50):
        f = structured_frame(rng)
        m_max = max(m_max, f.count)
        p = compatibility_profile(f)
        sups = [p.all_subsets_sup, p.independent_sup, max(p.local_sup), p.local_sup[-1], riesz_certificate(f).sup_cosine]
        worst = max(worst, max(sups) - min(sups), p.parseval_link_error)
        same_step = (
            p.density_step == p.containment_step
            and p.stabilization_step <= p.density_step
            and all(abs(v - p.local_sup[-1]) <= 1e-8 for v in p.local_sup[p.density_step - 1:])
        )
        disagreements += int(not same_step or max(sups) - min(sups) > 1e-9)
    ok = f3_ok and disagreements == 0 and m_max <= 10
    report(
        capsys, 5, "Riesz certificate and compatibility profile", ok,
        f"F3 sup {c.sup_cosine:.15f} lower {c.uniform_lower:.15f}; 50 frames (m <= {m_max}), "
        f"{disagreements} disagreements, worst spread {worst:.1e}",
    )


def test_criterion_6_cassa(capsys):
    start = time.perf_counter()
    rep = conditional_riesz_check(cassa_frame(CassaSpec(2.0, 3)).frame)
    steps = range(6, 10)  # chain step k is the prefix of the first k vectors
    cos_min = min(rep.cosines[k - 1] for k in steps)
    lower_max = max(rep.bounds[k - 1].lower for k in steps)
    trend = [conditional_riesz_check(cassa_frame(CassaSpec(2.0, n)).frame).sup_cosine for n in range(1, 7)]
    monotone = all(b >= a - 4 * EPS for a, b in zip(trend, trend[1:]))
    elapsed = time.perf_counter() - start
    ok = cos_min >= 0.99987 and lower_max <= 1 - 0.99987**2 and monotone and trend[-1] >= 1 - 1e-12 and elapsed < 5
    report(
        capsys, 6, "Cassa reproduction", ok,
        f"min cosine over k=6..9 {cos_min:.8f}, max lower bound {lower_max:.3e}, "
        f"1 - sup cosine by n_gen {[f'{1 - v:.1e}' for v in trend]}, {elapsed:.2f} s",
    )


def test_criterion_7_weighted_dual(capsys):
    rng = np.random.default_rng(1007)
    worst, worst_id = 0.0, 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        r = int(rng.integers(1, d + 1))
        m = int(rng.integers(r, r + 5))
        f, b = _rand.oblique_instance(rng, d, r, m, int(rng.integers(r, r + 3)))
        w = Weight(np.exp(rng.uniform(np.log(1e-2), np.log(1e2), size=m)))
        p = ObliqueDualProblem(f, b, w)
        x = _rand.in_span(rng, f.synthesis)
        c = dual_coefficients(weighted_dual(p), x)
        worst = max(worst, np.abs(c - minimality_oracle(p, x)).max() / (1 + np.linalg.norm(x)))
        p_i = ObliqueDualProblem.build(f, b)
        christensen = b @ np.linalg.pinv(f.synthesis.T @ b)
        worst_id = max(worst_id, np.abs(weighted_synthesis(p_i) - christensen).max())
    f3 = Frame.from_vectors([[1, 0], [1, 0], [0, 1]])
    p = ObliqueDualProblem.build(f3, np.eye(2), Weight([1.0, 4.0, 1.0]))
    fv = np.array([1.7, -0.3])
    f3_err = np.abs(dual_coefficients(weighted_dual(p), fv) - [0.8 * fv[0], 0.2 * fv[0], fv[1]]).max()
    ok = worst <= 1e-8 and f3_err <= 1e-15 and worst_id <= 1e-12
    report(
        capsys, 7, "weighted dual minimality", ok,
        f"50 instances, worst oracle gap {worst:.2e}; F3 error {f3_err:.1e}; identity-weight gap {worst_id:.1e}",
    )


def test_criterion_8_theorem_identities(capsys):
    rng = np.random.default_rng(1008)
    cases = [(Frame.from_vectors([[1, 0], [1, 0], [0, 1]]), None), (cassa_frame(CassaSpec(2.0, 2)).frame, None)]
    for _ in range(2):
        cases.append(_rand.oblique_instance(rng, 5, 3, 7, 4))
    worst, sandwich = 0.0, True
    for f, b in cases:
        probe = weight_sup_probe(f, b, samples=200, seed=0)
        sandwich = sandwich and probe.sandwich_ok and len(probe.table) == 200
        worst = max(worst, max(row["identity_error"] for row in probe.table))
    maxima = [
        weight_sup_probe(cassa_frame(CassaSpec(2.0, n)).frame, samples=200, seed=0, weight_range=(1e-8, 1e8)).max_dual_norm
        for n in (1, 2, 3)
    ]
    increasing = maxima[0] < maxima[1] < maxima[2]
    ok = worst <= 1e-9 and sandwich and increasing
    report(
        capsys, 8, "coefficient identity, probe sandwich, Cassa trend", ok,
        f"{len(cases)} problems x 200 weights, worst identity error {worst:.2e}, sandwich {'held' if sandwich else 'failed'}; "
        f"Cassa maxima {[round(v, 2) for v in maxima]}",
    )


def test_criterion_9_cli(capsys, tmp_path):
    h = math.sqrt(3.0) / 2.0
    files = {
        "mb.json": {"d": 2, "m": 3, "data": [1.0, -0.5, -0.5, 0.0, h, -h]},
        "f3.json": {"d": 2, "m": 3, "data": [1, 1, 0, 0, 0, 1]},
        "id2.json": {"d": 2, "m": 2, "data": [1, 0, 0, 1]},
        "w141.json": [1, 4, 1],
    }
    for name, obj in files.items():
        (tmp_path / name).write_text(json.dumps(obj), encoding="utf-8")
    p = {name: str(tmp_path / name) for name in files}
    c = str(tmp_path / "c.json")
    pipelines = {
        "bounds": [["bounds", "--frame", p["mb.json"]]],
        "cassa-riesz": [["cassa", "--r", "2", "--generators", "3", "--out", c], ["riesz", "--frame", c]],
        "dual": [["dual", "--frame", p["f3.json"], "--sampling", p["id2.json"], "--weight", p["w141.json"]]],
    }
    codes, identical, final = [], True, {}
    for name, steps in pipelines.items():
        runs = []
        for k in range(2):
            for argv in steps[:-1]:
                codes.append(cli.main(argv))
            out = str(tmp_path / f"{name}-{k}.json")
            codes.append(cli.main(steps[-1] + ["--out", out]))
            runs.append(open(out, "rb").read())
        identical = identical and runs[0] == runs[1]
        final[name] = json.loads(runs[0])["results"]
    values_ok = (
        abs(final["bounds"]["lower"] - 1.5) <= 1e-12
        and abs(final["bounds"]["upper"] - 1.5) <= 1e-12
        and final["cassa-riesz"]["sup_cosine"] >= 0.99987
        and np.allclose(final["dual"]["dual_vectors"], [[0.8, 0], [0.2, 0], [0, 1]], atol=1e-15, rtol=0)
    )
    ok = all(code == 0 for code in codes) and identical and values_ok
    report(
        capsys, 9, "CLI pipelines", ok,
        f"exit codes {sorted(set(codes))}, reports byte-identical {identical}, expected values {values_ok}",
    )
