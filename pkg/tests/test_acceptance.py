"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
(collected again in the terminal summary)."""

import time

import numpy as np
import pytest

from conftest import record
from entangled_bh import analytics
from entangled_bh.cli import DEFAULT_SEED, main
from entangled_bh.model import ModelParams, infall_onset
from entangled_bh.verify import (
    decoder_grid,
    desk_grid,
    verify_decoder,
    verify_decoupling,
    verify_purities,
    verify_twirl,
)

SAMPLES = 10**4
SEED = DEFAULT_SEED


def test_criterion_1_curves_at_full_scale():
    t0 = time.perf_counter()
    rows = analytics.curve(10, 100, analytics.ext_qubits_for_x(10, 100, 0))
    elapsed = time.perf_counter() - t0
    r0, r50, r100 = rows[0], rows[50], rows[100]
    mono = max(
        max(abs(r.c_ref_B + r.c_ref_R_ext - 10), abs(r.c_ref_R + r.c_ref_B_ext - 10)) for r in rows
    )
    checks = {
        "C(ref:B)=10 at r=0": abs(r0.c_ref_B - 10) < 1e-9,
        "C(ref:R)=10 at r=100": abs(r100.c_ref_R - 10) < 1e-9,
        "C(ref:R)<1e-12 at r=50": r50.c_ref_R < 1e-12,
        "C(ref:(R,ext))=10+-1e-6 at r=50": abs(r50.c_ref_R_ext - 10) <= 1e-6,
        "monogamy within 1e-9": mono <= 1e-9,
        "runtime < 1 s": elapsed < 1.0,
    }
    ok = all(checks.values())
    record(1, ok, f"rows={len(rows)} C_R(50)={r50.c_ref_R:.3g} max monogamy residual={mono:.3g} "
                  f"runtime={elapsed:.3f}s" + ("" if ok else f" failed: {[k for k, v in checks.items() if not v]}"))
    assert ok


def test_criterion_2_purity_grid():
    grid = desk_grid()
    t0 = time.perf_counter()
    rep = verify_purities(grid, SAMPLES, SEED)
    elapsed = time.perf_counter() - t0
    r = next(c for c in rep.checks if c.point == (1, 1, 1, 2) and c.group == "R")
    special = abs(r.analytic - 11 / 21) < 1e-15 and r.passed
    fails = rep.failures()
    ok = rep.passed and special and elapsed < 300
    record(2, ok, f"{len(grid)} points x 9 groups, failures={len(fails)}, "
                  f"p(R) at (K,N,R,B)=(2,2,2,4): analytic={r.analytic:.6f} mc={r.mc_mean:.6f}+-{r.se:.1g}, "
                  f"runtime={elapsed:.0f}s (limit 300s)")
    assert rep.passed, [c.as_dict() for c in fails[:5]]
    assert special
    assert elapsed < 300


def test_criterion_3_decoupling_grid():
    grid = desk_grid()
    rep = verify_decoupling(grid, SAMPLES, SEED)
    ex = next(c for c in rep.checks if c.point == (1, 2, 2, 1) and c.a1 == "R")
    fails = rep.failures()
    vacuous = sum(c.vacuous for c in rep.checks)
    ok = rep.passed and abs(ex.rhs - 0.3125) < 1e-15
    record(3, ok, f"{len(rep.checks)} role-points ({vacuous} vacuous), failures={len(fails)}, "
                  f"(2,4,4,2): rhs={ex.rhs} squared mean distance={ex.squared_mean:.4f}")
    assert rep.passed, [c.as_dict() for c in fails[:5]]
    assert abs(ex.rhs - 0.3125) < 1e-15


def test_criterion_4_schur_twirl():
    rep = verify_twirl([(1, 4), (2, 2), (4, 1), (2, 4)], SAMPLES, SEED, tol=0.05)
    c22 = next(c for c in rep.checks if (c.a1, c.a2) == (2, 2))
    coeffs = abs(c22.alpha - 0.4) < 1e-15 and abs(c22.beta - 0.4) < 1e-15
    ok = rep.passed and coeffs
    parts = ", ".join(f"({c.a1},{c.a2}) {c.frobenius:.4f} {'ok' if c.passed else 'over'}" for c in rep.checks)
    record(4, ok, f"Frobenius distances (tol 0.05): {parts}; (2,2) coefficients=({c22.alpha}, {c22.beta})")
    assert coeffs
    assert rep.passed, parts


def test_criterion_5_threshold_identity():
    worst = 0.0
    pure_ok = True
    count = 0
    for k in range(5):
        for n in range(2, 13):
            for x in range(0, n - k + 1, 2):
                for c in (0, 1, 2, 3):
                    r = k + x / 2 + c
                    worst = max(worst, abs(analytics.floor_radiation_side(k, n, x, r) - (1 - 2.0**-c)))
                    count += 1
            for c in (0, 1, 2, 3):
                if n - k >= 0:
                    pure_ok &= analytics.thresholds(k, n, n - k, c).r_early == 0.5 * (n + k) + c
                    pure_ok &= abs(analytics.pure_model_bound(k, n, 0.5 * (n + k) + c) - (1 - 2.0**-c)) < 1e-12
    ok = worst <= 1e-12 and pure_ok
    record(5, ok, f"{count} grid cases, max |floor - (1 - 2^-c)| = {worst:.3g}, pure-model r_early ok={pure_ok}")
    assert ok


def test_criterion_6_decoder_unit_fidelity():
    grid = decoder_grid()
    rep = verify_decoder(grid, 100, SEED)
    worst = max(c.max_error for c in rep.checks)
    record(6, rep.passed, f"{len(grid)} (k,nu,n) settings, {len(rep.checks)} (setting, r) points x 100 unitaries, "
                          f"max |1 - F| = {worst:.3g}")
    assert rep.passed


def test_criterion_7_cascaded_infall_onset():
    res = infall_onset(ModelParams.uniform(1, 4, 3), 1, 1, 100, SEED, window=3)
    record(7, res["pass"], f"mean C(ref2:(R,ext)) by r = {[round(v, 3) for v in res['mean_c_ref2_R_ext']]}, "
                           f"best in r in {res['window']} = {res['best_in_window']:.3f} (need >= 0.9)")
    assert res["pass"]


COMMANDS = [
    ["curves", "--format", "csv,svg,json"],
    ["verify-purity", "--k", "1", "--n", "4", "--ext-qubits", "1"],
    ["verify-decoupling", "--k", "1", "--n", "4", "--ext-qubits", "2"],
    ["twirl-check"],
    ["simulate", "--k", "1", "--n", "4", "--ext-qubits", "3", "--runs", "10",
     "--infall-qubits", "1", "--infall-step", "1"],
    ["thresholds"],
]


def test_criterion_8_determinism(tmp_path):
    mismatched = []
    checked = 0
    for i, args in enumerate(COMMANDS):
        outs = []
        for rep in ("a", "b"):
            out = tmp_path / f"{i}{rep}"
            main([*args, "--out", str(out), "--seed", str(SEED)])
            outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        checked += len(outs[0])
        if outs[0] != outs[1] or not outs[0]:
            mismatched.append(args[0])
    ok = not mismatched
    record(8, ok, f"{len(COMMANDS)} commands, {checked} files compared byte for byte"
                  + ("" if ok else f", mismatched: {mismatched}"))
    assert ok
