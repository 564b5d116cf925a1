"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Criterion 10iii is known-failing: the lower-bound ratio column
log((2n-3)!!)/log(C_n) provably *increases* toward 1/2 (already 1/3 at n=3
versus log(15)/log(2875) ~ 0.340 at n=4, exact integers), so a strictly
decreasing column is arithmetically impossible; the adjacent test verifies
the true monotone approach to 1/2.  See the repository notes for analysis.
"""

import json
import math
import time

import numpy as np
import pytest

from hyperlines.cli import main as cli_main
from hyperlines.detkernel import det_exact_integer
from hyperlines.exact import (
    ProblemSpec,
    closed_form_expected_det,
    double_factorial,
    prefactor_real,
    zagier_cn,
)
from hyperlines.matrices import build_symbolic
from hyperlines.mc import (
    density_test_n3,
    estimate_abs_det_sq_complex,
    estimate_cn_mc,
    estimate_en,
    realify_check,
    sqrt_law_study,
)
from hyperlines.sympoly import (
    bombieri_norm_sq,
    cn_exact_symbolic,
    complex_second_moment,
    determinant_poly,
    expected_det_exact,
    verify_lemma_i1,
    verify_lemma_i2,
)

E3_EXACT = 6 * math.sqrt(2) - 3
ABS_DET_MEAN_EXACT = 4 * math.sqrt(2) - 2


def report(cid, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {cid}: {status}  {detail}")
    return ok


@pytest.fixture(scope="module")
def en3_big():
    t0 = time.time()
    est = estimate_en(ProblemSpec(3), 1_000_000, seed=42, streams=4)
    return est, time.time() - t0


def test_criterion_01_exact_c3_both_routes(capsys):
    t0 = time.time()
    code = cli_main(["exact", "cn", "--n", "3", "--method", "both"])
    wall = time.time() - t0
    out = capsys.readouterr().out
    with capsys.disabled():
        ok = report(
            "01",
            code == 0 and out == "zagier 27\nsymbolic 27\n" and wall < 1.0,
            f"both routes 27, {wall:.2f}s",
        )
    assert ok


def test_criterion_02_route_agreement_n3_to_6():
    t0 = time.time()
    values = {}
    for n in range(3, 7):
        values[n] = (cn_exact_symbolic(ProblemSpec(n)), zagier_cn(n))
    wall = time.time() - t0
    ok = all(a == b for a, b in values.values()) and values[4][0] == 2875 and wall < 120
    assert report("02", ok, f"{ {n: v[0] for n, v in values.items()} }, {wall:.1f}s")


def test_criterion_03_bombieri_fixture():
    spec = ProblemSpec(3)
    t = build_symbolic(spec)
    norm = bombieri_norm_sq(determinant_poly(spec), t.scales)
    moment = complex_second_moment(spec)
    ok = (norm.numerator, norm.denominator) == (3, 2) and moment == 36
    assert report("03", ok, f"norm^2 = {norm}, E|det|^2 = {moment}")


def test_criterion_04_signed_count():
    sym_ok = all(
        prefactor_real(n) * expected_det_exact(ProblemSpec(n))
        == double_factorial(2 * n - 3)
        for n in range(3, 7)
    )
    closed_ok = all(
        prefactor_real(n) * closed_form_expected_det(n) == double_factorial(2 * n - 3)
        for n in range(3, 13)
    )
    assert report("04", sym_ok and closed_ok, "symbolic n=3..6, closed form n=3..12")


def test_criterion_05_e3_monte_carlo(en3_big):
    est, wall = en3_big
    scaled_se = math.exp(est.prefactor_log) * est.raw.std_error
    dev_value = abs(est.value - E3_EXACT)
    dev_raw = abs(est.raw.mean - ABS_DET_MEAN_EXACT)
    ok = (
        dev_value < 4 * scaled_se
        and dev_raw < 4 * est.raw.std_error
        and wall < 60.0
        and abs(est.value / E3_EXACT - 1) < 0.01
    )
    assert report(
        "05",
        ok,
        f"value {est.value:.5f} vs {E3_EXACT:.5f} ({dev_value / scaled_se:.2f} se), "
        f"raw {est.raw.mean:.5f} vs {ABS_DET_MEAN_EXACT:.5f}, {wall:.1f}s",
    )


def test_criterion_06_complex_monte_carlo():
    sq = estimate_abs_det_sq_complex(ProblemSpec(3), 1_000_000, seed=42, streams=4)
    cn4 = estimate_cn_mc(ProblemSpec(4), 1_000_000, seed=42, streams=4)
    scaled_se = math.exp(cn4.prefactor_log) * cn4.raw.std_error
    ok = abs(sq.mean - 36.0) < 4 * sq.std_error and abs(cn4.value - 2875) < 4 * scaled_se
    assert report(
        "06",
        ok,
        f"|det|^2 {sq.mean:.3f} vs 36 ({abs(sq.mean - 36) / sq.std_error:.2f} se); "
        f"C4 {cn4.value:.1f} vs 2875 ({abs(cn4.value - 2875) / scaled_se:.2f} se)",
    )


def test_criterion_07_density_law():
    rep = density_test_n3(100_000, seed=42)
    bound = 5.0 / math.sqrt(100_000)
    ok = rep.p_value > 1e-3 and rep.char_fn_max_abs_dev < bound
    assert report(
        "07",
        ok,
        f"KS p = {rep.p_value:.4f} > 1e-3; char-fn dev {rep.char_fn_max_abs_dev:.5f} < {bound:.5f}",
    )


def test_criterion_08_lemma_suite():
    details = []
    ok = True
    for n in (3, 4, 5):
        r1 = verify_lemma_i1(ProblemSpec(n))
        r2 = verify_lemma_i2(ProblemSpec(n))
        ok &= r1.permanent_count_match and r2.violations == 0
        details.append(f"n={n}: counts match, {r2.violations} violations")
    assert report("08", ok, "; ".join(details))


def test_criterion_09_realification():
    rep = realify_check(1000)
    ok = rep.nonnegative and rep.max_abs_log_dev < 1e-9
    assert report(
        "09", ok, f"1000 matrices sizes 1..8, max |log dev| {rep.max_abs_log_dev:.2e}, all >= 0"
    )


@pytest.fixture(scope="module")
def sqrt_law_rows():
    return sqrt_law_study(3, 10, 200_000, seed=42, streams=4)


def test_criterion_10i_n3_ratio(sqrt_law_rows):
    r3 = sqrt_law_rows[0]
    ok = abs(r3.ratio - 0.5164) < 0.01
    assert report("10i", ok, f"n=3 ratio {r3.ratio:.4f} within 0.01 of 0.5164")


def test_criterion_10ii_ratios_above_lower_bound(sqrt_law_rows):
    ok = all(
        r.ratio >= r.lower_bound_ratio - 3 * r.std_error / r.log_cn
        for r in sqrt_law_rows
    )
    assert report("10ii", ok, "every ratio >= lower bound - 3 propagated se")


def test_criterion_10iii_lower_bound_column_strictly_decreasing(sqrt_law_rows):
    # Literal criterion.  It cannot hold: the column is exactly
    # log((2n-3)!!)/log(C_n), which already rises from 1/3 at n=3 to
    # log(15)/log(2875) ~ 0.34006 at n=4 - exact integer data, independent of
    # any implementation choice.  Kept faithful and red; see module docstring.
    lbs = [r.lower_bound_ratio for r in sqrt_law_rows]
    ok = all(a > b for a, b in zip(lbs, lbs[1:]))
    report("10iii", ok, f"lower-bound column {[round(x, 4) for x in lbs]}")
    assert ok, (
        "spec defect: the lower-bound ratio column increases toward 1/2 "
        "(see decisions ledger); the intended monotone approach is verified "
        "by test_criterion_10iii_monotone_approach_to_half"
    )


def test_criterion_10iii_monotone_approach_to_half(sqrt_law_rows):
    # The defensible reading of 10iii: the lower-bound column approaches 1/2
    # monotonically, i.e. its gap to 1/2 strictly decreases.
    gaps = [0.5 - r.lower_bound_ratio for r in sqrt_law_rows]
    ok = all(g > 0 for g in gaps) and all(a > b for a, b in zip(gaps, gaps[1:]))
    assert report("10iii-corrected", ok, f"gaps to 1/2 strictly decreasing: {ok}")


def test_criterion_11_reproducibility(en3_big):
    est, _ = en3_big
    rerun = estimate_en(ProblemSpec(3), 1_000_000, seed=42, streams=4)
    a = json.dumps(est.to_record("en"), sort_keys=True)
    b = json.dumps(rerun.to_record("en"), sort_keys=True)
    assert report("11", a == b, "1e6-sample record rerun is bit-identical")


def test_criterion_12_oracle_coherence():
    rng = np.random.default_rng(2024)
    mismatches = 0
    for n in range(3, 7):
        spec = ProblemSpec(n)
        t = build_symbolic(spec)
        poly = determinant_poly(spec)
        pts = rng.integers(-9, 10, size=(100, spec.num_vars))
        vals = poly.evaluate_many(pts)
        for p, v in zip(pts, vals):
            if det_exact_integer(t.instantiate([int(x) for x in p])) != v:
                mismatches += 1
    assert report("12", mismatches == 0, f"400 points over n=3..6, {mismatches} mismatches")
