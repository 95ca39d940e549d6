"""End-to-end acceptance checks.

One test per shipped guarantee; each prints a single
``ACCEPTANCE <name>: PASS/FAIL`` line (visible with ``-s`` or on failure)
and asserts every clause.  The four Monte-Carlo benchmarks run the full
protocol — 200 replications at n = 200 with per-replication
cross-validation — and take a couple of minutes each on one core.
"""

import json
import time

import numpy as np
import pytest
from oracles import constrained_ls, random_instance, soft_threshold

from restlasso import (
    Dataset,
    FitConfig,
    RestrictionSet,
    SimScenario,
    fit_lasso_lqa,
    fit_ols,
    fit_restricted_lasso,
    fit_restricted_ols,
    lambda_grid,
    rd_expenditure,
    rd_restrictions,
    run_experiment,
)
from restlasso.cli import main


def check(name, clauses):
    """clauses: list of (label, ok, detail). Prints one PASS/FAIL line."""
    failed = [label for label, ok, _ in clauses if not ok]
    detail = "; ".join("%s[%s]" % (label, d) for label, _, d in clauses)
    print("ACCEPTANCE %s: %s (%s)" % (name, "FAIL " + ",".join(failed) if failed else "PASS", detail))
    assert not failed, "%s failed clauses %s — %s" % (name, failed, detail)


def bench(error_dist, contamination):
    scenario = SimScenario(
        n=200, error_dist=error_dist, contamination=contamination,
        n_reps=200, seed=0,
    )
    return {row.method: row for row in run_experiment(scenario)}


def test_criterion_01_constraint_exactness():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        x, y, rmat, rvec = random_instance(rng)
        data = Dataset(x=x, y=y)
        rs = RestrictionSet(rmat=rmat, rvec=rvec)
        lam = float(10.0 ** rng.uniform(-3.0, 1.0))
        for res in (
            fit_restricted_ols(data, rs),
            fit_restricted_lasso(data, rs, FitConfig(lam=lam)),
        ):
            worst = max(worst, float(np.max(np.abs(rmat @ res.coefficients - rvec))))
    elapsed = time.perf_counter() - start
    check(
        "constraint-exactness",
        [
            ("residual<=1e-8", worst <= 1e-8, "worst=%.3g" % worst),
            ("runtime<10s", elapsed < 10.0, "%.2fs for 200 instances" % elapsed),
        ],
    )


def test_criterion_02_lambda_zero_reductions():
    rng = np.random.default_rng(202)
    worst_plain = worst_restricted = 0.0
    for _ in range(100):
        x, y, rmat, rvec = random_instance(rng)
        data = Dataset(x=x, y=y)
        rs = RestrictionSet(rmat=rmat, rvec=rvec)
        cfg = FitConfig(lam=0.0)
        worst_plain = max(worst_plain, float(np.max(np.abs(
            fit_lasso_lqa(data, cfg).coefficients - fit_ols(data).coefficients
        ))))
        worst_restricted = max(worst_restricted, float(np.max(np.abs(
            fit_restricted_lasso(data, rs, cfg).coefficients
            - fit_restricted_ols(data, rs).coefficients
        ))))
    check(
        "lambda-zero-reductions",
        [
            ("lasso->ols", worst_plain <= 1e-6, "worst=%.3g" % worst_plain),
            ("rlasso->rols", worst_restricted <= 1e-6, "worst=%.3g" % worst_restricted),
        ],
    )


def test_criterion_03_oracle_equivalence():
    rng = np.random.default_rng(303)

    # (a) restricted least squares vs null-space substitution
    worst_rols = 0.0
    for _ in range(30):
        x, y, rmat, rvec = random_instance(rng)
        res = fit_restricted_ols(Dataset(x=x, y=y), RestrictionSet(rmat=rmat, rvec=rvec))
        expect = constrained_ls(x, y, rmat, rvec)
        worst_rols = max(worst_rols, float(np.max(np.abs(res.coefficients - expect))))

    # (b) orthonormal-design LASSO vs soft thresholding at lam/2.  Entries
    # are resampled away from the threshold: a coordinate *at* lam/2
    # contracts only harmonically, which is a property of the iteration,
    # not a defect under test.
    worst_soft = 0.0
    for _ in range(20):
        p = int(rng.integers(4, 10))
        lam = float(rng.uniform(0.5, 3.0))
        z = rng.normal(scale=2.0, size=p)
        off = np.abs(np.abs(z) - lam / 2.0) < 0.2 * (lam / 2.0)
        while off.any():
            z[off] = rng.normal(scale=2.0, size=int(off.sum()))
            off = np.abs(np.abs(z) - lam / 2.0) < 0.2 * (lam / 2.0)
        q, _ = np.linalg.qr(rng.normal(size=(p + 20, p)))
        res = fit_lasso_lqa(Dataset(x=q, y=q @ z), FitConfig(lam=lam))
        worst_soft = max(worst_soft, float(np.max(np.abs(
            res.coefficients - soft_threshold(z, lam / 2.0)
        ))))

    # (c) restricted LQA fixed point vs the null-space minimizer of its own
    # quadratic surrogate, weights lam / (2 max(|b_j|, zero_eps))
    worst_fix = 0.0
    for _ in range(20):
        x, y, rmat, rvec = random_instance(rng, sparse=False)
        data = Dataset(x=x, y=y)
        rs = RestrictionSet(rmat=rmat, rvec=rvec)
        cfg = FitConfig(lam=1.0)
        res = fit_restricted_lasso(data, rs, cfg)
        beta = res.coefficients
        act = beta != 0.0
        assert act[~np.all(rmat == 0.0, axis=0)].all()  # restricted cols stay
        w = cfg.lam / (2.0 * np.maximum(np.abs(beta[act]), cfg.zero_eps))
        expect = constrained_ls(x[:, act], y, rmat[:, act], rvec, weights=w)
        worst_fix = max(worst_fix, float(np.max(np.abs(beta[act] - expect))))
        if (~act).any():
            worst_fix = max(worst_fix, float(np.max(np.abs(beta[~act]))))

    check(
        "oracle-equivalence",
        [
            ("rols-null-space<=1e-8", worst_rols <= 1e-8, "worst=%.3g" % worst_rols),
            ("soft-threshold<=1e-4", worst_soft <= 1e-4, "worst=%.3g" % worst_soft),
            ("surrogate-fixed-point<=1e-6", worst_fix <= 1e-6, "worst=%.3g" % worst_fix),
        ],
    )


def test_criterion_04_normal_errors_benchmark():
    rows = bench("normal", "none")
    check(
        "normal-errors-benchmark",
        [
            ("lasso-fit>=0.95", rows["lasso"].correctly_fitted_rate >= 0.95,
             "%.3f" % rows["lasso"].correctly_fitted_rate),
            ("rlasso-fit>=0.95", rows["rlasso"].correctly_fitted_rate >= 0.95,
             "%.3f" % rows["rlasso"].correctly_fitted_rate),
            ("rlasso-mse<lasso-mse", rows["rlasso"].mean_mse < rows["lasso"].mean_mse,
             "%.4g vs %.4g" % (rows["rlasso"].mean_mse, rows["lasso"].mean_mse)),
            ("rols-mse<ols-mse", rows["rols"].mean_mse < rows["ols"].mean_mse,
             "%.4g vs %.4g" % (rows["rols"].mean_mse, rows["ols"].mean_mse)),
            ("ols-mse-in-[0.003,0.007]", 0.003 <= rows["ols"].mean_mse <= 0.007,
             "%.4g" % rows["ols"].mean_mse),
        ],
    )


def test_criterion_05_heavy_tail_benchmark():
    rows = bench("t3", "none")
    check(
        "heavy-tail-benchmark",
        [
            ("rlasso-fit>=0.9", rows["rlasso"].correctly_fitted_rate >= 0.9,
             "%.3f" % rows["rlasso"].correctly_fitted_rate),
            ("rlasso-fit>=lasso-fit",
             rows["rlasso"].correctly_fitted_rate >= rows["lasso"].correctly_fitted_rate,
             "%.3f vs %.3f" % (rows["rlasso"].correctly_fitted_rate,
                               rows["lasso"].correctly_fitted_rate)),
        ],
    )


def test_criterion_06_x_outlier_benchmark():
    rows = bench("normal", "x_direction")
    check(
        "x-outlier-benchmark",
        [
            ("rlasso-fit>=0.9", rows["rlasso"].correctly_fitted_rate >= 0.9,
             "%.3f" % rows["rlasso"].correctly_fitted_rate),
            ("lasso-fit<=0.1", rows["lasso"].correctly_fitted_rate <= 0.1,
             "%.3f" % rows["lasso"].correctly_fitted_rate),
            ("rlasso-mse<ols-mse", rows["rlasso"].mean_mse < rows["ols"].mean_mse,
             "%.4g vs %.4g" % (rows["rlasso"].mean_mse, rows["ols"].mean_mse)),
        ],
    )


def test_criterion_07_y_outlier_failure_mode():
    # Documented failure mode: response contamination is expected to break
    # every estimator (no exact support recovery, MSE >= 1).  The MSE
    # clause holds.  The support clause does not hold for the restricted
    # LASSO in this implementation and is asserted as stated anyway: when
    # the true coefficients satisfy the restrictions exactly, the feasible
    # set's minimum-l1 face contains the truth, so cross-validated fits
    # keep recovering the true zeros at a high rate no matter how the
    # responses are contaminated.  Reproducing the low published rate
    # requires capping the lambda grid well below the data-driven maximum,
    # which would break the other benchmarks; the honest result is a high
    # rate and this test records that conflict by failing its
    # all-fit-rates<=0.25 clause.
    rows = bench("normal", "y_direction")
    fit_detail = " ".join(
        "%s=%.3f" % (m, rows[m].correctly_fitted_rate) for m in rows
    )
    mse_detail = " ".join("%s=%.3g" % (m, rows[m].mean_mse) for m in rows)
    check(
        "y-outlier-failure-mode",
        [
            ("all-fit-rates<=0.25",
             all(rows[m].correctly_fitted_rate <= 0.25 for m in rows), fit_detail),
            ("all-mean-mse>=1", all(rows[m].mean_mse >= 1.0 for m in rows), mse_detail),
        ],
    )


def test_criterion_08_expenditure_example_pipeline(capsys):
    code = main(["example"])
    out = capsys.readouterr().out
    data = rd_expenditure()
    rs = rd_restrictions()
    mask = (False,) + (True,) * (data.p - 1)
    worst = 0.0
    for res in (
        fit_restricted_ols(data, rs),
        fit_restricted_lasso(data, rs, FitConfig(lam=1.0, penalize_mask=mask)),
    ):
        worst = max(worst, float(np.max(np.abs(rs.rmat @ res.coefficients - rs.rvec))))
    # the regularization path must pass through exactly {X1, X3}
    hit = False
    for lam in lambda_grid(data):
        fit = fit_lasso_lqa(data, FitConfig(lam=float(lam), penalize_mask=mask))
        names = {data.names[j - 1] for j in fit.selected} - {data.names[0]}
        if names == {"X1", "X3"}:
            hit = True
            break
    check(
        "expenditure-example-pipeline",
        [
            ("cmd-example-exit-0", code == 0, "exit=%d" % code),
            ("output-lists-selection", "Selected variables:" in out, "present"),
            ("restriction-residual<=1e-8", worst <= 1e-8, "worst=%.3g" % worst),
            ("path-contains-{X1,X3}", hit, "hit=%s" % hit),
        ],
    )


def test_criterion_09_simulate_determinism(capsys, tmp_path):
    outputs = []
    dumps = []
    for run, jobs in enumerate(("1", "1", "2")):
        dump = tmp_path / ("est%d.csv" % run)
        args = [
            "simulate", "--scenario", "t3", "--n", "50", "--reps", "6",
            "--seed", "7", "--jobs", jobs, "--format", "json",
            "--dump-estimates", str(dump),
        ]
        assert main(args) == 0
        outputs.append(capsys.readouterr().out)
        dumps.append(dump.read_bytes())
        json.loads(outputs[-1])  # stays parseable
    check(
        "simulate-determinism",
        [
            ("repeat-identical", outputs[0] == outputs[1], "stdout bytes"),
            ("parallel-identical", outputs[0] == outputs[2], "jobs=2 stdout"),
            ("dump-identical", dumps[0] == dumps[1] == dumps[2], "estimate files"),
        ],
    )
