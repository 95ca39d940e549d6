"""Command-line interface.

Four subcommands:

* ``fit``      — fit one estimator to a CSV dataset (fixed lambda or CV).
* ``cv``       — print the cross-validation error curve for a dataset.
* ``simulate`` — run the Monte-Carlo benchmark and print summary tables.
* ``example``  — the embedded R&D-expenditure analysis, end to end.

Exit codes: 0 success, 2 input/usage problems, 3 numerical failure.
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from .datasets import PRIOR_BETA, rd_expenditure, rd_restrictions
from .errors import DegenerateResponseError, RestrictionSyntaxError, SingularMatrixError
from .estimators import fit_lasso_lqa, fit_ols, fit_restricted_lasso, fit_restricted_ols
from .io import INTERCEPT_NAME, emit_table, format_number, load_csv
from .model import Dataset, FitConfig
from .parsing import parse_restriction_file, render_restrictions
from .selection import cross_validate, lambda_grid
from .simulation import (
    BETA_TRUE,
    METHODS,
    SimScenario,
    aggregate_metrics,
    run_replications,
)

_SCENARIOS = {
    "normal": ("normal", "none"),
    "t3": ("t3", "none"),
    "outlier-y": ("normal", "y_direction"),
    "outlier-x": ("normal", "x_direction"),
}


def _add_format(p):
    p.add_argument(
        "--format",
        choices=("table", "csv", "json"),
        default="table",
        help="output format (default: table)",
    )


def _add_intercept_flags(p):
    p.add_argument(
        "--intercept",
        action="store_true",
        help="prepend an all-ones column named %r" % INTERCEPT_NAME,
    )
    g = p.add_mutually_exclusive_group()
    g.add_argument(
        "--no-penalize-intercept",
        action="store_true",
        help="leave the intercept unpenalized (this is the default)",
    )
    g.add_argument(
        "--penalize-intercept",
        action="store_true",
        help="include the intercept in the absolute-value penalty",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="restlasso",
        description="Estimation and variable selection in linear regression "
        "under exact linear equality restrictions R beta = r.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit one estimator to a CSV dataset")
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--target", required=True, help="name of the response column")
    p.add_argument(
        "--method", required=True, choices=("ols", "rols", "lasso", "rlasso")
    )
    p.add_argument("--restrictions", help="restriction-equation file (b1..bp syntax)")
    p.add_argument(
        "--lambda", dest="lam", type=float, default=None,
        help="fixed penalty weight (mutually exclusive with --cv)",
    )
    p.add_argument(
        "--cv", action="store_true",
        help="choose lambda by k-fold cross-validation",
    )
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--grid-points", type=int, default=50)
    p.add_argument(
        "--cv-rule", choices=("min", "1se"), default="min",
        help="CV selection rule for --cv (default: min)",
    )
    p.add_argument("--seed", type=int, default=0)
    _add_intercept_flags(p)
    _add_format(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("cv", help="print the cross-validation error curve")
    p.add_argument("--data", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--method", required=True, choices=("lasso", "rlasso"))
    p.add_argument("--restrictions")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--grid-points", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _add_intercept_flags(p)
    _add_format(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("simulate", help="run the Monte-Carlo benchmark")
    p.add_argument("--scenario", required=True, choices=sorted(_SCENARIOS))
    p.add_argument(
        "--n", type=int, nargs="+", default=[50, 100, 200],
        help="sample size(s); one summary block per value (default: 50 100 200)",
    )
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--grid-points", type=int, default=50)
    p.add_argument(
        "--tau", type=float, default=0.1,
        help="|coefficient| below tau counts as an estimated zero (default 0.1)",
    )
    p.add_argument(
        "--cv-rule", choices=("min", "1se"), default="1se",
        help="per-replication lambda rule (default: 1se)",
    )
    p.add_argument(
        "--jobs", type=int, default=1,
        help="parallel replication workers; output is identical for any value",
    )
    p.add_argument(
        "--dump-estimates", metavar="PATH",
        help="write per-replication coefficients to this CSV file",
    )
    _add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("example", help="embedded R&D-expenditure analysis")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--grid-points", type=int, default=50)
    p.add_argument(
        "--cv-rule", choices=("min", "1se"), default="min",
        help="CV selection rule (default: min)",
    )
    p.add_argument(
        "--penalize-intercept", action="store_true",
        help="include the intercept in the penalty (default: unpenalized)",
    )
    _add_format(p)
    p.set_defaults(func=cmd_example)

    return parser


def _penalize_mask(args, p, has_intercept):
    if has_intercept and not getattr(args, "penalize_intercept", False):
        return (False,) + (True,) * (p - 1)
    return None


def _restriction_residual(result, restrictions):
    return float(
        np.max(np.abs(restrictions.rmat @ result.coefficients - restrictions.rvec))
    )


def _selected_names(result, names):
    return [names[j - 1] for j in sorted(result.selected)]


def _display_selected(result, names):
    """Table-style '(i,j,...)' over the non-intercept predictors."""
    has_icpt = len(names) > 0 and names[0] == INTERCEPT_NAME
    idx = []
    for j in sorted(result.selected):
        if has_icpt and j == 1:
            continue
        idx.append(j - 1 if has_icpt else j)
    return "(" + ",".join(str(i) for i in idx) + ")"


def _load_restrictions(path, p):
    with open(path, encoding="utf-8") as fh:
        return parse_restriction_file(fh.read(), p)


def cmd_fit(args):
    data = load_csv(args.data, args.target, intercept=args.intercept)
    mask = _penalize_mask(args, data.p, args.intercept)
    method = args.method

    restrictions = None
    if method in ("rols", "rlasso"):
        if not args.restrictions:
            raise ValueError("method %r requires --restrictions" % method)
        restrictions = _load_restrictions(args.restrictions, data.p)
    elif args.restrictions:
        print(
            "warning: --restrictions ignored for method %r" % method, file=sys.stderr
        )

    lam = None
    cv_report = None
    if method in ("lasso", "rlasso"):
        if args.cv and args.lam is not None:
            raise ValueError("--lambda and --cv are mutually exclusive")
        if not args.cv and args.lam is None:
            raise ValueError("method %r needs --lambda or --cv" % method)
        if args.cv:
            grid = lambda_grid(data, args.grid_points)
            cv_report = cross_validate(
                data,
                method,
                restrictions=restrictions,
                grid=grid,
                k=args.folds,
                seed=args.seed,
                config=FitConfig(penalize_mask=mask),
            )
            lam = (
                cv_report.best_lambda
                if args.cv_rule == "min"
                else cv_report.lambda_1se
            )
        else:
            lam = args.lam
            if lam < 0:
                raise ValueError("--lambda must be >= 0")
    elif args.cv or args.lam is not None:
        print(
            "warning: --lambda/--cv ignored for method %r" % method, file=sys.stderr
        )

    if method == "ols":
        result = fit_ols(data)
    elif method == "rols":
        result = fit_restricted_ols(data, restrictions)
    elif method == "lasso":
        result = fit_lasso_lqa(data, FitConfig(lam=lam, penalize_mask=mask))
    else:
        result = fit_restricted_lasso(
            data, restrictions, FitConfig(lam=lam, penalize_mask=mask)
        )

    meta = {
        "method": method,
        "n": data.n,
        "p": data.p,
        "lambda": result.lam,
        "iterations": result.iterations,
        "converged": result.converged,
        "objective": result.objective,
    }
    if cv_report is not None:
        meta["cv_rule"] = args.cv_rule
        meta["cv_best_lambda"] = cv_report.best_lambda
        meta["cv_lambda_1se"] = cv_report.lambda_1se
    if restrictions is not None:
        meta["restriction_residual"] = _restriction_residual(result, restrictions)
    coef_rows = [
        {
            "name": name,
            "estimate": float(b),
            "selected": (j + 1) in result.selected,
        }
        for j, (name, b) in enumerate(zip(data.names, result.coefficients))
    ]

    if args.format == "json":
        payload = dict(meta)
        payload["objective"] = _jnum(meta["objective"])
        payload["lambda"] = _jnum(meta["lambda"])
        for k in ("restriction_residual", "cv_best_lambda", "cv_lambda_1se"):
            if k in payload:
                payload[k] = _jnum(payload[k])
        payload["coefficients"] = [
            {"name": r["name"], "estimate": _jnum(r["estimate"]), "selected": r["selected"]}
            for r in coef_rows
        ]
        payload["selected"] = _selected_names(result, data.names)
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        sys.stdout.write(emit_table(coef_rows, "csv"))
    else:
        for k, v in meta.items():
            print("%s: %s" % (k, _tval(v)))
        print("selected: %s" % ", ".join(_selected_names(result, data.names)))
        print()
        sys.stdout.write(emit_table(coef_rows, "table"))
    return 0


def _jnum(v):
    if v is None or isinstance(v, (int, bool)):
        return v
    v = float(v)
    return float(format_number(v)) if math.isfinite(v) else None


def _tval(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_number(v)
    return str(v)


def cmd_cv(args):
    data = load_csv(args.data, args.target, intercept=args.intercept)
    mask = _penalize_mask(args, data.p, args.intercept)
    restrictions = None
    if args.method == "rlasso":
        if not args.restrictions:
            raise ValueError("method 'rlasso' requires --restrictions")
        restrictions = _load_restrictions(args.restrictions, data.p)
    elif args.restrictions:
        print("warning: --restrictions ignored for method 'lasso'", file=sys.stderr)
    grid = lambda_grid(data, args.grid_points)
    report = cross_validate(
        data,
        args.method,
        restrictions=restrictions,
        grid=grid,
        k=args.folds,
        seed=args.seed,
        config=FitConfig(penalize_mask=mask),
    )
    curve_rows = [
        {"lambda": lam, "mean_error": m, "std_error": s} for lam, m, s in report.curve
    ]
    meta = {
        "method": args.method,
        "folds": report.folds,
        "seed": report.seed,
        "best_lambda": report.best_lambda,
        "lambda_1se": report.lambda_1se,
    }
    if args.format == "json":
        payload = dict(meta)
        payload["best_lambda"] = _jnum(payload["best_lambda"])
        payload["lambda_1se"] = _jnum(payload["lambda_1se"])
        payload["curve"] = [
            {k: _jnum(v) for k, v in row.items()} for row in curve_rows
        ]
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        sys.stdout.write(emit_table(curve_rows, "csv"))
    else:
        for k, v in meta.items():
            print("%s: %s" % (k, _tval(v)))
        print()
        sys.stdout.write(emit_table(curve_rows, "table"))
    return 0


def cmd_simulate(args):
    error_dist, contamination = _SCENARIOS[args.scenario]
    rows = []
    dump_rows = []
    p = len(BETA_TRUE)
    for n in args.n:
        scenario = SimScenario(
            n=n,
            error_dist=error_dist,
            contamination=contamination,
            n_reps=args.reps,
            seed=args.seed,
            cv_folds=args.folds,
            grid_points=args.grid_points,
            tau=args.tau,
            cv_rule=args.cv_rule,
        )
        replications = run_replications(scenario, jobs=args.jobs)
        rows.extend(asdict(r) for r in aggregate_metrics(scenario, replications))
        if args.dump_estimates:
            for rep in replications:
                for method in METHODS:
                    o = rep.outcomes[method]
                    base = [n, rep.rep_index, method]
                    if o.error is not None:
                        dump_rows.append(base + [""] * (p + 6) + [o.error])
                        continue
                    dump_rows.append(
                        base
                        + ["" if o.lam is None else format_number(o.lam)]
                        + [format_number(o.mse)]
                        + [o.correct_zeros, o.incorrect_zeros, int(o.exactly_fitted)]
                        + [format_number(b) for b in o.coefficients]
                        + [""]
                    )
    if args.dump_estimates:
        header = (
            ["n", "rep", "method", "lambda", "mse", "correct_zeros",
             "incorrect_zeros", "exactly_fitted"]
            + ["beta_%d" % (j + 1) for j in range(p)]
            + ["error"]
        )
        with open(args.dump_estimates, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(dump_rows)
    sys.stdout.write(emit_table(rows, args.format))
    return 0


def cmd_example(args):
    data = rd_expenditure()
    restrictions = rd_restrictions()
    mask = (
        None
        if args.penalize_intercept
        else (False,) + (True,) * (data.p - 1)
    )
    base = FitConfig(penalize_mask=mask)
    grid = lambda_grid(data, args.grid_points)

    def pick(report):
        return report.best_lambda if args.cv_rule == "min" else report.lambda_1se

    lam_lasso = pick(
        cross_validate(data, "lasso", grid=grid, k=args.folds, seed=args.seed, config=base)
    )
    lam_rlasso = pick(
        cross_validate(
            data, "rlasso", restrictions=restrictions, grid=grid,
            k=args.folds, seed=args.seed, config=base,
        )
    )

    fits = {
        "ols": fit_ols(data),
        "rols": fit_restricted_ols(data, restrictions),
        "lasso": fit_lasso_lqa(data, FitConfig(lam=lam_lasso, penalize_mask=mask)),
        "rlasso": fit_restricted_lasso(
            data, restrictions, FitConfig(lam=lam_rlasso, penalize_mask=mask)
        ),
    }
    loo = {m: _loo_mse(m, data, restrictions, fits[m].lam, mask) for m in METHODS}

    # distinct selection sets along the LASSO path, with their lambda spans
    path = []
    for lam in grid:
        res = fit_lasso_lqa(data, FitConfig(lam=float(lam), penalize_mask=mask))
        label = _display_selected(res, data.names)
        if path and path[-1][0] == label:
            path[-1][2] = float(lam)
        else:
            path.append([label, float(lam), float(lam)])

    coef_rows = []
    for m in METHODS:
        row = {"method": m}
        for name, b in zip(data.names, fits[m].coefficients):
            row[name] = float(b)
        row["selected"] = _display_selected(fits[m], data.names)
        row["loo_mse"] = loo[m]
        if m in ("rols", "rlasso"):
            row["restriction_residual"] = _restriction_residual(fits[m], restrictions)
        else:
            row["restriction_residual"] = ""
        coef_rows.append(row)

    if args.format == "json":
        payload = {
            "n": data.n,
            "p": data.p,
            "names": list(data.names),
            "restrictions": render_restrictions(restrictions).splitlines(),
            "prior_beta_reference_only": list(PRIOR_BETA),
            "cv": {
                "folds": args.folds,
                "seed": args.seed,
                "rule": args.cv_rule,
                "lambda_lasso": _jnum(lam_lasso),
                "lambda_rlasso": _jnum(lam_rlasso),
            },
            "fits": {
                m: {
                    "coefficients": {
                        name: _jnum(b)
                        for name, b in zip(data.names, fits[m].coefficients)
                    },
                    "selected": _selected_names(fits[m], data.names),
                    "selected_variables": _display_selected(fits[m], data.names),
                    "loo_mse": _jnum(loo[m]),
                    "restriction_residual": (
                        _jnum(_restriction_residual(fits[m], restrictions))
                        if m in ("rols", "rlasso")
                        else None
                    ),
                }
                for m in METHODS
            },
            "lasso_path_selection_sets": [
                {"selected_variables": lbl, "lambda_max": _jnum(hi), "lambda_min": _jnum(lo)}
                for lbl, hi, lo in path
            ],
        }
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        sys.stdout.write(emit_table(coef_rows, "csv"))
    else:
        print("R&D expenditure example: n=%d, p=%d (intercept %s)" % (
            data.n, data.p,
            "penalized" if args.penalize_intercept else "unpenalized",
        ))
        print("restrictions:")
        for line in render_restrictions(restrictions).splitlines():
            print("  %s" % line)
        print(
            "prior coefficients (reference only, not used in fitting): %s"
            % " ".join(format_number(b) for b in PRIOR_BETA)
        )
        print(
            "cv: folds=%d seed=%d rule=%s -> lambda[lasso]=%s, lambda[rlasso]=%s"
            % (args.folds, args.seed, args.cv_rule,
               format_number(lam_lasso), format_number(lam_rlasso))
        )
        print()
        sys.stdout.write(emit_table(coef_rows, "table"))
        print()
        print("Selected variables:")
        for m in METHODS:
            print("  %s: %s" % (m, _display_selected(fits[m], data.names)))
        print()
        print("lasso path selection sets (lambda descending):")
        for lbl, hi, lo in path:
            print(
                "  lambda in [%s, %s]: %s"
                % (format_number(lo), format_number(hi), lbl)
            )
    return 0


def _loo_mse(method, data, restrictions, lam, mask):
    """Leave-one-out prediction MSE; lambda held fixed at the full-data choice."""
    errors = []
    for i in range(data.n):
        keep = np.arange(data.n) != i
        sub = Dataset(x=data.x[keep], y=data.y[keep], names=data.names)
        if method == "ols":
            beta = fit_ols(sub).coefficients
        elif method == "rols":
            beta = fit_restricted_ols(sub, restrictions).coefficients
        elif method == "lasso":
            beta = fit_lasso_lqa(sub, FitConfig(lam=lam, penalize_mask=mask)).coefficients
        else:
            beta = fit_restricted_lasso(
                sub, restrictions, FitConfig(lam=lam, penalize_mask=mask)
            ).coefficients
        pred = float(data.x[i] @ beta)
        errors.append((data.y[i] - pred) ** 2)
    return float(np.mean(errors))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SingularMatrixError, DegenerateResponseError) as err:
        print("numerical failure: %s" % err, file=sys.stderr)
        return 3
    except (RestrictionSyntaxError, ValueError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
