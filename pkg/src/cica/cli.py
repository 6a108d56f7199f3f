"""Command-line front end: model ingestion, analysis commands, JSON reports.

Exit codes: 0 success; 2 I/O, parse, or usage errors; 3 model validation
errors; 4 perfect correlation (Gaussian analysis); 5 solver failures
(infeasible budget or no convergence), with telemetry on stderr.
"""

import argparse
import csv
import datetime
import json
import os
import sys

import numpy as np

from . import __version__
from .cca import cca_decompose, cca_project
from .discrete_ci import (
    SolverOptions,
    mutual_information,
    solve_relaxed_wyner,
    solve_relaxed_wyner_multi,
    total_correlation,
)
from .errors import (
    BadK,
    CicaError,
    Infeasible,
    NoConvergence,
    PerfectCorrelation,
)
from .estimation import estimate_gaussian
from .gaussian_ci import component_count, mutual_info_rho, waterfill
from .model import LN2, validate_discrete, validate_gaussian, validate_multi_discrete
from .projections import (
    binary_vector_covariance,
    feature_mutual_information,
    project_discrete_map,
    project_gaussian,
    toy_binary_example,
)

_EXIT_IO = 2
_EXIT_VALIDATION = 3
_EXIT_PERFECT_CORR = 4
_EXIT_SOLVER = 5

_VERSION_FLAGS = {"map": "map", "cond-exp": "cond_exp", "marginal": "marginal"}


# ---------------------------------------------------------------------------
# ingestion helpers
# ---------------------------------------------------------------------------

def _read_csv_matrix(path):
    """Numeric CSV with a mandatory header row; rows are observations."""
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if len(rows) < 2:
        raise ValueError(f"{path}: expected a header row plus data rows")
    data = [[float(cell) for cell in row] for row in rows[1:] if row]
    return np.asarray(data, dtype=float)


def _read_cov_json(path):
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    try:
        return (
            np.asarray(payload["k_x"], dtype=float),
            np.asarray(payload["k_y"], dtype=float),
            np.asarray(payload["k_xy"], dtype=float),
        )
    except KeyError as exc:
        raise ValueError(f"{path}: covariance JSON needs keys k_x, k_y, k_xy") from exc


def _read_pmf_csv(path, multi: bool):
    """Sparse pmf CSV: index columns then a probability column."""
    with open(path, newline="", encoding="utf-8") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if len(rows) < 2:
        raise ValueError(f"{path}: expected a header row plus data rows")
    body = rows[1:]
    width = len(body[0])
    if width < 3 or (not multi and width != 3):
        raise ValueError(
            f"{path}: rows must be symbol indices plus a probability "
            f"({'>= 2' if multi else 'exactly 2'} index columns)"
        )
    idx = np.asarray([[int(float(c)) for c in row[:-1]] for row in body], dtype=int)
    prob = np.asarray([float(row[-1]) for row in body], dtype=float)
    if idx.min() < 0:
        raise ValueError(f"{path}: negative symbol index")
    cards = tuple(int(m) + 1 for m in idx.max(axis=0))
    table = np.zeros(cards)
    np.add.at(table, tuple(idx.T), prob)
    return table


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _write_report(path, report: dict, no_meta: bool):
    if not no_meta:
        report = dict(report)
        report["meta"] = {
            "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "tool": f"cica {__version__}",
        }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_jsonable(report), handle, indent=2, sort_keys=True)
        handle.write("\n")


def _scale(value, units):
    return value / LN2 if units == "bits" else value


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _load_gaussian_model(args, parser):
    has_samples = args.x is not None and args.y is not None
    has_cov = args.cov is not None
    if has_samples == has_cov:
        parser.print_usage(sys.stderr)
        print(
            f"{parser.prog}: provide either --x/--y sample CSVs or a --cov JSON, not both",
            file=sys.stderr,
        )
        raise SystemExit(_EXIT_IO)
    if has_cov:
        k_x, k_y, k_xy = _read_cov_json(args.cov)
        return validate_gaussian(k_x, k_y, k_xy), None, None
    x = _read_csv_matrix(args.x)
    y = _read_csv_matrix(args.y)
    joint = estimate_gaussian(x, y, ridge=args.ridge)
    return joint, x, y


def cmd_cca(args, parser) -> int:
    joint, x, y = _load_gaussian_model(args, parser)
    basis = cca_decompose(joint)
    if not 1 <= args.k <= basis.n_components:
        raise BadK(f"k must be in [1, {basis.n_components}], got {args.k}")
    report = {
        "rho": basis.rho,
        "u_k": basis.u[:, : args.k],
        "v_k": basis.v[:, : args.k],
        "k": args.k,
        "units": "nats",
    }
    if x is not None:
        u_feat, v_feat = cca_project(basis, args.k, x - x.mean(axis=0), y - y.mean(axis=0))
        report["projections"] = {"u": u_feat, "v": v_feat}
    _write_report(args.out, report, args.no_meta)
    return 0


def cmd_gaussian_cica(args, parser) -> int:
    joint, _, _ = _load_gaussian_model(args, parser)
    units = args.units
    version = _VERSION_FLAGS[args.version]
    basis = cca_decompose(joint)
    alloc = waterfill(basis.rho, args.gamma)
    k = component_count(basis.rho, args.gamma)
    proj = project_gaussian(joint, args.gamma, version)
    total_info = sum(float(mutual_info_rho(r)) for r in basis.rho)
    report = {
        "gamma": _scale(args.gamma, units),
        "c_gamma": _scale(float(alloc.c_gamma), units),
        "k": k,
        "gamma_i": _scale(alloc.gamma_i, units),
        "water_level": _scale(alloc.water_level, units),
        "rho": basis.rho,
        "total_mutual_information": _scale(total_info, units),
        "version": version,
        "u_map": proj.u_of_x,
        "v_map": proj.v_of_y,
        "component_scale": proj.scale,
        "units": units,
    }
    warnings = []
    if k == 0:
        warnings.append(
            "gamma is at or above the total mutual information; "
            "no components are retained and the projection maps are empty"
        )
    if warnings:
        report["warnings"] = warnings
    if args.curve is not None:
        grid = np.linspace(0.0, max(total_info, args.gamma), args.curve_points)
        with open(args.curve, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["gamma", "c_gamma", "k"])
            for g in grid:
                a = waterfill(basis.rho, float(g))
                writer.writerow(
                    [
                        repr(_scale(float(g), units)),
                        repr(_scale(float(a.c_gamma), units)),
                        component_count(basis.rho, float(g)),
                    ]
                )
    _write_report(args.out, report, args.no_meta)
    return 0


def _solver_options(args) -> SolverOptions:
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    kwargs = dict(seed=args.seed, threads=threads)
    if args.card_w is not None:
        kwargs["card_w"] = args.card_w
    if args.restarts is not None:
        kwargs["restarts"] = args.restarts
    return SolverOptions(**kwargs)


def cmd_discrete_cica(args, parser) -> int:
    table = _read_pmf_csv(args.pmf, multi=args.multi)
    opts = _solver_options(args)
    if args.multi and table.ndim > 2:
        joint = validate_multi_discrete(table)
        coupling, rep = solve_relaxed_wyner_multi(joint, args.gamma, opts)
        baseline = float(total_correlation(joint))
    else:
        joint = validate_discrete(table)
        coupling, rep = solve_relaxed_wyner(joint, args.gamma, opts)
        baseline = float(mutual_information(joint))
    features = {
        "per_source_map": [
            np.asarray(c).argmax(axis=0) for c in coupling.q_w_given_sources
        ],
    }
    if not args.multi or table.ndim == 2:
        proj = project_discrete_map(coupling)
        features["u"] = proj.u_of_x
        features["v"] = proj.v_of_y
        features["u_ties"] = proj.u_ties
        features["v_ties"] = proj.v_ties
    report = {
        "gamma": args.gamma,
        "upper_bound": float(rep.objective),
        "achieved_gamma": float(rep.achieved_gamma),
        "total_dependence": baseline,
        "lambda": rep.lam,
        "iterations": rep.iterations,
        "restarts_used": rep.restarts_used,
        "converged": rep.converged,
        "seed": args.seed,
        "card_w": coupling.card_w,
        "coupling": {"q_w_given_xy": coupling.q_w_given_xy, "q_w": coupling.q_w},
        "map_features": features,
        "units": "nats",
        "value_is_upper_bound": True,
    }
    _write_report(args.out, report, args.no_meta)
    return 0


def cmd_toy(args, parser) -> int:
    joint = toy_binary_example(args.a0)
    k_x, k_y, k_xy = binary_vector_covariance(joint)
    gauss = validate_gaussian(k_x, k_y, k_xy)
    basis = cca_decompose(gauss)
    opts = _solver_options(args)
    coupling, rep = solve_relaxed_wyner(joint, 0.0, opts)
    proj = project_discrete_map(coupling)
    feat_mi = float(feature_mutual_information(joint, proj.u_of_x, proj.v_of_y))
    report = {
        "a0": args.a0,
        "pmf": joint.pmf,
        "covariance": {"k_x": k_x, "k_y": k_y, "k_xy": k_xy},
        "cca": {"rho": basis.rho, "max_rho": float(basis.rho.max(initial=0.0))},
        "cica": {
            "gamma": 0.0,
            "upper_bound": float(rep.objective),
            "achieved_gamma": float(rep.achieved_gamma),
            "u": proj.u_of_x,
            "v": proj.v_of_y,
            "feature_mutual_information": feat_mi,
        },
        "comparison": {
            "mutual_information": float(mutual_information(joint)),
            "cca_sees": float(basis.rho.max(initial=0.0)),
            "cica_features_capture": feat_mi,
        },
        "seed": args.seed,
        "units": "nats",
        "value_is_upper_bound": True,
    }
    _write_report(args.out, report, args.no_meta)
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--out", required=True, help="output JSON report path")
    p.add_argument(
        "--no-meta",
        action="store_true",
        help="omit the timestamped meta block (byte-identical reruns)",
    )


def _add_gaussian_inputs(p):
    p.add_argument("--x", help="CSV of x observations (header row required)")
    p.add_argument("--y", help="CSV of y observations (header row required)")
    p.add_argument("--cov", help='covariance JSON {"k_x": .., "k_y": .., "k_xy": ..}')
    p.add_argument("--ridge", type=float, default=None, help="ridge added to k_x and k_y")


def _add_solver_flags(p):
    p.add_argument("--card-w", type=int, default=None, help="latent alphabet size")
    p.add_argument("--seed", type=int, default=0, help="seed for all solver randomness")
    p.add_argument("--restarts", type=int, default=None, help="random restarts per multiplier")
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help="solver worker threads (default: available cores)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cica",
        description="Common information components analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cca", help="canonical correlation analysis")
    _add_gaussian_inputs(p)
    p.add_argument("-k", type=int, required=True, help="number of components")
    _add_common(p)

    p = sub.add_parser("gaussian", help="Gaussian common-information analysis")
    _add_gaussian_inputs(p)
    p.add_argument("--gamma", type=float, required=True, help="compression level (nats)")
    p.add_argument(
        "--version",
        choices=sorted(_VERSION_FLAGS),
        default="cond-exp",
        help="projection rule",
    )
    p.add_argument("--units", choices=["nats", "bits"], default="nats")
    p.add_argument("--curve", default=None, help="also write a trade-off curve CSV here")
    p.add_argument("--curve-points", type=int, default=33, help="points on the curve grid")
    _add_common(p)

    p = sub.add_parser("discrete", help="discrete common-information solver")
    p.add_argument("--pmf", required=True, help="pmf CSV: index columns then probability")
    p.add_argument("--gamma", type=float, required=True, help="relaxation budget (nats)")
    p.add_argument(
        "--multi",
        action="store_true",
        help="M-source mode: constraint sum_i H(X_i|W) - H(X_1..X_M|W) <= gamma",
    )
    _add_solver_flags(p)
    _add_common(p)

    p = sub.add_parser("toy", help="binary toy example where CCA sees nothing")
    p.add_argument("--a0", type=float, required=True, help="DSBS flip probability")
    _add_solver_flags(p)
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "toy" and args.card_w is None:
        # the toy's optimum needs only two latent symbols; 4 adds headroom
        args.card_w = 4
    handlers = {
        "cca": cmd_cca,
        "gaussian": cmd_gaussian_cica,
        "discrete": cmd_discrete_cica,
        "toy": cmd_toy,
    }
    try:
        return handlers[args.command](args, parser)
    except (Infeasible, NoConvergence) as exc:
        print(f"cica: solver failed: {exc}", file=sys.stderr)
        details = getattr(exc, "details", None)
        if details:
            print(f"cica: telemetry: {json.dumps(_jsonable(details), sort_keys=True)}", file=sys.stderr)
        return _EXIT_SOLVER
    except PerfectCorrelation as exc:
        if args.command == "gaussian":
            print(f"cica: {exc}", file=sys.stderr)
            return _EXIT_PERFECT_CORR
        print(f"cica: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except CicaError as exc:
        print(f"cica: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"cica: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
