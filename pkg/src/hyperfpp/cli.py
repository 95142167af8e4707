"""Command-line front end.

Every subcommand writes one table. CSV output starts with a line echoing the
version and configuration, then a column header, then rows; JSON output is a
single object ``{"hyperfpp": version, "config": {...}, "rows": [...]}``.
Directions are 1-based on the command line and in all output.

Exit status: 0 on success, 2 for invalid arguments, 3 when a size cap is hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import __version__
from .analytics.counting import count_fnk, fnk_bound_i, fnk_bound_iii, ne
from .analytics.gamma import (
    gamma_lower_cdf,
    independent_min_cdf,
    independent_min_median,
    log_markov_upper,
    markov_upper,
)
from .analytics.moments import connecting_counts, empirical_pz_ratio, mean_connecting, second_moment_terms
from .analytics.simulation import good_edge_stats
from .core import DomainError, ResourceError, prefix_blocks
from .solver import enumerate_counts, min_path, sample_min
from .weights import derive_replica

Rows = list[dict[str, Any]]

# excluded from the echo: neither changes the numbers
_NOT_ECHOED = {"threads", "output", "format", "func"}


def nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    """Nearest-rank quantile: the ``ceil(q * N)``-th smallest value."""
    rank = max(1, math.ceil(q * len(sorted_values)))
    return float(sorted_values[rank - 1])


_QUANTILES = (("q05", 0.05), ("q25", 0.25), ("median", 0.5), ("q75", 0.75), ("q95", 0.95))


def _summary(values: np.ndarray) -> dict[str, float]:
    v = np.sort(values)
    out = {"mean": float(v.mean()), "min": float(v[0]), "max": float(v[-1])}
    for name, q in _QUANTILES:
        out[name] = nearest_rank(v, q)
    return out


def _boundary_sets(args) -> tuple[list[int], list[int]]:
    # resolved sets are written back so the echoed config names them
    if args.first is None and args.last is None:
        a, b = prefix_blocks(args.n, args.c)
        args.first, args.last = [d + 1 for d in sorted(a)], [d + 1 for d in sorted(b)]
    elif args.first is None or args.last is None:
        raise DomainError("--first and --last must be given together")
    return [d - 1 for d in args.first], [d - 1 for d in args.last]


# --- subcommands ------------------------------------------------------------


def cmd_sample(args) -> Rows:
    values = sample_min(args.n, args.seed, args.reps, args.threads, cutoff=args.cutoff)
    rows: Rows = [{"kind": "sample", "key": r, "value": float(v)} for r, v in enumerate(values)]
    finite = values[np.isfinite(values)]
    if args.cutoff is None:
        rows += [{"kind": "summary", "key": k, "value": v} for k, v in _summary(values).items()]
    else:
        rows.append({"kind": "summary", "key": "p_le_cutoff", "value": len(finite) / len(values)})
    return rows


def cmd_path(args) -> Rows:
    res = min_path(args.n, derive_replica(args.seed, args.replica))
    return [{
        "replica": args.replica,
        "min_weight": res.min_weight,
        "argmin": " ".join(str(d + 1) for d in res.argmin),
    }]


def cmd_convergence(args) -> Rows:
    rows = []
    for n in args.n_values:
        values = sample_min(n, args.seed, args.reps, args.threads)
        s = _summary(values)
        rows.append({
            "n": n,
            "reps": args.reps,
            "mean": s["mean"],
            "median": s["median"],
            "q05": s["q05"],
            "q95": s["q95"],
            "p_le_x": float(np.mean(values <= args.x)),
            "markov_upper": markov_upper(n, args.x),
            "independent_median": independent_min_median(n),
        })
    return rows


def cmd_independent(args) -> Rows:
    return [
        {"n": n, "x": args.x, "cdf": independent_min_cdf(n, args.x), "median": independent_min_median(n)}
        for n in args.n_values
    ]


def cmd_enumerate(args) -> Rows:
    first, last = _boundary_sets(args)
    x = args.x if args.x is not None else 1.0 + args.eps / 3.0
    n_x = [enumerate_counts(args.n, derive_replica(args.seed, r), x) for r in range(args.reps)]
    n_conn = connecting_counts(args.n, args.eps, first, last, args.reps, args.seed)
    rows: Rows = [
        {"kind": "sample", "replica": r, "n_x": a, "n_connecting": int(b)}
        for r, (a, b) in enumerate(zip(n_x, n_conn))
    ]
    rows.append({"kind": "mean", "replica": None, "n_x": float(np.mean(n_x)),
                 "n_connecting": float(n_conn.mean())})
    rows.append({
        "kind": "expected",
        "replica": None,
        "n_x": math.exp(log_markov_upper(args.n, x)),
        "n_connecting": math.exp(mean_connecting(args.n, args.eps, len(first), len(last))),
    })
    return rows


def cmd_fnk(args) -> Rows:
    table = count_fnk(args.n)
    n = args.n
    rows = []
    for k in range(n + 1):
        f = table.f[k] if k <= n - 2 else None
        f1_next = sum(table.f1[j] for j in range(k, min(k + 3, n + 1)))
        rows.append({
            "k": k,
            "f": f,
            "f1": table.f1[k],
            "bound_i": fnk_bound_i(n, k) if k <= n - 2 else None,
            "bound_iii": fnk_bound_iii(n, k) if 1 <= k <= n - 2 else None,
            "f1_sandwich": f1_next if k <= n - 2 else None,
        })
    return rows


def cmd_tail(args) -> Rows:
    rows = []
    for n in args.n_values:
        for x in args.x_values:
            g = gamma_lower_cdf(n, x)
            rows.append({
                "n": n,
                "x": x,
                "cdf": g.cdf,
                "correction": g.correction,
                "correction_bound": math.exp(x) * x / (n + 1),
                "markov_upper": markov_upper(n, x),
            })
    return rows


def cmd_bounds(args) -> Rows:
    rows = []
    for n in args.n_values:
        t = second_moment_terms(n, args.eps, args.c)
        rows.append({"n": n, "ne": ne(n), "t1_log": t.t1_log, "t2_log": t.t2_log, "t3_log": t.t3_log})
    return rows


def cmd_goodedges(args) -> Rows:
    rows = []
    for t in args.t_values:
        s = good_edge_stats(args.n, t, args.reps, args.seed)
        rows.append({"t": t, "fraction_mean": s.fraction_mean, "p_analytic": s.p_analytic, "sigma": s.sigma})
    return rows


def cmd_secondmoment(args) -> Rows:
    first, last = _boundary_sets(args)
    est = empirical_pz_ratio(args.n, args.eps, first, last, args.reps, args.seed)
    return [{
        "mean": est.mean,
        "mean_sigma": est.mean_sigma,
        "mean_formula": math.exp(mean_connecting(args.n, args.eps, len(first), len(last))),
        "second_moment": est.second_moment,
        "pz_lower_bound": est.pz_lower_bound,
        "hit_rate": est.hit_rate,
        "hit_rate_sigma": est.hit_rate_sigma,
    }]


# --- output -----------------------------------------------------------------


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def echo_config(args) -> dict[str, Any]:
    cfg = {"subcommand": args.subcommand}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_ECHOED or k == "subcommand":
            continue
        cfg[k] = v
    return cfg


def render(args, rows: Rows) -> str:
    cfg = echo_config(args)
    if args.format == "json":
        doc = {
            "hyperfpp": __version__,
            "config": {k: _json_value(v) for k, v in cfg.items()},
            "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows],
        }
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"#hyperfpp={__version__}"] + [f"{k}={_fmt(v)}" for k, v in cfg.items()])
    columns = list(rows[0]) if rows else []
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


# --- argument parsing -------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperfpp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hyperfpp {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("sample", cmd_sample, "samples of m_n with nearest-rank quantiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=_positive_int, default=100)
    p.add_argument("--cutoff", type=float, default=None,
                   help="only resolve samples <= cutoff (exact below, inf above)")

    p = add("path", cmd_path, "minimal path of one replica")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replica", type=int, default=0)

    p = add("convergence", cmd_convergence, "m_n statistics over a sweep of n")
    p.add_argument("--n-values", type=_int_list, default=[10, 14, 18, 22])
    p.add_argument("--reps", type=_positive_int, default=200)
    p.add_argument("--x", type=float, default=0.9)

    p = add("independent", cmd_independent, "minimum of n! independent Gamma(n) sums")
    p.add_argument("--n-values", type=_int_list, default=list(range(20, 61, 5)))
    p.add_argument("--x", type=float, default=1.0)

    for name, func, help in (
        ("enumerate", cmd_enumerate, "exact path counts N_n^x and N^(1) per replica"),
        ("secondmoment", cmd_secondmoment, "empirical Paley-Zygmund ratio of N^(1)"),
    ):
        p = add(name, func, help)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--reps", type=_positive_int, default=1000)
        p.add_argument("--eps", type=float, default=0.3)
        p.add_argument("--c", type=float, default=0.08)
        p.add_argument("--first", type=_int_list, default=None, help="1-based first directions A")
        p.add_argument("--last", type=_int_list, default=None, help="1-based last directions A'")
        if name == "enumerate":
            p.add_argument("--x", type=float, default=None,
                           help="threshold for N_n^x (default 1 + eps/3)")

    p = add("fnk", cmd_fnk, "exact overlap counts f(n,k), f1(n,k) and bounds")
    p.add_argument("--n", type=int, required=True)

    p = add("tail", cmd_tail, "Gamma lower tails and corrections")
    p.add_argument("--n-values", type=_int_list, default=list(range(1, 51)))
    p.add_argument("--x-values", type=_float_list, default=[0.1, 0.5, 1.0, 1.5, 2.0, 3.0])

    p = add("bounds", cmd_bounds, "log second-moment bound terms")
    p.add_argument("--n-values", type=_float_list, default=[10.0**e for e in range(4, 17)])
    p.add_argument("--eps", type=float, default=0.3)
    p.add_argument("--c", type=float, default=0.08)

    p = add("goodedges", cmd_goodedges, "fraction of good first-step edges")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-values", type=_float_list, default=[0.1])
    p.add_argument("--reps", type=_positive_int, default=100)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rows = args.func(args)
    except ResourceError as exc:
        print(f"hyperfpp: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValueError) as exc:
        print(f"hyperfpp: {exc}", file=sys.stderr)
        return 2
    text = render(args, rows)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    return 0


def main() -> None:
    sys.exit(run())
