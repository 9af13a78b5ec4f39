"""Command-line front end.

Subcommands::

    indexlaw estimate  --input data.csv --index fgt --alpha 1 --poverty-line 2.5
    indexlaw compare   --input paired.csv --index fgt --alpha 0 --poverty-line 1
    indexlaw decompose --input grouped.csv --index shorrocks --poverty-line 1
    indexlaw validate  --experiment coverage --seed 42

CSV conventions: comma-separated, decimal point, an optional single header
row (auto-detected when the first row is non-numeric).  ``estimate`` expects
one numeric column, ``compare`` two numeric columns of equal length (paired
periods), ``decompose`` a numeric value column followed by a group label
column (labels map to 1..K in first-seen order).

Exit codes: 0 success, 1 input error, 2 usage error, 3 validation band
failed.  All numbers are printed with 12 significant digits; json and text
outputs carry identical values.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import montecarlo
from .decomposition import SubgroupPartition, gap_estimate, gap_variance
from .distributions import EmpiricalDistribution, LogNormal, Uniform
from .empirical import build_sample
from .errors import (ColumnCountMismatch, EmptyInput, IndexLawError, ParseError,
                     UnknownExperiment)
from .indices import NamedIndex, named_estimate, named_representation
from .representation import confidence_interval, index_variance
from .temporal import BivariateFrame, empirical_copula, relative_variation_law

_INDEX_CHOICES = ("fgt", "sen", "kakwani", "shorrocks", "thon", "takayama",
                  "takayama-ratio", "central-moment", "odd-moment", "even-moment")
_EXPERIMENTS = ("normality", "coverage", "cre2", "decomposability")


def _sig12(x):
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, (list, tuple)):
        return [_sig12(v) for v in x]
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        xf = float(x)
        if xf != xf or xf in (float("inf"), float("-inf")):
            return None
        return float(f"{xf:.12g}")
    return x


def _round_tree(obj):
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return _sig12(obj)


def read_csv(path: str, n_columns: int, last_is_label: bool = False):
    """Read a small CSV with line-accurate errors.

    Returns a list of column arrays (floats, except the trailing label
    column when requested).  Lines are 1-based including any header.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = []
    header_skipped = False
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        cells = [c.strip() for c in text.split(",")]
        if len(cells) != n_columns:
            raise ColumnCountMismatch(
                f"line {lineno}: expected {n_columns} columns, found {len(cells)}")
        numeric_cells = cells[:-1] if last_is_label else cells
        try:
            values = [float(c) for c in numeric_cells]
        except ValueError:
            if not rows and not header_skipped:
                header_skipped = True
                continue
            raise ParseError(lineno, text) from None
        if last_is_label:
            rows.append((*values, cells[-1]))
        else:
            rows.append(tuple(values))
    if not rows:
        raise EmptyInput(f"no data rows in {path}")
    columns = list(zip(*rows))
    out = [np.asarray(col, dtype=float) for col in columns[: n_columns - int(last_is_label)]]
    if last_is_label:
        out.append(list(columns[-1]))
    return out


class _UsageError(Exception):
    pass


def _build_index(args) -> NamedIndex:
    kind = args.index
    z = args.poverty_line
    if kind == "fgt":
        if args.alpha is None:
            raise _UsageError("--alpha is required for fgt")
        return NamedIndex.fgt(args.alpha, z)
    if kind == "sen":
        return NamedIndex.sen(z)
    if kind == "kakwani":
        return NamedIndex.kakwani(args.k or 1, z)
    if kind == "shorrocks":
        return NamedIndex.shorrocks(z)
    if kind == "thon":
        return NamedIndex.thon(z)
    if kind == "takayama":
        return NamedIndex.takayama(z)
    if kind == "takayama-ratio":
        return NamedIndex.takayama_ratio(z)
    if kind == "central-moment":
        return NamedIndex.central_moment(args.k or 2)
    if kind == "odd-moment":
        return NamedIndex.odd_normalized(args.k or 2)
    if kind == "even-moment":
        return NamedIndex.even_normalized(args.k or 2)
    raise _UsageError(f"unknown index {kind!r}")


def _emit(payload: dict, fmt: str) -> None:
    payload = _round_tree(payload)
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    for key, val in payload.items():
        print(f"{key}: {val}")


def _index_params(index: NamedIndex) -> dict:
    return {k: v for k, v in (("alpha", index.alpha), ("k", index.k),
                              ("order", index.order),
                              ("poverty_line", index.poverty_line)) if v is not None}


def cmd_estimate(args) -> int:
    (col,) = read_csv(args.input, 1)
    sample = build_sample(col)
    index = _build_index(args)
    est = named_estimate(sample, index)
    plug = EmpiricalDistribution(sample)
    var = index_variance(plug, named_representation(plug, index), grid=args.grid).total
    lo, hi = confidence_interval(est, var, sample.n, args.level)
    _emit({"index": index.kind, "params": _index_params(index), "n": sample.n,
           "estimate": est, "variance": var, "ci": [lo, hi], "level": args.level},
          args.format)
    return 0


def cmd_compare(args) -> int:
    if args.input2:
        (col1,) = read_csv(args.input, 1)
        (col2,) = read_csv(args.input2, 1)
        if col1.size != col2.size:
            raise ColumnCountMismatch(
                f"period files differ in length: {col1.size} vs {col2.size}")
    else:
        col1, col2 = read_csv(args.input, 2)
    index = _build_index(args)
    s1, s2 = build_sample(col1), build_sample(col2)
    i1, i2 = named_estimate(s1, index), named_estimate(s2, index)
    m1, m2 = EmpiricalDistribution(s1), EmpiricalDistribution(s2)
    frame = BivariateFrame(m1, m2, empirical_copula(np.column_stack([col1, col2])))
    rep1 = named_representation(m1, index)
    rep2 = named_representation(m2, index)
    n = s1.n
    delta = i2 - i1
    if i1 != 0.0:
        joint = relative_variation_law(frame, rep1, i1, i2, rep2=rep2, grid=args.grid)
        rel = delta / i1
        rel_var = joint.rel_var
        rel_ci = confidence_interval(rel, rel_var, n, args.level)
    else:
        from .temporal import temporal_joint_covariance

        joint = temporal_joint_covariance(frame, rep1, rep2=rep2, grid=args.grid)
        rel = rel_var = rel_ci = None
    var1 = float(joint.matrix[0, 0])
    var2 = float(joint.matrix[1, 1])
    payload = {
        "index": index.kind, "params": _index_params(index), "n": n,
        "estimate1": i1, "estimate2": i2,
        "variance1": var1, "variance2": var2,
        "ci1": list(confidence_interval(i1, var1, n, args.level)),
        "ci2": list(confidence_interval(i2, var2, n, args.level)),
        "delta": delta, "delta_variance": joint.delta_var,
        "delta_ci": list(confidence_interval(delta, joint.delta_var, n, args.level)),
        "relative": rel, "relative_variance": rel_var,
        "relative_ci": list(rel_ci) if rel_ci else None,
        "joint_covariance": [[float(v) for v in row] for row in joint.matrix],
        "level": args.level,
    }
    _emit(payload, args.format)
    return 0


def cmd_decompose(args) -> int:
    values, labels = read_csv(args.input, 2, last_is_label=True)
    sample = build_sample(values)
    partition = SubgroupPartition.from_labels(labels)
    index = _build_index(args)
    gap = gap_estimate(sample, partition, index)
    models, weights, group_estimates = [], [], []
    inp = sample.input_values()
    for g in range(1, partition.n_groups + 1):
        vals = inp[partition.labels == g]
        if vals.size == 0:
            continue
        grp = build_sample(vals)
        models.append(EmpiricalDistribution(grp))
        weights.append(vals.size / sample.n)
        group_estimates.append(named_estimate(grp, index))
    w = np.asarray(weights)
    w = w / w.sum()
    dec = gap_variance(w, models, lambda m: named_representation(m, index),
                       grid=args.grid)
    var_gd = dec.theta1_sq + dec.theta2_sq
    var_gd0 = dec.theta1_sq + dec.theta3_sq
    payload = {
        "index": index.kind, "params": _index_params(index), "n": sample.n,
        "groups": list(partition.names), "weights": [float(v) for v in w],
        "group_estimates": [float(v) for v in group_estimates],
        "gap": gap,
        "theta1_sq": dec.theta1_sq, "theta2_sq": dec.theta2_sq,
        "theta3_sq": dec.theta3_sq,
        "variance_gd": var_gd, "variance_gd0": var_gd0,
        "ci_gd": list(confidence_interval(gap, max(var_gd, 0.0), sample.n, args.level)),
        "ci_gd0": list(confidence_interval(gap, max(var_gd0, 0.0), sample.n, args.level)),
        "level": args.level,
    }
    _emit(payload, args.format)
    return 0


def cmd_validate(args) -> int:
    if args.seed is None:
        raise UnknownExperiment("--seed is required for validate")
    seed = args.seed
    name = args.experiment
    if name == "coverage":
        report = montecarlo.coverage_experiment(
            Uniform(0.0, 1.0), NamedIndex.fgt(0.0, 0.5), n=1000, n_replicates=2000,
            level=args.level, master_seed=seed)
        ok = abs(report.coverage - args.level) <= 0.015
        band = f"|coverage - {args.level}| <= 0.015"
    elif name == "normality":
        report = montecarlo.normality_experiment(
            LogNormal(0.0, 1.0), NamedIndex.fgt(1.0, 1.0), n=2000, n_replicates=2000,
            master_seed=seed)
        ok = report.ks_pvalue > 0.01
        band = "ks_pvalue > 0.01"
    elif name == "cre2":
        seq = montecarlo.cre2_diagnostic(
            Uniform(0.0, 1.0), lambda x: np.asarray(x, dtype=float),
            n_grid=[100, 400, 1600, 6400], n_replicates=200, master_seed=seed)
        ok = all(b[1] < a[1] for a, b in zip(seq, seq[1:]))
        payload = {"experiment": "cre2", "master_seed": seed,
                   "diagnostic": [[n, v] for n, v in seq],
                   "band": "strictly decreasing", "band_ok": ok}
        _emit(payload, args.format)
        return 0 if ok else 3
    elif name == "decomposability":
        report = montecarlo.decomposability_experiment(
            [LogNormal(0.0, 1.0), LogNormal(0.5, 1.0)], [0.5, 0.5],
            NamedIndex.shorrocks(1.0), n=4000, n_replicates=500, master_seed=seed)
        ok = report.ks_pvalue > 0.01
        band = "ks_pvalue > 0.01"
    else:
        raise UnknownExperiment(f"unknown experiment {name!r}")
    payload = report.to_dict()
    payload["band"] = band
    payload["band_ok"] = bool(ok)
    _emit(payload, args.format)
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indexlaw",
                                     description="Index estimation and asymptotic inference")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("estimate", cmd_estimate), ("compare", cmd_compare),
                     ("decompose", cmd_decompose), ("validate", cmd_validate)):
        p = sub.add_parser(name)
        p.add_argument("--input", help="CSV input path")
        p.add_argument("--input2",
                       help="optional second single-column CSV (period 2 for compare)")
        p.add_argument("--index", choices=_INDEX_CHOICES, default="fgt")
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--poverty-line", dest="poverty_line", type=float, default=None)
        p.add_argument("--level", type=float, default=0.95)
        p.add_argument("--grid", type=int, default=2048)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--experiment", choices=_EXPERIMENTS, default=None)
        p.set_defaults(func=fn)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command in ("estimate", "compare", "decompose") and not args.input:
            print("error: --input is required", file=sys.stderr)
            return 2
        if args.command == "validate" and not args.experiment:
            print("error: --experiment is required", file=sys.stderr)
            return 2
        return args.func(args)
    except (UnknownExperiment, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, IndexLawError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
