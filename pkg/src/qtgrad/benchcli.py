"""Benchmark harness and command-line entry point.

Four verbs:

* ``verify3d``: the fixed 8-step schedule on the 3-d problem, per method
  and seed, reporting the gradient norm and objective at the ninth
  iterate.
* ``quadbench``: the quadratic solvers over a (set, n, kappa, eps) grid,
  one run per starting-point seed.
* ``uncbench``: the globalized method over the built-in general test
  functions.
* ``profile``: Dolan-More performance-profile curves from a previously
  written run table.

The run verbs write ``<out>_runs.csv`` (one row per run) and
``<out>_agg.csv`` (per-cell means over solved runs); ``--trace`` adds
``<out>_trace.csv`` with one row per iteration, intended for small
grids.  Columns are documented next to RAW_COLUMNS / AGG_COLUMNS below.
All CSVs are UTF-8 with a header row; floats are written in scientific
notation with nine significant digits, so equal runs produce equal files
byte for byte (pass ``--zero-times`` to blank the one hardware-dependent
column).  Rows are sorted by (method, set, n, kappa, eps, seed)
regardless of worker scheduling; set QTGRAD_WORKERS to parallelize over
cells.

Configuration is plain ``key=value`` lines (``#`` comments allowed),
with precedence defaults < preset < file < flags.  Named presets bundle
the per-set (tau1, gamma) pairs used in the source tables; with no
preset and no flags the solvers run on their own defaults.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import quadprob, testfuns
from .errors import InvalidInput, InvalidSpec, QtgradError
from .quadsolver import QuadSolverConfig, solve_bb, solve_new, verify_3d_termination
from .report import STATUS_OK, RunReport
from .uncsolver import UncSolverConfig, solve

EXPERIMENTS = ("verify3d", "quadbench", "uncbench")
QUAD_METHODS = ("bb", "new", "bbq")
UNC_METHODS = ("alg1", "alg1-bbq")
VERIFY_METHODS = ("day3d", "bb13d", "bb23d", "bb1")

# (tau1, gamma) presets, one per quadratic problem set, for the adaptive
# method; named after the parameter table they reproduce.
PRESETS = {
    "table3-set1-new": (0.9, 1.0),
    "table3-set2-new": (0.9, 1.0),
    "table3-set3-new": (0.5, 1.0),
    "table3-set4-new": (0.5, 1.0),
    "table3-set5-new": (0.6, 1.3),
}

RAW_COLUMNS = ("method", "set", "n", "kappa", "eps", "seed", "iters",
               "nfe", "ngrad", "final_gnorm", "status", "time_ms",
               "final_f")
AGG_COLUMNS = ("method", "set", "n", "kappa", "eps", "runs", "solved",
               "iters_mean", "nfe_mean", "ngrad_mean",
               "final_gnorm_mean", "final_f_mean", "time_ms_mean")
TRACE_COLUMNS = ("method", "set", "n", "kappa", "eps", "seed", "k",
                 "branch", "stepsize", "gnorm", "fval", "bb1", "bb2",
                 "tau")

# quadbench fixes the problem instance and varies the starting point, so
# the seed column is the replicate index of the start.
PROBLEM_SEED = 0


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved description of one run-verb invocation."""

    experiment: str
    methods: tuple
    sets: tuple
    ns: tuple
    kappas: tuple
    epss: tuple
    seeds: int
    tau1: float | None
    gamma: float | None
    out: str
    trace: bool = False
    zero_times: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidSpec(f"unknown experiment {self.experiment!r}")
        if not self.methods:
            raise InvalidSpec("method list must be non-empty")
        allowed = {"verify3d": VERIFY_METHODS, "quadbench": QUAD_METHODS,
                   "uncbench": UNC_METHODS}[self.experiment]
        for m in self.methods:
            if m not in allowed:
                raise InvalidSpec(
                    f"method {m!r} not valid for {self.experiment} "
                    f"(choose from {', '.join(allowed)})")
        if self.seeds < 1:
            raise InvalidSpec("seeds must be at least 1")
        if not (self.sets and self.ns and self.kappas and self.epss):
            raise InvalidSpec("grids must be non-empty")
        if self.experiment == "quadbench":
            for s in self.sets:
                if s not in quadprob.SET_IDS:
                    raise InvalidSpec(f"unknown problem set {s}")
        if self.tau1 is not None and not 0.0 < self.tau1 <= 1.0:
            raise InvalidSpec("tau1 must lie in (0, 1]")
        if self.gamma is not None and self.gamma < 1.0:
            raise InvalidSpec("gamma must be at least 1")


@dataclass(frozen=True)
class ProfileCurve:
    """One method's performance-profile step function.

    ``fractions[i]`` is the share of all problems this method solved
    within ``rhos[i]`` times the per-problem best; at the largest
    breakpoint it equals the method's overall solved share.
    """

    method: str
    rhos: tuple
    fractions: tuple
    solved: int
    total: int

    def __post_init__(self):
        if len(self.rhos) != len(self.fractions):
            raise InvalidInput("rhos and fractions must align")
        if list(self.rhos) != sorted(set(self.rhos)):
            raise InvalidInput("rhos must be strictly increasing")
        prev = 0.0
        for f in self.fractions:
            if not 0.0 <= f <= 1.0 or f < prev:
                raise InvalidInput("fractions must be non-decreasing in [0, 1]")
            prev = f
        if self.rhos and self.total:
            if abs(self.fractions[-1] - self.solved / self.total) > 1e-12:
                raise InvalidInput("final fraction must equal solved share")


def _report_row(rep: RunReport, set_key, n, kappa, eps, seed):
    return {
        "method": rep.method, "set": str(set_key), "n": n,
        "kappa": float(kappa), "eps": float(eps), "seed": seed,
        "iters": rep.iterations, "nfe": rep.nfe, "ngrad": rep.ngrad,
        "final_gnorm": rep.final_gnorm, "status": rep.status,
        "time_ms": rep.wall_time * 1e3, "final_f": rep.final_f,
    }


def _trace_rows(rep: RunReport, row):
    out = []
    for t in rep.trace:
        out.append({
            "method": row["method"], "set": row["set"], "n": row["n"],
            "kappa": row["kappa"], "eps": row["eps"], "seed": row["seed"],
            "k": t.k, "branch": t.branch, "stepsize": t.stepsize,
            "gnorm": t.gnorm, "fval": t.fval, "bb1": t.bb1, "bb2": t.bb2,
            "tau": t.tau,
        })
    return out


def _unc_fn(name: str):
    for f in testfuns.builtin_suite():
        if f.name == name:
            return f
    raise InvalidSpec(f"unknown test function {name!r}")


def _run_cell(cell):
    """Execute one (method, problem, seed) cell; must stay picklable."""
    exp, method, set_key, n, kappa, eps, seed, tau1, gamma, trace = cell
    if exp == "verify3d":
        rep = verify_3d_termination(kappa, method, seed, keep_trace=trace)
        row = _report_row(rep, 0, 3, kappa, 0.0, seed)
    elif exp == "quadbench":
        p = quadprob.generate(set_key, n, kappa, PROBLEM_SEED)
        x0 = quadprob.starting_point(p, seed)
        kw = {"eps": eps, "keep_trace": trace}
        if tau1 is not None:
            kw["tau1"] = tau1
        if gamma is not None:
            kw["gamma"] = gamma
        if method == "bb":
            rep = solve_bb(p, x0, QuadSolverConfig(**kw))
        else:
            kw["use_new_step"] = method == "new"
            rep = solve_new(p, x0, QuadSolverConfig(**kw))
        row = _report_row(rep, set_key, n, kappa, eps, seed)
    else:
        f = _unc_fn(set_key)
        kw = {"eps_inf": eps, "keep_trace": trace,
              "use_new_step": method == "alg1"}
        if tau1 is not None:
            kw["tau1"] = tau1
        if gamma is not None:
            kw["gamma"] = gamma
        rep = solve(f, cfg=UncSolverConfig(**kw))
        row = _report_row(rep, f.name, f.dimension, 0.0, eps, seed)
    return row, _trace_rows(rep, row)


def _cells(spec: ExperimentSpec):
    out = []
    for method in spec.methods:
        if spec.experiment == "verify3d":
            for kappa in spec.kappas:
                for seed in range(spec.seeds):
                    out.append(("verify3d", method, 0, 3, kappa, 0.0,
                                seed, None, None, spec.trace))
        elif spec.experiment == "quadbench":
            for set_id in spec.sets:
                for n in spec.ns:
                    for kappa in spec.kappas:
                        for eps in spec.epss:
                            for seed in range(spec.seeds):
                                out.append(("quadbench", method, set_id, n,
                                            kappa, eps, seed, spec.tau1,
                                            spec.gamma, spec.trace))
        else:
            for f in testfuns.builtin_suite():
                for eps in spec.epss:
                    for seed in range(spec.seeds):
                        out.append(("uncbench", method, f.name,
                                    f.dimension, 0.0, eps, seed, spec.tau1,
                                    spec.gamma, spec.trace))
    return out


def _worker_count() -> int:
    raw = os.environ.get("QTGRAD_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidSpec(f"QTGRAD_WORKERS must be an integer, got {raw!r}")
    if n < 1:
        raise InvalidSpec("QTGRAD_WORKERS must be at least 1")
    return n


ROW_KEY = ("method", "set", "n", "kappa", "eps", "seed")


def _sort_key(row):
    return tuple(row[c] for c in ROW_KEY)


def _mean(rows, col):
    vals = [r[col] for r in rows]
    return sum(vals) / len(vals) if vals else math.nan


def aggregate_rows(rows):
    """Per-cell means over solved runs; every cell keeps runs/solved counts."""
    cells = {}
    for r in rows:
        cells.setdefault(_sort_key(r)[:5], []).append(r)
    out = []
    for key in sorted(cells):
        group = cells[key]
        ok = [r for r in group if r["status"] == STATUS_OK]
        agg = dict(zip(("method", "set", "n", "kappa", "eps"), key))
        agg["runs"] = len(group)
        agg["solved"] = len(ok)
        for col in ("iters", "nfe", "ngrad", "final_gnorm", "final_f",
                    "time_ms"):
            agg[col + "_mean"] = _mean(ok, col)
        out.append(agg)
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.9e}"
    return str(v)


def _write_csv(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])


def run_experiment(spec: ExperimentSpec):
    """Run every cell of the grid and write the run and aggregate CSVs.

    Returns the two paths.  Cell execution order never affects the
    output: rows are sorted before writing and each cell is a pure
    function of its parameters.
    """
    cells = _cells(spec)
    workers = _worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_cell, cells))
    else:
        results = [_run_cell(c) for c in cells]
    rows = [row for row, _ in results]
    traces = [t for _, ts in results for t in ts]
    if spec.zero_times:
        for r in rows:
            r["time_ms"] = 0.0
    rows.sort(key=_sort_key)
    runs_path = spec.out + "_runs.csv"
    agg_path = spec.out + "_agg.csv"
    _write_csv(runs_path, RAW_COLUMNS, rows)
    _write_csv(agg_path, AGG_COLUMNS, aggregate_rows(rows))
    if spec.trace:
        traces.sort(key=lambda t: (_sort_key(t), t["k"]))
        _write_csv(spec.out + "_trace.csv", TRACE_COLUMNS, traces)
    return runs_path, agg_path


def build_profile(rows, metric: str):
    """Dolan-More curves from raw run rows.

    ``metric`` is "iter" or "time".  For each problem the ratio is the
    method's cost over the best cost among methods that solved it;
    unsolved runs get an infinite ratio and never enter any count, but
    the problem stays in the denominator, so curves top out at each
    method's solved share.  Every method must cover exactly the same
    problems.
    """
    if metric not in ("iter", "time"):
        raise InvalidInput(f"metric must be 'iter' or 'time', got {metric!r}")
    col = "iters" if metric == "iter" else "time_ms"
    methods = sorted({r["method"] for r in rows})
    if not methods:
        raise InvalidInput("no rows to profile")
    probs = {}
    for r in rows:
        key = _sort_key(r)[1:]
        per = probs.setdefault(key, {})
        if r["method"] in per:
            raise InvalidInput(f"duplicate rows for problem {key}")
        per[r["method"]] = r
    ratios = {m: [] for m in methods}
    for key in sorted(probs):
        per = probs[key]
        if sorted(per) != methods:
            raise InvalidInput(f"problem {key} missing some methods")
        best = min((per[m][col] for m in methods
                    if per[m]["status"] == STATUS_OK), default=math.inf)
        for m in methods:
            r = per[m]
            if r["status"] != STATUS_OK:
                ratios[m].append(math.inf)
            elif r[col] == best:
                ratios[m].append(1.0)
            elif best == 0.0 or not math.isfinite(best):
                ratios[m].append(math.inf)
            else:
                ratios[m].append(r[col] / best)
    total = len(probs)
    points = sorted({x for rs in ratios.values() for x in rs
                     if math.isfinite(x)} | {1.0})
    curves = []
    for m in methods:
        rs = sorted(ratios[m])
        fracs = []
        for rho in points:
            cnt = 0
            for x in rs:
                if x > rho:
                    break
                cnt += 1
            fracs.append(cnt / total)
        curves.append(ProfileCurve(m, tuple(points), tuple(fracs),
                                   solved=sum(1 for x in rs
                                              if math.isfinite(x)),
                                   total=total))
    return curves


def _read_runs(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(RAW_COLUMNS[:-1]) - set(reader.fieldnames or ())
        if missing:
            raise InvalidInput(f"{path}: missing columns {sorted(missing)}")
        rows = []
        for raw in reader:
            row = dict(raw)
            for c in ("n", "seed", "iters", "nfe", "ngrad"):
                row[c] = int(float(row[c]))
            for c in ("kappa", "eps", "final_gnorm", "time_ms"):
                row[c] = float(row[c])
            val = row.get("final_f")
            row["final_f"] = float(val) if val not in (None, "") else math.nan
            rows.append(row)
    if not rows:
        raise InvalidInput(f"{path}: no data rows")
    return rows


def performance_profile(run_csv, metric: str, out_path=None):
    """Curves from a runs CSV; optionally written as (method, rho, fraction)."""
    curves = build_profile(_read_runs(run_csv), metric)
    if out_path is not None:
        flat = [{"method": c.method, "rho": rho, "fraction": frac}
                for c in curves for rho, frac in zip(c.rhos, c.fractions)]
        _write_csv(out_path, ("method", "rho", "fraction"), flat)
    return curves


def parse_config(path):
    """Read key=value lines; '#' starts a comment, blanks are skipped."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            if "=" not in body:
                raise InvalidSpec(f"{path}:{lineno}: expected key=value")
            key, val = body.split("=", 1)
            out[key.strip()] = val.strip()
    return out


_DEFAULTS = {
    "verify3d": {"methods": VERIFY_METHODS, "set": (0,), "n": (3,),
                 "kappa": (100.0,), "eps": (0.0,), "seeds": 10},
    "quadbench": {"methods": ("bb", "new"), "set": (4,), "n": (100,),
                  "kappa": (1e4,), "eps": (1e-9,), "seeds": 10},
    "uncbench": {"methods": UNC_METHODS, "set": (0,), "n": (0,),
                 "kappa": (0.0,), "eps": (1e-6,), "seeds": 1},
}


def _parse_list(val, conv):
    if isinstance(val, (tuple, list)):
        return tuple(conv(v) for v in val)
    try:
        return tuple(conv(v) for v in str(val).split(","))
    except ValueError:
        raise InvalidSpec(f"cannot parse list value {val!r}")


def _parse_bool(val):
    if isinstance(val, bool):
        return val
    low = str(val).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise InvalidSpec(f"cannot parse boolean value {val!r}")


def resolve_spec(verb: str, args) -> ExperimentSpec:
    """Combine defaults, preset, config file and flags into a spec."""
    merged = dict(_DEFAULTS[verb])
    merged.update({"tau1": None, "gamma": None, "out": "results",
                   "trace": False, "zero_times": False})
    fromfile = parse_config(args.config) if args.config else {}
    preset = fromfile.get("preset")
    if args.preset is not None:
        preset = args.preset
    if preset is not None:
        if preset not in PRESETS:
            raise InvalidSpec(f"unknown preset {preset!r} "
                              f"(choose from {', '.join(sorted(PRESETS))})")
        merged["tau1"], merged["gamma"] = PRESETS[preset]
    for key, val in fromfile.items():
        if key == "preset":
            continue
        if key == "experiment":
            # print-config output names the verb; accept it when it agrees
            if val != verb:
                raise InvalidSpec(
                    f"config file is for {val!r}, not {verb!r}")
            continue
        if key not in merged:
            raise InvalidSpec(f"unknown config key {key!r}")
        merged[key] = val
    for key in ("methods", "set", "n", "kappa", "eps", "seeds", "tau1",
                "gamma", "out", "trace", "zero_times"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return ExperimentSpec(
        experiment=verb,
        methods=_parse_list(merged["methods"], str),
        sets=_parse_list(merged["set"], int),
        ns=_parse_list(merged["n"], int),
        kappas=_parse_list(merged["kappa"], float),
        epss=_parse_list(merged["eps"], float),
        seeds=int(merged["seeds"]),
        tau1=None if merged["tau1"] is None else float(merged["tau1"]),
        gamma=None if merged["gamma"] is None else float(merged["gamma"]),
        out=str(merged["out"]),
        trace=_parse_bool(merged["trace"]),
        zero_times=_parse_bool(merged["zero_times"]),
    )


def print_config(spec: ExperimentSpec) -> None:
    """Emit the resolved spec as config-file syntax, one key per line."""
    print(f"experiment={spec.experiment}")
    print(f"methods={','.join(spec.methods)}")
    print(f"set={','.join(str(s) for s in spec.sets)}")
    print(f"n={','.join(str(n) for n in spec.ns)}")
    print(f"kappa={','.join(repr(k) for k in spec.kappas)}")
    print(f"eps={','.join(repr(e) for e in spec.epss)}")
    print(f"seeds={spec.seeds}")
    if spec.tau1 is not None:
        print(f"tau1={spec.tau1!r}")
    if spec.gamma is not None:
        print(f"gamma={spec.gamma!r}")
    print(f"out={spec.out}")
    print(f"trace={int(spec.trace)}")
    print(f"zero_times={int(spec.zero_times)}")


def _run_verb(verb, args) -> int:
    spec = resolve_spec(verb, args)
    if args.print_config:
        print_config(spec)
        return 0
    runs_path, agg_path = run_experiment(spec)
    print(f"wrote {runs_path} and {agg_path}")
    return 0


def _profile_verb(args) -> int:
    curves = performance_profile(args.runs_csv, args.metric, args.out)
    for c in curves:
        print(f"{c.method}: solved {c.solved}/{c.total}")
    print(f"wrote {args.out}")
    return 0


def _add_common(sub, grids=True):
    sub.add_argument("--methods", help="comma-separated method names")
    if grids:
        sub.add_argument("--set", help="comma-separated problem sets (1-5)")
        sub.add_argument("--n", help="comma-separated dimensions")
    sub.add_argument("--kappa", help="comma-separated condition numbers")
    sub.add_argument("--eps", help="comma-separated tolerances")
    sub.add_argument("--seeds", type=int, help="number of seeds (0..seeds-1)")
    sub.add_argument("--tau1", type=float, help="initial switching threshold")
    sub.add_argument("--gamma", type=float, help="threshold growth factor")
    sub.add_argument("--preset", help="named (tau1, gamma) preset")
    sub.add_argument("--out", help="output path prefix (default: results)")
    sub.add_argument("--trace", action="store_true", default=None,
                     help="also write per-iteration trace rows")
    sub.add_argument("--zero-times", dest="zero_times", action="store_true",
                     default=None,
                     help="write time_ms as 0 for reproducible files")
    sub.add_argument("--config", help="key=value config file")
    sub.add_argument("--print-config", action="store_true",
                     help="print the resolved configuration and exit")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qtgrad",
        description="Gradient-method benchmarks with quadratic-termination stepsizes.")
    subs = ap.add_subparsers(dest="verb", required=True)

    sv = subs.add_parser("verify3d",
                         help="8-step termination check on the 3-d problem")
    _add_common(sv, grids=False)
    sv.set_defaults(func=lambda a: _run_verb("verify3d", a))

    sq = subs.add_parser("quadbench", help="quadratic benchmark grid")
    _add_common(sq)
    sq.set_defaults(func=lambda a: _run_verb("quadbench", a))

    su = subs.add_parser("uncbench",
                         help="general test functions benchmark")
    _add_common(su, grids=False)
    su.set_defaults(func=lambda a: _run_verb("uncbench", a))

    sp = subs.add_parser("profile",
                         help="performance-profile curves from a runs CSV")
    sp.add_argument("runs_csv", help="runs CSV written by a bench verb")
    sp.add_argument("--metric", choices=("iter", "time"), default="iter")
    sp.add_argument("--out", default="profile.csv")
    sp.set_defaults(func=_profile_verb)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidSpec, InvalidInput) as exc:
        print(f"qtgrad: error: {exc}", file=sys.stderr)
        return 2
    except (QtgradError, OSError) as exc:
        print(f"qtgrad: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
