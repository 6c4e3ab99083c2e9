"""Command-line front end: reproducible, scriptable subcommands emitting CSV/JSON.

Every stochastic subcommand takes an explicit seed (flag, else the
SEQQUANT_SEED environment variable, else 0) and echoes it in the output
metadata.  Floats are serialized with their shortest round-trip
representation; infinite bounds appear as the literals "-inf"/"inf".

Exit codes: 0 success, 2 usage error, 3 data/ingestion error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bandit, boundaries, confseq, seqtest
from .boundaries import DoubleStitchConfig, StitchConfig
from .empdist import _Sentinel
from .errors import (
    ConfigurationError,
    DomainError,
    NumericalError,
    PairingError,
    QueryError,
    StateError,
    TuningError,
)

SEED_ENV = "SEQQUANT_SEED"

BOUNDS_METHODS = (
    "stitched",
    "beta_binomial",
    "normal_mixture",
    "lil_uniform",
    "double_stitch",
    "dkw_fixed",
    "dr1967",
    "dr1968",
    "szorenyi",
    "clt_pointwise",
    "hoeffding_kl",
)


class UsageError(Exception):
    pass


class IngestError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, _Sentinel):
        return repr(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _json_cell(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, _Sentinel):
        return repr(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x) or math.isnan(x):
            return _fmt_cell(x)
        return x
    return x


class Emitter:
    """Writes metadata, a header, and rows in CSV or JSON form."""

    def __init__(self, out, fmt: str, columns: list[str], meta: dict):
        if fmt not in ("csv", "json"):
            raise UsageError(f"unknown output format {fmt!r}")
        self.out = out
        self.fmt = fmt
        self.columns = columns
        self.meta = meta
        self._rows = []
        if fmt == "csv":
            for key, val in meta.items():
                out.write(f"# {key}={_fmt_cell(val)}\n")
            out.write(",".join(columns) + "\n")

    def row(self, *cells) -> None:
        if self.fmt == "csv":
            self.out.write(",".join(_fmt_cell(c) for c in cells) + "\n")
        else:
            self._rows.append([_json_cell(c) for c in cells])

    def close(self) -> None:
        if self.fmt == "json":
            payload = {
                "meta": {k: _json_cell(v) for k, v in self.meta.items()},
                "columns": self.columns,
                "rows": self._rows,
            }
            json.dump(payload, self.out, indent=None, separators=(",", ":"))
            self.out.write("\n")
        self.out.flush()


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _parse_float_list(text: str, what: str) -> list[float]:
    if text.strip() == "":
        return []
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"could not parse {what} list {text!r}: {exc}") from None


def _parse_int_list(text: str, what: str) -> list[int]:
    return [int(round(v)) for v in _parse_float_list(text, what)]


def _input_lines(path):
    if path in (None, "-"):
        return sys.stdin
    return open(path, "r", encoding="utf-8")


def _numeric_stream(handle):
    """Yield (line_number, value); blank lines are skipped."""
    for i, line in enumerate(handle, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            yield i, float(text)
        except ValueError:
            raise IngestError(f"line {i}: expected a number, got {text!r}") from None


def _labeled_stream(handle):
    """Yield (line_number, label, value) from 'label,value' lines."""
    for i, line in enumerate(handle, start=1):
        text = line.strip()
        if not text:
            continue
        parts = text.split(",")
        if len(parts) != 2:
            raise IngestError(f"line {i}: expected 'label,value', got {text!r}")
        try:
            yield i, parts[0].strip(), float(parts[1])
        except ValueError:
            raise IngestError(f"line {i}: expected a number, got {parts[1]!r}") from None


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _reference_cdf(spec: str):
    """Parse 'uniform:a,b' / 'normal:mu,sigma' / 'cauchy:loc,scale' into a CDF."""
    try:
        name, _, argtext = spec.partition(":")
        params = [float(tok) for tok in argtext.split(",")] if argtext else []
    except ValueError:
        raise UsageError(f"bad reference distribution {spec!r}") from None
    if name == "uniform":
        a, b = params if params else (0.0, 1.0)
        if b <= a:
            raise UsageError("uniform reference needs b > a")
        return lambda x: min(1.0, max(0.0, (x - a) / (b - a)))
    if name == "normal":
        mu, sigma = params if params else (0.0, 1.0)
        if sigma <= 0:
            raise UsageError("normal reference needs sigma > 0")
        from scipy.special import ndtr

        return lambda x: float(ndtr((x - mu) / sigma))
    if name == "cauchy":
        loc, scale = params if params else (0.0, 1.0)
        if scale <= 0:
            raise UsageError("cauchy reference needs scale > 0")
        return lambda x: 0.5 + math.atan((x - loc) / scale) / math.pi
    raise UsageError(f"unknown reference distribution {name!r}")


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _radius_for(method: str, t: int, p: float, alpha: float, tune_m: float,
                r_cache: dict) -> float:
    if method == "stitched":
        cfg = StitchConfig(eta=2.04, s_exp=1.4, m_start=tune_m, alpha=alpha)
        return boundaries.stitched_radius(t, p, cfg)
    if method == "beta_binomial":
        if p not in r_cache:
            r_cache[p] = boundaries.tune_r(tune_m, p, alpha)
        return boundaries.beta_binomial_radius(t, p, r_cache[p], alpha)
    if method == "normal_mixture":
        if "normal" not in r_cache:
            # intrinsic-time m/8 convention: reproduces r = 0.504 at m=32, alpha=0.05
            r_cache["normal"] = tune_m / 8.0 / boundaries.tuning_denominator(alpha)
        return boundaries.normal_mixture_radius(t, r_cache["normal"], alpha)
    if method == "lil_uniform":
        c = boundaries.lil_C(0.85, alpha)
        return boundaries.lil_radius(t, 0.85, c, tune_m)
    if method == "double_stitch":
        cfg = DoubleStitchConfig.default_preset(alpha=alpha, m_start=tune_m)
        return boundaries.double_stitch_radius(t, p, cfg)
    return boundaries.baseline_radius(method, t, p, alpha)


def cmd_bounds(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in BOUNDS_METHODS:
            raise UsageError(f"unknown method {m!r}; valid methods: {', '.join(BOUNDS_METHODS)}")
    p_list = _parse_float_list(args.p, "p") or [0.5]
    t_list = _parse_int_list(args.t, "t")
    meta = {"alpha": args.alpha, "tune_m": args.tune_m}
    r_cache: dict = {}
    for p in p_list:
        if "beta_binomial" in methods:
            meta[f"r[p={_fmt_cell(p)}]"] = boundaries.tune_r(args.tune_m, p, args.alpha)
    out, close = _open_out(args.out)
    emitter = Emitter(out, args.format, ["t", "p", "method", "radius", "radius_times_sqrt_t"], meta)
    try:
        for method in methods:
            for p in p_list:
                for t in t_list:
                    rad = _radius_for(method, t, p, args.alpha, args.tune_m, r_cache)
                    emitter.row(t, p, method, rad, rad * math.sqrt(t))
        emitter.close()
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# track
# ---------------------------------------------------------------------------


def _track_method(args):
    if args.method == "stitched":
        cfg = StitchConfig(eta=args.eta, s_exp=args.s_exp, m_start=args.m, alpha=args.alpha)
        return confseq.StitchedMethod(cfg)
    if args.method == "stitched_simple":
        return confseq.StitchedSimpleMethod(alpha=args.alpha)
    if args.method == "beta_binomial":
        r = args.r if args.r is not None else boundaries.tune_r(args.tune_m, args.p, args.alpha)
        return confseq.BetaBinomialMethod(r=r, alpha=args.alpha)
    if args.method == "normal_mixture":
        if args.r is not None:
            r = args.r
        else:
            r = args.tune_m / 8.0 / boundaries.tuning_denominator(args.alpha)
        return confseq.NormalMixtureMethod(r=r, alpha=args.alpha)
    raise UsageError(
        "unknown method; valid: stitched, stitched_simple, beta_binomial, normal_mixture"
    )


def cmd_track(args) -> int:
    method = _track_method(args)
    cs = confseq.FixedQuantileCS(args.p, method, intersect=args.intersect)
    columns = ["t", "x", "lower", "upper", "point_estimate"]
    if args.intersect:
        columns.append("empty")
    meta = {"p": args.p, "method": args.method, "alpha": args.alpha}
    if isinstance(method, confseq.BetaBinomialMethod):
        meta["r"] = method.r
    out, close = _open_out(args.out)
    emitter = Emitter(out, args.format, columns, meta)
    handle = _input_lines(args.input)
    try:
        for _, x in _numeric_stream(handle):
            lo, hi = cs.update(x)
            cells = [len(cs.data), x, lo, hi, cs.point_estimate()]
            if args.intersect:
                ilo, ihi, empty = cs.intersected_bounds()
                cells = [len(cs.data), x, ilo, ihi, cs.point_estimate(), empty]
            emitter.row(*cells)
        emitter.close()
    finally:
        if handle is not sys.stdin:
            handle.close()
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# band
# ---------------------------------------------------------------------------


def cmd_band(args) -> int:
    checkpoints = sorted(set(_parse_int_list(args.checkpoints, "checkpoints")))
    band = confseq.CdfBand(a_mult=args.a_mult, alpha=args.alpha, m_start=args.m)
    meta = {"alpha": args.alpha, "A": args.a_mult, "m": args.m,
            "C": boundaries.lil_C(args.a_mult, args.alpha)}
    out, close = _open_out(args.out)
    emitter = Emitter(out, args.format, ["t", "x", "ecdf", "lo", "hi"], meta)
    handle = _input_lines(args.input)
    try:
        remaining = list(checkpoints)
        for _, x in _numeric_stream(handle):
            band.update(x)
            t = len(band.data)
            if remaining and t == remaining[0]:
                remaining.pop(0)
                for v, f, lo, hi in band.band():
                    emitter.row(t, v, f, lo, hi)
        emitter.close()
    finally:
        if handle is not sys.stdin:
            handle.close()
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# abtest
# ---------------------------------------------------------------------------


def cmd_abtest(args) -> int:
    if args.simulate:
        return _abtest_simulate(args)
    r = args.r if args.r is not None else boundaries.tune_r(args.tune_m, args.p, args.alpha)
    meta = {"p": args.p, "r": r, "delta_star": args.delta_star, "mode": args.mode,
            "alpha": args.alpha}
    out, close = _open_out(args.out)
    emitter = Emitter(out, args.format, ["t", "stat", "pvalue", "reject"], meta)
    handle = _input_lines(args.input)
    labels: list[str] = []
    state = seqtest.AbTestState(args.p, r, args.delta_star, args.alpha)
    multi: list = []
    running_min = 1.0
    try:
        for i, label, value in _labeled_stream(handle):
            if label not in labels:
                if args.mode == "global" or len(labels) < 2:
                    labels.append(label)
                    if args.mode == "global" and len(labels) > 1:
                        from .empdist import OrderedMultiset

                        multi.append(OrderedMultiset())
                else:
                    raise IngestError(f"line {i}: unknown label {label!r} (have {labels})")
            idx = labels.index(label)
            if args.mode == "global":
                if idx == 0:
                    state.arm1.insert(value)
                else:
                    multi[idx - 1].insert(value)
            else:
                state.add(idx + 1, value)
            t = len(state.arm1) + (len(state.arm2) if args.mode != "global" else
                                   sum(len(m) for m in multi))
            if args.mode == "global":
                if len(state.arm1) == 0 or not multi or any(len(m) == 0 for m in multi):
                    continue
                result = seqtest.global_null_result(state.arm1, multi, args.p, r, args.alpha)
            else:
                if len(state.arm1) == 0 or len(state.arm2) == 0:
                    continue
                result = state.two_sided() if args.mode == "two_sided" else state.one_sided()
            running_min = min(running_min, result.pvalue)
            pv = running_min if args.running_min else result.pvalue
            emitter.row(t, result.stat, pv, result.reject)
        emitter.close()
    finally:
        if handle is not sys.stdin:
            handle.close()
        if close:
            out.close()
    return 0


def _abtest_simulate(args) -> int:
    seed = _resolve_seed(args)
    row = seqtest.ab_vs_naive_benchmark(
        scenario=args.scenario, pi=args.p, alpha=args.alpha, runs=args.runs,
        seed=seed, eps=args.eps, max_pairs=args.max_pairs,
    )
    meta = {"scenario": args.scenario, "pi": args.p, "eps": args.eps,
            "alpha": args.alpha, "runs": args.runs, "seed": seed}
    out, close = _open_out(args.out)
    emitter = Emitter(
        out, args.format,
        ["scenario", "pi", "runs", "mean_t_test", "mean_t_naive", "ratio",
         "capped_test", "capped_naive"],
        meta,
    )
    emitter.row(row.scenario, row.pi, row.runs, row.mean_t_test, row.mean_t_naive,
                row.ratio, row.capped_test, row.capped_naive)
    emitter.close()
    if close:
        out.close()
    return 0


# ---------------------------------------------------------------------------
# ks
# ---------------------------------------------------------------------------


def cmd_ks(args) -> int:
    f0 = _reference_cdf(args.ref) if args.mode == "one_sample" else None
    state = seqtest.KsTestState(args.mode, f0=f0, a_mult=args.a_mult, alpha=args.alpha,
                                m_start=args.m)
    meta = {"mode": args.mode, "alpha": args.alpha, "A": args.a_mult, "m": args.m}
    if args.mode == "one_sample":
        meta["ref"] = args.ref
    out, close = _open_out(args.out)
    emitter = Emitter(out, args.format, ["t", "stat", "threshold", "reject"], meta)
    handle = _input_lines(args.input)
    latched = False
    labels: list[str] = []
    try:
        if args.mode == "one_sample":
            for _, x in _numeric_stream(handle):
                state.add(x)
                res = state.evaluate()
                latched = latched or res.reject
                emitter.row(res.t, res.stat, res.threshold,
                            latched if args.latch else res.reject)
        else:
            for i, label, value in _labeled_stream(handle):
                if label not in labels:
                    if len(labels) >= 2:
                        raise IngestError(f"line {i}: unknown label {label!r} (have {labels})")
                    labels.append(label)
                state.add(value, sample=labels.index(label) + 1)
                if len(state.sample1) == len(state.sample2) and len(state.sample1) > 0:
                    res = state.evaluate()
                    latched = latched or res.reject
                    emitter.row(res.t, res.stat, res.threshold,
                                latched if args.latch else res.reject)
            if len(state.sample1) != len(state.sample2):
                raise PairingError(
                    f"stream ended with unequal counts: {len(state.sample1)} vs "
                    f"{len(state.sample2)}"
                )
        emitter.close()
    finally:
        if handle is not sys.stdin:
            handle.close()
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# bai
# ---------------------------------------------------------------------------


def cmd_bai(args) -> int:
    seed = _resolve_seed(args)
    pi_list = _parse_float_list(args.pi, "pi")
    kinds = [k.strip() for k in args.cs_kinds.split(",") if k.strip()]
    for k in kinds:
        if k not in bandit.CS_KINDS:
            raise UsageError(f"unknown cs kind {k!r}; valid: {', '.join(bandit.CS_KINDS)}")
    if args.scenario not in bandit.SCENARIOS:
        raise UsageError(f"unknown scenario {args.scenario!r}; valid: "
                         f"{', '.join(bandit.SCENARIOS)}")
    rows = bandit.bai_benchmark(
        scenario=args.scenario, pi_list=pi_list, eps=args.eps, delta_err=args.delta,
        cs_kinds=kinds, runs=args.runs, seed=seed, k_arms=args.k_arms,
        max_rounds=args.max_rounds,
    )
    meta = {"scenario": args.scenario, "eps": args.eps, "delta": args.delta,
            "runs": args.runs, "K": args.k_arms, "seed": seed}
    out, close = _open_out(args.out)
    emitter = Emitter(
        out, args.format,
        ["scenario", "pi", "cs_kind", "runs", "mean_T", "median_T", "correct_rate", "capped"],
        meta,
    )
    for row in rows:
        emitter.row(row.scenario, row.pi, row.cs_kind, row.runs, row.mean_samples,
                    row.median_samples, row.correct_rate, row.capped_runs)
    emitter.close()
    if close:
        out.close()
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sub) -> None:
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--format", default="csv", choices=("csv", "json"))
    sub.add_argument("--config", default=None, help="flat key=value defaults file")
    sub.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default: ${SEED_ENV} or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqquant",
        description="Anytime-valid quantile confidence sequences, sequential tests, "
                    "and quantile best-arm identification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="tabulate confidence radii over a time grid")
    b.add_argument("--methods", required=True, help="comma-separated method names")
    b.add_argument("--p", default="0.5", help="comma-separated quantile levels")
    b.add_argument("--t", default="", help="comma-separated times")
    b.add_argument("--alpha", type=float, default=0.05)
    b.add_argument("--tune-m", dest="tune_m", type=float, default=32.0,
                   help="tuning time: sets r for beta_binomial and m for the others")
    _add_common(b)
    b.set_defaults(func=cmd_bounds)

    tr = sub.add_parser("track", help="stream a fixed-quantile confidence sequence")
    tr.add_argument("input", nargs="?", default="-", help="numeric lines, or - for stdin")
    tr.add_argument("--p", type=float, required=True)
    tr.add_argument("--method", default="stitched",
                    choices=("stitched", "stitched_simple", "beta_binomial", "normal_mixture"))
    tr.add_argument("--alpha", type=float, default=0.05)
    tr.add_argument("--eta", type=float, default=2.04)
    tr.add_argument("--s-exp", dest="s_exp", type=float, default=1.4)
    tr.add_argument("--m", type=float, default=1.0)
    tr.add_argument("--r", type=float, default=None)
    tr.add_argument("--tune-m", dest="tune_m", type=float, default=32.0)
    tr.add_argument("--intersect", action="store_true", help="report the running intersection")
    _add_common(tr)
    tr.set_defaults(func=cmd_track)

    bd = sub.add_parser("band", help="CDF confidence band at checkpoints")
    bd.add_argument("input", nargs="?", default="-")
    bd.add_argument("--alpha", type=float, default=0.05)
    bd.add_argument("--A", dest="a_mult", type=float, default=0.85)
    bd.add_argument("--m", type=float, default=1.0)
    bd.add_argument("--checkpoints", required=True, help="comma-separated times")
    _add_common(bd)
    bd.set_defaults(func=cmd_band)

    ab = sub.add_parser("abtest", help="sequential two-sample quantile test")
    ab.add_argument("input", nargs="?", default="-", help="label,value lines")
    ab.add_argument("--p", type=float, default=0.5)
    ab.add_argument("--r", type=float, default=None)
    ab.add_argument("--tune-m", dest="tune_m", type=float, default=32.0)
    ab.add_argument("--delta-star", dest="delta_star", type=float, default=0.0)
    ab.add_argument("--mode", default="two_sided", choices=("two_sided", "one_sided", "global"))
    ab.add_argument("--alpha", type=float, default=0.05)
    ab.add_argument("--running-min", dest="running_min", action="store_true")
    ab.add_argument("--simulate", action="store_true",
                    help="run the test-vs-naive stopping comparison instead of ingesting data")
    ab.add_argument("--scenario", default="uniform_shift")
    ab.add_argument("--eps", type=float, default=0.025)
    ab.add_argument("--runs", type=int, default=32)
    ab.add_argument("--max-pairs", dest="max_pairs", type=int, default=200_000)
    _add_common(ab)
    ab.set_defaults(func=cmd_abtest)

    ks = sub.add_parser("ks", help="sequential Kolmogorov-Smirnov / dominance test")
    ks.add_argument("input", nargs="?", default="-")
    ks.add_argument("--mode", default="two_sample",
                    choices=("one_sample", "two_sample", "dominance"))
    ks.add_argument("--ref", default="uniform:0,1",
                    help="one_sample reference: uniform:a,b | normal:mu,sigma | cauchy:loc,scale")
    ks.add_argument("--A", dest="a_mult", type=float, default=0.85)
    ks.add_argument("--alpha", type=float, default=0.05)
    ks.add_argument("--m", type=float, default=1.0)
    ks.add_argument("--latch", action="store_true", help="keep reject true once it fires")
    _add_common(ks)
    ks.set_defaults(func=cmd_ks)

    ba = sub.add_parser("bai", help="quantile best-arm identification benchmark")
    ba.add_argument("--scenario", default="uniform_shift")
    ba.add_argument("--pi", default="0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95")
    ba.add_argument("--eps", type=float, default=0.025)
    ba.add_argument("--delta", type=float, default=0.05)
    ba.add_argument("--cs-kinds", dest="cs_kinds", default="beta_binomial_one_sided")
    ba.add_argument("--runs", type=int, default=64)
    ba.add_argument("--k-arms", dest="k_arms", type=int, default=10)
    ba.add_argument("--max-rounds", dest="max_rounds", type=int, default=10 ** 6)
    _add_common(ba)
    ba.set_defaults(func=cmd_bai)

    return parser


def _apply_config(args, argv: list[str]) -> None:
    """Apply key=value defaults from --config for flags absent from argv."""
    if not args.config:
        return
    present = set()
    for tok in argv:
        if tok.startswith("--"):
            present.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    with open(args.config, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise UsageError(f"{args.config}:{i}: expected key=value, got {text!r}")
            key, _, val = text.partition("=")
            key = key.strip().replace("-", "_")
            val = val.strip()
            if key in present or not hasattr(args, key):
                continue
            current = getattr(args, key)
            if isinstance(current, bool):
                setattr(args, key, val.lower() in ("1", "true", "yes"))
            elif isinstance(current, int) and not isinstance(current, bool):
                setattr(args, key, int(val))
            elif isinstance(current, float):
                setattr(args, key, float(val))
            else:
                setattr(args, key, val)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, TuningError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (IngestError, PairingError, QueryError, StateError, DomainError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
