"""Command-line interface: every command emits one table as CSV or JSON.

Exit codes: 0 success, 2 usage error, 3 numeric regime violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .asymptotics import (
    RegimeError,
    TailVariant,
    bootstrap,
    coeff_asymptotic_bounded,
    coeff_asymptotic_unbounded,
    mean_height_sum,
    mellin_direct_sum,
    mellin_main_term,
    mellin_params,
)
from .height_stats import EXACT_MAX_N, height_pmf, resolve_mode
from .moran_gf import ModelParams, binet_coeff, bounded_gf, unbounded_gf
from .oracle import SIM_CHUNK_SIZE, WalkModel, simulate, standard_height_pmf
from .rational_gf import gf_coeff

FORMAT_VERSION = 1

EXIT_USAGE = 2
EXIT_REGIME = 3


@dataclass
class OutputRecord:
    command: str
    parameters: dict[str, Any]
    columns: list[str]
    rows: list[dict[str, Any]]
    summary: dict[str, Any] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION


# ---------------------------------------------------------------- encoding

_FRACTION_RE = re.compile(r"^-?\d+(/\d+)?$")
_FLOAT_RE = re.compile(r"^-?(\d+\.\d*(e[-+]?\d+)?|\d+e[-+]?\d+|inf|nan)$")


def encode_value(v) -> str:
    """Text form of one cell: ``a/b`` for exact values, shortest repr for floats."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def decode_value(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if _FRACTION_RE.match(text):
        return Fraction(text)
    if _FLOAT_RE.match(text):
        return float(text)
    return text


def _json_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _from_json(v):
    return decode_value(v) if isinstance(v, str) else v


def dumps(record: OutputRecord, fmt: str = "csv") -> str:
    if fmt == "json":
        doc = {
            "format_version": record.format_version,
            "command": record.command,
            "parameters": {k: _json_value(v) for k, v in record.parameters.items()},
            "summary": {k: _json_value(v) for k, v in record.summary.items()},
            "columns": record.columns,
            "rows": [{c: _json_value(r.get(c)) for c in record.columns} for r in record.rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write(f"# format_version={record.format_version}\n")
    buf.write(f"# command={record.command}\n")
    for k, v in record.parameters.items():
        buf.write(f"# param.{k}={encode_value(v)}\n")
    for k, v in record.summary.items():
        buf.write(f"# summary.{k}={encode_value(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(record.columns)
    for r in record.rows:
        w.writerow([encode_value(r.get(c)) for c in record.columns])
    return buf.getvalue()


def loads(text: str, fmt: str = "csv") -> OutputRecord:
    """Inverse of :func:`dumps`."""
    if fmt == "json":
        doc = json.loads(text)
        return OutputRecord(
            doc["command"],
            {k: _from_json(v) for k, v in doc["parameters"].items()},
            list(doc["columns"]),
            [{c: _from_json(r[c]) for c in doc["columns"]} for r in doc["rows"]],
            {k: _from_json(v) for k, v in doc["summary"].items()},
            doc["format_version"],
        )
    header, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            header[k] = v
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [{c: decode_value(x) for c, x in zip(columns, r)} for r in reader]
    params = {k[6:]: decode_value(v) for k, v in header.items() if k.startswith("param.")}
    summary = {k[8:]: decode_value(v) for k, v in header.items() if k.startswith("summary.")}
    return OutputRecord(header["command"], params, columns, rows, summary, int(header["format_version"]))


# ---------------------------------------------------------------- commands


def cmd_dist(params: ModelParams, n: int, mode: str = "auto") -> OutputRecord:
    dist = height_pmf(params, n, resolve_mode(mode, n))
    rows = [{"h": h, "pmf": x, "cdf": c} for h, (x, c) in enumerate(zip(dist.pmf, dist.cdf()))]
    return OutputRecord("dist", {"p": params.p, "n": n, "mode": mode}, ["h", "pmf", "cdf"], rows)


def cmd_moments(params: ModelParams, ns: list[int], mode: str = "auto") -> OutputRecord:
    rows = []
    for n in ns:
        d = height_pmf(params, n, resolve_mode(mode, n))
        m, v = d.mean(), d.variance()
        rows.append({"n": n, "mean": m, "mean_float": float(m), "variance": v, "variance_float": float(v)})
    cols = ["n", "mean", "mean_float", "variance", "variance_float"]
    return OutputRecord("moments", {"p": params.p, "n": _join(ns), "mode": mode}, cols, rows)


def cmd_pgf(params: ModelParams, n: int, us: list[Fraction], mode: str = "auto") -> OutputRecord:
    dist = height_pmf(params, n, resolve_mode(mode, n))
    rows = []
    for u in us:
        val = dist.pgf(u)
        rows.append({"u": u, "pgf": val, "pgf_float": float(val)})
    params_out = {"p": params.p, "n": n, "u": _join(us), "mode": mode}
    return OutputRecord("pgf", params_out, ["u", "pgf", "pgf_float"], rows)


def cmd_coeff(params: ModelParams, ns: list[int], Hs: list[int] | None) -> OutputRecord:
    cols = ["n", "H", "bounded", "bounded_float", "bounded_asymptotic",
            "unbounded", "unbounded_float", "binet", "unbounded_asymptotic"]
    rows = []
    for n in ns:
        base = {
            "n": n,
            "unbounded": (u := gf_coeff(unbounded_gf(params), n)),
            "unbounded_float": float(u),
            "binet": binet_coeff(params, n),
            "unbounded_asymptotic": coeff_asymptotic_unbounded(params, n),
        }
        for H in Hs or [None]:
            row = dict(base, H=H)
            if H is not None:
                b = gf_coeff(bounded_gf(params, H), n)
                row.update(bounded=b, bounded_float=float(b),
                           bounded_asymptotic=coeff_asymptotic_bounded(params, n, H))
            rows.append(row)
    params_out = {"p": params.p, "n": _join(ns), "H": _join(Hs) if Hs else None}
    return OutputRecord("coeff", params_out, cols, rows)


def cmd_roots(params: ModelParams, Hs: list[int]) -> OutputRecord:
    cols = ["H", "epsilon_first", "epsilon_refined", "numeric_root",
            "first_error", "refined_error", "residual"]
    rows = []
    for H in Hs:
        b = bootstrap(params, H)
        rows.append({
            "H": H, "epsilon_first": b.epsilon_first, "epsilon_refined": b.epsilon_refined,
            "numeric_root": b.numeric_root, "first_error": b.first_error,
            "refined_error": b.refined_error, "residual": b.residual,
        })
    return OutputRecord("roots", {"p": params.p, "H": _join(Hs)}, cols, rows)


# below this N the Mellin main term is not a meaningful approximation
ASYMP_MIN_N_PARAM = 10.0


def cmd_asymp(params: ModelParams, n: int, variant=TailVariant.PAPER, exact_max_n: int = EXACT_MAX_N) -> OutputRecord:
    variant = TailVariant.parse(variant)
    mode = resolve_mode("auto", n, exact_max_n)
    mean = height_pmf(params, n, mode).mean()
    mp = mellin_params(params, n, variant)
    s = mean_height_sum(params, n, variant)
    main = mellin_main_term(mp)
    direct = mellin_direct_sum(mp)
    row = {
        "n": n, "N": mp.N, "omega": mp.omega,
        "mean_exact": mean if mode == "exact" else None,
        "mean_float": float(mean),
        "mean_height_sum": s, "mellin_main_term": main, "mellin_direct_sum": direct,
        "sum_minus_main": s - main, "direct_minus_main": direct - main,
        "mean_minus_main": float(mean) - main,
        "regime": "asymptotic" if mp.N >= ASYMP_MIN_N_PARAM else "out-of-regime",
    }
    params_out = {"p": params.p, "n": n, "variant": variant.value, "exact_max_n": exact_max_n}
    return OutputRecord("asymp", params_out, list(row), [row])


def cmd_simulate(params: ModelParams, n: int, trials: int, seed: int, model, method: str = "conditioned",
                 chunk_size: int = SIM_CHUNK_SIZE, max_attempts: int = 10**8) -> OutputRecord:
    model = WalkModel.parse(model)
    res = simulate(params, n, trials, seed, model, method, chunk_size, max_attempts)
    if model is WalkModel.RESTRICTED:
        exact = height_pmf(params, n, "float").cdf()
    else:
        exact = standard_height_pmf(params, n, "float").cdf()
    emp = res.empirical_cdf()
    rows = [
        {"h": h, "count": c, "frequency": c / trials, "empirical_cdf": float(emp[h]), "exact_cdf": float(exact[h])}
        for h, c in enumerate(res.histogram)
    ]
    params_out = {"p": params.p, "n": n, "trials": trials, "seed": seed, "model": model.value,
                  "method": res.method, "chunk_size": chunk_size, "max_attempts": max_attempts}
    summary = {"mean": res.mean, "variance": res.variance, "stderr": res.stderr,
               "attempts": res.attempts, "rejections": res.rejections,
               "acceptance_rate": res.acceptance_rate}
    cols = ["h", "count", "frequency", "empirical_cdf", "exact_cdf"]
    return OutputRecord("simulate", params_out, cols, rows, summary)


def cmd_compare(params: ModelParams, ns: list[int], trials: int, seed: int, variant=TailVariant.PAPER,
                mode: str = "auto") -> OutputRecord:
    variant = TailVariant.parse(variant)
    rows = []
    for n in ns:
        m = resolve_mode(mode, n)
        row = {"n": n}
        row["exact_mean_restricted"] = float(height_pmf(params, n, m).mean())
        row["exact_mean_standard"] = float(standard_height_pmf(params, n, m).mean())
        row["mellin_main_term"] = mellin_main_term(mellin_params(params, n, variant))
        row["mean_height_sum"] = mean_height_sum(params, n, variant)
        for model in WalkModel:
            res = simulate(params, n, trials, seed, model)
            row[f"sim_mean_{model.value}"] = res.mean
            row[f"sim_stderr_{model.value}"] = res.stderr
        rows.append(row)
    cols = ["n", "exact_mean_restricted", "sim_mean_restricted", "sim_stderr_restricted",
            "exact_mean_standard", "sim_mean_standard", "sim_stderr_standard",
            "mellin_main_term", "mean_height_sum"]
    params_out = {"p": params.p, "n": _join(ns), "trials": trials, "seed": seed,
                  "variant": variant.value, "mode": mode}
    return OutputRecord("compare", params_out, cols, rows)


# ---------------------------------------------------------------- argparse


def _join(xs) -> str:
    return ",".join(str(x) for x in xs)


def _p_arg(text: str) -> ModelParams:
    try:
        return ModelParams.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"p must be a fraction or decimal in (0,1): {exc}")


def _int_list(text: str, lo: int = 0) -> list[int]:
    try:
        out = []
        for part in text.split(","):
            if ":" in part:
                a, b = part.split(":")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, comma list or a:b range, got {text!r}")
    if not out or min(out) < lo:
        raise argparse.ArgumentTypeError(f"values must be >= {lo}, got {text!r}")
    return out


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a single integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected fractions or decimals, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moranwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, n_kind="single"):
        sp.add_argument("--p", type=_p_arg, required=True, help="up-step probability, e.g. 1/2 or 0.3")
        if n_kind == "single":
            sp.add_argument("--n", type=_positive_int, required=True, help="walk length")
        elif n_kind == "list":
            sp.add_argument("--n", type=lambda s: _int_list(s, 1), required=True, help="walk length(s): 8 or 8,16 or 4:9")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--output", "-o", default=None, help="write here instead of stdout")

    sp = sub.add_parser("dist", help="exact height distribution")
    common(sp)
    sp.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")

    sp = sub.add_parser("moments", help="mean and variance of the height")
    common(sp, "list")
    sp.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")

    sp = sub.add_parser("pgf", help="evaluate the height PGF")
    common(sp)
    sp.add_argument("--u", type=_fraction_list, required=True, help="evaluation point(s)")
    sp.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")

    sp = sub.add_parser("coeff", help="GF coefficients: exact, Binet, asymptotic")
    common(sp, "list")
    sp.add_argument("--H", type=_int_list, default=None, help="height bound(s) for the bounded GF")

    sp = sub.add_parser("roots", help="bootstrap estimates of the dominant pole")
    common(sp, None)
    sp.add_argument("--H", type=_int_list, default=_int_list("5:40"), help="height bounds (default 5:40)")

    sp = sub.add_parser("asymp", help="exact mean against the asymptotic chain")
    common(sp)
    sp.add_argument("--variant", choices=["paper", "corrected"], default="paper")
    sp.add_argument("--exact-max-n", type=int, default=EXACT_MAX_N)

    sp = sub.add_parser("simulate", help="seeded Monte Carlo height histogram")
    common(sp)
    sp.add_argument("--trials", type=_positive_int, default=100_000)
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--model", choices=["restricted", "standard"], default="restricted")
    sp.add_argument("--method", choices=["conditioned", "rejection"], default="conditioned")
    sp.add_argument("--chunk-size", type=_positive_int, default=SIM_CHUNK_SIZE)
    sp.add_argument("--max-attempts", type=_positive_int, default=10**8, help="rejection budget")

    sp = sub.add_parser("compare", help="exact vs asymptotic vs simulated mean")
    common(sp, "list")
    sp.add_argument("--trials", type=_positive_int, default=100_000)
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--variant", choices=["paper", "corrected"], default="paper")
    sp.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")
    return parser


def run(args: argparse.Namespace) -> OutputRecord:
    p = args.p
    if args.command == "dist":
        return cmd_dist(p, args.n, args.mode)
    if args.command == "moments":
        return cmd_moments(p, args.n, args.mode)
    if args.command == "pgf":
        return cmd_pgf(p, args.n, args.u, args.mode)
    if args.command == "coeff":
        return cmd_coeff(p, args.n, args.H)
    if args.command == "roots":
        return cmd_roots(p, args.H)
    if args.command == "asymp":
        return cmd_asymp(p, args.n, args.variant, args.exact_max_n)
    if args.command == "simulate":
        return cmd_simulate(p, args.n, args.trials, args.seed, args.model, args.method, args.chunk_size,
                            args.max_attempts)
    if args.command == "compare":
        return cmd_compare(p, args.n, args.trials, args.seed, args.variant, args.mode)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "asymp" and args.n < 2:
        parser.error("argument --n: asymp needs n >= 2")
    try:
        record = run(args)
    except RegimeError as exc:
        print(f"moranwalk: numeric regime violation: {exc}", file=sys.stderr)
        return EXIT_REGIME
    record.parameters["format"] = args.format
    text = dumps(record, args.format)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
