"""Command line front end: spectra, dimension tables, verification reports,
summability diagnostics and K-theory projection encodings.

Subcommands: spectrum, dims, verify, summability, ktheory.  Configuration
precedence is flags > config file (flat key=value lines) > defaults; every
command is deterministic given its configuration.  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields

from . import coaction, coord, dirac, teardrop
from .coaction import WeightPair
from .qcore import QContext, hi

__all__ = ["RunConfig", "main"]

_SUITES = (
    "su2q-relations",
    "wp-relations",
    "haar",
    "equivariance",
    "qdirac",
    "chirality",
    "fredholm",
    "teardrop",
)


@dataclass
class RunConfig:
    q: float = 0.5
    tol: float = 1e-9
    k: int = 1
    l: int = 1
    jmax: float = 10.0
    lmax: float = 10.0
    N: int = 64
    Nz: int = 8
    n: int = 0
    format: str = "csv"
    out: str | None = None

    def context(self) -> QContext:
        return QContext(self.q, self.tol)

    def weight_pair(self) -> WeightPair:
        return WeightPair(self.k, self.l)


_CONFIG_CASTS = {
    "q": float,
    "tol": float,
    "k": int,
    "l": int,
    "jmax": float,
    "lmax": float,
    "N": int,
    "Nz": int,
    "n": int,
    "format": str,
    "out": str,
}


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_CASTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_CASTS[key](value)
    return values


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=None, help="deformation parameter in (0,1)")
    common.add_argument("--tol", type=float, default=None, help="numeric tolerance")
    common.add_argument("--k", type=int, default=None, help="first weight")
    common.add_argument("--l", type=int, default=None, help="second weight")
    common.add_argument("--jmax", type=float, default=None, help="spinor level cap")
    common.add_argument("--lmax", type=float, default=None, help="highest weight cap")
    common.add_argument("--N", type=int, default=None, help="sequence-space truncation")
    common.add_argument("--Nz", type=int, default=None, help="Z-window half width")
    common.add_argument("--n", type=int, default=None, help="homogeneity index")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    common.add_argument("--config", type=str, default=None, help="flat key=value config file")

    parser = argparse.ArgumentParser(
        prog="qwps",
        description="quantum weighted projective spaces: spectra, dimensions, verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("spectrum", parents=[common], help="Dirac spectrum table")
    p.add_argument("--triple", choices=("odd", "even"), required=True)
    sub.add_parser("dims", parents=[common], help="dimension formulas vs enumeration")
    p = sub.add_parser("verify", parents=[common], help="verification suites")
    p.add_argument("--suite", choices=_SUITES, required=True)
    p.add_argument(
        "--dump",
        type=str,
        default=None,
        help="write the algebra elements the suite exercised as line-delimited records",
    )
    p = sub.add_parser("summability", parents=[common], help="partial trace sums")
    p.add_argument("--triple", choices=("odd", "even"), default="odd")
    p.add_argument("--nlist", type=str, default="512,1024,2048", help="comma separated N values")
    p = sub.add_parser("ktheory", parents=[common], help="projection class encodings")
    p.add_argument("--j", type=int, default=0)
    return parser


def _merge_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in _read_config_file(args.config).items():
            setattr(cfg, key, value)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(cfg, f.name, flag)
    return cfg


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(header, rows) -> str:
    def fmt(value):
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return f"{value:.17g}"
        return str(value)

    lines = [",".join(header)]
    lines += [",".join(fmt(row[h]) for h in header) for row in rows]
    return "\n".join(lines) + "\n"


def _cmd_spectrum(args, cfg: RunConfig) -> int:
    wp = cfg.weight_pair()
    if args.triple == "odd":
        table = dirac.odd_triple_spectrum(wp, hi(cfg.jmax))
    else:
        table = dirac.even_triple_spectrum(wp, hi(cfg.lmax))
    _emit(table.to_csv_text() if cfg.format == "csv" else table.to_json_text() + "\n", cfg)
    return 0


def _cmd_dims(args, cfg: RunConfig) -> int:
    wp = cfg.weight_pair()
    rows = coaction.dim_table(wp, hi(cfg.jmax))
    header = ("family", "index", "closed_form", "oracle", "match")
    if cfg.format == "csv":
        _emit(_rows_to_csv(header, rows), cfg)
    else:
        _emit(json.dumps(rows, indent=2) + "\n", cfg)
    return 0 if all(row["match"] for row in rows) else 1


def _run_suite(suite: str, cfg: RunConfig) -> dict:
    ctx = cfg.context()
    wp = cfg.weight_pair()
    if suite == "su2q-relations":
        residuals, threshold = coord.relation_residuals(ctx), cfg.tol
    elif suite == "wp-relations":
        residuals, threshold = coaction.verify_wp_relations(wp, ctx), 10 * cfg.tol
    elif suite == "haar":
        residuals = {"max": coord.haar_orthogonality_residual(ctx, 2)}
        threshold = cfg.tol
    elif suite == "equivariance":
        residuals, threshold = coord.equivariance_residuals(ctx), cfg.tol
    elif suite == "qdirac":
        cap = min(hi(cfg.jmax), dirac.Q_DIRAC_GUARD, hi(2))
        residuals = {"max": dirac.q_dirac_check(cap, ctx)}
        threshold = 100 * cfg.tol
    elif suite == "chirality":
        cap = min(hi(cfg.lmax), hi(5))
        residuals, threshold = dirac.chirality_checks(wp, cap, ctx), 1e-3 * cfg.tol
    elif suite == "fredholm":
        cap = min(hi(cfg.lmax), hi(5))
        residuals, threshold = dirac.fredholm_degeneracy(wp, cap, ctx), 1e-3 * cfg.tol
    elif suite == "teardrop":
        residuals = teardrop.wp_relation_residuals(cfg.l, cfg.N, ctx)
        threshold = cfg.tol
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown suite {suite!r}")
    return {
        "suite": suite,
        "q": cfg.q,
        "k": cfg.k,
        "l": cfg.l,
        "residuals": residuals,
        "max_residual": residuals["max"],
        "threshold": threshold,
        "pass": bool(residuals["max"] < threshold),
    }


def _dump_elements(suite: str, cfg: RunConfig, path: str) -> None:
    """Golden-file hook: serialize the elements a suite is built from."""
    ctx = cfg.context()
    if suite == "wp-relations":
        a, b = coaction.wp_gens(cfg.weight_pair(), ctx)
        named = (("a", a), ("b", b))
    else:
        alpha, beta, alpha_s, beta_s = coord.gens(ctx)
        named = (("alpha", alpha), ("beta", beta), ("alpha_star", alpha_s), ("beta_star", beta_s))
    chunks = [f"# {name}\n{coord.to_jsonl(el)}" for name, el in named]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(chunks) + "\n")


def _cmd_verify(args, cfg: RunConfig) -> int:
    report = _run_suite(args.suite, cfg)
    if args.dump:
        _dump_elements(args.suite, cfg, args.dump)
    _emit(json.dumps(report, indent=2) + "\n", cfg)
    return 0 if report["pass"] else 1


def _cmd_summability(args, cfg: RunConfig) -> int:
    wp = cfg.weight_pair()
    n_values = [int(part) for part in args.nlist.split(",") if part.strip()]
    if not n_values:
        raise ValueError("empty N list")
    rows = []
    prev = None
    for n_val in n_values:
        sigma = dirac.summability_partial_sum(wp, n_val, args.triple)
        sigma3 = dirac.summability_partial_sum(wp, n_val, args.triple, exponent=3)
        if prev is None:
            ratio = float("nan")
        else:
            ratio = (sigma - prev[1]) / math.log(n_val / prev[0])
        rows.append(
            {
                "N": n_val,
                "sigma_N": sigma,
                "sigma_over_logN": sigma / math.log(n_val),
                "increment_ratio": ratio,
                "sigma3_N": sigma3,
            }
        )
        prev = (n_val, sigma)
    header = ("N", "sigma_N", "sigma_over_logN", "increment_ratio", "sigma3_N")
    if cfg.format == "csv":
        _emit(_rows_to_csv(header, rows), cfg)
    else:
        _emit(json.dumps(rows, indent=2) + "\n", cfg)
    return 0


def _cmd_ktheory(args, cfg: RunConfig) -> int:
    cls = teardrop.ktheory_class(cfg.l, cfg.n, args.j)
    _emit(json.dumps(cls.to_dict(), indent=2, ensure_ascii=False) + "\n", cfg)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        cfg.context()  # validates q and tol
        handler = {
            "spectrum": _cmd_spectrum,
            "dims": _cmd_dims,
            "verify": _cmd_verify,
            "summability": _cmd_summability,
            "ktheory": _cmd_ktheory,
        }[args.command]
        return handler(args, cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
