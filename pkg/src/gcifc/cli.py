"""Command-line front end: classify | region | gap | atlas | verify.

Emits plot-ready CSV (or JSON) with 12-digit mantissas and fixed C
formatting, so identical configs produce byte-identical output. A JSON
config file can mirror any flag; explicit flags win. CIFC_THREADS caps
worker threads for the verification sweeps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import inner, outer, region, verify
from .channel import ChannelParams, RawChannel, classify, to_standard_form
from .errors import (DegenerateDirectLink, GcifcError, RegimeMismatch,
                     SingularPreset)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_REGIME = 3

_OUTER_BUILDERS = {
    "weak": lambda ch, g: outer.weak_outer(ch, g),
    "strong": lambda ch, g: outer.strong_outer(ch, g),
    "unified": lambda ch, g: outer.unified_outer(ch, g),
    "bc-pr": lambda ch, g: outer.bc_pr_outer(ch, grid=g),
    "bc-dms-deg": lambda ch, g: outer.bc_dms_degraded_outer(ch, g),
    "bc-dms-s": lambda ch, g: outer.bc_dms_s_outer(ch, g),
    "pl-si": lambda ch, g: outer.piecewise_linear_outer(ch, g),
    "transform:tos": lambda ch, g: outer.transformed_outer(ch, preset="tos", grid=g),
    "transform:toweak": lambda ch, g: outer.transformed_outer(ch, preset="toweak", grid=g),
    "transform:tovs": lambda ch, g: outer.transformed_outer(ch, preset="tovs", grid=g),
    "outer:best": lambda ch, g: outer.best_outer(ch, grid=g),
}

_INNER_BUILDERS = {
    "a": lambda ch, g: inner.scheme_a(ch, grid=g),
    "b": lambda ch, g: inner.scheme_b(ch, grid=g),
    "c": lambda ch, g: inner.scheme_c(ch, grid=g),
    "c46": lambda ch, g: inner.scheme_c46(ch, grid=g),
    "d": lambda ch, g: inner.scheme_d(ch, grid=g),
    "e": lambda ch, g: inner.scheme_e(ch, lambda_policy="sweep", grid=g),
    "e:sweep": lambda ch, g: inner.scheme_e(ch, lambda_policy="sweep", grid=g),
    "e:costa1": lambda ch, g: inner.scheme_e(ch, lambda_policy="costa1", grid=g),
    "e:zero": lambda ch, g: inner.scheme_e(ch, lambda_policy="zero", grid=g),
    "f": lambda ch, g: inner.scheme_f(ch, grid=g),
    "tdma": lambda ch, g: inner.tdma_inner(ch, grid=g),
    "inner:best": lambda ch, g: inner.best_inner(ch, grid=g),
}


@dataclass
class RunConfig:
    """Resolved invocation: one command plus its inputs."""

    command: str
    channel: ChannelParams | None = None
    ids: list = field(default_factory=list)
    out: str | None = None
    fmt: str = "csv"
    grid: int = region.R1_GRID_DEFAULT
    seed: int = 42
    n: int = 1000
    resolution: int = 41
    mode: str = "regime"
    p1: float = 10.0
    p2: float = 10.0
    a_range: tuple = (-5.0, 5.0)
    b_range: tuple = (0.0, 5.0)
    outer_id: str | None = None
    inner_id: str | None = None
    gnuplot: bool = False


class UsageError(Exception):
    pass


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"--a: cannot parse complex value {text!r}") from None


def _parse_raw(text: str) -> RawChannel:
    fields = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise UsageError(f"--raw: expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        fields[k.strip()] = v.strip()
    try:
        return RawChannel(
            h11=complex(fields.get("h11", "1")),
            h12=complex(fields.get("h12", "0")),
            h21=complex(fields.get("h21", "0")),
            h22=complex(fields.get("h22", "1")),
            sigma1_sq=float(fields.get("sigma1", fields.get("sigma1_sq", "1"))),
            sigma2_sq=float(fields.get("sigma2", fields.get("sigma2_sq", "1"))),
            p1_raw=float(fields.get("p1", "1")),
            p2_raw=float(fields.get("p2", "1")),
        )
    except (ValueError, KeyError) as exc:
        raise UsageError(f"--raw: {exc}") from None


def _channel_from_args(args) -> ChannelParams | None:
    if getattr(args, "raw", None):
        return to_standard_form(_parse_raw(args.raw))
    if getattr(args, "a", None) is None and getattr(args, "b", None) is None:
        return None
    missing = [k for k in ("a", "b", "p1", "p2") if getattr(args, k, None) is None]
    if missing:
        raise UsageError(f"missing channel flags: --{', --'.join(missing)}")
    return ChannelParams(_parse_complex(args.a), float(args.b),
                         float(args.p1), float(args.p2))


def _apply_config_file(args, parser):
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        conf = json.load(fh)
    for key, val in conf.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise UsageError(f"config file: unknown option {key!r}")
        if parser.get_default(key) == getattr(args, key):
            setattr(args, key, val)
    return args


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _region_csv_name(out: str, rid: str) -> str:
    return f"{out}_{rid.replace(':', '-')}.csv"


def _gnuplot_script(out: str, ids) -> str:
    lines = ["set datafile separator ','", "set key autotitle columnhead",
             "set xlabel 'R1 [bits]'", "set ylabel 'R2 [bits]'"]
    plots = ", ".join(f"'{_region_csv_name(out, rid)}' using 1:2 with lines "
                      f"title '{rid}'" for rid in ids)
    lines.append("plot " + plots)
    return "\n".join(lines) + "\n"


def cmd_classify(cfg: RunConfig) -> int:
    rep = classify(cfg.channel)
    text = rep.to_json() + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


def _build_region(ch: ChannelParams, rid: str, grid: int):
    if rid == "best":
        raise UsageError("'best' is ambiguous here: use inner:best or outer:best")
    if rid in _OUTER_BUILDERS:
        return _OUTER_BUILDERS[rid](ch, grid)
    if rid in _INNER_BUILDERS:
        return _INNER_BUILDERS[rid](ch, grid)
    raise UsageError(f"unknown bound/scheme id {rid!r}")


def cmd_region(cfg: RunConfig) -> int:
    if not cfg.ids:
        raise UsageError("region needs --ids")
    for rid in cfg.ids:
        reg = _build_region(cfg.channel, rid, cfg.grid)
        if cfg.fmt == "json":
            text = json.dumps(reg.to_json_dict()) + "\n"
            path = (f"{cfg.out}_{rid.replace(':', '-')}.json"
                    if cfg.out else None)
        else:
            text = reg.to_csv()
            path = _region_csv_name(cfg.out, rid) if cfg.out else None
        if not cfg.out:
            sys.stdout.write(f"# id: {rid}\n")
        _emit(text, path)
    if cfg.gnuplot and cfg.out and cfg.fmt == "csv":
        _emit(_gnuplot_script(cfg.out, cfg.ids), f"{cfg.out}.gp")
    return EXIT_OK


def cmd_gap(cfg: RunConfig) -> int:
    if not cfg.outer_id or not cfg.inner_id:
        raise UsageError("gap needs --outer and --inner ids")
    oid = "outer:best" if cfg.outer_id == "best" else cfg.outer_id
    iid = "inner:best" if cfg.inner_id == "best" else cfg.inner_id
    if oid not in _OUTER_BUILDERS:
        raise UsageError(f"unknown outer id {cfg.outer_id!r}")
    if iid not in _INNER_BUILDERS:
        raise UsageError(f"unknown inner id {cfg.inner_id!r}")
    reg_i = _INNER_BUILDERS[iid](cfg.channel, cfg.grid)
    if oid == "outer:best":
        reg_o = outer.best_outer(cfg.channel, grid=cfg.grid,
                                 extra_floor=np.column_stack(
                                     [reg_i.r1, reg_i.r2]))
    else:
        reg_o = _OUTER_BUILDERS[oid](cfg.channel, cfg.grid)
    rep = region.gap_report(reg_o, reg_i)
    _emit(json.dumps(rep.to_json_dict(), indent=2, sort_keys=True) + "\n",
          cfg.out)
    return EXIT_OK


def cmd_atlas(cfg: RunConfig) -> int:
    cells = verify.atlas(cfg.a_range, cfg.b_range, cfg.resolution,
                         cfg.p1, cfg.p2, cfg.mode)
    if cfg.fmt == "json":
        rows = [{"a_re": c.a.real, "a_im": c.a.imag, "b": c.b,
                 "label": c.label, "capacity_known": c.capacity_known,
                 "margin_5": c.margin_5, "margin_31a": c.margin_31a,
                 "margin_31b": c.margin_31b, "gap": c.gap} for c in cells]
        _emit(json.dumps(rows) + "\n", cfg.out)
    else:
        lines = [verify.ATLAS_CSV_HEADER] + [c.csv_row() for c in cells]
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.n <= 0:
        raise UsageError("--n must be positive")
    workers = int(os.environ.get("CIFC_THREADS", "1") or "1")
    reports = verify.run_verification(n=cfg.n, seed=cfg.seed,
                                      workers=max(workers, 1))
    payload = [r.to_json_dict() for r in reports]
    if cfg.out:
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.out)
    failed = [r for r in reports if not r.holds]
    for r in sorted(reports, key=lambda r: r.theorem_id):
        status = "PASS" if r.holds else "FAIL"
        print(f"[{status}] {r.theorem_id}: worst violation "
              f"{r.worst_violation:.3e} over {r.channels_tested} checks")
        if not r.holds:
            print(f"        worst offender: {json.dumps(r.details[0])}")
    return EXIT_VERIFY_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gcifc",
        description="Capacity bounds and regime maps for the Gaussian "
                    "cognitive interference channel")
    sub = p.add_subparsers(dest="command", required=True)

    def add_channel_flags(sp):
        sp.add_argument("--a", help="cross gain at the cognitive receiver "
                                    "(complex, e.g. '0.5' or '1+2j')")
        sp.add_argument("--b", type=float,
                        help="cross gain at the primary receiver (>= 0)")
        sp.add_argument("--p1", type=float, help="cognitive transmit power")
        sp.add_argument("--p2", type=float, help="primary transmit power")
        sp.add_argument("--raw", help="raw channel 'h11=..,h12=..,h21=..,"
                                      "h22=..,sigma1=..,sigma2=..,p1=..,p2=..' "
                                      "(auto-reduced to standard form)")
        sp.add_argument("--config", help="JSON file mirroring the flags")
        sp.add_argument("--out", help="output path (or prefix for region)")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default="csv")
        sp.add_argument("--grid", type=int, default=region.R1_GRID_DEFAULT,
                        help="r1 samples per boundary")

    sp = sub.add_parser("classify", help="regime flags and margins")
    add_channel_flags(sp)

    sp = sub.add_parser("region", help="boundary tables for bounds/schemes")
    add_channel_flags(sp)
    sp.add_argument("--ids", help="comma-separated bound/scheme ids")
    sp.add_argument("--gnuplot", action="store_true",
                    help="also emit a gnuplot script next to the CSVs")

    sp = sub.add_parser("gap", help="additive/multiplicative gap between bounds")
    add_channel_flags(sp)
    sp.add_argument("--outer", dest="outer_id", help="outer bound id")
    sp.add_argument("--inner", dest="inner_id", help="inner scheme id")

    sp = sub.add_parser("atlas", help="regime or gap map over an (a, b) grid")
    add_channel_flags(sp)
    sp.add_argument("--p", type=float, help="set p1 = p2 = p")
    sp.add_argument("--mode", choices=("regime", "gap"), default="regime")
    sp.add_argument("--resolution", type=int, default=41)
    sp.add_argument("--a-min", type=float, default=-5.0)
    sp.add_argument("--a-max", type=float, default=5.0)
    sp.add_argument("--b-min", type=float, default=0.0)
    sp.add_argument("--b-max", type=float, default=5.0)

    sp = sub.add_parser("verify", help="run the randomized theorem suite")
    add_channel_flags(sp)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=42)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        args = _apply_config_file(args, parser)
        cfg = RunConfig(command=args.command)
        cfg.out = args.out
        cfg.fmt = args.fmt
        cfg.grid = args.grid
        if args.command in ("classify", "region", "gap"):
            cfg.channel = _channel_from_args(args)
            if cfg.channel is None:
                raise UsageError("a channel is required: --a/--b/--p1/--p2 "
                                 "or --raw")
        if args.command == "region":
            cfg.ids = [s.strip() for s in (args.ids or "").split(",") if s.strip()]
            cfg.gnuplot = args.gnuplot
            return cmd_region(cfg)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "gap":
            cfg.outer_id, cfg.inner_id = args.outer_id, args.inner_id
            return cmd_gap(cfg)
        if args.command == "atlas":
            if args.p is not None:
                cfg.p1 = cfg.p2 = args.p
            else:
                cfg.p1 = args.p1 if args.p1 is not None else 10.0
                cfg.p2 = args.p2 if args.p2 is not None else 10.0
            cfg.mode = args.mode
            cfg.resolution = args.resolution
            cfg.a_range = (args.a_min, args.a_max)
            cfg.b_range = (args.b_min, args.b_max)
            return cmd_atlas(cfg)
        if args.command == "verify":
            cfg.n, cfg.seed = args.n, args.seed
            return cmd_verify(cfg)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateDirectLink,) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegimeMismatch, SingularPreset) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except GcifcError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAIL


if __name__ == "__main__":
    sys.exit(main())
