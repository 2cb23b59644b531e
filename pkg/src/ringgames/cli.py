"""Command-line front end: every computation as a reproducible batch run.

Each subcommand resolves its flags into a full configuration, computes via
the library modules, and emits the configuration together with the result
(JSON by default, CSV for grids/tables, or a human-readable block).  Exit
codes: 0 success, 2 usage problems, 3 structural/solver failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import analysis
from .chain import (
    SolverError,
    StructuralError,
    capital_dependent_fixture,
    mean_mu,
    moments,
    pattern_mean,
    pattern_variance,
    stationary_distribution,
    variance_sigma2,
)
from .games import SpatialParams, build_game, build_reduced, mix
from .reduction import necklace_count, orbits
from .simulate import Schedule, empirical_moments, play, play_chain

OUTPUT_FORMATS = ("json", "csv", "pretty")


class UsageError(ValueError):
    """Bad flag combinations detected after argparse."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: subcommand, options, output routing."""

    subcommand: str
    options: dict
    output_format: str = "json"
    out: Optional[str] = None
    seed: Optional[int] = None

    def header(self) -> dict:
        cfg = {"subcommand": self.subcommand, "output": self.output_format}
        if self.seed is not None:
            cfg["seed"] = self.seed
        cfg.update(self.options)
        return cfg


def parse_probability(text: str) -> float:
    """Exact rational parsing: '4/25', '0.16' and '1' all accepted."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse probability {text!r}: {exc}") from exc
    if not 0 <= value <= 1:
        raise UsageError(f"probability {text!r} outside [0, 1]")
    return float(value)


def parse_p_list(text: str) -> tuple:
    parts = [t for t in text.split(",") if t.strip()]
    if len(parts) != 4:
        raise UsageError(f"--p needs four comma-separated values, got {text!r}")
    return tuple(parse_probability(t) for t in parts)


def parse_pattern(text: str) -> tuple:
    try:
        r, s = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--pattern expects 'r,s' integers, got {text!r}") from exc
    if r < 1 or s < 1:
        raise UsageError("pattern lengths must be >= 1")
    return r, s


def parse_int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


_PURE_GAMES = {"A": "A", "A'": "A_prime", "B": "B"}
_FIXTURES = {"capital-A": "A", "capital-B": "B", "capital-C": "C_half"}


def _a_variant(family: str) -> str:
    return "A" if family == "toral" else "A_prime"


def _schedule_options(args) -> dict:
    chosen = [
        name
        for name, val in (("mix", args.mix), ("pattern", args.pattern), ("pure", args.pure))
        if val is not None
    ]
    if len(chosen) > 1:
        raise UsageError(f"--mix, --pattern and --pure are mutually exclusive (got {chosen})")
    if args.mix is not None:
        return {"schedule": "mixture", "gamma": parse_probability(args.mix)}
    if args.pattern is not None:
        r, s = parse_pattern(args.pattern)
        return {"schedule": "pattern", "r": r, "s": s}
    game = _PURE_GAMES[args.pure] if args.pure is not None else "B"
    return {"schedule": "pure", "game": game}


# ---------------------------------------------------------------------------
# Subcommand implementations.  Each returns (config_options, result_dict,
# optional_csv_text).
# ---------------------------------------------------------------------------


def _reduce_chain(game: str, params: SpatialParams, mode: str):
    if mode == "none":
        return build_game(game, params), None
    if mode == "auto":
        mode = "dihedral" if params.symmetric else "cyclic"
    qmap = orbits(params.n, mode)
    return build_reduced(game, params, qmap), mode


def cmd_mean(args) -> tuple:
    tol = args.tol
    if args.fixture is not None:
        chain = capital_dependent_fixture(_FIXTURES[args.fixture])
        res = moments(chain, tol, with_variance=args.variance)
        options = {"fixture": args.fixture, "variance": args.variance}
        result = {"mu": res.mu, "mu_6sig": analysis.sig6(res.mu)}
        if args.variance:
            result.update(sigma2=res.sigma2, sigma2_6sig=analysis.sig6(res.sigma2))
        result["diagnostics"] = {
            "method": res.method,
            "reduced_dim": res.reduced_dim,
            "residual": res.residual,
        }
        return options, result, None

    if args.N is None or args.p is None or args.family is None:
        raise UsageError("mean requires --fixture, or --family with --N and --p")
    p = parse_p_list(args.p)
    params = SpatialParams(args.N, p)
    sched = _schedule_options(args)
    options = {"family": args.family, "N": args.N, "p": list(p), "reduce": args.reduce}
    options.update(sched)
    options["variance"] = args.variance

    a_game = _a_variant(args.family)
    if sched["schedule"] == "pattern":
        qmap_mode = args.reduce if args.reduce != "none" else "none"
        chain_b, used = _reduce_chain("B", params, qmap_mode)
        chain_a, _ = _reduce_chain(a_game, params, qmap_mode)
        mu = pattern_mean(chain_a, chain_b, sched["r"], sched["s"], tol=tol)
        result = {"mu": mu, "mu_6sig": analysis.sig6(mu)}
        if args.variance:
            s2 = pattern_variance(chain_a, chain_b, sched["r"], sched["s"], tol=tol)
            result.update(sigma2=s2, sigma2_6sig=analysis.sig6(s2))
        result["diagnostics"] = {"reduction": used, "reduced_dim": chain_b.dim}
        return options, result, None

    if sched["schedule"] == "mixture":
        chain_b, used = _reduce_chain("B", params, args.reduce)
        chain_a, _ = _reduce_chain(a_game, params, args.reduce)
        chain = mix(sched["gamma"], chain_a, chain_b)
    else:
        chain, used = _reduce_chain(sched["game"], params, args.reduce)
    pi = stationary_distribution(chain, tol)
    mu = mean_mu(chain, pi)
    result = {"mu": mu, "mu_6sig": analysis.sig6(mu)}
    if args.variance:
        s2 = variance_sigma2(chain, pi)
        result.update(sigma2=s2, sigma2_6sig=analysis.sig6(s2))
    result["diagnostics"] = {
        "reduction": used,
        "reduced_dim": chain.dim,
        "residual": pi.residual,
        "method": pi.method,
    }
    return options, result, None


def cmd_table(args) -> tuple:
    ns = parse_int_list(args.Ns)
    p = parse_p_list(args.p)
    rows = analysis.convergence_table(p, ns, args.family)
    options = {"family": args.family, "Ns": ns, "p": list(p)}
    result = {"rows": [row.to_dict() for row in rows]}
    return options, result, analysis.table_to_csv(rows)


def cmd_sweep(args) -> tuple:
    if args.grid_step is None:
        raise UsageError("sweep requires --grid-step")
    sched = _schedule_options(args)
    if sched["schedule"] == "pure":
        raise UsageError("sweep requires --mix GAMMA or --pattern R,S")
    a_variant = _a_variant(args.family)
    kwargs = (
        {"gamma": sched["gamma"]}
        if sched["schedule"] == "mixture"
        else {"pattern": (sched["r"], sched["s"])}
    )
    points = analysis.parrondo_region_sweep(
        args.N, args.grid_step, a_variant=a_variant, **kwargs
    )
    options = {"N": args.N, "grid_step": args.grid_step, "family": args.family}
    options.update(sched)
    counts = {}
    for pt in points:
        counts[pt.classification] = counts.get(pt.classification, 0) + 1
    result = {"points": [pt.to_dict() for pt in points], "counts": counts}
    return options, result, analysis.region_to_csv(points)


def cmd_volume(args) -> tuple:
    dims = {3: "three_param_p1_eq_p2", 4: "four_param"}[args.dims]
    est = analysis.condition_volume(
        parse_probability(args.gamma), dims, args.samples, args.seed
    )
    options = {"gamma": est.gamma, "dims": dims, "samples": args.samples, "seed": args.seed}
    return options, est.to_dict(), None


def cmd_simulate(args) -> tuple:
    p = parse_p_list(args.p)
    params = SpatialParams(args.N, p)
    sched_opts = _schedule_options(args)
    a_variant = _a_variant(args.family)
    if sched_opts["schedule"] == "mixture":
        schedule = Schedule.mixture(params, sched_opts["gamma"], a_variant)
    elif sched_opts["schedule"] == "pattern":
        schedule = Schedule.pattern(params, sched_opts["r"], sched_opts["s"], a_variant)
    else:
        schedule = Schedule.pure(params, sched_opts["game"])
    summary = play(schedule, args.turns, args.seed)
    mean_hat, sigma2_hat, stderr = empirical_moments(summary)
    options = {"family": args.family, "N": args.N, "p": list(p), "turns": args.turns}
    options.update(sched_opts)
    result = {
        "mean_hat": mean_hat,
        "sigma2_hat": sigma2_hat,
        "stderr": stderr,
        "n": summary.n,
        "seed": summary.seed,
    }
    return options, result, None


def cmd_reduce_info(args) -> tuple:
    qmap = orbits(args.N, args.group)
    options = {"N": args.N, "group": args.group}
    result = {
        "classes": qmap.n_classes,
        "necklace_count": necklace_count(args.N, args.group),
        "sizes": qmap.class_size.tolist(),
        "representatives": qmap.representative.tolist(),
    }
    return options, result, None


# ---------------------------------------------------------------------------
# Output plumbing.
# ---------------------------------------------------------------------------


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit_pretty(payload: dict) -> str:
    lines = ["config:"]
    for k, v in sorted(payload["config"].items()):
        lines.append(f"  {k} = {v}")
    lines.append("result:")

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k} = {v}")
        elif isinstance(obj, list):
            if all(not isinstance(v, (dict, list)) for v in obj):
                lines.append(pad + ", ".join(str(v) for v in obj))
            else:
                for v in obj:
                    walk(v, indent)
                    lines.append("")
        else:
            lines.append(f"{pad}{obj}")

    walk(payload["result"], 1)
    return "\n".join(lines).rstrip() + "\n"


def _emit_csv(payload: dict, csv_text: Optional[str]) -> str:
    if csv_text is None:
        raise UsageError("this subcommand has no CSV representation; use --output json")
    header = "".join(
        f"# {k}={v}\n" for k, v in sorted(payload["config"].items())
    )
    return header + csv_text


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringgames",
        description="Exact and simulated profit moments for ring games.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--output", choices=OUTPUT_FORMATS, default="json")
        p.add_argument("--out", metavar="FILE", default=None, help="write payload to FILE")

    def add_spatial(p):
        p.add_argument("--family", choices=("toral", "xie"), default=None)
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--p", default=None, help="p0,p1,p2,p3 (decimals or fractions)")
        p.add_argument("--mix", default=None, metavar="GAMMA")
        p.add_argument("--pattern", default=None, metavar="R,S")
        p.add_argument("--pure", choices=tuple(_PURE_GAMES), default=None)

    p_mean = sub.add_parser("mean", help="stationary mean (and variance) of a schedule")
    add_spatial(p_mean)
    p_mean.add_argument("--fixture", choices=tuple(_FIXTURES), default=None)
    p_mean.add_argument("--variance", action="store_true")
    p_mean.add_argument("--reduce", choices=("auto", "cyclic", "dihedral", "none"), default="auto")
    p_mean.add_argument("--tol", type=float, default=None)
    add_common(p_mean)

    p_table = sub.add_parser("table", help="mean-profit table over ring sizes")
    p_table.add_argument("--family", choices=("toral", "xie"), required=True)
    p_table.add_argument("--Ns", required=True, help="comma-separated ring sizes")
    p_table.add_argument("--p", default="1,4/25,4/25,7/10")
    add_common(p_table)

    p_sweep = sub.add_parser("sweep", help="classify a (p0,p1,p2) grid")
    p_sweep.add_argument("--N", type=int, required=True)
    p_sweep.add_argument("--grid-step", type=float, default=None)
    p_sweep.add_argument("--family", choices=("toral", "xie"), default="xie")
    p_sweep.add_argument("--mix", default=None, metavar="GAMMA")
    p_sweep.add_argument("--pattern", default=None, metavar="R,S")
    p_sweep.set_defaults(pure=None)
    add_common(p_sweep)

    p_vol = sub.add_parser("volume", help="Monte Carlo volume of the ergodicity condition")
    p_vol.add_argument("--gamma", required=True)
    p_vol.add_argument("--dims", type=int, choices=(3, 4), required=True)
    p_vol.add_argument("--samples", type=int, default=10**6)
    p_vol.add_argument("--seed", type=int, default=0)
    add_common(p_vol)

    p_sim = sub.add_parser("simulate", help="Monte Carlo play of a schedule")
    add_spatial(p_sim)
    p_sim.add_argument("--turns", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    add_common(p_sim)

    p_red = sub.add_parser("reduce-info", help="orbit class counts and sizes")
    p_red.add_argument("--N", type=int, required=True)
    p_red.add_argument("--group", choices=("cyclic", "dihedral"), default="cyclic")
    add_common(p_red)

    return parser


_DISPATCH = {
    "mean": cmd_mean,
    "table": cmd_table,
    "sweep": cmd_sweep,
    "volume": cmd_volume,
    "simulate": cmd_simulate,
    "reduce-info": cmd_reduce_info,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        options, result, csv_text = _DISPATCH[args.subcommand](args)
        seed = getattr(args, "seed", None)
        config = RunConfig(
            args.subcommand, options, args.output, args.out, seed
        ).header()
        payload = {"config": config, "result": result}
        if args.output == "json":
            text = _emit_json(payload)
        elif args.output == "csv":
            text = _emit_csv(payload, csv_text)
        else:
            text = _emit_pretty(payload)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StructuralError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
