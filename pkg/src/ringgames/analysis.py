"""Study-level computations: convergence tables, region sweeps, volumes.

Everything here composes the chain engine with the game builders and the
orbit quotients: mean-profit tables over growing ring sizes, grid sweeps
classifying where a losing game B turns winning under mixing or periodic
alternation, and the Monte Carlo volume of the sufficient-condition region
for ergodicity of the mixture chain.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chain import (
    SolverError,
    StructuralError,
    mean_mu,
    pattern_mean,
    stationary_distribution,
)
from .games import SpatialParams, build_reduced, mix
from .reduction import orbits

# Classification treats |mu| below this as zero; grid nodes sit on exact
# symmetry points where the true mean is 0 but floats carry ~1e-17 noise.
ZERO_TOL = 1e-12

FAMILIES = ("toral", "xie")
VOLUME_DIMS = ("four_param", "three_param_p1_eq_p2")

# Schedule columns per family: the pure game, the half-half mixture, and
# four short periodic alternations.
_PATTERNS = ((1, 1), (1, 2), (2, 1), (2, 2))


def sig6(x: float) -> str:
    """Six significant digits, round-half-even, trailing zeros kept."""
    return f"{float(x):#.6g}"


def family_labels(family: str) -> tuple:
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    a = "A" if family == "toral" else "A'"
    return ("B", f"({a}+B)/2") + tuple(a * r + "B" * s for (r, s) in _PATTERNS)


@dataclass(frozen=True)
class ErgReport:
    """Outcome of the sufficient mixing-ergodicity inequality."""

    holds: bool
    lhs: float
    gamma: float


def _erg_lhs(p0, p1, p2, p3, gamma):
    c = gamma / 2.0
    d = 1.0 - gamma
    first = np.maximum(np.abs(c + d * (p0 - p1)), np.abs(c + d * (p2 - p3)))
    second = np.maximum(np.abs(c + d * (p0 - p2)), np.abs(c + d * (p1 - p3)))
    return first + second


def erg_condition(params: SpatialParams, gamma: float) -> ErgReport:
    """Sufficient condition for ergodicity of the gamma-mixture chain.

    ``lhs = max(|g/2+(1-g)(p0-p1)|, |g/2+(1-g)(p2-p3)|)
          + max(|g/2+(1-g)(p0-p2)|, |g/2+(1-g)(p1-p3)|)``
    and the condition holds iff ``lhs < 1`` strictly.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    p0, p1, p2, p3 = params.p
    lhs = float(_erg_lhs(p0, p1, p2, p3, float(gamma)))
    return ErgReport(holds=lhs < 1.0, lhs=lhs, gamma=float(gamma))


@dataclass(frozen=True)
class VolumeEstimate:
    volume: float
    ci95: float
    gamma: float
    dims: str
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "volume": self.volume,
            "ci95": self.ci95,
            "gamma": self.gamma,
            "dims": self.dims,
            "samples": self.samples,
            "seed": self.seed,
        }


def condition_volume(
    gamma: float,
    dims: str = "four_param",
    samples: int = 10**6,
    seed: int = 0,
) -> VolumeEstimate:
    """Monte Carlo volume of the parameter region where erg_condition holds.

    ``four_param`` draws (p0,p1,p2,p3) uniformly on the unit 4-cube;
    ``three_param_p1_eq_p2`` draws (p0,p1,p3) on the unit cube with p2
    tied to p1.  Returns the hit fraction with a binomial 95% interval.
    """
    if dims not in VOLUME_DIMS:
        raise ValueError(f"dims must be one of {VOLUME_DIMS}, got {dims!r}")
    if samples < 10**5:
        raise ValueError("need at least 1e5 samples for a meaningful estimate")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        m = min(left, 1 << 20)
        p0, p1, p3 = rng.random(m), rng.random(m), rng.random(m)
        p2 = rng.random(m) if dims == "four_param" else p1
        hits += int(np.count_nonzero(_erg_lhs(p0, p1, p2, p3, float(gamma)) < 1.0))
        left -= m
    v = hits / samples
    ci95 = 1.96 * math.sqrt(v * (1.0 - v) / samples)
    return VolumeEstimate(v, ci95, float(gamma), dims, samples, seed)


@dataclass(frozen=True)
class ConvergenceRow:
    """One ring size of the mean-profit table."""

    n: int
    group: str
    reduced_dim: int
    values: dict
    errors: dict = field(default_factory=dict)

    def formatted(self) -> dict:
        return {k: sig6(v) for k, v in self.values.items()}

    def to_dict(self) -> dict:
        return {
            "N": self.n,
            "group": self.group,
            "reduced_dim": self.reduced_dim,
            "values": dict(self.values),
            "values_6sig": self.formatted(),
            "errors": dict(self.errors),
        }


def _table_params(params) -> tuple:
    if isinstance(params, SpatialParams):
        return params.p
    p = tuple(float(v) for v in params)
    if len(p) != 4:
        raise ValueError("expected four probabilities (p0, p1, p2, p3)")
    return p


def convergence_table(params, ns, family: str, tol: float = 1e-12) -> list:
    """Mean profit per turn for the six schedules of one game family.

    ``params`` supplies the coin probabilities (a SpatialParams or a
    4-tuple; the ring size field is ignored in favor of ``ns``).  Each ring
    size gets its own orbit-reduced chains: dihedral orbits when p1 == p2,
    cyclic otherwise.  A cell whose solve fails structurally is reported in
    the row's ``errors`` and leaves the other cells intact.
    """
    p = _table_params(params)
    labels = family_labels(family)
    a_game = "A" if family == "toral" else "A_prime"
    rows = []
    for n in ns:
        if not 3 <= n <= 18:
            raise ValueError(f"table ring sizes must lie in [3, 18], got {n}")
        pars = SpatialParams(n, p)
        group = "dihedral" if pars.symmetric else "cyclic"
        qmap = orbits(n, group)
        chain_b = build_reduced("B", pars, qmap)
        chain_a = build_reduced(a_game, pars, qmap)
        values, errors = {}, {}

        def cell(label, fn):
            try:
                values[label] = float(fn())
            except (StructuralError, SolverError) as exc:
                errors[label] = str(exc)

        cell(labels[0], lambda: mean_mu(chain_b, stationary_distribution(chain_b, tol)))
        mixed = mix(0.5, chain_a, chain_b)
        cell(labels[1], lambda: mean_mu(mixed, stationary_distribution(mixed, tol)))
        for label, (r, s) in zip(labels[2:], _PATTERNS):
            cell(label, lambda r=r, s=s: pattern_mean(chain_a, chain_b, r, s, tol=tol))
        rows.append(ConvergenceRow(n, group, qmap.n_classes, values, errors))
    return rows


@dataclass(frozen=True)
class StabilizationReport:
    column: str
    stabilized: bool
    last_delta: float
    value: str
    history: tuple

    def to_dict(self) -> dict:
        return {
            "column": self.column,
            "stabilized": self.stabilized,
            "last_delta": self.last_delta,
            "value": self.value,
            "history": [{"N": n, "value": v} for n, v in self.history],
        }


def stabilization_report(rows, column: str) -> StabilizationReport:
    """Has a table column stopped moving at 6 significant digits?

    Stabilized iff the last two ring sizes agree after 6-digit rounding.
    This deliberately reports only stabilization of the finite-size values;
    it does not extrapolate a true infinite-ring limit.
    """
    have = sorted(
        ((row.n, row.values[column]) for row in rows if column in row.values),
        key=lambda t: t[0],
    )
    if len({n for n, _ in have}) < 3:
        raise ValueError("need at least 3 distinct ring sizes to assess stabilization")
    tail = [v for _, v in have[-2:]]
    return StabilizationReport(
        column=column,
        stabilized=sig6(tail[0]) == sig6(tail[1]),
        last_delta=float(tail[1] - tail[0]),
        value=sig6(tail[1]),
        history=tuple((n, sig6(v)) for n, v in have),
    )


@dataclass(frozen=True)
class RegionPoint:
    """One grid node of a Parrondo-region sweep.

    The free parameters are (p0, p1, p2) with the game built from the
    vector (p0, p1, p1, p2): the mirror-symmetric slice, axes ordered as
    (p0, p2, p1).  ``classification`` compares the pure-B mean against the
    combined schedule's mean; means within ZERO_TOL of zero count as zero.
    """

    p0: float
    p1: float
    p2: float
    mu_b: float
    mu_combined: float
    classification: str
    flag: str = ""

    def to_dict(self) -> dict:
        return {
            "p0": self.p0,
            "p1": self.p1,
            "p2": self.p2,
            "mu_B": self.mu_b,
            "mu_combined": self.mu_combined,
            "class": self.classification,
            "flag": self.flag,
        }


def _classify(mu_b: float, mu_combined: float) -> str:
    b_neg = mu_b <= ZERO_TOL
    b_pos = mu_b >= -ZERO_TOL
    c_pos = mu_combined > ZERO_TOL
    c_neg = mu_combined < -ZERO_TOL
    if b_neg and c_pos:
        return "parrondo"
    if b_pos and c_neg:
        return "anti_parrondo"
    return "neither"


def classify_node(
    n: int,
    node: tuple,
    *,
    gamma: Optional[float] = None,
    pattern: Optional[tuple] = None,
    a_variant: str = "A_prime",
    qmap=None,
    tol: float = 1e-12,
) -> RegionPoint:
    """Classify one (p0, p1, p2) node of the mirror-symmetric slice."""
    if (gamma is None) == (pattern is None):
        raise ValueError("specify exactly one of gamma= or pattern=(r, s)")
    p0, p1, p2 = (float(v) for v in node)
    pars = SpatialParams(n, (p0, p1, p1, p2))
    if qmap is None:
        qmap = orbits(n, "dihedral")
    try:
        chain_b = build_reduced("B", pars, qmap)
        chain_a = build_reduced(a_variant, pars, qmap)
        mu_b = mean_mu(chain_b, stationary_distribution(chain_b, tol))
        if gamma is not None:
            mixed = mix(gamma, chain_a, chain_b)
            mu_c = mean_mu(mixed, stationary_distribution(mixed, tol))
        else:
            r, s = pattern
            mu_c = pattern_mean(chain_a, chain_b, r, s, tol=tol)
    except (StructuralError, SolverError) as exc:
        return RegionPoint(p0, p1, p2, float("nan"), float("nan"), "neither", str(exc))
    return RegionPoint(p0, p1, p2, mu_b, mu_c, _classify(mu_b, mu_c))


def parrondo_region_sweep(
    n: int,
    grid_step: float,
    *,
    gamma: Optional[float] = None,
    pattern: Optional[tuple] = None,
    a_variant: str = "A_prime",
    tol: float = 1e-12,
) -> list:
    """Classify every node of a regular (p0, p1, p2) grid.

    ``grid_step`` must divide 1 (e.g. 0.1 gives an 11^3 grid including
    both endpoints).  Output is ordered lexicographically by (p0, p2, p1).
    Nodes whose chain has no unique stationary law come back as "neither"
    with the diagnostic in ``flag``.
    """
    if (gamma is None) == (pattern is None):
        raise ValueError("specify exactly one of gamma= or pattern=(r, s)")
    k = round(1.0 / grid_step)
    if k < 1 or abs(k * grid_step - 1.0) > 1e-9:
        raise ValueError(f"grid_step {grid_step} does not divide 1")
    vals = [i / k for i in range(k + 1)]
    qmap = orbits(n, "dihedral")
    points = []
    for p0 in vals:
        for p2 in vals:
            for p1 in vals:
                points.append(
                    classify_node(
                        n,
                        (p0, p1, p2),
                        gamma=gamma,
                        pattern=pattern,
                        a_variant=a_variant,
                        qmap=qmap,
                        tol=tol,
                    )
                )
    return points


def region_to_csv(points) -> str:
    """CSV with columns p0,p1,p2,mu_B,mu_combined,class."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p0", "p1", "p2", "mu_B", "mu_combined", "class"])
    for pt in points:
        writer.writerow(
            [
                f"{pt.p0:g}",
                f"{pt.p1:g}",
                f"{pt.p2:g}",
                f"{pt.mu_b:.12g}",
                f"{pt.mu_combined:.12g}",
                pt.classification,
            ]
        )
    return buf.getvalue()


def table_to_csv(rows) -> str:
    """CSV of a convergence table: one line per (N, schedule) cell."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "schedule", "mean", "mean_6sig", "error"])
    for row in rows:
        for label in row.values:
            writer.writerow([row.n, label, f"{row.values[label]:.12g}", sig6(row.values[label]), ""])
        for label, msg in row.errors.items():
            writer.writerow([row.n, label, "", "", msg])
    return buf.getvalue()
