"""Monte Carlo play of the ring games, as an independent check.

Simulation never touches the transition matrices: each turn draws an
elementary event (which player, which coin face, which neighbor) from the
same enumeration the matrix builders use, so agreement between empirical
and exact moments cross-validates both routes.

Variance estimation uses non-overlapping batch means with batch size
``round(sqrt(n))``: the estimator is ``b * Var(batch means)``, which is
consistent for the asymptotic variance of the cumulative profit.  Turns
past the last full batch (at most b-1 of them) are excluded from batching
but still count toward the running mean.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chain import ChainTriple, _dense
from .games import _EVENT_FNS, SpatialParams

_CHUNK = 1 << 15

_LABELS = {"A": "A", "A_prime": "A'", "B": "B"}


@dataclass(frozen=True)
class Schedule:
    """What to play each turn: a single game, a coin mixture, or a cycle."""

    kind: str
    params: SpatialParams
    game: Optional[str] = None
    gamma: Optional[float] = None
    r: int = 0
    s: int = 0
    a_variant: str = "A_prime"

    @classmethod
    def pure(cls, params: SpatialParams, game: str) -> "Schedule":
        if game not in _EVENT_FNS:
            raise ValueError(f"unknown game {game!r}")
        return cls("pure", params, game=game)

    @classmethod
    def mixture(cls, params: SpatialParams, gamma: float, a_variant: str = "A_prime") -> "Schedule":
        if not 0.0 <= gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
        if a_variant not in ("A", "A_prime"):
            raise ValueError(f"a_variant must be 'A' or 'A_prime', got {a_variant!r}")
        return cls("mixture", params, gamma=float(gamma), a_variant=a_variant)

    @classmethod
    def pattern(cls, params: SpatialParams, r: int, s: int, a_variant: str = "A_prime") -> "Schedule":
        if r < 1 or s < 1:
            raise ValueError("pattern lengths r and s must both be >= 1")
        if a_variant not in ("A", "A_prime"):
            raise ValueError(f"a_variant must be 'A' or 'A_prime', got {a_variant!r}")
        return cls("pattern", params, r=int(r), s=int(s), a_variant=a_variant)

    @property
    def label(self) -> str:
        a = _LABELS.get(self.a_variant, "?")
        if self.kind == "pure":
            return _LABELS[self.game]
        if self.kind == "mixture":
            if self.gamma == 0.5:
                return f"({a}+B)/2"
            return f"{self.gamma:g}*{a} + {1 - self.gamma:g}*B"
        return a * self.r + "B" * self.s


@dataclass(frozen=True)
class TrajectorySummary:
    """One simulated trajectory, condensed for moment estimation.

    ``s_n`` is the cumulative collective profit after ``n`` turns (so
    ``|s_n| <= n`` for unit payoffs) and ``running_mean = s_n / n``.  Batch
    means cover the first ``batch_size * len(batch_means)`` turns; with the
    default ``batch_size = round(sqrt(n))`` up to batch_size-1 trailing
    turns fall outside the last full batch and are excluded from batching
    (they still count toward ``s_n``).
    """

    n: int
    s_n: float
    running_mean: float
    batch_size: int
    batch_means: np.ndarray
    seed: int

    def __post_init__(self):
        self.batch_means.setflags(write=False)
        if abs(self.s_n) > self.n:
            raise ValueError("cumulative profit cannot exceed the turn count")
        if self.batch_size * len(self.batch_means) > self.n:
            raise ValueError("batches cannot cover more turns than were played")

    @classmethod
    def from_payoffs(cls, payoffs, seed: int, batch_size: Optional[int] = None) -> "TrajectorySummary":
        n = int(payoffs.shape[0])
        total = float(payoffs.sum(dtype=np.float64))
        b = max(1, round(np.sqrt(n))) if batch_size is None else int(batch_size)
        if b < 1 or b > n:
            raise ValueError(f"batch size {b} out of range for {n} turns")
        k = n // b
        bm = payoffs[: k * b].astype(np.float64).reshape(k, b).mean(axis=1)
        return cls(n, total, total / n, b, bm, seed)


def _table_from_events(events) -> tuple:
    """Collapse an event list into (cumulative probs, targets, payoffs)."""
    probs = [float(e[0]) for e in events]
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    return (
        cum.tolist(),
        [int(e[1]) for e in events],
        [int(e[2]) for e in events],
    )


def _state_events(schedule: Schedule, state: int):
    """Elementary events (prob, target, payoff) out of one configuration."""
    params = schedule.params
    arr = np.array([state], dtype=np.int64)

    def game_events(game, scale):
        out = []
        for src, tgt, pr, payoff in _EVENT_FNS[game](params, arr):
            t = np.broadcast_to(tgt, (1,))
            p = np.broadcast_to(pr, (1,))
            out.append((scale * float(p[0]), int(t[0]), payoff))
        return out

    if schedule.kind == "pure":
        return {None: game_events(schedule.game, 1.0)}
    if schedule.kind == "mixture":
        return {
            None: game_events(schedule.a_variant, schedule.gamma)
            + game_events("B", 1.0 - schedule.gamma)
        }
    return {"a": game_events(schedule.a_variant, 1.0), "b": game_events("B", 1.0)}


def play(
    schedule: Schedule, n_turns: int, seed: int, batch_size: Optional[int] = None
) -> TrajectorySummary:
    """Simulate ``n_turns`` rounds from a uniformly drawn start configuration.

    One PCG64 stream (from ``seed``) drives the whole trajectory; event
    tables are built lazily per visited configuration.  ``batch_size``
    overrides the default round(sqrt(n)) batching of the summary.
    """
    if n_turns < 1:
        raise ValueError("n_turns must be positive")
    rng = np.random.default_rng(seed)
    state = int(rng.integers(0, 1 << schedule.params.n))
    payoffs = np.empty(n_turns, dtype=np.int8)

    period = schedule.r + schedule.s if schedule.kind == "pattern" else 1
    tables: dict = {}

    def table_for(state: int, phase_key):
        key = (state, phase_key)
        t = tables.get(key)
        if t is None:
            t = _table_from_events(_state_events(schedule, state)[phase_key])
            tables[key] = t
        return t

    pos = 0
    while pos < n_turns:
        chunk = rng.random(min(_CHUNK, n_turns - pos)).tolist()
        for u in chunk:
            if schedule.kind == "pattern":
                phase_key = "a" if (pos % period) < schedule.r else "b"
            else:
                phase_key = None
            cum, tgt, pay = table_for(state, phase_key)
            k = bisect.bisect_right(cum, u)
            payoffs[pos] = pay[k]
            state = tgt[k]
            pos += 1
    return TrajectorySummary.from_payoffs(payoffs, seed, batch_size)


def play_chain(chain: ChainTriple, n_turns: int, seed: int) -> TrajectorySummary:
    """Simulate a chain whose payoff is a function of the jump (i -> j).

    Requires ``Pdot = P * w`` and ``Pddot = P * w^2`` for a single payoff
    value per transition; the ring games do not satisfy this on their
    diagonal, use :func:`play` for them.
    """
    if n_turns < 1:
        raise ValueError("n_turns must be positive")
    p = _dense(chain.P)
    pdot = _dense(chain.Pdot)
    pddot = _dense(chain.Pddot)
    w = np.divide(pdot, p, out=np.zeros_like(p), where=p > 0)
    if np.abs(p * w * w - pddot).max() > 1e-9:
        raise ValueError("payoffs are not transition-determined on this chain")

    rows = []
    for i in range(chain.dim):
        cols = np.flatnonzero(p[i])
        cum = np.cumsum(p[i, cols])
        cum[-1] = 1.0
        rows.append((cum.tolist(), cols.tolist(), w[i, cols].tolist()))

    rng = np.random.default_rng(seed)
    state = int(rng.integers(0, chain.dim))
    payoffs = np.empty(n_turns, dtype=np.float64)
    pos = 0
    while pos < n_turns:
        chunk = rng.random(min(_CHUNK, n_turns - pos)).tolist()
        for u in chunk:
            cum, tgt, pay = rows[state]
            k = bisect.bisect_right(cum, u)
            payoffs[pos] = pay[k]
            state = tgt[k]
            pos += 1
    return TrajectorySummary.from_payoffs(payoffs, seed)


def empirical_moments(summary: TrajectorySummary) -> tuple:
    """(mean, variance, standard error) estimates from one trajectory.

    The variance estimator is ``batch_size * Var(batch means, ddof=1)``;
    the standard error of the mean is ``sqrt(variance / n)``.  Requires at
    least 10^4 turns so the batch count is meaningful.
    """
    if summary.n < 10_000:
        raise ValueError("need at least 1e4 turns for batch-mean estimates")
    sigma2 = float(summary.batch_size * np.var(summary.batch_means, ddof=1))
    stderr = float(np.sqrt(sigma2 / summary.n))
    return summary.running_mean, sigma2, stderr
