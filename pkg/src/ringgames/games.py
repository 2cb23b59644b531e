"""Spatial coin games on a ring of N players.

A configuration of the ring is a length-N word of 0/1 statuses packed into
an integer with player 1 in the most significant bit: configuration
``v = sum_x status(x) * 2**(N-x)``.  So for N=4, state 8 is ``1000``
(player 1 a winner, the rest losers) and rotating the ring one step toward
higher player numbers maps 8 to 4.

Each turn one player is drawn uniformly and plays a single coin flip:

* game ``A``: a fair coin, +1 on heads, -1 on tails; the player's status
  becomes winner/loser accordingly.
* game ``A'``: the chosen player picks a random neighbor and one unit moves
  between them at even odds; the receiving side becomes a winner, the
  paying side a loser, and the ring's collective profit is 0.
* game ``B``: the coin's heads probability ``p_m`` depends on the chosen
  player's two neighbors, ``m = 2*status(left) + status(right)``.

Builders return :class:`~ringgames.chain.ChainTriple` objects whose payoff
channels are accumulated event by event, so diagonal entries carry their
net signed weight even when several events share a transition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .chain import ChainTriple, StructuralError

MAX_PLAYERS = 24


@dataclass(frozen=True)
class SpatialParams:
    """Ring size and the four neighborhood-dependent heads probabilities.

    ``p[m]`` is the heads probability when the left/right neighbor statuses
    encode ``m = 2*left + right``; game A ignores ``p`` entirely.
    """

    n: int
    p: tuple

    def __post_init__(self):
        if not (3 <= self.n <= MAX_PLAYERS):
            raise ValueError(f"player count must be in [3, {MAX_PLAYERS}], got {self.n}")
        if len(self.p) != 4:
            raise ValueError("p must have exactly four entries (p0, p1, p2, p3)")
        p = tuple(float(v) for v in self.p)
        if any(v < 0.0 or v > 1.0 for v in p):
            raise ValueError("heads probabilities must lie in [0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> tuple:
        return tuple(1.0 - v for v in self.p)

    @property
    def symmetric(self) -> bool:
        """True when p1 == p2, i.e. mirroring the ring changes nothing."""
        return self.p[1] == self.p[2]


# -- bit helpers (player 1 = most significant bit) --------------------------


def player_status(state: int, x: int, n: int) -> int:
    """Status (0/1) of player ``x`` (1-based) in the packed configuration."""
    return (state >> (n - x)) & 1


def flip_player(state: int, x: int, n: int) -> int:
    return state ^ (1 << (n - x))


def neighborhood_index(state: int, x: int, n: int) -> int:
    """m = 2*status(left neighbor) + status(right neighbor), ring-wrapped."""
    if not 1 <= x <= n:
        raise ValueError(f"player index {x} out of range 1..{n}")
    left = x - 1 if x > 1 else n
    right = x + 1 if x < n else 1
    return 2 * player_status(state, left, n) + player_status(state, right, n)


def rotate(state: int, n: int) -> int:
    """Shift every status one player up the ring (player x -> x+1)."""
    return ((state >> 1) | ((state & 1) << (n - 1))) & ((1 << n) - 1)


def reflect(state: int, n: int) -> int:
    """Reverse the ring order (player x -> n+1-x)."""
    out = 0
    for x in range(n):
        out = (out << 1) | ((state >> x) & 1)
    return out


# -- event enumeration -------------------------------------------------------
#
# An event is (source, target, probability, payoff) for the whole ring in
# one turn.  Builders share this enumeration; the full chains use all 2^n
# sources, quotient chains only orbit representatives.


def _states_array(src) -> np.ndarray:
    return np.asarray(src, dtype=np.int64)


def _status_vec(states: np.ndarray, x: int, n: int) -> np.ndarray:
    return (states >> (n - x)) & 1


def _events_game_b(params: SpatialParams, states: np.ndarray) -> Iterator[tuple]:
    n = params.n
    p = np.asarray(params.p)
    q = 1.0 - p
    for x in range(1, n + 1):
        left = x - 1 if x > 1 else n
        right = x + 1 if x < n else 1
        m = 2 * _status_vec(states, left, n) + _status_vec(states, right, n)
        bit = _status_vec(states, x, n)
        flipped = states ^ (1 << (n - x))
        # heads: the player ends a winner; tails: ends a loser.
        win_target = np.where(bit == 0, flipped, states)
        loss_target = np.where(bit == 0, states, flipped)
        yield states, win_target, p[m] / n, 1.0
        yield states, loss_target, q[m] / n, -1.0


def _events_game_a(params: SpatialParams, states: np.ndarray) -> Iterator[tuple]:
    n = params.n
    half = np.full(states.shape, 0.5 / n)
    for x in range(1, n + 1):
        bit = _status_vec(states, x, n)
        flipped = states ^ (1 << (n - x))
        win_target = np.where(bit == 0, flipped, states)
        loss_target = np.where(bit == 0, states, flipped)
        yield states, win_target, half, 1.0
        yield states, loss_target, half, -1.0


def _events_game_a_prime(params: SpatialParams, states: np.ndarray) -> Iterator[tuple]:
    n = params.n
    quarter = np.full(states.shape, 0.25 / n)
    for x in range(1, n + 1):
        for side in (-1, +1):
            y = x + side
            y = n if y == 0 else (1 if y == n + 1 else y)
            for x_receives in (True, False):
                winner, loser = (x, y) if x_receives else (y, x)
                target = (states | (1 << (n - winner))) & ~np.int64(1 << (n - loser))
                yield states, target, quarter, 0.0


_EVENT_FNS = {
    "A": _events_game_a,
    "A_prime": _events_game_a_prime,
    "B": _events_game_b,
}


def _collect_events(game: str, params: SpatialParams, states: np.ndarray):
    if game not in _EVENT_FNS:
        raise ValueError(f"unknown game {game!r} (expected 'A', 'A_prime' or 'B')")
    rows, cols, prob, w = [], [], [], []
    for src, tgt, pr, payoff in _EVENT_FNS[game](params, states):
        rows.append(src)
        cols.append(np.broadcast_to(tgt, src.shape))
        prob.append(np.broadcast_to(pr, src.shape))
        w.append(np.full(src.shape, payoff))
    return (
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(prob),
        np.concatenate(w),
    )


def _build_full(game: str, params: SpatialParams) -> ChainTriple:
    dim = 1 << params.n
    states = np.arange(dim, dtype=np.int64)
    rows, cols, prob, w = _collect_events(game, params, states)
    return ChainTriple.from_events(dim, rows, cols, prob, w)


def build_game_a(params: SpatialParams) -> ChainTriple:
    """Fair-coin game on the full 2^n configuration space."""
    return _build_full("A", params)


def build_game_a_prime(params: SpatialParams) -> ChainTriple:
    """Neighbor-transfer game; collective profit is identically zero."""
    return _build_full("A_prime", params)


def build_game_b(params: SpatialParams) -> ChainTriple:
    """Neighborhood-dependent coin game on the full configuration space."""
    return _build_full("B", params)


def build_game(game: str, params: SpatialParams) -> ChainTriple:
    return _build_full(game, params)


def mix(gamma: float, chain_a: ChainTriple, chain_b: ChainTriple) -> ChainTriple:
    """Each turn play game a with probability gamma, else game b."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if chain_a.dim != chain_b.dim:
        raise ValueError("mixed games must share a state space")
    g = float(gamma)
    return ChainTriple.from_matrices(
        g * chain_a.P + (1.0 - g) * chain_b.P,
        g * chain_a.Pdot + (1.0 - g) * chain_b.Pdot,
        g * chain_a.Pddot + (1.0 - g) * chain_b.Pddot,
    )


# -- profit-augmented chains --------------------------------------------------


def profit_alphabet(gamma: Optional[float]) -> tuple:
    """Per-turn profit values: (-1, +1) for pure game B, else (-1, 0, +1)."""
    return (-1, 1) if gamma is None else (-1, 0, 1)


def aug_index(state: int, profit: int, n: int, gamma: Optional[float] = None) -> int:
    """Index of (configuration, last-turn profit) in the augmented space."""
    alphabet = profit_alphabet(gamma)
    return alphabet.index(profit) * (1 << n) + state


def build_augmented(params: SpatialParams, gamma: Optional[float] = None) -> ChainTriple:
    """Chain on (configuration, profit of the turn just played).

    ``gamma=None`` plays pure game B (profits -1/+1); otherwise each turn is
    game A' with probability gamma (profit 0) and game B with probability
    1-gamma.  The payoff channels read the profit component of the
    *destination* state, so means and variances computed from this chain
    must match the payoff-channel construction on the plain configuration
    space exactly.
    """
    n = params.n
    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    alphabet = profit_alphabet(gamma)
    t_pos = {t: i for i, t in enumerate(alphabet)}

    events = []
    for src, tgt, pr, payoff in _EVENT_FNS["B"](params, states):
        scale = 1.0 if gamma is None else (1.0 - float(gamma))
        events.append((src, np.broadcast_to(tgt, src.shape), scale * pr, payoff))
    if gamma is not None:
        for src, tgt, pr, payoff in _EVENT_FNS["A_prime"](params, states):
            events.append((src, np.broadcast_to(tgt, src.shape), float(gamma) * pr, payoff))

    rows, cols, prob, w = [], [], [], []
    for s_idx in range(len(alphabet)):
        for src, tgt, pr, payoff in events:
            rows.append(s_idx * dim + src)
            cols.append(t_pos[int(payoff)] * dim + tgt)
            prob.append(pr)
            w.append(np.full(src.shape, payoff))
    return ChainTriple.from_events(
        dim * len(alphabet),
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(prob),
        np.concatenate(w),
    )


def build_reduced(game: str, params: SpatialParams, qmap) -> ChainTriple:
    """Quotient chain built directly from orbit representatives.

    Row ``[eta]`` sums each event's probability into the orbit of its
    target; this equals lumping the full chain but never materializes the
    2^n-state matrices.  Game B admits the mirror-symmetric (dihedral)
    quotient only when p1 == p2.
    """
    if qmap.n != params.n:
        raise ValueError("quotient map and params disagree on ring size")
    if game == "B" and qmap.group == "dihedral" and not params.symmetric:
        raise StructuralError(
            "game B is not lumpable under reflections unless p1 == p2; use the cyclic quotient"
        )
    reps = _states_array(qmap.representative)
    rows, cols, prob, w = _collect_events(game, params, reps)
    return ChainTriple.from_events(
        qmap.n_classes, qmap.class_of[rows], qmap.class_of[cols], prob, w
    )
