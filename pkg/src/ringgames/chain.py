"""Finite Markov chain engine for long-run profit moments.

A game round is summarized by a :class:`ChainTriple`: the one-step
transition matrix ``P`` plus two aligned payoff channels.  ``Pdot`` holds,
entry by entry, the probability-weighted net profit of the elementary
events that realize each transition, and ``Pddot`` the probability-weighted
squared profit.  Long-run quantities are then plain linear algebra:

* mean profit per turn        ``mu = pi @ Pdot @ 1``
* asymptotic variance         ``pi @ Pddot @ 1 - mu^2 + 2 pi Pdot (Z - Pi) Pdot 1``

with ``pi`` the stationary row vector, ``Pi = 1 pi`` and ``Z`` the
fundamental matrix ``inv(I - P + Pi)``.  Periodic schedules that alternate
two triples (r rounds of one game, then s of another) have their own mean
and variance functionals below; those only ever need the stationary law of
the r+s step product.

Storage policy: triples with dimension <= ``DENSE_STORE_CAP`` keep dense
float64 arrays, larger ones CSR.  Direct (LU) solves are used up to
``DEFAULT_DENSE_CAP`` states; above that an iterated multiplication scheme
takes over.  All matrices are treated as immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.sparse.linalg import splu

DENSE_STORE_CAP = 64
DEFAULT_DENSE_CAP = 4096
DEFAULT_DENSE_TOL = 1e-12
DEFAULT_ITER_TOL = 1e-10
_VALIDATE_TOL = 1e-12


class StructuralError(RuntimeError):
    """The chain's structure rules out the requested computation."""


class SolverError(RuntimeError):
    """A numerical solve finished without meeting its tolerance."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


def _is_sparse(m) -> bool:
    return sp.issparse(m)


def _dense(m) -> np.ndarray:
    return m.toarray() if _is_sparse(m) else np.asarray(m, dtype=float)


def _rowsums(m) -> np.ndarray:
    return np.asarray(m.sum(axis=1)).ravel()


def _min_entry(m) -> float:
    if _is_sparse(m):
        return float(m.data.min()) if m.nnz else 0.0
    return float(m.min()) if m.size else 0.0


def _store(m, dim: int):
    """Apply the storage policy and freeze dense results."""
    if dim <= DENSE_STORE_CAP:
        a = _dense(m).copy()
        a.setflags(write=False)
        return a
    out = sp.csr_array(m)
    out.eliminate_zeros()
    out.sum_duplicates()
    return out


@dataclass(frozen=True, eq=False)
class ChainTriple:
    """Transition matrix with payoff and squared-payoff channels.

    Invariants checked at construction: ``P`` is row stochastic within
    1e-12, entries lie in [0, 1], and entrywise ``|Pdot| <= Pddot <= P``
    (which in particular confines both channels to the support of ``P``).
    """

    dim: int
    P: object
    Pdot: object
    Pddot: object

    def __post_init__(self):
        for name in ("P", "Pdot", "Pddot"):
            m = getattr(self, name)
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"{name} has shape {m.shape}, expected square of dim {self.dim}")
        rs = _rowsums(self.P)
        if np.max(np.abs(rs - 1.0)) > _VALIDATE_TOL:
            raise ValueError("P rows must sum to 1 within 1e-12")
        if _min_entry(self.P) < -_VALIDATE_TOL:
            raise ValueError("P has a negative entry")
        if _min_entry(self.P - self.Pddot) < -_VALIDATE_TOL:
            raise ValueError("Pddot exceeds P somewhere (payoffs must have |w| <= 1)")
        if _min_entry(self.Pddot - abs(self.Pdot)) < -_VALIDATE_TOL:
            raise ValueError("|Pdot| exceeds Pddot somewhere")

    @property
    def is_sparse(self) -> bool:
        return _is_sparse(self.P)

    @classmethod
    def from_matrices(cls, P, Pdot=None, Pddot=None) -> "ChainTriple":
        """Wrap prebuilt matrices; missing channels default to zero."""
        dim = P.shape[0]
        if Pdot is None:
            Pdot = sp.csr_array((dim, dim)) if _is_sparse(P) else np.zeros((dim, dim))
        if Pddot is None:
            Pddot = sp.csr_array((dim, dim)) if _is_sparse(P) else np.zeros((dim, dim))
        return cls(dim, _store(P, dim), _store(Pdot, dim), _store(Pddot, dim))

    @classmethod
    def from_events(cls, dim: int, rows, cols, prob, payoff) -> "ChainTriple":
        """Assemble from elementary events (duplicates accumulate).

        Each event contributes ``prob`` to ``P[row, col]``, ``prob*payoff``
        to ``Pdot`` and ``prob*payoff**2`` to ``Pddot``.
        """
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        prob = np.asarray(prob, dtype=float)
        w = np.asarray(payoff, dtype=float)
        shape = (dim, dim)
        p = sp.coo_array((prob, (rows, cols)), shape=shape).tocsr()
        pdot = sp.coo_array((prob * w, (rows, cols)), shape=shape).tocsr()
        pddot = sp.coo_array((prob * w * w, (rows, cols)), shape=shape).tocsr()
        return cls(dim, _store(p, dim), _store(pdot, dim), _store(pddot, dim))

    def payoff_rowsums(self) -> np.ndarray:
        return _rowsums(self.Pdot)

    def squared_rowsums(self) -> np.ndarray:
        return _rowsums(self.Pddot)


@dataclass(frozen=True)
class StationaryDistribution:
    """Stationary row vector with the solve's final residual max|pi P - pi|."""

    pi: np.ndarray
    residual: float
    method: str

    def __post_init__(self):
        self.pi.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.pi.shape[0]


@dataclass(frozen=True)
class MomentResult:
    """Mean/variance of per-turn profit with solver diagnostics."""

    mu: float
    sigma2: float
    method: str
    reduced_dim: int
    residual: float


@dataclass(frozen=True)
class ErgodicityReport:
    irreducible: bool
    aperiodic: bool
    closed_classes: int
    transient_states: np.ndarray
    periods: tuple

    @property
    def ergodic(self) -> bool:
        """Single closed class and aperiodic (transient states allowed)."""
        return self.closed_classes == 1 and self.aperiodic


def _support(m) -> sp.csr_array:
    if _is_sparse(m):
        s = m.tocsr().copy()
        s.eliminate_zeros()
        return sp.csr_array((np.ones_like(s.data), s.indices, s.indptr), shape=s.shape)
    r, c = np.nonzero(m)
    return sp.csr_array((np.ones(r.size), (r, c)), shape=m.shape)


def _closed_class_info(support: sp.csr_array):
    """Return (number of closed classes, component labels, closed mask)."""
    n_comp, comp = csgraph.connected_components(support, directed=True, connection="strong")
    coo = support.tocoo()
    open_comp = np.zeros(n_comp, dtype=bool)
    cross = comp[coo.row] != comp[coo.col]
    np.logical_or.at(open_comp, comp[coo.row[cross]], True)
    closed = ~open_comp
    return int(closed.sum()), comp, closed


def _class_period(support: sp.csr_array, members: np.ndarray) -> int:
    sub = support[members][:, members].tocsr()
    dist = csgraph.shortest_path(sub, method="D", unweighted=True, indices=0)
    coo = sub.tocoo()
    vals = np.abs(dist[coo.row] + 1 - dist[coo.col]).astype(np.int64)
    g = int(np.gcd.reduce(vals)) if vals.size else 0
    return g if g > 0 else 1


def ergodicity_check(chain: ChainTriple) -> ErgodicityReport:
    """Classify the chain: closed classes, transient states, periodicity.

    A chain is ergodic for our purposes when it has exactly one closed
    class and that class is aperiodic; states outside the closed class are
    transient and receive zero stationary mass.
    """
    support = _support(chain.P)
    n_closed, comp, closed = _closed_class_info(support)
    transient = np.flatnonzero(~closed[comp])
    periods = []
    for label in np.flatnonzero(closed):
        members = np.flatnonzero(comp == label)
        periods.append(_class_period(support, members))
    return ErgodicityReport(
        irreducible=(comp.max(initial=0) == 0 and transient.size == 0),
        aperiodic=all(p == 1 for p in periods),
        closed_classes=n_closed,
        transient_states=transient,
        periods=tuple(periods),
    )


def _stationary_dense(p_dense: np.ndarray, tol: float):
    """Solve pi (P - I) = 0 with a normalization row replacing one equation."""
    dim = p_dense.shape[0]
    a = p_dense.T - np.eye(dim)
    a[-1, :] = 1.0
    b = np.zeros(dim)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        stacked = np.vstack([p_dense.T - np.eye(dim), np.ones((1, dim))])
        rhs = np.zeros(dim + 1)
        rhs[-1] = 1.0
        pi = np.linalg.lstsq(stacked, rhs, rcond=None)[0]
    pi = np.where(np.abs(pi) < 1e-14, 0.0, pi)
    if pi.min() < -1e-9:
        raise SolverError("stationary solve produced negative mass", float(pi.min()))
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    residual = float(np.max(np.abs(pi @ p_dense - pi)))
    if residual > tol:
        raise SolverError(f"stationary residual {residual:.3e} exceeds {tol:.1e}", residual)
    return pi, residual


def _stationary_power(apply_right, dim: int, tol: float, maxiter: int, starts: int = 1):
    """Damped power iteration x <- (x + x P)/2 from one or two starts.

    With two starts the results must agree, which certifies uniqueness of
    the stationary law when no structural check ran on the (implicit)
    transition matrix.
    """
    rng = np.random.default_rng(0x5EED)
    results = []
    for k in range(starts):
        if k == 0:
            x = np.full(dim, 1.0 / dim)
        else:
            x = rng.random(dim) + 0.5
            x /= x.sum()
        residual = np.inf
        for _ in range(maxiter):
            xp = apply_right(x)
            residual = float(np.max(np.abs(xp - x)))
            x = 0.5 * (x + xp)
            x /= x.sum()
            if residual <= tol:
                break
        if residual > tol:
            raise SolverError(
                f"power iteration stalled at residual {residual:.3e} (tol {tol:.1e})",
                residual,
            )
        results.append(x)
    if starts > 1:
        gap = float(np.max(np.abs(results[0] - results[1])))
        if gap > max(100.0 * tol, 1e-8):
            raise StructuralError(
                f"independent iteration starts disagree by {gap:.3e}; "
                "the chain likely has more than one closed class"
            )
    pi = np.clip(results[0], 0.0, None)
    pi /= pi.sum()
    return pi, residual


def stationary_distribution(
    chain: ChainTriple,
    tol: Optional[float] = None,
    *,
    dense_cap: int = DEFAULT_DENSE_CAP,
    maxiter: int = 500_000,
) -> StationaryDistribution:
    """Stationary row vector of ``chain.P``.

    Parameters
    ----------
    chain : ChainTriple
    tol : float, optional
        Residual target for max|pi P - pi|.  Defaults to 1e-12 for direct
        solves (dim <= dense_cap) and 1e-10 for the iterative path.
    dense_cap : int
        Largest dimension solved by dense LU.

    Raises
    ------
    StructuralError
        If the chain has zero or several closed communicating classes.
    SolverError
        If the residual target is not met.
    """
    n_closed, _, _ = _closed_class_info(_support(chain.P))
    if n_closed != 1:
        raise StructuralError(
            f"chain has {n_closed} closed classes; the stationary law is not unique"
        )
    if chain.dim <= dense_cap:
        pi, residual = _stationary_dense(_dense(chain.P), DEFAULT_DENSE_TOL if tol is None else tol)
        return StationaryDistribution(pi, residual, "dense-lu")
    P = chain.P
    pi, residual = _stationary_power(
        lambda x: x @ P, chain.dim, DEFAULT_ITER_TOL if tol is None else tol, maxiter
    )
    return StationaryDistribution(pi, residual, "power")


def fundamental_matrix(
    chain: ChainTriple,
    pi: StationaryDistribution,
    *,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> np.ndarray:
    """Dense ``Z = inv(I - P + Pi)`` with ``Pi = 1 pi`` (rank-one).

    Only available up to ``dense_cap`` states; larger chains should use the
    linear-solve variance path, which never materializes Z.
    """
    if chain.dim > dense_cap:
        raise ValueError(f"fundamental matrix is dense-only (dim {chain.dim} > cap {dense_cap})")
    if pi.dim != chain.dim:
        raise ValueError("stationary vector dimension does not match chain")
    p = _dense(chain.P)
    a = np.eye(chain.dim) - p + np.outer(np.ones(chain.dim), pi.pi)
    try:
        return np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise StructuralError(f"I - P + Pi is singular: {exc}") from exc


def mean_mu(chain: ChainTriple, pi: StationaryDistribution) -> float:
    """Long-run mean profit per turn, ``pi @ Pdot @ 1``."""
    if pi.dim != chain.dim:
        raise ValueError("stationary vector dimension does not match chain")
    return float(pi.pi @ chain.payoff_rowsums())


def _zterm_dense(chain: ChainTriple, pi: StationaryDistribution, d: np.ndarray, mu: float) -> float:
    z = fundamental_matrix(chain, pi)
    left = pi.pi @ _dense(chain.Pdot)
    right = z @ d - mu
    return 2.0 * float(left @ right)


def _zterm_linear(chain: ChainTriple, pi: StationaryDistribution, d: np.ndarray, mu: float) -> float:
    """Solve (I - P + Pi) x = d by LU with one row pinned to pi.

    Replacing the row of largest stationary mass by pi and the matching
    right-hand entry by mu = pi.d yields exactly x = Z d when the chain has
    a unique closed class.
    """
    dim = chain.dim
    k = int(np.argmax(pi.pi))
    rhs = d - mu
    rhs[k] = mu
    if chain.is_sparse:
        a = (sp.eye_array(dim, format="csr") - chain.P).tolil()
        a[k, :] = pi.pi
        x = splu(a.tocsc()).solve(rhs)
    else:
        a = np.eye(dim) - _dense(chain.P)
        a[k, :] = pi.pi
        x = np.linalg.solve(a, rhs)
    resid = float(np.max(np.abs((x - chain.P @ x + np.dot(pi.pi, x)) - d)))
    if resid > 1e-8:
        raise SolverError(f"fundamental linear solve residual {resid:.3e}", resid)
    left = pi.pi @ chain.Pdot
    return 2.0 * float(left @ (x - mu))


def variance_sigma2(
    chain: ChainTriple,
    pi: StationaryDistribution,
    *,
    method: str = "auto",
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> float:
    """Asymptotic variance per turn of the cumulative profit.

    ``pi Pddot 1 - mu^2 + 2 pi Pdot (Z - Pi) Pdot 1``.  ``method`` picks how
    the fundamental-matrix term is evaluated: ``"dense-inverse"`` builds Z
    explicitly, ``"linear-solve"`` solves one linear system instead, and
    ``"auto"`` chooses by size.  Both must agree within 1e-9.
    """
    if method not in ("auto", "dense-inverse", "linear-solve"):
        raise ValueError(f"unknown method {method!r}")
    if pi.dim != chain.dim:
        raise ValueError("stationary vector dimension does not match chain")
    d = chain.payoff_rowsums()
    mu = float(pi.pi @ d)
    base = float(pi.pi @ chain.squared_rowsums()) - mu * mu
    if method == "auto":
        method = "dense-inverse" if chain.dim <= dense_cap else "linear-solve"
    if method == "dense-inverse":
        zterm = _zterm_dense(chain, pi, d, mu)
    else:
        zterm = _zterm_linear(chain, pi, d, mu)
    sigma2 = base + zterm
    if sigma2 < -1e-9:
        raise SolverError(f"variance came out negative ({sigma2:.3e})", sigma2)
    return float(sigma2)


def moments(
    chain: ChainTriple,
    tol: Optional[float] = None,
    *,
    method: str = "auto",
    with_variance: bool = True,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> MomentResult:
    """Convenience wrapper: stationary solve plus both profit moments."""
    pi = stationary_distribution(chain, tol, dense_cap=dense_cap)
    mu = mean_mu(chain, pi)
    sigma2 = float("nan")
    used = "none"
    if with_variance:
        used = method
        if used == "auto":
            used = "dense-inverse" if chain.dim <= dense_cap else "linear-solve"
        sigma2 = variance_sigma2(chain, pi, method=used, dense_cap=dense_cap)
    return MomentResult(mu, sigma2, used, chain.dim, pi.residual)


# ---------------------------------------------------------------------------
# Periodic schedules: r rounds of game "a" then s rounds of game "b".
# ---------------------------------------------------------------------------


def _word_triples(chain_a: ChainTriple, chain_b: ChainTriple, r: int, s: int):
    if chain_a.dim != chain_b.dim:
        raise ValueError("pattern games must share a state space")
    if not (isinstance(r, (int, np.integer)) and isinstance(s, (int, np.integer))):
        raise ValueError("pattern lengths must be integers")
    if r < 1 or s < 1:
        raise ValueError("pattern lengths r and s must both be >= 1")
    return [chain_a] * int(r) + [chain_b] * int(s)


def _product_dense(word) -> np.ndarray:
    m = _dense(word[0].P)
    for t in word[1:]:
        m = m @ _dense(t.P)
    return m


def _check_word_ergodic(word, dense_cap: int):
    """Ergodicity pre-check on the one-period product.

    All cyclic rotations of the product share their nonzero spectrum (for
    matrices X, Y: XY and YX have equal nonzero eigenvalue structure), so a
    unique aperiodic closed class for the rotation starting at position 0
    implies the same for every rotation.  Above the dense cap the check is
    skipped here; the two-start iterative solve certifies uniqueness.
    """
    dim = word[0].dim
    if dim > dense_cap:
        return None
    m = _product_dense(word)
    support = _support(m)
    n_closed, comp, closed = _closed_class_info(support)
    if n_closed != 1:
        raise StructuralError(
            f"one-period product has {n_closed} closed classes "
            "(shared by every cyclic rotation of the schedule)"
        )
    label = int(np.flatnonzero(closed)[0])
    members = np.flatnonzero(comp == label)
    if _class_period(support, members) != 1:
        raise StructuralError(
            "one-period product is periodic (shared by every cyclic rotation of the schedule)"
        )
    return m


def _pattern_stationary(word, tol: Optional[float], dense_cap: int, maxiter: int = 500_000):
    """Stationary law at period boundaries of the cyclic word product."""
    dim = word[0].dim
    product = _check_word_ergodic(word, dense_cap)
    if product is not None:
        pi, residual = _stationary_dense(product, DEFAULT_DENSE_TOL if tol is None else tol)
        return pi, residual, product

    def apply_right(x):
        for t in word:
            x = x @ t.P
        return x

    pi, residual = _stationary_power(
        apply_right, dim, DEFAULT_ITER_TOL if tol is None else tol, maxiter, starts=2
    )
    return pi, residual, None


def pattern_mean(
    chain_a: ChainTriple,
    chain_b: ChainTriple,
    r: int,
    s: int,
    *,
    tol: Optional[float] = None,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> float:
    """Mean profit per turn of the periodic schedule a^r b^s.

    Averages the one-step means over one period, each taken in the phase
    law reached at that point of the cycle:
    ``(1/(r+s)) * sum_u pi P(0..u) Pdot_u 1``.
    """
    word = _word_triples(chain_a, chain_b, r, s)
    pi, _, _ = _pattern_stationary(word, tol, dense_cap)
    x = pi
    total = 0.0
    for t in word:
        total += float(x @ t.payoff_rowsums())
        x = x @ t.P
    return total / len(word)


def _phase_vectors(word, pi):
    """Row vectors x_u = pi P_0 ... P_{u-1} for u = 0..len(word)-1."""
    xs = [pi]
    for t in word[:-1]:
        xs.append(xs[-1] @ t.P)
    return xs


def pattern_variance(
    chain_a: ChainTriple,
    chain_b: ChainTriple,
    r: int,
    s: int,
    *,
    tol: Optional[float] = None,
    formula: str = "auto",
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> float:
    """Asymptotic variance per turn of the periodic schedule a^r b^s.

    Two implementations are kept deliberately separate:

    * ``"general"`` accumulates every within-period covariance term plus
      the cross-period term through the product chain's fundamental
      matrix.
    * ``"zero-a"`` is the shortcut valid when game a moves no money at all
      (both payoff channels identically zero), where only the b-phase
      terms survive.

    ``"auto"`` picks ``"zero-a"`` when it applies.  Both paths agree within
    1e-10 whenever both apply.
    """
    if formula not in ("auto", "general", "zero-a"):
        raise ValueError(f"unknown formula {formula!r}")
    word = _word_triples(chain_a, chain_b, r, s)
    a_moves_money = _channel_nonzero(chain_a)
    if formula == "auto":
        formula = "zero-a" if not a_moves_money else "general"
    if formula == "zero-a" and a_moves_money:
        raise ValueError("zero-a formula requires game a to have zero payoff channels")
    pi, residual, product = _pattern_stationary(word, tol, dense_cap)
    period = len(word)

    xs = _phase_vectors(word, pi)
    d = [t.payoff_rowsums() for t in word]
    dd = [t.squared_rowsums() for t in word]
    alphas = [float(xs[u] @ d[u]) for u in range(period)]

    # Phases before lo contribute nothing when game a moves no money.
    lo = int(r) if formula == "zero-a" else 0

    # Same-step second moments minus squared phase means.
    total = 0.0
    for u in range(lo, period):
        total += float(xs[u] @ dd[u]) - alphas[u] ** 2

    # Cross terms within one period, 2 * sum_{u<v} of
    # x_u Pdot_u P(u+1..v-1) Pdot_v 1 - alpha_u alpha_v; the running y ends
    # as the wrap vector x_u Pdot_u P(u+1..period-1) that feeds Lstar.
    lstar = np.zeros(chain_a.dim)
    for u in range(lo, period):
        y = xs[u] @ word[u].Pdot
        for v in range(u + 1, period):
            total += 2.0 * (float(y @ d[v]) - alphas[u] * alphas[v])
            y = y @ word[v].P
        lstar += y

    # Cross-period covariance through the fundamental matrix of the
    # one-period product: 2 * Lstar (Z - Pi) Rstar with
    #   Rstar = sum_v P(0..v-1) Pdot_v 1.
    rstar = np.zeros(chain_a.dim)
    for v in range(lo, period):
        col = d[v]
        for u in range(v - 1, -1, -1):
            col = word[u].P @ col
        rstar += col

    mu_period = sum(alphas)
    if product is not None:
        z = _fundamental_dense(product, pi)
        zr = z @ rstar
    else:
        zr = _solve_fundamental_iterative(word, pi, rstar, tol)
    total += 2.0 * (float(lstar @ zr) - mu_period * float(pi @ rstar))

    sigma2 = total / period
    if sigma2 < -1e-9:
        raise SolverError(f"pattern variance came out negative ({sigma2:.3e})", sigma2)
    return float(sigma2)


def _channel_nonzero(chain: ChainTriple) -> bool:
    if chain.is_sparse:
        return (chain.Pdot.nnz and np.any(chain.Pdot.data)) or (
            chain.Pddot.nnz and np.any(chain.Pddot.data)
        )
    return bool(np.any(chain.Pdot)) or bool(np.any(chain.Pddot))


def _fundamental_dense(p_dense: np.ndarray, pi: np.ndarray) -> np.ndarray:
    dim = p_dense.shape[0]
    a = np.eye(dim) - p_dense + np.outer(np.ones(dim), pi)
    try:
        return np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise StructuralError(f"I - P + Pi is singular: {exc}") from exc


def _solve_fundamental_iterative(word, pi, b: np.ndarray, tol: Optional[float], maxiter: int = 500_000):
    """Richardson iteration for (I - P + Pi) x = b with implicit product P."""
    target = DEFAULT_ITER_TOL if tol is None else tol

    def apply_p(x):
        for t in reversed(word):
            x = t.P @ x
        return x

    x = b.copy()
    for _ in range(maxiter):
        px = apply_p(x)
        x_new = b + px - np.dot(pi, x)
        delta = float(np.max(np.abs(x_new - x)))
        x = x_new
        if delta <= target:
            return x
    raise SolverError(f"fundamental solve stalled at delta {delta:.3e}", delta)


# ---------------------------------------------------------------------------
# Small capital-level fixtures (three states, transition-determined payoffs).
# ---------------------------------------------------------------------------

_FIXTURE_PB = np.array(
    [
        [0.0, 1.0 / 10.0, 9.0 / 10.0],
        [1.0 / 4.0, 0.0, 3.0 / 4.0],
        [3.0 / 4.0, 1.0 / 4.0, 0.0],
    ]
)
_FIXTURE_W = np.array(
    [
        [0.0, 1.0, -1.0],
        [-1.0, 0.0, 1.0],
        [1.0, -1.0, 0.0],
    ]
)
_FIXTURE_PA = np.array(
    [
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [0.5, 0.5, 0.0],
    ]
)


def capital_dependent_fixture(kind: str) -> ChainTriple:
    """Three-state fixtures where the payoff is +1 up, -1 down (mod 3).

    ``kind``: ``"A"`` the fair-coin game, ``"B"`` the capital-dependent
    game, ``"C_half"`` (alias ``"C"``) their half-half mixture.
    """
    if kind == "A":
        p = _FIXTURE_PA
    elif kind == "B":
        p = _FIXTURE_PB
    elif kind in ("C_half", "C"):
        p = 0.5 * _FIXTURE_PA + 0.5 * _FIXTURE_PB
    else:
        raise ValueError(f"unknown fixture kind {kind!r} (expected 'A', 'B' or 'C_half')")
    pdot = p * _FIXTURE_W
    pddot = p * _FIXTURE_W * _FIXTURE_W
    return ChainTriple.from_matrices(p, pdot, pddot)
