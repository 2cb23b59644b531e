"""Orbit quotients of ring configurations under rotation (and reflection).

The ring games commute with relabeling players by a rotation, and with a
mirror flip when the two neighbor roles carry equal coin parameters.  The
2^n configurations then split into orbits; a chain that is constant on
orbit rows can be lumped to one state per orbit, which is what makes
n = 18 rings tractable.

Orbits are canonically represented by their smallest member and ordered by
(number of winners, representative value), so class 0 is always the
all-losers configuration and the last class the all-winners one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .chain import ChainTriple, StationaryDistribution, StructuralError, _dense, _is_sparse, _store

GROUPS = ("cyclic", "dihedral")


@dataclass(frozen=True)
class QuotientMap:
    """Assignment of every configuration to its symmetry orbit.

    ``class_of[v]`` is the orbit index of configuration ``v``;
    ``representative[k]`` the smallest member of orbit ``k`` and
    ``class_size[k]`` its cardinality.
    """

    n: int
    group: str
    class_of: np.ndarray
    representative: np.ndarray
    class_size: np.ndarray

    def __post_init__(self):
        for arr in (self.class_of, self.representative, self.class_size):
            arr.setflags(write=False)

    @property
    def n_classes(self) -> int:
        return self.representative.shape[0]


def _rotations_table(n: int) -> np.ndarray:
    """rot[v] = configuration with every status moved one player up."""
    v = np.arange(1 << n, dtype=np.int64)
    return ((v >> 1) | ((v & 1) << (n - 1))) & ((1 << n) - 1)


def _reflection_table(n: int) -> np.ndarray:
    v = np.arange(1 << n, dtype=np.int64)
    out = np.zeros_like(v)
    for x in range(n):
        out = (out << 1) | ((v >> x) & 1)
    return out


def orbits(n: int, group: str = "cyclic") -> QuotientMap:
    """Partition all 2^n configurations into rotation (or dihedral) orbits."""
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    if not 3 <= n <= 24:
        raise ValueError(f"ring size out of range: {n}")
    dim = 1 << n
    v = np.arange(dim, dtype=np.int64)
    canon = v.copy()
    rot = _rotations_table(n)
    cur = v
    for _ in range(n - 1):
        cur = rot[cur]
        np.minimum(canon, cur, out=canon)
    if group == "dihedral":
        refl = _reflection_table(n)
        cur = refl
        np.minimum(canon, cur, out=canon)
        for _ in range(n - 1):
            cur = rot[cur]
            np.minimum(canon, cur, out=canon)

    reps, inverse, sizes = np.unique(canon, return_inverse=True, return_counts=True)
    ones = np.array([int(r).bit_count() for r in reps])
    order = np.lexsort((reps, ones))
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return QuotientMap(
        n=n,
        group=group,
        class_of=rank[inverse].astype(np.int64),
        representative=reps[order],
        class_size=sizes[order].astype(np.int64),
    )


def necklace_count(n: int, group: str = "cyclic") -> int:
    """Number of orbits of binary rings of length n (Burnside count).

    Averages fixed-point counts over the group: a rotation by k fixes
    2^gcd(n,k) rings; a reflection fixes 2^((n+1)//2) rings for odd n,
    and either 2^(n/2+1) (axis through two players) or 2^(n/2) (axis
    between players) for even n.
    """
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    if n < 1:
        raise ValueError(f"ring size must be positive, got {n}")
    total = sum(2 ** math.gcd(n, k) for k in range(n))
    if group == "cyclic":
        return total // n
    if n % 2:
        refl = n * 2 ** ((n + 1) // 2)
    else:
        refl = (n // 2) * (2 ** (n // 2 + 1) + 2 ** (n // 2))
    return (total + refl) // (2 * n)


def _indicator(qmap: QuotientMap) -> sp.csr_array:
    dim = 1 << qmap.n
    return sp.csr_array(
        (np.ones(dim), (np.arange(dim), qmap.class_of)), shape=(dim, qmap.n_classes)
    )


def check_g_invariance(chain: ChainTriple, qmap: QuotientMap, tol: float = 1e-12) -> bool:
    """Is P invariant under the group generators (P[g i, g j] == P[i, j])?"""
    perms = [_rotations_table(qmap.n)]
    if qmap.group == "dihedral":
        perms.append(_reflection_table(qmap.n))
    for m in (chain.P, chain.Pdot, chain.Pddot):
        md = _dense(m) if chain.dim <= 4096 else m
        for perm in perms:
            if _is_sparse(md):
                diff = (md[perm][:, perm] - md)
                err = np.abs(diff.data).max() if diff.nnz else 0.0
            else:
                err = np.abs(md[np.ix_(perm, perm)] - md).max()
            if err > tol:
                return False
    return True


def check_lumpability(chain: ChainTriple, qmap: QuotientMap, tol: float = 1e-12) -> bool:
    """Orbit-row-sum test: P @ C must be constant within each orbit's rows."""
    c = _indicator(qmap)
    for m in (chain.P, chain.Pdot, chain.Pddot):
        block = m @ c
        block = _dense(block)
        ref = block[qmap.representative[qmap.class_of]]
        if np.abs(block - ref).max() > tol:
            return False
    return True


def lump(chain: ChainTriple, qmap: QuotientMap, tol: float = 1e-12) -> ChainTriple:
    """Quotient chain with one state per orbit (rows taken at representatives)."""
    if chain.dim != (1 << qmap.n):
        raise ValueError("chain dimension does not match the quotient map")
    if not check_lumpability(chain, qmap, tol):
        raise StructuralError(
            "chain is not lumpable under this quotient (orbit row sums differ)"
        )
    c = _indicator(qmap)
    reps = qmap.representative
    k = qmap.n_classes

    def reduce_m(m):
        rows = m[reps] if _is_sparse(m) else m[reps, :]
        return _store(rows @ c, k)

    return ChainTriple(k, reduce_m(chain.P), reduce_m(chain.Pdot), reduce_m(chain.Pddot))


def lift_stationary(pi_bar: StationaryDistribution, qmap: QuotientMap) -> StationaryDistribution:
    """Spread each orbit's stationary mass uniformly over its members."""
    if pi_bar.dim != qmap.n_classes:
        raise ValueError("stationary vector does not match the quotient map")
    per_state = pi_bar.pi / qmap.class_size
    return StationaryDistribution(
        per_state[qmap.class_of].copy(), pi_bar.residual, pi_bar.method + "+lift"
    )
