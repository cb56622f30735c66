"""Double cosets, bi-invariant projection and the double-coset hypergroup."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .hypergroup import (
    DEFAULT_TOL,
    FiniteHypergroup,
    HypergroupError,
    StructuralError,
    is_subhypergroup,
    require_valid,
    validate_axioms,
)


class NotSubhypergroupError(HypergroupError):
    pass


class QuotientConsistencyError(HypergroupError):
    pass


class BiInvarianceError(HypergroupError):
    pass


@dataclass(frozen=True)
class DoubleCosetPartition:
    blocks: tuple  # sorted index tuples; block 0 is K, the rest ordered by lowest index
    block_of: tuple

    @property
    def representatives(self) -> tuple:
        return tuple(block[0] for block in self.blocks)

    @property
    def m(self) -> int:
        return len(self.blocks)

    def indicator_matrix(self) -> np.ndarray:
        """``B[x, a] = 1`` iff ``x`` lies in block ``a``."""
        B = np.zeros((len(self.block_of), self.m))
        B[np.arange(len(self.block_of)), self.block_of] = 1.0
        return B

    def expand(self, block_values) -> np.ndarray:
        """Extend a function on blocks to G by constancy."""
        return np.asarray(block_values)[list(self.block_of)]


@dataclass(frozen=True, eq=False)
class GelfandPair:
    G: FiniteHypergroup
    K: tuple
    partition: DoubleCosetPartition
    quotient: FiniteHypergroup
    omega_K: np.ndarray  # normalized Haar weights of K, indexed like K
    projector: np.ndarray  # f -> f^natural as an n x n matrix

    @property
    def m(self) -> int:
        return self.partition.m

    @property
    def block_haar(self) -> np.ndarray:
        """Summed G-Haar weight of each block."""
        return self.partition.indicator_matrix().T @ self.G.haar

    def block_labels(self) -> list[list[str]]:
        return [[self.G.labels[x] for x in block] for block in self.partition.blocks]

    def is_biinvariant(self, f, tol: float = 1e-9) -> bool:
        return biinvariance_residual(self, f) <= tol


def _k_measure(G: FiniteHypergroup, K) -> np.ndarray:
    omega = np.zeros(G.n)
    omega[list(K)] = G.haar[list(K)]
    return omega / omega.sum()


def _triple_support(G: FiniteHypergroup, x: int, K, tol: float) -> set:
    # union over k1, k2 in K of supp(delta_k1 * delta_x * delta_k2)
    left = G.c[list(K), x, :].sum(axis=0)  # mass of sum_k1 delta_k1 * delta_x
    both = np.tensordot(left, G.c[:, list(K), :].sum(axis=1), axes=(0, 0))
    return set(int(z) for z in np.flatnonzero(both > tol))


def double_cosets(G: FiniteHypergroup, K: Iterable[int], tol: float = 1e-12) -> DoubleCosetPartition:
    K = sorted(set(int(k) for k in K))
    if not K or not is_subhypergroup(G, K, tol):
        raise NotSubhypergroupError(f"{[G.labels[k] for k in K]} is not a subhypergroup")
    if G.e not in K:
        raise NotSubhypergroupError("subhypergroup must contain the neutral element")
    cosets = {x: _triple_support(G, x, K, tol) for x in range(G.n)}
    block_of = [-1] * G.n
    blocks = []
    for x in [G.e] + [y for y in range(G.n) if y != G.e]:
        if block_of[x] >= 0:
            continue
        # closure: a block is the smallest set containing x and stable under K.K
        block, frontier = set(), {x}
        while frontier:
            y = frontier.pop()
            block.add(y)
            frontier |= cosets[y] - block
        if any(block_of[y] >= 0 for y in block):
            raise QuotientConsistencyError("double cosets do not partition G")
        for y in block:
            block_of[y] = len(blocks)
        blocks.append(tuple(sorted(block)))
    # every coset must equal the block of any of its members
    for x in range(G.n):
        if cosets[x] != set(blocks[block_of[x]]):
            raise QuotientConsistencyError(f"double coset of {G.labels[x]} is not a block")
    if blocks[block_of[G.e]] != tuple(K):
        raise QuotientConsistencyError("the double coset of e is not K")
    return DoubleCosetPartition(tuple(blocks), tuple(block_of))


def projection_matrix(G: FiniteHypergroup, K, omega: np.ndarray) -> np.ndarray:
    """``P`` with ``(P f)(x) = sum omega(k1) omega(k2) (delta_k1 * delta_x * delta_k2)(f)``."""
    # left-to-right: (omega * delta_x) then * omega
    left = np.einsum("k,kxz->xz", omega, G.c)
    return np.einsum("xu,uvz,v->xz", left, G.c, omega)


def biinvariant_project(pair: GelfandPair, f) -> np.ndarray:
    f = np.asarray(f)
    if f.shape != (pair.G.n,):
        raise StructuralError(f"function must have length {pair.G.n}")
    return pair.projector @ f


def biinvariance_residual(pair: GelfandPair, f) -> float:
    """Largest deviation of ``f`` from constancy on double cosets."""
    f = np.asarray(f)
    return max(float(np.ptp(f[list(block)].real) + np.ptp(f[list(block)].imag))
               for block in pair.partition.blocks)


def block_measures(G: FiniteHypergroup, partition: DoubleCosetPartition) -> np.ndarray:
    """Row ``a`` is the Haar-proportional probability measure on block ``a``."""
    W = partition.indicator_matrix().T * G.haar[None, :]
    return W / W.sum(axis=1, keepdims=True)


def _exact_quotient(G: FiniteHypergroup, partition: DoubleCosetPartition):
    if G.c_exact is None or G.haar_exact is None:
        return None
    m = partition.m
    weights = []
    for block in partition.blocks:
        total = sum(G.haar_exact[x] for x in block)
        weights.append({x: G.haar_exact[x] / total for x in block})
    cq = np.empty((m, m, m), dtype=object)
    cq.fill(Fraction(0))
    for a in range(m):
        for b in range(m):
            for x, wx in weights[a].items():
                for y, wy in weights[b].items():
                    row = G.c_exact[x, y]
                    for z in range(G.n):
                        if row[z]:
                            cq[a, b, partition.block_of[z]] += wx * wy * row[z]
    return cq


def quotient_hypergroup(G: FiniteHypergroup, partition: DoubleCosetPartition,
                        tol: float = DEFAULT_TOL) -> FiniteHypergroup:
    from .constructors import from_exact

    labels = [G.labels[rep] for rep in partition.representatives]
    inv = [partition.block_of[G.inv[rep]] for rep in partition.representatives]
    e = partition.block_of[G.e]
    exact = _exact_quotient(G, partition)
    if exact is not None:
        Q = from_exact(labels, exact, inv, e)
    else:
        W = block_measures(G, partition)
        B = partition.indicator_matrix()
        cq = np.einsum("ax,by,xyz,zd->abd", W, W, G.c, B)
        Q = FiniteHypergroup(labels, cq, inv, e)
    report = validate_axioms(Q, tol)
    if not report.ok:
        raise QuotientConsistencyError(f"quotient fails axioms: {report.failed}")
    return Q.ensure_haar()


def make_pair(G: FiniteHypergroup, K: Iterable[int] = None, tol: float = DEFAULT_TOL) -> GelfandPair:
    """Assemble (G, K) with its partition, quotient and projector.

    ``K`` defaults to ``{e}``. G is validated first; an invalid G is rejected.
    """
    G = require_valid(G, tol)
    K = tuple(sorted(set(int(k) for k in K))) if K is not None else (G.e,)
    partition = double_cosets(G, K)
    omega = _k_measure(G, K)
    return GelfandPair(
        G=G,
        K=K,
        partition=partition,
        quotient=quotient_hypergroup(G, partition, tol),
        omega_K=omega[list(K)],
        projector=projection_matrix(G, K, omega),
    )


def commutativity_residual(pair: GelfandPair) -> float:
    cq = pair.quotient.c
    return float(np.max(np.abs(cq - cq.transpose(1, 0, 2))))


def is_gelfand_pair(pair: GelfandPair, tol: float = 1e-12) -> bool:
    return commutativity_residual(pair) <= tol
