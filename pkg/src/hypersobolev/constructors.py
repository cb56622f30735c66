"""Canonical finite hypergroups built from small explicit groups."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .hypergroup import FiniteHypergroup, HypergroupError


class GroupAxiomError(HypergroupError):
    def __init__(self, message: str, witness: tuple = ()):
        self.witness = witness
        super().__init__(message + (f" (witness {witness})" if witness else ""))


def from_exact(labels, c_exact: np.ndarray, inv, e: int, haar_exact=None) -> FiniteHypergroup:
    """Build a hypergroup from a tensor of ``Fraction`` entries."""
    c = np.vectorize(float, otypes=[float])(c_exact) if c_exact.size else np.zeros(c_exact.shape)
    haar = None
    if haar_exact is not None:
        haar_exact = tuple(Fraction(h) for h in haar_exact)
        haar = [float(h) for h in haar_exact]
    return FiniteHypergroup(labels, c, inv, e, haar, c_exact=c_exact, haar_exact=haar_exact)


def _zeros(n: int) -> np.ndarray:
    out = np.empty((n, n, n), dtype=object)
    out.fill(Fraction(0))
    return out


def cyclic(n: int) -> FiniteHypergroup:
    if n < 1:
        raise ValueError("cyclic(n) needs n >= 1")
    c = _zeros(n)
    for x in range(n):
        for y in range(n):
            c[x, y, (x + y) % n] = Fraction(1)
    return from_exact([str(i) for i in range(n)], c, [(-x) % n for x in range(n)], 0, [1] * n)


def check_group_table(table: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """Return (identity, inverses) of a Cayley table or raise GroupAxiomError."""
    T = np.asarray(table, dtype=int)
    n = len(T)
    if T.shape != (n, n) or n == 0:
        raise GroupAxiomError(f"Cayley table must be square, got shape {T.shape}")
    if T.min() < 0 or T.max() >= n:
        raise GroupAxiomError("Cayley table entries out of range")
    ids = [i for i in range(n) if all(T[i, x] == x and T[x, i] == x for x in range(n))]
    if not ids:
        raise GroupAxiomError("no identity element")
    e = ids[0]
    inverses = []
    for x in range(n):
        cands = [y for y in range(n) if T[x, y] == e and T[y, x] == e]
        if not cands:
            raise GroupAxiomError("element has no inverse", (x,))
        inverses.append(cands[0])
    lhs = T[T, :]  # lhs[x, y, z] = (xy)z
    rhs = T[:, T]  # rhs[x, y, z] = x(yz)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        raise GroupAxiomError("table is not associative", tuple(int(i) for i in bad[0]))
    return e, inverses


def from_cayley_table(table, labels=None) -> FiniteHypergroup:
    e, inverses = check_group_table(table)
    T = np.asarray(table, dtype=int)
    n = len(T)
    c = _zeros(n)
    for x in range(n):
        for y in range(n):
            c[x, y, T[x, y]] = Fraction(1)
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    return from_exact(labels, c, inverses, e, [1] * n)


def conjugacy_classes(table) -> list[list[int]]:
    e, inverses = check_group_table(table)
    T = np.asarray(table, dtype=int)
    seen, classes = set(), []
    for x in range(len(T)):
        if x in seen:
            continue
        cls = sorted({int(T[T[g, x], inverses[g]]) for g in range(len(T))})
        seen.update(cls)
        classes.append(cls)
    return classes


def conjugacy_class_hypergroup(table, labels=None) -> FiniteHypergroup:
    """Hypergroup of conjugacy classes; Haar weights are the class sizes."""
    _, inverses = check_group_table(table)
    T = np.asarray(table, dtype=int)
    classes = conjugacy_classes(table)
    m = len(classes)
    class_of = {x: i for i, cls in enumerate(classes) for x in cls}
    c = _zeros(m)
    for a, A in enumerate(classes):
        for b, B in enumerate(classes):
            w = Fraction(1, len(A) * len(B))
            for x in A:
                for y in B:
                    c[a, b, class_of[int(T[x, y])]] += w
    inv = [class_of[inverses[cls[0]]] for cls in classes]
    if labels is None:
        labels = ["{" + ",".join(str(x) for x in cls) + "}" for cls in classes]
    return from_exact(labels, c, inv, class_of[classes[0][0]], [len(cls) for cls in classes])


def hamming_constants(d: int) -> np.ndarray:
    """Distance-walk probabilities on the binary d-cube.

    ``c[i, j, k]``: start at the origin, move to a uniform point at distance i,
    then to a uniform point at distance j from there; probability of ending at
    distance k from the origin.
    """
    c = _zeros(d + 1)
    for i in range(d + 1):
        for j in range(d + 1):
            for k in range(d + 1):
                # overlap t between the i-step point u and a fixed endpoint w of weight k
                if (i + k - j) % 2:
                    continue
                t = (i + k - j) // 2
                if t < 0 or t > min(i, k) or i - t > d - k:
                    continue
                p = comb(k, t) * comb(d - k, i - t)  # u with |u|=i, d(u,w)=j
                c[i, j, k] = Fraction(p * comb(d, k), comb(d, i) * comb(d, j))
    return c


def hamming(d: int) -> FiniteHypergroup:
    if d < 1:
        raise ValueError("hamming(d) needs d >= 1")
    n = d + 1
    return from_exact(
        [str(i) for i in range(n)], hamming_constants(d), list(range(n)), 0,
        [comb(d, k) for k in range(n)],
    )


# S3 acting on {1,2,3}; permutations stored as images of (1,2,3)
S3_LABELS = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
_S3_PERMS = [(1, 2, 3), (2, 1, 3), (3, 2, 1), (1, 3, 2), (2, 3, 1), (3, 1, 2)]


def s3_table() -> list[list[int]]:
    """Cayley table of S3, composition ``(xy)(i) = x(y(i))``."""
    index = {p: i for i, p in enumerate(_S3_PERMS)}
    table = []
    for x in _S3_PERMS:
        row = []
        for y in _S3_PERMS:
            row.append(index[tuple(x[y[i] - 1] for i in range(3))])
        table.append(row)
    return table


def s3() -> FiniteHypergroup:
    return from_cayley_table(s3_table(), S3_LABELS)


def s3_classes() -> FiniteHypergroup:
    return conjugacy_class_hypergroup(s3_table(), ["E", "T", "C"])


def double_coset_pair(table, subgroup, labels=None, tol: float = 1e-9):
    """Gelfand pair data for a group and one of its subgroups."""
    from .gelfand import make_pair

    T = np.asarray(table, dtype=int)
    G = from_cayley_table(table, labels)
    K = sorted(set(int(k) for k in subgroup))
    if not K or any(not 0 <= k < len(T) for k in K):
        raise GroupAxiomError("subgroup indices out of range")
    closed = all(int(T[a, b]) in K for a in K for b in K)
    if not closed or G.e not in K or any(G.inv[k] not in K for k in K):
        raise GroupAxiomError("not a subgroup", tuple(K))
    return make_pair(G, K, tol=tol)
