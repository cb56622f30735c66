"""Spherical characters, Plancherel weights and the spherical Fourier transform.

Characters are computed on the double-coset hypergroup: they are the common
eigenvectors of the translation matrices ``A_a[b, d] = c_q[a, b, d]``, with
eigenvalue ``phi(a)`` for ``A_a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gelfand import (
    BiInvarianceError,
    GelfandPair,
    biinvariance_residual,
    biinvariant_project,
    commutativity_residual,
)
from .hypergroup import HypergroupError, StructuralError, ValidationReport

DEFAULT_SEED = 0xC0FFEE
MAX_RETRIES = 16
COLLISION_GAP = 1e-8


class NotGelfandPairError(HypergroupError):
    pass


class DegenerateSpectrum(HypergroupError):
    pass


class CharacterConsistencyError(HypergroupError):
    pass


@dataclass(frozen=True, eq=False)
class Character:
    values: np.ndarray  # one complex value per double-coset block

    def on_points(self, pair: GelfandPair) -> np.ndarray:
        return pair.partition.expand(self.values)


@dataclass(frozen=True, eq=False)
class DualData:
    characters: tuple
    plancherel: np.ndarray

    @property
    def m(self) -> int:
        return len(self.characters)

    @property
    def table(self) -> np.ndarray:
        """``table[i, a] = phi_i(block a)``."""
        return np.array([phi.values for phi in self.characters])

    def point_table(self, pair: GelfandPair) -> np.ndarray:
        return self.table[:, list(pair.partition.block_of)]


def translation_matrices(pair: GelfandPair) -> np.ndarray:
    return pair.quotient.c


def _sort_key(values: np.ndarray) -> tuple:
    key = []
    for v in values:
        # + 0.0 folds -0.0 into 0.0
        key.extend((round(float(v.real), 9) + 0.0, round(float(v.imag), 9) + 0.0))
    return tuple(key)


def order_characters(table: np.ndarray) -> np.ndarray:
    """Trivial character first, then lexicographic on rounded values."""
    trivial = int(np.argmin(np.max(np.abs(table - 1.0), axis=1)))
    rest = sorted((i for i in range(len(table)) if i != trivial), key=lambda i: _sort_key(table[i]))
    return table[[trivial] + rest]


def _min_gap(vals: np.ndarray) -> float:
    if len(vals) < 2:
        return np.inf
    diff = np.abs(vals[:, None] - vals[None, :])
    return float(np.min(diff[~np.eye(len(vals), dtype=bool)]))


def compute_dual(pair: GelfandPair, seed: int = DEFAULT_SEED, tol: float = 1e-9,
                 max_retries: int = MAX_RETRIES) -> DualData:
    if commutativity_residual(pair) > 1e-12:
        raise NotGelfandPairError("the double-coset algebra is not commutative")
    A = translation_matrices(pair)
    m = pair.m
    e = pair.quotient.e
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        r = rng.standard_normal(m)
        vals, vecs = np.linalg.eig(np.tensordot(r, A, axes=(0, 0)))
        if _min_gap(vals) > COLLISION_GAP:
            break
    else:
        raise DegenerateSpectrum(f"eigenvalues collided in {max_retries} random combinations")
    table = (vecs / vecs[e, :][None, :]).T
    table = order_characters(table)
    characters = tuple(Character(row) for row in table)
    for phi in characters:
        report = verify_character(pair, phi, tol)
        if not report.ok:
            raise CharacterConsistencyError(f"computed character fails {report.failed}")
    return DualData(characters, plancherel_weights(pair, characters))


def verify_character(pair: GelfandPair, phi, tol: float = 1e-9) -> ValidationReport:
    """Residuals of the four dual-set conditions.

    ``phi`` may be a Character, a vector on blocks, or a vector on G (in which
    case constancy on double cosets is measured).
    """
    values = phi.values if isinstance(phi, Character) else np.asarray(phi, dtype=complex)
    residuals = {}
    singletons = pair.partition.block_of == tuple(range(pair.G.n))
    if len(values) == pair.G.n and not singletons:
        residuals["biinvariance"] = biinvariance_residual(pair, values)
        values = values[list(pair.partition.representatives)]
    elif len(values) == pair.m:
        residuals["biinvariance"] = 0.0
    else:
        raise StructuralError(f"character has length {len(values)}; expected {pair.m} or {pair.G.n}")
    Q = pair.quotient
    residuals["normalization"] = float(abs(values[Q.e] - 1.0))
    product = np.tensordot(Q.c, values, axes=(2, 0))
    residuals["multiplicativity"] = float(np.max(np.abs(product - np.outer(values, values))))
    residuals["conjugation"] = float(np.max(np.abs(values[list(Q.inv)] - np.conj(values))))
    return ValidationReport(tol, residuals, {})


def plancherel_weights(pair: GelfandPair, characters) -> np.ndarray:
    H = pair.block_haar
    table = np.array([phi.values if isinstance(phi, Character) else phi for phi in characters])
    return 1.0 / (np.abs(table) ** 2 @ H)


def _as_point_function(pair: GelfandPair, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (pair.G.n,):
        raise StructuralError(f"function must have length {pair.G.n}, got {f.shape}")
    return f


def fourier(pair: GelfandPair, dual: DualData, f, project: bool = False, tol: float = 1e-9) -> np.ndarray:
    """``f_hat(phi) = sum_x h(x) phi(x^diamond) f(x)``."""
    f = _as_point_function(pair, f)
    if project:
        f = biinvariant_project(pair, f)
    elif biinvariance_residual(pair, f) > tol:
        raise BiInvarianceError("function is not K-bi-invariant; project it first")
    G = pair.G
    phi_inv = dual.point_table(pair)[:, list(G.inv)]
    return phi_inv @ (G.haar * f)


def inverse_fourier(pair: GelfandPair, dual: DualData, coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (dual.m,):
        raise StructuralError(f"expected {dual.m} coefficients, got {coeffs.shape}")
    return (dual.plancherel * coeffs) @ dual.point_table(pair)


def l2_norm_squared(pair: GelfandPair, f) -> float:
    f = np.asarray(f)
    return float(np.sum(pair.G.haar * np.abs(f) ** 2))


def plancherel_residual(pair: GelfandPair, dual: DualData, f, tol: float = 1e-9) -> float:
    f = _as_point_function(pair, f)
    lhs = l2_norm_squared(pair, f)
    rhs = float(np.sum(dual.plancherel * np.abs(fourier(pair, dual, f, tol=tol)) ** 2))
    return abs(lhs - rhs) / max(1.0, lhs)


def convolve_functions(pair: GelfandPair, f, g) -> np.ndarray:
    """Haar-weighted convolution: the density of ``(h f) * (h g)`` against ``h``."""
    G = pair.G
    f, g = _as_point_function(pair, f), _as_point_function(pair, g)
    mass = np.einsum("x,y,xyz->z", G.haar * f, G.haar * g, G.c)
    return mass / G.haar


def orthogonality_matrix(pair: GelfandPair, dual: DualData) -> np.ndarray:
    P = dual.point_table(pair)
    return (P * pair.G.haar[None, :]) @ P.conj().T


def random_biinvariant(pair: GelfandPair, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Standard complex Gaussian values per double-coset block, expanded to G."""
    shape = (pair.m,) if size is None else (size, pair.m)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return z[..., list(pair.partition.block_of)]
