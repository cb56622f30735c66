"""Sobolev norms over the spherical dual and the embedding inequalities.

All quantities are finite sums over the dual: for weights ``w(phi) =
(1 + gamma(phi)^2)^s`` the norm is ``sqrt(sum pi(phi) w(phi) |f_hat(phi)|^2)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .gelfand import GelfandPair
from .spectral import DualData, fourier, l2_norm_squared

DEFAULT_SLACK = 1e-12
GAMMA_PRESETS = ("zero", "index", "spectral-gap")


class ParameterError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SobolevParams:
    s: float
    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=float)
        if not self.s > 0:
            raise ParameterError(f"s must be positive, got {self.s}")
        if gamma.ndim != 1 or np.any(gamma < 0) or not np.all(np.isfinite(gamma)):
            raise ParameterError("gamma must be a vector of finite nonnegative reals")
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "gamma", gamma)

    def weights(self) -> np.ndarray:
        return (1.0 + self.gamma**2) ** self.s

    def with_s(self, s: float) -> "SobolevParams":
        return SobolevParams(s, self.gamma)


@dataclass
class EmbeddingReport:
    lhs: float
    rhs: float
    constant: float | None
    margin: float
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def gamma_preset(name: str, pair: GelfandPair, dual: DualData, block: int | None = None) -> np.ndarray:
    """Built-in choices of gamma on the canonically ordered dual.

    ``spectral-gap`` uses ``1 - Re phi(a)``, the gap below 1 of the eigenvalue of
    the translation operator of block ``a`` (default: the first block outside K).
    """
    if name == "zero":
        return np.zeros(dual.m)
    if name == "index":
        return np.arange(dual.m, dtype=float)
    if name == "spectral-gap":
        if block is None:
            block = 1 if pair.m > 1 else 0
        gap = 1.0 - dual.table[:, block].real
        return np.clip(gap, 0.0, None)
    raise ParameterError(f"unknown gamma preset {name!r}; choose from {GAMMA_PRESETS}")


def _check(dual: DualData, params: SobolevParams):
    if params.gamma.shape != (dual.m,):
        raise ParameterError(f"gamma has {params.gamma.shape[0]} entries, dual has {dual.m}")


def sobolev_norm(pair: GelfandPair, dual: DualData, f, params: SobolevParams, tol: float = 1e-9) -> float:
    _check(dual, params)
    fh = fourier(pair, dual, f, tol=tol)
    return float(np.sqrt(np.sum(dual.plancherel * params.weights() * np.abs(fh) ** 2)))


def sobolev_inner(pair: GelfandPair, dual: DualData, f, g, params: SobolevParams, tol: float = 1e-9) -> complex:
    _check(dual, params)
    fh, gh = fourier(pair, dual, f, tol=tol), fourier(pair, dual, g, tol=tol)
    return complex(np.sum(dual.plancherel * params.weights() * fh * np.conj(gh)))


def _report(lhs: float, rhs: float, slack: float, constant=None) -> EmbeddingReport:
    # slack is relative to the size of the right-hand side
    allowed = slack * max(1.0, abs(rhs))
    margin = rhs - lhs
    return EmbeddingReport(float(lhs), float(rhs), constant, float(margin), bool(margin >= -allowed))


def check_l2_embedding(pair, dual, f, params: SobolevParams, slack: float = DEFAULT_SLACK) -> EmbeddingReport:
    lhs = np.sqrt(l2_norm_squared(pair, f))
    return _report(lhs, sobolev_norm(pair, dual, f, params), slack)


def check_monotone_embedding(pair, dual, f, s: float, sigma: float, gamma: Sequence[float],
                             slack: float = DEFAULT_SLACK) -> EmbeddingReport:
    if not s > sigma > 0:
        raise ParameterError(f"need s > sigma > 0, got s={s}, sigma={sigma}")
    low = sobolev_norm(pair, dual, f, SobolevParams(sigma, gamma))
    high = sobolev_norm(pair, dual, f, SobolevParams(s, gamma))
    return _report(low, high, slack)


def character_bound(dual: DualData) -> float:
    """``M = max |phi(x)|`` over all characters and points."""
    return float(np.max(np.abs(dual.table)))


def decay_norm(dual: DualData, params: SobolevParams) -> float:
    """L2(pi) norm of ``(1 + gamma^2)^(-s/2)``."""
    _check(dual, params)
    return float(np.sqrt(np.sum(dual.plancherel / params.weights())))


def supnorm_constant(pair, dual: DualData, params: SobolevParams) -> float:
    return character_bound(dual) * decay_norm(dual, params)


def check_supnorm_embedding(pair, dual, f, params: SobolevParams, slack: float = DEFAULT_SLACK) -> EmbeddingReport:
    C = supnorm_constant(pair, dual, params)
    lhs = float(np.max(np.abs(f)))
    return _report(lhs, C * sobolev_norm(pair, dual, f, params), slack, constant=C)


def character_oscillation(dual: DualData) -> float:
    """``max |phi(x) - phi(a)|`` over characters and pairs of points."""
    T = dual.table
    return float(np.max(np.abs(T[:, :, None] - T[:, None, :])))


def modulus_bound(pair, dual, f, params: SobolevParams, eps: float | None = None) -> float:
    if eps is None:
        eps = character_oscillation(dual)
    if eps < 0:
        raise ParameterError("eps must be nonnegative")
    return eps * sobolev_norm(pair, dual, f, params) * decay_norm(dual, params)


def check_modulus_bound(pair, dual, f, params: SobolevParams, slack: float = DEFAULT_SLACK) -> EmbeddingReport:
    f = np.asarray(f)
    eps = character_oscillation(dual)
    lhs = float(np.max(np.abs(f[:, None] - f[None, :])))
    return _report(lhs, modulus_bound(pair, dual, f, params, eps), slack, constant=eps)


def embedding_sweep(pair, dual, F, params: SobolevParams, sigma: float | None = None,
                    slack: float = DEFAULT_SLACK) -> list[dict]:
    """All embedding checks for each row of ``F`` (bi-invariant functions on G).

    Equivalent to calling the single-function checks row by row, but computes
    the transforms as one matrix product.
    """
    _check(dual, params)
    F = np.atleast_2d(np.asarray(F, dtype=complex))
    G = pair.G
    Fh = (F * G.haar[None, :]) @ dual.point_table(pair)[:, list(G.inv)].T
    power = dual.plancherel[None, :] * np.abs(Fh) ** 2

    def norms(p):
        return np.sqrt(power @ p.weights())

    l2 = np.sqrt(np.abs(F) ** 2 @ G.haar)
    hs = norms(params)
    C = supnorm_constant(pair, dual, params)
    eps = character_oscillation(dual)
    decay = decay_norm(dual, params)
    sup = np.max(np.abs(F), axis=1)
    osc = np.max(np.abs(F[:, :, None] - F[:, None, :]), axis=(1, 2))
    if sigma is not None:
        if not params.s > sigma > 0:
            raise ParameterError(f"need s > sigma > 0, got s={params.s}, sigma={sigma}")
        hsigma = norms(params.with_s(sigma))
    rows = []
    for i in range(len(F)):
        row = {
            "l2": _report(l2[i], hs[i], slack),
            "supnorm": _report(sup[i], C * hs[i], slack, constant=C),
            "modulus": _report(osc[i], eps * hs[i] * decay, slack, constant=eps),
        }
        if sigma is not None:
            row["monotone"] = _report(hsigma[i], hs[i], slack)
        rows.append(row)
    return rows
