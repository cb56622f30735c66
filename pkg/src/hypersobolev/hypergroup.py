"""Finite hypergroups as structure-constant tensors.

A finite hypergroup on ``n`` points is stored as a dense tensor ``c`` with
``c[x, y, z]`` the mass that ``delta_x * delta_y`` puts on ``z``, together with
an involution (a permutation), the index of the neutral element and left Haar
weights normalized so that ``h(e) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

AXIOMS = (
    "probability",
    "neutrality",
    "involution",
    "support_symmetry",
    "associativity",
    "haar",
)

DEFAULT_TOL = 1e-9
MAX_ELEMENTS = 64


class HypergroupError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(HypergroupError):
    """Input data is malformed (shapes, indices, labels), as opposed to an axiom failure."""


class AxiomError(HypergroupError):
    """A hypergroup failed validation; the report is attached."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"hypergroup axioms failed: {', '.join(report.failed)}")


class NotUnimodularOrInvalid(HypergroupError):
    pass


class HaarAmbiguityError(HypergroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteHypergroup:
    labels: tuple
    c: np.ndarray
    inv: tuple
    e: int
    haar: np.ndarray | None = None
    # exact rational data, kept when the input was rational
    c_exact: np.ndarray | None = field(default=None, repr=False)
    haar_exact: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        n = len(labels)
        if n == 0:
            raise StructuralError("a hypergroup needs at least one element")
        if n > MAX_ELEMENTS:
            raise StructuralError(f"at most {MAX_ELEMENTS} elements are supported, got {n}")
        if len(set(labels)) != n:
            raise StructuralError("labels must be distinct")
        c = np.asarray(self.c, dtype=float)
        if c.shape != (n, n, n):
            raise StructuralError(f"structure tensor has shape {c.shape}, expected {(n, n, n)}")
        inv = tuple(int(i) for i in self.inv)
        if len(inv) != n or sorted(inv) != list(range(n)):
            raise StructuralError("involution must be a permutation of the element indices")
        if not 0 <= int(self.e) < n:
            raise StructuralError(f"neutral element index {self.e} out of range")
        c.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "e", int(self.e))
        if self.haar is not None:
            haar = np.asarray(self.haar, dtype=float)
            if haar.shape != (n,):
                raise StructuralError(f"haar has length {haar.shape}, expected {n}")
            haar.setflags(write=False)
            object.__setattr__(self, "haar", haar)
        if self.c_exact is not None and np.shape(self.c_exact) != (n, n, n):
            raise StructuralError("exact structure tensor has the wrong shape")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise StructuralError(f"unknown label {label!r}") from None

    def indices(self, labels: Iterable[str]) -> list[int]:
        return [self.index(label) for label in labels]

    def with_haar(self, haar, haar_exact=None) -> "FiniteHypergroup":
        return FiniteHypergroup(
            self.labels, self.c, self.inv, self.e, haar,
            c_exact=self.c_exact, haar_exact=haar_exact,
        )

    def ensure_haar(self) -> "FiniteHypergroup":
        """Return self if Haar weights are present, else a copy with computed ones."""
        if self.haar is not None:
            return self
        return self.with_haar(*_haar_with_exact(self))

    def is_commutative(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.c - self.c.transpose(1, 0, 2))) <= tol)

    def __eq__(self, other):
        if not isinstance(other, FiniteHypergroup):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.inv == other.inv
            and self.e == other.e
            and np.array_equal(self.c, other.c)
        )

    __hash__ = None


@dataclass
class ValidationReport:
    tol: float
    residuals: dict
    offenders: dict
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> dict:
        return {name: bool(r <= self.tol) for name, r in self.residuals.items()}

    @property
    def failed(self) -> list:
        return [name for name, ok in self.passed.items() if not ok]

    @property
    def ok(self) -> bool:
        return not self.failed

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> dict:
        return {
            "pass": self.ok,
            "tol": self.tol,
            "axioms": {
                name: {
                    "pass": self.passed[name],
                    "residual": float(self.residuals[name]),
                    "offenders": [list(t) for t in self.offenders.get(name, [])],
                }
                for name in self.residuals
            },
            **({"notes": self.notes} if self.notes else {}),
        }


def _worst(res: np.ndarray, tol: float, limit: int = 8) -> tuple[float, list]:
    if res.size == 0:
        return 0.0, []
    worst = float(np.max(res))
    bad = np.argwhere(res > tol)
    order = np.argsort(-res[tuple(bad.T)], kind="stable") if len(bad) else []
    return worst, [tuple(int(i) for i in bad[k]) for k in list(order)[:limit]]


def _check_index(H: FiniteHypergroup, *idx: int):
    for i in idx:
        if not 0 <= int(i) < H.n:
            raise IndexError(f"element index {i} out of range for n={H.n}")


def validate_axioms(H: FiniteHypergroup, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every hypergroup axiom and return per-axiom residuals.

    Haar invariance is checked against ``H.haar`` when present; otherwise the
    weights are solved for and the residual measures how far the invariance
    system is from having a positive solution.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c, n, e = H.c, H.n, H.e
    inv = np.array(H.inv)
    residuals, offenders, notes = {}, {}, {}

    mass_error, bad_pairs = _worst(np.abs(c.sum(axis=2) - 1.0), tol)
    negative, bad_entries = _worst(np.maximum(-c, 0.0), tol)
    residuals["probability"] = max(mass_error, negative)
    offenders["probability"] = bad_pairs + bad_entries

    point = np.eye(n)
    neutral = np.maximum(np.abs(c[:, e, :] - point), np.abs(c[e, :, :] - point))
    residuals["neutrality"], offenders["neutrality"] = _worst(neutral, tol)

    # (delta_x * delta_y)^diamond = delta_{y^diamond} * delta_{x^diamond}
    mirrored = c[np.ix_(inv, inv, inv)].transpose(1, 0, 2)
    involution = np.abs(c - mirrored)
    not_involutive = (inv[inv] != np.arange(n)).astype(float)
    involution = np.maximum(involution, not_involutive[:, None, None])
    residuals["involution"], offenders["involution"] = _worst(involution, tol)

    # z in supp(x*y)  <=>  x in supp(z*y^diamond)
    idx = np.arange(n)
    partner = c[np.ix_(idx, inv, idx)].transpose(2, 1, 0)  # partner[x, y, z] = c[z, inv y, x]
    mismatch = np.where((c > tol) != (partner > tol), np.maximum(c, partner), 0.0)
    residuals["support_symmetry"], offenders["support_symmetry"] = _worst(mismatch, tol)

    # (w*x)*y == w*(x*y)
    left = np.tensordot(c, c, axes=([2], [0]))
    right = np.tensordot(c, c, axes=([2], [1])).transpose(2, 0, 1, 3)
    assoc = np.max(np.abs(left - right), axis=3)
    residuals["associativity"], offenders["associativity"] = _worst(assoc, tol)

    if H.haar is not None:
        h = H.haar
        notes["haar"] = "supplied"
    else:
        h, residual = _haar_candidate(H)
        notes["haar"] = "computed"
    if h is None:
        residuals["haar"], offenders["haar"] = residual, []
    else:
        invariance = np.abs(np.einsum("x,yxz->yz", h, c) - h[None, :])
        nonpositive = np.maximum(-h, 0.0) + (h <= 0) * 1.0
        residuals["haar"], offenders["haar"] = _worst(invariance, tol)
        if np.any(nonpositive > 0):
            residuals["haar"] = max(residuals["haar"], float(np.max(nonpositive)))
        if abs(h[e] - 1.0) > tol:
            residuals["haar"] = max(residuals["haar"], abs(float(h[e]) - 1.0))
    return ValidationReport(tol, residuals, offenders, notes)


def require_valid(H: FiniteHypergroup, tol: float = DEFAULT_TOL) -> FiniteHypergroup:
    report = validate_axioms(H, tol)
    if not report.ok:
        raise AxiomError(report)
    return H.ensure_haar()


def convolve_points(H: FiniteHypergroup, x: int, y: int) -> np.ndarray:
    _check_index(H, x, y)
    return H.c[x, y].copy()


def convolve_measures(H: FiniteHypergroup, mu, nu) -> np.ndarray:
    mu, nu = np.asarray(mu), np.asarray(nu)
    if mu.shape != (H.n,) or nu.shape != (H.n,):
        raise StructuralError(f"measures must have length {H.n}")
    return np.einsum("x,y,xyz->z", mu, nu, H.c)


def translate_value(H: FiniteHypergroup, f, x: int, y: int) -> complex:
    """``f(x * y)``, i.e. ``f`` integrated against ``delta_x * delta_y``."""
    _check_index(H, x, y)
    f = np.asarray(f)
    if f.shape != (H.n,):
        raise StructuralError(f"function must have length {H.n}")
    return complex(H.c[x, y] @ f)


def _invariance_system(c: np.ndarray) -> np.ndarray:
    # rows indexed by (y, z): sum_x h(x) c[y, x, z] - h(z)
    n = c.shape[0]
    S = c.transpose(0, 2, 1).reshape(n * n, n).copy()
    S -= np.tile(np.eye(n), (n, 1))
    return S


def _haar_candidate(H: FiniteHypergroup):
    """Best Haar candidate and, when none is acceptable, a residual."""
    try:
        return compute_haar(H), 0.0
    except HaarAmbiguityError:
        return None, float("inf")
    except NotUnimodularOrInvalid:
        sv = np.linalg.svd(_invariance_system(H.c), compute_uv=False)
        # a null vector exists but is not positive: report a unit failure
        return None, float(sv[-1]) if sv[-1] > 1e-9 else 1.0


def compute_haar(H: FiniteHypergroup, tol: float = 1e-9) -> np.ndarray:
    """Solve the left-invariance system for Haar weights with ``h(e) = 1``."""
    S = _invariance_system(H.c)
    _, sv, vt = np.linalg.svd(S)
    scale = max(1.0, float(sv[0]))
    null = vt[sv <= tol * scale]
    if len(null) == 0:
        raise NotUnimodularOrInvalid("the Haar invariance system has no nonzero solution")
    if len(null) > 1:
        raise HaarAmbiguityError(f"Haar invariance solution space has dimension {len(null)}")
    h = null[0]
    if abs(h[H.e]) <= tol:
        raise NotUnimodularOrInvalid("Haar solution vanishes at the neutral element")
    h = h / h[H.e]
    if np.any(h <= tol):
        raise NotUnimodularOrInvalid("Haar solution is not strictly positive")
    return h


def _haar_with_exact(H: FiniteHypergroup):
    h = compute_haar(H)
    exact = exact_haar(H, h)
    if exact is not None:
        return np.array([float(v) for v in exact]), exact
    return h, None


def exact_haar(H: FiniteHypergroup, approx: Sequence[float]) -> tuple | None:
    """Rationalize approximate Haar weights and confirm them exactly.

    Only possible when the hypergroup carries exact rational constants.
    Returns None when the rational candidate does not satisfy the
    invariance system exactly.
    """
    if H.c_exact is None:
        return None
    cand = [Fraction(float(v)).limit_denominator(10**6) for v in approx]
    cx = H.c_exact
    n = H.n
    for y in range(n):
        acc = [Fraction(0)] * n
        for x in range(n):
            hx = cand[x]
            row = cx[y, x]
            for z in range(n):
                if row[z]:
                    acc[z] += hx * row[z]
        if acc != cand:
            return None
    return tuple(cand)


def is_subhypergroup(H: FiniteHypergroup, S: Iterable[int], tol: float = 1e-12) -> bool:
    S = sorted(set(int(s) for s in S))
    if not S:
        raise ValueError("subset must be nonempty")
    _check_index(H, *S)
    members = set(S)
    if any(H.inv[x] not in members for x in S):
        return False
    for x in S:
        for y in S:
            if any(z not in members for z in np.flatnonzero(H.c[x, y] > tol)):
                return False
    return True
