"""The bundled corpus: canonical hypergroups, Gelfand pairs and corrupted files.

The JSON files under ``data/`` are generated by :func:`write_corpus`; tests
regenerate them and compare byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import constructors as cons
from .gelfand import GelfandPair, make_pair
from .hypergroup import FiniteHypergroup
from .io import dumps, load, serialize

# name -> (file, K labels)
PAIRS = {
    **{f"cyclic{n}": (f"cyclic{n}.json", ["0"]) for n in range(2, 9)},
    "s3_classes": ("s3_classes.json", ["E"]),
    "s3_s2": ("s3.json", ["e", "(12)"]),
    "z4_02": ("cyclic4.json", ["0", "2"]),
    **{f"hamming{d}": (f"hamming{d}.json", ["0"]) for d in range(2, 6)},
}

# corrupted file -> the single axiom it violates
BROKEN = {
    "broken_prob.json": "probability",
    "broken_neutral.json": "neutrality",
    "broken_involution.json": "involution",
    "broken_support.json": "support_symmetry",
    "broken_assoc.json": "associativity",
    "broken_haar.json": "haar",
}


def data_dir() -> Path:
    return Path(str(resources.files("hypersobolev") / "data"))


def bundled_path(name: str) -> Path:
    return data_dir() / name


def _tensor(labels, products, inv, e=0, haar=None) -> FiniteHypergroup:
    """Exact hypergroup-like object from the non-trivial products only."""
    n = len(labels)
    c = np.empty((n, n, n), dtype=object)
    c.fill(Fraction(0))
    for x in range(n):
        c[e, x, x] = Fraction(1)
        c[x, e, x] = Fraction(1)
    for (x, y), masses in products.items():
        c[x, y, :] = [Fraction(m) for m in masses]
    return cons.from_exact(labels, c, inv, e, haar)


def broken_hypergroups() -> dict:
    z3 = cons.cyclic(3)
    third, two9, five9 = "1/3", "2/9", "5/9"
    return {
        # sums to 1 but carries a negative mass of 1e-3
        "broken_prob.json": _tensor(
            ["e", "a"], {(1, 1): ("1001/1000", "-1/1000")}, [0, 1], haar=["1", "1000/1001"]),
        # declared identity "1" is not neutral
        "broken_neutral.json": cons.from_exact(z3.labels, z3.c_exact, [0, 2, 1], 1, [1, 1, 1]),
        # commutative and associative, but a*a and b*b are not mirror images under a <-> b
        "broken_involution.json": _tensor(
            ["e", "a", "b"],
            {(1, 1): (0, "1/2", "1/2"), (2, 2): (0, "5/6", "1/6"),
             (1, 2): (third, "1/6", "1/2"), (2, 1): (third, "1/6", "1/2")},
            [0, 2, 1], haar=[1, 3, 3]),
        # Z3 with the identity map as involution
        "broken_support.json": cons.from_exact(z3.labels, z3.c_exact, [0, 1, 2], 0, [1, 1, 1]),
        # hermitian, Haar-invariant, support-symmetric, but (a*b)*c != a*(b*c)
        "broken_assoc.json": _tensor(
            ["e", "a", "b", "c"],
            {(1, 1): (third, two9, two9, two9), (2, 2): (third, two9, two9, two9),
             (3, 3): (third, two9, two9, two9),
             (1, 2): (0, two9, two9, five9), (2, 1): (0, two9, two9, five9),
             (1, 3): (0, two9, five9, two9), (3, 1): (0, two9, five9, two9),
             (2, 3): (0, five9, two9, two9), (3, 2): (0, five9, two9, two9)},
            [0, 1, 2, 3], haar=[1, 3, 3, 3]),
        "broken_haar.json": cons.from_exact(z3.labels, z3.c_exact, [0, 2, 1], 0, [1, 2, 1]),
    }


def corpus_documents() -> dict:
    docs = {f"cyclic{n}.json": serialize(cons.cyclic(n)) for n in range(2, 9)}
    docs["s3.json"] = serialize(cons.s3())
    docs["s3_classes.json"] = serialize(cons.s3_classes())
    table = cons.s3_table()
    docs["s3_table.json"] = {
        "labels": cons.S3_LABELS,
        "table": [[cons.S3_LABELS[v] for v in row] for row in table],
    }
    for d in range(2, 6):
        docs[f"hamming{d}.json"] = serialize(cons.hamming(d))
    for name, H in broken_hypergroups().items():
        docs[name] = serialize(H, include_haar=True)
    docs["pairs.json"] = {name: {"file": f, "k": k} for name, (f, k) in PAIRS.items()}
    return docs


def write_corpus(directory=None) -> list:
    directory = Path(directory) if directory is not None else data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in corpus_documents().items():
        (directory / name).write_text(dumps(doc), encoding="utf-8")
        written.append(name)
    return written


def load_pair(name: str, tol: float = 1e-9) -> GelfandPair:
    file, k = PAIRS[name]
    G = load(bundled_path(file), tol=tol)
    return make_pair(G, G.indices(k), tol=tol)


def bundled_hypergroups() -> dict:
    names = [f"cyclic{n}.json" for n in range(2, 9)]
    names += ["s3.json", "s3_classes.json"] + [f"hamming{d}.json" for d in range(2, 6)]
    return {name: load(bundled_path(name)) for name in names}


def read_bundled(name: str):
    return json.loads(bundled_path(name).read_text(encoding="utf-8"))
