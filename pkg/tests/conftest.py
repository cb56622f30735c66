import numpy as np
import pytest

from hypersobolev import constructors as cons
from hypersobolev.corpus import PAIRS, load_pair
from hypersobolev.gelfand import make_pair
from hypersobolev.spectral import compute_dual


@pytest.fixture(scope="session")
def bundled_pairs():
    """name -> (pair, dual) for every bundled Gelfand pair."""
    out = {}
    for name in PAIRS:
        pair = load_pair(name)
        out[name] = (pair, compute_dual(pair))
    return out


@pytest.fixture(scope="session")
def s3_pair():
    G = cons.s3()
    return make_pair(G, G.indices(["e", "(12)"]))


@pytest.fixture(scope="session")
def classes_pair():
    return make_pair(cons.s3_classes())


@pytest.fixture(scope="session")
def z3_pair():
    return make_pair(cons.cyclic(3))


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)
