import json

import numpy as np
import pytest

from hypersobolev import constructors as cons
from hypersobolev.corpus import corpus_documents, data_dir, load_pair
from hypersobolev.gelfand import is_gelfand_pair, make_pair
from hypersobolev.hypergroup import AxiomError, validate_axioms
from hypersobolev.io import SchemaError, dumps, parse, serialize
from hypersobolev.spectral import compute_dual

from oracles import S3, compose, cube_distance_spectrum, cube_walk_constants, krawtchouk


def test_cyclic_small_cases():
    H1 = cons.cyclic(1)
    assert H1.n == 1 and H1.c[0, 0, 0] == 1
    assert cons.cyclic(2).inv == (0, 1)
    report = validate_axioms(cons.cyclic(6), 1e-10)
    assert report.ok and report.max_residual == 0
    with pytest.raises(ValueError):
        cons.cyclic(0)


def test_cayley_table_of_z3_equals_cyclic3():
    table = [[(x + y) % 3 for y in range(3)] for x in range(3)]
    assert cons.from_cayley_table(table) == cons.cyclic(3)


def test_s3_table_matches_permutation_composition():
    labels = list(S3)
    table = cons.s3_table()
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            assert labels[table[i][j]] == next(k for k, v in S3.items() if v == compose(S3[x], S3[y]))
    assert validate_axioms(cons.s3(), 1e-10).ok


def test_broken_associativity_reports_witness():
    table = [[0, 1, 2], [1, 2, 0], [2, 0, 2]]  # 2*2 = 2 breaks the group law
    with pytest.raises(cons.GroupAxiomError) as info:
        cons.from_cayley_table(table)
    assert info.value.witness


def test_table_without_inverse_is_rejected():
    with pytest.raises(cons.GroupAxiomError, match="inverse"):
        cons.from_cayley_table([[0, 1], [1, 1]])


def test_classes_of_abelian_group_are_singletons():
    table = [[(x + y) % 4 for y in range(4)] for x in range(4)]
    H = cons.conjugacy_class_hypergroup(table, labels=[str(i) for i in range(4)])
    assert H == cons.cyclic(4)


def test_s3_classes_product_and_commutativity():
    H = cons.s3_classes()
    assert [str(v) for v in H.c_exact[1, 1]] == ["1/3", "0", "2/3"]
    assert list(H.haar) == [1, 3, 2]
    assert is_gelfand_pair(make_pair(H))


def test_s3_classes_plancherel_weights():
    dual = compute_dual(make_pair(cons.s3_classes()))
    np.testing.assert_allclose(dual.plancherel, [1 / 6, 1 / 6, 2 / 3], atol=1e-12)


def test_double_coset_pair_examples():
    z4 = [[(x + y) % 4 for y in range(4)] for x in range(4)]
    pair = cons.double_coset_pair(z4, [0, 2])
    assert pair.m == 2 and is_gelfand_pair(pair)
    s3 = cons.s3_table()
    pair = cons.double_coset_pair(s3, [0, 1], labels=cons.S3_LABELS)
    dual = compute_dual(pair)
    np.testing.assert_allclose(dual.table, [[1, 1], [1, -0.5]], atol=1e-10)
    assert not is_gelfand_pair(cons.double_coset_pair(s3, [0]))
    with pytest.raises(cons.GroupAxiomError):
        cons.double_coset_pair(s3, [0, 4])


def test_hamming1_is_cyclic2():
    assert cons.hamming(1) == cons.cyclic(2)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_hamming_constants_match_cube_walk(d):
    np.testing.assert_allclose(cons.hamming(d).c, cube_walk_constants(d), atol=1e-14)


@pytest.mark.parametrize("d", range(1, 7))
def test_hamming_is_commutative_and_hermitian(d):
    H = cons.hamming(d)
    assert H.is_commutative()
    assert H.inv == tuple(range(d + 1))
    assert validate_axioms(H, 1e-10).ok


def test_hamming3_characters_are_krawtchouk():
    dual = compute_dual(make_pair(cons.hamming(3)))
    oracle = cube_distance_spectrum(3)
    closed = np.array([[krawtchouk(3, k, j) / krawtchouk(3, k, 0) for j in range(4)] for k in range(4)])
    np.testing.assert_allclose(oracle, closed, atol=1e-12)
    got = sorted(map(tuple, np.round(dual.table.real, 9)))
    want = sorted(map(tuple, np.round(closed, 9)))
    assert got == want
    assert np.max(np.abs(dual.table.imag)) < 1e-12


def test_round_trip_cyclic3():
    H = cons.cyclic(3)
    back = parse(json.loads(dumps(serialize(H))))
    assert back == H
    assert (back.c_exact == H.c_exact).all()


def test_missing_identity_is_schema_error():
    doc = serialize(cons.cyclic(3))
    del doc["identity"]
    with pytest.raises(SchemaError) as info:
        parse(doc)
    assert info.value.path == "$.identity"


def test_negative_mass_fails_probability():
    doc = serialize(cons.cyclic(2))
    doc["convolution"]["1|1"] = {"0": "3/2", "1": "-1/2"}
    with pytest.raises(AxiomError) as info:
        parse(doc)
    assert "probability" in info.value.report.failed


def test_schema_paths_for_bad_fields():
    doc = serialize(cons.cyclic(2))
    doc["convolution"]["1|1"] = {"0": "one"}
    with pytest.raises(SchemaError) as info:
        parse(doc)
    assert info.value.path.startswith("$.convolution")
    doc = serialize(cons.cyclic(2))
    doc["involution"]["1"] = "7"
    with pytest.raises(SchemaError) as info:
        parse(doc)
    assert info.value.path == '$.involution["1"]'
    doc = serialize(cons.cyclic(2))
    del doc["convolution"]["0|1"]
    with pytest.raises(SchemaError, match="missing product"):
        parse(doc)


def test_float_masses_are_accepted():
    doc = serialize(cons.hamming(2))
    doc["convolution"]["1|1"] = {"0": 0.5, "2": 0.5}
    H = parse(doc)
    assert H.c_exact is None
    assert parse(serialize(H)) == H


def test_supplied_haar_is_verified_not_trusted():
    doc = serialize(cons.cyclic(3))
    doc["haar"] = {"0": 1, "1": 2, "2": 1}
    with pytest.raises(AxiomError) as info:
        parse(doc)
    assert info.value.report.failed == ["haar"]


def test_bundled_files_round_trip_bit_exactly():
    for path in sorted(data_dir().glob("*.json")):
        text = path.read_text(encoding="utf-8")
        doc = json.loads(text)
        if "convolution" not in doc:
            continue
        H = parse(doc, validate=False)
        assert dumps(serialize(H, include_haar="haar" in doc)) == text, path.name


def test_bundled_files_are_regenerable():
    for name, doc in corpus_documents().items():
        assert (data_dir() / name).read_text(encoding="utf-8") == dumps(doc), name


def test_bundled_pairs_load():
    assert load_pair("s3_s2").m == 2
    assert load_pair("z4_02").partition.blocks == ((0, 2), (1, 3))
