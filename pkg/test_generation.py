from itertools import product

import pytest

from models import Provenance
from tournaments.canonical import canonical_form, format_code
from tournaments.errors import DivisibilityError, UnverifiedRangeError, VertexLimitError
from tournaments.generation import (
    RAMSEY_CONSTANTS, _extend, class_codes, find_ramsey, from_code, generate_tournaments,
    max_Tk_free_catalog, ramsey_number, ramsey_table, search_classes, tiling_threshold_search,
)
from tournaments.graph import contains_Tk, is_regular, pair_count, parse_upper_triangle, serialize_upper_triangle
from tournaments.pool import parallel_map


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 4), (5, 12), (6, 56)])
def test_class_counts(n, count):
    assert len(class_codes(n)) == count


@pytest.mark.slow
def test_seven_vertex_class_count():
    assert len(class_codes(7)) == 456


@pytest.mark.parametrize("n", [3, 4, 5, pytest.param(6, marks=pytest.mark.slow)])
def test_classes_match_naive_sweep(n):
    naive = {
        canonical_form(parse_upper_triangle("".join(bits), n))
        for bits in product("01", repeat=pair_count(n))
    }
    assert {format_code(code, n) for code in class_codes(n)} == naive
    assert len(naive) == {3: 2, 4: 4, 5: 12, 6: 56}[n]


def test_representatives_are_canonically_labeled():
    for code, t in zip(class_codes(5), generate_tournaments(5)):
        assert serialize_upper_triangle(t) == canonical_form(t) == format_code(code, 5)
        assert from_code(code, 5) == t


def test_parallel_extension_matches_serial():
    items = [(code, 4) for code in class_codes(4)]
    assert parallel_map(_extend, items, workers=2) == [_extend(item) for item in items]


def test_generation_cap():
    with pytest.raises(VertexLimitError):
        class_codes(10)
    with pytest.raises(VertexLimitError):
        class_codes(0)


def test_find_ramsey_small():
    two = find_ramsey(2)
    assert two.value == 2
    three = find_ramsey(3)
    assert three.value == 4
    assert three.provenance is Provenance.VERIFIED
    assert not contains_Tk(parse_upper_triangle(three.witness, 3), 3)


@pytest.mark.slow
def test_find_ramsey_four():
    entry = find_ramsey(4, n_max=8)
    assert entry.value == 8
    witness = parse_upper_triangle(entry.witness, 7)
    assert not contains_Tk(witness, 4)
    assert is_regular(witness)


def test_find_ramsey_reports_exceeded_range():
    entry = find_ramsey(3, n_max=3)
    assert entry.value is None
    assert entry.exceeds == 3
    assert entry.witness is not None
    with pytest.raises(ValueError):
        find_ramsey(1)


def test_ramsey_number_sources():
    assert ramsey_number(3) == 4
    assert ramsey_number(5) == RAMSEY_CONSTANTS[5] == 14
    assert ramsey_number(4, verify=False) == 8
    with pytest.raises(UnverifiedRangeError):
        ramsey_number(7)


def test_ramsey_table_constants():
    table = ramsey_table(verify=False)
    assert sorted(table.entries) == [2, 3, 4, 5, 6]
    assert all(entry.provenance is Provenance.CONSTANT for entry in table.entries.values())
    assert [table.value(k) for k in range(2, 7)] == [2, 4, 8, 14, 28]
    assert table.value(7) is None


@pytest.mark.slow
def test_ramsey_table_verifies_small_entries():
    table = ramsey_table()
    assert [table.value(k) for k in range(2, 7)] == [2, 4, 8, 14, 28]
    provenance = {k: entry.provenance for k, entry in table.entries.items()}
    assert provenance == {
        2: Provenance.VERIFIED, 3: Provenance.VERIFIED, 4: Provenance.VERIFIED,
        5: Provenance.CONSTANT, 6: Provenance.CONSTANT,
    }
    assert not contains_Tk(parse_upper_triangle(table.entries[4].witness, 7), 4)


def test_triangle_free_catalog():
    (entry,) = max_Tk_free_catalog(3)
    assert entry.n == 3
    assert entry.regular
    assert entry.out_degrees == [1, 1, 1]


@pytest.mark.slow
def test_t4_free_catalog():
    (entry,) = max_Tk_free_catalog(4)
    assert entry.n == 7
    assert entry.regular
    assert set(entry.out_degrees) == {3}


def test_catalog_range():
    with pytest.raises(UnverifiedRangeError):
        max_Tk_free_catalog(5)


def test_tiling_threshold_search():
    report = tiling_threshold_search(3, 6)
    assert report.classes_examined == 56
    assert report.all_tileable
    small = tiling_threshold_search(3, 3)
    assert not small.all_tileable
    assert len(small.counterexamples) == 1
    with pytest.raises(DivisibilityError):
        tiling_threshold_search(3, 7)


def test_search_classes():
    regular = search_classes(5, "regular")
    assert regular.classes_examined == 12
    assert regular.classes_satisfying >= 1
    free = search_classes(3, "tk-free", k=3)
    assert free.predicate == "tk-free:3"
    assert free.classes_satisfying == 1
    with pytest.raises(ValueError):
        search_classes(4, "planar")


@pytest.mark.slow
def test_unique_t4_free_seven_vertex_class():
    assert search_classes(7, "tk-free", k=4).classes_satisfying == 1
