import pytest

from chronus.concepts import Concept, ConceptDictionary
from chronus.errors import ChronusError


def _specials():
    return [Concept("dummy", "special"), Concept("and", "special")]


def test_bundled_dictionary_shape(artifacts):
    d = artifacts.dictionary
    assert len(d) == 15
    assert d.names[0] == "question"
    assert d.is_special("dummy") and d.is_special("and")
    assert d["origin"].rank == 0 and d["destin"].rank == 0
    assert d["meal"].rank == 3


def test_attribute_folding(artifacts):
    d = artifacts.dictionary
    assert d.fold("a_fare") == "fare"
    assert d.fold("a_time") == "depart-time"
    assert d.fold("q_attr") == "question"
    assert d.fold("origin") == "origin"  # non-attributes fold to themselves


def test_index_is_declaration_order(artifacts):
    d = artifacts.dictionary
    assert [d.index(n) for n in d.names] == list(range(len(d)))


def test_duplicate_names_rejected():
    with pytest.raises(ChronusError):
        ConceptDictionary([Concept("x", "subject"), Concept("x", "subject")]
                          + _specials())


def test_unknown_role_rejected():
    with pytest.raises(ChronusError):
        ConceptDictionary([Concept("x", "verb")] + _specials())


def test_attribute_needs_valid_counterpart():
    with pytest.raises(ChronusError):
        ConceptDictionary([Concept("a", "attribute", counterpart="missing")]
                          + _specials())
    with pytest.raises(ChronusError):
        # an attribute may not fold into another attribute
        ConceptDictionary([Concept("x", "restriction"),
                           Concept("a", "attribute", counterpart="b"),
                           Concept("b", "attribute", counterpart="x")]
                          + _specials())


def test_special_concepts_required():
    with pytest.raises(ChronusError):
        ConceptDictionary([Concept("x", "subject"), Concept("and", "special")])


def test_lines_round_trip(artifacts):
    d = artifacts.dictionary
    again = ConceptDictionary.from_lines(d.to_lines())
    assert again.names == d.names
    assert again.to_lines() == d.to_lines()


def test_from_lines_rejects_bad_rank():
    with pytest.raises(ChronusError):
        ConceptDictionary.from_lines(["x\tsubject\tmany"])
    with pytest.raises(ChronusError):
        ConceptDictionary.from_lines(["x\tsubject\t-1"])
