"""Shipped JSON fixtures agree with the code that generates them."""

import pytest

from bohrlogic import fixtures
from bohrlogic.contexts import poset_to_json
from bohrlogic.kochen_specker import rayset_to_json

BUILDERS = {
    "m3_fixture.json": lambda: poset_to_json(fixtures.m3_poset()),
    "chain3.json": lambda: poset_to_json(fixtures.chain3_poset()),
    "m2_star.json": lambda: poset_to_json(fixtures.m2_star_poset()),
    "m2_chain.json": lambda: poset_to_json(fixtures.m2_chain_poset()),
    "cabello18.json": lambda: rayset_to_json(fixtures.cabello18()),
    "ks2_qubit.json": lambda: rayset_to_json(fixtures.qubit_rays()),
    "ks2_pythagorean.json": lambda: rayset_to_json(fixtures.qubit_rays_pythagorean()),
}


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_shipped_file_matches_builder(name):
    doc = fixtures.load_json(name)
    assert doc.pop("comment")
    assert doc == BUILDERS[name]()


def test_every_file_has_provenance():
    data = fixtures.path("m3_fixture.json").parent
    names = sorted(p.name for p in data.glob("*.json"))
    assert len(names) >= 10
    for name in names:
        doc = fixtures.load_json(name)
        assert isinstance(doc.get("comment"), str) and doc["comment"]


def test_dump_is_stable():
    doc = fixtures.load_json("chain3.json")
    assert fixtures.dump(doc) == fixtures.path("chain3.json").read_text()
