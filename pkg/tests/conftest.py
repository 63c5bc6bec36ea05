import pytest
from hypothesis import settings

from bohrlogic import fixtures

settings.register_profile("exact", deadline=None, max_examples=60)
settings.load_profile("exact")

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def posets():
    return {name: fixtures.load_poset(name) for name in fixtures.FIXTURE_POSETS}


@pytest.fixture(scope="session")
def m3(posets):
    return posets["m3_fixture.json"]


@pytest.fixture(scope="session")
def chain3(posets):
    return posets["chain3.json"]


@pytest.fixture(scope="session")
def star(posets):
    return posets["m2_star.json"]


@pytest.fixture(scope="session")
def m2chain(posets):
    return posets["m2_chain.json"]


@pytest.fixture(scope="session")
def cabello_poset():
    """Context poset generated by the 18-ray bases (more than 64 atoms)."""
    from bohrlogic.contexts import build_poset
    from bohrlogic.kochen_specker import rays_poset_seeds

    return build_poset(rays_poset_seeds(fixtures.load_rayset("cabello18.json")))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
