import json

import pytest

from conftest import NAMES
from dimerlab.fixtures import CHECKS, Fixture, fixture_names, run_fixture


def test_bundled_names():
    assert fixture_names() == NAMES


@pytest.mark.parametrize("name", NAMES)
def test_manifest_is_well_formed(name):
    fx = Fixture.load(name)
    assert fx.manifest["dimer"] == f"{name}.json"
    for c in fx.manifest["checks"]:
        assert c["check"] in CHECKS
        assert c["basis"] in ("worked-example", "derived", "trivial")
    for spec in fx.manifest.get("paths", {}).values():
        fx.dimer.path_ends(fx.path(spec))


@pytest.mark.parametrize("name", NAMES)
def test_every_check_passes(name):
    results = run_fixture(name)
    failing = [(r.check, r.detail) for r in results if not r.passed]
    assert not failing, json.dumps(failing)


def test_unknown_fixture():
    with pytest.raises(KeyError):
        Fixture.load("nope")
