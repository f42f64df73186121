import copy
import json
from collections import deque

import pytest
from hypothesis import given, strategies as st

from conftest import NAMES, fixture
from oracles import raw
from strategies import walks
from dimerlab.dimer import DimerError, Path, homology_labels, lift_endpoint, loads, validate


CONIFOLD = {
    "vertices": ["1", "2"],
    "arrows": [{"id": "a1", "tail": "1", "head": "2"}, {"id": "a2", "tail": "1", "head": "2"},
               {"id": "b1", "tail": "2", "head": "1"}, {"id": "b2", "tail": "2", "head": "1"}],
    "faces": [{"arrows": ["a1", "b1", "a2", "b2"], "sign": "+"},
              {"arrows": ["a1", "b2", "a2", "b1"], "sign": "-"}],
}


def test_conifold_valid():
    d = validate(CONIFOLD)
    assert len(d.vertices) - len(d.arrows) + len(d.faces) == 0
    assert d.warnings == ()


def test_dropping_a_face_reports_every_problem():
    bad = copy.deepcopy(CONIFOLD)
    bad["faces"].pop()
    with pytest.raises(DimerError) as err:
        validate(bad)
    assert "ArrowFaceCount" in err.value.codes
    assert "EulerCharacteristic" in err.value.codes
    assert err.value.codes.count("ArrowFaceCount") == 4


def test_face_too_short():
    bad = {"vertices": ["1"], "arrows": [{"id": "x", "tail": "1", "head": "1"}],
           "faces": [{"arrows": ["x"], "sign": "+"}, {"arrows": ["x"], "sign": "-"}]}
    with pytest.raises(DimerError) as err:
        validate(bad)
    assert "FaceTooShort" in err.value.codes


def test_face_not_a_cycle():
    bad = copy.deepcopy(CONIFOLD)
    bad["faces"][0]["arrows"] = ["a1", "a2", "b1", "b2"]
    with pytest.raises(DimerError) as err:
        validate(bad)
    assert "NotACycle" in err.value.codes


def test_disconnected():
    two = copy.deepcopy(CONIFOLD)
    for a in CONIFOLD["arrows"]:
        two["arrows"].append({"id": a["id"] + "'", "tail": a["tail"] + "'", "head": a["head"] + "'"})
    two["vertices"] += ["1'", "2'"]
    for f in CONIFOLD["faces"]:
        two["faces"].append({"arrows": [x + "'" for x in f["arrows"]], "sign": f["sign"]})
    with pytest.raises(DimerError) as err:
        validate(two)
    assert "Disconnected" in err.value.codes


def test_malformed_input():
    with pytest.raises(DimerError) as err:
        validate({"vertices": ["1"]})
    assert err.value.codes == ["Malformed"]


def test_fig_ab_a_valid():
    d = fixture("fig_ab_a").dimer
    assert sorted(d.vertices) == ["1", "2"]
    assert {(a.id, a.tail, a.head) for a in d.arrows} == {
        ("y", "1", "1"), ("z", "1", "1"), ("a", "1", "2"), ("b", "2", "1")}


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_is_bit_exact(name):
    d = fixture(name).dimer
    text = d.to_json()
    assert loads(text).to_json() == text
    assert validate(json.loads(text)) == d


@pytest.mark.parametrize("name", NAMES)
def test_every_arrow_in_one_face_of_each_sign(name):
    d = fixture(name).dimer
    for a in d.arrow_ids:
        signs = sorted(f.sign for f in d.faces for x in f.arrows if x == a)
        assert signs == ["+", "-"]


@pytest.mark.parametrize("name", NAMES)
def test_faces_have_zero_class(name):
    d = fixture(name).dimer
    hl = homology_labels(d)
    for f in d.faces:
        assert hl.hom(Path(f.arrows)) == (0, 0)


@pytest.mark.parametrize("name", NAMES)
def test_generators_have_unit_classes(name):
    """Closing each generator arrow through label-zero arrows gives (1,0) and (0,1)."""
    d = fixture(name).dimer
    hl = homology_labels(d)
    zero = [a for a in d.arrows if hl.labels[a.id] == (0, 0)]
    # undirected walk through zero-label arrows never changes the displacement
    for gen, want in zip(hl.generators, [(1, 0), (0, 1)]):
        a = d.arrow_map[gen]
        seen = {a.head}
        todo = deque([a.head])
        while todo:
            v = todo.popleft()
            for z in zero:
                for x, y in ((z.tail, z.head), (z.head, z.tail)):
                    if x == v and y not in seen:
                        seen.add(y)
                        todo.append(y)
        assert a.tail in seen
        assert hl.labels[gen] == want


@pytest.mark.parametrize("name", NAMES)
def test_labels_are_deterministic(name):
    d = validate(raw(name))
    assert homology_labels(d).labels == homology_labels(validate(raw(name))).labels


def test_conifold_two_cycle_has_nonzero_class(conifold):
    hl = homology_labels(conifold.dimer)
    t, h, disp = lift_endpoint(conifold.dimer, Path(("a1", "b2")), hl)
    assert (t, h) == ("1", "1")
    assert disp != (0, 0)
    # the four two-cycles span Z^2
    classes = {hl.hom(Path((a, b))) for a in ("a1", "a2") for b in ("b1", "b2")}
    assert len(classes) == 4


def test_lift_endpoint_trivial_cases(conifold):
    d = conifold.dimer
    hl = homology_labels(d)
    assert lift_endpoint(d, Path((), "2"), hl) == ("2", "2", (0, 0))
    for v in d.vertices:
        assert lift_endpoint(d, d.unit_cycle_at(v), hl) == (v, v, (0, 0))


def test_non_composable_path_rejected(conifold):
    with pytest.raises(ValueError):
        conifold.dimer.path_ends(Path(("a1", "a2")))
    assert not conifold.dimer.is_composable(Path(("a1", "a2")))


@given(st.data())
def test_hom_is_additive(data):
    d = fixture(data.draw(st.sampled_from(NAMES))).dimer
    hl = homology_labels(d)
    p = data.draw(walks(d))
    q = data.draw(walks(d, start=d.path_ends(p)[1]))
    a, b = hl.hom(p), hl.hom(q)
    assert hl.hom(p + q) == (a[0] + b[0], a[1] + b[1])
