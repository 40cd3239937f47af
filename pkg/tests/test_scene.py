from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from thermflow.cases import BUILTINS, builtin
from thermflow.errors import SceneError
from thermflow.numeric import rat
from thermflow.predicate import EvaluationError, parse_predicate
from thermflow.scene import load_scene, parse_scene, serialize_scene


def scene_text(name):
    return resources.files("thermflow").joinpath(f"scenes/{name}.scene").read_text()


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_scene_files_match_builtins(name):
    parsed = parse_scene(scene_text(name))
    expected = builtin(name)
    assert parsed.initial_config() == expected.initial_config()
    assert parsed.params == expected.params
    assert parsed.props == expected.props


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_round_trip(name):
    scene = builtin(name)
    text = serialize_scene(scene)
    again = parse_scene(text)
    assert again.initial_config() == scene.initial_config()
    assert again.params == scene.params
    assert again.props == scene.props
    assert serialize_scene(again) == text


def test_load_builtin_and_path(tmp_path):
    path = tmp_path / "cs1.scene"
    path.write_text(scene_text("cs1"))
    assert load_scene(str(path)).initial_config() == load_scene("builtin:cs1").initial_config()
    with pytest.raises(SceneError):
        load_scene("builtin:cs9")


def test_crlf_and_comments():
    text = (
        "# heading comment\r\n"
        "[params] timeStep=1/2   # half-second ticks\r\n"
        "[entity a] heatCap=1 mass=1\r\n"
        "    temp=-3/2\r\n"
        "[prop warm] expr=temp(a) >= 1 # trailing\r\n"
    )
    scene = parse_scene(text)
    assert scene.params.time_step == rat(1, 2)
    assert scene.initial_config().get("a").temp == rat(-3, 2)
    assert str(scene.props["warm"]) == "temp(a) >= 1"


def test_params_constants():
    scene = parse_scene("[params] precision=4 meltPoint=1 boilPoint=99\n"
                        "[entity a] heatCap=1 mass=1 temp=0\n")
    assert scene.params.precision == 4
    assert scene.params.constants.melt_point == 1
    assert scene.params.constants.boil_point == 99


def test_smart_heater_defaults_qdot_from_status():
    text = ("[entity a] heatCap=1 mass=1 temp=0\n"
            "[heater h] entity=a status=on lowTemp=1 highTemp=2 capacity=3/2\n")
    assert parse_scene(text).initial_config().get("h").qdot == rat(3, 2)


@pytest.mark.parametrize(
    "text, message, line, column",
    [
        ("[entity a] heatCap=1 mass=0 temp=1\n", "mass must be positive", 1, 27),
        ("[entity a] heatCap=1 mass=1 temp=1\n"
         "[interaction i] type=convection entity1=a entity2=b area=1 convCoeff=1\n",
         "unknown entity 'b'", 2, 51),
        ("[entity a] heatCap=1 mass=1 temp=1 colour=red\n", "unknown key 'colour'", 1, 43),
        ("[entity a]\n  heatCap=1 mass=1/0 temp=1\n", "invalid rational '1/0'", 2, 18),
        ("heatCap=1\n", "expected a [section] header", 1, 1),
        ("[entity a] heatCap=1 temp=1\n", "missing 'mass'", 1, 1),
        ("[widget a] x=1\n", "unknown section", 1, 2),
        ("[entity a] heatCap=1 mass=1 temp=1\n[entity a] heatCap=1 mass=1 temp=1\n",
         "duplicate id 'a'", 2, 1),
        ("[entity a] heatCap=1 mass=1 temp=1\n[prop p] expr=temp(ghost) > 1\n",
         "unknown object 'ghost'", 2, 20),
        ("[entity a] heatCap=1 mass=1 temp=1\n[prop p] expr=temp(a) >\n", "", 2, None),
    ],
)
def test_errors_are_located(text, message, line, column):
    with pytest.raises(SceneError) as info:
        parse_scene(text)
    err = info.value
    assert message in str(err)
    assert err.line == line
    if column is not None:
        assert err.column == column
    assert str(err).startswith(f"line {line}, column ")


# predicates ----------------------------------------------------------------


@pytest.fixture
def cs1():
    return builtin("cs1").initial_config()


@pytest.mark.parametrize(
    "text, expected",
    [
        ("temp(coffee) > temp(room)", True),
        ("abs(temp(coffee) - temp(room)) <= 1/1000", False),
        ("temp(coffee) = 70 and not temp(room) != 20", True),
        ("temp(coffee) ≥ 70 and temp(room) ≤ 20", True),
        ("temp(room) * 2 + 10 = 50", True),
        ("-temp(room) < 0 or false", True),
        ("qdot(crConduct) = 0", True),
        ("true and (false or temp(coffee) / 7 = 10)", True),
        ("temp(coffee) < 69.99", False),
    ],
)
def test_predicate_examples(cs1, text, expected):
    assert parse_predicate(text, cs1)(cs1) is expected


def test_phase_and_status_predicates():
    cs3 = builtin("cs3").initial_config()
    assert parse_predicate("phaseIs(coffee, liquid)", cs3)(cs3)
    assert parse_predicate("statusIs(coffeeHeater, off)", cs3)(cs3)
    assert not parse_predicate("heatTrans(coffee) > 0", cs3)(cs3)


@pytest.mark.parametrize(
    "text, message",
    [
        ("temp(ghost) > 1", "unknown object 'ghost'"),
        ("temp(coffee) +", ""),
        ("temp(coffee)", ""),
        ("phaseIs(coffee, liquid)", "no phase"),
        ("statusIs(room, on)", ""),
        ("temp(crConduct) > 0", ""),
        ("1 < 2 < 3", ""),
        ("temp(coffee) > 1 )", ""),
    ],
)
def test_predicate_errors(cs1, text, message):
    with pytest.raises(SceneError) as info:
        parse_predicate(text, cs1)
    assert message in str(info.value)


def test_predicate_division_by_zero(cs1):
    pred = parse_predicate("temp(coffee) / (temp(room) - 20) > 1", cs1)
    with pytest.raises(EvaluationError):
        pred(cs1)


def test_predicate_text_round_trip(cs1):
    pred = parse_predicate("not (temp(coffee) - 3 * temp(room) >= -1/2) or temp(room) == 20", cs1)
    assert parse_predicate(str(pred), cs1) == pred


@settings(max_examples=100)
@given(st.integers(-100, 100), st.integers(1, 100), st.sampled_from(["<", "<=", ">", ">=", "=", "!="]))
def test_predicate_comparisons_match_python(p, q, op):
    cs1 = builtin("cs1").initial_config()
    value = rat(p, q)
    pred = parse_predicate(f"temp(coffee) {op} {p}/{q}" if p >= 0 else
                           f"temp(coffee) {op} -{-p}/{q}", cs1)
    python = {"<": 70 < value, "<=": 70 <= value, ">": 70 > value, ">=": 70 >= value,
              "=": 70 == value, "!=": 70 != value}[op]
    assert pred(cs1) is python
