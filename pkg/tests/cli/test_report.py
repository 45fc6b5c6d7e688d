import json

from desire_kernel.cli.report import Report, Timing, input_hash, set_value
from tests.fixtures.models import assessment, option_set


def test_plain_and_json_rendering() -> None:
    report = Report(
        verdict="chosen",
        value=set_value(option_set([1, -1])),
        detail="{(1, -1)}",
        exit_code=0,
        input_hash="abc",
        timing=Timing(selections=2),
    )
    assert report.render(json_output=False) == "chosen {(1, -1)}\n"
    assert json.loads(report.render(json_output=True)) == {
        "verdict": "chosen",
        "value": [["1", "-1"]],
        "timing": {"selections": 2},
        "input_hash": "abc",
    }


def test_input_hash_is_canonical() -> None:
    first = assessment(option_set([1, 0], [0, 1]))
    second = assessment(option_set([0, 1], [1, 0], [1, 0]))
    payload = {"set": [["1", "0"]]}
    assert input_hash("entail", first, payload) == input_hash("entail", second, payload)
    assert input_hash("entail", first, payload) != input_hash("choose", first, payload)
