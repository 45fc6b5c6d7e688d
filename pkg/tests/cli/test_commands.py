import io
import json
from pathlib import Path

import pytest

from desire_kernel.cli.commands import run
from tests.fixtures.models import ModelFiles

FOOTNOTE = {
    "space": ["x1", "x2"],
    "ordering": "nonneg",
    "assessment": [[["1", "-1"], ["-1", "1"]]],
}
CONFLICTING = {"space": ["x1", "x2"], "assessment": [[["1", "-1"]], [["-1", "1"]]]}
VACUOUS = {"space": ["x1", "x2"], "assessment": []}
GENERATORS = {"space": ["x1", "x2"], "desirable": [["-1", "2"]]}
CORNERS = {"space": ["x1", "x2"], "credal": [["1", "0"], ["0", "1"]]}
POINT = {"space": ["x1", "x2"], "credal": [["1", "0"]]}


class Result:
    def __init__(self, code: int, out: str, err: str) -> None:
        self.code = code
        self.out = out
        self.err = err

    def json(self) -> dict[str, object]:
        return json.loads(self.out)


def invoke(*argv: str | Path) -> Result:
    out, err = io.StringIO(), io.StringIO()
    code = run([str(arg) for arg in argv], stdout=out, stderr=err)
    return Result(code, out.getvalue(), err.getvalue())


@pytest.fixture
def footnote(model_files: ModelFiles) -> Path:
    return model_files.write("footnote.json", FOOTNOTE)


def test_check(model_files: ModelFiles, footnote: Path) -> None:
    assert invoke("check", footnote).out == "consistent\n"
    result = invoke("check", model_files.write("conflict.json", CONFLICTING))
    assert result.code == 1
    assert result.out == "inconsistent\n"
    assert invoke("check", model_files.write("m.json", CORNERS)).code == 0


def test_entail_with_certificate(footnote: Path) -> None:
    result = invoke(
        "entail",
        footnote,
        "--set",
        '[["1","-1"],["0","0"],["-2","2"]]',
        "--certify",
        "--json",
    )
    assert result.code == 0
    report = result.json()
    assert report["verdict"] == "entailed"
    assert report["timing"] == {"selections": 2}
    certificate = report["certificate"]
    assert isinstance(certificate, dict)
    assert certificate["kind"] == "entailed"
    assert len(certificate["branches"]) == 2
    assert len(str(report["input_hash"])) == 64


def test_not_entailed(footnote: Path) -> None:
    result = invoke("entail", footnote, "--set", '[["0","0"]]')
    assert result.code == 1
    assert result.out == "not-entailed\n"


def test_mixing_entailment(model_files: ModelFiles) -> None:
    vacuous = model_files.write("vacuous.json", VACUOUS)
    query = '[["-1","2"],["2","-1"]]'
    assert invoke("entail", vacuous, "--set", query).code == 1
    assert invoke("entail-mixing", vacuous, "--set", query).code == 0
    assert invoke("entail", vacuous, "--set", query, "--mixing").code == 0


def test_choose(footnote: Path, model_files: ModelFiles) -> None:
    query = '[["0","0"],["1","-1"],["-1","1"]]'
    result = invoke("choose", footnote, "--set", query)
    assert result.out == "chosen {(-1, 1), (1, -1)}\n"
    point = model_files.write("point.json", POINT)
    result = invoke("choose", point, "--set", '[["1","-1"],["-1","1"]]', "--json")
    assert result.json()["value"] == [["1", "-1"]]


def test_e_admissibility(model_files: ModelFiles, footnote: Path) -> None:
    corners = model_files.write("corners.json", CORNERS)
    query = '[["1","-1"],["-1","1"],["0","0"]]'
    result = invoke("e-admit", corners, "--set", query)
    assert result.out == "chosen {(-1, 1), (0, 0), (1, -1)}\n"
    assert invoke("e-admit", footnote, "--set", query).code == 2


def test_lower_prevision(model_files: ModelFiles) -> None:
    generators = model_files.write("generators.json", GENERATORS)
    assert invoke("lowprev", generators, "--gamble", '["0","1"]').out == "1/3\n"
    assert invoke("lowprev", generators, "--gamble", '["1","0"]').out == "0\n"
    corners = model_files.write("corners.json", CORNERS)
    assert invoke("lowprev", corners, "--gamble", '["1","-1"]').out == "-1\n"
    conflict = {"space": ["x1", "x2"], "desirable": [["1", "-1"], ["-1", "1"]]}
    inconsistent = model_files.write("conflict.json", conflict)
    assert invoke("lowprev", inconsistent, "--gamble", '["1","0"]').out == "unbounded\n"


def test_margin(model_files: ModelFiles) -> None:
    vacuous = model_files.write("vacuous.json", VACUOUS)
    result = invoke("margin", vacuous, "--set", '[["1","1"]]')
    assert result.code == 0
    assert result.out == "1 (supremum)\n"
    result = invoke("margin", vacuous, "--set", '[["1","0"]]', "--json")
    assert result.code == 1
    assert result.json()["value"] == {"attained": True}
    assert invoke("margin", vacuous, "--set", '[["-1","1"]]').code == 2


def test_totality(footnote: Path) -> None:
    assert invoke("total", footnote, "--gamble", '["1","-1"]').code == 0
    assert invoke("total", footnote, "--gamble", '["0","0"]').code == 2


def test_operators(model_files: ModelFiles) -> None:
    family = {"space": ["x1", "x2"], "assessment": [[["-1", "0"], ["1", "1"]]]}
    path = model_files.write("family.json", family)
    result = invoke("operators", path, "--op", "rn", "--json")
    assert result.json()["value"] == [[["-1", "0"], ["1", "1"]], [["1", "1"]]]
    assert invoke("operators", path, "--op", "rs", "--set", '[["1","1"]]').code == 0
    assert invoke("operators", path, "--op", "su", "--set", '[["1","1"]]').code == 1
    result = invoke(
        "operators",
        path,
        "--op",
        "translate",
        "--set",
        '[["2","1"]]',
        "--gamble",
        '["1","1"]',
    )
    assert result.out == "set {(1, 0)}\n"
    result = invoke(
        "operators",
        path,
        "--op",
        "chull",
        "--set",
        '[["1","0"],["0","1"]]',
        "--gamble",
        '["1","1"]',
    )
    assert result.out == "not-member\n"


def test_certificate_round_trip(footnote: Path, tmp_path: Path) -> None:
    query = '[["1","-1"],["0","0"],["-2","2"]]'
    report = invoke("entail", footnote, "--set", query, "--certify", "--json").json()
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps(report["certificate"]))
    result = invoke("verify-cert", footnote, "--cert", cert, "--set", query)
    assert result.out == "valid\n"
    other = '[["1","-1"],["0","0"],["-3","3"]]'
    assert invoke("verify-cert", footnote, "--cert", cert, "--set", other).code == 1
    cert.write_text('{"kind": "proof"}')
    assert invoke("verify-cert", footnote, "--cert", cert, "--set", query).code == 2


def test_output_does_not_depend_on_thread_count(footnote: Path) -> None:
    query = '[["0","0"],["2","-2"]]'
    argv = ("entail", footnote, "--set", query, "--certify", "--json")
    outputs = {invoke(*argv, "--threads", threads).out for threads in ("1", "2", "4")}
    assert len(outputs) == 1


def test_usage_and_model_errors(model_files: ModelFiles, footnote: Path) -> None:
    assert invoke("entail", footnote).code == 2
    assert invoke("entail", footnote, "--set", "[[1.5, 0]]").code == 2
    assert invoke("check", model_files.folder / "missing.json").code == 2
    broken = model_files.folder / "broken.json"
    broken.write_text("{")
    result = invoke("check", broken)
    assert result.code == 2
    assert result.err.startswith("error: $: malformed JSON")
    assert invoke("frobnicate", footnote).code == 2


def test_selection_cap_exit_code(footnote: Path) -> None:
    result = invoke("entail", footnote, "--set", '[["1","0"]]', "--cap", "1")
    assert result.code == 3
    assert "selection_cap=1" in result.err
