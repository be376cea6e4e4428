import json
import random

import pytest

from conifold import cli
from conifold.fileformat import ParseError, parse_presentation, to_document

TWO = {"k": 2, "A": [[1], [-1]], "gw": []}


def run(tmp_path, capsys, doc, *args):
    path = tmp_path / "p.json"
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    code = cli.main([args[0], str(path), *args[1:]])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWO, "validate")
    assert code == 0
    assert json.loads(out)["passed"]


def test_validate_orthogonality_failure(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"k": 2, "A": [[1], [-1]], "B": [[1], [2]]}, "validate",
                       "--format", "text")
    assert code == 1
    assert "FAIL orthogonality" in out and "(1, 1)" in out


def test_validate_malformed(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, '{"k": 2, "A": [[1]', "validate")
    assert code == 2
    assert "invalid JSON" in err
    code, _, _ = run(tmp_path, capsys, {"k": 3, "A": [[1], [-1]]}, "validate")
    assert code == 2
    code, _, _ = run(tmp_path, capsys, {"k": 2}, "validate")
    assert code == 2


def test_missing_file(capsys):
    assert cli.main(["validate", "/nonexistent/file.json"]) == 2


def test_report_glue(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWO, "report", "--glue")
    doc = json.loads(out)
    assert code == 0
    assert [v["result"] for v in doc["glue"]["verdicts"]] == ["pass", "pass"]


def test_report_monodromy(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"k": 2, "B": [[1], [1]]}, "report", "--monodromy")
    doc = json.loads(out)
    assert doc["monodromy"]["blocks"][0]["matrix"] == [["2/1 · z^-1"]]
    assert doc["monodromy"]["pairings"][0]["pairing"] == [[2]]


def test_report_series_order_zero(tmp_path, capsys):
    doc = dict(TWO, triple=[[["3/2"]]])
    code, out, _ = run(tmp_path, capsys, doc, "report", "--series-order", "0")
    entries = json.loads(out)["structural_coefficients"]
    assert entries == [{"index": [1, 1, 1], "value": "3/2"}]


def test_report_yukawa(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWO, "report", "--yukawa")
    terms = json.loads(out)["yukawa"][0]["terms"]
    assert terms == [{"coeff": "2/1 · lam", "inverse_form": [1], "power": 1, "r_exponent": [0]}]


def test_report_rejects_invalid(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, {"k": 2, "A": [[1], [-1]], "B": [[1], [2]]}, "report")
    assert code == 1 and "orthogonality" in err


def test_report_deterministic_and_fixed_point(tmp_path, capsys):
    args = ("report", "--monodromy", "--yukawa", "--glue", "--series-order", "2")
    _, first, _ = run(tmp_path, capsys, {"k": 3, "A": [[1, 0], [0, 1], [-1, -1]]}, *args)
    _, second, _ = run(tmp_path, capsys, {"k": 3, "A": [[1, 0], [0, 1], [-1, -1]]}, *args)
    assert first == second
    doc = json.loads(first)
    assert cli.dumps(cli.reencode(doc)) == first


def test_text_format(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWO, "report", "--monodromy", "--glue", "--format", "text")
    assert "N1 = [['2/1 · z^-1']]" in out
    assert "dubrovin: pass" in out


def test_transform_extremal_only(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWO, "transform")
    gw = json.loads(out)["gw"]
    assert gw == [{"class": [1], "n": "2/1"}, {"class": [2], "n": "1/4"},
                  {"class": [3], "n": "2/27"}, {"class": [4], "n": "1/32"}]


def test_transform_roundtrip(tmp_path, capsys):
    rng = random.Random(5)
    base = {"k": 3, "A": [[1, 0], [0, 1], [-1, -1]], "order": 3}
    classes = {(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(6)} - {(0, 0)}
    gw = [{"class": list(c), "n": f"{rng.randint(-9, 9) or 1}/{rng.randint(1, 5)}"} for c in sorted(classes)]
    code, out, _ = run(tmp_path, capsys, dict(base, gw=gw), "transform", "--direction", "x-to-y")
    assert code == 0
    code, back, _ = run(tmp_path, capsys, out, "transform", "--direction", "y-to-x")
    assert code == 0
    got = {tuple(e["class"]): e["n"] for e in json.loads(back)["gw"]}
    from fractions import Fraction
    want = {tuple(e["class"]): Fraction(e["n"]) for e in gw}
    assert {c: Fraction(n) for c, n in got.items()} == {c: n for c, n in want.items() if n}


def test_transform_bad_direction(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, capsys, TWO, "transform", "--direction", "sideways")
    assert exc.value.code == 2


def test_transform_needs_gw(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, {"k": 2, "A": [[1], [-1]]}, "transform")
    assert code == 2 and "gw" in err


def test_document_roundtrip():
    doc = {"k": 2, "A": [[1], [-1]], "B": [[1], [1]], "triple": [[["1/2"]]],
           "hodge": {"h2X": 1, "h2Y": 2, "h3X": 4, "h3Y": 2},
           "gw": [{"class": [1, 0], "n": "5/1", "lift": [1, 0]}], "order": 3}
    pf = parse_presentation(doc)
    assert to_document(pf) == doc
    assert to_document(parse_presentation(to_document(pf))) == doc


def test_parse_errors():
    for bad in ['[]', '{"k": 1}', '{"k": 2, "A": [[1], [1, 2]]}', '{"k": true, "A": []}',
                '{"k": 2, "A": [[1], [-1]], "triple": [[1]]}', '{"k": 2, "A": [[1], [-1]], "order": -1}',
                '{"k": 2, "A": [[1], [-1]], "gw": [{"class": [1]}]}', '{"k": 2, "A": [[1], [-1]], "hodge": {}}']:
        with pytest.raises(ParseError):
            parse_presentation(bad)


def test_rank_deficient_file_is_validation_failure(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, {"k": 2, "A": [[1, 2], [1, 2]]}, "validate")
    assert code == 1 and "dependent" in err
