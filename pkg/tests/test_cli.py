import json
from pathlib import Path

import pytest

from credal_rml.cli import main
from credal_rml.core import RML, ContingentRML
from credal_rml.problem import ProblemSpec, SpecError

SPECS = Path(__file__).resolve().parent.parent / "specs"
EX3 = str(SPECS / "example3.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSpec:
    def test_roundtrip(self):
        spec = ProblemSpec.load(EX3)
        again = ProblemSpec.from_json(spec.to_json())
        assert again.to_dict() == spec.to_dict()
        assert ProblemSpec.from_json(again.to_json()).to_json() == again.to_json()

    def test_roundtrip_contingent(self):
        d = json.loads(Path(EX3).read_text())
        d["events"]["F"] = ["w1", "w3"]
        d["rule"] = {"name": "ContingentRML", "alphas": {"E": 0.3, "F": 0.6}}
        d["signal_model"] = {"beta": 0.6, "lambda1": 0.8, "lambda2": 0.6}
        d["persuasion"] = {"lambdas": [0.6], "alphas": [0.5]}
        spec = ProblemSpec.from_dict(d)
        assert isinstance(spec.rule, ContingentRML)
        assert ProblemSpec.from_dict(spec.to_dict()).to_dict() == spec.to_dict()

    @pytest.mark.parametrize(
        "patch",
        [
            {"extra": 1},
            {"rule": {"name": "RML"}},
            {"rule": {"name": "RML", "alpha": 0.5, "beta": 1}},
            {"rule": {"name": "Nope"}},
            {"events": {"E": ["w9"]}},
            {"acts": {"bet": [1, 0]}},
            {"credal_set": [[0.5, 0.6, 0.1]]},
            {"box": [1, 0]},
            {"seed": "x"},
        ],
    )
    def test_rejects(self, patch):
        d = json.loads(Path(EX3).read_text())
        d.update(patch)
        with pytest.raises(SpecError):
            ProblemSpec.from_dict(d)

    def test_missing(self):
        with pytest.raises(SpecError):
            ProblemSpec.from_dict({"states": ["a", "b"]})
        with pytest.raises(SpecError):
            ProblemSpec.from_json("{not json")

    def test_rule_parse(self):
        d = json.loads(Path(EX3).read_text())
        d["rule"] = {"name": "RML", "alpha": 0.25}
        assert ProblemSpec.from_dict(d).rule == RML(0.25)


class TestCommands:
    def test_update_ml(self, capsys):
        code, out, _ = run(capsys, "update", EX3, "E")
        assert code == 0
        assert "1,0.5,0.5,0" in out
        assert "bet,0.5" in out

    def test_rml0_equals_fb(self, capsys):
        _, a, _ = run(capsys, "update", EX3, "E", "--rule", "RML", "--alpha", "0")
        _, b, _ = run(capsys, "update", EX3, "E", "--rule", "FB")
        assert a == b

    def test_update_json(self, capsys):
        code, out, _ = run(capsys, "update", EX3, "E", "--rule", "RML", "--alpha", "0.5", "--format", "json")
        assert code == 0
        d = json.loads(out)
        assert d["conditional_ce"]["bet"] == pytest.approx(2 / 7)

    def test_missing_event(self, capsys):
        code, _, err = run(capsys, "update", EX3, "Nope")
        assert code == 2 and "events" in err

    def test_parse_error(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"states": ["a", "b"], "credal_set": [[0.5, 0.5]], "oops": 1}')
        code, _, err = run(capsys, "update", str(p), "E")
        assert code == 2 and "oops" in err

    def test_domain_error(self, capsys, tmp_path):
        p = tmp_path / "null.json"
        p.write_text(json.dumps({
            "states": ["a", "b", "c"], "credal_set": [[1, 0, 0], [0, 0, 1]], "events": {"A": ["a"]},
        }))
        code, _, err = run(capsys, "update", str(p), "A")
        assert code == 3 and "strict-nonnull" in err

    def test_rule_flags(self, capsys):
        code, _, _ = run(capsys, "update", EX3, "E", "--rule", "RML")
        assert code == 2

    def test_table1(self, capsys):
        code, out, _ = run(capsys, "table1", "--beta", "0.6", "--alpha", "0.5", "--format", "csv")
        assert code == 0
        assert "0.6,s1,0.5,mu=1,0.777777777778,0.777777777778,equal" in out

    def test_table1_half_beta_constant(self, capsys):
        _, out, _ = run(capsys, "table1", "--beta", "0.5", "--alpha", "0", "0.5", "1", "--format", "json")
        rows = json.loads(out)
        s1 = {r["eval_f"] for r in rows if r["signal"] == "s1"}
        assert len(s1) == 1

    def test_table1_empty(self, capsys):
        code, _, _ = run(capsys, "table1", "--alpha")
        assert code == 2

    def test_axioms(self, capsys):
        code, out, _ = run(capsys, "axioms", EX3, "--axiom", "CR-B", "CR-S", "--n-acts", "100")
        assert code == 0
        reports = json.loads(out)
        assert [r["passed"] for r in reports] == [False, True]
        assert reports[0]["witness"]["f"] == [1.0, 0.0, 0.0]

    def test_axioms_fb_crc(self, capsys):
        _, out, _ = run(capsys, "axioms", EX3, "--axiom", "CR-C", "--rule", "FB", "--n-acts", "100")
        assert json.loads(out)[0]["passed"]

    def test_axioms_deterministic(self, capsys):
        _, a, _ = run(capsys, "axioms", EX3, "--axiom", "DC-CS", "--rule", "RML", "--alpha", "0.3", "--n-acts", "50")
        _, b, _ = run(capsys, "axioms", EX3, "--axiom", "DC-CS", "--rule", "RML", "--alpha", "0.3", "--n-acts", "50")
        assert a == b

    def test_axioms_unknown(self, capsys):
        code, _, _ = run(capsys, "axioms", EX3, "--axiom", "XYZ")
        assert code == 4

    def test_persuasion(self, capsys):
        code, out, _ = run(capsys, "persuasion", "--lambda", "0.6", "0.9", "0.0", "--alpha", "0.5", "0.1")
        assert code == 0
        lines = out.strip().splitlines()
        assert "0.6,0.5,a_m,a_m,a_h,0.6,true" in lines
        assert "0.9,0.1,a_l,a_l,a_h,0.3,false" in lines
        assert "0,0.5,a_m,a_m,a_h,0.5,false" in lines

    def test_divergence(self, capsys):
        code, out, _ = run(capsys, "divergence", str(SPECS / "divergence.json"), "E", "--alpha", "0.5", "--grid", "500")
        assert code == 0 and out.strip().endswith("true")

    def test_twelve_digits(self, capsys):
        _, out, _ = run(capsys, "update", EX3, "E", "--rule", "RML", "--alpha", "0.5")
        assert "0.285714285714" in out and "0.2857142857142" not in out
