import json
import math
from pathlib import Path

import numpy as np
import pytest

from grussbounds.cli import main

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_all_conditions_hold(self, capsys):
        code, out, _ = run(capsys, "check", str(INSTANCES / "two_point.json"))
        assert code == 0
        assert "all conditions hold" in out

    def test_exterior_point_names_index(self, capsys):
        code, out, _ = run(capsys, "check", str(INSTANCES / "exterior_point.json"))
        assert code == 1
        assert "index 2" in out

    def test_fit_missing_enclosure(self, capsys, tmp_path):
        doc = {
            "space": {"dim": 1},
            "weights": [0.5, 0.5],
            "sequences": {"xs": [[0.0], [1.0]]},
        }
        path = tmp_path / "nofit.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "check", str(path))
        assert code == 2  # nothing to check without an enclosure
        code, out, _ = run(capsys, "check", str(path), "--fit")
        assert code == 0
        assert "fitted enclosure x" in out

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "check", str(INSTANCES / "two_point.json"), "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["results"]["holds"] is True
        assert {c["name"] for c in doc["results"]["conditions"]} >= {"ball(x)", "box(x)", "disc(alpha)"}


class TestBound:
    def test_two_point_chain(self, capsys):
        code, out, _ = run(capsys, "bound", str(INSTANCES / "two_point.json"), "--which", "2.3")
        assert code == 0
        assert out.count("0.25") >= 3
        assert "ordering: holds" in out

    @pytest.mark.parametrize("tag", ["1.2", "1.4", "1.5", "1.6", "1.7", "2.3", "2.7", "2.8", "2.9", "2.11", "1.8", "1.9"])
    def test_all_tags_on_two_point(self, capsys, tag):
        code, out, _ = run(capsys, "bound", str(INSTANCES / "two_point.json"), "--which", tag)
        assert code == 0, out

    def test_complex_disc_chain(self, capsys):
        code, out, _ = run(capsys, "bound", str(INSTANCES / "complex_disc.json"), "--which", "R2.7")
        assert code == 0
        assert "holds" in out

    def test_forward_difference_parallel(self, capsys):
        code, out, _ = run(
            capsys, "bound", str(INSTANCES / "forward_difference.json"), "--which", "1.6", "--holder-p", "2"
        )
        assert code == 0
        assert "tightest" in out
        assert "dominance: holds" in out

    def test_holder_inf(self, capsys):
        code, out, _ = run(
            capsys, "bound", str(INSTANCES / "forward_difference.json"), "--which", "1.6", "--holder-p", "inf"
        )
        assert code == 0
        assert "pnorm(dx,inf)" in out

    def test_equal_weight_tag_rejects_nonuniform(self, capsys, tmp_path):
        doc = {
            "space": {"dim": 1},
            "weights": [0.7, 0.3],
            "sequences": {"xs": [[0.0], [1.0]], "ys": [[0.0], [1.0]]},
        }
        path = tmp_path / "skew.json"
        path.write_text(json.dumps(doc))
        code, _, err = run(capsys, "bound", str(path), "--which", "1.7")
        assert code == 2
        assert "uniform" in err

    def test_bad_tag_lists_valid(self, capsys):
        code, _, err = run(capsys, "bound", str(INSTANCES / "two_point.json"), "--which", "5.1")
        assert code == 2
        assert "2.11" in err and "R2.7" in err

    def test_missing_enclosure_without_fit(self, capsys, tmp_path):
        doc = {
            "space": {"dim": 1},
            "weights": [0.5, 0.5],
            "sequences": {"xs": [[0.0], [1.0]], "ys": [[0.0], [1.0]]},
        }
        path = tmp_path / "noencl.json"
        path.write_text(json.dumps(doc))
        code, _, err = run(capsys, "bound", str(path), "--which", "2.3")
        assert code == 2
        assert "--fit" in err
        code, out, _ = run(capsys, "bound", str(path), "--which", "2.3", "--fit")
        assert code == 0

    def test_hypothesis_failure_and_unchecked(self, capsys, tmp_path):
        code, _, err = run(capsys, "bound", str(INSTANCES / "exterior_point.json"), "--which", "2.8")
        assert code == 1
        assert "index 2" in err
        # far-exterior point: the unhypothesized inequality really is false,
        # and --unchecked surfaces that as a violated ordering
        code, out, _ = run(
            capsys, "bound", str(INSTANCES / "exterior_point.json"), "--which", "2.8", "--unchecked"
        )
        assert code == 1
        assert "UNVERIFIED" in out and "VIOLATED" in out
        # lightly-weighted exterior point: hypothesis fails, ordering survives
        doc = {
            "space": {"dim": 1},
            "weights": [0.45, 0.45, 0.1],
            "sequences": {"xs": [[0.9], [1.1], [2.05]]},
            "enclosures": {"x_lo": [0.0], "x_hi": [2.0]},
        }
        path = tmp_path / "barely.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "bound", str(path), "--which", "2.8", "--unchecked")
        assert code == 0
        assert "UNVERIFIED" in out and "ordering: holds" in out

    def test_malformed_file(self, capsys):
        code, _, err = run(capsys, "bound", str(INSTANCES / "invalid" / "bad_json.json"), "--which", "2.3")
        assert code == 2
        assert "line 1" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "bound", str(INSTANCES / "nope.json"), "--which", "2.3")
        assert code == 2

    @pytest.mark.parametrize(
        "name", ["bad_weights.json", "bad_vector_length.json", "unknown_key.json"]
    )
    def test_invalid_files_exit_2(self, capsys, name):
        code, _, err = run(capsys, "check", str(INSTANCES / "invalid" / name))
        assert code == 2
        assert err.startswith("error:")

    def test_json_output_echoes_instance(self, capsys):
        code, out, _ = run(capsys, "bound", str(INSTANCES / "two_point.json"), "--which", "2.7", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["sequences"]["xs"] == [[0], [1]]
        assert doc["results"]["which"] == "2.7"
        assert len(doc["results"]["links"]) == 3
        assert doc["results"]["holds"] is True


class TestJensen:
    def test_two_point(self, capsys):
        code, out, _ = run(capsys, "jensen", str(INSTANCES / "two_point.json"))
        assert code == 0
        assert "jensen_gap" in out and "0.25" in out and "0.5" in out

    def test_improvement_instance(self, capsys):
        code, out, _ = run(capsys, "jensen", str(INSTANCES / "jensen_improvement.json"), "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["results"]["improvement_ratio"] < 0.999
        assert doc["results"]["holds"] is True

    def test_constant_zs(self, capsys, tmp_path):
        doc = {
            "space": {"dim": 1},
            "weights": [0.5, 0.5],
            "sequences": {"zs": [[1.0], [1.0]]},
            "oracle": "squared_norm",
        }
        path = tmp_path / "const.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "jensen", str(path), "--json")
        assert code == 0
        results = json.loads(out)["results"]
        assert results["gap"] == 0
        assert all(link["value"] == 0 for link in results["chain"]["links"])

    def test_faulty_oracle_exits_1(self, capsys):
        code, _, err = run(
            capsys, "jensen", str(INSTANCES / "two_point.json"), "--oracle", "faulty_squared_norm"
        )
        assert code == 1
        assert "gradient check FAILED" in err
        assert "0.09" in err

    def test_unknown_oracle_exits_2(self, capsys):
        code, _, err = run(capsys, "jensen", str(INSTANCES / "two_point.json"), "--oracle", "cubic")
        assert code == 2
        assert "squared_norm" in err  # lists the catalog

    def test_complex_space_exits_2(self, capsys):
        code, _, err = run(capsys, "jensen", str(INSTANCES / "complex_disc.json"), "--oracle", "squared_norm")
        assert code == 2
        assert "real" in err

    def test_missing_zs(self, capsys):
        code, _, err = run(capsys, "jensen", str(INSTANCES / "forward_difference.json"), "--oracle", "squared_norm")
        assert code == 2
        assert "zs" in err


class TestSharpness:
    def test_reports_ratio(self, capsys):
        code, out, _ = run(
            capsys, "sharpness", "--target", "thm23_first", "--n", "2", "--dim", "1",
            "--budget", "300", "--seed", "9",
        )
        assert code == 0
        assert "achieved ratio" in out

    def test_invalid_target_usage_error(self, capsys):
        code, _, err = run(capsys, "sharpness", "--target", "bogus")
        assert code == 2

    def test_witness_roundtrip_bit_for_bit(self, capsys, tmp_path):
        witness = tmp_path / "witness.json"
        code, out, _ = run(
            capsys, "sharpness", "--target", "rem24_final", "--n", "2", "--dim", "1",
            "--budget", "1500", "--seed", "3", "--dump-witness", str(witness), "--json",
        )
        assert code == 0
        sharp = json.loads(out)
        assert witness.exists()

        code, out, _ = run(capsys, "bound", str(witness), "--which", "2.7", "--json")
        assert code == 0
        bound = json.loads(out)

        f1 = float(sharp["results"]["functional_value"])
        f2 = float(bound["results"]["functional"]["value"])
        b1 = float(sharp["results"]["bound_value"])
        b2 = float(bound["results"]["links"][2]["value"])
        assert f1.hex() == f2.hex()
        assert b1.hex() == b2.hex()

    def test_witness_roundtrip_other_targets(self, capsys, tmp_path):
        cases = {
            "thm23_first": ("2.3", 0),
            "thm25_first": ("2.9", 0),
            "fd_equal_weights_max": ("1.7", 0),
        }
        for target, (tag, link_index) in cases.items():
            witness = tmp_path / f"{target}.json"
            code, out, _ = run(
                capsys, "sharpness", "--target", target, "--n", "3", "--dim", "2",
                "--budget", "400", "--seed", "1", "--dump-witness", str(witness), "--json",
            )
            assert code == 0
            sharp = json.loads(out)
            code, out, _ = run(capsys, "bound", str(witness), "--which", tag, "--json")
            assert code == 0, (target, out)
            bound = json.loads(out)
            assert float(sharp["results"]["functional_value"]).hex() == float(
                bound["results"]["functional"]["value"]
            ).hex()
            assert float(sharp["results"]["bound_value"]).hex() == float(
                bound["results"]["links"][link_index]["value"]
            ).hex()


class TestSubprocess:
    def test_module_entry_point(self, tmp_path):
        import subprocess
        import sys

        result = subprocess.run(
            [sys.executable, "-m", "grussbounds.cli", "bound", str(INSTANCES / "two_point.json"), "--which", "2.3"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "ordering: holds" in result.stdout

    def test_module_entry_point_parse_error(self):
        import subprocess
        import sys

        result = subprocess.run(
            [sys.executable, "-m", "grussbounds.cli", "check", str(INSTANCES / "invalid" / "bad_json.json")],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 2


class TestUsage:
    def test_no_command(self, capsys):
        assert run(capsys, )[0] == 2

    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_bad_holder_flag(self, capsys):
        code, _, _ = run(
            capsys, "bound", str(INSTANCES / "two_point.json"), "--which", "1.6", "--holder-p", "0.5"
        )
        assert code == 2
