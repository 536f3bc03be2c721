import json
import subprocess
import sys

from ballot_lattice import fixture_path
from ballot_lattice.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_json_report(self, capsys):
        code, out, err = run_cli(
            capsys, "analyze", "--ballot", "x>y>z>a~b~c~d", "--format", "json"
        )
        assert code == 0 and err == ""
        payload = json.loads(out)
        assert payload["classification"]["is_top_truncated"] is True
        assert len(payload["meet_irreducibles"]) == 6
        assert payload["coatoms"] == ["y"]
        assert ["x", "y"] in payload["hasse"]
        assert payload["canonical_utility"]["x"] == "3"
        verdicts = {c["claim"]: c["verdict"] for c in payload["claims"]}
        assert verdicts["T1"] == "holds" and verdicts["P1"] == "holds"
        assert verdicts["R1.1"] == "fails"

    def test_text_report(self, capsys):
        code, out, err = run_cli(capsys, "analyze", "--ballot", "x>y>z>a~b~c~d")
        assert code == 0
        assert "hasse cover lists:" in out
        assert "co-atoms: y" in out

    def test_grammar_error_exits_one(self, capsys):
        code, out, err = run_cli(capsys, "analyze", "--ballot", "a~b>c")
        assert code == 1 and out == ""
        assert err.startswith("error: ballot grammar: column 3")
        assert err.count("\n") == 1

    def test_relation_cap_is_named(self, capsys):
        ballot = ">".join(f"c{i:02d}" for i in range(13))
        code, _, err = run_cli(capsys, "analyze", "--ballot", ballot)
        assert code == 1
        assert "cap" in err and "12" in err

    def test_candidates_flag(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "analyze", "--ballot", "x>y", "--candidates", "x,y,z,w", "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["unranked"] == ["w", "z"]

    def test_malformed_candidates_flag(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--ballot", "x", "--candidates", "x,,y")
        assert code == 1 and err.startswith("error:")


class TestVerify:
    def test_n3_text(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--n", "3", "--trials", "50")
        assert code == 0
        assert "9 ballots" in out
        assert "result: ok" in out

    def test_n3_json_counts(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--n", "3", "--format", "json", "--trials", "50")
        assert code == 0
        payload = json.loads(out)
        claims = {c["claim"]: c for c in payload["claims"]}
        assert claims["T1"]["holds"] == 9
        assert claims["P1"]["holds"] == 9
        assert claims["R1.1"]["fails"] > 0
        assert payload["ok"] is True

    def test_must_failure_exits_two(self, capsys):
        # the single-candidate universe honestly fails the co-atom bound
        code, out, _ = run_cli(capsys, "verify", "--n", "1", "--format", "json", "--trials", "5")
        assert code == 2
        assert json.loads(out)["must_failures"] == ["R1.4"]

    def test_cap_validation(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--n", "8")
        assert code == 1 and "1..7" in err

    def test_env_var_lowers_the_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("BALLOT_LATTICE_MAX_N", "3")
        code, _, err = run_cli(capsys, "verify", "--n", "4")
        assert code == 1 and "1..3" in err and "BALLOT_LATTICE_MAX_N" in err

    def test_env_var_cannot_raise_the_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("BALLOT_LATTICE_MAX_N", "99")
        code, _, err = run_cli(capsys, "verify", "--n", "8")
        assert code == 1 and "1..7" in err

    def test_invalid_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("BALLOT_LATTICE_MAX_N", "many")
        code, _, err = run_cli(capsys, "verify", "--n", "3")
        assert code == 1 and "BALLOT_LATTICE_MAX_N" in err


class TestEnumerate:
    def test_text_lines(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--n", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 9
        assert lines[0] == "a>b~c"
        assert lines[-1] == "c>b>a"

    def test_json(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--n", "4", "--format", "json")
        payload = json.loads(out)
        assert payload["count"] == 40 and len(payload["ballots"]) == 40


class TestTheorem3:
    def test_full_record(self, capsys):
        code, out, _ = run_cli(
            capsys, "theorem3", "--ballot", "x>y>z>a~b~c~d", "--full", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"]["disjunct"] == "disjunct2"
        assert len(payload["verdict"]["witness"]) == 12

    def test_full_is_the_default(self, capsys):
        code, out, _ = run_cli(capsys, "theorem3", "--ballot", "p>q>r", "--format", "json")
        assert code == 0
        assert json.loads(out)["verdict"]["disjunct"] == "disjunct1"

    def test_all_subsets_sweep(self, capsys):
        code, out, _ = run_cli(
            capsys, "theorem3", "--ballot", "a>b~c", "--all-subsets", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["total_subrecords"] == 2 ** 4 - 1
        assert payload["unexpected_failures"] == []
        assert payload["counts"]["fails"] == payload["fails_all_unranked"]

    def test_all_subsets_cap(self, capsys):
        code, _, err = run_cli(
            capsys, "theorem3", "--ballot", "a>b>c>d>e>f~g", "--all-subsets"
        )
        assert code == 1 and "cap" in err

    def test_modes_are_exclusive(self, capsys):
        code, _, err = run_cli(
            capsys, "theorem3", "--ballot", "p>q>r", "--full", "--all-subsets"
        )
        assert code == 1 and err.startswith("error:")


class TestWitness:
    def test_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "witness", "--ballot", "x>y>z>a~b~c~d", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["witness"]["dimension"] == 4
        assert payload["utilities"] == {
            "a": "-9", "b": "-9", "c": "-9", "d": "-9", "x": "0", "y": "-1", "z": "-4",
        }
        assert payload["rationalizability"] == "almost_strict"
        assert payload["concavity"]["ok"] is True
        assert payload["concavity"]["trials"] == 1000

    def test_trials_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "witness", "--ballot", "p>q", "--trials", "25", "--format", "json"
        )
        assert json.loads(out)["concavity"]["trials"] == 25

    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "witness", "--ballot", "g>a~b")
        assert code == 0
        assert "dimension: 2" in out and "concavity sampling: passed" in out


class TestTabulate:
    def test_fixture(self, capsys):
        code, out, _ = run_cli(
            capsys, "tabulate", "--input", str(fixture_path()), "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["winner"] == "b"
        first = payload["rounds"][0]
        assert first["tallies"] == {"a": 1, "b": 1, "c": 1}

    def test_text(self, capsys):
        code, out, _ = run_cli(capsys, "tabulate", "--input", str(fixture_path()))
        assert code == 0 and out.strip().endswith("winner: b")

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "tabulate", "--input", "/nonexistent.csv")
        assert code == 1 and err.startswith("error:")

    def test_csv_error_reports_line(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("voter_id,rank1,rank2,rank3\nv1,x,,y\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "tabulate", "--input", str(path))
        assert code == 1 and "line 2" in err


class TestTruncate:
    def test_fixture_experiment(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "truncate", "--input", str(fixture_path()), "--lengths", "1,2,3",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["winners"] == {"1": "c", "2": "b", "3": "b"}
        assert payload["winner_divergence"] == [[1, 2], [1, 3]]

    def test_text_mentions_divergence(self, capsys):
        code, out, _ = run_cli(
            capsys, "truncate", "--input", str(fixture_path()), "--lengths", "1,3"
        )
        assert code == 0 and "winner divergence: 1 vs 3" in out

    def test_bad_lengths(self, capsys):
        code, _, err = run_cli(
            capsys, "truncate", "--input", str(fixture_path()), "--lengths", "1,9"
        )
        assert code == 1 and "outside" in err


class TestHarness:
    def test_unknown_flag_rejected(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--ballot", "a>b", "--bogus")
        assert code == 1 and err.startswith("error:")

    def test_unknown_subcommand_rejected(self, capsys):
        code, _, err = run_cli(capsys, "frobnicate")
        assert code == 1 and err.startswith("error:")

    def test_json_output_is_byte_deterministic(self, capsys):
        outputs = []
        for _ in range(2):
            _, out, _ = run_cli(
                capsys, "witness", "--ballot", "x>y>z>a~b~c~d", "--format", "json"
            )
            outputs.append(out)
        assert outputs[0] == outputs[1]
        for _ in range(2):
            _, out, _ = run_cli(capsys, "verify", "--n", "3", "--format", "json", "--trials", "100")
            outputs.append(out)
        assert outputs[2] == outputs[3]

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ballot_lattice", "analyze", "--ballot", "p>q>r",
             "--format", "json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["classification"]["is_total"] is True
