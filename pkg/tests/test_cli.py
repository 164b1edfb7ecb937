import json

import pytest

from app import cli, config
from app.cli import EXIT_CAP, EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main, parse_map_spec
from app.errors import InvalidInput
from app.pwl import same_function, truncate_tent
from app.sharkovsky import ClosureReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestMapSpecs:
    def test_catalog_with_params(self):
        assert same_function(parse_map_spec("truncate_tent:6/7"), truncate_tent("6/7"))

    def test_witness_and_constant(self):
        assert parse_map_spec("constant:1/3")(0) == parse_map_spec("constant:1/3")(1)
        assert parse_map_spec("witness:1").nodes == parse_map_spec("constant:2/3").nodes

    @pytest.mark.parametrize("spec", ["nope", "witness:x", "tent:1/2", "missing.json", "truncate_tent:1/0"])
    def test_invalid(self, spec):
        with pytest.raises(InvalidInput):
            parse_map_spec(spec)


class TestCommands:
    def test_compare(self, capsys):
        code, out, _ = run(capsys, "sharkovsky", "compare", "3", "5")
        assert code == EXIT_OK
        assert out.strip() == "3 ≺ 5"
        _, out, _ = run(capsys, "sharkovsky", "compare", "2", "6", "--format", "json")
        assert json.loads(out)["relation"] == "follows"

    def test_map_table(self, capsys):
        code, out, _ = run(capsys, "map", "--map", "truncate_tent:2/3")
        assert code == EXIT_OK
        assert "unimodality: weakly_unimodal" in out

    def test_solve_json(self, capsys):
        code, out, _ = run(capsys, "solve", "--map", "example_g", "-k", "2", "--value", "1/6",
                           "--window", "0,1/2", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["components"] == [["5/12", "5/12"]]

    def test_solve_needs_target(self, capsys):
        code, _, err = run(capsys, "solve", "-k", "2")
        assert code == EXIT_USAGE
        assert "❌" in err

    def test_orbits_json(self, capsys):
        code, out, _ = run(capsys, "orbits", "--map", "tent", "--period", "3", "--format", "json")
        assert code == EXIT_OK
        orbits = json.loads(out)["orbits"]
        assert [o["points"] for o in orbits] == [["2/9", "4/9", "8/9"], ["2/7", "4/7", "6/7"]]
        assert {o["least_period"] for o in orbits} == {3}

    def test_orbits_from_file(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"schema": "v1", "domain": ["0/1", "1/1"],
                                    "nodes": [["0/1", "1/2"], ["1/2", "1/1"], ["1/1", "0/1"]]}))
        code, out, _ = run(capsys, "orbits", "--map", str(path), "--period", "4")
        assert code == EXIT_OK
        assert "2/9 5/9 13/18 8/9" in out

    def test_bad_map_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema": "v1", "domain": ["0", "1"]}')
        code, _, _ = run(capsys, "map", "--map", str(path))
        assert code == EXIT_USAGE

    def test_closure(self, capsys):
        code, out, _ = run(capsys, "sharkovsky", "closure", "--map", "witness:5", "--upto", "7", "--format", "json")
        assert code == EXIT_OK
        data = json.loads(out)
        assert 3 not in data["period_set"]
        assert data["pass"] is True

    @pytest.mark.parametrize("action", [["compare", "3", "5"], ["closure", "--upto", "3"],
                                        ["witness", "3"], ["power2", "--levels", "1"]])
    def test_sharkovsky_actions_accept_common_options(self, action):
        args = build_parser().parse_args(["sharkovsky", *action, "--format", "csv", "--map", "example_g"])
        assert args.format == "csv"
        assert args.map == "example_g"

    def test_witness_json(self, capsys):
        code, out, _ = run(capsys, "sharkovsky", "witness", "3", "--format", "json")
        assert code == EXIT_OK
        assert json.loads(out)["schema"] == "v1"

    def test_construct_csv(self, capsys):
        code, out, _ = run(capsys, "construct", "--map", "example_g", "--orbit", "0,1/2,1", "--layer", "1",
                           "--format", "csv")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "label,value,claimed,actual,guaranteed,status"
        assert lines[1].startswith("anchor.d,1/6")
        assert not any(line.endswith("FAIL") for line in lines)

    def test_construct_rejects_even_orbit(self, capsys):
        code, _, _ = run(capsys, "construct", "--map", "tent", "--orbit", "2/5,4/5")
        assert code == EXIT_USAGE

    def test_plot_data(self, capsys):
        code, out, _ = run(capsys, "plot-data", "--map", "example_g", "--kind", "cobweb", "--start", "2/9",
                           "--steps", "8")
        assert code == EXIT_OK
        assert len(out.splitlines()) == 18

    def test_verify_subset(self, capsys):
        code, out, _ = run(capsys, "verify", "--quick", "--only", "1,12", "--format", "json")
        assert code == EXIT_OK
        data = json.loads(out)
        assert [c["number"] for c in data["criteria"]] == [1, 12]
        assert data["pass"] is True


class TestExitCodes:
    def test_help(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == EXIT_OK
        assert "sharktower" in out

    def test_unknown_command(self, capsys):
        assert run(capsys, "bogus")[0] == EXIT_USAGE

    def test_unknown_map(self, capsys):
        assert run(capsys, "map", "--map", "nope")[0] == EXIT_USAGE

    def test_piece_cap(self, capsys, monkeypatch):
        monkeypatch.setattr(config, "PIECE_CAP", 64)
        code, _, err = run(capsys, "solve", "-k", "10", "--value", "1/3", "--strategy", "explicit")
        assert code == EXIT_CAP
        assert "Piece cap exceeded" in err

    def test_failed_checks(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "verify_closure",
                            lambda f, N: ClosureReport(frozenset({1, 3}), N, [(3, 5)]))
        code, out, _ = run(capsys, "sharkovsky", "closure", "--upto", "5")
        assert code == EXIT_FAILED
        assert "3" in out and "5" in out
