import json

import numpy as np
import pytest

from dynwed.cli import main
from dynwed.core import DEL, INS, SUB, Edit, WeightTable, alignment_cost, symbols
from dynwed.workload import ParseError, Workload, parse_workload

from util import random_string, random_table


def tiny_workload(commands=()):
    w = WeightTable.unit(3, den=2)
    X = symbols([0, 1, 2, 0])
    return Workload(4, 2, w, X, X.copy(), list(commands))


class TestFormatRoundTrip:
    def test_dump_parse_identity(self):
        rng = np.random.default_rng(0)
        w = random_table(rng, 4, 3)
        X = random_string(rng, 12, 4)
        Y = random_string(rng, 9, 4)
        cmds = [
            ("U", "X", Edit(SUB, 0, 2)),
            ("Q",),
            ("U", "Y", Edit(INS, 3, 1)),
            ("U", "Y", Edit(DEL, 0)),
            ("Q",),
        ]
        wl = Workload(12, 5, w, X, Y, cmds, ["hello"])
        text = wl.dump()
        back = parse_workload(text)
        assert back.dump() == text
        assert back.n == 12 and back.k == 5
        assert back.w == w
        assert back.X.tolist() == X.tolist() and back.Y.tolist() == Y.tolist()
        assert back.commands == cmds

    def test_comments_ignored(self):
        text = tiny_workload([("Q",)]).dump()
        lines = text.splitlines()
        lines.insert(1, "# a comment")
        lines.append("# trailing")
        back = parse_workload("\n".join(lines))
        assert back.commands == [("Q",)]

    def test_malformed_header(self):
        with pytest.raises(ParseError):
            parse_workload("WED 2\n")
        with pytest.raises(ParseError):
            parse_workload("WED 1\nN 3 K\n")


class TestRun:
    def test_equal_strings_single_query(self, tmp_path, capsys):
        path = tmp_path / "w.wed"
        path.write_text(tiny_workload([("Q",)]).dump())
        assert main(["run", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "D 0"

    def test_alignment_flag(self, tmp_path, capsys):
        wl = tiny_workload([("U", "Y", Edit(SUB, 1, 0)), ("Q",)])
        path = tmp_path / "w.wed"
        path.write_text(wl.dump())
        assert main(["run", "-a", str(path)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "D 2"
        pairs = [int(v) for v in out[1].split()[1:]]
        bps = list(zip(pairs[::2], pairs[1::2]))
        Y = symbols([0, 0, 2, 0])
        assert alignment_cost(wl.X, Y, bps, wl.w) == 2

    def test_malformed_file_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.wed"
        path.write_text("WAT 9\n")
        assert main(["run", str(path)]) == 2

    def test_invalid_update_exit_3(self, tmp_path, capsys):
        wl = tiny_workload([("U", "X", Edit(DEL, 99)), ("Q",)])
        path = tmp_path / "w.wed"
        path.write_text(wl.dump())
        assert main(["run", str(path)]) == 3

    def test_inf_answer(self, tmp_path, capsys):
        w = WeightTable.unit(2)
        X = symbols([0] * 9)
        Y = symbols([1] * 9)
        wl = Workload(9, 2, w, X, Y, [("Q",)])
        path = tmp_path / "w.wed"
        path.write_text(wl.dump())
        assert main(["run", "-a", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "D INF"


class TestVerify:
    def test_small_random_ok(self, tmp_path, capsys):
        out = tmp_path / "w.wed"
        assert main(["gen", "random", str(out), "--seed", "5", "--n", "25", "--k", "4", "--updates", "30"]) == 0
        capsys.readouterr()
        assert main(["verify", str(out)]) == 0
        assert capsys.readouterr().out.strip() == "OK"

    def test_empty_command_list_ok(self, tmp_path, capsys):
        path = tmp_path / "w.wed"
        path.write_text(tiny_workload().dump())
        assert main(["verify", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "OK"

    def test_guard_exit_4(self, tmp_path, capsys):
        path = tmp_path / "w.wed"
        path.write_text(tiny_workload([("Q",)]).dump())
        assert main(["verify", str(path), "--max-verify-cells", "3"]) == 4

    def test_mutated_engine_reports_divergence(self, tmp_path, capsys, monkeypatch):
        out = tmp_path / "w.wed"
        assert main(["gen", "random", str(out), "--seed", "9", "--n", "20", "--k", "3", "--updates", "10"]) == 0
        capsys.readouterr()
        from dynwed import session as session_mod

        real = session_mod.Session.report

        def lying(self):
            val = real(self)
            return val + 1 if val is not np.inf else val

        monkeypatch.setattr(session_mod.Session, "report", lying)
        assert main(["verify", str(out)]) == 1
        assert "DIVERGENCE" in capsys.readouterr().out


class TestGen:
    def test_same_seed_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.wed", tmp_path / "b.wed"
        for out in (a, b):
            assert main(["gen", "random", str(out), "--seed", "7", "--n", "40", "--updates", "20"]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (
            json.loads((tmp_path / "a.wed.json").read_text())
            == json.loads((tmp_path / "b.wed.json").read_text())
        )

    def test_random_round_trip(self, tmp_path, capsys):
        out = tmp_path / "r.wed"
        assert main(["gen", "random", str(out), "--seed", "1", "--n", "100", "--k", "8"]) == 0
        wl = parse_workload(out.read_text())
        assert wl.dump() == out.read_text()

    def test_hard_small_verifies(self, tmp_path, capsys):
        out = tmp_path / "h.wed"
        assert main(["gen", "hard", str(out), "--seed", "3", "--m", "1", "--x", "4", "--y", "5", "--h", "1"]) == 0
        capsys.readouterr()
        assert main(["verify", str(out), "--max-verify-cells", str(1 << 30)]) == 0
        side = json.loads((tmp_path / "h.wed.json").read_text())
        assert side["recheck"] == [side["r"], side["k_hat_num"], side["k_tilde_num"]]

    def test_infeasible_hard_params(self, tmp_path, capsys):
        out = tmp_path / "h.wed"
        assert main(["gen", "hard", str(out), "--x", "2", "--h", "2", "--y", "3"]) == 3

    def test_dagger_replay_matches_expected(self, tmp_path, capsys):
        out = tmp_path / "d.wed"
        assert main(["gen", "dagger", str(out), "--seed", "11", "--m", "3", "--x", "7", "--k", "6"]) == 0
        capsys.readouterr()
        assert main(["run", str(out)]) == 0
        answers = capsys.readouterr().out.split()
        got = [answers[i + 1] for i in range(0, len(answers), 2)]
        side = json.loads((tmp_path / "d.wed.json").read_text())
        want = ["INF" if v is None else str(v) for v in side["expected"]]
        assert got == want


class TestGolden:
    def test_dagger_golden_answers(self, capsys):
        from pathlib import Path

        data = Path(__file__).parent / "data"
        assert main(["run", str(data / "golden_dagger.wed")]) == 0
        got = capsys.readouterr().out.strip()
        want = (data / "golden_dagger.answers").read_text().strip()
        assert got == want


class TestBench:
    def test_schema_stable(self, tmp_path, capsys):
        out = tmp_path / "w.wed"
        assert main(["gen", "random", str(out), "--seed", "2", "--n", "30", "--k", "4", "--updates", "6"]) == 0
        capsys.readouterr()
        csv = tmp_path / "bench.csv"
        assert main(["bench", str(out), "--repetitions", "2", "--csv", str(csv)]) == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "phase,n,k,op,median_ns"
        assert [l.split(",")[0] for l in lines[1:]] == ["init", "edit", "query"]
