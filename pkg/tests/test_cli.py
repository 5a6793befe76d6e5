import csv
import subprocess
import sys

import pytest

from productlearn import equivalent, make_register_machine, parse_moore
from productlearn.cli import main


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def learn_args(tmp_path, extra):
    return [
        "learn",
        "--format", "register:2",
        "--eq", "exact",
        "--stats-out", str(tmp_path / "stats.csv"),
        "--hyplog-out", str(tmp_path / "hyplog.csv"),
        "--learned-out", str(tmp_path / "learned.moore"),
        *extra,
    ]


class TestLearn:
    def test_product_learner_stats_row(self, tmp_path):
        assert main(learn_args(tmp_path, ["--learner", "product"])) == 0
        [row] = read_csv(tmp_path / "stats.csv")
        assert row["name"] == "M_2"
        assert row["states"] == "8"
        assert row["components"] == "2"
        assert row["learner"] == "product"
        assert int(row["mqs"]) > 0
        assert int(row["actions"]) > int(row["mqs"])

    def test_learned_machine_round_trips(self, tmp_path):
        main(learn_args(tmp_path, ["--learner", "product"]))
        learned = parse_moore((tmp_path / "learned.moore").read_text())
        target = make_register_machine(2)
        # atoms come back as strings after serialization
        assert learned.n_states == target.n_states
        assert learned.output_arity == target.output_arity

    def test_hyplog_matches_eq_count(self, tmp_path):
        main(learn_args(tmp_path, ["--learner", "product"]))
        stats = read_csv(tmp_path / "stats.csv")[0]
        log = read_csv(tmp_path / "hyplog.csv")
        assert len(log) == int(stats["eqs"])
        assert [int(r["eq_ordinal"]) for r in log] == list(range(1, len(log) + 1))
        assert int(log[-1]["reachable_states"]) == 8

    def test_mono_learner(self, tmp_path):
        assert main(learn_args(tmp_path, ["--learner", "mono"])) == 0
        [row] = read_csv(tmp_path / "stats.csv")
        assert row["components"] == "1"
        assert row["dispatch_mqs"] == "0"

    def test_one_bit_mono_learn(self, tmp_path):
        args = [
            "learn", "--format", "register:1", "--learner", "mono",
            "--eq", "exact",
            "--stats-out", str(tmp_path / "s.csv"),
            "--learned-out", str(tmp_path / "m.moore"),
        ]
        assert main(args) == 0
        [row] = read_csv(tmp_path / "s.csv")
        assert row["states"] == "2"
        learned = parse_moore((tmp_path / "m.moore").read_text())
        target = make_register_machine(1)
        # serialized machines carry string atoms and a sorted alphabet
        order = sorted(range(len(target.inputs)), key=lambda i: target.inputs[i])
        stringy = type(target)(
            [target.inputs[i] for i in order],
            [tuple(row[i] for i in order) for row in target.transitions],
            [tuple(str(x) for x in o) for o in target.state_outputs],
            target.initial,
        )
        assert equivalent(learned, stringy) is None

    def test_mono_rejects_split(self, tmp_path):
        with pytest.raises(SystemExit):
            main(learn_args(tmp_path, ["--learner", "mono", "--split", "bits"]))

    def test_grouped_split(self, tmp_path):
        args = [
            "learn", "--format", "register:4", "--split", "groups:2",
            "--learner", "product", "--eq", "exact",
            "--stats-out", str(tmp_path / "s.csv"),
        ]
        assert main(args) == 0
        [row] = read_csv(tmp_path / "s.csv")
        assert row["components"] == "2"
        assert row["states"] == "64"

    def test_sampling_run_is_deterministic(self, tmp_path):
        args = [
            "learn", "--format", "register:3", "--learner", "product",
            "--eq", "sample", "--samples", "500", "--seed", "9",
        ]
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        assert main(args + ["--stats-out", str(out_a)]) == 0
        assert main(args + ["--stats-out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_native_format_input(self, tmp_path):
        from productlearn import serialize_moore

        source = tmp_path / "m.moore"
        source.write_text(serialize_moore(make_register_machine(2)))
        args = [
            "learn", "--model", str(source), "--format", "native",
            "--learner", "product", "--eq", "exact",
            "--stats-out", str(tmp_path / "s.csv"),
        ]
        assert main(args) == 0
        [row] = read_csv(tmp_path / "s.csv")
        assert row["name"] == "m"
        assert row["states"] == "8"

    def test_kiss2_input(self, tmp_path):
        source = tmp_path / "c.kiss2"
        source.write_text(
            ".i 1\n.o 2\n.r s0\n0 s0 s0 00\n1 s0 s1 01\n0 s1 s0 10\n1 s1 s1 11\n"
        )
        args = [
            "learn", "--model", str(source), "--format", "kiss2",
            "--learner", "product", "--eq", "exact",
            "--stats-out", str(tmp_path / "s.csv"),
        ]
        assert main(args) == 0
        [row] = read_csv(tmp_path / "s.csv")
        assert row["components"] == "2"


class TestCompare:
    def test_ratio_columns(self, tmp_path):
        out = tmp_path / "cmp.csv"
        args = [
            "compare", "--format", "register:3", "--eq", "exact",
            "--stats-out", str(out),
        ]
        assert main(args) == 0
        [row] = read_csv(out)
        assert row["a_learner"] == "product"
        assert row["b_learner"] == "mono"
        total_a = int(row["a_mqs"]) + int(row["a_dispatch_mqs"])
        total_b = int(row["b_mqs"]) + int(row["b_dispatch_mqs"])
        assert float(row["mq_ratio"]) == pytest.approx(total_a / total_b, abs=1e-6)

    def test_action_ratio_favours_product_at_five_bits(self, tmp_path):
        out = tmp_path / "cmp.csv"
        args = [
            "compare", "--format", "register:5", "--eq", "exact",
            "--stats-out", str(out),
        ]
        assert main(args) == 0
        [row] = read_csv(out)
        assert float(row["action_ratio"]) < 1.0

    def test_identical_learners_give_unit_ratio(self, tmp_path):
        out = tmp_path / "cmp.csv"
        args = [
            "compare", "--format", "register:2", "--eq", "exact",
            "--learner-a", "mono", "--learner-b", "mono",
            "--stats-out", str(out),
        ]
        assert main(args) == 0
        [row] = read_csv(out)
        assert row["mq_ratio"] == "1.000000"
        assert row["action_ratio"] == "1.000000"


class TestInfo:
    def test_register_report(self, capsys):
        assert main(["info", "--format", "register:3"]) == 0
        out = capsys.readouterr().out
        assert "states: 24" in out
        assert "minimized states: 24" in out
        assert "components (3): 6 6 6" in out

    def test_one_state_machine(self, tmp_path, capsys):
        source = tmp_path / "one.moore"
        source.write_text("inputs a\noutputs 1\ninitial s\ns : 0\ns a -> s\n")
        assert main(["info", "--model", str(source), "--format", "native"]) == 0
        out = capsys.readouterr().out
        assert "states: 1" in out
        assert "minimized states: 1" in out

    def test_reverse_size_matches_library(self, capsys):
        from productlearn import reverse_machine

        assert main(["info", "--format", "register:2", "--reverse"]) == 0
        out = capsys.readouterr().out
        expected = reverse_machine(make_register_machine(2)).n_states
        assert f"reversed states: {expected}" in out

    def test_reverse_cap_produces_error_exit(self, capsys):
        code = main(["info", "--format", "register:3", "--reverse", "--reverse-cap", "2"])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "productlearn.cli", "info", "--format", "register:2"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "states: 8" in result.stdout
