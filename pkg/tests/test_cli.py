"""End-to-end command tests: exit codes, report shapes, determinism.

Everything drives ``run(argv)`` in-process; stdout/stderr go through capsys
and files through tmp_path, so the suite never shells out.
"""

import json

import pytest

from emcverify.cli import run
from emcverify.core import SetFamily, read_family, write_family


def fam_file(path, n, k, *sets):
    write_family(str(path), SetFamily.from_sets(n, k, sets))
    return str(path)


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestConstruct:
    def test_size_only_prints_bare_decimal(self, capsys):
        assert run(["construct", "--kind", "A", "--n", "6", "--k", "2", "--s", "1",
                    "--size-only"]) == 0
        assert capsys.readouterr().out == "5\n"

    def test_report_fields(self, capsys):
        code, rep = run_json(capsys, ["construct", "--kind", "B", "--n", "6",
                                      "--k", "2", "--s", "1"])
        assert code == 0
        assert rep["size"] == 3
        assert rep["spec_version"] == "0.1.0"
        assert rep["family"]["sets"] == [[1, 2], [1, 3], [2, 3]]

    def test_emit_alias_writes_family(self, capsys, tmp_path):
        out = tmp_path / "a.txt"
        code, rep = run_json(capsys, ["construct", "--kind", "A", "--n", "6",
                                      "--k", "2", "--s", "1", "--emit", str(out)])
        assert code == 0
        assert rep["family_file"] == str(out)
        fam = read_family(str(out))
        assert len(fam) == 5 and fam.k == 2

    def test_gap_dense_reports_cover_bound(self, capsys):
        code, rep = run_json(capsys, ["construct", "--kind", "gap-dense",
                                      "--n", "66", "--k", "2", "--s", "3"])
        assert code == 0
        assert rep["elements"] == [3, 6]
        assert rep["cover_bound_total"] == 138
        assert rep["cover_term_ratios"] == ["5/64"]

    def test_gap_integrality_usage_error(self, capsys):
        assert run(["construct", "--kind", "gap-dense", "--n", "66", "--k", "2",
                    "--s", "2"]) == 2
        assert "error:" in capsys.readouterr().err


class TestShiftShadowNu:
    def test_shift_moves_family(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 5, 2, (4, 5))
        out = tmp_path / "g.txt"
        code, rep = run_json(capsys, ["shift", "--in", src, "--closure",
                                      "--family-out", str(out)])
        assert code == 0
        assert rep["applied"] > 0 and not rep["was_already_shifted"]
        assert read_family(str(out)).as_sets() == [(1, 2)]

    def test_shift_fixpoint_flagless(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 2, (1, 2))
        code, rep = run_json(capsys, ["shift", "--in", src])
        assert code == 0
        assert rep["was_already_shifted"]

    def test_shadow_depth_matches_direction_form(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 5, 3, (1, 2, 3), (2, 3, 4))
        code_a, rep_a = run_json(capsys, ["shadow", "--in", src, "--depth", "1"])
        code_b, rep_b = run_json(capsys, ["shadow", "--in", src, "--direction",
                                          "lower", "--target-size", "2"])
        assert code_a == code_b == 0
        assert rep_a == rep_b
        assert rep_a["shadow_size"] == 5 and rep_a["verdict"]

    def test_shadow_upper_flag(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 1, (1,), (2,))
        code, rep = run_json(capsys, ["shadow", "--in", src, "--upper", "2"])
        assert code == 0
        assert rep["direction"] == "upper"
        assert rep["shadow_size"] == 5 and rep["kk_min"] == 5

    def test_shadow_depth_upper_conflict(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 2, (1, 2))
        assert run(["shadow", "--in", src, "--depth", "1", "--upper", "3"]) == 2
        assert "mutually exclusive" in capsys.readouterr().err

    def test_shadow_family_out(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 2, (1, 2), (3, 4))
        out = tmp_path / "sh.txt"
        code, rep = run_json(capsys, ["shadow", "--in", src, "--depth", "1",
                                      "--family-out", str(out)])
        assert code == 0
        assert read_family(str(out)).as_sets() == [(1,), (2,), (3,), (4,)]

    def test_nu(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 6, 2, (1, 2), (3, 4), (1, 3))
        code, rep = run_json(capsys, ["nu", "--in", src])
        assert code == 0
        assert rep["nu"] == 2


class TestRainbow:
    def test_complete_tuple_exit_zero(self, capsys, tmp_path):
        a = fam_file(tmp_path / "a.txt", 4, 2, (1, 2), (3, 4))
        b = fam_file(tmp_path / "b.txt", 4, 2, (1, 2))
        code, rep = run_json(capsys, ["rainbow", "--in", a, b])
        assert code == 0
        assert rep["complete"]
        assert rep["assignment"] == [[3, 4], [1, 2]]

    def test_cross_dependent_exit_one(self, capsys, tmp_path):
        a = fam_file(tmp_path / "a.txt", 4, 2, (1, 2))
        b = fam_file(tmp_path / "b.txt", 4, 2, (1, 2))
        code, rep = run_json(capsys, ["rainbow", "--in", a, b])
        assert code == 1
        assert not rep["complete"]


class TestFamilyFileErrors:
    def test_malformed_line_number_on_stderr(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("3 2\n1 2\n2 1\n")
        assert run(["nu", "--in", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "line 3" in err and "ascending" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(["nu", "--in", str(tmp_path / "nope.txt")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_json_family(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\n  broken\n")
        assert run(["nu", "--in", str(bad)]) == 2
        assert "line" in capsys.readouterr().err


class TestSampleMatchingCmd:
    def test_deterministic_bytes(self, capsys, tmp_path):
        f1, f2 = tmp_path / "1.json", tmp_path / "2.json"
        assert run(["sample-matching", "--n", "9", "--k", "2", "--s", "2",
                    "--seed", "7", "--out", str(f1)]) == 0
        assert run(["sample-matching", "--n", "9", "--k", "2", "--s", "2",
                    "--seed", "7", "--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()
        assert capsys.readouterr().out == ""

    def test_family_out_is_readable_matching(self, capsys, tmp_path):
        out = tmp_path / "m.txt"
        code, rep = run_json(capsys, ["sample-matching", "--n", "9", "--k", "2",
                                      "--s", "2", "--t", "3", "--family-out", str(out)])
        assert code == 0
        m = read_family(str(out))
        assert m.k == 1 and len(m) == 3
        assert [list(b) for b in m.as_sets()] == rep["blocks"]
        assert all(b[0] >= 4 for b in rep["blocks"])


class TestConcentrationCmd:
    def test_exact_star_verdict(self, capsys, tmp_path):
        g = fam_file(tmp_path / "g.txt", 6, 1, (3,), (4,))
        code, rep = run_json(capsys, ["concentration", "--family", g, "--n", "6",
                                      "--k", "2", "--s", "1", "--exact"])
        assert code == 0
        assert rep["verdict"]
        assert rep["alpha"] == "1/2"

    def test_exact_csv(self, capsys, tmp_path):
        g = fam_file(tmp_path / "g.txt", 6, 1, (3,), (4,))
        assert run(["concentration", "--in", g, "--n", "6", "--k", "2", "--s", "1",
                    "--exact", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "eta,probability"
        assert len(lines) >= 2

    def test_monte_carlo_csv_and_seeded_bytes(self, capsys, tmp_path):
        g = fam_file(tmp_path / "g.txt", 9, 1, (4,), (5,), (6,))
        argv = ["concentration", "--in", g, "--n", "9", "--k", "2", "--s", "2",
                "--trials", "200", "--seed", "11"]
        code, rep_a = run_json(capsys, argv)
        assert code == 0
        _, rep_b = run_json(capsys, argv)
        assert rep_a == rep_b
        assert run(argv + ["--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "eta,count"
        assert sum(int(r.split(",")[1]) for r in lines[1:]) == 200

    def test_ground_mismatch(self, capsys, tmp_path):
        g = fam_file(tmp_path / "g.txt", 6, 1, (3,))
        assert run(["concentration", "--in", g, "--n", "7", "--k", "2", "--s", "1",
                    "--exact"]) == 2


class TestVerifyGrids:
    def test_emc_small_grid(self, capsys):
        code, rep = run_json(capsys, ["verify", "emc", "--n-max", "5",
                                      "--k-max", "2", "--s-max", "1"])
        assert code == 0
        assert rep["all_ok"]
        by_key = {(r["n"], r["k"], r["s"]): r for r in rep["rows"]}
        tie = by_key[(4, 2, 1)]
        assert tie["size_a"] == tie["size_b"] == 3 and tie["found"] == 3
        assert by_key[(5, 2, 1)]["found"] == 4

    def test_rainbow_emc_small_grid(self, capsys):
        code, rep = run_json(capsys, ["verify", "rainbow-emc", "--n-max", "5",
                                      "--k-max", "2", "--s-max", "1"])
        assert code == 0
        by_key = {(r["n"], r["k"], r["s"]): r for r in rep["rows"]}
        assert by_key[(4, 2, 1)]["found"] == 3
        assert by_key[(5, 2, 1)]["found"] == 4

    def test_emc_csv(self, capsys):
        assert run(["verify", "emc", "--n-max", "4", "--k-max", "2",
                    "--s-max", "1", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n,k,s,size_a,size_b,expected,found,verdict"


class TestVerifyStatements:
    def test_lemma4_report(self, capsys):
        code, rep = run_json(capsys, ["verify", "lemma4", "--n", "9", "--k", "2",
                                      "--s", "1", "--trials", "20"])
        assert code == 0
        assert rep["all_ok"] and rep["failures"] == []
        assert rep["min_slack"] >= 0

    def test_theorem3_report(self, capsys):
        code, rep = run_json(capsys, ["verify", "theorem3", "--n", "11", "--k", "2",
                                      "--s", "1", "--trials", "10"])
        assert code == 0
        assert rep["thresholds"] == [5, 11]
        assert rep["all_ok"]

    def test_theorem3_explicit_thresholds(self, capsys):
        code, rep = run_json(capsys, ["verify", "theorem3", "--n", "8", "--k", "2",
                                      "--s", "1", "--b", "1", "--thresholds", "3,8",
                                      "--trials", "10"])
        assert code == 0
        assert rep["all_ok"]

    def test_local_lym(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 5, 2, (1, 2), (1, 3), (2, 3))
        code, rep = run_json(capsys, ["verify", "local-lym", "--in", src])
        assert code == 0
        assert rep["verdict"]

    def test_bt_default_u(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 2, (1, 2))
        code, rep = run_json(capsys, ["verify", "bt", "--in", src, "--u", "3"])
        assert code == 0
        assert rep["check"]["lhs"] == 24 and rep["check"]["rhs"] == 16

    def test_bt_empty_family_degenerate_exit_one(self, capsys, tmp_path):
        empty = tmp_path / "e.txt"
        empty.write_text("4 2\n")
        assert run(["verify", "bt", "--in", str(empty), "--u", "4"]) == 1


class TestAuditCmd:
    def test_pass_at_scale(self, capsys):
        code, rep = run_json(capsys, ["audit", "--s", "2000000", "--k", "2"])
        assert code == 0
        assert rep["all_passed"]

    def test_fail_exit_one(self, capsys):
        code, rep = run_json(capsys, ["audit", "--s", "1000000", "--k", "2"])
        assert code == 1
        names = [c["name"] for c in rep["report"]["checks"] if not c["passed"]]
        assert "gamma-margin" in names

    def test_checks_subset(self, capsys):
        code, rep = run_json(capsys, ["audit", "--s", "1000000", "--k", "2",
                                      "--checks", "t-floor,union-bound"])
        assert code == 0
        assert [c["name"] for c in rep["report"]["checks"]] == ["t-floor", "union-bound"]

    def test_csv(self, capsys):
        assert run(["audit", "--s", "2000000", "--k", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "name,passed,lhs,rhs"

    def test_scan_down(self, capsys):
        code, rep = run_json(capsys, ["audit", "--s", "2000000", "--k", "2",
                                      "--scan-down"])
        assert code == 0
        assert rep["first_failing_s"] == 1000000

    def test_unknown_check_name(self, capsys):
        assert run(["audit", "--s", "100", "--k", "2", "--checks", "bogus"]) == 2


@pytest.fixture
def tuple_dir(tmp_path):
    d = tmp_path / "tuple"
    d.mkdir()
    layer = [(a, b) for a in range(1, 7) for b in range(a + 1, 7)]
    fam_file(d / "f0.txt", 6, 2, *layer)
    fam_file(d / "f1.txt", 6, 2, *layer)
    matching = fam_file(tmp_path / "m.txt", 6, 1, (3,), (4,))
    return d, matching


class TestProcedureCmd:
    def test_full_run_finds_rainbow(self, capsys, tuple_dir):
        d, matching = tuple_dir
        code, rep = run_json(capsys, ["procedure", "--tuple", str(d),
                                      "--matching", matching])
        assert code == 0
        assert rep["trace"]["outcome"] == "rainbow-found"
        assert rep["witness_sets"] == [[1, 4], [2, 3]]

    def test_arrange_only(self, capsys, tuple_dir):
        d, matching = tuple_dir
        code, rep = run_json(capsys, ["procedure", "--tuple", str(d),
                                      "--matching", matching, "--arrange-only"])
        assert code == 0
        assert rep["trace"]["outcome"] == "arranged"
        assert rep["trace"]["order"] == [1, 2]

    def test_config_overrides(self, capsys, tuple_dir, tmp_path):
        d, matching = tuple_dir
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"u_target": 1, "gamma": 0.5}))
        code, rep = run_json(capsys, ["procedure", "--tuple", str(d),
                                      "--matching", matching, "--config", str(cfg)])
        assert code == 0
        assert rep["trace"]["config"]["u_target"] == 1
        assert rep["trace"]["config"]["gamma"] == 0.5

    def test_unknown_config_key(self, capsys, tuple_dir, tmp_path):
        d, matching = tuple_dir
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run(["procedure", "--tuple", str(d), "--matching", matching,
                    "--config", str(cfg)]) == 2
        assert "unknown config key" in capsys.readouterr().err

    def test_matching_block_size_mismatch(self, capsys, tuple_dir, tmp_path):
        d, _ = tuple_dir
        bad = fam_file(tmp_path / "m2.txt", 6, 2, (3, 4), (5, 6))
        assert run(["procedure", "--tuple", str(d), "--matching", bad]) == 2
        assert "1)-sets" in capsys.readouterr().err

    def test_matching_overlap(self, capsys, tuple_dir, tmp_path):
        d, _ = tuple_dir
        bad = fam_file(tmp_path / "m3.txt", 6, 2, (3, 4), (4, 5))
        assert run(["procedure", "--tuple", str(d), "--matching", bad]) == 2
        assert "overlapping" in capsys.readouterr().err

    def test_matching_hits_prefix(self, capsys, tuple_dir, tmp_path):
        d, _ = tuple_dir
        bad = fam_file(tmp_path / "m4.txt", 6, 1, (1,), (3,))
        assert run(["procedure", "--tuple", str(d), "--matching", bad]) == 2
        assert "prefix" in capsys.readouterr().err

    def test_tuple_dir_must_exist(self, capsys, tuple_dir, tmp_path):
        _, matching = tuple_dir
        assert run(["procedure", "--tuple", str(tmp_path / "nope"),
                    "--matching", matching]) == 2
        empty = tmp_path / "empty"
        empty.mkdir()
        assert run(["procedure", "--tuple", str(empty), "--matching", matching]) == 2


class TestHarness:
    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0
        assert "construct" in capsys.readouterr().out

    def test_no_subcommand(self, capsys):
        assert run([]) == 2

    def test_verify_without_statement(self, capsys):
        assert run(["verify"]) == 2

    def test_csv_undefined_for_subcommand(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 2, (1, 2))
        assert run(["nu", "--in", src, "--format", "csv"]) == 2
        assert "csv format is not defined" in capsys.readouterr().err

    def test_out_writes_file_only(self, capsys, tmp_path):
        target = tmp_path / "r.json"
        assert run(["construct", "--kind", "A", "--n", "6", "--k", "2", "--s", "1",
                    "--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["size"] == 5

    def test_repeat_runs_byte_identical(self, capsys, tmp_path):
        f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["verify", "emc", "--n-max", "4", "--k-max", "2", "--s-max", "1"]
        assert run(argv + ["--out", str(f1)]) == 0
        assert run(argv + ["--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_text_format(self, capsys, tmp_path):
        src = fam_file(tmp_path / "f.txt", 4, 2, (1, 2))
        assert run(["nu", "--in", src, "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert "nu: 1" in out
