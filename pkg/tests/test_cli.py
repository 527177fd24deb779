import json

from kappaforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestComputePsi:
    def test_seed_value_text(self, capsys):
        code, out, _ = run(capsys, "compute-psi", "--genus", "0", "--exponents", "0,0,0")
        assert code == 0
        assert out.strip() == "1"

    def test_solver_value(self, capsys):
        code, out, _ = run(capsys, "compute-psi", "--genus", "2", "--exponents", "4")
        assert code == 0
        assert out.strip() == "1/1152"

    def test_unstable_exits_2(self, capsys):
        code, _, err = run(capsys, "compute-psi", "--genus", "0", "--exponents", "0")
        assert code == 2
        assert err

    def test_dimension_mismatch_emits_zero(self, capsys):
        code, out, _ = run(capsys, "compute-psi", "--genus", "2", "--exponents", "1,1")
        assert code == 0
        assert out.strip() == "0"

    def test_json_format(self, capsys):
        code, out, _ = run(
            capsys, "compute-psi", "--genus", "1", "--exponents", "1", "--format", "json"
        )
        assert code == 0
        record = json.loads(out)
        assert record == {
            "kind": "psi",
            "genus": 1,
            "exponents": [[1, 1]],
            "value": "1/24",
        }


class TestComputeKappa:
    def test_full_genus_two_table_json(self, capsys):
        code, out, _ = run(
            capsys, "compute-kappa", "--max-genus", "2", "--format", "json"
        )
        assert code == 0
        records = [json.loads(line) for line in out.splitlines()]
        by_exps = {tuple(map(tuple, r["exponents"])): r["value"] for r in records if r["genus"] == 2}
        assert by_exps[((3, 1),)] == "1/1152"
        assert by_exps[((1, 1), (2, 1))] == "1/240"
        assert by_exps[((1, 3),)] == "43/2880"

    def test_single_monomial(self, capsys):
        code, out, _ = run(
            capsys, "compute-kappa", "--monomial", "1:3", "--max-genus", "2"
        )
        assert code == 0
        assert out.strip() == "43/2880"

    def test_monomial_with_kappa0(self, capsys):
        code, out, _ = run(
            capsys, "compute-kappa", "--monomial", "0:1,3:1", "--max-genus", "2"
        )
        assert code == 0
        assert out.strip() == "1/576"

    def test_invalid_bound_exits_2(self, capsys):
        code, _, err = run(capsys, "compute-kappa", "--max-genus", "0")
        assert code == 2
        assert err

    def test_malformed_monomial_exits_2(self, capsys):
        code, _, err = run(
            capsys, "compute-kappa", "--monomial", "3-1", "--max-genus", "2"
        )
        assert code == 2
        assert err

    def test_monomial_beyond_bound_exits_2(self, capsys):
        code, _, err = run(
            capsys, "compute-kappa", "--monomial", "6:1", "--max-genus", "2"
        )
        assert code == 2
        assert err

    def test_csv_format(self, capsys):
        code, out, _ = run(
            capsys, "compute-kappa", "--max-genus", "2", "--format", "csv"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "kind,genus,exponents,value"
        assert "kappa,2,3^1,1/1152" in lines

    def test_json_and_csv_agree(self, capsys):
        code, out_json, _ = run(
            capsys, "compute-kappa", "--max-genus", "2", "--format", "json"
        )
        assert code == 0
        code, out_csv, _ = run(
            capsys, "compute-kappa", "--max-genus", "2", "--format", "csv"
        )
        assert code == 0
        json_values = sorted(json.loads(l)["value"] for l in out_json.splitlines())
        csv_values = sorted(l.rsplit(",", 1)[1] for l in out_csv.splitlines()[1:])
        assert json_values == csv_values


class TestCache:
    def test_warm_cache_output_identical(self, capsys, tmp_path):
        cache = tmp_path / "numbers.cache"
        code, cold, _ = run(
            capsys,
            "compute-kappa", "--max-genus", "3", "--format", "json", "--cache", str(cache),
        )
        assert code == 0
        assert cache.exists()
        code, warm, _ = run(
            capsys,
            "compute-kappa", "--max-genus", "3", "--format", "json", "--cache", str(cache),
        )
        assert code == 0
        assert warm == cold

    def test_cache_reused_across_commands(self, capsys, tmp_path):
        cache = tmp_path / "numbers.cache"
        run(capsys, "compute-psi", "--genus", "2", "--exponents", "4", "--cache", str(cache))
        text_before = cache.read_text()
        assert "psi" in text_before
        code, out, _ = run(
            capsys, "compute-psi", "--genus", "2", "--exponents", "4", "--cache", str(cache)
        )
        assert code == 0 and out.strip() == "1/1152"

    def test_bad_cache_exits_2(self, capsys, tmp_path):
        cache = tmp_path / "numbers.cache"
        cache.write_text("something-else v1\n")
        code, _, err = run(
            capsys, "compute-kappa", "--max-genus", "2", "--cache", str(cache)
        )
        assert code == 2
        assert err


class TestVerify:
    def test_golden_tables_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "paper-tables")
        assert code == 0
        lines = out.splitlines()
        # three pinned genus-2 values plus fourteen reconstruction relations
        assert sum(1 for l in lines if l.startswith("PASS")) == 17
        assert lines[-1].startswith("OK")

    def test_cross_check_small(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "cross-check", "--max-genus", "3"
        )
        assert code == 0
        assert all(l.startswith("PASS") or l.startswith("OK") for l in out.splitlines())

    def test_cross_check_threaded_matches_serial(self, capsys):
        code, serial, _ = run(
            capsys, "verify", "--suite", "cross-check", "--max-genus", "3"
        )
        assert code == 0
        code, threaded, _ = run(
            capsys,
            "verify", "--suite", "cross-check", "--max-genus", "3", "--threads", "4",
        )
        assert code == 0
        assert serial == threaded

    def test_annihilation_suite(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "annihilation", "--max-genus", "2"
        )
        assert code == 0
        assert "Lhat_6" in out

    def test_all_suites_together(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "all", "--max-genus", "3")
        assert code == 0
        assert out.splitlines()[-1].startswith("OK")

    def test_unknown_suite_exits_2(self, capsys):
        code, _, _ = run(capsys, "verify", "--suite", "everything")
        assert code == 2

    def test_bad_threads_exits_2(self, capsys):
        code, _, err = run(
            capsys, "verify", "--suite", "paper-tables", "--threads", "0"
        )
        assert code == 2
        assert err
