from seqnorms import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_vector(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestNormCommand:
    def test_euclidean(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", "3 4")
        code, out, _ = run(capsys, "norm", "lp:p=2", vec)
        assert code == 0
        assert "norm,5,5.0" in out

    def test_tsirelson_prints_trace(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", "0 0 0 1 1 1")
        code, out, _ = run(capsys, "norm", "tsirelson:alpha=1/2", vec)
        assert code == 0
        assert "norm,3/2,1.5" in out
        assert "stabilization_level,1" in out

    def test_malformed_descriptor(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", "1")
        code, out, err = run(capsys, "norm", "banach:p=2", vec)
        assert code == 2
        assert out == ""  # no partial table on the error path

    def test_missing_file(self, capsys):
        code, out, _ = run(capsys, "norm", "lp:p=2", "/nonexistent/v.txt")
        assert code == 2

    def test_budget_exceeded(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", " ".join(["1"] * 10))
        code, out, _ = run(
            capsys, "norm", "tsirelson:alpha=1/2", vec, "--budget-support", "5"
        )
        assert code == 3 and out == ""


class TestOracleCommand:
    def test_agreement(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", "0 1 1")
        code, out, _ = run(capsys, "oracle", "1/2", vec)
        assert code == 0
        assert "flag,AGREE" in out

    def test_zero_vector(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", "0")
        code, out, _ = run(capsys, "oracle", "1/2", vec)
        assert code == 0 and "flag,AGREE" in out

    def test_cap_exceeded(self, capsys, tmp_path):
        vec = write_vector(tmp_path, "v.txt", " ".join(["1"] * 9))
        code, out, _ = run(capsys, "oracle", "1/2", vec)
        assert code == 3 and out == ""


class TestScanCommand:
    def test_c0_harmonic_constant(self, capsys):
        code, out, _ = run(capsys, "scan", "c0", "harmonic", "8")
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert lines[0] == "K,value,decimal"
        assert all(l.split(",")[1] == "1/2" for l in lines[1:])

    def test_l1_harmonic_exact_column(self, capsys):
        code, out, _ = run(capsys, "scan", "lp:p=1", "harmonic", "4")
        assert code == 0
        assert "4,77/60," in out

    def test_tsirelson_exceeds_witness_bound(self, capsys):
        from fractions import Fraction
        from seqnorms.series import harmonic_tsirelson_witness

        code, out, _ = run(capsys, "scan", "tsirelson:alpha=1/2", "harmonic", "64")
        assert code == 0
        rows = [l.split(",") for l in out.splitlines() if l and l[0].isdigit()]
        final = Fraction(rows[-1][1])
        bound, _ = harmonic_tsirelson_witness(2)
        assert final >= bound

    def test_seed_recorded_in_header(self, capsys):
        code, out, _ = run(capsys, "scan", "c0", "harmonic", "3", "--seed", "9")
        assert "# seed=9" in out


class TestBlocksCommand:
    def test_cjt_passes(self, capsys):
        code, out, _ = run(capsys, "blocks", "cjt", "--seed", "7", "--samples", "25")
        assert code == 0
        assert out.count("PASS") == 25
        assert "FAIL" not in out

    def test_lsh_l1(self, capsys):
        code, out, _ = run(
            capsys, "blocks", "lsh", "lp:p=1", "--samples", "10", "--bound", "1"
        )
        assert code == 0 and "flag,PASS" in out

    def test_lsh_violation_exit_code(self, capsys):
        code, out, _ = run(
            capsys, "blocks", "lsh", "lp:p=1", "--samples", "10", "--bound", "1/100"
        )
        assert code == 5
        assert "flag,FAIL" in out


class TestIdealCommand:
    def test_turbulence(self, capsys):
        code, out, _ = run(
            capsys, "ideal", "turbulence", "summable:w=harmonic", "--N", "200"
        )
        assert code == 0 and "turbulent-trend" in out

    def test_membership(self, capsys):
        code, out, _ = run(
            capsys, "ideal", "membership", "summable:w=harmonic", "evens", "--N", "1000"
        )
        assert code == 0 and "non-member-trend" in out

    def test_axioms(self, capsys):
        code, out, _ = run(
            capsys, "ideal", "axioms", "summable:w=harmonic", "--samples", "20"
        )
        assert code == 0 and "flag,PASS" in out


class TestCertifyCommand:
    def test_harmonic_witness(self, capsys):
        code, out, _ = run(capsys, "certify", "harmonic-tsirelson", "--k", "1")
        assert code == 0
        assert "lower_bound,9/80,0.1125" in out

    def test_budget(self, capsys):
        code, out, _ = run(capsys, "certify", "harmonic-tsirelson", "--k", "9")
        assert code == 3


class TestDeterminism:
    def test_identical_seeds_identical_bytes(self, capsys):
        a = run(capsys, "blocks", "cjt", "--seed", "11", "--samples", "20")
        b = run(capsys, "blocks", "cjt", "--seed", "11", "--samples", "20")
        assert a == b

    def test_different_seed_changes_output(self, capsys):
        a = run(capsys, "blocks", "cjt", "--seed", "11", "--samples", "20")
        b = run(capsys, "blocks", "cjt", "--seed", "12", "--samples", "20")
        assert a[1] != b[1]

    def test_global_flag_position_irrelevant(self, capsys):
        a = run(capsys, "--seed", "4", "blocks", "cjt", "--samples", "5")
        b = run(capsys, "blocks", "cjt", "--seed", "4", "--samples", "5")
        assert a == b
