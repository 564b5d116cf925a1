import json

import pytest

from hyperlines.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExact:
    def test_cn_both(self, capsys):
        code, out, _ = run(capsys, "exact", "cn", "--n", "3", "--method", "both")
        assert code == 0
        assert out == "zagier 27\nsymbolic 27\n"

    def test_cn_default_method(self, capsys):
        code, out, _ = run(capsys, "exact", "cn", "--n", "4")
        assert code == 0 and out == "zagier 2875\n"

    def test_cn_symbolic_over_cap(self, capsys):
        code, _, err = run(capsys, "exact", "cn", "--n", "8", "--method", "symbolic")
        assert code == 1
        assert "capped" in err

    def test_rn(self, capsys):
        code, out, _ = run(capsys, "exact", "rn", "--n", "4")
        assert code == 0 and out == "15\n"

    def test_en3(self, capsys):
        code, out, _ = run(capsys, "exact", "en3")
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 2
        assert "6*sqrt(2)" in lines[0] and "5.485281374238571" in lines[0]
        assert "4*sqrt(2)" in lines[1] and "3.6568542494923806" in lines[1]

    def test_volume(self, capsys):
        code, out, _ = run(capsys, "exact", "volume", "--k", "2", "--m", "4", "--field", "real")
        assert code == 0
        assert float(out) == pytest.approx(19.739208802178716)

    def test_bad_n(self, capsys):
        code, _, err = run(capsys, "exact", "rn", "--n", "1")
        assert code == 1 and "error" in err


class TestMC:
    def test_en_json_record(self, capsys):
        code, out, _ = run(
            capsys, "mc", "en", "--n", "3", "--samples", "5000", "--seed", "42",
            "--threads", "2", "--format", "json",
        )
        assert code == 0
        rec = json.loads(out)
        want_keys = {
            "op", "n", "mean", "std_error", "ci95", "samples", "seed",
            "streams", "prefactor_log", "value",
        }
        assert want_keys <= set(rec)
        assert rec["op"] == "en" and rec["n"] == 3
        assert rec["samples"] == 5000 and rec["seed"] == 42 and rec["streams"] == 2
        assert 4.0 < rec["value"] < 7.0

    def test_json_reproducible(self, capsys):
        args = ("mc", "absdetsq", "--n", "3", "--samples", "4000", "--seed", "9",
                "--threads", "3", "--format", "json")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_text_format(self, capsys):
        code, out, _ = run(
            capsys, "mc", "signeddet", "--n", "3", "--samples", "2000", "--seed", "1",
            "--format", "text",
        )
        assert code == 0 and "mean:" in out

    def test_seed_required(self, capsys):
        code, _, err = run(capsys, "mc", "en", "--n", "3", "--samples", "2000")
        assert code == 1

    def test_samples_validated(self, capsys):
        code, _, err = run(capsys, "mc", "en", "--n", "3", "--samples", "10", "--seed", "1")
        assert code == 1 and "samples" in err

    def test_n_cap(self, capsys):
        code, _, err = run(
            capsys, "mc", "absdet", "--n", "31", "--samples", "2000", "--seed", "1"
        )
        assert code == 1 and "guard" in err


class TestVerify:
    def test_lemmas_ok(self, capsys):
        code, out, _ = run(capsys, "verify", "lemmas", "--n", "3")
        assert code == 0
        assert "violations 0" in out and "count_match True" in out

    def test_lemmas_capacity(self, capsys):
        code, _, err = run(capsys, "verify", "lemmas", "--n", "7")
        assert code == 1
        assert "capped at n = 6" in err

    def test_signed(self, capsys):
        code, out, _ = run(capsys, "verify", "signed", "--n", "5")
        assert code == 0
        assert "closed_form 105 target 105" in out
        assert "symbolic 105" in out

    def test_signed_large_n_closed_form_only(self, capsys):
        code, out, _ = run(capsys, "verify", "signed", "--n", "12")
        assert code == 0 and "symbolic" not in out

    def test_density(self, capsys):
        code, out, _ = run(capsys, "verify", "density", "--samples", "20000", "--seed", "42")
        assert code == 0 and "p_value" in out

    def test_density_min_samples(self, capsys):
        code, _, err = run(capsys, "verify", "density", "--samples", "50", "--seed", "42")
        assert code == 1

    def test_realify(self, capsys):
        code, out, _ = run(capsys, "verify", "realify", "--trials", "64")
        assert code == 0 and "nonnegative True" in out


class TestSqrtLaw:
    def test_csv(self, capsys):
        code, out, _ = run(
            capsys, "sqrtlaw", "--n-min", "3", "--n-max", "4", "--samples", "3000",
            "--seed", "42", "--threads", "2", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "n,log_en,log_cn,ratio,lower_bound_ratio,std_error"
        assert len(lines) == 3


class TestDump:
    def test_poly(self, capsys, tmp_path):
        out_path = tmp_path / "poly3.txt"
        code, _, err = run(capsys, "dump", "poly", "--n", "3", "--out", str(out_path))
        assert code == 0
        text = out_path.read_text()
        assert text.startswith("1 0 0 2 2 0 0\n")
        assert len(text.strip().split("\n")) == 7
        assert "wrote 7 monomials" in err


class TestParsing:
    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "exact", "zz")[0] == 1

    def test_no_args(self, capsys):
        assert run(capsys)[0] == 1

    def test_unknown_flag(self, capsys):
        assert run(capsys, "exact", "rn", "--n", "3", "--fast")[0] == 1
