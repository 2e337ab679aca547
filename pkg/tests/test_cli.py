"""End-to-end tests of the command line interface (in-process)."""

import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import svcalc as sv
from svcalc.cli import main


def _save(path, m):
    sv.save_matrix(m, str(path))
    return str(path)


class TestApply:
    def test_soft_threshold_to_file(self, tmp_path):
        src = _save(tmp_path / "a.json", np.diag([3.0, 1.0]).astype(complex))
        dst = tmp_path / "out.json"
        assert main(["apply", "--f", "soft:tau=1", "--in", src, "--out", str(dst)]) == 0
        out = sv.load_matrix(str(dst))
        assert_allclose(out, np.diag([2.0, 0.0]), atol=1e-12)

    def test_stdout_is_valid_matrix_json(self, tmp_path, capsys):
        src = _save(tmp_path / "a.json", np.eye(2, dtype=complex))
        assert main(["apply", "--f", "scale:re=3", "--in", src]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rows"] == 2 and payload["cols"] == 2
        assert payload["entries"][0] == [3.0, 0.0]

    def test_missing_input_file(self, tmp_path):
        assert main(["apply", "--f", "identity", "--in", str(tmp_path / "nope.json")]) == 2

    def test_bad_dsl(self, tmp_path):
        src = _save(tmp_path / "a.json", np.eye(2, dtype=complex))
        assert main(["apply", "--f", "wavelet:q=1", "--in", src]) == 2

    def test_round_trip_preserves_text(self, tmp_path):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        first = tmp_path / "m.json"
        sv.save_matrix(m, str(first))
        text = first.read_text()
        second = tmp_path / "again.json"
        sv.save_matrix(sv.load_matrix(str(first)), str(second))
        assert second.read_text() == text


class TestModuli:
    def test_real_function(self, capsys):
        assert main(["moduli", "--f", "soft:tau=1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["function"] == "soft:tau=1.0"
        assert payload["lip"] == 1.0
        assert payload["lip_c"] == 1.0
        assert payload["method"] == "analytic"

    def test_non_lipschitz_reports_inf(self, capsys):
        assert main(["moduli", "--f", "power:p=0.5"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["lip"] == "inf" and payload["lip_c"] == "inf"

    def test_complex_function_sampled(self, capsys):
        assert main(["moduli", "--f", "pwl:knots=0,0,0;1,1,0;2,1,1", "--grid", "32"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["method"] == "sampled"
        assert payload["lip"] <= payload["lip_c"] <= payload["lip_c_upper"] + 1e-12


class TestVerify:
    def test_pass_with_csv(self, tmp_path):
        out = tmp_path / "report.json"
        csv = tmp_path / "trials.csv"
        code = main([
            "verify", "--f", "soft:tau=1", "--dim", "4", "--trials", "50",
            "--seed", "3", "--out", str(out), "--csv", str(csv),
        ])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["pass"] is True
        assert payload["bound"] == 1.0
        assert payload["bound_kind"] == "lip_real"
        lines = csv.read_text().strip().splitlines()
        assert lines[0] == "trial_index,ratio"
        assert len(lines) == 51

    def test_not_applicable_exits_zero(self, capsys):
        code = main(["verify", "--f", "hard:tau=1", "--dim", "3", "--trials", "20"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pass"] is None
        assert payload["bound"] == "inf"

    def test_bad_dimension(self):
        assert main(["verify", "--f", "identity", "--dim", "0"]) == 2


class TestDecompose:
    def test_random_unitary_mode(self, tmp_path, capsys):
        out = tmp_path / "dec.json"
        code = main(["decompose", "--random-unitary", "5", "11", "--out", str(out)])
        assert code == 0
        assert "reconstruction error" in capsys.readouterr().out
        payload = json.loads(out.read_text())
        weights = [t["weight"] for t in payload["terms"]]
        assert sum(weights) == pytest.approx(1.0, abs=1e-12)
        perms = payload["terms"][0]["perm"]
        assert sorted(perms) == [1, 2, 3, 4, 5]

    def test_file_mode_stdout(self, tmp_path, capsys):
        w = sv.hadamard(sv.random_unitary(3, 0), np.conj(sv.random_unitary(3, 1)))
        src = _save(tmp_path / "w.json", w)
        assert main(["decompose", "--in", src]) == 0
        captured = capsys.readouterr()
        payload = json.loads(captured.out)
        rec = sv.CdssDecomposition.from_dict(payload).reconstruct()
        assert_allclose(rec, w, atol=1e-10)
        assert "reconstruction error" in captured.err

    def test_not_substochastic(self, tmp_path):
        src = _save(tmp_path / "bad.json", np.full((2, 2), 0.8, dtype=complex))
        assert main(["decompose", "--in", src]) == 4

    def test_requires_exactly_one_source(self, tmp_path):
        assert main(["decompose"]) == 2
        src = _save(tmp_path / "w.json", np.eye(2, dtype=complex))
        assert main(["decompose", "--in", src, "--random-unitary", "2", "0"]) == 2


class TestIdentityCheck:
    def test_random_mode(self, capsys):
        code = main(["identity-check", "--dim", "4", "--trials", "5", "--seed", "2"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pairs"] == 5
        assert payload["pass"] is True
        assert payload["max_error"] <= payload["tol"]

    def test_file_pair_mode(self, tmp_path, capsys):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        pa = _save(tmp_path / "a.json", a)
        pb = _save(tmp_path / "b.json", b)
        assert main(["identity-check", "--in", pa, "--in-b", pb]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pairs"] == 1 and payload["pass"] is True

    def test_single_file_rejected(self, tmp_path):
        pa = _save(tmp_path / "a.json", np.eye(2, dtype=complex))
        assert main(["identity-check", "--in", pa]) == 2


class TestExtremalScan:
    def test_csv_structure_and_agreement(self, capsys):
        code = main(["extremal-scan", "--t-min", "1e-4", "--t-max", "1e-2", "--points", "5"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,extremal_ratio,scalar_tightness"
        assert len(lines) == 6
        for line in lines[1:]:
            t, ratio, tight = (float(x) for x in line.split(","))
            assert ratio == pytest.approx(tight, rel=1e-10)
            assert ratio < math.sqrt(2.0)
            assert abs(ratio - math.sqrt(2.0)) <= 0.5 * t

    def test_bad_range(self):
        assert main(["extremal-scan", "--t-min", "1e-2", "--t-max", "1e-4"]) == 2
        assert main(["extremal-scan", "--t-min", "0", "--t-max", "1"]) == 2


class TestCompareNormal:
    def test_monomial_on_symmetry(self, tmp_path, capsys):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        src = _save(tmp_path / "swap.json", swap)
        assert main(["compare-normal", "--f", "mono:k=2", "--in", src]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["results_equal"] is False
        by_eigenvalue = {
            round(lam[0]): ok
            for lam, ok in zip(payload["eigenvalues"], payload["condition_holds"])
        }
        assert by_eigenvalue == {1: True, -1: False}

    def test_linear_map_agrees(self, tmp_path, capsys):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        src = _save(tmp_path / "swap.json", swap)
        assert main(["compare-normal", "--f", "linear:re=0.5,im=-1", "--in", src]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["results_equal"] is True
        assert payload["all_conditions_hold"] is True

    def test_scalar_extension_on_psd(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        psd = g @ g.conj().T
        src = _save(tmp_path / "psd.json", psd)
        assert main(["compare-normal", "--f", "clip:c=1", "--in", src]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["results_equal"] is True

    def test_non_normal_rejected(self, tmp_path):
        src = _save(tmp_path / "nn.json", np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
        assert main(["compare-normal", "--f", "mono:k=2", "--in", src]) == 2

    def test_bad_mono_exponent(self, tmp_path):
        src = _save(tmp_path / "m.json", np.eye(2, dtype=complex))
        assert main(["compare-normal", "--f", "mono:k=0", "--in", src]) == 2


class TestParser:
    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_no_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
