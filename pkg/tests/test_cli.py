"""Command-line interface: file format, reports, exit codes."""

import json

import numpy as np
import pytest

from tessarine.cli import main
from tessarine.dcmatrix import DCMatrix
from tessarine.pairfile import (
    PairFormatError,
    load_pair,
    obj_to_pair,
    pair_to_obj,
    save_pair,
)


def write_pair(path, a, b):
    m = DCMatrix(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    save_pair(path, m)
    return m


def counterexample_file(tmp_path):
    path = tmp_path / "ce.json"
    write_pair(path, np.diag([0.0, 1.0]), [[0, 1], [0, 0]])
    return str(path)


def invertible_file(tmp_path, seed=0, n=3):
    rng = np.random.default_rng(seed)
    path = tmp_path / "inv.json"
    m = write_pair(
        path,
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
    )
    return str(path), m


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestPairFile:
    def test_roundtrip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        m = DCMatrix(
            rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)),
            rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)),
        )
        path = tmp_path / "m.json"
        save_pair(path, m)
        loaded = load_pair(path)
        assert np.array_equal(loaded.a, m.a)
        assert np.array_equal(loaded.b, m.b)
        # serialize -> parse -> serialize is byte identical
        s1 = json.dumps(pair_to_obj(m))
        s2 = json.dumps(pair_to_obj(obj_to_pair(json.loads(s1))))
        assert s1 == s2

    def test_dimension_enforced(self):
        with pytest.raises(PairFormatError):
            obj_to_pair({"n": 2, "A": [[[0, 0]]], "B": [[[0, 0]]]})

    def test_entry_shape_enforced(self):
        with pytest.raises(PairFormatError):
            obj_to_pair({"n": 1, "A": [[[0]]], "B": [[[0, 0]]]})

    def test_nonfinite_rejected(self):
        with pytest.raises(PairFormatError):
            obj_to_pair({"n": 1, "A": [[[float("nan"), 0]]], "B": [[[0, 0]]]})

    def test_scalar_wire_format(self):
        from tessarine.dcnum import DoubleComplex
        from tessarine.pairfile import obj_to_scalar, scalar_to_obj

        x = DoubleComplex(1.25 - 2j, 0.5 + 3j)
        obj = scalar_to_obj(x)
        assert obj == {"p": [1.25, -2.0], "q": [0.5, 3.0]}
        assert obj_to_scalar(json.loads(json.dumps(obj))) == x
        with pytest.raises(PairFormatError):
            obj_to_scalar({"p": [0, 0]})


class TestCheck:
    def test_counterexample(self, tmp_path, capsys):
        code, doc = run_cli(capsys, "check", counterexample_file(tmp_path))
        assert code == 0
        assert doc["pinv_exists"] is False
        assert (doc["jsvd_nec1"], doc["jsvd_nec2"], doc["jsvd_nec3"]) == (
            True,
            True,
            False,
        )
        assert doc["jsvd_status"] == "not_exists"

    def test_identity_pair(self, tmp_path, capsys):
        path = tmp_path / "id.json"
        write_pair(path, np.eye(2), np.eye(2))
        code, doc = run_cli(capsys, "check", str(path))
        assert code == 0
        assert doc["pinv_exists"] is True
        assert doc["jsvd_status"] == "exists"
        assert doc["tolerances"]["tol"] == 1e-9

    def test_idempotent_scalar(self, tmp_path, capsys):
        path = tmp_path / "e.json"
        write_pair(path, [[1.0]], [[0.0]])
        code, doc = run_cli(capsys, "check", str(path))
        assert code == 0
        assert doc["pinv_exists"] is False

    def test_parse_error_exit_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["check", str(path)]) == 2

    def test_missing_file_exit_2(self):
        assert main(["check", "/nonexistent/file.json"]) == 2


class TestPinvCommand:
    def test_invertible_pair_verifies(self, tmp_path, capsys):
        path, m = invertible_file(tmp_path)
        code, doc = run_cli(capsys, "pinv", path)
        assert code == 0
        assert doc["penrose_axioms"] == [True, True, True, True]
        assert doc["residual"] <= 1e-8 * m.norm_inf()
        # re-verify from the emitted factors: m @ k @ m == m
        k = obj_to_pair(doc["pinv"])
        assert (m @ k @ m - m).norm_inf() <= 1e-8 * m.norm_inf()

    def test_no_pinv_exit_3(self, tmp_path, capsys):
        path = tmp_path / "e.json"
        write_pair(path, [[1.0]], [[0.0]])
        assert main(["pinv", str(path)]) == 3


class TestJsvdCommand:
    def test_counterexample_exit_3_with_reason(self, tmp_path, capsys):
        code, doc = run_cli(capsys, "jsvd", counterexample_file(tmp_path))
        assert code == 3
        assert doc["error"] == "necessary condition 3 fails"

    def test_factors_reverify(self, tmp_path, capsys):
        path, m = invertible_file(tmp_path, seed=1)
        code, doc = run_cli(capsys, "jsvd", path)
        assert code == 0
        u, s, v = (obj_to_pair(doc[x]) for x in ("U", "S", "V"))
        recon = u @ s @ v.star()
        assert (recon - m).norm_inf() <= max(doc["residual"], 1e-12) * 1.01

    def test_unknown_region_exit_4(self, tmp_path, capsys):
        path = tmp_path / "unk.json"
        write_pair(path, np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        code, doc = run_cli(capsys, "jsvd", str(path))
        assert code == 4
        assert doc["jsvd_status"] == "unknown"


class TestSvdCommand:
    def test_defective_exit_4(self, tmp_path, capsys):
        path = tmp_path / "def.json"
        write_pair(path, [[1, 1], [0, 1]], np.eye(2))
        code, doc = run_cli(capsys, "svd", str(path))
        assert code == 4
        assert "NotDiagonalizable" in doc["error"]

    def test_invertible_factors_reverify(self, tmp_path, capsys):
        path, m = invertible_file(tmp_path, seed=2)
        code, doc = run_cli(capsys, "svd", path)
        if code == 0:
            u, s, v = (obj_to_pair(doc[x]) for x in ("U", "S", "V"))
            assert ((u @ s @ v.star()) - m).norm_inf() <= 1e-7 * m.norm_inf()


class TestPolarCommand:
    def test_factors_reverify(self, tmp_path, capsys):
        path, m = invertible_file(tmp_path, seed=3)
        code, doc = run_cli(capsys, "polar", path)
        assert code == 0
        uf = obj_to_pair(doc["unitary_factor"])
        hf = obj_to_pair(doc["hermitian_factor"])
        assert uf.is_unitary(1e-8)
        assert hf.is_hermitian(1e-8)
        assert ((uf @ hf) - m).norm_inf() <= 1e-7 * m.norm_inf()

    def test_counterexample_exit_3(self, tmp_path, capsys):
        code, _ = run_cli(capsys, "polar", counterexample_file(tmp_path))
        assert code == 3


class TestExploreCommand:
    def test_invertible_summary(self, tmp_path, capsys):
        out = tmp_path / "scan.ndjson"
        code, doc = run_cli(
            capsys,
            "explore",
            "--trials", "100",
            "--profile", "invertible",
            "--n", "3",
            "--seed", "7",
            "--out", str(out),
        )
        assert code == 0
        assert doc["cells"] == {"similar|exists": 100}
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 100
        assert all(json.loads(line)["jsvd_status"] == "exists" for line in lines)

    def test_rerun_byte_identical(self, tmp_path, capsys):
        args = ["explore", "--trials", "30", "--profile", "dense,ranks",
                "--n", "4", "--seed", "12"]
        out1, out2 = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

    def test_counterexample_profile_records(self, tmp_path, capsys):
        out = tmp_path / "ce.ndjson"
        code, doc = run_cli(
            capsys,
            "explore",
            "--trials", "10",
            "--profile", "counterexample",
            "--seed", "0",
            "--out", str(out),
        )
        assert code == 0
        statuses = [json.loads(l)["jsvd_status"] for l in out.read_text().splitlines()]
        assert "not_exists" in statuses

    def test_env_seed_default(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("TESSARINE_SEED", "33")
        out1 = tmp_path / "env.ndjson"
        code, doc = run_cli(
            capsys, "explore", "--trials", "5", "--out", str(out1)
        )
        assert code == 0
        assert doc["seed"] == 33

    def test_bad_flags_exit_2(self, tmp_path, capsys):
        out = tmp_path / "x.ndjson"
        code = main(["explore", "--trials", "2", "--profile", "bogus",
                     "--out", str(out)])
        capsys.readouterr()
        assert code == 2
