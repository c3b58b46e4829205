import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from momentkit.cli import main
from momentkit.models import save_model, su2_spin, to_document
from momentkit.numeric import random_state
from momentkit.verify import SUITES, run_verify

from .conftest import philox


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(l for l in text.splitlines(True) if not l.startswith("#")))))


# ------------------------------------------------------------------ validate

def test_validate_builtin(capsys):
    code, out, _ = run(["validate", "--model", "su2:1"], capsys)
    assert code == 0
    assert "overall=PASS" in out


def test_validate_broken_closure_names_pair(tmp_path, capsys):
    import json
    doc = to_document(su2_spin(1))
    doc["structure_constants"] = [[1, 2, 3, 1.0], [2, 3, 1, 1.0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["validate", "--model", f"file:{path}"], capsys)
    assert code == 1
    assert "FAIL closure (1, 3)" in out


def test_validate_unknown_model(capsys):
    code, _, err = run(["validate", "--model", "nosuch"], capsys)
    assert code == 2
    assert "unknown model" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["validate"])
    assert exc.value.code == 2
    code, _, _ = run(["verify", "--suites", "nope"], capsys)
    assert code == 2
    code, _, _ = run(["verify", "--samples", "0"], capsys)
    assert code == 2


# ------------------------------------------------------------------ momentum

def test_momentum_basis_rows(capsys):
    code, out, _ = run(["momentum", "--model", "su2:1"], capsys)
    assert code == 0
    r = rows(out)
    assert [x["state"] for x in r] == ["e1", "e2"]
    assert [float(r[0][k]) for k in ("mu_x", "mu_y", "mu_z", "mu_center")] == [0, 0, 0.5, -1]
    assert (r[0]["stab_dim"], r[0]["ker_dim"]) == ("2", "0")


def test_momentum_torus_row(capsys):
    code, out, _ = run(["momentum", "--model", "torus:(1,1,1)"], capsys)
    assert code == 0
    e2 = rows(out)[1]
    assert [float(e2[k]) for k in ("mu_t1", "mu_t2", "mu_t3", "mu_center")] == [0, -1, 0, -1]
    # D mu = 0 at a common eigenvector, so the kernel is the whole tangent space (real dimension 2n - 2)
    assert (e2["stab_dim"], e2["ker_dim"]) == ("4", "4")


def test_momentum_random_states_on_bloch_sphere(capsys):
    code, out, _ = run(["momentum", "--model", "su2:1", "--samples", "1000", "--seed", "7"], capsys)
    assert code == 0
    r = rows(out)
    assert len(r) == 1002
    for row in r:
        mu = np.array([float(row[k]) for k in ("mu_x", "mu_y", "mu_z")])
        assert abs(np.linalg.norm(mu) - 0.5) <= 1e-10
        assert row["mu_center"] == "-1"


def test_momentum_is_deterministic(capsys, monkeypatch):
    monkeypatch.setenv("MOMENTKIT_SEED", "99")
    _, a, _ = run(["momentum", "--model", "su2:2", "--samples", "5"], capsys)
    _, b, _ = run(["momentum", "--model", "su2:2", "--samples", "5"], capsys)
    _, c, _ = run(["momentum", "--model", "su2:2", "--samples", "5", "--seed", "99"], capsys)
    _, d, _ = run(["momentum", "--model", "su2:2", "--samples", "5", "--seed", "98"], capsys)
    assert a == b == c
    assert a != d


def test_momentum_states_file_rejects_zero_rows(tmp_path, capsys):
    psi = random_state(philox(50), 2)
    path = tmp_path / "states.csv"
    path.write_text(
        "# re1,im1,re2,im2\n"
        + ",".join(repr(float(x)) for x in (psi[0].real, psi[0].imag, psi[1].real, psi[1].imag)) + "\n"
        + "0,0,0,0\n"
        + "3,0,0,0\n"
    )
    out_path = tmp_path / "mu.csv"
    code, _, err = run(["momentum", "--model", "su2:1", "--states", str(path), "--out", str(out_path)], capsys)
    assert code == 2
    assert "row2" in err
    r = rows(out_path.read_text())
    assert [x["state"] for x in r] == ["row1", "row3"]
    assert float(r[1]["mu_z"]) == 0.5


def test_momentum_states_file_errors(tmp_path, capsys):
    path = tmp_path / "states.csv"
    path.write_text("1,0,0\n")
    code, _, err = run(["momentum", "--model", "su2:1", "--states", str(path)], capsys)
    assert code == 2 and "expected 4" in err
    code, _, _ = run(["momentum", "--model", "su2:1", "--states", str(tmp_path / "missing.csv")], capsys)
    assert code == 2


def test_bad_seed_environment(capsys, monkeypatch):
    monkeypatch.setenv("MOMENTKIT_SEED", "abc")
    code, _, err = run(["momentum", "--model", "su2:1"], capsys)
    assert code == 2 and "MOMENTKIT_SEED" in err


# ------------------------------------------------------------------ verify

def test_verify_cocycle_suite_many_samples(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = run(["verify", "--suites", "cocycle", "--samples", "1000", "--out", str(out)], capsys)
    assert code == 0
    r = rows(out.read_text())
    delta = [float(x["residual"]) for x in r if x["check"].endswith("/delta_omega")]
    assert len(delta) == 4000
    assert max(delta) <= 1e-12
    assert {x["suite"] for x in r} == {"cocycle", "validate"}


def test_verify_report_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["verify", "--model", "su2:1", "--model", "weyl:8", "--samples", "5", "--seed", "3"]
    assert run(args + ["--out", str(a)], capsys)[0] == 0
    assert run(args + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.splitlines()[1] == "# seed=3 bitgen=Philox"
    assert "suite,check,sample,residual,threshold,pass" in text.splitlines()
    assert text.rstrip().endswith("# overall=PASS")


def test_suite_samples_do_not_depend_on_selection():
    models = {"su2:2": su2_spin(2)}
    alone = run_verify(models, ("equivariance",), 4, seed=11)
    together = run_verify(models, SUITES, 4, seed=11)
    pick = lambda rep: [r for r in rep.records if r.suite == "equivariance"]
    assert pick(alone) == pick(together)


def test_verify_detects_injected_fault(tmp_path, capsys):
    rep = su2_spin(1)
    gens = rep.generators.copy()
    gens[0, 0, 1] += 1e-3  # no longer anti-Hermitian
    from momentkit.lie import Representation
    path = tmp_path / "fault.json"
    save_model(Representation(rep.algebra, gens, name="faulty"), path)
    out = tmp_path / "r.csv"
    code, _, _ = run(["verify", "--model", f"file:{path}", "--suites", "hamiltonian", "--samples", "20",
                      "--out", str(out)], capsys)
    assert code == 1
    failed = [x for x in rows(out.read_text()) if x["pass"] == "0"]
    assert any(x["suite"] == "hamiltonian" for x in failed)


def test_verify_tolerance_flags(capsys):
    code, _, _ = run(["verify", "--model", "su2:1", "--suites", "stabilizer", "--samples", "3",
                      "--tol-abs", "1e-9", "--tol-null", "1e-7", "--fd-step", "1e-5"], capsys)
    assert code == 0
    code, _, _ = run(["verify", "--fd-step", "-1"], capsys)
    assert code == 2


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "momentkit", "validate", "--model", "torus:2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "overall=PASS" in proc.stdout
