import io
import os
from contextlib import redirect_stdout

import pytest

from cosystole.cli import main
from cosystole.extensions import quaternion_q8
from cosystole.generators import cycle_complex, torus_7
from cosystole.covers import labeling_from_values
from cosystole.abelian import FiniteAbelianGroup
from cosystole.cochains import cohomology


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@pytest.fixture
def workdir(tmp_path):
    c3 = cycle_complex(3)
    (tmp_path / "c3.cx").write_text(c3.format())
    T, data = torus_7()
    (tmp_path / "torus.cx").write_text(T.format())
    Z2 = FiniteAbelianGroup((2,))
    lab = labeling_from_values(
        c3, [(0, 1), (0, 2)], {(1, 2): (1,)}, FiniteAbelianGroup((3,))
    )
    (tmp_path / "c3_triple.lab").write_text(lab.format())
    gen = cohomology(c3, 1, Z2).generators[0].representative
    (tmp_path / "gen.co").write_text(gen.format())
    inst = quaternion_q8()
    (tmp_path / "q8.ext").write_text(inst.approximation.format())
    (tmp_path / "q8.spec").write_text(inst.spec.format())
    (tmp_path / "pres.txt").write_text(inst.spec.presentation.format())
    from cosystole.sofic import induce_quotient

    induced = induce_quotient(inst.approximation).hom
    (tmp_path / "q8.hom").write_text(induced.format())
    return tmp_path


def test_cosystole_command(workdir):
    code, out = run_cli(
        ["cosystole", "--complex", str(workdir / "c3.cx"), "--degree", "1", "--coeff", "Z/2"]
    )
    assert code == 0
    assert "cosystole: 1/3" in out
    assert "certified: true" in out


def test_expansion_command(workdir):
    code, out = run_cli(
        ["expansion", "--complex", str(workdir / "c3.cx"), "--degree", "0", "--coeff", "Z/2"]
    )
    assert code == 0
    assert "epsilon: 2" in out


def test_spectrum_command(workdir):
    code, out = run_cli(
        ["spectrum", "--complex", str(workdir / "c3.cx"), "--degree", "0"]
    )
    assert code == 0
    assert "eigenvalues: 0 1.5 1.5" in out


def test_generate_and_analyze(tmp_path):
    out_path = tmp_path / "k4.cx"
    code, _ = run_cli(
        ["generate", "--family", "complete", "--n", "4", "--d", "1", "--out", str(out_path)]
    )
    assert code == 0
    code, out = run_cli(["analyze-complex", "--complex", str(out_path)])
    assert code == 0
    assert "cells[1]: 6" in out
    assert "weight-total[0]: 1" in out


def test_generate_random_purity_warning(tmp_path):
    out_path = tmp_path / "rnd.cx"
    code, _ = run_cli(
        [
            "generate", "--family", "random", "--n", "5", "--d", "1",
            "--p", "0.0", "--seed", "3", "--out", str(out_path),
        ]
    )
    assert code == 0
    text = out_path.read_text()
    assert "# purified: true" in text


def test_cover_pipeline(workdir, tmp_path):
    cover_path = tmp_path / "c9.cx"
    code, _ = run_cli(
        [
            "build-cover", "--complex", str(workdir / "c3.cx"),
            "--labeling", str(workdir / "c3_triple.lab"), "--out", str(cover_path),
        ]
    )
    assert code == 0
    assert "# connected: true" in cover_path.read_text()
    code, out = run_cli(
        [
            "shapiro-check", "--complex", str(workdir / "c3.cx"),
            "--labeling", str(workdir / "c3_triple.lab"),
            "--cochain", str(workdir / "gen.co"), "--degree", "1", "--coeff", "Z/2",
        ]
    )
    assert code == 0
    assert "equal: true" in out
    assert "norm-downstairs: 1/9" in out
    code, out = run_cli(
        [
            "vanishing-test", "--complex", str(workdir / "c3.cx"),
            "--labeling", str(workdir / "c3_triple.lab"),
            "--cochain", str(workdir / "gen.co"), "--degree", "1", "--coeff", "Z/2",
        ]
    )
    assert code == 0
    assert "verdict: nonzero" in out
    code, out = run_cli(
        [
            "pushforward", "--complex", str(workdir / "c3.cx"),
            "--labeling", str(workdir / "c3_triple.lab"),
            "--cochain", str(workdir / "gen.co"), "--degree", "1", "--coeff", "Z/2",
        ]
    )
    assert code == 0
    assert "{1:(1), 2:(1), 3:(1)}" in out
    code, out = run_cli(
        [
            "lower-bound", "--complex", str(workdir / "c3.cx"),
            "--cochain", str(workdir / "gen.co"), "--degree", "1", "--coeff", "Z/2",
            "--labeling", str(workdir / "c3_triple.lab"),
        ]
    )
    assert code == 0
    assert "minimum: 1/9" in out


def test_sofic_pipeline(workdir):
    code, out = run_cli(
        [
            "sofic-report", "--presentation", str(workdir / "pres.txt"),
            "--hom", str(workdir / "q8.hom"), "--word-length", "2",
        ]
    )
    assert code == 0
    assert "max-relator-defect: 0" in out
    code, out = run_cli(["induce", "--extension", str(workdir / "q8.ext")])
    assert code == 0
    assert "orbits: 4" in out and "ambiguity-rate: 0" in out
    code, out = run_cli(["defect-cocycle", "--extension", str(workdir / "q8.ext")])
    assert code == 0
    assert "beta[a]:" in out
    code, out = run_cli(
        [
            "compare-alpha", "--extension", str(workdir / "q8.ext"),
            "--spec", str(workdir / "q8.spec"),
        ]
    )
    assert code == 0
    assert "minimum: 1" in out
    code, out = run_cli(
        [
            "afree-check", "--extension", str(workdir / "q8.ext"),
            "--spec", str(workdir / "q8.spec"),
        ]
    )
    assert code == 0
    assert "verdict: consistent" in out and "verified: true" in out


def test_stability_command(workdir, tmp_path):
    from cosystole import perms
    from cosystole.sofic import AlmostHom

    z6 = AlmostHom(6, {"a": perms.cycle(6)})
    (tmp_path / "z6.hom").write_text(z6.format())
    code, out = run_cli(
        [
            "stability-check", "--hom", str(tmp_path / "z6.hom"),
            "--partition", "1 3 5 | 2 4 6",
            "--candidate", str(tmp_path / "z6.hom"),
            "--words", "a,aa", "--epsilon", "1/10",
        ]
    )
    assert code == 0
    assert "best-discrepancy: 0" in out
    assert "meets-epsilon: true" in out


def test_exit_codes(workdir):
    code, _ = run_cli(
        ["cosystole", "--complex", str(workdir / "nope.cx"), "--degree", "1", "--coeff", "Z/2"]
    )
    assert code == 2
    code, _ = run_cli(
        [
            "cosystole", "--complex", str(workdir / "torus.cx"),
            "--degree", "1", "--coeff", "Z/2", "--budget", "1",
        ]
    )
    assert code == 3
    with pytest.raises(SystemExit) as exc:
        run_cli(["cosystole", "--complex", "x", "--badflag"])
    assert exc.value.code == 2


def test_report_headers(workdir):
    code, out = run_cli(
        ["cosystole", "--complex", str(workdir / "c3.cx"), "--degree", "1", "--coeff", "Z/2"]
    )
    assert out.startswith("tool: cosystole ")
    assert "normalization: per-degree weights normalized to total mass 1" in out
    assert "seed: 0" in out


def test_workers_flag_does_not_change_bytes(workdir):
    torus = str(workdir / "torus.cx")
    base = [
        "cosystole", "--complex", torus, "--degree", "1", "--coeff", "Z/2",
    ]
    _, out1 = run_cli(base + ["--workers", "1"])
    _, out8 = run_cli(base + ["--workers", "8"])
    assert out1 == out8
    assert "workers" not in out1


def test_certified_only_suppresses_heuristic_numbers(workdir):
    base = [
        "cosystole", "--complex", str(workdir / "torus.cx"), "--degree", "1",
        "--coeff", "Z/2", "--budget", "16", "--heuristic",
    ]
    code, out = run_cli(base)
    assert code == 0
    assert "certified: false" in out
    assert "cosystole: " in out and "suppressed" not in out
    code, out = run_cli(base + ["--certified-only"])
    assert code == 0
    assert "cosystole: suppressed (heuristic)" in out


def test_asphericity_note_in_cover_reports(workdir):
    code, out = run_cli(
        [
            "shapiro-check", "--complex", str(workdir / "c3.cx"),
            "--labeling", str(workdir / "c3_triple.lab"),
            "--cochain", str(workdir / "gen.co"), "--degree", "1", "--coeff", "Z/2",
        ]
    )
    assert code == 0
    assert "aspherical" in out


def test_module_doctests():
    import doctest

    import cosystole.abelian

    results = doctest.testmod(cosystole.abelian)
    assert results.failed == 0 and results.attempted > 0


def test_environment_budget(workdir, monkeypatch):
    monkeypatch.setenv("COSYSTOLE_BUDGET", "1")
    code, _ = run_cli(
        ["cosystole", "--complex", str(workdir / "torus.cx"), "--degree", "1", "--coeff", "Z/2"]
    )
    assert code == 3
