import json
import os
from pathlib import Path

import pytest

from dgsupport.cli import main
from dgsupport.errors import InternalCheckError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_support_command_on_cone_fixture(capsys):
    code, out, _ = run_cli(
        capsys, "support", str(FIXTURES / "cone_plane.yaml"), "--module", "C"
    )
    assert code == 0
    assert "points 1" in out and "(0,1)" in out
    assert "origin present" in out
    assert "sha256=" in out


def test_support_respects_field_flag(capsys):
    code, out, _ = run_cli(
        capsys,
        "support", str(FIXTURES / "cone_plane.yaml"), "--module", "C", "--field", "2,2",
    )
    assert code == 0
    assert "points 3" in out
    code, _, err = run_cli(
        capsys,
        "support", str(FIXTURES / "cone_plane.yaml"), "--module", "C", "--field", "3",
    )
    assert code == 2 and "does not match" in err


def test_validate_bad_fixture_reports_entry_and_exits_2(capsys):
    code, _, err = run_cli(capsys, "validate", str(FIXTURES / "invalid_d2.yaml"))
    assert code == 2
    assert "d^2 entry (2,0)" in err


def test_validate_good_fixture(capsys):
    code, out, _ = run_cli(capsys, "validate", str(FIXTURES / "cone_plane.yaml"))
    assert code == 0
    assert "module C: ok" in out and "morphism mx1: ok" in out


def test_pipeline_trivial_module_full_plane(capsys):
    code, out, _ = run_cli(
        capsys, "pipeline", str(FIXTURES / "ke_pipeline.yaml"), "--rmodule", "k",
        "--nmax", "6",
    )
    assert code == 0
    assert "points 3" in out
    assert "(0,1)" in out and "(1,0)" in out and "(1,1)" in out
    assert "adjunction ok" in out
    assert "thick-subcategory membership" in out


def test_compare_report_cites_conclusion(capsys):
    code, out, _ = run_cli(
        capsys, "compare", str(FIXTURES / "cone_plane.yaml"),
        "--left", "K", "--right", "C",
    )
    assert code == 0
    assert "verdict contained" in out
    assert "extension level e=1" in out
    assert "thick-subcategory membership" in out


def test_compare_witness_on_failure(capsys):
    code, out, _ = run_cli(
        capsys, "compare", str(FIXTURES / "cone_plane.yaml"),
        "--left", "S", "--right", "C",
    )
    assert code == 0
    assert "witness point (1, 0)" in out


def test_budget_exceeded_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "support", str(FIXTURES / "cone_plane.yaml"), "--module", "C",
        "--budget", "2",
    )
    assert code == 3 and "budget" in err.lower()


def test_nilpotence_job_with_witness(capsys):
    code, out, _ = run_cli(
        capsys, "nilpotence", str(FIXTURES / "cone_plane.yaml"),
        "--morphism", "f_x1", "--module", "C", "--nmax", "3",
    )
    assert code == 0
    assert "vanishes at n=1" in out
    assert "witness re-check: d(witness) = cycle" in out


def test_run_batch_and_determinism_across_workers(tmp_path, capsys):
    out1 = tmp_path / "w1.txt"
    out8 = tmp_path / "w8.txt"
    for out, workers in ((out1, "1"), (out8, "8")):
        code = main([
            "run", str(FIXTURES / "cone_plane.yaml"),
            "--workers", workers, "--out", str(out),
        ])
        assert code == 0
    capsys.readouterr()
    assert out1.read_bytes() == out8.read_bytes()


def test_repeated_runs_are_byte_identical(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code = main([
            "run", str(FIXTURES / "ke_pipeline.yaml"),
            "--format", "json", "--out", str(path),
        ])
        assert code == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["version"] and doc["input_sha256"]
    assert len(doc["jobs"]) == 3


def test_json_output_embeds_digest_and_bounds(capsys):
    code, out, _ = run_cli(
        capsys, "ext", str(FIXTURES / "ke_pipeline.yaml"), "--rmodule", "k",
        "--nmax", "10", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["jobs"][0]["result"]["dims"] == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]
    assert "budget=" in doc["bounds"]
    assert len(doc["input_sha256"]) == 64


def test_fixture_dir_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("DGSUPPORT_FIXTURE_DIR", str(FIXTURES))
    code, out, _ = run_cli(capsys, "support", "cone_plane.yaml", "--module", "C")
    assert code == 0 and "points 1" in out
    monkeypatch.delenv("DGSUPPORT_FIXTURE_DIR")
    code, _, err = run_cli(capsys, "support", "cone_plane.yaml", "--module", "C")
    assert code == 2 and "not found" in err


def test_unknown_object_is_input_error(capsys):
    code, _, err = run_cli(
        capsys, "support", str(FIXTURES / "cone_plane.yaml"), "--module", "nope"
    )
    assert code == 2 and "unknown module" in err


def test_realize_output_is_reparseable(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "realize", str(FIXTURES / "cone_plane.yaml"), "--ideal", "I_origin",
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    result = doc["jobs"][0]["result"]
    # round-trip the serialized module through the declarative format
    text = "\n".join(
        [
            "ring: {p: 2, r: 2, degrees: [2, 2]}",
            "modules:",
            "  M:",
            "    generators: " + json.dumps([[n, d] for n, d in result["generators"]]),
            "    differential: " + json.dumps(result["differential"]),
        ]
    )
    doc_path = tmp_path / "roundtrip.yaml"
    doc_path.write_text(text)
    code2, out2, _ = run_cli(capsys, "support", str(doc_path), "--module", "M")
    assert code2 == 0 and "points 0" in out2 and "origin present" in out2


def test_internal_error_exit_code(monkeypatch, capsys):
    import dgsupport.cli as cli_mod

    def boom(*args, **kwargs):
        raise InternalCheckError("synthetic failure")

    monkeypatch.setattr(cli_mod, "support_points", boom)
    code, _, err = run_cli(
        capsys, "support", str(FIXTURES / "cone_plane.yaml"), "--module", "C"
    )
    assert code == 4 and "synthetic" in err


def test_bgg_command_with_explicit_lambda_module(tmp_path, capsys):
    doc = "\n".join(
        [
            "ci: {p: 2, exponents: [2, 2]}",
            "lambdamodules:",
            "  N:",
            "    dims: {0: 1}",
        ]
    )
    path = tmp_path / "bgg.yaml"
    path.write_text(doc)
    code, out, _ = run_cli(capsys, "bgg", str(path), "--lambdamodule", "N")
    assert code == 0
    assert "generators b0_0:0" in out
    assert "points 3" in out  # h(k) = S has full support


def test_window_flag_prints_homology_tables(capsys):
    code, out, _ = run_cli(
        capsys, "validate", str(FIXTURES / "cone_plane.yaml"), "--window", "0:4",
    )
    assert code == 0
    assert "homology H[0..4] 0:1 1:0 2:1 3:0 4:1" in out


def test_header_embeds_field_spec(capsys):
    code, out, _ = run_cli(
        capsys, "ext", str(FIXTURES / "ke_pipeline.yaml"), "--rmodule", "k"
    )
    assert code == 0
    assert "field ci p=2 exponents=(2,2)" in out


def test_nilpotence_witness_replays_from_json_alone(capsys):
    # a third party holding only the JSON document can re-verify the
    # boundary identity: rebuild the hom complex, parse the vectors, apply d
    code, out, _ = run_cli(
        capsys, "nilpotence", str(FIXTURES / "cone_plane.yaml"),
        "--morphism", "f_x1", "--module", "C", "--format", "json",
    )
    assert code == 0
    result = json.loads(out)["jobs"][0]["result"]
    from dgsupport.dgmodules import FreeDGModule, apply_differential
    from dgsupport.polynomials import Polynomial, graded_ring

    ring_info = result["witness_module"]["ring"]
    ring = graded_ring(
        ring_info["p"],
        len(ring_info["names"]),
        tuple(ring_info["degrees"]),
        tuple(ring_info["names"]),
        e=ring_info["e"],
    )
    module = FreeDGModule(
        ring,
        [(n, d) for n, d in result["witness_module"]["generators"]],
        [[Polynomial.parse(s, ring) for s in row]
         for row in result["witness_module"]["differential"]],
    )
    assert module.validate().ok
    witness = tuple(Polynomial.parse(s, ring) for s in result["witness"])
    cycle = tuple(Polynomial.parse(s, ring) for s in result["cycle"])
    assert apply_differential(module, witness) == cycle


BAD_DOCS = {
    "not_yaml": ("{{{{", ["support", "--module", "M"], "not valid YAML"),
    "top_level_list": ("- a\n- b\n", ["support", "--module", "M"], "must be a mapping"),
    "missing_ring": ("modules:\n  M: free\n", ["support", "--module", "M"], "'ring' section"),
    "bad_matrix_shape": (
        "ring: {p: 2, r: 2}\nmodules:\n  M:\n    generators: [[a, 0]]\n"
        "    differential: [[\"0\", \"0\"]]\n",
        ["support", "--module", "M"],
        "matrix must be 1 x 1",
    ),
    "unknown_generator": (
        "ring: {p: 2, r: 2}\nmodules:\n  M:\n    generators: [[a, 0]]\n"
        "    differential: [[\"z9\"]]\n",
        ["support", "--module", "M"],
        "unknown generator",
    ),
    "circular_definition": (
        "ring: {p: 2, r: 2}\nmodules:\n  A: {shift: [B, 1]}\n  B: {shift: [A, 1]}\n",
        ["support", "--module", "A"],
        "circular definition",
    ),
    "job_without_command": (
        "ring: {p: 2, r: 2}\njobs:\n  - {nothing: here}\n",
        ["run"],
        "needs a 'command'",
    ),
    "linear_relation": (
        "ci: {p: 2, exponents: [1, 2]}\nrmodules:\n  k: trivial\n",
        ["ext", "--rmodule", "k"],
        "square of the maximal ideal",
    ),
    "nonprime_modulus": (
        "ring: {p: 4, r: 1}\nmodules:\n  M: free\n",
        ["support", "--module", "M"],
        "not prime",
    ),
}


@pytest.mark.parametrize("name", sorted(BAD_DOCS))
def test_malformed_documents_fail_cleanly(name, tmp_path, capsys):
    text, argv, needle = BAD_DOCS[name]
    path = tmp_path / f"{name}.yaml"
    path.write_text(text)
    code, _, err = run_cli(capsys, argv[0], str(path), *argv[1:])
    assert code == 2
    assert needle in err


def test_combined_ring_and_ci_document(tmp_path, capsys):
    doc = "\n".join(
        [
            "ring: {p: 2, r: 2}",
            "ci: {p: 2, exponents: [2, 2]}",
            "modules:",
            "  C: {realize: [x1]}",
            "rmodules:",
            "  k: trivial",
            "jobs:",
            "  - {command: support, module: C}",
            "  - {command: pipeline, rmodule: k, nmax: 4}",
        ]
    )
    path = tmp_path / "combined.yaml"
    path.write_text(doc)
    code, out, _ = run_cli(capsys, "run", str(path))
    assert code == 0
    assert "field ring p=2; ci p=2 exponents=(2,2)" in out
    assert out.count("origin present") == 2


def test_unknown_section_is_rejected(tmp_path, capsys):
    path = tmp_path / "typo.yaml"
    path.write_text("ring: {p: 2, r: 2}\nmoduels:\n  M: free\n")
    code, _, err = run_cli(capsys, "validate", str(path))
    assert code == 2 and "unknown top-level sections ['moduels']" in err


MALFORMED_STRUCTURES = {
    "exponents_scalar": (
        "ci: {p: 2, exponents: 22}\nrmodules:\n  k: trivial\n",
        ["ext", "--rmodule", "k"],
    ),
    "ring_without_p": (
        "ring: {r: 2}\nmodules:\n  M: free\n",
        ["support", "--module", "M"],
    ),
    "shift_arity": (
        "ring: {p: 2, r: 2}\nmodules:\n  M: {shift: [3]}\n",
        ["support", "--module", "M"],
    ),
    "generators_not_pairs": (
        "ring: {p: 2, r: 2}\nmodules:\n  M:\n    generators: [a, b]\n",
        ["support", "--module", "M"],
    ),
    "morphism_missing_target": (
        "ring: {p: 2, r: 2}\nmodules:\n  M: free\n"
        "morphisms:\n  f: {source: M, matrix: [['0']]}\n",
        ["nilpotence", "--morphism", "f", "--module", "M"],
    ),
}


@pytest.mark.parametrize("name", sorted(MALFORMED_STRUCTURES))
def test_structurally_wrong_documents_fail_cleanly(name, tmp_path, capsys):
    text, argv = MALFORMED_STRUCTURES[name]
    path = tmp_path / f"{name}.yaml"
    path.write_text(text)
    code, _, err = run_cli(capsys, argv[0], str(path), *argv[1:])
    assert code == 2, err
    assert err.startswith("error:")


def test_explicit_complex_input_form(tmp_path, capsys):
    # per-degree dimensions, differential and z-action matrices, ints mod p
    doc = "\n".join(
        [
            "ci: {p: 2, exponents: [2, 2]}",
            "rmodules:",
            "  kk:",
            "    complex:",
            "      dims: {0: 1}",
            "  acyclic:",
            "    complex:",
            "      dims: {-1: 1, 0: 1}",
            "      differential: {-1: [[1]]}",
            "jobs:",
            "  - {command: ext, rmodule: kk, nmax: 4}",
            "  - {command: pipeline, rmodule: acyclic, nmax: 4}",
        ]
    )
    path = tmp_path / "explicit.yaml"
    path.write_text(doc)
    code, out, _ = run_cli(capsys, "run", str(path))
    assert code == 0
    assert "ext dims 1 2 3 4 5" in out
    assert "origin absent" in out and "points 0" in out


def test_explicit_complex_with_bad_z_action_rejected(tmp_path, capsys):
    # z1^2 must act as zero; the identity action violates the relations
    doc = "\n".join(
        [
            "ci: {p: 2, exponents: [2, 2]}",
            "rmodules:",
            "  bad:",
            "    complex:",
            "      dims: {0: 1}",
            "      z_actions: {1: {0: [[1]]}}",
            "jobs:",
            "  - {command: ext, rmodule: bad, nmax: 2}",
        ]
    )
    path = tmp_path / "badz.yaml"
    path.write_text(doc)
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 2
    assert "z1^2 does not act as zero" in err
