"""The command-line surface: schemas, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from matroidkit import cli
from matroidkit.cli import main

UNIFORM = {"kind": "uniform", "n": 4, "r": 2, "labels": ["a", "b", "c", "d"]}
PARTITION = {
    "kind": "partition",
    "blocks": [
        {"elements": ["a", "b"], "cap": 1},
        {"elements": ["c", "d"], "cap": 1},
    ],
}


@pytest.fixture()
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return tmp_path, write


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_intersect_classic(files, capsys):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    code, out, err = run(capsys, ["intersect", "--m", m, "--n", n])
    assert code == 0 and not err
    payload = json.loads(out)
    assert payload["output"]["certificate"]["size"] == 2
    assert payload["verification"]["certificate_valid"] is True


def test_intersect_mixed_with_split_and_trace(files, capsys):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    e1 = write("e1.json", ["a", "b"])
    trace_path = tmp / "trace.json"
    code, out, _ = run(
        capsys,
        [
            "intersect",
            "--m",
            m,
            "--n",
            n,
            "--solver",
            "mixed",
            "--e1",
            e1,
            "--trace",
            str(trace_path),
        ],
    )
    assert code == 0
    assert json.loads(out)["output"]["certificate"]["size"] == 2
    trace = json.loads(trace_path.read_text())
    assert set(trace) == {"augmentations", "extensions", "repairs", "events"}


def test_output_is_byte_identical(files, capsys):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    _, out1, _ = run(capsys, ["intersect", "--m", m, "--n", n])
    _, out2, _ = run(capsys, ["intersect", "--m", m, "--n", n])
    assert out1 == out2


def test_wave_subcommand(files, capsys):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    code, out, _ = run(capsys, ["wave", "--m", m, "--n", n])
    assert code == 0
    payload = json.loads(out)
    assert set(payload["output"]) == {"W", "witness", "cond_plus"}
    assert payload["verification"]["cond_plus_recheck"] is True


def test_packcov_subcommand(files, capsys):
    tmp, write = files
    fam = write(
        "fam.json",
        {
            "universe": ["a", "b", "c"],
            "members": [
                {"kind": "uniform", "n": 3, "r": 1, "labels": ["a", "b", "c"]},
                {"kind": "uniform", "n": 3, "r": 2, "labels": ["a", "b", "c"]},
            ],
        },
    )
    code, out, _ = run(capsys, ["packcov", "--family", fam])
    assert code == 0
    payload = json.loads(out)
    assert payload["verification"]["packcov_valid"] is True
    assert sorted(payload["output"]["E_p"] + payload["output"]["E_c"]) == ["a", "b", "c"]


def test_orient_feasible_and_deficient(files, capsys):
    tmp, write = files
    graph = write(
        "g.json",
        {
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b", "e0"], ["b", "c", "e1"], ["c", "a", "e2"]],
        },
    )
    demands = write("o.json", {"a": 1, "b": 1, "c": 1})
    code, out, _ = run(capsys, ["orient", "--graph", graph, "--demands", demands])
    assert code == 0
    assert json.loads(out)["output"]["verdict"] == "above"

    graph2 = write(
        "g2.json",
        {"vertices": ["a", "b", "c"], "edges": [["a", "b", "e0"], ["b", "c", "e1"]]},
    )
    code, out, _ = run(capsys, ["orient", "--graph", graph2, "--demands", demands])
    assert code == 1
    payload = json.loads(out)
    assert payload["output"]["verdict"] == "deficient"
    assert payload["output"]["counting_check"] is True
    assert payload["output"]["v_prime"]


def test_brute_subcommand(files, capsys):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    code, out, _ = run(capsys, ["brute", "--m", m, "--n", n, "--wave"])
    assert code == 0
    payload = json.loads(out)
    assert payload["output"]["max_common"] == payload["output"]["minmax"] == 2
    assert "largest_wave" in payload["output"]


def test_check_subcommand(files, capsys):
    tmp, write = files
    good = write("good.json", PARTITION)
    code, out, _ = run(capsys, ["check", "--m", good])
    assert code == 0 and json.loads(out)["output"]["ok"] is True
    bad = write(
        "bad.json",
        {
            "kind": "explicit",
            "universe": ["a", "b", "c", "d"],
            "bases": [["a", "b"], ["c", "d"]],
        },
    )
    code, out, _ = run(capsys, ["check", "--m", bad])
    assert code == 1 and json.loads(out)["output"]["ok"] is False


def test_input_errors_exit_2(files, capsys):
    tmp, write = files
    broken = tmp / "broken.json"
    broken.write_text("{not json")
    m = write("m.json", UNIFORM)
    code, out, err = run(capsys, ["intersect", "--m", str(broken), "--n", m])
    assert code == 2 and not out
    assert json.loads(err)["error"]["type"] == "InvalidDocument"

    unknown = write("unknown.json", {"kind": "nope"})
    code, _, err = run(capsys, ["check", "--m", unknown])
    assert code == 2

    code, _, err = run(capsys, ["check", "--m", str(tmp / "missing.json")])
    assert code == 2

    # mismatched universes are an input error, not a crash
    other = write("other.json", {"kind": "uniform", "n": 2, "r": 1})
    code, _, err = run(capsys, ["intersect", "--m", m, "--n", other])
    assert code == 2
    assert json.loads(err)["error"]["type"] == "UniverseMismatch"


def test_internal_failures_exit_3(files, capsys, monkeypatch):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    monkeypatch.setattr(cli, "verify_certificate", lambda *a, **k: False)
    code, out, err = run(capsys, ["intersect", "--m", m, "--n", n])
    assert code == 3 and not out
    assert json.loads(err)["error"]["type"] == "CertificateInvalid"


def test_no_verify_marks_output(files, capsys):
    tmp, write = files
    m = write("m.json", UNIFORM)
    n = write("n.json", PARTITION)
    code, out, _ = run(capsys, ["intersect", "--m", m, "--n", n, "--no-verify"])
    assert code == 0
    assert json.loads(out)["verification"] == {"verified": False}


def test_fuzz_writes_round_trippable_corpus(files, capsys):
    tmp, write = files
    outdir = tmp / "corpus"
    code, out, _ = run(
        capsys,
        ["fuzz", "--seed", "11", "--pairs", "4", "--families", "2", "--graphs", "2", "--out", str(outdir)],
    )
    assert code == 0
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["seed"] == 11
    assert manifest["counts"] == {"pairs": 4, "families": 2, "graphs": 2}
    from matroidkit.core import matroid_from_json, matroid_to_json

    for path in sorted(outdir.glob("pair*.json")):
        doc = json.loads(path.read_text())
        for side in ("m", "n"):
            emitted = matroid_to_json(matroid_from_json(doc[side]))
            again = matroid_to_json(matroid_from_json(emitted))
            assert emitted == again
