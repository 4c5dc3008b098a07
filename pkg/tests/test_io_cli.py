import json
import os
import random

import pytest

from interleavekit import GF2, FormatError, is_delta_interleaved, realize
from interleavekit import io
from interleavekit.ci import CIProblem, ci_solve_bruteforce, ci_to_modules
from interleavekit.cli import main
from interleavekit.posets import line
from interleavekit.sat import CNFFormula, decide_sat_via_interleaving, sat_to_modules, serialize_dimacs
from interleavekit.setmods import SetModule1D, SetModule2D

from oracles import FIXTURES, random_module_1d, random_setmodule_1d, random_setmodule_2d


def test_module_roundtrip_bytes():
    rng = random.Random(1)
    for _ in range(10):
        text = io.dump_module(random_module_1d(rng))
        assert io.dump_module(io.load_module(text)) == text
    M, _ = sat_to_modules(CNFFormula(3, ((1, -2, 3),)))
    text = io.dump_module(M)
    assert io.dump_module(io.load_module(text)) == text and io.load_module(text) == M


def test_ci_roundtrip_bytes():
    text = (FIXTURES / "invertible.ci.json").read_text()
    assert io.dump_ci(io.load_ci(text)) == text


def test_shuffled_module_canonicalizes():
    raw = (FIXTURES / "shuffled.module.json").read_text()
    once = io.dump_module(io.load_module(raw))
    assert once != raw
    assert io.dump_module(io.load_module(once)) == once
    assert json.loads(once)["maps"][0][0] == [1]


def test_setmodule_roundtrip():
    rng = random.Random(2)
    for _ in range(10):
        m1 = random_setmodule_1d(rng)
        t = io.dump_setmodule(m1)
        assert io.dump_setmodule(io.load_setmodule(t)) == t and isinstance(io.load_setmodule(t), SetModule1D)
        m2 = random_setmodule_2d(rng, 2)
        t = io.dump_setmodule(m2)
        assert io.dump_setmodule(io.load_setmodule(t)) == t and isinstance(io.load_setmodule(t), SetModule2D)


def test_barcode_and_witness_roundtrip():
    text = io.dump_barcode([(2, 3), (1, 4), (1, 4)])
    assert text == "[[1, 4], [1, 4], [2, 3]]\n" and io.dump_barcode(io.load_barcode(text)) == text
    a, b = realize([(1, 4)], GF2, line(1, 6)), realize([(2, 5)], GF2, line(1, 6))
    w = is_delta_interleaved(a, b, 1)
    assert io.load_witness(io.dump_witness(w, a), a) == w


@pytest.mark.parametrize(
    "text",
    [
        '{"field": {"p": 2}, "poset": {"grid": [2]}, "spaces": [], "maps": [], "extra": 1}',
        '{"field": {"p": 4}, "poset": {"grid": [2]}, "spaces": [], "maps": []}',
        '{"field": {"p": 2}, "poset": {"grid": [2]}, "spaces": [[[5], 1]], "maps": []}',
        '{"field": {"p": 2}, "poset": {"grid": [2]}, "spaces": [[[0], 1], [[1], 1]], "maps": [[[0], [1], [1, 1]]]}',
        "not json",
    ],
)
def test_module_format_errors(text):
    with pytest.raises(FormatError):
        io.load_module(text)


def test_ci_format_errors():
    with pytest.raises(FormatError):
        io.load_ci('{"n": 2, "P": [[3, 1]], "Q": []}')
    with pytest.raises(FormatError):
        io.load_ci('{"n": 2, "P": [], "Q": [], "R": []}')


# ---------------------------------------------------------------------------
# command line


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_ci_yes(capsys):
    code, out, _ = _run(capsys, "ci", "solve", str(FIXTURES / "invertible.ci.json"), "--p", "2")
    assert code == 0
    assert "1 1 1\n1 0 1\n1 1 0" in out and "1 1 1\n1 1 0\n1 0 1" in out


def test_cli_ci_no(capsys):
    code, out, _ = _run(capsys, "ci", "solve", str(FIXTURES / "blocked.ci.json"))
    assert code == 1 and out.strip() == "no"


def test_cli_interleave_self(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text(io.dump_module(random_module_1d(random.Random(3))))
    code, out, _ = _run(capsys, "interleave", "--delta", "0", str(m), str(m), "-o", str(tmp_path / "w.json"))
    assert code == 0 and out.strip() == "yes" and (tmp_path / "w.json").exists()


def test_cli_sat(capsys):
    code, out, _ = _run(capsys, "sat", "decide", str(FIXTURES / "contradiction.cnf"))
    assert code == 1 and out.strip() == "UNSAT"
    code, out, _ = _run(capsys, "sat", "decide", str(FIXTURES / "mixed_signs.cnf"))
    assert code == 0 and out.splitlines()[1].startswith("v ")
    code, _, _ = _run(capsys, "sat", "decide", "--gadget", "literal", str(FIXTURES / "mixed_signs.cnf"))
    assert code == 1


def test_cli_errors(tmp_path, capsys):
    code, _, err = _run(capsys, "iso", str(tmp_path / "nope.json"), str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1}')
    code, _, err = _run(capsys, "ci", "solve", str(bad))
    assert code == 2 and "format error" in err
    code, _, err = _run(capsys, "ci", "solve", str(FIXTURES / "invertible.ci.json"), "--cap", "3")
    assert code == 2 and "budget exceeded" in err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_cli_reduce_writes_only_into_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    out = tmp_path / "red"
    assert main(["ci", "reduce", str(FIXTURES / "matching_gap.ci.json"), "-o", str(out)]) == 0
    assert sorted(os.listdir(tmp_path)) == ["red"]
    assert sorted(os.listdir(out)) == ["M.json", "N.json", "manifest.json"]
    M = io.load_module((out / "M.json").read_text())
    mods = ci_to_modules(CIProblem(3, ((2, 3), (3, 2)), ((2, 2), (3, 3))))
    assert M == mods.M
    man = json.loads((out / "manifest.json").read_text())
    assert len(man["M"]) == 3 and man["grid"] == [11, 11]
    sat_out = tmp_path / "satred"
    assert main(["sat", "reduce", str(FIXTURES / "mixed_signs.cnf"), "-o", str(sat_out)]) == 0
    assert sorted(os.listdir(sat_out)) == ["M.json", "N.json", "manifest.json"]


def test_cli_distances(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(io.dump_module(realize([(1, 4)], GF2, line(1, 6))))
    b.write_text(io.dump_module(realize([(2, 5)], GF2, line(1, 6))))
    assert _run(capsys, "dist1d", str(a), str(b))[:2] == (0, "1\n")
    assert _run(capsys, "dist", str(a), str(b))[:2] == (0, "1\n")
    assert _run(capsys, "barcode", str(a))[:2] == (0, "[[1, 4]]\n")
    assert _run(capsys, "iso", str(a), str(b))[0] == 1
    ba, bb = tmp_path / "a.bc", tmp_path / "b.bc"
    ba.write_text("[[1, 4]]")
    bb.write_text("[[2, 5]]")
    assert _run(capsys, "bottleneck", str(ba), str(bb))[:2] == (0, "1\n")


def test_cli_set_verbs(tmp_path, capsys):
    rng = random.Random(5)
    m1 = random_setmodule_1d(rng)
    p = tmp_path / "m1.json"
    p.write_text(io.dump_setmodule(m1))
    assert _run(capsys, "mergeiso", str(p), str(p))[0] == 0
    m2 = random_setmodule_2d(rng, 2)
    q = tmp_path / "m2.json"
    q.write_text(io.dump_setmodule(m2))
    assert _run(capsys, "setiso", str(q), str(q))[0] == 0
    assert _run(capsys, "setiso", str(p), str(q))[0] == 2


def test_golden_corpus_exit_codes(tmp_path, capsys):
    """Exit codes agree with the library booleans on a seeded corpus."""
    rng = random.Random(2024)
    cells = [(i, j) for i in range(1, 4) for j in range(1, 4)]
    for k in range(12):
        prob = CIProblem(3, rng.sample(cells, 2), rng.sample(cells, 1))
        f = tmp_path / f"ci{k}.json"
        f.write_text(io.dump_ci(prob))
        want = ci_solve_bruteforce(prob) is not None
        assert _run(capsys, "ci", "solve", str(f))[0] == (0 if want else 1)
    for k in range(8):
        n = rng.randint(3, 4)
        cls = tuple(tuple(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)) for _ in range(rng.randint(1, 4)))
        psi = CNFFormula(n, cls)
        f = tmp_path / f"f{k}.cnf"
        f.write_text(serialize_dimacs(psi))
        want = decide_sat_via_interleaving(psi).satisfiable
        assert _run(capsys, "sat", "decide", str(f))[0] == (0 if want else 1)
