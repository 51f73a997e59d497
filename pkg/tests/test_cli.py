import pytest

from sullivan.cli import main
from sullivan.corpus import CORPUS_DIR


def model(name):
    return str(CORPUS_DIR / f"{name}.model")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_machine(capsys):
    code, out, _ = run(capsys, "betti", model("odd-free-2"), "--machine")
    assert code == 0
    assert "total=6" in out.splitlines()


@pytest.mark.parametrize("verb, extra", [
    ("check", []), ("betti", []), ("pure", []), ("elliptic", []), ("split", []),
    ("maximalize", []), ("matrix", []), ("hypotheses", []), ("gottlieb", []),
    ("wang", ["u1"]), ("bounds", []), ("certify", []),
])
def test_every_verb_succeeds_on_m2(capsys, verb, extra):
    code, out, err = run(capsys, verb, model("odd-free-2"), *extra)
    assert code == 0, err
    assert out


def test_bounds_with_extension_and_note(capsys):
    code, out, _ = run(capsys, "bounds", model("quartic"), "--extension", model("quartic.ext"),
                       "--note", "hand analysis", "--machine")
    lines = out.splitlines()
    assert code == 0
    assert "rk0.lower=1" in lines and "rk0.upper_chi=6" in lines
    assert "note=hand analysis" in lines


def test_certify_supplied_total(capsys):
    code, out, _ = run(capsys, "certify", model("odd-five"), model("odd-five.ext"))
    assert code == 0 and "rk0 >= 3" in out


def test_certify_lemma_writes_reparseable_file(capsys, tmp_path):
    path = tmp_path / "total.model"
    code, out, _ = run(capsys, "certify", model("lemma-w"), "--lemma", "v2", "--write", str(path))
    assert code == 0 and "certificate.valid = true" in out
    code, out, _ = run(capsys, "certify", model("lemma-w"), str(path))
    assert code == 0 and "rk0 >= 1" in out


def test_certify_invalid_exits_one(capsys):
    code, out, _ = run(capsys, "certify", model("lemma-w"), "--lemma", "v1")
    assert code == 1 and "certificate.valid = false" in out


def test_corpus_verb(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "odd-free-2")
    assert code == 0 and out.splitlines()[-1] == "corpus: 1/1 entries pass"
    code, out, _ = run(capsys, "corpus", "nonexistent")
    assert code == 0
    (tmp_path / "m.model").write_text((CORPUS_DIR / "s3.model").read_text())
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("entry s3\nmodel m.model\nexpect total = 3 @trivial\n")
    code, out, _ = run(capsys, "corpus", "--manifest", str(manifest))
    assert code == 1 and "FAIL s3" in out


def test_random_verb_is_deterministic(capsys):
    a = run(capsys, "random", "--seed", "5", "--p", "4", "--r", "3", "--degrees", "3:5")
    b = run(capsys, "random", "--seed", "5", "--p", "4", "--r", "3", "--degrees", "3:5")
    assert a == b and a[0] == 0 and a[1].startswith("model random-5-p4-r3")


def test_input_errors_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text("gen x:3\nd x = y\n")
    assert run(capsys, "betti", str(bad))[0] == 2
    code, _, err = run(capsys, "betti", str(tmp_path / "missing.model"))
    assert code == 2 and err.startswith("error:")
    assert run(capsys, "random", "--p", "3", "--r", "1")[0] == 2
    assert run(capsys, "matrix", model("odd-five"))[0] == 2
    assert run(capsys, "wang", model("odd-free-2"), "v12")[0] == 2
    assert run(capsys, "bounds", model("free-even"))[0] == 2


def test_cap_exits_three(capsys):
    code, _, err = run(capsys, "betti", model("odd-free-4"), "--cap", "100")
    assert code == 3 and "raise --cap" in err


def test_max_degree_truncates(capsys):
    code, out, _ = run(capsys, "betti", model("free-even"), "--max-degree", "6", "--machine")
    assert code == 0 and "complete=false" in out.splitlines()
