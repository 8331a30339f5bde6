import io
import json
import sys

import pytest

from argrec import cli

from conftest import CORPUS

CLERK = CORPUS / "inventory/src/inv/Clerk.java"


def _run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "b"
    assert cli.main(["train", "--split", str(CORPUS / "split.txt"), "--out", str(out)]) == 0
    return out


def test_train_reports_stats(tmp_path, capsys):
    code, doc = _run(["train", "--corpus", CORPUS / "manifest.txt", "--out", tmp_path / "b"], capsys)
    assert code == 0 and doc["stats"]["units"] == 6
    assert (tmp_path / "b" / "manifest.json").is_file()


def test_recommend(bundle, capsys):
    code, doc = _run(["recommend", "--bundle", bundle, "--file", CLERK, "--callee", "restock",
                      "--pos", "1", "-k", "3"], capsys)
    assert code == 0 and 0 < len(doc["candidates"]) <= 3


def test_recommend_from_env_and_heavy_process(bundle, capsys, monkeypatch):
    monkeypatch.setenv("ARGREC_BUNDLE", str(bundle))
    code, doc = _run(["recommend", "--heavy", "process", "--timeout", "30", "--file", CLERK,
                      "--callee", "line", "--pos", "1"], capsys)
    assert code == 0 and doc["candidates"] and not doc["warnings"]


def test_evaluate(bundle, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, doc = _run(["evaluate", "--bundle", bundle, "--split", CORPUS / "split.txt",
                      "--scenario", "dynamic", "--out", out], capsys)
    assert code == 0 and list(doc["reports"]) == ["dynamic"]
    assert json.loads(out.read_text()) == doc


def test_stats(tmp_path, capsys):
    code, doc = _run(["stats", "--corpus", CORPUS / "manifest.txt", "--out", tmp_path], capsys)
    assert code == 0 and doc["units"] == 6
    assert (tmp_path / "stats.json").is_file()


def test_serve(bundle, capsys, monkeypatch):
    req = json.dumps({"id": "a", "file": str(CLERK), "callee": "restock", "pos": 2})
    monkeypatch.setattr(sys, "stdin", io.StringIO("garbage\n" + req + "\n"))
    assert cli.main(["serve", "--bundle", str(bundle), "--heavy", "off"]) == 0
    docs = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert docs[0]["error"]["type"] == "malformed"
    assert docs[1]["id"] == "a" and docs[1]["candidates"]


def test_missing_bundle_is_usage_error(capsys, monkeypatch):
    monkeypatch.delenv("ARGREC_BUNDLE", raising=False)
    code, doc = _run(["recommend", "--file", CLERK, "--callee", "restock"], capsys)
    assert code == cli.EXIT_USAGE and doc["error"]["type"] == "usage"


def test_bad_bundle_is_input_error(tmp_path, capsys):
    code, doc = _run(["recommend", "--bundle", tmp_path, "--file", CLERK, "--callee", "x"], capsys)
    assert code == cli.EXIT_INPUT and doc["error"]["type"] == "bundle"


def test_missing_corpus_is_input_error(tmp_path, capsys):
    code, doc = _run(["train", "--corpus", tmp_path / "none.txt", "--out", tmp_path / "b"], capsys)
    assert code == cli.EXIT_INPUT and doc["error"]["type"] == "corpus"


def test_recommend_not_found(bundle, capsys):
    code, doc = _run(["recommend", "--bundle", bundle, "--file", CLERK, "--callee", "nosuch"], capsys)
    assert code == cli.EXIT_INPUT and doc["error"]["type"] == "not-found"


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        cli.main(["evaluate"])
    assert exc.value.code == 2
