"""Train on a small corpus, rank arguments at one call site, then evaluate.

    python3 demos/walkthrough.py
"""
from __future__ import annotations

from pathlib import Path

from argrec import bundle as B
from argrec.corpus.loader import load_units, read_split
from argrec.evaluation import SCENARIOS, evaluate
from argrec.service import Service

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def show_call_site(trained, path, callee, pos):
    out = Service(trained).handle({"file": str(path), "callee": callee, "pos": pos, "k": 5})
    rq = out["request"]
    print(f"{path.name}:{rq['line']} {callee}(...) argument {pos}, expects {rq['expectedTypes']}")
    print(f"  {out['generated']} candidates generated, {out['afterRules']} left after the rules")
    for i, c in enumerate(out["candidates"], 1):
        print(f"  {i}. {c['rendered']:<24} {c['exprType']:<16} {c['score']:.4f}")
    print()


def main():
    corpus = FIXTURES / "corpus"
    split = read_split(corpus / "split.txt")
    train_units, test_units = load_units(split.train), load_units(split.test)
    trained = B.train(train_units)
    print(f"trained on {len(train_units)} files, {trained.stats['observations']} variable uses\n")

    clerk = corpus / "inventory/src/inv/Clerk.java"
    show_call_site(trained, clerk, "restock", 1)
    show_call_site(trained, clerk, "summary", 1)

    # the scenario corpus repeats an idiom inside each test file, which only
    # the file cache (dynamic, maintenance) can pick up
    sc = read_split(FIXTURES / "scenario" / "split.txt")
    sc_trained = B.train(load_units(sc.train))
    sc_test = load_units(sc.test)
    for name, t, units in (("inventory", trained, test_units), ("signal", sc_trained, sc_test)):
        print(f"{name}:")
        for scenario in SCENARIOS:
            m = evaluate(t, units, scenario).total.to_json()
            print(f"  {scenario:<12} A={m['A']:<3} top1={m['topK']['1']:.3f} "
                  f"top5={m['topK']['5']:.3f} MRR={m['mrr']:.3f}")


if __name__ == "__main__":
    main()
