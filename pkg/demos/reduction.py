"""How much the reduction rules and the reducing threshold cut, per request.

    python3 demos/reduction.py
"""
from __future__ import annotations

from collections import Counter
from pathlib import Path

from argrec import bundle as B
from argrec.candgen import generate_candidates
from argrec.corpus.loader import load_corpus
from argrec.corpus.requests import extract_requests
from argrec.evaluation import matches_gold
from argrec.pipeline import Recommender, apply_reduction_rules
from argrec.typesys.index import build_type_index
from argrec.typesys.resolve import UnitContext

MANIFEST = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "reduction" / "manifest.txt"


def main():
    units = load_corpus(MANIFEST)
    index = build_type_index(units)
    trained = B.train(units, index=index)
    fired = Counter()
    before = after = lost = n = 0
    for u in units:
        ctx = UnitContext(u, index)
        for r in extract_requests(u, ctx=ctx):
            if not r.supported:
                continue
            cands = generate_candidates(ctx, r.offset, ctx.accessible(r.offset), r.expected)
            kept, why = apply_reduction_rules(cands, r, ctx)
            for rules in why.values():
                fired.update(rules)
            n += 1
            before += len(cands)
            after += len(kept)
            gold_in = any(matches_gold(c, r.gold_node, r.gold_type) for c in cands)
            lost += gold_in and not any(matches_gold(c, r.gold_node, r.gold_type) for c in kept)
    print(f"{n} requests: {before} candidates before the rules, {after} after "
          f"({1 - after / before:.1%} removed); gold dropped in {lost}")
    for rule, count in fired.most_common():
        print(f"  {rule:<22} kept {count} candidates")

    print("\nreducing threshold vs gold among the survivors:")
    for rt in (5, 10, 20, 50):
        rec = Recommender(trained.model, trained.tables, trained.config(rt=rt))
        hit = 0
        for u in units:
            ctx = UnitContext(u, index)
            for r in extract_requests(u, ctx=ctx):
                if r.supported:
                    _, ranked = rec.run(r, ctx)
                    hit += any(matches_gold(it.candidate, r.gold_node, r.gold_type) for it in ranked.items)
        print(f"  RT={rt:<3} gold kept in {hit}/{n}")


if __name__ == "__main__":
    main()
