"""Heavy-scorer protocol: a reference scorer process and its client.

The reference scorer is a second n-gram model with a longer context. It
speaks one JSON document per line:

    {"id": 1, "context": [...sub-tokens...], "candidates": [[...], ...]}
    -> {"id": 1, "scores": [p, ...]}

Run it with ``python -m argrec.heavy --bundle DIR``.
"""
from __future__ import annotations

import argparse
import json
import os
import queue
import subprocess
import sys
import threading

DEFAULT_TIMEOUT = 2.0


class HeavyModelScorer:
    """In-process scorer over a trained NGramModel (global layer only)."""

    def __init__(self, model):
        self.model = model

    def score(self, context, candidates):
        out = []
        for toks in candidates:
            if not toks:
                out.append(1.0 / len(self.model.vocab))
            else:
                out.append(self.model.sequence_prob(context, toks))
        return out

    def close(self):
        pass


class HeavyClient:
    """Talks to a scorer subprocess; a late or broken reply raises so the
    pipeline can fall back to the light model."""

    def __init__(self, command, timeout=DEFAULT_TIMEOUT, env=None):
        self.command = list(command)
        self.timeout = timeout
        self.env = env
        self.proc = None
        self.lines = None
        self.next_id = 0

    def _start(self):
        self.proc = subprocess.Popen(self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                     stderr=subprocess.DEVNULL, text=True, bufsize=1, env=self.env)
        self.lines = queue.Queue()

        def pump(stream, q):
            for line in stream:
                q.put(line)
            q.put(None)

        threading.Thread(target=pump, args=(self.proc.stdout, self.lines), daemon=True).start()

    def score(self, context, candidates):
        if self.proc is None or self.proc.poll() is not None:
            self._start()
        self.next_id += 1
        rid = self.next_id
        msg = {"id": rid, "context": list(context), "candidates": [list(c) for c in candidates]}
        try:
            self.proc.stdin.write(json.dumps(msg) + "\n")
            self.proc.stdin.flush()
            line = self.lines.get(timeout=self.timeout)
        except queue.Empty:
            self.close()
            raise TimeoutError(f"no reply within {self.timeout}s") from None
        except OSError as exc:
            self.close()
            raise RuntimeError(f"scorer process unavailable: {exc}") from exc
        if line is None:
            self.close()
            raise RuntimeError("scorer process exited")
        doc = json.loads(line)
        if doc.get("id") != rid or "scores" not in doc:
            self.close()
            raise RuntimeError(f"bad scorer reply: {line.strip()[:200]}")
        return [float(s) for s in doc["scores"]]

    def close(self):
        if self.proc is not None:
            try:
                self.proc.kill()
                self.proc.wait(timeout=1)
            except Exception:
                pass
            self.proc = None


def serve_scores(scorer, stdin=sys.stdin, stdout=sys.stdout):
    for line in stdin:
        if not line.strip():
            continue
        rid = None
        try:
            doc = json.loads(line)
            rid = doc.get("id")
            scores = scorer.score(doc["context"], doc["candidates"])
            reply = {"id": rid, "scores": scores}
        except Exception as exc:  # keep serving
            reply = {"id": rid, "error": str(exc)}
        stdout.write(json.dumps(reply) + "\n")
        stdout.flush()


def main(argv=None):
    ap = argparse.ArgumentParser(prog="argrec-heavy", description=__doc__.splitlines()[0])
    ap.add_argument("--bundle", default=os.environ.get("ARGREC_BUNDLE"))
    args = ap.parse_args(argv)
    if not args.bundle:
        ap.error("--bundle is required")
    from .bundle import load_heavy_model
    serve_scores(HeavyModelScorer(load_heavy_model(args.bundle)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
