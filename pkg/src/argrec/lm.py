"""Sub-token n-gram model with Jelinek-Mercer interpolation and nested
global / package / file count layers."""
from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

from .corpus.lexer import ParseError, tokenize
from .corpus.subtokens import split_subtokens

UNK = "<UNK>"
HOLE = "<HOLE>"
RESERVED = (UNK, HOLE)
LITERAL_TOKENS = {"string": "<STR>", "char": "<CHAR>", "number": "<NUM>"}
BOUNDARIES = (",", ")")


def lm_tokens(tokens):
    """Lexical tokens -> LM stream: identifiers split into sub-tokens,
    literals collapsed to class tokens, holes kept as HOLE."""
    out = []
    for t in tokens:
        if t.kind == "ident":
            out.extend(split_subtokens(t.text) or [t.text])
        elif t.kind in LITERAL_TOKENS:
            out.append(LITERAL_TOKENS[t.kind])
        elif t.kind == "hole":
            out.append(HOLE)
        else:
            out.append(t.text)
    return out


def text_tokens(text, holes=False):
    """LM tokens of a code fragment such as a rendered candidate."""
    try:
        toks = tokenize(text)
    except ParseError:
        return split_subtokens(text)
    if not holes:
        toks = [t for t in toks if t.kind != "hole"]
    return lm_tokens(toks)


class CountLayer:
    """Successor counts for every context of length 0..order-1."""

    def __init__(self, scope, order):
        self.scope = scope
        self.order = order
        self.counts = defaultdict(lambda: defaultdict(int))
        self.totals = defaultdict(int)

    def __bool__(self):
        return bool(self.totals)

    def _bump(self, ctx, t, d):
        succ = self.counts[ctx]
        succ[t] += d
        self.totals[ctx] += d
        if succ[t] == 0:
            del succ[t]
        if self.totals[ctx] == 0:
            del self.totals[ctx]
            del self.counts[ctx]

    def observe(self, tokens, start=0, end=None, delta=1):
        """Count the events for positions start..end-1 (contexts may reach back)."""
        end = len(tokens) if end is None else end
        for i in range(start, end):
            t = tokens[i]
            for k in range(self.order):
                if i - k < 0:
                    break
                self._bump(tuple(tokens[i - k:i]), t, delta)

    def clear(self):
        self.counts.clear()
        self.totals.clear()

    def copy(self):
        c = CountLayer(self.scope, self.order)
        for ctx, succ in self.counts.items():
            c.counts[ctx] = defaultdict(int, succ)
        c.totals = defaultdict(int, self.totals)
        return c

    def lines(self):
        out = []
        for ctx in self.counts:
            for t, n in self.counts[ctx].items():
                out.append(json.dumps([list(ctx), t, n], ensure_ascii=False))
        out.sort()
        return out

    @classmethod
    def from_lines(cls, scope, order, lines):
        layer = cls(scope, order)
        for line in lines:
            if line.strip():
                ctx, t, n = json.loads(line)
                layer._bump(tuple(ctx), t, n)
        return layer


class NGramModel:
    def __init__(self, order=6, lam=0.5, weight=0.5, min_count=2, reserved=RESERVED):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        self.lam = lam
        self.weight = weight
        self.min_count = min_count
        self.reserved = tuple(reserved)
        self.vocab = set(self.reserved)
        self.global_layer = CountLayer("global", order)
        self.package_layers = {}
        self.file_layers = {}
        self.cache_vocab = {}  # path -> tokens the file cache added to the vocabulary
        self._vocab_list = None

    # ------------------------------------------------------------ training
    def map_token(self, t):
        if t in self.vocab:
            return t
        return UNK if UNK in self.vocab else t

    def map_seq(self, seq):
        return [self.map_token(t) for t in seq]

    def train(self, streams):
        """streams: (package, file path, LM token list) triples or (package, tokens) pairs."""
        streams = [s if len(s) == 3 else (s[0], "", s[1]) for s in streams]
        if not streams or not any(toks for _, _, toks in streams):
            raise ValueError("cannot train on an empty corpus")
        freq = defaultdict(int)
        for _, _, toks in streams:
            for t in toks:
                freq[t] += 1
        self.vocab = set(self.reserved) | {t for t, n in freq.items() if n >= self.min_count}
        self._vocab_list = None
        for pkg, _, toks in sorted(streams, key=lambda s: (s[0], s[1])):
            self.add_stream(pkg, toks)
        return self

    def extend_vocab(self, streams, min_count=None):
        """Admit tokens seen at least `min_count` times in `streams` (token lists)."""
        min_count = self.min_count if min_count is None else min_count
        freq = defaultdict(int)
        for toks in streams:
            for t in toks:
                freq[t] += 1
        new = {t for t, n in freq.items() if n >= min_count} - self.vocab
        if new:
            self.vocab |= new
            self._vocab_list = None
        return new

    def add_stream(self, package, tokens, delta=1):
        mapped = self.map_seq(tokens)
        self.global_layer.observe(mapped, delta=delta)
        layer = self.package_layers.get(package)
        if layer is None:
            layer = self.package_layers[package] = CountLayer(package, self.order)
        layer.observe(mapped, delta=delta)
        if not layer:
            del self.package_layers[package]

    def remove_stream(self, package, tokens):
        self.add_stream(package, tokens, delta=-1)

    # ------------------------------------------------------------ file cache
    def update_cache(self, path, tokens, start=0, end=None, mapped=False):
        """Count tokens[start:end] into the file layer of `path`.

        The cache is open-vocabulary: tokens it sees join the vocabulary
        until the cache of `path` is cleared. Pass ``mapped=True`` for a raw
        stream whose out-of-vocabulary tokens were already admitted.
        """
        end = len(tokens) if end is None else end
        if not mapped:
            lo = max(start - self.order + 1, 0)
            cached = set().union(*self.cache_vocab.values())
            base = self.vocab - cached
            mine = self.cache_vocab.setdefault(path, set())
            mine.update(t for t in tokens[lo:end] if t not in base)
            if not mine <= self.vocab:
                self.vocab |= mine
                self._vocab_list = None
        layer = self.file_layers.get(path)
        if layer is None:
            layer = self.file_layers[path] = CountLayer(path, self.order)
        layer.observe(tokens, start, end)

    def clear_cache(self, path=None):
        paths = list(self.file_layers) + list(self.cache_vocab) if path is None else [path]
        for p in paths:
            self.file_layers.pop(p, None)
            added = self.cache_vocab.pop(p, set())
            keep = set().union(*self.cache_vocab.values()) if self.cache_vocab else set()
            if added - keep:
                self.vocab -= added - keep
                self._vocab_list = None

    def clone(self):
        """Independent copy (for scenarios that retrain or cache)."""
        m = NGramModel(self.order, self.lam, self.weight, self.min_count, self.reserved)
        m.vocab = set(self.vocab)
        m.global_layer = self.global_layer.copy()
        m.package_layers = {k: v.copy() for k, v in self.package_layers.items()}
        m.file_layers = {k: v.copy() for k, v in self.file_layers.items()}
        m.cache_vocab = {k: set(v) for k, v in self.cache_vocab.items()}
        return m

    # ------------------------------------------------------------ queries
    @property
    def vocabulary(self):
        if self._vocab_list is None:
            self._vocab_list = sorted(self.vocab)
        return self._vocab_list

    def _layer_prob(self, layer, ctx, t):
        p = 1.0 / len(self.vocab)
        for k in range(0, self.order):
            if k > len(ctx):
                break
            c = tuple(ctx[len(ctx) - k:]) if k else ()
            total = layer.totals.get(c, 0)
            if total == 0:
                continue
            ml = layer.counts[c].get(t, 0) / total
            p = self.lam * ml + (1 - self.lam) * p
        return p

    def layers_for(self, package=None, path=None):
        """Non-empty layers, innermost first."""
        out = []
        if path is not None and self.file_layers.get(path):
            out.append(self.file_layers[path])
        if package is not None and self.package_layers.get(package):
            out.append(self.package_layers[package])
        out.append(self.global_layer)
        return out

    def token_prob(self, context, t, package=None, path=None):
        ctx = self.map_seq(context[-(self.order - 1):] if self.order > 1 else [])
        t = self.map_token(t)
        layers = self.layers_for(package, path)
        p = self._layer_prob(layers[-1], ctx, t)
        for layer in reversed(layers[:-1]):
            p = self.weight * self._layer_prob(layer, ctx, t) + (1 - self.weight) * p
        return p

    def sequence_prob(self, context, seq, package=None, path=None):
        if not seq:
            raise ValueError("empty sequence")
        ctx = list(context)
        p = 1.0
        for t in seq:
            p = p * self.token_prob(ctx, t, package, path)
            ctx.append(t)
        return p

    def distribution(self, context, package=None, path=None):
        return {t: self.token_prob(context, t, package, path) for t in self.vocabulary}

    # ------------------------------------------------------------ decoding
    def beam_search(self, context, k, width, max_len, package=None, path=None,
                    boundaries=BOUNDARIES, exclude=RESERVED):
        """Top-k argument token sequences, each closed by a depth-0 boundary token.

        All expansions (closing or continuing) compete for the `width` slots
        of a step; closed ones are set aside as results.
        """
        if not 1 <= k <= width:
            raise ValueError("need width >= k >= 1")
        vocab = [t for t in self.vocabulary if t not in exclude]
        beam = [(1.0, (), 0)]
        done = []
        for step in range(max_len + 1):
            grown = []
            for p, seq, depth in beam:
                dist = {t: self.token_prob(list(context) + list(seq), t, package, path)
                        for t in vocab}
                for t in vocab:
                    q = p * dist[t]
                    if depth == 0 and t in boundaries:
                        if seq:
                            grown.append((q, seq, -1))
                        continue
                    if step == max_len:
                        continue
                    nd = depth + (t == "(") - (t == ")" and depth > 0)
                    grown.append((q, seq + (t,), nd))
            grown.sort(key=lambda x: (-x[0], x[1], x[2]))
            beam = []
            for item in grown[:width]:
                if item[2] == -1:
                    done.append((item[0], item[1]))
                else:
                    beam.append(item)
            if not beam:
                break
        done.sort(key=lambda x: (-x[0], x[1]))
        out, seen = [], set()
        for p, seq in done:
            # the same argument closed by ',' or ')' is one result
            if seq not in seen:
                seen.add(seq)
                out.append((p, seq))
        return out[:k]

    # ------------------------------------------------------------ persistence
    def manifest(self):
        return {
            "order": self.order, "lambda": self.lam, "layerWeight": self.weight,
            "minCount": self.min_count, "reserved": list(self.reserved),
            "vocabulary": self.vocabulary, "countFormat": "sorted-text-jsonl-v1",
            "packages": sorted(self.package_layers),
        }

    def save(self, directory):
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        files = {"global": "counts-global.jsonl"}
        _write_lines(d / files["global"], self.global_layer.lines())
        for i, pkg in enumerate(sorted(self.package_layers)):
            name = f"counts-package-{i:04d}.jsonl"
            files[f"package:{pkg}"] = name
            _write_lines(d / name, self.package_layers[pkg].lines())
        man = self.manifest()
        man["layerFiles"] = files
        return man

    @classmethod
    def load(cls, directory, manifest):
        d = Path(directory)
        m = cls(manifest["order"], manifest["lambda"], manifest["layerWeight"],
                manifest["minCount"], tuple(manifest["reserved"]))
        m.vocab = set(manifest["vocabulary"])
        for key, name in manifest["layerFiles"].items():
            lines = (d / name).read_text(encoding="utf-8").splitlines()
            if key == "global":
                m.global_layer = CountLayer.from_lines("global", m.order, lines)
            else:
                pkg = key.split(":", 1)[1]
                m.package_layers[pkg] = CountLayer.from_lines(pkg, m.order, lines)
        return m


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")
