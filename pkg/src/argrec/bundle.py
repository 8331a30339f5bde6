"""Model bundles: training from a corpus, saving to and loading from disk.

Layout of a bundle directory:

    manifest.json      schema version, LM settings, E set, file list, stats
    lm/                light model count tables (sorted JSON lines)
    heavy/             reference heavy model count tables
    tables.json        recentness tables (counts plus smoothed probabilities)
    types.json         project types exported in stub format

Every file is written in a canonical order, so training twice on the same
corpus gives byte-identical bundles.
"""
from __future__ import annotations

import json
import logging
import shutil
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .corpus.ast import ExprType
from .corpus.requests import extract_requests
from .features import (DEFAULT_CAP, DEFAULT_X, RecentnessTables, fit_recentness_tables,
                       recentness_observations)
from .lm import NGramModel, lm_tokens
from .pipeline import DEFAULT_E, PipelineConfig
from .typesys.index import build_type_index, export_project_types
from .typesys.resolve import UnitContext

log = logging.getLogger(__name__)

SCHEMA = "argrec-bundle/1"
MANIFEST = "manifest.json"


class BundleError(Exception):
    pass


@dataclass
class TrainOptions:
    order: int = 6
    lam: float = 0.5
    weight: float = 0.5
    min_count: int = 2
    heavy_order: int = 10
    heavy_min_count: int = 1
    cap: int = DEFAULT_CAP
    e_set: frozenset = DEFAULT_E
    rt: int = 20
    x: Fraction = DEFAULT_X
    strict: bool = False


@dataclass
class Trained:
    """Everything a bundle holds, in memory."""
    model: NGramModel
    heavy_model: NGramModel
    tables: RecentnessTables
    types_doc: dict
    options: TrainOptions
    files: list
    projects: list
    stats: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def config(self, heavy=None, **kw):
        kw.setdefault("rt", self.options.rt)
        kw.setdefault("x", self.options.x)
        return PipelineConfig(e_set=self.options.e_set, heavy=heavy, **kw)


def unit_stream(unit):
    return unit.package, unit.path, lm_tokens(unit.tokens)


def empty_tables(cap=DEFAULT_CAP):
    return RecentnessTables([0] * (cap + 2), [0] * (cap + 3), cap)


def train(units, opts=None, index=None):
    opts = opts or TrainOptions()
    if not units:
        raise BundleError("cannot train on an empty corpus")
    warnings = []
    if index is None:
        index = build_type_index(units)
    for w in getattr(index, "warnings", []):
        warnings.append(w)
    streams = [unit_stream(u) for u in units]
    model = NGramModel(opts.order, opts.lam, opts.weight, opts.min_count).train(streams)
    heavy = NGramModel(opts.heavy_order, opts.lam, opts.weight, opts.heavy_min_count)
    heavy.train(streams)
    heavy.package_layers.clear()  # the reference heavy scorer uses the global layer only
    obs, n_req, n_res = [], 0, 0
    for u in units:
        ctx = UnitContext(u, index, opts.strict)
        reqs = extract_requests(u, ctx=ctx)
        n_req += len(reqs)
        n_res += sum(1 for r in reqs if not r.unresolved)
        obs.extend(recentness_observations(reqs, ctx))
    if obs:
        tables = fit_recentness_tables(obs, opts.cap)
    else:
        warnings.append("no variable arguments in the corpus; recentness tables are uniform")
        tables = empty_tables(opts.cap)
    stats = {"units": len(units), "requests": n_req, "resolved": n_res,
             "observations": len(obs), "tokens": sum(len(s[2]) for s in streams)}
    return Trained(model, heavy, tables, export_project_types(index), opts,
                   sorted(u.path for u in units), sorted({u.project for u in units}),
                   stats, warnings)


def _dump(path, doc):
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def _prepare(out):
    out = Path(out)
    if out.exists() and any(out.iterdir()):
        man = out / MANIFEST
        ok = False
        if man.is_file():
            try:
                ok = json.loads(man.read_text(encoding="utf-8")).get("schema") == SCHEMA
            except ValueError:
                ok = False
        if not ok:
            raise BundleError(f"{out} is not empty and is not a bundle; refusing to overwrite")
        for sub in ("lm", "heavy"):
            if (out / sub).is_dir():
                shutil.rmtree(out / sub)
    out.mkdir(parents=True, exist_ok=True)
    return out


def save(trained, out):
    out = _prepare(out)
    opts = trained.options
    lm_man = trained.model.save(out / "lm")
    heavy_man = trained.heavy_model.save(out / "heavy")
    t = trained.tables
    tables = t.to_json()
    tables["probD"] = [str(p) for p in t.table_d()]
    tables["probU"] = [str(p) for p in t.table_u()]
    _dump(out / "tables.json", tables)
    _dump(out / "types.json", trained.types_doc)
    manifest = {
        "schema": SCHEMA,
        "lm": dict(lm_man, directory="lm"),
        "heavy": dict(heavy_man, directory="heavy"),
        "tables": "tables.json",
        "types": "types.json",
        "eSet": sorted(e.value for e in opts.e_set),
        "config": {"rt": opts.rt, "x": str(opts.x), "cap": opts.cap, "strictCompat": opts.strict},
        "files": trained.files,
        "projects": trained.projects,
        "stats": trained.stats,
        "warnings": trained.warnings,
    }
    _dump(out / MANIFEST, manifest)
    return manifest


def train_bundle(units, out, opts=None):
    trained = train(units, opts)
    return save(trained, out)


def read_manifest(path):
    path = Path(path)
    man = path / MANIFEST
    if not man.is_file():
        raise BundleError(f"no bundle at {path} (missing {MANIFEST})")
    doc = json.loads(man.read_text(encoding="utf-8"))
    if doc.get("schema") != SCHEMA:
        raise BundleError(f"unsupported bundle schema {doc.get('schema')!r}; expected {SCHEMA}")
    return doc


def load_heavy_model(path):
    path = Path(path)
    man = read_manifest(path)
    return NGramModel.load(path / man["heavy"]["directory"], man["heavy"])


def load(path):
    path = Path(path)
    man = read_manifest(path)
    model = NGramModel.load(path / man["lm"]["directory"], man["lm"])
    heavy = NGramModel.load(path / man["heavy"]["directory"], man["heavy"])
    tables = RecentnessTables.from_json(json.loads((path / man["tables"]).read_text(encoding="utf-8")))
    types_doc = json.loads((path / man["types"]).read_text(encoding="utf-8"))
    cfg = man["config"]
    opts = TrainOptions(order=model.order, lam=model.lam, weight=model.weight,
                        min_count=model.min_count, heavy_order=heavy.order,
                        heavy_min_count=heavy.min_count, cap=cfg["cap"],
                        e_set=frozenset(ExprType(e) for e in man["eSet"]), rt=cfg["rt"],
                        x=Fraction(cfg["x"]), strict=cfg.get("strictCompat", False))
    return Trained(model, heavy, tables, types_doc, opts, man["files"], man["projects"],
                   man["stats"], man["warnings"])


load_bundle = load
