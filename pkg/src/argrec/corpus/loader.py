"""Reading corpora from disk: manifests of project roots and split files."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .lexer import ParseError
from .parser import parse_unit


class CorpusError(Exception):
    pass


class SplitError(CorpusError):
    """Train and test parts of a split are not disjoint."""


@dataclass
class SourceFile:
    path: str  # posix path relative to the manifest/split directory
    project: str
    abspath: Path


@dataclass
class Split:
    train: list = field(default_factory=list)  # SourceFile
    test: list = field(default_factory=list)


def _entries(path):
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"no such file: {path}")
    out = []
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if line and not line.startswith("#"):
            out.append((n, line))
    return path.parent, out


def project_name(entry):
    """A directory entry names its project; a file entry belongs to the
    top directory of its relative path."""
    p = Path(entry)
    return p.name if p.suffix != ".java" else (p.parts[0] if len(p.parts) > 1 else "")


def java_files(root, base, project=None):
    """Every .java file under `root` (a file or directory), sorted by path."""
    root = Path(root)
    project = root.name if project is None else project
    if root.is_file():
        files = [root]
    elif root.is_dir():
        files = sorted(p for p in root.rglob("*.java") if p.is_file())
    else:
        raise CorpusError(f"project root does not exist: {root}")
    out = []
    for f in files:
        rel = Path(os.path.relpath(f, base)).as_posix()
        out.append(SourceFile(rel, project, f))
    return out


def read_manifest(path):
    """One project root per line (relative to the manifest's directory)."""
    base, entries = _entries(path)
    files = []
    for _, line in entries:
        root = (base / line)
        files.extend(java_files(root, base, project_name(line)))
    if not files:
        raise CorpusError(f"manifest {path} lists no .java files")
    return files


def read_split(path):
    """Lines of the form `train <path>` or `test <path>`; paths are files or
    project directories relative to the split file."""
    base, entries = _entries(path)
    split = Split()
    for n, line in entries:
        role, _, rest = line.partition(" ")
        rest = rest.strip()
        if role not in ("train", "test") or not rest:
            raise CorpusError(f"{path}:{n}: expected 'train <path>' or 'test <path>'")
        getattr(split, role).extend(java_files(base / rest, base, project_name(rest)))
    overlap = sorted({f.path for f in split.train} & {f.path for f in split.test})
    if overlap:
        raise SplitError(f"train and test overlap: {', '.join(overlap)}")
    if not split.test:
        raise CorpusError(f"split {path} has no test files")
    return split


def load_units(files):
    """Parse source files; a parse error names the file, line and column."""
    units = []
    for f in files:
        try:
            text = f.abspath.read_text(encoding="utf-8")
            units.append(parse_unit(text, f.path, f.project))
        except ParseError as exc:
            raise CorpusError(str(exc)) from exc
    return units


def load_corpus(manifest):
    return load_units(read_manifest(manifest))
