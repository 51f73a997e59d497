"""Executable corpus: model files, expected values, and the pipeline that checks them."""

from __future__ import annotations

import fnmatch
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..cohomology import DEFAULT_CAP, betti_table, poincare_duality_check
from ..model import check_differential, formal_dimension, load_model
from ..purity import is_elliptic
from ..rank import ExtensionSpec, extension_summary, rank_bounds, verify_extension
from ..structure import (
    NonQuadraticError,
    NotTwoStageError,
    gottlieb,
    hypothesis_check,
    maximality,
    quadratic_block_matrix,
    two_stage_split,
    wang,
)

CORPUS_DIR = Path(__file__).resolve().parent
MANIFEST = CORPUS_DIR / "manifest.txt"
ORIGINS = ("source", "oracle", "trivial")


class ManifestError(ValueError):
    pass


@dataclass
class Expectation:
    key: str
    value: str
    origin: str
    line: int


@dataclass
class CorpusEntry:
    name: str
    model: str = ""
    extension: str | None = None
    wang: str | None = None
    notes: list = field(default_factory=list)
    expected: list = field(default_factory=list)


def parse_manifest(text: str) -> list:
    entries = []
    cur = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("note") else raw.strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "entry":
            cur = CorpusEntry(rest)
            entries.append(cur)
            continue
        if cur is None:
            raise ManifestError(f"line {ln}: {word!r} outside an entry")
        if word == "model":
            cur.model = rest
        elif word == "extension":
            cur.extension = rest
        elif word == "wang":
            cur.wang = rest
        elif word == "note":
            cur.notes.append(rest)
        elif word == "expect":
            body, at, origin = rest.rpartition("@")
            key, eq, value = body.partition("=")
            if not at or not eq:
                raise ManifestError(f"line {ln}: expected 'expect key = value @origin'")
            if origin.strip() not in ORIGINS:
                raise ManifestError(f"line {ln}: origin must be one of {', '.join(ORIGINS)}")
            cur.expected.append(Expectation(key.strip(), value.strip(), origin.strip(), ln))
        else:
            raise ManifestError(f"line {ln}: unknown keyword {word!r}")
    for e in entries:
        if not e.model:
            raise ManifestError(f"entry {e.name!r} has no model file")
    return entries


def load_manifest(path=MANIFEST) -> list:
    return parse_manifest(Path(path).read_text())


def _add(report: dict, lines, prefix="") -> None:
    for line in lines:
        key, eq, value = line.partition(" = ")
        if not eq:
            continue
        key = prefix + key.strip()
        if key in report:
            report[key] += "; " + value.strip()
        else:
            report[key] = value.strip()


def pipeline(model, *, extension=None, wang_base=None, notes=(), cap=DEFAULT_CAP) -> dict:
    """Every report for one model, flattened to key -> value strings."""
    report: dict = {}
    _add(report, check_differential(model).lines())
    ell = is_elliptic(model)
    _add(report, ell.lines())
    if ell.elliptic:
        table = betti_table(model, elliptic=ell, cap=cap)
        _add(report, table.lines())
        report["formal_dimension"] = str(formal_dimension(model, ell))
        report["duality"] = str(poincare_duality_check(model, ell, table).holds).lower()
    try:
        decomp = two_stage_split(model)
    except NotTwoStageError:
        report["two_stage"] = "false"
        decomp = None
    if decomp is not None:
        _add(report, decomp.lines())
        _add(report, maximality(model, decomp).lines())
        _add(report, hypothesis_check(model, decomp).lines(), "hyp.")
        try:
            _add(report, quadratic_block_matrix(model, decomp).lines(), "matrix.")
        except NonQuadraticError:
            report["matrix.quadratic"] = "false"
    _add(report, gottlieb(model).lines())
    if wang_base:
        _add(report, wang(model, wang_base, cap=cap).lines())
    certs = []
    if extension is not None:
        cert = verify_extension(ExtensionSpec(model, extension))
        certs.append(cert)
        _add(report, extension_summary(cert), "ext.")
    if ell.elliptic:
        _add(report, rank_bounds(model, certs, annotations=notes, cap=cap).lines())
    return report


@dataclass
class EntryResult:
    name: str
    passed: bool
    mismatches: list  # (key, expected, computed, origin)
    seconds: float
    error: str | None = None

    def lines(self) -> list:
        status = "pass" if self.passed else "FAIL"
        out = [f"{status} {self.name} ({self.seconds:.2f}s)"]
        if self.error:
            out.append(f"  error: {self.error}")
        for key, want, got, origin in self.mismatches:
            out.append(f"  {key}: expected {want} @{origin}, computed {got}")
        return out


@dataclass
class RunReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def lines(self) -> list:
        out = [ln for r in self.results for ln in r.lines()]
        n = sum(r.passed for r in self.results)
        out.append(f"corpus: {n}/{len(self.results)} entries pass")
        return out


def run_entry(entry: CorpusEntry, directory=CORPUS_DIR, cap=DEFAULT_CAP) -> EntryResult:
    t0 = time.perf_counter()
    directory = Path(directory)
    try:
        model = load_model(directory / entry.model)
        ext = load_model(directory / entry.extension) if entry.extension else None
        report = pipeline(model, extension=ext, wang_base=entry.wang, notes=entry.notes, cap=cap)
    except Exception as exc:  # reported per entry, the run continues
        return EntryResult(entry.name, False, [], time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")
    bad = [(e.key, e.value, report.get(e.key, "<missing>"), e.origin)
           for e in entry.expected if report.get(e.key) != e.value]
    return EntryResult(entry.name, not bad, bad, time.perf_counter() - t0)


def run_corpus(pattern: str = "*", manifest=MANIFEST, cap=DEFAULT_CAP) -> RunReport:
    manifest = Path(manifest)
    entries = [e for e in load_manifest(manifest) if fnmatch.fnmatchcase(e.name, pattern)]
    entries.sort(key=lambda e: e.name)
    return RunReport([run_entry(e, manifest.parent, cap) for e in entries])
