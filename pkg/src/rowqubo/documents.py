"""JSON interchange documents for instances, QUBOs, sample sets and reports.

Every document is an object with a ``kind`` and a ``version`` field,
written with sorted keys and two-space indentation, so writing a document
that was just read reproduces the original bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .minkunion import MinKUnionInstance
from .qaoa import QaoaParams, QaoaResult
from .qubo import Penalties, QuboModel, SolutionReport, VariableMap
from .samplers import Record, SampleSet

__all__ = [
    "FORMAT_VERSION",
    "dumps",
    "loads",
    "instance_to_doc",
    "instance_from_doc",
    "qubo_to_doc",
    "qubo_from_doc",
    "sampleset_to_doc",
    "sampleset_from_doc",
    "report_to_doc",
    "report_from_doc",
    "qaoa_result_to_doc",
    "qaoa_result_from_doc",
    "from_doc",
]

FORMAT_VERSION = 1


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str, kind: str | None = None, source: str | None = None) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, source) from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("not an interchange document (missing 'kind')", None, source)
    if kind is not None and doc["kind"] != kind:
        raise ParseError(f"expected a {kind!r} document, got {doc['kind']!r}", None, source)
    if doc.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported document version {doc.get('version')!r}", None, source)
    return doc


def _header(kind: str) -> dict[str, Any]:
    return {"kind": kind, "version": FORMAT_VERSION}


def _field(doc: dict, name: str):
    try:
        return doc[name]
    except KeyError:
        raise ParseError(f"{doc.get('kind', 'document')} is missing field {name!r}") from None


def _bits(assignment) -> str:
    return "".join(str(int(b)) for b in assignment)


def _unbits(text: str) -> tuple[int, ...]:
    if any(c not in "01" for c in text):
        raise ParseError(f"assignment {text!r} is not a bit string")
    return tuple(int(c) for c in text)


def instance_to_doc(inst: MinKUnionInstance) -> dict:
    doc = _header("instance")
    doc.update(ground_set=list(inst.ground_set), sets=[sorted(s) for s in inst.sets], k=inst.k)
    return doc


def instance_from_doc(doc: dict) -> MinKUnionInstance:
    return MinKUnionInstance(_field(doc, "ground_set"), _field(doc, "sets"), _field(doc, "k"))


def qubo_to_doc(model: QuboModel, vmap: VariableMap | None = None) -> dict:
    doc = _header("qubo")
    pen = model.penalties
    doc.update(
        n=model.n,
        offset=model.offset,
        penalties=None if pen is None else {"A": pen.A, "B": pen.B, "C": pen.C, "k": pen.k},
        variables=None if vmap is None else {
            "sets": list(vmap.set_vars),
            "elements": [[v, i] for v, i in vmap.element_vars.items()],
        },
        terms=[[i, j, q] for (i, j), q in model.coefficients.items()],
    )
    return doc


def qubo_from_doc(doc: dict) -> tuple[QuboModel, VariableMap | None]:
    pen = _field(doc, "penalties")
    penalties = None if pen is None else Penalties(pen["A"], pen["B"], pen["C"], pen["k"])
    terms = {(int(i), int(j)): int(q) for i, j, q in _field(doc, "terms")}
    model = QuboModel(int(_field(doc, "n")), terms, int(_field(doc, "offset")), penalties)
    var = doc.get("variables")
    vmap = None
    if var is not None:
        vmap = VariableMap(tuple(var["sets"]), {int(v): int(i) for v, i in var["elements"]}, model.n)
    return model, vmap


def sampleset_to_doc(samples: SampleSet) -> dict:
    doc = _header("sampleset")
    doc.update(
        backend=samples.backend,
        seed=samples.seed,
        num_reads=samples.num_reads,
        records=[{"assignment": _bits(r.assignment), "energy": r.energy,
                  "occurrences": r.occurrences} for r in samples.records],
    )
    return doc


def sampleset_from_doc(doc: dict) -> SampleSet:
    try:
        recs = tuple(Record(_unbits(r["assignment"]), int(r["energy"]), int(r["occurrences"]))
                     for r in _field(doc, "records"))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed sample record: {exc}") from None
    return SampleSet(recs, int(_field(doc, "num_reads")), _field(doc, "backend"), doc.get("seed"))


def report_to_doc(report: SolutionReport, seed: int | None = None) -> dict:
    doc = _header("report")
    doc.update(
        chosen=list(report.chosen),
        union=list(report.union),
        objective=report.objective,
        exactly_k=report.exactly_k,
        y_consistent=report.y_consistent,
        energy=report.energy,
        energy_matches_objective=report.energy_matches_objective,
        backend=report.backend,
        row_misses=report.row_misses,
        assignment=_bits(report.assignment),
        seed=seed,
    )
    return doc


def report_from_doc(doc: dict) -> SolutionReport:
    return SolutionReport(
        chosen=tuple(_field(doc, "chosen")),
        union=tuple(_field(doc, "union")),
        objective=_field(doc, "objective"),
        exactly_k=_field(doc, "exactly_k"),
        y_consistent=_field(doc, "y_consistent"),
        energy=_field(doc, "energy"),
        energy_matches_objective=_field(doc, "energy_matches_objective"),
        backend=_field(doc, "backend"),
        row_misses=doc.get("row_misses"),
        assignment=_unbits(doc.get("assignment", "")),
    )


def _params_doc(params: QaoaParams) -> dict:
    return {"gammas": list(params.gammas), "betas": list(params.betas)}


def qaoa_result_to_doc(result: QaoaResult) -> dict:
    doc = _header("qaoa_result")
    doc.update(
        params=_params_doc(result.params),
        expectation=result.expectation,
        optimizer_trace=[dict(_params_doc(p), expectation=v) for p, v in result.optimizer_trace],
        samples=None if result.samples is None else sampleset_to_doc(result.samples),
    )
    return doc


def qaoa_result_from_doc(doc: dict) -> QaoaResult:
    p = _field(doc, "params")
    trace = tuple((QaoaParams(t["gammas"], t["betas"]), float(t["expectation"]))
                  for t in _field(doc, "optimizer_trace"))
    samples = doc.get("samples")
    return QaoaResult(QaoaParams(p["gammas"], p["betas"]), float(_field(doc, "expectation")),
                      None if samples is None else sampleset_from_doc(samples), trace)


_READERS = {
    "instance": instance_from_doc,
    "qubo": qubo_from_doc,
    "sampleset": sampleset_from_doc,
    "report": report_from_doc,
    "qaoa_result": qaoa_result_from_doc,
}


def from_doc(doc: dict):
    """Dispatch on ``doc["kind"]``."""
    try:
        reader = _READERS[doc["kind"]]
    except KeyError:
        raise ParseError(f"unknown document kind {doc.get('kind')!r}") from None
    return reader(doc)
