"""Command-line pipeline: extract, build-qubo, solve, estimate, report.

Exit codes: 0 success, 2 usage, 3 parse, 4 capacity, 5 integrity
(independent checks disagree), 6 infeasible solution.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import documents
from .errors import (CapacityError, IntegrityError, InfeasibleResult, ParseError,
                     RowQuboError, UsageError)
from .minkunion import MinKUnionInstance, from_toggle_sets
from .qaoa import CostSpectrum, optimize
from .qubo import SolutionReport, build_qubo, decode, export
from .samplers import (DEFAULT_SEED, AnnealSchedule, SampleSet, histogram, histogram_csv,
                       sample_annealing, solve_brute_force)
from .trace import AddressTrace, count_row_misses, compute_toggle_sets, read_trace

__all__ = [
    "PipelineConfig",
    "QubitEstimate",
    "REFERENCE_BENCHMARKS",
    "cmd_extract",
    "cmd_build_qubo",
    "cmd_solve",
    "cmd_estimate",
    "cmd_report",
    "main",
]

# (name, elements, sets) of published address-scrambling benchmarks
REFERENCE_BENCHMARKS = (
    ("filter7", 524288, 19),
    ("rot6", 65536, 16),
    ("rot3d7", 2097152, 21),
    ("NN8", 356400, 22),
)


@dataclass(frozen=True)
class PipelineConfig:
    input: str | None = None
    input_format: str = "bin"
    width: int | None = None
    k: int | None = None
    ground_set: str = "union"
    penalties: tuple[int, int, int] | None = None
    backend: str = "brute"
    reads: int = 100
    sweeps: int = 1000
    p: int = 1
    shots: int = 1024
    seed: int = DEFAULT_SEED
    out: str | None = None
    samples_out: str | None = None
    qubo_format: str = "coo"

    def validate(self) -> None:
        if self.input_format not in ("bin", "hex", "instance"):
            raise UsageError(f"unknown input format {self.input_format!r}")
        if self.input_format == "hex" and (self.width is None or self.width < 1):
            raise UsageError("--format hex needs a positive --width")
        if self.input_format != "instance" and self.k is None:
            raise UsageError("--k is required when reading a trace")
        if self.k is not None and self.k < 0:
            raise UsageError(f"--k must be non-negative, got {self.k}")
        if self.ground_set not in ("union", "all"):
            raise UsageError(f"unknown ground-set policy {self.ground_set!r}")
        if self.backend not in ("brute", "sa", "qaoa"):
            raise UsageError(f"unknown backend {self.backend!r}")
        for name in ("reads", "sweeps", "p", "shots"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name} must be at least 1")
        if self.qubo_format not in ("coo", "json"):
            raise UsageError(f"unknown QUBO format {self.qubo_format!r}")


@dataclass(frozen=True)
class QubitEstimate:
    benchmark: str
    elements: int
    sets: int
    qubits: int


def _load(config: PipelineConfig) -> tuple[MinKUnionInstance, AddressTrace | None]:
    config.validate()
    if config.input is None:
        raise UsageError("--input is required")
    if config.input_format == "instance":
        with open(config.input, encoding="utf-8") as fh:
            doc = documents.loads(fh.read(), "instance", source=config.input)
        inst = documents.instance_from_doc(doc)
        if config.k is not None and config.k != inst.k:
            inst = MinKUnionInstance(inst.ground_set, inst.sets, config.k)
        return inst, None
    trace = read_trace(config.input, config.input_format, config.width)
    ts = compute_toggle_sets(trace)
    if config.k > ts.width:
        raise UsageError(f"k={config.k} exceeds the number of address bits ({ts.width}); "
                         "k is the number of row bits and cannot exceed the address width")
    return from_toggle_sets(ts, config.k, config.ground_set), trace


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_extract(config: PipelineConfig) -> MinKUnionInstance:
    inst, _ = _load(config)
    _emit(documents.dumps(documents.instance_to_doc(inst)), config.out)
    _note(f"elements={inst.num_elements} sets={inst.num_sets} k={inst.k} "
          f"qubits={inst.num_elements + inst.num_sets}")
    return inst


def cmd_build_qubo(config: PipelineConfig):
    inst, _ = _load(config)
    model, vmap = build_qubo(inst, config.penalties)
    _emit(export(model, vmap, config.qubo_format), config.out)
    _note(f"variables={model.n} terms={model.num_terms} offset={model.offset}")
    return model, vmap


def _best_decoded(model, vmap, inst, samples: SampleSet, backend: str) -> SolutionReport:
    """Feasible selections first, then lowest objective, consistent y, energy."""
    reports = [decode(model, vmap, inst, r.assignment, backend) for r in samples.records]
    return min(reports, key=lambda s: (not s.exactly_k, s.objective, not s.y_consistent,
                                       s.energy, s.assignment))


def cmd_solve(config: PipelineConfig) -> tuple[SolutionReport, SampleSet | None]:
    inst, trace = _load(config)
    model, vmap = build_qubo(inst, config.penalties)
    samples = None
    extra_doc = None
    if config.backend == "brute":
        _, minimizers = solve_brute_force(model)
        report = decode(model, vmap, inst, minimizers[0], "brute")
    elif config.backend == "sa":
        samples = sample_annealing(model, config.reads, AnnealSchedule(num_sweeps=config.sweeps),
                                   config.seed)
        report = _best_decoded(model, vmap, inst, samples, samples.backend)
        extra_doc = documents.sampleset_to_doc(samples)
    else:
        spectrum = CostSpectrum.from_model(model)
        result = optimize(spectrum, config.p, seed=config.seed, shots=config.shots)
        samples = result.samples
        report = _best_decoded(model, vmap, inst, samples, f"qaoa(p={config.p})")
        extra_doc = documents.qaoa_result_to_doc(result)

    if report.energy_matches_objective is False:
        raise IntegrityError(f"energy {report.energy} of a consistent assignment differs "
                             f"from C * objective ({report.objective})")
    if trace is not None and report.exactly_k:
        report.row_misses = count_row_misses(trace, report.chosen)
        if report.row_misses != report.objective:
            raise IntegrityError(f"decoded objective {report.objective} but the row-buffer walk "
                                 f"counts {report.row_misses} misses for bits {report.chosen}")

    _emit(documents.dumps(documents.report_to_doc(report, config.seed)), config.out)
    if extra_doc is not None and config.samples_out:
        _emit(documents.dumps(extra_doc), config.samples_out)
    _note(f"backend={report.backend} chosen={list(report.chosen)} objective={report.objective} "
          f"exactly_k={report.exactly_k} y_consistent={report.y_consistent} "
          f"row_misses={report.row_misses}")
    if not report.exactly_k:
        raise InfeasibleResult(f"best decoded assignment picks {len(report.chosen)} sets, "
                               f"expected {inst.k}")
    return report, samples


def cmd_estimate(elements: int, sets: int, benchmark: str = "custom") -> QubitEstimate:
    if elements < 0 or sets < 0:
        raise UsageError("element and set counts must be non-negative")
    return QubitEstimate(benchmark, elements, sets, elements + sets)


def _summary(samples: SampleSet) -> str:
    rows = histogram(samples)
    if not rows:
        return "best=none, occurrences=0, distinct optimal=0"
    best, occ, distinct = rows[0]
    return f"best={best}, occurrences={occ}, distinct optimal={distinct}"


def cmd_report(text: str, source: str | None = None) -> tuple[str, str]:
    """Histogram CSV and a one-line summary for a sampleset or qaoa_result document."""
    doc = documents.loads(text, source=source)
    if doc["kind"] == "qaoa_result":
        doc = doc.get("samples")
        if doc is None:
            raise ParseError("qaoa_result document carries no samples", None, source)
    elif doc["kind"] != "sampleset":
        raise ParseError(f"expected a sampleset document, got {doc['kind']!r}", None, source)
    samples = documents.sampleset_from_doc(doc)
    return histogram_csv(samples), _summary(samples)


def _penalties(text: str) -> tuple[int, int, int]:
    try:
        A, B, C = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B,C integers, got {text!r}") from None
    return A, B, C


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rowqubo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def input_args(p):
        p.add_argument("--input", required=True, help="trace file or instance document")
        p.add_argument("--format", dest="input_format", choices=("bin", "hex", "instance"),
                       default="bin")
        p.add_argument("--width", type=int, help="address width for hex traces")
        p.add_argument("--k", type=int, help="number of row bits to select")
        p.add_argument("--ground-set", choices=("union", "all"), default="union")
        p.add_argument("--out", help="output path (default: standard output)")

    input_args(sub.add_parser("extract", help="trace -> Min-k-Union instance document"))

    p = sub.add_parser("build-qubo", help="instance -> QUBO file")
    input_args(p)
    p.add_argument("--penalties", type=_penalties, help="override as A,B,C")
    p.add_argument("--qubo-format", choices=("coo", "json"), default="coo")

    p = sub.add_parser("solve", help="build the QUBO, solve it and verify the decoded selection")
    input_args(p)
    p.add_argument("--penalties", type=_penalties, help="override as A,B,C")
    p.add_argument("--backend", choices=("brute", "sa", "qaoa"), default="brute")
    p.add_argument("--reads", type=int, default=100)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples-out", help="where to write the sample set / QAOA result document")

    p = sub.add_parser("estimate", help="qubit requirement = elements + sets")
    p.add_argument("--elements", type=int)
    p.add_argument("--sets", type=int)
    p.add_argument("--benchmarks", action="store_true",
                   help="print the reference benchmark table instead")

    p = sub.add_parser("report", help="histogram CSV and summary for a sample set")
    p.add_argument("--input", required=True)
    p.add_argument("--out", help="CSV path (default: standard output)")
    return parser


def _config(args: argparse.Namespace) -> PipelineConfig:
    fields = PipelineConfig.__dataclass_fields__
    return PipelineConfig(**{k: v for k, v in vars(args).items() if k in fields and v is not None})


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return UsageError.exit_code if exc.code else 0
    try:
        if args.command == "extract":
            cmd_extract(_config(args))
        elif args.command == "build-qubo":
            cmd_build_qubo(_config(args))
        elif args.command == "solve":
            cmd_solve(_config(args))
        elif args.command == "estimate":
            if args.benchmarks:
                rows = [cmd_estimate(e, s, name) for name, e, s in REFERENCE_BENCHMARKS]
            elif args.elements is None or args.sets is None:
                raise UsageError("estimate needs --elements and --sets, or --benchmarks")
            else:
                rows = [cmd_estimate(args.elements, args.sets)]
            print("benchmark,elements,sets,qubits")
            for r in rows:
                print(f"{r.benchmark},{r.elements},{r.sets},{r.qubits}")
        elif args.command == "report":
            with open(args.input, encoding="utf-8") as fh:
                csv, summary = cmd_report(fh.read(), args.input)
            _emit(csv, args.out)
            _note(summary)
    except RowQuboError as exc:
        _note(f"rowqubo {args.command}: {type(exc).__name__}: {exc}")
        return exc.exit_code
    except OSError as exc:
        _note(f"rowqubo {args.command}: {exc}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
