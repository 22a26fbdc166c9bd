"""Classical QUBO solvers: exact enumeration and seeded simulated annealing."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .errors import CapacityError, IntegrityError, UsageError
from .qubo import QuboModel, energies

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_BRUTE_FORCE_CAP",
    "Record",
    "SampleSet",
    "AnnealSchedule",
    "aggregate",
    "check_sampleset",
    "solve_brute_force",
    "sample_annealing",
    "histogram",
    "histogram_csv",
]

DEFAULT_SEED = 20231
DEFAULT_BRUTE_FORCE_CAP = 24
_CHUNK_BITS = 16


@dataclass(frozen=True)
class Record:
    assignment: tuple[int, ...]
    energy: int
    occurrences: int


@dataclass(frozen=True)
class SampleSet:
    records: tuple[Record, ...]
    num_reads: int
    backend: str
    seed: int | None = None

    def __post_init__(self):
        recs = tuple(self.records)
        object.__setattr__(self, "records", recs)
        total = sum(r.occurrences for r in recs)
        if total != self.num_reads:
            raise IntegrityError(f"occurrences sum to {total}, num_reads is {self.num_reads}")
        keys = [(r.energy, r.assignment) for r in recs]
        if keys != sorted(keys) or len(set(r.assignment for r in recs)) != len(recs):
            raise IntegrityError("records must be unique and sorted by (energy, assignment)")

    @property
    def first(self) -> Record:
        return self.records[0]

    @property
    def lowest_energy(self) -> int | None:
        return self.records[0].energy if self.records else None

    def occurrences_of(self, energy: int) -> int:
        return sum(r.occurrences for r in self.records if r.energy == energy)


def aggregate(model: QuboModel, assignments, backend: str, seed: int | None = None) -> SampleSet:
    """Collapse raw reads into a SampleSet with exact energies."""
    rows = [tuple(int(b) for b in a) for a in np.asarray(assignments, dtype=np.int64).reshape(-1, model.n)]
    counts = Counter(rows)
    if counts:
        distinct = list(counts)
        es = energies(model, np.array(distinct, dtype=np.int64).reshape(len(distinct), model.n))
        recs = [Record(a, int(e), counts[a]) for a, e in zip(distinct, es)]
    else:
        recs = []
    recs.sort(key=lambda r: (r.energy, r.assignment))
    return SampleSet(tuple(recs), len(rows), backend, seed)


def check_sampleset(model: QuboModel, samples: SampleSet) -> None:
    """Recompute every record energy; raise IntegrityError on any mismatch."""
    if not samples.records:
        return
    X = np.array([r.assignment for r in samples.records], dtype=np.int64).reshape(-1, model.n)
    es = energies(model, X)
    for r, e in zip(samples.records, es):
        if r.energy != int(e):
            raise IntegrityError(f"record {r.assignment} stores energy {r.energy}, model gives {int(e)}")


# ---------------------------------------------------------------- brute force

def _all_bits(m: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop-1`` of the lexicographic table of all m-bit vectors."""
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int64)


def _free_variables(model: QuboModel) -> list[int]:
    """Greedy independent set of the coupling graph, low degree first."""
    nbrs: list[set[int]] = [set() for _ in range(model.n)]
    for (i, j) in model.coefficients:
        if i != j:
            nbrs[i].add(j)
            nbrs[j].add(i)
    free: list[int] = []
    taken: set[int] = set()
    for v in sorted(range(model.n), key=lambda v: (len(nbrs[v]), v)):
        if not nbrs[v] & taken:
            taken.add(v)
            free.append(v)
    return sorted(free)


def _brute_full(model: QuboModel):
    n = model.n
    Q = model.matrix()
    best = None
    winners: list[np.ndarray] = []
    step = 1 << _CHUNK_BITS
    for start in range(0, 1 << n, step):
        X = _all_bits(n, start, min(start + step, 1 << n))
        es = np.einsum("mi,mi->m", X @ Q, X) + model.offset
        lo = int(es.min())
        if best is None or lo < best:
            best, winners = lo, []
        if lo == best:
            winners.extend(X[es == lo])
    return best, [tuple(int(b) for b in w) for w in winners]


def _brute_reduced(model: QuboModel, free: Sequence[int]):
    """Enumerate the non-free variables; each free variable is then set optimally.

    Free variables are pairwise uncoupled, so given the rest each one only
    sees a linear field ``f`` and contributes ``min(0, f)``. A zero field
    admits both values and both are kept as minimizers.
    """
    n = model.n
    free = np.asarray(free, dtype=np.int64)
    fixed = np.array([v for v in range(n) if v not in set(free.tolist())], dtype=np.int64)
    Q = model.matrix()
    Qsym = Q + Q.T - np.diag(np.diag(Q))
    Q_ff = np.triu(Q[np.ix_(fixed, fixed)])
    coupling = Qsym[np.ix_(fixed, free)]
    free_diag = np.diag(Q)[free]
    best = None
    winners: list[tuple[np.ndarray, np.ndarray]] = []
    m = len(fixed)
    step = 1 << _CHUNK_BITS
    for start in range(0, 1 << m, step):
        X = _all_bits(m, start, min(start + step, 1 << m))
        base = np.einsum("mi,mi->m", X @ Q_ff, X) + model.offset
        F = free_diag[None, :] + X @ coupling
        es = base + np.minimum(F, 0).sum(axis=1)
        lo = int(es.min())
        if best is None or lo < best:
            best, winners = lo, []
        if lo == best:
            rows = np.flatnonzero(es == lo)
            winners.extend((X[r], F[r]) for r in rows)
    out = []
    for xf, f in winners:
        options = [(1,) if fv < 0 else (0,) if fv > 0 else (0, 1) for fv in f]
        for choice in itertools.product(*options):
            a = np.zeros(n, dtype=np.int64)
            a[fixed] = xf
            a[free] = choice
            out.append(tuple(int(b) for b in a))
    return best, out


def solve_brute_force(model: QuboModel, cap: int = DEFAULT_BRUTE_FORCE_CAP,
                      method: str = "auto") -> tuple[int, list[tuple[int, ...]]]:
    """Exact global minimum and every minimizer, in lexicographic order.

    ``method="full"`` scans all ``2**n`` assignments. ``"reduced"`` scans
    only the variables outside a greedy independent set of the coupling
    graph and minimizes the independent ones in closed form; the result is
    identical. ``"auto"`` takes whichever enumerates fewer assignments.
    ``cap`` bounds the number of enumerated variables.
    """
    if model.n == 0:
        return model.offset, [()]
    if method not in ("auto", "full", "reduced"):
        raise UsageError(f"unknown brute-force method {method!r}")
    free = _free_variables(model) if method != "full" else []
    if method == "auto":
        method = "reduced" if len(free) > 0 else "full"
    enumerated = model.n if method == "full" else model.n - len(free)
    if enumerated > cap:
        raise CapacityError(
            f"exhaustive search over {enumerated} variables exceeds the cap of {cap}; "
            "use sample_annealing instead")
    best, winners = _brute_full(model) if method == "full" else _brute_reduced(model, free)
    return best, sorted(winners)


# ------------------------------------------------------------------ annealing

@dataclass(frozen=True)
class AnnealSchedule:
    num_sweeps: int = 1000
    beta_initial: float | None = None
    beta_final: float = 10.0
    interpolation: str = "geometric"

    def resolve(self, model: QuboModel) -> "AnnealSchedule":
        """Fill in ``beta_initial = 1 / max|q_ij|`` and validate."""
        b0 = self.beta_initial
        if b0 is None:
            b0 = 1.0 / max(model.max_abs_coefficient(), 1)
        sched = AnnealSchedule(self.num_sweeps, float(b0), float(self.beta_final), self.interpolation)
        sched.validate()
        return sched

    def validate(self) -> None:
        if int(self.num_sweeps) != self.num_sweeps or self.num_sweeps < 1:
            raise UsageError(f"num_sweeps must be a positive integer, got {self.num_sweeps}")
        if self.interpolation not in ("geometric", "linear"):
            raise UsageError(f"unknown interpolation {self.interpolation!r}")
        if self.beta_initial is None or not 0 < self.beta_initial < self.beta_final:
            raise UsageError(
                f"need 0 < beta_initial < beta_final, got {self.beta_initial} and {self.beta_final}")

    def betas(self) -> np.ndarray:
        if self.num_sweeps == 1:
            return np.array([self.beta_final])
        if self.interpolation == "geometric":
            return np.geomspace(self.beta_initial, self.beta_final, self.num_sweeps)
        return np.linspace(self.beta_initial, self.beta_final, self.num_sweeps)


@njit(cache=True)
def _anneal_one(indptr, indices, weights, diag, state, betas, uniforms):
    n = state.shape[0]
    field = diag.copy()
    for i in range(n):
        if state[i]:
            for p in range(indptr[i], indptr[i + 1]):
                field[indices[p]] += weights[p]
    for t in range(betas.shape[0]):
        beta = betas[t]
        for i in range(n):
            delta = field[i] if state[i] == 0 else -field[i]
            if delta <= 0.0 or uniforms[t, i] < np.exp(-beta * delta):
                step = 1.0 if state[i] == 0 else -1.0
                state[i] = 1 - state[i]
                for p in range(indptr[i], indptr[i + 1]):
                    field[indices[p]] += step * weights[p]
    return state


def _adjacency(model: QuboModel):
    n = model.n
    diag = np.zeros(n)
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (i, j), q in model.coefficients.items():
        if i == j:
            diag[i] += q
        else:
            nbrs[i].append((j, q))
            nbrs[j].append((i, q))
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(row) for row in nbrs])
    indices = np.array([j for row in nbrs for j, _ in row], dtype=np.int64)
    weights = np.array([q for row in nbrs for _, q in row], dtype=np.float64)
    return indptr, indices, weights, diag


def read_rng(seed: int, read: int) -> np.random.Generator:
    """Independent stream for one read, keyed by (seed, read index)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(read,)))


def sample_annealing(model: QuboModel, num_reads: int = 100, schedule: AnnealSchedule | None = None,
                     seed: int = DEFAULT_SEED) -> SampleSet:
    """Single-flip Metropolis annealing, one uniform random start per read.

    Variables are visited in index order each sweep; an uphill flip of size
    ``dE`` is accepted with probability ``exp(-beta * dE)``. Each read draws
    from its own stream, so the result depends only on the arguments.
    """
    if int(num_reads) != num_reads or num_reads < 1:
        raise UsageError(f"num_reads must be a positive integer, got {num_reads}")
    sched = (schedule or AnnealSchedule()).resolve(model)
    betas = sched.betas()
    indptr, indices, weights, diag = _adjacency(model)
    n = model.n
    out = np.zeros((num_reads, n), dtype=np.int64)
    for r in range(num_reads):
        rng = read_rng(seed, r)
        state = rng.integers(0, 2, size=n).astype(np.int8)
        uniforms = rng.random((betas.shape[0], n))
        if n:
            state = _anneal_one(indptr, indices, weights, diag, state, betas, uniforms)
        out[r] = state
    samples = aggregate(model, out, backend=f"sa(sweeps={sched.num_sweeps},"
                        f"beta={sched.beta_initial:.6g}..{sched.beta_final:.6g},{sched.interpolation})",
                        seed=seed)
    check_sampleset(model, samples)
    return samples


# ------------------------------------------------------------------ histogram

def histogram(samples: SampleSet) -> list[tuple[int, int, int]]:
    """Rows ``(energy, total occurrences, distinct assignments)``, ascending."""
    rows: dict[int, list[int]] = {}
    for r in samples.records:
        acc = rows.setdefault(r.energy, [0, 0])
        acc[0] += r.occurrences
        acc[1] += 1
    return [(e, occ, distinct) for e, (occ, distinct) in sorted(rows.items())]


def histogram_csv(samples: SampleSet) -> str:
    lines = ["energy,occurrences,distinct"]
    lines += [f"{e},{occ},{d}" for e, occ, d in histogram(samples)]
    return "\n".join(lines) + "\n"
