r"""Exact QUBO encoding of Min-k-Union.

Variables are one ``x`` per set (ids ``0..|S|-1``) followed by one ``y``
per ground-set element (ids ``|S|..n-1``). The energy is

.. math::

    H = A\,(k - \sum_M x_M)^2 + B \sum_{v} \sum_{M \ni v} (1 - y_v)\,x_M + C \sum_v y_v

with integer weights and ``A = B > C|V|``, so every global minimizer picks
exactly ``k`` sets, sets ``y`` to the union indicator, and has energy
``C * |union|``. The constant ``A k^2`` is stored as ``offset``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, UsageError
from .minkunion import MinKUnionInstance

__all__ = [
    "Penalties",
    "VariableMap",
    "QuboModel",
    "IsingModel",
    "SolutionReport",
    "build_qubo",
    "default_penalties",
    "energy",
    "energies",
    "decode",
    "to_ising",
    "ising_energy",
    "export",
    "import_coordinate_text",
]


@dataclass(frozen=True)
class Penalties:
    A: int
    B: int
    C: int
    k: int

    def check(self, num_elements: int) -> None:
        for name in ("A", "B", "C"):
            value = getattr(self, name)
            if int(value) != value:
                raise UsageError(f"penalty {name}={value} must be an integer")
            if value <= 0:
                raise UsageError(f"penalty {name}={value} must be positive")
        if self.A != self.B:
            raise UsageError(f"penalties need A = B, got A={self.A}, B={self.B}")
        if not self.A > self.C * num_elements:
            raise UsageError(
                f"penalties need A = B > C*|V|: {self.A} > {self.C}*{num_elements} fails")


def default_penalties(inst: MinKUnionInstance) -> Penalties:
    n_el = inst.num_elements
    return Penalties(A=n_el + 1, B=n_el + 1, C=1, k=inst.k)


@dataclass(frozen=True)
class VariableMap:
    set_vars: tuple[int, ...]
    element_vars: Mapping[int, int]
    n: int

    @classmethod
    def for_instance(cls, inst: MinKUnionInstance) -> "VariableMap":
        s = inst.num_sets
        return cls(tuple(range(s)),
                   {v: s + i for i, v in enumerate(inst.ground_set)},
                   s + inst.num_elements)

    @property
    def num_sets(self) -> int:
        return len(self.set_vars)

    def assignment(self, chosen: Iterable[int], active_elements: Iterable[int]) -> np.ndarray:
        """Bit vector with the given set and element variables switched on."""
        x = np.zeros(self.n, dtype=np.int8)
        for j in chosen:
            x[self.set_vars[j]] = 1
        for v in active_elements:
            x[self.element_vars[v]] = 1
        return x


@dataclass(frozen=True)
class QuboModel:
    """Upper-triangular integer QUBO plus a constant offset.

    ``coefficients[(i, j)]`` with ``i <= j`` is the full weight of
    ``x_i x_j``; diagonal entries are the linear terms. Zeros are never
    stored.
    """

    n: int
    coefficients: Mapping[tuple[int, int], int]
    offset: int = 0
    penalties: Penalties | None = None

    def __post_init__(self):
        clean = {}
        for (i, j), q in self.coefficients.items():
            i, j, q = int(i), int(j), int(q)
            if i > j:
                i, j = j, i
            if not (0 <= i and j < self.n):
                raise DomainError(f"term ({i}, {j}) outside {self.n} variables")
            q += clean.pop((i, j), 0)
            if q:
                clean[(i, j)] = q
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))
        object.__setattr__(self, "offset", int(self.offset))

    @property
    def num_terms(self) -> int:
        return len(self.coefficients)

    def matrix(self) -> np.ndarray:
        """Dense upper-triangular ``n x n`` int64 matrix."""
        Q = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), q in self.coefficients.items():
            Q[i, j] = q
        return Q

    def max_abs_coefficient(self) -> int:
        return max((abs(q) for q in self.coefficients.values()), default=0)


@dataclass(frozen=True)
class IsingModel:
    """``E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j`` over ``s in {-1,+1}``."""

    h: tuple[float, ...]
    J: Mapping[tuple[int, int], float]
    offset: float = 0.0

    @property
    def n(self) -> int:
        return len(self.h)


@dataclass
class SolutionReport:
    chosen: tuple[int, ...]
    union: tuple[int, ...]
    objective: int
    exactly_k: bool
    y_consistent: bool
    energy: int
    energy_matches_objective: bool | None
    backend: str = "unspecified"
    row_misses: int | None = None
    assignment: tuple[int, ...] = field(default=(), repr=False)

    @property
    def feasible(self) -> bool:
        return self.exactly_k


def build_qubo(inst: MinKUnionInstance, penalties: tuple[int, int, int] | Penalties | None = None
               ) -> tuple[QuboModel, VariableMap]:
    if penalties is None:
        pen = default_penalties(inst)
    else:
        if not isinstance(penalties, Penalties):
            A, B, C = penalties
            pen = Penalties(A, B, C, inst.k)
        else:
            pen = Penalties(penalties.A, penalties.B, penalties.C, inst.k)
        pen.check(inst.num_elements)
    A, B, C, k = pen.A, pen.B, pen.C, inst.k
    vmap = VariableMap.for_instance(inst)

    terms: dict[tuple[int, int], int] = {}

    def add(i, j, q):
        key = (i, j) if i <= j else (j, i)
        terms[key] = terms.get(key, 0) + q

    # A (k - sum x)^2 = A k^2 + A (1 - 2k) sum x + 2A sum_{M<M'} x x'
    xs = vmap.set_vars
    for a, i in enumerate(xs):
        add(i, i, A * (1 - 2 * k))
        for i2 in xs[a + 1:]:
            add(i, i2, 2 * A)
    # B (1 - y_v) x_M for each incidence v in M
    for j, members in enumerate(inst.sets):
        for v in members:
            add(xs[j], xs[j], B)
            add(xs[j], vmap.element_vars[v], -B)
    for v in inst.ground_set:
        add(vmap.element_vars[v], vmap.element_vars[v], C)

    return QuboModel(vmap.n, terms, A * k * k, pen), vmap


def _as_bits(model: QuboModel, assignment) -> np.ndarray:
    x = np.asarray(assignment, dtype=np.int64)
    if x.shape[-1:] != (model.n,) and not (model.n == 0 and x.size == 0):
        raise DomainError(f"assignment has length {x.shape[-1] if x.ndim else 0}, model has {model.n} variables")
    if np.any((x != 0) & (x != 1)):
        raise DomainError("assignment entries must be 0 or 1")
    return x


def energy(model: QuboModel, assignment: Sequence[int]) -> int:
    """``offset + sum_{i<=j} q_ij x_i x_j`` as an exact Python int."""
    x = _as_bits(model, assignment)
    if x.ndim != 1:
        raise DomainError("energy takes a single assignment; use energies for batches")
    total = model.offset
    for (i, j), q in model.coefficients.items():
        if x[i] and x[j]:
            total += q
    return int(total)


def energies(model: QuboModel, assignments) -> np.ndarray:
    """Vectorized energies of a ``(m, n)`` 0/1 array, int64."""
    X = _as_bits(model, assignments)
    if X.ndim == 1:
        X = X[None, :]
    if model.n == 0:
        return np.full(X.shape[0], model.offset, dtype=np.int64)
    Q = model.matrix()
    return np.einsum("mi,ij,mj->m", X, Q, X) + model.offset


def decode(model: QuboModel, vmap: VariableMap, inst: MinKUnionInstance, assignment,
           backend: str = "unspecified") -> SolutionReport:
    """Read the chosen sets off the x-bits and check the y-bits against them.

    Union and objective are recomputed from ``inst``; y-bits only feed the
    ``y_consistent`` flag.
    """
    x = _as_bits(model, assignment)
    chosen = [j for j, var in enumerate(vmap.set_vars) if x[var]]
    sel = inst.selection(chosen)
    members = set(sel.union)
    y_ok = all(bool(x[var]) == (v in members) for v, var in vmap.element_vars.items())
    exactly_k = len(sel.indices) == inst.k
    e = energy(model, x)
    check = None
    if exactly_k and y_ok:
        C = model.penalties.C if model.penalties else 1
        check = e == C * sel.objective
    return SolutionReport(sel.indices, sel.union, sel.objective, exactly_k, y_ok, e, check,
                          backend, assignment=tuple(int(b) for b in x))


def to_ising(model: QuboModel) -> IsingModel:
    """Substitute ``x = (1 + s) / 2``. Weights stay exact multiples of 1/4."""
    h = np.zeros(model.n)
    J: dict[tuple[int, int], float] = {}
    offset = float(model.offset)
    for (i, j), q in model.coefficients.items():
        if i == j:
            h[i] += q / 2
            offset += q / 2
        else:
            J[(i, j)] = J.get((i, j), 0.0) + q / 4
            h[i] += q / 4
            h[j] += q / 4
            offset += q / 4
    J = {key: w for key, w in J.items() if w}
    return IsingModel(tuple(float(v) for v in h), J, offset)


def ising_energy(model: IsingModel, spins) -> float:
    s = np.asarray(spins, dtype=float)
    total = model.offset + (float(np.dot(model.h, s)) if model.n else 0.0)
    for (i, j), w in model.J.items():
        total += w * s[i] * s[j]
    return total


def export(model: QuboModel, vmap: VariableMap | None = None, fmt: str = "coo") -> str:
    """Serialize to ``"coo"`` coordinate text or the ``"json"`` document."""
    if fmt == "coo":
        lines = [f"n {model.n} {model.num_terms} {model.offset}"]
        lines += [f"{i} {j} {q}" for (i, j), q in model.coefficients.items()]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        from .documents import dumps, qubo_to_doc
        return dumps(qubo_to_doc(model, vmap))
    raise UsageError(f"unknown QUBO export format {fmt!r}")


def import_coordinate_text(text: str) -> QuboModel:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty QUBO file")
    head = lines[0].split()
    lineno = 1
    try:
        if len(head) != 4 or head[0] != "n":
            raise ValueError
        n, num_terms, offset = int(head[1]), int(head[2]), int(head[3])
        terms = {}
        for lineno, line in enumerate(lines[1:], start=2):
            i, j, q = (int(t) for t in line.split())
            terms[(i, j)] = q
    except ValueError:
        raise ParseError("malformed coordinate-text QUBO", lineno) from None
    if len(terms) != num_terms:
        raise ParseError(f"header promises {num_terms} terms, found {len(terms)}")
    return QuboModel(n, terms, offset)
