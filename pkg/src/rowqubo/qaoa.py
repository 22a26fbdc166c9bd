"""Dense statevector QAOA on the diagonal cost Hamiltonian of a QUBO.

Basis index ``b`` encodes the assignment whose variable ``i`` equals bit
``i`` of ``b`` (least significant bit is variable 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .qubo import QuboModel
from .samplers import DEFAULT_SEED, Record, SampleSet

__all__ = [
    "DEFAULT_QUBIT_CAP",
    "CostSpectrum",
    "QaoaParams",
    "QaoaResult",
    "evolve",
    "expectation",
    "optimize",
    "sample_state",
    "uniform_state",
]

DEFAULT_QUBIT_CAP = 20
GRID_POINTS = 16


@dataclass(frozen=True)
class CostSpectrum:
    n: int
    energies: np.ndarray = field(repr=False)

    def __post_init__(self):
        E = np.array(self.energies, dtype=np.int64)
        if E.shape != (1 << self.n,):
            raise DomainError(f"{self.n} qubits need {1 << self.n} energies, got {E.shape}")
        E.setflags(write=False)
        object.__setattr__(self, "energies", E)

    @classmethod
    def from_model(cls, model: QuboModel, cap: int = DEFAULT_QUBIT_CAP) -> "CostSpectrum":
        if model.n > cap:
            raise CapacityError(f"{model.n} qubits exceed the statevector cap of {cap} "
                                f"({2 ** model.n} amplitudes)")
        n = model.n
        out = np.empty(1 << n, dtype=np.int64)
        shifts = np.arange(n, dtype=np.int64)
        Q = model.matrix()
        step = 1 << 16
        for start in range(0, 1 << n, step):
            idx = np.arange(start, min(start + step, 1 << n), dtype=np.int64)
            X = (idx[:, None] >> shifts) & 1
            out[start:start + len(idx)] = np.einsum("mi,mi->m", X @ Q, X) + model.offset
        return cls(n, out)

    def assignment(self, b: int) -> tuple[int, ...]:
        return tuple((int(b) >> i) & 1 for i in range(self.n))

    def index_of(self, assignment) -> int:
        return sum(int(bit) << i for i, bit in enumerate(assignment))


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) < 1 or len(self.gammas) != len(self.betas):
            raise DomainError("need p >= 1 and as many betas as gammas")

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def zeros(cls, p: int) -> "QaoaParams":
        return cls((0.0,) * p, (0.0,) * p)

    @classmethod
    def from_vector(cls, v) -> "QaoaParams":
        v = list(v)
        p = len(v) // 2
        return cls(v[:p], v[p:])

    def vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)


@dataclass(frozen=True)
class QaoaResult:
    params: QaoaParams
    expectation: float
    samples: SampleSet | None
    optimizer_trace: tuple[tuple[QaoaParams, float], ...] = field(repr=False)


def uniform_state(n: int) -> np.ndarray:
    return np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)


def _apply_mixer(state: np.ndarray, n: int, beta: float) -> np.ndarray:
    c, s = np.cos(beta), -1j * np.sin(beta)
    for q in range(n):
        view = state.reshape(1 << (n - 1 - q), 2, 1 << q)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = c * a0 + s * a1
        view[:, 1, :] = s * a0 + c * a1
    return state


def evolve(spectrum: CostSpectrum, params: QaoaParams, cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Uniform superposition, then ``p`` rounds of cost phase and X mixer."""
    if spectrum.n > cap:
        raise CapacityError(f"{spectrum.n} qubits exceed the statevector cap of {cap}")
    state = uniform_state(spectrum.n)
    E = spectrum.energies.astype(np.float64)
    for gamma, beta in zip(params.gammas, params.betas):
        if gamma:
            state *= np.exp(-1j * gamma * E)
        if beta:
            _apply_mixer(state, spectrum.n, beta)
    return state


def expectation(spectrum: CostSpectrum, state: np.ndarray) -> float:
    if state.shape != (1 << spectrum.n,):
        raise DomainError(f"state has {state.shape} amplitudes, expected {1 << spectrum.n}")
    probs = np.abs(state) ** 2
    return float(np.dot(probs, spectrum.energies))


class _Objective:
    def __init__(self, spectrum: CostSpectrum):
        self.spectrum = spectrum
        self.trace: list[tuple[QaoaParams, float]] = []
        self._cache: dict[tuple[float, ...], float] = {}

    def __call__(self, vec) -> float:
        key = tuple(float(v) for v in vec)
        if key not in self._cache:
            params = QaoaParams.from_vector(key)
            value = expectation(self.spectrum, evolve(self.spectrum, params))
            self._cache[key] = value
            self.trace.append((params, value))
        return self._cache[key]


def _better(candidate: float, incumbent: float) -> bool:
    return candidate < incumbent - 1e-12 * max(1.0, abs(incumbent))


def _coordinate_descent(f, x0, value, step, min_step=1e-4, max_evals=4000):
    x = np.array(x0, dtype=float)
    evals = 0
    while step >= min_step and evals < max_evals:
        improved = False
        for i in range(len(x)):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[i] += sign * step
                v = f(trial)
                evals += 1
                if _better(v, value):
                    x, value, improved = trial, v, True
                    break
        if not improved:
            step /= 2
    return x, value


def optimize(spectrum: CostSpectrum, p: int = 1, seed: int = DEFAULT_SEED,
             grid_points: int = GRID_POINTS, num_starts: int = 8,
             shots: int | None = 1024) -> QaoaResult:
    """Grid search, then coordinate descent on the QAOA angles.

    For ``p = 1`` the grid is the full ``grid_points x grid_points`` lattice on
    ``[0, pi)^2``. For larger ``p`` the candidates are the zero angles, the
    best ``p = 1`` lattice point repeated in every layer, and ``num_starts``
    seeded random points. Moves are only accepted when they strictly lower
    the expectation, and the zero angles are always evaluated first, so the
    result never exceeds the uniform-state expectation.
    """
    if int(p) != p or p < 1:
        raise UsageError(f"p must be a positive integer, got {p}")
    f = _Objective(spectrum)
    zeros = np.zeros(2 * p)
    best_x, best_v = zeros, f(zeros)
    lattice = np.pi * np.arange(grid_points) / grid_points

    g1, b1, v1 = 0.0, 0.0, best_v
    f1 = f if p == 1 else _Objective(spectrum)
    for g in lattice:
        for b in lattice:
            v = f1(np.array([g, b]))
            if _better(v, v1):
                g1, b1, v1 = g, b, v
    spacing = np.pi / grid_points
    if p == 1:
        if _better(v1, best_v):
            best_x, best_v = np.array([g1, b1]), v1
        best_x, best_v = _coordinate_descent(f, best_x, best_v, spacing / 2)
    else:
        rng = np.random.default_rng(seed)
        starts = [zeros, np.array([g1] * p + [b1] * p)]
        starts += list(rng.uniform(0, np.pi, size=(num_starts, 2 * p)))
        for x0 in starts:
            x, v = _coordinate_descent(f, x0, f(x0), spacing / 2)
            if _better(v, best_v):
                best_x, best_v = x, v

    params = QaoaParams.from_vector(best_x)
    samples = None
    if shots:
        samples = sample_state(spectrum, evolve(spectrum, params), shots, seed)
    return QaoaResult(params, best_v, samples, tuple(f.trace))


def sample_state(spectrum: CostSpectrum, state: np.ndarray, shots: int,
                 seed: int = DEFAULT_SEED) -> SampleSet:
    """Measure ``shots`` times in the computational basis."""
    if int(shots) != shots or shots < 1:
        raise UsageError(f"shots must be a positive integer, got {shots}")
    if state.shape != (1 << spectrum.n,):
        raise DomainError(f"state has {state.shape} amplitudes, expected {1 << spectrum.n}")
    probs = np.abs(state) ** 2
    probs /= probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    recs = [Record(spectrum.assignment(b), int(spectrum.energies[b]), int(counts[b]))
            for b in np.flatnonzero(counts)]
    recs.sort(key=lambda r: (r.energy, r.assignment))
    return SampleSet(tuple(recs), int(shots), f"qaoa-statevector(n={spectrum.n})", seed)
