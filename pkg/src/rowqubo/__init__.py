"""Min-k-Union row-bit selection for DRAM address traces, as an exact QUBO.

Pipeline: parse a trace, collect per-bit toggle sets, build the
Min-k-Union instance, compile the QUBO, then solve it by enumeration,
simulated annealing or a QAOA statevector simulation, and check the
decoded choice against a direct row-buffer walk.
"""

from .errors import (AddressOverflowError, CapacityError, DomainError, InfeasibleResult,
                     IntegrityError, ParseError, RowQuboError, TraceFormatError, UsageError)
from .minkunion import MinKUnionInstance, Selection, from_toggle_sets, solve_exact, solve_greedy
from .qaoa import CostSpectrum, QaoaParams, QaoaResult, evolve, expectation, optimize, sample_state
from .qubo import (IsingModel, Penalties, QuboModel, SolutionReport, VariableMap, build_qubo,
                   decode, energies, energy, export, import_coordinate_text, ising_energy, to_ising)
from .samplers import (DEFAULT_SEED, AnnealSchedule, Record, SampleSet, histogram, histogram_csv,
                       sample_annealing, solve_brute_force)
from .trace import (AddressTrace, RowBitSelection, ToggleSets, compute_toggle_sets,
                    count_row_misses, parse_trace, read_trace)

__version__ = "0.1.0"
