"""
How many qubits does a trace need?
==================================

The QUBO has one variable per element plus one per set, so its size grows
linearly with both.
"""

import numpy as np

import rowqubo as rq
from rowqubo.cli import REFERENCE_BENCHMARKS, cmd_estimate

for name, elements, sets in REFERENCE_BENCHMARKS:
    est = cmd_estimate(elements, sets, name)
    print(f"{est.benchmark:8s} {est.elements:>8d} + {est.sets:>2d} = {est.qubits:>8d} qubits")

###############################################################################
# Random traces of growing length: the variable count follows |V| + |S|.
rng = np.random.default_rng(0)
for length in (10, 100, 1000, 10000):
    trace = rq.AddressTrace(16, rng.integers(0, 2, size=(length, 16)))
    inst = rq.from_toggle_sets(rq.compute_toggle_sets(trace), k=8)
    model, _ = rq.build_qubo(inst)
    print(f"{length:6d} accesses -> |V|={inst.num_elements:5d}, |S|={inst.num_sets}, "
          f"n={model.n}, terms={model.num_terms}")
