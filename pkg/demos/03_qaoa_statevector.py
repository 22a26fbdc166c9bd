"""
QAOA on 13 simulated qubits
===========================

Optimize one QAOA layer on the toy QUBO's cost spectrum and sample the
resulting state.
"""

from pathlib import Path

import numpy as np

import rowqubo as rq

trace = rq.read_trace(Path(__file__).parent / "data" / "toy_trace.txt")
inst = rq.from_toggle_sets(rq.compute_toggle_sets(trace), k=3)
model, vmap = rq.build_qubo(inst)

spectrum = rq.CostSpectrum.from_model(model)
print(f"2^{spectrum.n} energies, mean {spectrum.energies.mean()}, min {spectrum.energies.min()}")

###############################################################################
# A coarse look at the p = 1 landscape.
grid = np.linspace(0, np.pi, 9)[:-1]
for gamma in grid:
    row = [rq.expectation(spectrum, rq.evolve(spectrum, rq.QaoaParams([gamma], [beta])))
           for beta in grid]
    print(f"gamma={gamma:4.2f} " + " ".join(f"{v:6.1f}" for v in row))

###############################################################################
# Grid search plus coordinate descent.
result = rq.optimize(spectrum, p=1, seed=rq.DEFAULT_SEED, shots=1024)
print(f"angles {result.params}, expectation {result.expectation:.3f}, "
      f"{len(result.optimizer_trace)} evaluations")

###############################################################################
# Decode the shots. Selections are read off the set qubits only, so a shot
# counts as optimal even when its element qubits are inconsistent.
found = {}
for rec in result.samples.records:
    rep = rq.decode(model, vmap, inst, rec.assignment)
    if rep.exactly_k and rep.objective == 5:
        found[rep.chosen] = found.get(rep.chosen, 0) + rec.occurrences
print("optimal selections among 1024 shots:", found)
