"""
From an address trace to a QUBO, and back
=========================================

Walk one small trace through every stage: toggle sets, the Min-k-Union
instance, the QUBO, its exact minimum, and the row-buffer check.
"""

from pathlib import Path

import rowqubo as rq

trace = rq.read_trace(Path(__file__).parent / "data" / "toy_trace.txt")
print(f"{len(trace)} addresses of {trace.width} bits")

###############################################################################
# Each address bit becomes a set: the transitions where that bit flips.
toggles = rq.compute_toggle_sets(trace)
for j, s in enumerate(toggles.sets):
    print(f"bit {j}: flips at transitions {list(s)}")

###############################################################################
# Picking 3 row bits means picking 3 sets; the row misses are the size of
# their union.
inst = rq.from_toggle_sets(toggles, k=3)
for sel in rq.solve_exact(inst, enumerate_all=True):
    print(f"optimal row bits {sel.indices}: union {sel.union}, {sel.objective} misses")
print("greedy picks", rq.solve_greedy(inst).indices)

###############################################################################
# The QUBO has one variable per set and one per element.
model, vmap = rq.build_qubo(inst)
pen = model.penalties
print(f"{model.n} variables, {model.num_terms} terms, A=B={pen.A}, C={pen.C}, offset {model.offset}")
print(rq.export(model, vmap).splitlines()[:4], "...")

###############################################################################
# Exhaustive minimization recovers both optima with energy equal to the
# number of row misses.
lowest, minimizers = rq.solve_brute_force(model)
for a in minimizers:
    report = rq.decode(model, vmap, inst, a, backend="brute")
    misses = rq.count_row_misses(trace, report.chosen)
    print(f"energy {lowest}: rows {report.chosen}, objective {report.objective}, "
          f"row-buffer walk counts {misses}")
