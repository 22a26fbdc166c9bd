"""
Annealing reads and their energy histogram
==========================================

Draw 100 simulated-annealing reads of the toy QUBO and tally energies, the
way an annealer returns a sample set.
"""

from pathlib import Path

import rowqubo as rq

trace = rq.read_trace(Path(__file__).parent / "data" / "toy_trace.txt")
inst = rq.from_toggle_sets(rq.compute_toggle_sets(trace), k=3)
model, vmap = rq.build_qubo(inst)

samples = rq.sample_annealing(model, num_reads=100, seed=rq.DEFAULT_SEED)
print(samples.backend)

###############################################################################
# One bar per energy; the count of distinct assignments shows how many
# different solutions share that energy.
for energy, occurrences, distinct in rq.histogram(samples):
    print(f"{energy:4d} | {'#' * occurrences} {occurrences} ({distinct} distinct)")

###############################################################################
# Which optimal selections were found, and how often.
for rec in samples.records:
    if rec.energy == 5:
        rep = rq.decode(model, vmap, inst, rec.assignment)
        print(f"rows {rep.chosen} seen {rec.occurrences} times")

###############################################################################
# Shorter schedules land in the optimum less often.
for sweeps in (1, 10, 100, 1000):
    s = rq.sample_annealing(model, 100, rq.AnnealSchedule(num_sweeps=sweeps), seed=1)
    print(f"{sweeps:5d} sweeps: {s.occurrences_of(5)} optimal reads")

print(rq.histogram_csv(samples), end="")
