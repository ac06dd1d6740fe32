"""Cross-validating the three decision routes on a random ensemble.

Random binary linearly parameterized systems are generated by placing each
parameter on a 0/1 rectangle inside [A B; C 0]; the three routes then decide
each instance independently.  Any disagreement would expose a bug in one of
them, which is the point of running this regularly.
"""

import time

from sfspectrum import (
    build_graph,
    closed_loop_generic_rank,
    decide_graphical,
    decide_linear,
    decide_polynomial,
    enumerate_cycle_subgraphs,
    similarity_classes,
)
from sfspectrum.ensembles import random_binary_system

COUNT = 100

start = time.time()
with_sfs = 0
disagreements = []
rank_balance_mismatch = []
for i in range(COUNT):
    system = random_binary_system(seed=i)
    v1 = decide_polynomial(system, trials=10, seed=1000 + i)
    v2 = decide_linear(system, trials=10, seed=2000 + i)
    v3 = decide_graphical(system)
    with_sfs += v1.has_sfs
    if not (v1.has_sfs == v2.has_sfs == v3.has_sfs):
        disagreements.append(i)
    deficient = closed_loop_generic_rank(system, seed=3000 + i) < system.n
    classes = similarity_classes(enumerate_cycle_subgraphs(build_graph(system)))
    if deficient != all(c.balanced for c in classes):
        rank_balance_mismatch.append(i)

elapsed = time.time() - start
print(f"{COUNT} random binary systems in {elapsed:.1f}s")
print(f"  with a structurally fixed spectrum: {with_sfs}")
print(f"  decision-route disagreements: {len(disagreements)} {disagreements}")
print(f"  rank/balance mismatches: {len(rank_balance_mismatch)} {rank_balance_mismatch}")
