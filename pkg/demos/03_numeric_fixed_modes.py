"""Fixed modes of a numeric system: the pencil test versus brute force.

A three-state chain where channel 1 touches only the last state and channel 2
only the first: whatever gains are applied, the closed loop stays lower
triangular, so the middle eigenvalue 2 cannot move.  The bordered-pencil test
finds it (with its witness subset), and intersecting closed-loop spectra over
a thousand random gains confirms it.
"""

import numpy as np

from sfspectrum import NumericSystem, fixed_spectrum, random_feedback_oracle

system = NumericSystem.build(
    A=[[1, 0, 0], [1, 2, 0], [0, 1, 3]],
    B_blocks=[[[0], [0], [1]], [[1], [0], [0]]],
    C_blocks=[[[0, 0, 1]], [[1, 0, 0]]],
)

result = fixed_spectrum(system)
for fe in result.fixed_eigenvalues:
    print(f"fixed eigenvalue {fe.value:.6g} witnessed by channel subsets "
          f"{[str(w) for w in fe.witnesses]}")

oracle = random_feedback_oracle(system, samples=1000, seed=7)
print("surviving eigenvalues after 1000 random decentralized gains:", oracle)

# why it is fixed: the closed loop is always lower triangular
f1, f2 = 0.83, -1.91
A = system.A_array()
B = system.B_array()
C = system.C_array()
closed = A + f1 * (B[:, :1] @ C[:1]) + f2 * (B[:, 1:] @ C[1:])
print("closed loop at (f1, f2) = (0.83, -1.91):")
print(np.round(closed, 3))
print("its eigenvalues:", np.round(np.linalg.eigvals(closed), 6))
