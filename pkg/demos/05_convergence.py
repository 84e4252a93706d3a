"""The sufficient convergence condition and what it buys.

A moment vector passes the gate when 0 < t0 < 1, moments beyond index n
vanish and every |t_i| stays below (4 n^3 2^n e^n)^(-1).  Inside that box
the evaluated potential series is dominated degree by degree: the terms of
factor degree K sum to at most 2^-K in absolute value, which this script
verifies empirically on an admissible vector.
"""

import math

from taumap import (
    MomentVector,
    build_potential,
    convergence_gate,
    default_policy,
    degree_term_sums,
)

n = 2
bound = 1.0 / (4 * n**3 * 2**n * math.exp(n))
print(f"n = {n}: sufficient bound on |t_i| is {bound:.3e}\n")

fixtures = {
    "small disk": MomentVector(t0=0.5, t=(0.0, 0.0)),
    "boundary case": MomentVector(t0=0.5, t=(0.0, bound)),
    "t0 too large": MomentVector(t0=1.5, t=(0.0, 0.0)),
    "moment too large": MomentVector(t0=0.5, t=(0.0, 2 * bound)),
    "tail not cut": MomentVector(t0=0.5, t=(0.0, bound, bound)),
}
for name, m in fixtures.items():
    verdict = convergence_gate(m, n)
    status = "admissible" if verdict.admissible else "rejected"
    reasons = f"  [{'; '.join(verdict.offending)}]" if verdict.offending else ""
    print(f"  {name:>17}: {status}{reasons}")

print("\nper-degree sums of |terms| against the geometric majorant 2^-K:")
potential, _ = build_potential(default_policy(2, 8))
admissible = MomentVector(t0=0.5, t=(bound, 0.9 * bound))
for degree, total in degree_term_sums(potential, admissible).items():
    print(f"  K = {degree}: sum = {total:.3e}  <=  2^-K = {2.0 ** -degree:.3e}")
