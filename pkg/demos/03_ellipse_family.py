"""The two-moment family and its closed-form potential.

When only t0, t1, t2 (and conjugates) are switched on, the domain boundary
is an ellipse and the potential has the closed form

    F = -3/4 t0^2 + 1/2 t0^2 log(t0 / (1 - 4 |t2|^2))
        + t0 (|t1|^2 + t1^2 tbar2 + tbar1^2 t2) / (1 - 4 |t2|^2).

Expanding the logarithm and the geometric factor gives exact rational
coefficients for every monomial in indices <= 2, which this script compares
against the recursion, term by term.  The comparison is also the arbiter
for the one genuinely ambiguous constant in the recursion (the window
weight of the contraction step): at factor degree 7 the two candidate
weights first disagree, and only the linear one matches the closed form.
"""

from taumap import (
    WEIGHT_RULE_LINEAR,
    WEIGHT_RULE_MULTINOMIAL,
    MemoCache,
    build_potential,
    default_policy,
    ellipse_oracle_check,
    n1_coefficient,
)

potential, _ = build_potential(default_policy(n_max=2, deg_max=8))
report = ellipse_oracle_check(potential)
print(
    f"closed-form comparison at deg_max=8: {report.checked} coefficients, "
    f"{len(report.mismatches)} mismatches"
)
for mono, coeff in potential.regular.sorted_items()[:8]:
    print(f"  {str(coeff):>4}  *  {mono}")

print("\nwindow-weight arbitration at the first divergent key:")
print("  target from the closed form: coefficient 12 for lists (1,1,2,2) | (2,2,2)")
for rule in (WEIGHT_RULE_LINEAR, WEIGHT_RULE_MULTINOMIAL):
    value = n1_coefficient(6, (1, 1, 2, 2), (2, 2, 2), rule, MemoCache())
    print(f"  {rule:>11} weight: {value}")
swapped = n1_coefficient(6, (2, 2, 2), (1, 1, 2, 2), cache=MemoCache())
print(f"  swapped evaluation (variant-free path): {swapped}")
