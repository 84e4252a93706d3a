"""Constraint-level and end-to-end verification.

Three layers:

* exact residuals of the two independent hierarchy constraints the potential
  must satisfy, formed as bivariate Laurent tails in ``1/z`` and ``1/xi``
  whose coefficients are exact series (:func:`toda_residual_a`,
  :func:`toda_residual_c`; the barred twin of the first constraint reduces
  to bar-exchange symmetry of the potential, :func:`toda_residual_b`);
* exact coefficient patterns: the factorial vanishing pattern of
  coefficients against an all-ones barred side
  (:func:`factorial_pattern_check`);
* numeric gates: the sufficient convergence condition on a moment vector
  (:func:`convergence_gate`), per-degree majorants of the evaluated series
  (:func:`degree_term_sums`), and the domain -> moments -> potential -> map
  roundtrip (:func:`roundtrip`).

Residuals are only *gated* inside the reliable truncation cone: a residual
monomial at bidegree ``(a, b)`` with factor degree ``d`` is unaffected by
series truncation iff ``a + b + d <= deg_max``, because every contribution
to it comes from potential monomials of factor degree at most
``d + 2 <= deg_max`` and of index at most ``a + b + d - 1``.  Inside the
cone residuals must vanish identically in rational arithmetic; outside they
are reported but not judged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .coefficients import (
    DEFAULT_CACHE,
    DEFAULT_WEIGHT_RULE,
    MemoCache,
    NKey,
    bounded_partitions,
    n2_coefficient,
)
from .confmap import ExteriorMapSeries, MomentVector, map_from_potential
from .moments import BoundaryCurve, moments_from_curve
from .potential import BuildReport, build_potential
from .series import Monomial, PotentialSeries, TruncatedSeries, TruncationPolicy

__all__ = [
    "ResidualReport",
    "toda_residual_a",
    "toda_residual_b",
    "toda_residual_c",
    "bar_swap",
    "factorial_pattern_check",
    "FactorialPatternReport",
    "ConvergenceVerdict",
    "convergence_gate",
    "degree_term_sums",
    "RoundtripReport",
    "roundtrip",
]


# -- bivariate Laurent-tail helper -------------------------------------------


class _Bivariate:
    """Polynomial in two formal tail variables with series coefficients."""

    __slots__ = ("policy", "orders", "c")

    def __init__(self, policy: TruncationPolicy, orders: tuple[int, int]):
        self.policy = policy
        self.orders = orders
        self.c: dict[tuple[int, int], TruncatedSeries] = {}

    def set(self, bidegree: tuple[int, int], series: TruncatedSeries) -> None:
        if series:
            self.c[bidegree] = series

    @classmethod
    def one(cls, policy, orders) -> "_Bivariate":
        out = cls(policy, orders)
        out.set((0, 0), TruncatedSeries.constant(policy, 1))
        return out

    def __add__(self, other: "_Bivariate") -> "_Bivariate":
        out = _Bivariate(self.policy, self.orders)
        for key in set(self.c) | set(other.c):
            s = self.c.get(key)
            t = other.c.get(key)
            val = s + t if (s is not None and t is not None) else (s or t)
            out.set(key, val)
        return out

    def __sub__(self, other: "_Bivariate") -> "_Bivariate":
        return self + other.scaled(-1)

    def scaled(self, scalar) -> "_Bivariate":
        out = _Bivariate(self.policy, self.orders)
        for key, s in self.c.items():
            out.set(key, s * scalar)
        return out

    def shifted(self, da: int, db: int) -> "_Bivariate":
        """Multiplication by ``u^da v^db``, dropping overflow."""
        amax, bmax = self.orders
        out = _Bivariate(self.policy, self.orders)
        for (a, b), s in self.c.items():
            if a + da <= amax and b + db <= bmax:
                out.set((a + da, b + db), s)
        return out

    def __mul__(self, other: "_Bivariate") -> "_Bivariate":
        amax, bmax = self.orders
        acc: dict[tuple[int, int], TruncatedSeries] = {}
        for (a1, b1), s1 in self.c.items():
            for (a2, b2), s2 in other.c.items():
                a, b = a1 + a2, b1 + b2
                if a > amax or b > bmax:
                    continue
                prod = s1 * s2
                if not prod:
                    continue
                if (a, b) in acc:
                    acc[a, b] = acc[a, b] + prod
                else:
                    acc[a, b] = prod
        out = _Bivariate(self.policy, self.orders)
        for key, s in acc.items():
            out.set(key, s)
        return out

    def exp(self) -> "_Bivariate":
        """Exponential of a tail with no ``(0, 0)`` component."""
        if (0, 0) in self.c:
            raise ValueError("exp needs a vanishing (0,0) component")
        result = _Bivariate.one(self.policy, self.orders)
        term = result
        m = 0
        while True:
            m += 1
            term = (term * self).scaled(Fraction(1, m))
            if not term.c:
                return result
            result = result + term


# -- residual reports ---------------------------------------------------------


@dataclass
class ResidualReport:
    constraint_id: str
    orders: tuple[int, int]
    deg_max: int
    cone_violations: list[str]
    max_abs_out_of_cone: float
    bidegrees_checked: int

    @property
    def ok(self) -> bool:
        return not self.cone_violations


def _split_cone(
    residual: _Bivariate, deg_max: int, constraint_id: str
) -> ResidualReport:
    violations: list[str] = []
    out_max = 0.0
    for (a, b), series in sorted(residual.c.items()):
        for mono, coeff in series.items():
            if a + b + mono.degree <= deg_max:
                violations.append(
                    f"bidegree ({a},{b}) term {mono}: residual {coeff}"
                )
            else:
                out_max = max(out_max, abs(float(coeff)))
    return ResidualReport(
        constraint_id=constraint_id,
        orders=residual.orders,
        deg_max=deg_max,
        cone_violations=violations,
        max_abs_out_of_cone=out_max,
        bidegrees_checked=(residual.orders[0] + 1) * (residual.orders[1] + 1),
    )


def _relaxed(series: TruncatedSeries) -> TruncatedSeries:
    """Same terms under a policy whose t0 bound never bites in products."""
    pol = series.policy
    return series.to_policy(
        TruncationPolicy(pol.n_max, pol.deg_max, 10**9)
    )


def toda_residual_a(potential: PotentialSeries, order: int) -> ResidualReport:
    """Residual of the unbarred pair constraint.

    In the tail variables ``u = 1/z`` and ``v = 1/xi`` the constraint reads

        (v - u) exp(X) = v exp(-Y(u)) - u exp(-Y(v)),

    with ``X = sum u^a v^b d_a d_b F / (a b)`` and
    ``Y(u) = sum u^a d0 d_a F / a``.  Both sides are expanded to bidegree
    ``(order+1, order+1)`` and subtracted.
    """
    reg = _relaxed(potential.regular)
    policy = reg.policy
    if order > policy.n_max:
        raise ValueError("order exceeds the potential's index bound")
    amax = order + 1
    orders = (amax, amax)

    d = {k: reg.diff_t(k) for k in range(1, amax + 1)}
    d0 = reg.diff_t0()

    x = _Bivariate(policy, orders)
    for a in range(1, amax + 1):
        for b in range(1, amax + 1):
            s = d[a].diff_t(b) * Fraction(1, a * b)
            x.set((a, b), s)
    e1 = x.exp()

    def one_sided(axis: int) -> _Bivariate:
        y = _Bivariate(policy, orders)
        for a in range(1, amax + 1):
            s = d0.diff_t(a) * Fraction(-1, a)
            y.set((a, 0) if axis == 0 else (0, a), s)
        return y.exp()

    e2 = one_sided(0)
    e3 = one_sided(1)

    residual = e1.shifted(0, 1) - e1.shifted(1, 0) - e2.shifted(0, 1) + e3.shifted(1, 0)
    return _split_cone(residual, policy.deg_max, "a")


def toda_residual_c(potential: PotentialSeries, order: int) -> ResidualReport:
    """Residual of the mixed constraint.

    With ``u = 1/z`` and ``v = 1/conj(xi)``:

        1 - exp(-M) = u v t0 exp(d0^2 F_reg) exp(P(u)) exp(Q(v)),

    where ``M = sum u^a v^b d_a dbar_b F / (a b)``,
    ``P(u) = sum u^a d0 d_a F / a`` and ``Q(v) = sum v^b d0 dbar_b F / b``.
    The factor ``t0`` is the exact contribution of the singular part through
    ``exp(d0^2 (t0^2 log t0 / 2 - 3 t0^2 / 4)) = t0``.
    """
    reg = _relaxed(potential.regular)
    policy = reg.policy
    if order > policy.n_max:
        raise ValueError("order exceeds the potential's index bound")
    amax = order + 1
    orders = (amax, amax)

    d0 = reg.diff_t0()
    d00 = d0.diff_t0()

    m_tail = _Bivariate(policy, orders)
    for a in range(1, amax + 1):
        da = reg.diff_t(a)
        for b in range(1, amax + 1):
            m_tail.set((a, b), da.diff_tbar(b) * Fraction(-1, a * b))
    lhs = _Bivariate.one(policy, orders) - m_tail.exp()

    p_tail = _Bivariate(policy, orders)
    q_tail = _Bivariate(policy, orders)
    for a in range(1, amax + 1):
        p_tail.set((a, 0), d0.diff_t(a) * Fraction(1, a))
        q_tail.set((0, a), d0.diff_tbar(a) * Fraction(1, a))
    prefactor = TruncatedSeries.t0(policy) * d00.exp_no_constant()
    rhs = _Bivariate(policy, orders)
    rhs.set((1, 1), prefactor)
    rhs = rhs * p_tail.exp() * q_tail.exp()

    return _split_cone(lhs - rhs, policy.deg_max, "c")


def bar_swap(series: TruncatedSeries) -> TruncatedSeries:
    """Series with the roles of barred and unbarred variables exchanged."""
    out: dict[Monomial, Fraction] = {}
    for mono, coeff in series.items():
        swapped = tuple(
            sorted(((k, not b, e) for k, b, e in mono.factors), key=lambda f: (f[1], f[0]))
        )
        out[Monomial(mono.t0_power, swapped)] = coeff
    return TruncatedSeries(series.policy, out)


@dataclass
class BarSymmetryReport:
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def toda_residual_b(potential: PotentialSeries) -> BarSymmetryReport:
    """The barred twin of the pair constraint, via symmetry.

    Conjugating every operator in the unbarred constraint turns it into the
    barred one, so it holds iff the potential's coefficient collection is
    invariant under exchanging barred and unbarred variables.  That exchange
    invariance is checked exactly here.
    """
    reg = potential.regular
    swapped = bar_swap(reg)
    mismatches = []
    keys = {m for m, _ in reg.items()} | {m for m, _ in swapped.items()}
    for mono in sorted(keys, key=lambda m: m.sort_key()):
        a = reg.coefficient(mono)
        b = swapped.coefficient(mono)
        if a != b:
            mismatches.append(f"{mono}: {a} vs bar-swapped {b}")
    return BarSymmetryReport(mismatches=mismatches)


# -- factorial pattern --------------------------------------------------------


@dataclass
class FactorialPatternReport:
    i_max: int
    checked: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def factorial_pattern_check(
    i_max: int,
    weight_rule: str = DEFAULT_WEIGHT_RULE,
    cache: MemoCache = DEFAULT_CACHE,
) -> FactorialPatternReport:
    """Coefficients against the barred side ``(1, 1, ..., 1)``.

    For every unbarred shape of weight ``i <= i_max`` the coefficient with
    barred side ``1^i`` is ``(i-1)!`` when the shape is the single index
    ``i`` and zero otherwise.
    """
    violations = []
    checked = 0
    for i in range(1, i_max + 1):
        for shape in bounded_partitions(i, i, i):
            checked += 1
            key = NKey(shape, ((1, i),), i)
            value = n2_coefficient(key, weight_rule, cache)
            expected = Fraction(factorial(i - 1)) if shape == ((i, 1),) else Fraction(0)
            if value != expected:
                violations.append(f"shape {shape} weight {i}: {value} != {expected}")
    return FactorialPatternReport(i_max=i_max, checked=checked, violations=violations)


# -- convergence gate ---------------------------------------------------------


@dataclass
class ConvergenceVerdict:
    admissible: bool
    n: int
    bound: float
    offending: list[str] = field(default_factory=list)

    @property
    def tail_majorant_base(self) -> float:
        """Per-degree majorant base: degree-K terms sum to at most 2^-K."""
        return 0.5


def convergence_gate(m: MomentVector, n: int) -> ConvergenceVerdict:
    """Sufficient condition for convergence of the evaluated potential.

    Admissible iff ``0 < t0 < 1``, every ``|t_i|`` with ``i <= n`` is at most
    ``(4 n^3 2^n e^n)^(-1)`` and all moments beyond index ``n`` vanish.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = 1.0 / (4.0 * n**3 * 2.0**n * math.exp(n))
    offending = []
    if not (0.0 < m.t0 < 1.0):
        offending.append(f"t0 = {m.t0} outside (0, 1)")
    for idx, value in enumerate(m.t, 1):
        if idx <= n:
            if abs(value) > bound:
                offending.append(f"|t{idx}| = {abs(value)} > {bound}")
        elif value != 0:
            offending.append(f"t{idx} = {value} nonzero beyond n = {n}")
    return ConvergenceVerdict(
        admissible=not offending, n=n, bound=bound, offending=offending
    )


def degree_term_sums(
    potential: PotentialSeries, m: MomentVector
) -> dict[int, float]:
    """Sum of ``|coefficient * monomial(m)|`` per factor degree.

    For an admissible vector these sums are majorized by ``2^-K`` at degree
    ``K``, the geometric tail bound behind the convergence gate.
    """
    mm = m.padded(potential.regular.policy.n_max)
    sums: dict[int, float] = {}
    for mono, coeff in potential.regular.items():
        single = TruncatedSeries(potential.regular.policy, {mono: coeff})
        value = abs(single.evaluate(mm))
        k = mono.degree
        sums[k] = sums.get(k, 0.0) + value
    return dict(sorted(sums.items()))


# -- roundtrip ----------------------------------------------------------------


@dataclass
class RoundtripReport:
    sup_error: float
    moments: MomentVector
    gate: ConvergenceVerdict
    map_series: ExteriorMapSeries
    build: BuildReport
    warnings: list[str]

    @property
    def p(self) -> float:
        return self.map_series.p


def roundtrip(
    curve: BoundaryCurve,
    policy: TruncationPolicy,
    order: int,
    test_radius: float,
    weight_rule: str = DEFAULT_WEIGHT_RULE,
    cache: MemoCache = DEFAULT_CACHE,
    n_samples: int = 512,
) -> RoundtripReport:
    """Domain -> moments -> potential -> map, composed against the curve.

    Reports ``sup |w(z(u)) - u|`` over ``n_samples`` points of the circle
    ``|u| = test_radius``.  A failing convergence gate is a warning, not an
    error: the series may well converge beyond the sufficient condition.
    """
    if test_radius <= 1.0:
        raise ValueError("test radius must exceed 1")
    warnings: list[str] = []
    m = moments_from_curve(curve, policy.n_max)
    gate = convergence_gate(m, policy.n_max)
    if not gate.admissible:
        warnings.append(
            "moment vector misses the sufficient convergence bound: "
            + "; ".join(gate.offending)
        )
    potential, build = build_potential(policy, weight_rule, cache)
    w = map_from_potential(potential, m, order)

    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    u = test_radius * np.exp(1j * theta)
    sup_error = 0.0
    for point in u:
        point = complex(point)
        z = curve.z_of(point)
        sup_error = max(sup_error, float(abs(w(z) - point)))
    return RoundtripReport(
        sup_error=sup_error,
        moments=m,
        gate=gate,
        map_series=w,
        build=build,
        warnings=warnings,
    )
