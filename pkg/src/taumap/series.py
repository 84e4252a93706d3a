"""Exact truncated power series over the moment variables.

Everything downstream works in the polynomial ring

    Q[t0, t1, tbar1, t2, tbar2, ...]

with exact rational coefficients, truncated by a fixed
:class:`TruncationPolicy`.  A monomial is a power of ``t0`` times a product
of ``t_k`` / ``tbar_k`` factors; the *factor degree* of a monomial counts the
``t_k`` and ``tbar_k`` exponents (with multiplicity) and ignores ``t0``.

Design points:

* Barred and unbarred variables are independent formal symbols.  The
  conjugation relation ``tbar_k = conj(t_k)`` enters only through numeric
  :meth:`TruncatedSeries.evaluate`.
* Truncation is a hard filter.  Every arithmetic operation re-truncates the
  result to the common policy, so series stay finite and operations such as
  the exponential of a constant-free series terminate.
* The single logarithmic term of the potential (``t0^2 log t0``) is never
  represented inside the ring.  It lives in the two scalar fields of
  :class:`PotentialSeries` and is handled symbolically by consumers.

Series are immutable after construction and all operations are pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

__all__ = [
    "Monomial",
    "TruncationPolicy",
    "TruncatedSeries",
    "PotentialSeries",
    "PolicyMismatchError",
    "series_to_text",
    "series_from_text",
    "series_to_json_terms",
    "series_from_json_terms",
]


class PolicyMismatchError(ValueError):
    """Raised when combining series built under different policies."""


@dataclass(frozen=True, order=True)
class TruncationPolicy:
    """Hard truncation bounds for the series ring.

    A monomial is admissible iff every variable index is at most ``n_max``,
    its factor degree is at most ``deg_max`` and its ``t0`` exponent is at
    most ``t0_max``.  Terms outside the policy are silently dropped by all
    ring operations.
    """

    n_max: int
    deg_max: int
    t0_max: int

    def __post_init__(self) -> None:
        if self.n_max < 0 or self.deg_max < 0 or self.t0_max < 0:
            raise ValueError("policy bounds must be non-negative")

    def admits(self, m: Monomial) -> bool:
        if m.t0_power > self.t0_max or m.degree > self.deg_max:
            return False
        return all(k <= self.n_max for k, _, _ in m.factors)


@dataclass(frozen=True)
class Monomial:
    """``t0^a * prod t_k^e * prod tbar_k^e`` with canonically ordered factors.

    ``factors`` holds ``(index, barred, exponent)`` triples, strictly ordered
    by ``(barred, index)``; exponents are >= 1 and no two triples share the
    same variable.
    """

    t0_power: int = 0
    factors: tuple[tuple[int, bool, int], ...] = ()

    def __post_init__(self) -> None:
        if self.t0_power < 0:
            raise ValueError("negative t0 power")
        prev = None
        for k, barred, e in self.factors:
            if k < 1 or e < 1:
                raise ValueError(f"bad factor {(k, barred, e)}")
            key = (barred, k)
            if prev is not None and key <= prev:
                raise ValueError("factors not in canonical order")
            prev = key

    @property
    def degree(self) -> int:
        """Total factor degree (t0 not counted)."""
        return sum(e for _, _, e in self.factors)

    def weight(self, barred: bool) -> int:
        """Sum of index*exponent over one side of the alphabet."""
        return sum(k * e for k, b, e in self.factors if b == barred)

    def sort_key(self):
        return (self.degree, self.t0_power, self.factors)

    def __str__(self) -> str:
        parts = []
        if self.t0_power:
            parts.append(f"t0^{self.t0_power}")
        for k, barred, e in self.factors:
            parts.append(f"{'tbar' if barred else 't'}{k}^{e}")
        return " * ".join(parts) if parts else "1"


def _merge_factors(
    f1: tuple[tuple[int, bool, int], ...], f2: tuple[tuple[int, bool, int], ...]
) -> tuple[tuple[int, bool, int], ...]:
    """Merge two canonical factor tuples, adding exponents."""
    if not f1:
        return f2
    if not f2:
        return f1
    out = []
    i = j = 0
    while i < len(f1) and j < len(f2):
        k1, b1, e1 = f1[i]
        k2, b2, e2 = f2[j]
        key1, key2 = (b1, k1), (b2, k2)
        if key1 == key2:
            out.append((k1, b1, e1 + e2))
            i += 1
            j += 1
        elif key1 < key2:
            out.append(f1[i])
            i += 1
        else:
            out.append(f2[j])
            j += 1
    out.extend(f1[i:])
    out.extend(f2[j:])
    return tuple(out)


class TruncatedSeries:
    """Finite formal sum ``{monomial: Fraction}`` under a fixed policy."""

    __slots__ = ("policy", "_terms")

    def __init__(
        self,
        policy: TruncationPolicy,
        terms: dict[Monomial, Fraction] | None = None,
    ) -> None:
        self.policy = policy
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c and policy.admits(m):
                    clean[m] = Fraction(c)
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, policy: TruncationPolicy) -> "TruncatedSeries":
        return cls(policy)

    @classmethod
    def constant(cls, policy: TruncationPolicy, c) -> "TruncatedSeries":
        return cls(policy, {Monomial(): Fraction(c)})

    @classmethod
    def variable(
        cls, policy: TruncationPolicy, index: int, barred: bool = False
    ) -> "TruncatedSeries":
        """The series ``t_index`` (or ``tbar_index``)."""
        return cls(policy, {Monomial(0, ((index, barred, 1),)): Fraction(1)})

    @classmethod
    def t0(cls, policy: TruncationPolicy, power: int = 1) -> "TruncatedSeries":
        return cls(policy, {Monomial(power, ()): Fraction(1)})

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def sorted_items(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.policy == other.policy and self._terms == other._terms

    def __hash__(self):
        raise TypeError("TruncatedSeries is not hashable")

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c}) {m}" for m, c in self.sorted_items())

    def filter(self, keep: Callable[[Monomial], bool]) -> "TruncatedSeries":
        return TruncatedSeries(
            self.policy, {m: c for m, c in self._terms.items() if keep(m)}
        )

    def to_policy(self, policy: TruncationPolicy) -> "TruncatedSeries":
        """Re-truncate (or relax) under another policy."""
        return TruncatedSeries(policy, self._terms)

    # -- ring operations ---------------------------------------------------

    def _require_same_policy(self, other: "TruncatedSeries") -> None:
        if self.policy != other.policy:
            raise PolicyMismatchError(
                f"policy mismatch: {self.policy} vs {other.policy}"
            )

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries.constant(self.policy, other)
        self._require_same_policy(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return TruncatedSeries(self.policy, out)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.policy, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.policy, other)
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + TruncatedSeries.constant(self.policy, other)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            if not c:
                return TruncatedSeries.zero(self.policy)
            return TruncatedSeries(
                self.policy, {m: c * v for m, v in self._terms.items()}
            )
        self._require_same_policy(other)
        pol = self.policy
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            d1 = m1.degree
            a1 = m1.t0_power
            for m2, c2 in other._terms.items():
                if d1 + m2.degree > pol.deg_max:
                    continue
                a = a1 + m2.t0_power
                if a > pol.t0_max:
                    continue
                m = Monomial(a, _merge_factors(m1.factors, m2.factors))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return TruncatedSeries(self.policy, out)

    __rmul__ = __mul__

    def exp_no_constant(self) -> "TruncatedSeries":
        """``sum_m self^m / m!`` for a series with zero constant term.

        Terminates because every term of ``self`` carries at least one
        variable, so powers eventually fall outside the policy.
        """
        if self.coefficient(Monomial()):
            raise ValueError("exp requires a zero constant term")
        result = TruncatedSeries.constant(self.policy, 1)
        term = result
        m = 0
        while True:
            m += 1
            term = term * self * Fraction(1, m)
            if not term:
                return result
            result = result + term

    # -- calculus ----------------------------------------------------------

    def diff_t0(self) -> "TruncatedSeries":
        out = {}
        for m, c in self._terms.items():
            if m.t0_power:
                out[Monomial(m.t0_power - 1, m.factors)] = c * m.t0_power
        return TruncatedSeries(self.policy, out)

    def diff_t(self, k: int, barred: bool = False) -> "TruncatedSeries":
        """Formal partial derivative with respect to ``t_k`` or ``tbar_k``."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            for pos, (idx, b, e) in enumerate(m.factors):
                if idx == k and b == barred:
                    if e == 1:
                        fac = m.factors[:pos] + m.factors[pos + 1 :]
                    else:
                        fac = (
                            m.factors[:pos]
                            + ((idx, b, e - 1),)
                            + m.factors[pos + 1 :]
                        )
                    out[Monomial(m.t0_power, fac)] = c * e
                    break
        return TruncatedSeries(self.policy, out)

    def diff_tbar(self, k: int) -> "TruncatedSeries":
        return self.diff_t(k, barred=True)

    # -- numerics ----------------------------------------------------------

    def evaluate(self, moments) -> complex:
        """Numeric value at a moment vector, in complex binary64.

        ``moments`` needs attributes ``t0`` (real) and ``t`` (sequence of
        complex); ``tbar_k`` receives ``conj(t[k-1])``.  Raises
        ``IndexError`` when a series index exceeds the vector length.
        """
        t0 = moments.t0
        t = moments.t
        total = 0j
        for m, c in self._terms.items():
            v = complex(c) * t0**m.t0_power
            for k, barred, e in m.factors:
                if k > len(t):
                    raise IndexError(
                        f"series uses index {k} but only {len(t)} moments given"
                    )
                x = complex(t[k - 1])
                if barred:
                    x = x.conjugate()
                v *= x**e
            total += v
        return total


@dataclass(frozen=True)
class PotentialSeries:
    """The potential split into its logarithmic part and a regular series.

    The full potential is

        singular_log_coeff * t0^2 * log(t0)
        + singular_quad_coeff * t0^2
        + regular

    where ``regular`` is an ordinary :class:`TruncatedSeries` whose monomials
    each contain at least one unbarred and at least one barred factor.
    """

    singular_log_coeff: Fraction
    singular_quad_coeff: Fraction
    regular: TruncatedSeries

    def invariant_violations(self) -> list[str]:
        bad = []
        if self.singular_log_coeff != Fraction(1, 2):
            bad.append(f"log coefficient {self.singular_log_coeff} != 1/2")
        if self.singular_quad_coeff != Fraction(-3, 4):
            bad.append(f"quadratic coefficient {self.singular_quad_coeff} != -3/4")
        for m, _ in self.regular.items():
            has_plain = any(not b for _, b, _ in m.factors)
            has_bar = any(b for _, b, _ in m.factors)
            if not (has_plain and has_bar):
                bad.append(f"one-sided monomial {m}")
        return bad


# -- serialization ---------------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*(?P<coeff>-?\d+(?:/\d+)?)"
    r"(?P<rest>(?:\s*\*\s*(?:t0|t\d+|tbar\d+)\^\d+)*)\s*$"
)
_FACTOR_RE = re.compile(r"(t0|t(?P<k>\d+)|tbar(?P<kb>\d+))\^(?P<e>\d+)")


def series_to_text(s: TruncatedSeries) -> str:
    """Line-oriented text form ``coeff * t0^a * t{k}^e * tbar{k}^e``."""
    lines = []
    for m, c in s.sorted_items():
        parts = [str(c)]
        if m.t0_power:
            parts.append(f"t0^{m.t0_power}")
        for k, barred, e in m.factors:
            parts.append(f"{'tbar' if barred else 't'}{k}^{e}")
        lines.append(" * ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def series_from_text(text: str, policy: TruncationPolicy) -> TruncatedSeries:
    terms: dict[Monomial, Fraction] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        match = _TERM_RE.match(line)
        if not match:
            raise ValueError(f"unparseable series line: {line!r}")
        coeff = Fraction(match.group("coeff"))
        t0_power = 0
        factors = []
        for fm in _FACTOR_RE.finditer(match.group("rest")):
            e = int(fm.group("e"))
            if fm.group(1) == "t0":
                t0_power += e
            elif fm.group("k") is not None:
                factors.append((int(fm.group("k")), False, e))
            else:
                factors.append((int(fm.group("kb")), True, e))
        factors.sort(key=lambda f: (f[1], f[0]))
        mono = Monomial(t0_power, tuple(factors))
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
    return TruncatedSeries(policy, terms)


def series_to_json_terms(s: TruncatedSeries) -> list[dict]:
    """JSON form: array of ``{t0, factors, num, den}`` objects.

    ``factors`` is an array of ``[index, barred(0|1), exponent]`` triples in
    canonical order.  Integers only, so the round trip is bit exact.
    """
    return [
        {
            "t0": m.t0_power,
            "factors": [[k, int(b), e] for k, b, e in m.factors],
            "num": c.numerator,
            "den": c.denominator,
        }
        for m, c in s.sorted_items()
    ]


def series_from_json_terms(
    terms: Iterable[dict], policy: TruncationPolicy
) -> TruncatedSeries:
    out: dict[Monomial, Fraction] = {}
    for entry in terms:
        mono = Monomial(
            int(entry["t0"]),
            tuple((int(k), bool(b), int(e)) for k, b, e in entry["factors"]),
        )
        out[mono] = out.get(mono, Fraction(0)) + Fraction(
            int(entry["num"]), int(entry["den"])
        )
    return TruncatedSeries(policy, out)
