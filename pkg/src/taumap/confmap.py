"""Reconstruction of the normalized exterior map from the potential.

For a moment vector ``m`` the exterior map of the corresponding domain is

    w(z) = p z + p_0 + p_1 z^-1 + ...,   p real and positive,

and the potential determines it through second derivatives only:

    log p = -1/2 (log t0 + A),      A   = d^2F_reg/dt0^2 at m,
    w(z)  = p z exp(-sum_k B_k z^-k / k),  B_k = d^2F/dt0 dt_k at m.

The ``log t0`` summand is the symbolic contribution of the singular part of
the potential (its second ``t0`` derivative), which is why the disk
``m = (t0, 0, 0, ...)`` yields exactly ``p = t0^(-1/2)`` with a zero tail.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import exp, log, sqrt

from .series import PotentialSeries

__all__ = ["MomentVector", "ExteriorMapSeries", "map_from_potential", "evaluate_map"]


@dataclass(frozen=True)
class MomentVector:
    """Numeric harmonic moments ``(t0; t_1..t_n)``.

    ``t0`` is the interior area over pi and must be positive; barred values
    are taken as conjugates wherever a series is evaluated.
    """

    t0: float
    t: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")
        object.__setattr__(self, "t", tuple(complex(x) for x in self.t))
        if any(
            x != x or abs(x.real) == float("inf") or abs(x.imag) == float("inf")
            for x in self.t
        ):
            raise ValueError("moments must be finite")

    def padded(self, n: int) -> "MomentVector":
        """Same vector with the tail zero-padded to length ``n``."""
        if len(self.t) >= n:
            return self
        return MomentVector(self.t0, self.t + (0j,) * (n - len(self.t)))

    def to_json(self) -> dict:
        return {"t0": self.t0, "t": [[x.real, x.imag] for x in self.t]}

    @classmethod
    def from_json(cls, data: dict) -> "MomentVector":
        return cls(
            float(data["t0"]), tuple(complex(re, im) for re, im in data.get("t", []))
        )


@dataclass(frozen=True)
class ExteriorMapSeries:
    """Laurent tail ``p z + p_0 + p_1 z^-1 + ... + p_J z^-J``."""

    p: float
    tail: tuple[complex, ...]

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise ValueError("leading coefficient must be positive")

    @property
    def order(self) -> int:
        return len(self.tail) - 1

    def __call__(self, z: complex) -> complex:
        return evaluate_map(self, z)

    def to_json(self) -> dict:
        return {"p": self.p, "tail": [[x.real, x.imag] for x in self.tail]}

    @classmethod
    def from_json(cls, data: dict) -> "ExteriorMapSeries":
        return cls(
            float(data["p"]), tuple(complex(re, im) for re, im in data["tail"])
        )


def map_from_potential(
    potential: PotentialSeries, moments: MomentVector, order: int
) -> ExteriorMapSeries:
    """Exterior map coefficients ``p, p_0..p_J`` from the potential at ``m``.

    ``order`` is the truncation order ``J`` of the ``z^-1`` tail.  The
    one-point functions ``B_k`` are taken for ``k = 1..J+1`` (the ``z^-J``
    tail coefficient is fed by ``B_{J+1}``); derivatives with respect to
    indices beyond the potential's policy are identically zero series.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    n_max = potential.regular.policy.n_max
    m = moments.padded(max(n_max, order + 1))

    d0 = potential.regular.diff_t0()
    a_val = d0.diff_t0().evaluate(m)
    b: list[complex] = []
    for k in range(1, order + 2):
        if k <= n_max:
            b.append(d0.diff_t(k).evaluate(m))
        else:
            b.append(0j)

    # normalization demands p real positive; for conjugate-symmetric moments
    # A is real up to rounding, so the imaginary residue is dropped
    p = exp(-a_val.real / 2) / sqrt(m.t0)

    # h = exp(sum c_k z^-k) with c_k = -B_k / k, by the standard recurrence
    # h_n = (1/n) sum_{k<=n} k c_k h_{n-k}.
    c = [0j] + [-b[k - 1] / k for k in range(1, order + 2)]
    h = [1 + 0j]
    for n in range(1, order + 2):
        acc = 0j
        for k in range(1, n + 1):
            acc += k * c[k] * h[n - k]
        h.append(acc / n)

    tail = tuple(p * h[j + 1] for j in range(order + 1))
    return ExteriorMapSeries(p=p, tail=tail)


def evaluate_map(w: ExteriorMapSeries, z: complex) -> complex:
    """``p z + sum_j p_j z^-j`` by Horner evaluation in ``1/z``."""
    zinv = 1.0 / z
    acc = 0j
    for coeff in reversed(w.tail):
        acc = acc * zinv + coeff
    return w.p * z + acc


def conformal_radius_residual(
    potential: PotentialSeries, moments: MomentVector, w: ExteriorMapSeries
) -> float:
    """|p * t0^(1/2) * exp(A/2) - 1| for the normalization cross-check."""
    m = moments.padded(potential.regular.policy.n_max)
    a_val = potential.regular.diff_t0().diff_t0().evaluate(m)
    return abs(w.p * sqrt(m.t0) * cmath.exp(a_val / 2) - 1.0)
