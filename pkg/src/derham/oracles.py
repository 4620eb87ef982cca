"""Closed-form references: affine digit series, Minkowski ?, Takagi.

These are computed independently of the solver (direct series, Euclid
continued fractions, Stern-Brocot mediants) so that agreement with
eval_G is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceLimitError
from .solver import MadicDigits

_INT64_MAX = 2**63 - 1
_Q_MAX = 10**9


@dataclass(frozen=True)
class AffineDigitFamily:
    """Branch slopes and intercepts of an affine system f_i(x) = r_i x + c_i.

    c_0 = 0 and c_i = c_{i-1} + r_{i-1}, so consecutive branch images
    tile [0,1] and G is the continuous increasing limit.
    """

    m: int
    rates: tuple
    offsets: tuple

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(self.rates))
        object.__setattr__(self, "offsets", tuple(self.offsets))
        if self.m < 2:
            raise DomainError("m must be >= 2")
        if len(self.rates) != self.m or len(self.offsets) != self.m:
            raise DomainError(f"expected {self.m} rates and offsets")
        for r in self.rates:
            if not (0 <= r < 1):
                raise DomainError(f"rate {r} outside [0, 1)")
        if self.offsets[0] != 0:
            raise DomainError("offsets must start at 0")
        for i in range(1, self.m):
            if abs(self.offsets[i] - (self.offsets[i - 1] + self.rates[i - 1])) > 1e-12:
                raise DomainError("branch images do not tile [0,1]")

    @classmethod
    def from_system(cls, sys) -> "AffineDigitFamily":
        if any(b.kind != "affine" for b in sys.branches):
            raise DomainError("system is not affine in every branch")
        return cls(
            sys.m,
            tuple(b.params[0] for b in sys.branches),
            tuple(b.params[1] for b in sys.branches),
        )


def affine_digit_series(fam: AffineDigitFamily, d: MadicDigits):
    """G(t_n) = sum_k c_{A_k} prod_{j<k} r_{A_j}, evaluated Horner style.

    Exact when rates and offsets are Fractions.
    """
    if d.m != fam.m:
        raise DomainError(f"digit base {d.m} does not match family base {fam.m}")
    val = 0
    for a in reversed(d.digits):
        val = fam.offsets[a] + fam.rates[a] * val
    return val


def _continued_fraction(x: Fraction) -> list[int]:
    # proper fraction: quotients of Euclid on (q, p)
    p, q = x.numerator, x.denominator
    out = []
    while p:
        a, r = divmod(q, p)
        out.append(a)
        q, p = p, r
    return out


def minkowski_q(x) -> Fraction:
    """Minkowski's ?(x) for rational x in [0,1], exact.

    ?([0; a_1, a_2, ...]) = sum_k (-1)^{k+1} 2^{1 - (a_1+...+a_k)}.
    Floats are rejected: a binary float is almost never the rational the
    caller meant, and ? of irrationals is out of scope.
    """
    if isinstance(x, float):
        raise DomainError("pass a Fraction; irrational (float) input unsupported")
    x = Fraction(x)
    if not (0 <= x <= 1):
        raise DomainError(f"{x} outside [0, 1]")
    if x.denominator > _Q_MAX:
        raise DomainError(f"denominator exceeds {_Q_MAX}")
    total = Fraction(0)
    s = 0
    for k, a in enumerate(_continued_fraction(x)):
        s += a
        if s > 1_000_000:
            raise ResourceLimitError("partial quotients too large for exact ?")
        term = Fraction(1, 2 ** (s - 1))
        total += term if k % 2 == 0 else -term
    return total


def minkowski_q_inverse(d: MadicDigits) -> Fraction:
    """G(t_n) for the base-2 Minkowski system via Stern-Brocot mediants.

    Digit 1 descends right (mediant replaces the left fence), digit 0
    descends left; the left fence after n steps is exactly G(t_n).
    Numerators grow at most like Fibonacci numbers; exceeding 64-bit
    range (alternating strings past depth ~90) raises rather than
    returning a silently rounded value.
    """
    if d.m != 2:
        raise DomainError("Stern-Brocot walk requires base-2 digits")
    ln, ld = 0, 1
    rn, rd = 1, 1
    for a in d.digits:
        mn, md = ln + rn, ld + rd
        if mn > _INT64_MAX or md > _INT64_MAX:
            raise ResourceLimitError("mediant exceeds 64-bit range; lower the depth")
        if a == 1:
            ln, ld = mn, md
        else:
            rn, rd = mn, md
    return Fraction(ln, ld)


def takagi(x, terms: int = 60):
    """Takagi function partial sum, sum_k 2^-k dist(2^k x, Z).

    Truncation error is at most 2^-terms.  Accepts scalars or numpy
    arrays; x is expected in [0,1] (the series itself is 1-periodic).
    """
    if terms < 1:
        raise DomainError("terms must be >= 1")
    xs = np.asarray(x, dtype=float)
    total = np.zeros_like(xs)
    for k in range(terms):
        y = np.ldexp(xs, k)
        total += np.ldexp(np.abs(y - np.round(y)), -k)
    if total.ndim == 0:
        return float(total)
    return total
