"""m-adic digit machinery and evaluation of the solution G.

G is the unique continuous solution of G(t) = f_i(G(mt - i)).  At an
m-adic rational t_n with digits A_1..A_n the value is the finite
composition f_{A_1} o ... o f_{A_n} applied to Fix(f_0); replacing the
seed by Fix(f_{m-1}) gives G(t_n + m^{-n}).  Both are exact up to
float roundoff, there is no truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceLimitError
from .ifs_core import (
    DeRhamSystem,
    Point,
    apply_map_array,
    endpoint_fixes,
    map_eval,
)

# grid caps: m^depth rows, depth * log2(m) <= 24 keeps tables under ~16M
GRID_CAP_BITS = 24.0


@dataclass(frozen=True)
class MadicDigits:
    """First n digits A_1..A_n of the canonical base-m expansion."""

    m: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.m < 2:
            raise DomainError("base m must be >= 2")
        object.__setattr__(self, "digits", tuple(int(a) for a in self.digits))
        for a in self.digits:
            if not 0 <= a < self.m:
                raise DomainError(f"digit {a} out of range for base {self.m}")

    def __len__(self) -> int:
        return len(self.digits)

    def value(self) -> Fraction:
        """t_n = sum A_k m^-k, exactly."""
        acc = Fraction(0)
        for k, a in enumerate(self.digits, start=1):
            acc += Fraction(a, self.m**k)
        return acc


def madic_digits(t, m: int, n: int) -> MadicDigits:
    """First n canonical digits of t in [0, 1), floor recursion.

    Fraction inputs use exact integer arithmetic; floats run the raw
    floor(m * x) recursion with no correction, so grid points given as
    exact dyadic/m-adic fractions reproduce bit-stable digit strings.
    """
    if m < 2:
        raise DomainError("base m must be >= 2")
    if n < 1:
        raise DomainError("digit count must be >= 1")
    if isinstance(t, Fraction):
        if not 0 <= t < 1:
            raise DomainError(f"t = {t} outside [0, 1)")
        digits = []
        x = t
        for _ in range(n):
            x *= m
            a = x.numerator // x.denominator
            digits.append(a)
            x -= a
        return MadicDigits(m, tuple(digits))
    x = float(t)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"t = {t!r} outside [0, 1)")
    digits = []
    for _ in range(n):
        x *= m
        a = int(x)
        digits.append(a)
        x -= a
    return MadicDigits(m, tuple(digits))


def shift(d: MadicDigits) -> MadicDigits:
    """Drop A_1: the digit string of Ht = mt mod 1."""
    if not d.digits:
        raise DomainError("cannot shift an empty digit string")
    return MadicDigits(d.m, d.digits[1:])


def successor(d: MadicDigits) -> MadicDigits | None:
    """Digits of t_n + m^-n at the same depth; None when that equals 1."""
    digits = list(d.digits)
    for k in range(len(digits) - 1, -1, -1):
        if digits[k] < d.m - 1:
            digits[k] += 1
            return MadicDigits(d.m, tuple(digits))
        digits[k] = 0
    return None


def _tail_seed(sys: DeRhamSystem, tail: str) -> Point:
    p0, p1 = endpoint_fixes(sys)
    if tail == "zero":
        return p0
    if tail == "one":
        return p1
    raise DomainError(f"tail must be 'zero' or 'one', got {tail!r}")


def eval_G_madic(sys: DeRhamSystem, d: MadicDigits, tail: str = "zero") -> Point:
    """f_{A_1} o ... o f_{A_n} applied to the tail fixed point.

    tail='zero' gives G(t_n), tail='one' gives G(t_n + m^-n).
    """
    if d.m != sys.m:
        raise DomainError(f"digit base {d.m} does not match system base {sys.m}")
    val = _tail_seed(sys, tail)
    for a in reversed(d.digits):
        val = map_eval(sys.branches[a], val)
    return val


def eval_G(sys: DeRhamSystem, t, depth: int) -> Point:
    """G at arbitrary t via digit truncation at the given depth.

    t = 1 is special-cased to Fix(f_{m-1}); canonical expansions cover
    [0, 1) only.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if t == 1:
        return endpoint_fixes(sys)[1]
    return eval_G_madic(sys, madic_digits(t, sys.m, depth), tail="zero")


def eval_G_with_bracket(sys: DeRhamSystem, t, depth: int) -> tuple[Point, float]:
    """(G(t_n), |G(t_n + m^-n) - G(t_n)|): value plus bracket diameter.

    The diameter bounds the truncation error for monotone systems and is
    an honest diagnostic otherwise.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if t == 1:
        return endpoint_fixes(sys)[1], 0.0
    d = madic_digits(t, sys.m, depth)
    lo = eval_G_madic(sys, d, tail="zero")
    hi = eval_G_madic(sys, d, tail="one")
    return lo, abs(hi - lo)


def increment_Mn(sys: DeRhamSystem, d: MadicDigits) -> float:
    """M_n(t) = |G(t_n + m^-n) - G(t_n)| for the interval holding t."""
    lo = eval_G_madic(sys, d, tail="zero")
    hi = eval_G_madic(sys, d, tail="one")
    return abs(hi - lo)


# ---------------------------------------------------------------------------
# grid tables


def _check_grid_cap(m: int, depth: int):
    if depth * math.log2(m) > GRID_CAP_BITS:
        raise ResourceLimitError(
            f"depth {depth} in base {m} exceeds the {2**int(GRID_CAP_BITS):,}-row cap"
        )


def _seed_array(sys: DeRhamSystem, tail: str, track_log: bool):
    seed = _tail_seed(sys, tail)
    if sys.space == "plane":
        return np.array([seed], dtype=complex), None
    V = np.array([float(seed)])
    if not track_log:
        return V, None
    with np.errstate(divide="ignore"):
        L = np.log2(np.abs(V))
    return V, L


def _expand_levels(sys: DeRhamSystem, V, L, levels: int):
    """Level-k array over all digit strings of length k, lexicographic.

    Entry for string w holds f_{w_1} o ... o f_{w_k}(seed); branch-major
    concatenation keeps lexicographic (= increasing t) order.
    """
    for _ in range(levels):
        parts = [apply_map_array(b, V, L) for b in sys.branches]
        V = np.concatenate([p[0] for p in parts])
        L = None if L is None else np.concatenate([p[1] for p in parts])
    return V, L


@dataclass(frozen=True)
class CurveSample:
    """G on the full m-adic grid of the given depth, plus t = 1."""

    depth: int
    t: np.ndarray
    values: np.ndarray
    space: str

    def __len__(self) -> int:
        return len(self.t)


def sample_curve(sys: DeRhamSystem, depth: int) -> CurveSample:
    """Exact G at k * m^-depth for k = 0..m^depth, increasing t."""
    if depth < 0:
        raise DomainError("depth must be >= 0")
    if depth > 0:
        _check_grid_cap(sys.m, depth)
    V, _ = _seed_array(sys, "zero", track_log=False)
    V, _ = _expand_levels(sys, V, None, depth)
    _, p1 = endpoint_fixes(sys)
    values = np.concatenate([V, np.array([p1], dtype=V.dtype)])
    t = np.arange(sys.m**depth + 1, dtype=float) / float(sys.m**depth)
    return CurveSample(depth, t, values, sys.space)


@dataclass(frozen=True)
class IncrementTable:
    """M_n over every digit string of length depth, lexicographic order."""

    m: int
    depth: int
    values: np.ndarray

    def digits_for_row(self, row: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.depth):
            row, a = divmod(row, self.m)
            out.append(a)
        return tuple(reversed(out))

    def __len__(self) -> int:
        return len(self.values)


def increment_table(sys: DeRhamSystem, depth: int) -> IncrementTable:
    """All m^depth increments M_depth via one shared pair recursion."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    _check_grid_cap(sys.m, depth)
    V0, _ = _seed_array(sys, "zero", track_log=False)
    V1, _ = _seed_array(sys, "one", track_log=False)
    V0, _ = _expand_levels(sys, V0, None, depth)
    V1, _ = _expand_levels(sys, V1, None, depth)
    return IncrementTable(sys.m, depth, np.abs(V1 - V0))
