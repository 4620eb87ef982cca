"""Branch maps with exact derivatives and system validation.

A branch map is one f_i of a de Rham system G(t) = f_i(G(mt - i)).
Interval maps act on X = [0, 1] and points are floats; plane maps act
on a subset of the plane and points are complex numbers.

Supported kinds and their parameter layout:

    affine               (a, b)                  a*x + b
    polynomial           (c0, c1, ..., cn)       sum c_k x^k, ascending
    moebius              (a, b, c, d)            (a*x + b)/(c*x + d)
    moebius_poly         (a, b, c, d, p0, ...)   moebius plus polynomial
    conjugate_affine     (cr, ci, dr, di)        c*conj(z) + d
    coordinate_affine_2d (ax, bx, ay, by)        (ax*x + bx, ay*y + by)

Vectorized evaluation carries an optional second track L = log2|value|
so compositions that underflow float64 (squaring maps drive values to
10^-10^6 and beyond) still yield usable logarithms for the regularity
integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

Point = float | complex

INTERVAL_KINDS = frozenset({"affine", "polynomial", "moebius", "moebius_poly"})
PLANE_KINDS = frozenset({"conjugate_affine", "coordinate_affine_2d"})
KINDS = INTERVAL_KINDS | PLANE_KINDS

FIX_TOL = 1e-14
FIX_CAP = 100_000

# Below this magnitude the leading-order recursion replaces direct log2
# of the computed value; above it no supported kind can underflow in one
# application (largest power used by builtin systems is 4).
_TINY = 1e-60
_DOMAIN_SLACK = 1e-9


@dataclass(frozen=True)
class Jacobian:
    """1x1 or 2x2 real derivative matrix, rows as nested tuples."""

    entries: tuple

    def __post_init__(self):
        rows = self.entries
        if len(rows) == 1 and len(rows[0]) == 1:
            return
        if len(rows) == 2 and all(len(r) == 2 for r in rows):
            return
        raise DomainError(f"Jacobian must be 1x1 or 2x2, got {rows!r}")

    @property
    def dim(self) -> int:
        return len(self.entries)


def jacobian_norms(j: Jacobian) -> tuple[float, float]:
    """(sigma_max, sigma_min) of the matrix, closed form.

    sigma_min = 0 encodes a non-invertible derivative, in which case the
    inverse operator norm is taken to be +infinity by convention.
    """
    rows = j.entries
    if j.dim == 1:
        a = abs(rows[0][0])
        return (a, a)
    (a, b), (c, d) = rows
    q1 = math.hypot(a + d, b - c)
    q2 = math.hypot(a - d, b + c)
    return ((q1 + q2) / 2.0, abs(q1 - q2) / 2.0)


def kind_space(kind: str) -> str:
    if kind in INTERVAL_KINDS:
        return "interval"
    if kind in PLANE_KINDS:
        return "plane"
    raise DomainError(f"unknown map kind {kind!r}")


_PARAM_ARITY = {
    "affine": (2, 2),
    "moebius": (4, 4),
    "conjugate_affine": (4, 4),
    "coordinate_affine_2d": (4, 4),
    "polynomial": (2, None),
    "moebius_poly": (5, None),
}


@dataclass(frozen=True)
class DifferentiableMap:
    """One branch f_i with exact evaluation and exact analytic Jacobian."""

    kind: str
    params: tuple[float, ...]
    declared_lipschitz: float | str = "weak"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown map kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        lo, hi = _PARAM_ARITY[self.kind]
        if len(self.params) < lo or (hi is not None and len(self.params) > hi):
            raise DomainError(
                f"kind {self.kind!r} takes {lo}{'' if hi == lo else '+'} params, "
                f"got {len(self.params)}"
            )
        if self.kind in ("moebius", "moebius_poly"):
            a, b, c, d = self.params[:4]
            if c == 0.0 and d == 0.0:
                raise DomainError("moebius denominator is identically zero")

    @property
    def space(self) -> str:
        return kind_space(self.kind)


def _poly_coeffs(m: DifferentiableMap) -> tuple[float, ...]:
    return m.params if m.kind == "polynomial" else m.params[4:]


def _poly_deriv(coeffs: tuple[float, ...]) -> tuple[float, ...]:
    return tuple(k * coeffs[k] for k in range(1, len(coeffs)))


def _horner(coeffs, x):
    acc = coeffs[-1] if coeffs else 0.0
    if not coeffs:
        return x * 0.0
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _lowest_nonzero(coeffs) -> int | None:
    for k, c in enumerate(coeffs):
        if c != 0.0:
            return k
    return None


def _check_interval_point(x) -> float:
    x = float(x)
    if not (-_DOMAIN_SLACK <= x <= 1.0 + _DOMAIN_SLACK):
        raise DomainError(f"point {x!r} outside X = [0, 1]")
    return x


def _check_plane_point(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"plane point {z!r} is not finite")
    return z


def map_eval(m: DifferentiableMap, x: Point) -> Point:
    """Exact formula evaluation of f(x)."""
    k = m.kind
    if k in INTERVAL_KINDS:
        x = _check_interval_point(x)
        if k == "affine":
            a, b = m.params
            return a * x + b
        if k == "polynomial":
            return _horner(m.params, x)
        a, b, c, d = m.params[:4]
        den = c * x + d
        if den == 0.0:
            raise DomainError(f"moebius pole at x = {x!r}")
        val = (a * x + b) / den
        if k == "moebius_poly":
            val += _horner(m.params[4:], x)
        return val
    z = _check_plane_point(x)
    if k == "conjugate_affine":
        cr, ci, dr, di = m.params
        return complex(cr, ci) * z.conjugate() + complex(dr, di)
    ax, bx, ay, by = m.params
    return complex(ax * z.real + bx, ay * z.imag + by)


def map_jacobian(m: DifferentiableMap, x: Point) -> Jacobian:
    """Analytic derivative of map_eval at x."""
    k = m.kind
    if k in INTERVAL_KINDS:
        x = _check_interval_point(x)
        if k == "affine":
            return Jacobian(((m.params[0],),))
        if k == "polynomial":
            return Jacobian(((_horner(_poly_deriv(m.params), x),),))
        a, b, c, d = m.params[:4]
        den = c * x + d
        if den == 0.0:
            raise DomainError(f"moebius pole at x = {x!r}")
        der = (a * d - b * c) / (den * den)
        if k == "moebius_poly":
            der += _horner(_poly_deriv(m.params[4:]), x)
        return Jacobian(((der,),))
    _check_plane_point(x)
    if k == "conjugate_affine":
        cr, ci = m.params[0], m.params[1]
        # z -> c*conj(z) is reflection then rotation-scaling by |c|
        return Jacobian(((cr, ci), (ci, -cr)))
    ax, _, ay, _ = m.params
    return Jacobian(((ax, 0.0), (0.0, ay)))


def _fixed_point_closed(m: DifferentiableMap) -> Point | None:
    k = m.kind
    if k == "affine":
        a, b = m.params
        if a == 1.0:
            return None
        return b / (1.0 - a)
    if k == "moebius" or (k == "moebius_poly" and not any(m.params[4:])):
        a, b, c, d = m.params[:4]
        if c == 0.0:
            if d == a:
                return None
            return b / (d - a)
        # f(x) = x  <=>  c x^2 + (d - a) x - b = 0
        p, q = (d - a) / c, -b / c
        disc = p * p - 4.0 * q
        if disc < 0.0:
            return None
        r = math.sqrt(disc)
        roots = ((-p - r) / 2.0, (-p + r) / 2.0)
        best = None
        for x in roots:
            if -_DOMAIN_SLACK <= x <= 1.0 + _DOMAIN_SLACK:
                resid = abs(map_eval(m, min(max(x, 0.0), 1.0)) - x)
                if best is None or resid < best[0]:
                    best = (resid, x)
        return None if best is None else min(max(best[1], 0.0), 1.0)
    if k == "conjugate_affine":
        cr, ci, dr, di = m.params
        det = 1.0 - (cr * cr + ci * ci)
        if det <= 0.0:
            return None
        # solve (I - C) z = d where C is the conj-multiply matrix
        xr = ((1.0 + cr) * dr + ci * di) / det
        xi = (ci * dr + (1.0 - cr) * di) / det
        return complex(xr, xi)
    if k == "coordinate_affine_2d":
        ax, bx, ay, by = m.params
        if ax == 1.0 or ay == 1.0:
            return None
        return complex(bx / (1.0 - ax), by / (1.0 - ay))
    return None


def fixed_point(m: DifferentiableMap, tol: float = FIX_TOL) -> Point:
    """Fixed point of a weak contraction.

    Closed forms cover the affine-family and moebius kinds; the rest run
    damped iteration x <- (x + f(x))/2 from the centroid of X.  The
    iteration cap turns a stalled (non-contracting) map into an error.
    """
    x = _fixed_point_closed(m)
    if x is not None and abs(map_eval(m, x) - x) <= tol:
        return x
    x = 0.5 if m.space == "interval" else complex(0.5, 0.5)
    for _ in range(FIX_CAP):
        fx = map_eval(m, x)
        if abs(fx - x) <= tol:
            return x
        x = 0.5 * (x + fx)
    raise ConvergenceError(
        f"fixed-point iteration for kind {m.kind!r} did not reach {tol:g} "
        f"in {FIX_CAP} steps; the map may not be weakly contracting"
    )


# ---------------------------------------------------------------------------
# vectorized evaluation with an optional log2 track


def apply_map_array(m: DifferentiableMap, V: np.ndarray, L: np.ndarray | None):
    """Apply f elementwise; carry L = log2|f| through float underflow.

    L is None for plane kinds and for callers that only need values.
    """
    k = m.kind
    if k == "affine":
        a, b = m.params
        V2 = a * V + b
        if L is None:
            return V2, None
        if a == 0.0:
            L2 = np.full_like(L, math.log2(abs(b)) if b != 0.0 else -math.inf)
        elif b == 0.0:
            L2 = L + math.log2(abs(a))
        else:
            with np.errstate(divide="ignore"):
                L2 = np.log2(np.abs(V2))
        return V2, L2
    if k == "polynomial":
        coeffs = m.params
        V2 = _horner(coeffs, V)
        if L is None:
            return V2, None
        with np.errstate(divide="ignore"):
            L2 = np.log2(np.abs(V2))
        if coeffs[0] == 0.0:
            low = _lowest_nonzero(coeffs)
            if low is not None:
                tiny = np.abs(V) < _TINY
                if np.any(tiny):
                    # f(x) ~ c_low x^low near 0
                    L2 = np.where(tiny, low * L + math.log2(abs(coeffs[low])), L2)
        return V2, L2
    if k in ("moebius", "moebius_poly"):
        a, b, c, d = m.params[:4]
        den = c * V + d
        V2 = (a * V + b) / den
        pc = m.params[4:]
        if pc:
            V2 = V2 + _horner(pc, V)
        if L is None:
            return V2, None
        with np.errstate(divide="ignore"):
            L2 = np.log2(np.abs(V2))
        f0 = b / d + (pc[0] if pc else 0.0)
        if f0 == 0.0:
            lam = (a * d - b * c) / (d * d) + (pc[1] if len(pc) > 1 else 0.0)
            if lam != 0.0:
                tiny = np.abs(V) < _TINY
                if np.any(tiny):
                    L2 = np.where(tiny, L + math.log2(abs(lam)), L2)
        return V2, L2
    if k == "conjugate_affine":
        cr, ci, dr, di = m.params
        return complex(cr, ci) * np.conj(V) + complex(dr, di), None
    ax, bx, ay, by = m.params
    return (ax * V.real + bx) + 1j * (ay * V.imag + by), None


def log_sigma_array(m: DifferentiableMap, V: np.ndarray, L: np.ndarray | None):
    """Natural logs of (sigma_max, sigma_min) of Df at each value.

    -inf entries encode zero singular values; the regularity integrands
    negate them into the paper's +infinity convention.
    """
    k = m.kind
    n = len(V)
    if k == "affine":
        a = m.params[0]
        ls = math.log(abs(a)) if a != 0.0 else -math.inf
        out = np.full(n, ls)
        return out, out
    if k == "polynomial":
        dc = _poly_deriv(m.params)
        with np.errstate(divide="ignore"):
            ls = np.log(np.abs(_horner(dc, V)))
        if dc and dc[0] == 0.0 and L is not None:
            low = _lowest_nonzero(dc)
            if low is not None:
                tiny = np.abs(V) < _TINY
                if np.any(tiny):
                    # f'(x) ~ d_low x^low near 0; log in base e from L
                    asym = (low * L) * math.log(2.0) + math.log(abs(dc[low]))
                    ls = np.where(tiny, asym, ls)
        return ls, ls
    if k in ("moebius", "moebius_poly"):
        a, b, c, d = m.params[:4]
        den = c * V + d
        der = (a * d - b * c) / (den * den)
        pc = m.params[4:]
        if pc:
            der = der + _horner(_poly_deriv(pc), V)
        with np.errstate(divide="ignore"):
            ls = np.log(np.abs(der))
        return ls, ls
    if k == "conjugate_affine":
        cr, ci = m.params[0], m.params[1]
        mod = math.hypot(cr, ci)
        ls = math.log(mod) if mod != 0.0 else -math.inf
        out = np.full(n, ls)
        return out, out
    ax, _, ay, _ = m.params
    hi, lo = max(abs(ax), abs(ay)), min(abs(ax), abs(ay))
    lmax = math.log(hi) if hi != 0.0 else -math.inf
    lmin = math.log(lo) if lo != 0.0 else -math.inf
    return np.full(n, lmax), np.full(n, lmin)


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class DeRhamSystem:
    """Base m, ordered branch list, and the ambient-space tag."""

    m: int
    branches: tuple[DifferentiableMap, ...]
    space: str = "interval"
    name: str | None = None

    def __post_init__(self):
        if self.m < 2:
            raise DomainError("base m must be >= 2")
        object.__setattr__(self, "branches", tuple(self.branches))
        if len(self.branches) != self.m:
            raise DomainError(
                f"system with m = {self.m} needs {self.m} branches, "
                f"got {len(self.branches)}"
            )
        if self.space not in ("interval", "plane"):
            raise DomainError(f"unknown space tag {self.space!r}")
        for b in self.branches:
            if b.space != self.space:
                raise DomainError(
                    f"branch kind {b.kind!r} lives on the {b.space}, "
                    f"system is tagged {self.space!r}"
                )


@lru_cache(maxsize=512)
def endpoint_fixes(sys: DeRhamSystem) -> tuple[Point, Point]:
    """(Fix(f_0), Fix(f_{m-1})) = (G(0), G(1))."""
    return fixed_point(sys.branches[0]), fixed_point(sys.branches[-1])


@dataclass(frozen=True)
class BranchCheck:
    max_norm: float
    max_lipschitz: float
    maps_into_domain: bool | None


@dataclass(frozen=True)
class ValidationReport:
    m: int
    space: str
    branches: tuple[BranchCheck, ...]
    junction_residuals: tuple[float, ...]
    passed: bool
    grid_n: int
    tol: float

    def summary(self) -> str:
        lines = [f"system m={self.m} space={self.space}: "
                 f"{'PASS' if self.passed else 'FAIL'}"]
        for i, b in enumerate(self.branches):
            inv = "n/a" if b.maps_into_domain is None else str(b.maps_into_domain)
            lines.append(
                f"  branch {i}: max|Df| = {b.max_norm:.6g}, "
                f"max Lipschitz quotient = {b.max_lipschitz:.6g}, "
                f"maps into X: {inv}"
            )
        for i, r in enumerate(self.junction_residuals):
            lines.append(f"  junction {i}|{i + 1}: residual {r:.3e}")
        return "\n".join(lines)


def _validation_grid(space: str, grid_n: int) -> np.ndarray:
    if space == "interval":
        return np.linspace(0.0, 1.0, grid_n)
    g = max(2, min(grid_n, 12))
    ax = np.linspace(0.0, 1.0, g)
    re, im = np.meshgrid(ax, ax)
    return (re + 1j * im).ravel()


def validate_system(sys: DeRhamSystem, grid_n: int = 64,
                    tol: float = 1e-9) -> ValidationReport:
    """Grid certificate for the weak-contraction and junction assumptions.

    Per branch: max operator norm of Df over the grid, max pairwise
    Lipschitz quotient, and X-invariance (interval systems only).  Per
    junction: |f_i(Fix(f_{m-1})) - f_{i+1}(Fix(f_0))|.  Failures are
    reported, never raised.
    """
    if grid_n < 2:
        raise DomainError("grid_n must be >= 2")
    grid = _validation_grid(sys.space, grid_n)
    checks = []
    for b in sys.branches:
        vals = np.array([map_eval(b, x) for x in grid])
        norms = [jacobian_norms(map_jacobian(b, x))[0] for x in grid]
        diff = np.abs(vals[:, None] - vals[None, :])
        dist = np.abs(grid[:, None] - grid[None, :])
        mask = dist > 0.0
        quot = float(np.max(diff[mask] / dist[mask]))
        if sys.space == "interval":
            into = bool(np.all((vals >= -tol) & (vals <= 1.0 + tol)))
        else:
            into = None
        checks.append(BranchCheck(float(max(norms)), quot, into))
    residuals = []
    try:
        p0, p1 = endpoint_fixes(sys)
        for i in range(sys.m - 1):
            residuals.append(abs(map_eval(sys.branches[i], p1)
                                 - map_eval(sys.branches[i + 1], p0)))
    except (ConvergenceError, DomainError):
        # endpoint fix escaped X or never settled: junctions unverifiable
        residuals = [math.inf] * (sys.m - 1)
    ok = all(r <= tol for r in residuals)
    for c in checks:
        ok = ok and c.max_norm <= 1.0 + tol and c.max_lipschitz < 1.0
        ok = ok and (c.maps_into_domain is not False)
    return ValidationReport(sys.m, sys.space, tuple(checks), tuple(residuals),
                            ok, grid_n, tol)
