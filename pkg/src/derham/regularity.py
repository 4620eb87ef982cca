"""Regularity exponents alpha and beta, Birkhoff traces, p-variation.

alpha and beta are the Lebesgue averages of -log_m of the largest
(resp. reciprocal of the smallest) singular value of Df_{A_1(t)} at
G(Ht).  A single zero singular value makes the corresponding estimate
+infinity; logs are never clamped, so the Cantor answer is exact.

alpha - margin > 1 certifies a zero derivative a.e., beta + margin < 1
certifies nonexistence a.e.; anything else is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .ifs_core import (
    DeRhamSystem,
    apply_map_array,
    endpoint_fixes,
    log_sigma_array,
)
from .parallel import chunked_sum, run_chunked
from .solver import (
    MadicDigits,
    _check_grid_cap,
    _expand_levels,
    _seed_array,
    shift,
)


@dataclass(frozen=True)
class RegularityEstimate:
    alpha: float
    beta: float
    method: str
    depth: int
    eval_depth: int
    samples: int
    seed: int | None = None
    stderr: float | None = None
    # |alpha(depth) - alpha(depth/2)| convergence diagnostic, when computed
    delta: float | None = None


@dataclass(frozen=True)
class ExponentTrace:
    """Rows (n, -log_m M_n / n) along one digit string."""

    m: int
    n: np.ndarray
    values: np.ndarray
    seed: int | None
    digits: tuple[int, ...]


@dataclass(frozen=True)
class VariationTable:
    """Rows (n, S_n) with S_n = sum of M_n^p over the depth-n grid."""

    p: float
    n: np.ndarray
    s: np.ndarray


@dataclass(frozen=True)
class RegularityVerdict:
    tag: str
    alpha: float
    beta: float
    margin: float


def _log_base(m: int) -> float:
    return math.log(float(m))


def _tracked_seed(sys: DeRhamSystem, pad: int):
    """Singleton (V, L) for Fix(f_0), pushed through pad extra f_0 steps.

    The pad realizes zero-extension of a shifted digit string: appended
    0 digits compose innermost, next to the fixed point.
    """
    V, L = _seed_array(sys, "zero", track_log=sys.space == "interval")
    for _ in range(pad):
        V, L = apply_map_array(sys.branches[0], V, L)
    return V, L


def integrand_at(sys: DeRhamSystem, d: MadicDigits,
                 eval_depth: int | None = None) -> tuple[float, float]:
    """(-log_m sigma_max, -log_m sigma_min) of Df_{A_1} at G(Ht).

    G(Ht) is evaluated from shift(d) truncated or zero-extended to
    eval_depth digits, tail zero.  Zero singular values surface as
    +infinity components, following the inverse-norm convention.
    """
    if d.m != sys.m:
        raise DomainError(f"digit base {d.m} does not match system base {sys.m}")
    if len(d) < 1:
        raise DomainError("need at least one digit")
    if eval_depth is None:
        eval_depth = len(d) + 20
    if eval_depth < 0:
        raise DomainError("eval_depth must be >= 0")
    tail = shift(d).digits[:eval_depth]
    V, L = _tracked_seed(sys, eval_depth - len(tail))
    for a in reversed(tail):
        V, L = apply_map_array(sys.branches[a], V, L)
    lsx, lsn = log_sigma_array(sys.branches[d.digits[0]], V, L)
    lnm = _log_base(sys.m)
    return float(-lsx[0] / lnm), float(-lsn[0] / lnm)


def alpha_beta_quadrature(sys: DeRhamSystem, depth: int,
                          eval_depth: int | None = None) -> RegularityEstimate:
    """Left-endpoint quadrature of the alpha/beta integrands.

    The integrand is constant on each depth-n m-adic cell once the
    shifted point is frozen at its truncation, so the rule is the exact
    cell average for affine-per-branch systems and is convergent under
    uniform continuity of Df otherwise.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if eval_depth is None:
        eval_depth = depth + 20
    if eval_depth < depth:
        raise DomainError("eval_depth must be >= depth")
    if depth > 1:
        _check_grid_cap(sys.m, depth - 1)
    V, L = _tracked_seed(sys, eval_depth - depth + 1)
    V, L = _expand_levels(sys, V, L, depth - 1)
    lnm = _log_base(sys.m)
    alpha_total = 0.0
    beta_total = 0.0
    for b in sys.branches:
        lsx, lsn = log_sigma_array(b, V, L)
        alpha_total += chunked_sum(-lsx / lnm)
        beta_total += chunked_sum(-lsn / lnm)
    cells = float(sys.m) ** depth
    return RegularityEstimate(
        alpha=alpha_total / cells,
        beta=beta_total / cells,
        method="quadrature",
        depth=depth,
        eval_depth=eval_depth,
        samples=sys.m**depth,
    )


def _doubling_delta(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    return abs(a - b)


def quadrature_with_margin(sys: DeRhamSystem, depth: int,
                           eval_depth: int | None = None) -> RegularityEstimate:
    """Quadrature estimate carrying the depth-halving delta as `delta`."""
    est = alpha_beta_quadrature(sys, depth, eval_depth)
    coarse = alpha_beta_quadrature(sys, max(1, depth // 2), eval_depth)
    delta = max(_doubling_delta(est.alpha, coarse.alpha),
                _doubling_delta(est.beta, coarse.beta))
    return replace(est, delta=delta)


def alpha_beta_monte_carlo(sys: DeRhamSystem, samples: int, digit_len: int,
                           eval_depth: int | None = None,
                           seed: int = 0) -> RegularityEstimate:
    """Mean integrand over i.i.d. uniform digit strings.

    Deterministic for a fixed seed: the digit matrix is drawn up front
    and chunk boundaries and reduction order never depend on the worker
    count.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if digit_len < 1:
        raise DomainError("digit_len must be >= 1")
    if eval_depth is None:
        eval_depth = digit_len + 20
    if eval_depth < digit_len:
        raise DomainError("eval_depth must be >= digit_len")
    rng = np.random.Generator(np.random.PCG64(seed))
    D = rng.integers(0, sys.m, size=(samples, digit_len))
    seed_V, seed_L = _tracked_seed(sys, eval_depth - digit_len + 1)
    lnm = _log_base(sys.m)

    def eval_chunk(s, e):
        rows = D[s:e]
        V = np.full(e - s, seed_V[0], dtype=seed_V.dtype)
        L = None if seed_L is None else np.full(e - s, seed_L[0])
        for k in range(digit_len - 1, 0, -1):
            a = rows[:, k]
            newV = np.empty_like(V)
            newL = None if L is None else np.empty_like(L)
            for idx, b in enumerate(sys.branches):
                mask = a == idx
                if not np.any(mask):
                    continue
                Vb, Lb = apply_map_array(b, V, L)
                newV[mask] = Vb[mask]
                if newL is not None:
                    newL[mask] = Lb[mask]
            V, L = newV, newL
        first = rows[:, 0]
        alpha_arr = np.empty(e - s)
        beta_arr = np.empty(e - s)
        for idx, b in enumerate(sys.branches):
            mask = first == idx
            if not np.any(mask):
                continue
            lsx, lsn = log_sigma_array(b, V, L)
            alpha_arr[mask] = -lsx[mask] / lnm
            beta_arr[mask] = -lsn[mask] / lnm
        return alpha_arr, beta_arr

    parts = run_chunked(eval_chunk, samples)
    alpha_arr = np.concatenate([p[0] for p in parts])
    beta_arr = np.concatenate([p[1] for p in parts])

    def reduce_mean(arr):
        if np.isinf(arr).any():
            return math.inf, math.inf
        lo, hi = float(arr.min()), float(arr.max())
        # constant integrand: mean is the value itself, spread exactly 0
        if lo == hi:
            return lo, 0.0
        mean = chunked_sum(arr) / samples
        if samples == 1:
            return mean, 0.0
        var = chunked_sum((arr - mean) ** 2) / (samples - 1)
        return mean, math.sqrt(var / samples)

    alpha, stderr = reduce_mean(alpha_arr)
    beta, _ = reduce_mean(beta_arr)
    return RegularityEstimate(
        alpha=alpha,
        beta=beta,
        method="monte_carlo",
        depth=digit_len,
        eval_depth=eval_depth,
        samples=samples,
        seed=seed,
        stderr=stderr,
    )


# ---------------------------------------------------------------------------
# empirical Birkhoff traces


def _trace_values(logM: np.ndarray, m: int) -> np.ndarray:
    n = np.arange(1, len(logM) + 1, dtype=float)
    with np.errstate(invalid="ignore"):
        vals = -logM / (n * _log_base(m))
    # M_n = 0 (exact or underflowed) yields +infinity rows
    return np.where(np.isneginf(logM), math.inf, vals)


def _ln_abs(x: float) -> float:
    ax = abs(x)
    return math.log(ax) if ax != 0.0 else -math.inf


def _trace_affine(sys, digits, span, per_branch):
    steps = np.array([per_branch[a] for a in range(sys.m)])[digits]
    return np.cumsum(steps) + _ln_abs(span)


def _trace_coordinate(sys, digits, p0, p1):
    lx = np.array([_ln_abs(b.params[0]) for b in sys.branches])[digits]
    ly = np.array([_ln_abs(b.params[2]) for b in sys.branches])[digits]
    cx = np.cumsum(lx) + _ln_abs(p1.real - p0.real)
    cy = np.cumsum(ly) + _ln_abs(p1.imag - p0.imag)
    with np.errstate(invalid="ignore"):
        out = 0.5 * np.logaddexp(2.0 * cx, 2.0 * cy)
    return np.where(np.isneginf(cx) & np.isneginf(cy), -math.inf, out)


def _trace_moebius(sys, digits, p0, p1):
    mats = [np.array([[b.params[0], b.params[1]],
                      [b.params[2], b.params[3]]]) for b in sys.branches]
    logdets = [_ln_abs(b.params[0] * b.params[3] - b.params[1] * b.params[2])
               for b in sys.branches]
    N = np.eye(2)
    acc_det = 0.0
    acc_scale = 0.0
    span = _ln_abs(p1 - p0)
    out = np.empty(len(digits))
    for k, a in enumerate(digits):
        N = N @ mats[a]
        s = float(np.max(np.abs(N)))
        N /= s
        acc_scale += math.log(s)
        acc_det += logdets[a]
        c, d = N[1, 0], N[1, 1]
        out[k] = (acc_det - 2.0 * acc_scale + span
                  - _ln_abs(c * p1 + d) - _ln_abs(c * p0 + d))
    return out


def _trace_generic(sys, digits):
    """All prefix increments at once: entry j accumulates maps j..0."""
    n = len(digits)
    idx = np.arange(n)
    V0, _ = _seed_array(sys, "zero", track_log=False)
    V1, _ = _seed_array(sys, "one", track_log=False)
    X0 = np.full(n, V0[0], dtype=V0.dtype)
    X1 = np.full(n, V1[0], dtype=V1.dtype)
    for k in range(n - 1, -1, -1):
        b = sys.branches[digits[k]]
        Y0, _ = apply_map_array(b, X0, None)
        Y1, _ = apply_map_array(b, X1, None)
        live = idx >= k
        X0 = np.where(live, Y0, X0)
        X1 = np.where(live, Y1, X1)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(X1 - X0))


def empirical_exponent(sys: DeRhamSystem, seed: int | None = None,
                       n_max: int | None = None,
                       digits: tuple[int, ...] | None = None) -> ExponentTrace:
    """-log_m(M_n)/n along one digit string, n = 1..n_max.

    The string is drawn uniformly from the seed unless explicit digits
    are supplied.  Theorem-style: the tail of the trace estimates alpha
    almost surely.
    """
    if (seed is None) == (digits is None):
        raise DomainError("provide exactly one of seed or digits")
    if digits is None:
        if n_max is None or n_max < 1:
            raise DomainError("n_max must be >= 1")
        rng = np.random.Generator(np.random.PCG64(seed))
        digit_arr = rng.integers(0, sys.m, size=n_max)
    else:
        digit_arr = np.asarray([int(a) for a in digits], dtype=np.int64)
        if digit_arr.size < 1:
            raise DomainError("digits must be nonempty")
        if digit_arr.min() < 0 or digit_arr.max() >= sys.m:
            raise DomainError("digit out of range")
    p0, p1 = endpoint_fixes(sys)
    kinds = {b.kind for b in sys.branches}
    if kinds == {"affine"}:
        per = [_ln_abs(b.params[0]) for b in sys.branches]
        logM = _trace_affine(sys, digit_arr, abs(p1 - p0), per)
    elif kinds == {"conjugate_affine"}:
        per = [_ln_abs(math.hypot(b.params[0], b.params[1]))
               for b in sys.branches]
        logM = _trace_affine(sys, digit_arr, abs(p1 - p0), per)
    elif kinds == {"coordinate_affine_2d"}:
        logM = _trace_coordinate(sys, digit_arr, complex(p0), complex(p1))
    elif kinds == {"moebius"}:
        logM = _trace_moebius(sys, digit_arr, p0, p1)
    else:
        logM = _trace_generic(sys, digit_arr)
    values = _trace_values(logM, sys.m)
    return ExponentTrace(sys.m, np.arange(1, len(digit_arr) + 1),
                         values, seed, tuple(int(a) for a in digit_arr))


def p_variation_table(sys: DeRhamSystem, p: float, n_max: int) -> VariationTable:
    """S_n = m^n * mean M_n^p = sum of M_n^p over the depth-n grid."""
    if p <= 0.0:
        raise DomainError("p must be > 0")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    _check_grid_cap(sys.m, n_max)
    V0, _ = _seed_array(sys, "zero", track_log=False)
    V1, _ = _seed_array(sys, "one", track_log=False)
    s = np.empty(n_max)
    for n in range(1, n_max + 1):
        V0, _ = _expand_levels(sys, V0, None, 1)
        V1, _ = _expand_levels(sys, V1, None, 1)
        s[n - 1] = float(np.sum(np.abs(V1 - V0) ** p))
    return VariationTable(float(p), np.arange(1, n_max + 1), s)


def classify(est: RegularityEstimate,
             margin: float | None = None) -> RegularityVerdict:
    """Differentiability verdict with an explicit certification margin.

    Defaults: 3 * stderr for Monte Carlo, the depth-halving delta for
    quadrature estimates that carry one.  The margin must dominate the
    numerical error or the verdict is not trustworthy.
    """
    if margin is None:
        if est.method == "monte_carlo" and est.stderr is not None:
            margin = 3.0 * est.stderr
        elif est.delta is not None:
            margin = est.delta
        else:
            raise DomainError(
                "no default margin available; pass one explicitly or use "
                "quadrature_with_margin"
            )
    if margin < 0.0:
        raise DomainError("margin must be >= 0")
    alpha, beta = est.alpha, est.beta
    zero_ae = (alpha - margin > 1.0) if not (math.isinf(alpha)
                                             and math.isinf(margin)) else False
    nondiff_ae = beta + margin < 1.0
    if zero_ae:
        tag = "derivative_zero_ae"
    elif nondiff_ae:
        tag = "nondifferentiable_ae"
    else:
        tag = "inconclusive"
    return RegularityVerdict(tag, alpha, beta, float(margin))
