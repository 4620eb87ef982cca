"""Parametrized system families: continuity of G and alpha in the parameter.

A family maps eps in a declared interval around 0 to a valid system.
convergence_study tracks sup|G_eps - G_0| and the quadrature exponents
as eps decreases; perturbation_derivative takes the centered difference
quotient of G_eps in the parameter, whose eps -> 0 limit for the
half-slope family is (a multiple of) the Takagi function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import presets
from .errors import DomainError
from .ifs_core import DeRhamSystem
from .oracles import takagi
from .regularity import alpha_beta_quadrature
from .solver import CurveSample, sample_curve


@dataclass(frozen=True)
class SystemFamily:
    name: str
    generator: Callable[[float], DeRhamSystem]
    eps_domain: tuple[float, float]
    # True when sup_x ||Df_i(x)^{-1}|| < inf across the family, the
    # hypothesis under which alpha_eps -> alpha_0 (not just liminf >=)
    bounded_inverse: bool

    def system(self, eps: float) -> DeRhamSystem:
        lo, hi = self.eps_domain
        if not (lo <= eps <= hi):
            raise DomainError(
                f"eps={eps} outside [{lo}, {hi}] for family {self.name!r}")
        return self.generator(eps)


FAMILIES = {
    "bernoulli": SystemFamily(
        "bernoulli", lambda e: presets.bernoulli(0.5 + e, 0.5 - e),
        (-0.45, 0.45), True),
    "okamoto": SystemFamily(
        "okamoto", lambda e: presets.okamoto(0.2 + e, 0.6),
        (-0.15, 0.15), True),
    "hata_yamaguti": SystemFamily(
        "hata_yamaguti", presets.hata_yamaguti, (-0.45, 0.45), True),
    # f_0 derivative vanishes at the origin for every eps, so only the
    # liminf half of the continuity statement applies
    "example_2_8_i": SystemFamily(
        "example_2_8_i", presets.example_2_8_i, (0.0, 0.1), False),
    "example_2_8_ii": SystemFamily(
        "example_2_8_ii", presets.example_2_8_ii, (0.0, 0.1), True),
}


def get_family(name: str) -> SystemFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        known = ", ".join(sorted(FAMILIES))
        raise DomainError(f"unknown family {name!r}; expected one of {known}") from None


def sup_distance(a: DeRhamSystem, b: DeRhamSystem, depth: int) -> float:
    """max_t |G_a(t) - G_b(t)| over the depth grid (exact grid values)."""
    if a.m != b.m or a.space != b.space:
        raise DomainError("systems differ in base or space")
    sa = sample_curve(a, depth)
    sb = sample_curve(b, depth)
    return float(np.max(np.abs(sa.values - sb.values)))


@dataclass(frozen=True)
class StudyTable:
    family: str
    eps: tuple[float, ...]
    sup_dist: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    alpha0: float
    beta0: float
    # alpha_eps >= alpha_0 - tol at every listed eps
    liminf_ok: bool
    # |alpha_eps - alpha_0| nonincreasing; None when the family does not
    # declare bounded inverse derivatives
    monotone_ok: bool | None
    # worst |alpha_eps - closed form|, None without an analytic alpha
    closed_form_dev: float | None


def convergence_study(fam: SystemFamily, eps_list, depth: int = 12,
                      reg_depth: int = 12) -> StudyTable:
    eps = [float(e) for e in eps_list]
    if not eps:
        raise DomainError("eps_list is empty")
    if any(e <= 0.0 for e in eps):
        raise DomainError("eps values must be positive")
    if any(eps[i] <= eps[i + 1] for i in range(len(eps) - 1)):
        raise DomainError("eps_list must be strictly decreasing toward 0")
    base = fam.system(0.0)
    est0 = alpha_beta_quadrature(base, reg_depth)
    dists, alphas, betas = [], [], []
    for e in eps:
        sys_e = fam.system(e)
        dists.append(sup_distance(sys_e, base, depth))
        est = alpha_beta_quadrature(sys_e, reg_depth)
        alphas.append(est.alpha)
        betas.append(est.beta)
    tol = 1e-9 * max(1.0, abs(est0.alpha)) if math.isfinite(est0.alpha) else 0.0
    liminf_ok = all(a >= est0.alpha - tol for a in alphas)
    monotone_ok = None
    if fam.bounded_inverse:
        gaps = [abs(a - est0.alpha) for a in alphas]
        monotone_ok = all(gaps[i + 1] <= gaps[i] + 1e-12
                          for i in range(len(gaps) - 1))
    closed_form_dev = None
    if presets.closed_form_alpha(base) is not None:
        devs = [abs(est0.alpha - presets.closed_form_alpha(base))]
        for e, a in zip(eps, alphas):
            devs.append(abs(a - presets.closed_form_alpha(fam.system(e))))
        closed_form_dev = max(devs)
    return StudyTable(
        family=fam.name,
        eps=tuple(eps),
        sup_dist=np.asarray(dists),
        alpha=np.asarray(alphas),
        beta=np.asarray(betas),
        alpha0=est0.alpha,
        beta0=est0.beta,
        liminf_ok=liminf_ok,
        monotone_ok=monotone_ok,
        closed_form_dev=closed_form_dev,
    )


def perturbation_derivative(fam: SystemFamily, depth: int,
                            eps: float) -> CurveSample:
    """Centered difference (G_{+eps} - G_{-eps}) / (2 eps) on the depth grid.

    Needs -eps inside the family domain, so it applies to the two-sided
    families (the half-slope pair, Bernoulli, Okamoto), not 2.8(i)/(ii).
    """
    if eps <= 0.0:
        raise DomainError("eps must be > 0")
    plus = sample_curve(fam.system(eps), depth)
    minus = sample_curve(fam.system(-eps), depth)
    vals = (plus.values - minus.values) / (2.0 * eps)
    return CurveSample(depth=depth, t=plus.t, values=vals,
                       space=fam.system(eps).space)


@dataclass(frozen=True)
class TakagiFit:
    c: float
    max_residual: float
    amplitude: float


def takagi_fit(sample: CurveSample, terms: int = 60) -> TakagiFit:
    """Least-squares scale of sample.values against the Takagi partial sum.

    Returns the fitted c, the worst pointwise residual, and max|c*T| so
    callers can judge the residual relative to the signal size.
    """
    T = takagi(sample.t, terms)
    denom = float(np.sum(T * T))
    if denom == 0.0:
        raise DomainError("grid has no interior points; increase depth")
    c = float(np.sum(np.real(sample.values) * T)) / denom
    fitted = c * T
    return TakagiFit(
        c=c,
        max_residual=float(np.max(np.abs(sample.values - fitted))),
        amplitude=float(np.max(np.abs(fitted))),
    )
