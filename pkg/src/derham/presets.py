"""Builtin system constructors, keyed by the short names the CLI accepts.

Each builder validates its arguments against the range where the
branches stay weak contractions, then returns a named DeRhamSystem.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .ifs_core import DeRhamSystem, DifferentiableMap


def _fmt(args) -> str:
    return ",".join(format(float(a), "g") for a in args)


def _named(name, args, m, branches, space="interval") -> DeRhamSystem:
    label = f"{name}({_fmt(args)})" if args else name
    return DeRhamSystem(m=m, branches=tuple(branches), space=space, name=label)


def cantor() -> DeRhamSystem:
    """x/2, 1/2, (x+1)/2: the Cantor function, alpha = +infinity."""
    return _named("cantor", (), 3, [
        DifferentiableMap("affine", (0.5, 0.0)),
        DifferentiableMap("affine", (0.0, 0.5)),
        DifferentiableMap("affine", (0.5, 0.5)),
    ])


def bernoulli(*a: float) -> DeRhamSystem:
    """f_i(x) = a_i x + sum_{j<i} a_j; G is the Bernoulli distribution function."""
    if len(a) < 2:
        raise DomainError("bernoulli needs at least two weights")
    for w in a:
        if not (0.0 < w < 1.0):
            raise DomainError(f"weight {w} outside (0, 1)")
    if abs(sum(a) - 1.0) > 1e-9:
        raise DomainError("weights must sum to 1")
    branches = []
    offset = 0.0
    for w in a:
        branches.append(DifferentiableMap("affine", (float(w), offset)))
        offset += float(w)
    return _named("bernoulli", a, len(a), branches)


def okamoto(a: float, b: float) -> DeRhamSystem:
    """ax, a+(b-a)x, (1-b)x+b: Okamoto's function family."""
    if not (0.0 < a < b < 1.0):
        raise DomainError("okamoto requires 0 < a < b < 1")
    return _named("okamoto", (a, b), 3, [
        DifferentiableMap("affine", (float(a), 0.0)),
        DifferentiableMap("affine", (float(b) - float(a), float(a))),
        DifferentiableMap("affine", (1.0 - float(b), float(b))),
    ])


def _minkowski_maps(eps: float = 0.0):
    # x/(1+x) - eps*x(1-x) and 1/(2-x) + eps*x^2(1-x); junction is 1/2 exactly
    if eps == 0.0:
        return [
            DifferentiableMap("moebius", (1.0, 0.0, 1.0, 1.0)),
            DifferentiableMap("moebius", (0.0, 1.0, -1.0, 2.0)),
        ]
    return [
        DifferentiableMap("moebius_poly", (1.0, 0.0, 1.0, 1.0, 0.0, -eps, eps)),
        DifferentiableMap("moebius_poly", (0.0, 1.0, -1.0, 2.0, 0.0, 0.0, eps, -eps)),
    ]


def minkowski_inverse() -> DeRhamSystem:
    """x/(x+1), 1/(2-x): G is the inverse of Minkowski's question mark."""
    return _named("minkowski_inverse", (), 2, _minkowski_maps())


def derham(eta_re: float, eta_im: float) -> DeRhamSystem:
    """Cesaro curves f_0(z) = eta conj(z), f_1(z) = (1-eta) conj(z) + eta."""
    eta = complex(eta_re, eta_im)
    if not (0.0 < abs(eta) < 1.0 and abs(1.0 - eta) < 1.0):
        raise DomainError("derham requires 0 < |eta| < 1 and |1 - eta| < 1")
    return _named("derham", (eta_re, eta_im), 2, [
        DifferentiableMap("conjugate_affine", (eta.real, eta.imag, 0.0, 0.0)),
        DifferentiableMap("conjugate_affine",
                          (1.0 - eta.real, -eta.imag, eta.real, eta.imag)),
    ], space="plane")


def example_2_2_i() -> DeRhamSystem:
    """x^2/2, (x+1)/2: smooth branches with alpha = +infinity."""
    return _named("example_2_2_i", (), 2, [
        DifferentiableMap("polynomial", (0.0, 0.0, 0.5)),
        DifferentiableMap("affine", (0.5, 0.5)),
    ])


def example_2_2_ii() -> DeRhamSystem:
    """x^3/4 + x/12, (2x+1)/3."""
    return _named("example_2_2_ii", (), 2, [
        DifferentiableMap("polynomial", (0.0, 1.0 / 12.0, 0.0, 0.25)),
        DifferentiableMap("affine", (2.0 / 3.0, 1.0 / 3.0)),
    ])


def remark_2_5() -> DeRhamSystem:
    """Planar pair x/2 + iy/3 and (x+1)/2: alpha = 1, beta = +infinity."""
    return _named("remark_2_5", (), 2, [
        DifferentiableMap("coordinate_affine_2d", (0.5, 0.0, 1.0 / 3.0, 0.0)),
        DifferentiableMap("coordinate_affine_2d", (0.5, 0.5, 0.0, 0.0)),
    ], space="plane")


def hata_yamaguti(eps: float) -> DeRhamSystem:
    """(1/2+eps)x, (1/2-eps)x + 1/2 + eps; d/d_eps at 0 is the Takagi function."""
    if not abs(eps) < 0.5:
        raise DomainError("hata_yamaguti requires |eps| < 1/2")
    return _named("hata_yamaguti", (eps,), 2, [
        DifferentiableMap("affine", (0.5 + eps, 0.0)),
        DifferentiableMap("affine", (0.5 - eps, 0.5 + eps)),
    ])


_EPS_MAX = 0.1


def _check_small_eps(eps: float):
    if not (0.0 <= eps <= _EPS_MAX):
        raise DomainError(f"eps must lie in [0, {_EPS_MAX}]")


def example_2_8_i(eps: float) -> DeRhamSystem:
    """x^2/2 - eps x^4 with the affine branch ((1+2eps)x + (1-2eps))/2.

    The affine branch keeps Fix(f_1) = 1 and the junction value equal to
    f_0(1) = 1/2 - eps, so continuity holds for every eps.
    """
    _check_small_eps(eps)
    if eps == 0.0:
        f0 = DifferentiableMap("polynomial", (0.0, 0.0, 0.5))
    else:
        f0 = DifferentiableMap("polynomial", (0.0, 0.0, 0.5, 0.0, -eps))
    return _named("example_2_8_i", (eps,), 2, [
        f0,
        DifferentiableMap("affine", (0.5 + eps, 0.5 - eps)),
    ])


def example_2_8_ii(eps: float) -> DeRhamSystem:
    """Perturbed Minkowski pair; eps = 0 gives the pure Moebius system."""
    _check_small_eps(eps)
    return _named("example_2_8_ii", (eps,), 2, _minkowski_maps(eps))


PRESETS = {
    "cantor": cantor,
    "bernoulli": bernoulli,
    "okamoto": okamoto,
    "minkowski_inverse": minkowski_inverse,
    "derham": derham,
    "example_2_2_i": example_2_2_i,
    "example_2_2_ii": example_2_2_ii,
    "remark_2_5": remark_2_5,
    "hata_yamaguti": hata_yamaguti,
    "example_2_8_i": example_2_8_i,
    "example_2_8_ii": example_2_8_ii,
}


def build_preset(name: str, args: tuple = ()) -> DeRhamSystem:
    try:
        builder = PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise DomainError(f"unknown preset {name!r}; expected one of {known}") from None
    try:
        return builder(*args)
    except TypeError as exc:
        raise DomainError(f"bad arguments for preset {name!r}: {exc}") from None


def closed_form_alpha(sys: DeRhamSystem) -> float | None:
    """Exact alpha for systems where it is known in closed form.

    Affine branches: alpha = -(1/m) sum_i log_m r_i (+infinity when any
    slope is 0).  Cesaro pair: -log_2|eta(1-eta)| / 2.
    """
    lnm = math.log(sys.m)
    if all(b.kind == "affine" for b in sys.branches):
        total = 0.0
        for b in sys.branches:
            r = abs(b.params[0])
            if r == 0.0:
                return math.inf
            total += -math.log(r) / lnm
        return total / sys.m
    if all(b.kind == "conjugate_affine" for b in sys.branches):
        total = 0.0
        for b in sys.branches:
            r = math.hypot(b.params[0], b.params[1])
            if r == 0.0:
                return math.inf
            total += -math.log(r) / lnm
        return total / sys.m
    return None
