"""argparse front end.

Exit codes: 0 success, 2 system validation failure, 1 anything else
(usage errors included, which is why ArgumentParser.error is overridden).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from .errors import DerhamError, SystemValidationError
from .ifs_core import validate_system
from .oracles import AffineDigitFamily, affine_digit_series, minkowski_q_inverse
from .perturbation import (
    convergence_study,
    get_family,
    perturbation_derivative,
    takagi_fit,
)
from .regularity import (
    alpha_beta_monte_carlo,
    classify,
    empirical_exponent,
    p_variation_table,
    quadrature_with_margin,
)
from .serialization import emit_csv, emit_svg, load_system
from .solver import MadicDigits, eval_G_madic, eval_G_with_bracket, sample_curve


class _Parser(argparse.ArgumentParser):
    # usage problems are "other errors" (exit 1); 2 is reserved for
    # systems that fail validation
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _num(x) -> str:
    return format(float(x), ".17g")


def _wrote(path):
    print(f"wrote {path}")


def _cmd_validate(args) -> int:
    system = load_system(args.spec)
    print(validate_system(system).summary())
    return 0


def _cmd_eval(args) -> int:
    system = load_system(args.spec)
    t = Fraction(args.t)
    point, width = eval_G_with_bracket(system, t, args.depth)
    if system.space == "plane":
        print(f"g_re={_num(point.real)}")
        print(f"g_im={_num(point.imag)}")
    else:
        print(f"g={_num(point)}")
    print(f"bracket={_num(width)}")
    return 0


def _cmd_sample(args) -> int:
    system = load_system(args.spec)
    sample = sample_curve(system, args.depth)
    emit_csv(sample, args.out)
    _wrote(args.out)
    if args.svg:
        emit_svg(sample, args.svg)
        _wrote(args.svg)
    if args.png:
        from . import figures

        figures.save_curve_png(sample, args.png)
        _wrote(args.png)
    return 0


def _cmd_regularity(args) -> int:
    system = load_system(args.spec)
    if args.method == "quad":
        est = quadrature_with_margin(system, args.depth, args.eval_depth)
    else:
        est = alpha_beta_monte_carlo(system, args.samples, args.depth,
                                     args.eval_depth, seed=args.seed)
    verdict = classify(est, args.margin)
    print(f"method={est.method}")
    print(f"alpha={_num(est.alpha)}")
    print(f"beta={_num(est.beta)}")
    print(f"samples={est.samples}")
    if est.stderr is not None:
        print(f"stderr={_num(est.stderr)}")
    if est.delta is not None:
        print(f"delta={_num(est.delta)}")
    print(f"verdict={verdict.tag}")
    print(f"margin={_num(verdict.margin)}")
    return 0


def _cmd_variation(args) -> int:
    system = load_system(args.spec)
    table = p_variation_table(system, args.p, args.nmax)
    if args.out:
        emit_csv(table, args.out)
        _wrote(args.out)
    else:
        emit_csv(table, sys.stdout)
    if args.png:
        from . import figures

        figures.save_variation_png(table, args.png)
        _wrote(args.png)
    return 0


def _cmd_exponent(args) -> int:
    system = load_system(args.spec)
    trace = empirical_exponent(system, seed=args.seed, n_max=args.nmax)
    if args.out:
        emit_csv(trace, args.out)
        _wrote(args.out)
    else:
        emit_csv(trace, sys.stdout)
    if args.png:
        from . import figures

        figures.save_trace_png(trace, args.png)
        _wrote(args.png)
    return 0


def _cmd_compare(args) -> int:
    system = load_system(args.spec)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    fam = None
    if args.oracle != "minkowski":
        fam = AffineDigitFamily.from_system(system)
    worst = 0.0
    for _ in range(args.points):
        n = int(rng.integers(1, args.max_len + 1))
        d = MadicDigits(system.m, tuple(
            int(a) for a in rng.integers(0, system.m, size=n)))
        g = eval_G_madic(system, d)
        if fam is None:
            ref = float(minkowski_q_inverse(d))
        else:
            ref = float(affine_digit_series(fam, d))
        worst = max(worst, abs(g - ref))
    print(f"points={args.points}")
    print(f"max_abs_error={_num(worst)}")
    return 0


def _parse_eps_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DerhamError(f"bad --eps-list {text!r}") from None


def _cmd_perturb(args) -> int:
    fam = get_family(args.family)
    if args.takagi:
        sample = perturbation_derivative(fam, args.depth, args.eps)
        fit = takagi_fit(sample)
        print(f"c={_num(fit.c)}")
        print(f"max_residual={_num(fit.max_residual)}")
        print(f"amplitude={_num(fit.amplitude)}")
        if args.out:
            emit_csv(sample, args.out)
            _wrote(args.out)
        if args.png:
            from . import figures

            figures.save_curve_png(sample, args.png)
            _wrote(args.png)
        return 0
    if not args.eps_list:
        raise DerhamError("--eps-list is required unless --takagi is given")
    table = convergence_study(fam, _parse_eps_list(args.eps_list),
                              depth=args.depth, reg_depth=args.reg_depth)
    if args.out:
        emit_csv(table, args.out)
        _wrote(args.out)
    else:
        emit_csv(table, sys.stdout)
    print(f"liminf_ok={table.liminf_ok}", file=sys.stderr)
    print(f"monotone_ok={table.monotone_ok}", file=sys.stderr)
    if table.closed_form_dev is not None:
        print(f"closed_form_dev={_num(table.closed_form_dev)}", file=sys.stderr)
    if args.png:
        from . import figures

        figures.save_study_png(table, args.png)
        _wrote(args.png)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="derham",
                     description="de Rham curves: evaluation, regularity, "
                                 "perturbation studies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a system spec")
    p.add_argument("spec")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("eval", help="evaluate G at a rational point")
    p.add_argument("spec")
    p.add_argument("--t", required=True, help="rational in [0,1], e.g. 3/4")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sample", help="sample the curve on the depth grid")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.add_argument("--png")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("regularity", help="estimate alpha and beta")
    p.add_argument("spec")
    p.add_argument("--method", choices=("quad", "mc"), required=True)
    p.add_argument("--depth", type=int, required=True,
                   help="quadrature depth, or digit length for mc")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eval-depth", type=int, default=None)
    p.add_argument("--margin", type=float, default=None)
    p.set_defaults(func=_cmd_regularity)

    p = sub.add_parser("variation", help="p-variation sums S_n")
    p.add_argument("spec")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--png")
    p.set_defaults(func=_cmd_variation)

    p = sub.add_parser("exponent", help="empirical exponent trace")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--png")
    p.set_defaults(func=_cmd_exponent)

    p = sub.add_parser("compare", help="check G against a closed-form oracle")
    p.add_argument("spec")
    p.add_argument("--oracle", required=True,
                   choices=("cantor", "bernoulli", "okamoto", "minkowski"))
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=20)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("perturb", help="family convergence study")
    p.add_argument("--family", required=True)
    p.add_argument("--eps-list", help="comma separated, decreasing")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--reg-depth", type=int, default=12)
    p.add_argument("--takagi", action="store_true",
                   help="fit the centered eps-derivative against Takagi")
    p.add_argument("--eps", type=float, default=1e-4,
                   help="step for --takagi mode")
    p.add_argument("--out")
    p.add_argument("--png")
    p.set_defaults(func=_cmd_perturb)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemValidationError as exc:
        print(exc.report.summary(), file=sys.stderr)
        print("validation failed", file=sys.stderr)
        return 2
    except DerhamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
