"""Command-line interface: validate parameters, normal-order words, and
run the verification checks with deterministic JSON reports.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage or
configuration error, 3 a size or length cap was exceeded.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapError,
    CommFactorError,
    DimensionError,
    QDomainError,
    QuonWeylError,
    SizeCapError,
    ThetaError,
    TruncationError,
    WordSyntaxError,
)
from .fock import (
    FockSpace,
    check_theorem_a,
    matrix_to_json,
    operator_matrix,
    parse_state,
    format_state,
)
from .gram import check_bozejko_speicher, gram_matrix
from .params import QuonParams, params_from_dict, params_to_dict
from .rewrite import (
    Generator,
    format_polynomial,
    normal_order,
    parse_word,
    polynomial_to_json,
)
from .tensorops import (
    DEFAULT_SIZE_CAP,
    E,
    braid_op,
    braiding,
    check_consistency,
    cross_op,
    encode_index,
    insertion_sum,
    partial_dual,
    quadratic_kernel,
)

CHECK_ORDER = (
    "consistency",
    "hexagon",
    "theorem_a",
    "gram",
    "bozejko_speicher",
    "kernel",
    "confluence",
)

NOTE_THETA = (
    "theta form: exchange phases are b_ij = exp(2*pi*1j*theta_ij/order); "
    "the imaginary unit in the exponent is this tool's convention and makes "
    "every phase unimodular with b_ij*b_ji = 1"
)
NOTE_PHASES = (
    "occupation phases carry occupancy exponents: creating mode i multiplies "
    "by prod_{k<i} b_ik**n_k, annihilating by prod_{k<i} b_ki**n_k together "
    "with the deformed number [n_i]; both laws are derived from the "
    "normal-ordering engine rather than postulated"
)
NOTE_PROJECTOR = (
    "degree-n metric operators use the recursive product form "
    "P_n = (id (x) P_{n-1}) . R_n with P_1 = id, pinned by the single-mode "
    "q-factorial norms"
)


@dataclass
class RunConfig:
    params_source: str
    truncation: int = 6
    size_cap: int = DEFAULT_SIZE_CAP
    tolerances: dict = field(
        default_factory=lambda: {
            "consistency": 1e-10,
            "positivity": 1e-10,
            "oracle": 1e-10,
        }
    )
    checks: tuple = CHECK_ORDER
    seed: int = 0


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _matrix_json(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _load(args):
    with open(args.params, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    params = params_from_dict(raw)
    return params, ("theta" in raw)


def _emit(report: dict, json_path):
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------- checks


def _run_consistency(params: QuonParams, config: RunConfig, inject=None):
    b = braid_op(params)
    c = cross_op(params)
    if inject:
        mat = c.matrix.copy()
        n = params.n_modes
        if n < 2:
            raise QuonWeylError("perturbation hook needs at least two modes")
        # bump the off-diagonal cross coefficient c_12
        mat[encode_index((1, 2), n), encode_index((2, 1), n)] += inject
        from .tensorops import TensorOperator, ESTAR

        c = TensorOperator((ESTAR, E), (E, ESTAR), n, mat)
    verdict = check_consistency(b, c, tol=config.tolerances["consistency"])
    return {
        "braid_residual": verdict.braid_residual,
        "mixed_residual": verdict.mixed_residual,
        "relation_residual": verdict.relation_residual,
        "tol": verdict.tol,
        "passed": verdict.passed,
    }


def _run_hexagon(params: QuonParams, config: RunConfig, tol: float = 1e-12):
    n = params.n_modes
    max_split = 0.0
    for total in range(3, 5):
        for u in range(1, total - 1):
            for v in range(1, total - u):
                w = total - u - v
                lu, lv, lw = (E,) * u, (E,) * v, (E,) * w
                whole_l = braiding(params, lu + lv, lw, config.size_cap).matrix
                piece = np.kron(
                    braiding(params, lu, lw, config.size_cap).matrix,
                    np.eye(n**v, dtype=complex),
                ) @ np.kron(
                    np.eye(n**u, dtype=complex),
                    braiding(params, lv, lw, config.size_cap).matrix,
                )
                max_split = max(max_split, float(np.max(np.abs(whole_l - piece))))
                whole_r = braiding(params, lu, lv + lw, config.size_cap).matrix
                piece = np.kron(
                    np.eye(n**v, dtype=complex),
                    braiding(params, lu, lw, config.size_cap).matrix,
                ) @ np.kron(
                    braiding(params, lu, lv, config.size_cap).matrix,
                    np.eye(n**w, dtype=complex),
                )
                max_split = max(max_split, float(np.max(np.abs(whole_r - piece))))
    max_phase = 0.0
    for length in range(1, 4):
        built = braiding(params, (E,), (E,) * length, config.size_cap).matrix
        direct = np.zeros_like(built)
        for col in range(built.shape[1]):
            modes = []
            idx = col
            for _ in range(length + 1):
                modes.append(idx % n + 1)
                idx //= n
            modes.reverse()
            i, rest = modes[0], modes[1:]
            phase = 1.0 + 0j
            for j in rest:
                phase *= params.b[i - 1, j - 1]
            direct[encode_index(tuple(rest) + (i,), n), col] = phase
        max_phase = max(max_phase, float(np.max(np.abs(built - direct))))
    max_invol = 0.0
    for u in range(1, 4):
        for v in range(1, 5 - u):
            fwd = braiding(params, (E,) * u, (E,) * v, config.size_cap).matrix
            bwd = braiding(params, (E,) * v, (E,) * u, config.size_cap).matrix
            eye = np.eye(n ** (u + v), dtype=complex)
            max_invol = max(max_invol, float(np.max(np.abs(bwd @ fwd - eye))))
    passed = max_split < tol and max_phase < 1e-15 and max_invol < tol
    return {
        "split_residual": max_split,
        "phase_formula_residual": max_phase,
        "involution_residual": max_invol,
        "tol": tol,
        "passed": passed,
    }


def _run_theorem_a(params: QuonParams, config: RunConfig):
    space = FockSpace(params, config.truncation)
    report = check_theorem_a(space, tol=config.tolerances["oracle"])
    return {
        "mixed_residual": report.mixed,
        "plain_residual": report.plain,
        "star_residual": report.star,
        "max_residual": report.max_residual,
        "tol": report.tol,
        "n_columns": report.n_columns,
        "passed": report.passed,
    }


def _expected_quadratic_kernel(params: QuonParams) -> int:
    n = params.n_modes
    return n * (n - 1) // 2 + int(np.sum(params.q == -1.0))


def _run_gram(params: QuonParams, config: RunConfig, degrees=None, export=False):
    if degrees is None:
        degrees = [
            d
            for d in range(1, 5)
            if params.n_modes**d <= config.size_cap
        ]
    per_degree = {}
    passed = True
    warnings = []
    for degree in degrees:
        tensor = gram_matrix(params, degree, "tensor", config.size_cap)
        occ = gram_matrix(params, degree, "occupation", config.size_cap)
        entry = {
            "tensor": tensor.to_json(include_matrix=export),
            "occupation": occ.to_json(include_matrix=export),
        }
        if not params.hermitian_b:
            passed = False
            warnings.append(
                f"degree {degree}: positivity not applicable (non-hermitian phases)"
            )
        else:
            if tensor.verdict == "indefinite":
                passed = False
            if occ.verdict == "positive_semidefinite":
                if params.endpoint_modes:
                    warnings.append(
                        f"degree {degree}: semidefinite Fock metric at "
                        f"endpoint q modes {list(params.endpoint_modes)}"
                    )
                else:
                    passed = False
            elif occ.verdict != "positive_definite":
                passed = False
            if degree == 2 and tensor.kernel_dim != _expected_quadratic_kernel(
                params
            ):
                passed = False
                warnings.append(
                    f"degree 2 kernel dimension {tensor.kernel_dim} != expected "
                    f"{_expected_quadratic_kernel(params)}"
                )
        per_degree[str(degree)] = entry
    return {"degrees": per_degree, "warnings": warnings, "passed": passed}


def _run_bozejko_speicher(params: QuonParams, config: RunConfig):
    report = check_bozejko_speicher(params, tol=config.tolerances["positivity"])
    return {
        "self_adjoint": {
            "residual": report.self_adjoint_residual,
            "ok": report.self_adjoint,
        },
        "norm_le_one": {"value": report.spectral_norm, "ok": report.norm_le_one},
        "yang_baxter": {
            "residual": report.yang_baxter_residual,
            "ok": report.yang_baxter,
        },
        "passed": report.passed,
    }


def _run_kernel(params: QuonParams, config: RunConfig):
    kernel = quadratic_kernel(params)
    gram2 = gram_matrix(params, 2, "tensor", config.size_cap)
    expected = _expected_quadratic_kernel(params)
    passed = kernel.dimension == expected and gram2.kernel_dim == kernel.dimension
    return {
        "kernel_dim": kernel.dimension,
        "expected": expected,
        "gram_degree2_kernel_dim": gram2.kernel_dim,
        "passed": passed,
    }


def _random_word(rng, n_modes: int, max_len: int):
    length = int(rng.integers(0, max_len + 1))
    return tuple(
        Generator(int(rng.integers(1, n_modes + 1)), bool(rng.integers(0, 2)))
        for _ in range(length)
    )


def _run_confluence(
    params: QuonParams, config: RunConfig, n_words: int = 200, max_len: int = 8
):
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for _ in range(n_words):
        word = _random_word(rng, params.n_modes, max_len)
        left = normal_order(params, word, "leftmost")
        right = normal_order(params, word, "rightmost")
        worst = max(worst, left.max_coeff_diff(right))
    return {
        "n_words": n_words,
        "max_len": max_len,
        "max_coeff_diff": float(worst),
        "tol": 1e-12,
        "passed": bool(worst < 1e-12),
    }


_CHECK_RUNNERS = {
    "consistency": _run_consistency,
    "hexagon": _run_hexagon,
    "theorem_a": _run_theorem_a,
    "gram": _run_gram,
    "bozejko_speicher": _run_bozejko_speicher,
    "kernel": _run_kernel,
    "confluence": _run_confluence,
}


def _conventions_for(checks, used_theta: bool):
    notes = []
    if used_theta:
        notes.append(NOTE_THETA)
    if any(name in checks for name in ("theorem_a", "confluence")):
        notes.append(NOTE_PHASES)
    if any(name in checks for name in ("gram", "bozejko_speicher", "kernel")):
        notes.append(NOTE_PROJECTOR)
    return notes


# ------------------------------------------------------------- commands


def _cmd_validate(args) -> int:
    try:
        params, used_theta = _load(args)
    except (QDomainError, CommFactorError, ThetaError, DimensionError) as exc:
        report = {
            "command": "validate",
            "source": args.params,
            "valid": False,
            "error": f"{args.params}: {exc}",
        }
        _emit(report, args.json)
        print(f"invalid parameters: {args.params}: {exc}")
        return 1
    notes = [NOTE_THETA] if used_theta else []
    report = {
        "command": "validate",
        "source": args.params,
        "valid": True,
        "params": params_to_dict(params),
        "conventions": notes,
    }
    _emit(report, args.json)
    print(f"valid: N={params.n_modes}, hermitian_b={params.hermitian_b}")
    if params.endpoint_modes:
        print(f"warning: endpoint q in modes {list(params.endpoint_modes)}")
    for note in notes:
        print(f"note: {note}")
    return 0


def _cmd_normal_order(args) -> int:
    params, used_theta = _load(args)
    word = parse_word(args.word, params.n_modes)
    poly = normal_order(params, word, strategy=args.strategy)
    text = format_polynomial(poly)
    report = {
        "command": "normal-order",
        "word": args.word,
        "strategy": args.strategy,
        "result": text,
        "terms": polynomial_to_json(poly),
        "conventions": [NOTE_THETA] if used_theta else [],
    }
    _emit(report, args.json)
    print(text)
    return 0


def _cmd_gram(args) -> int:
    params, used_theta = _load(args)
    config = _config_from(args)
    report_g = gram_matrix(
        params, args.degree, args.basis, config.size_cap, normalized=args.normalized
    )
    notes = ([NOTE_THETA] if used_theta else []) + [NOTE_PROJECTOR]
    report = {
        "command": "gram",
        "degree": args.degree,
        "basis": args.basis,
        "report": report_g.to_json(include_matrix=args.export_matrix),
        "conventions": notes,
    }
    _emit(report, args.json)
    print(
        f"degree {args.degree} ({args.basis}): verdict={report_g.verdict}, "
        f"eig range [{_fmt(report_g.min_eigenvalue)}, "
        f"{_fmt(report_g.max_eigenvalue)}], kernel={report_g.kernel_dim}"
    )
    ok = report_g.verdict == "positive_definite" or (
        report_g.verdict == "positive_semidefinite"
        and (params.endpoint_modes or args.basis == "tensor")
    )
    return 0 if ok else 1


def _cmd_fock(args) -> int:
    params, used_theta = _load(args)
    config = _config_from(args)
    space = FockSpace(params, config.truncation)
    word = parse_word(args.word, params.n_modes)
    op = operator_matrix(space, word)
    report = {
        "command": "fock",
        "word": args.word,
        "truncation": config.truncation,
        "dim": op.dim,
        "n_invalid_columns": int(np.sum(~op.valid)),
        "operator": matrix_to_json(op),
        "conventions": ([NOTE_THETA] if used_theta else []) + [NOTE_PHASES],
    }
    print(
        f"word {args.word!r} on {op.dim} states "
        f"(degree <= {config.truncation}); "
        f"{int(np.sum(~op.valid))} boundary-invalid columns"
    )
    if args.state:
        state = parse_state(args.state, params.n_modes)
        if sum(state) > config.truncation:
            raise CapError("state degree exceeds truncation")
        col = space.index[state]
        if not op.valid[col]:
            print(f"{format_state(state)}: boundary-invalid under this word")
            report["applied"] = {"state": list(state), "valid": False}
        else:
            vec = op.matrix[:, col]
            entries = [
                (space.basis[k], vec[k]) for k in np.nonzero(np.abs(vec) > 0)[0]
            ]
            pretty = " + ".join(
                f"({_fmt(a.real)}{a.imag:+.17g}j)*{format_state(s)}"
                for s, a in entries
            )
            print(f"{format_state(state)} -> {pretty or '0'}")
            report["applied"] = {
                "state": list(state),
                "valid": True,
                "result": [
                    {"state": list(s), "amp": [a.real, a.imag]} for s, a in entries
                ],
            }
    _emit(report, args.json)
    return 0


def _run_checks(params: QuonParams, config: RunConfig, used_theta: bool, args):
    results = {}
    overall = True
    for name in CHECK_ORDER:
        if name not in config.checks:
            continue
        runner = _CHECK_RUNNERS[name]
        try:
            if name == "consistency":
                outcome = runner(params, config, getattr(args, "inject", None))
            elif name == "gram":
                degree = getattr(args, "degree", None)
                outcome = runner(
                    params,
                    config,
                    degrees=[degree] if degree else None,
                    export=args.export_matrices,
                )
            else:
                outcome = runner(params, config)
        except (SizeCapError, CapError, TruncationError) as exc:
            outcome = {"passed": False, "error": f"cap exceeded: {exc}"}
        except QuonWeylError as exc:
            outcome = {"passed": False, "error": str(exc)}
        results[name] = outcome
        overall = overall and outcome["passed"]
    report = {
        "command": "check",
        "source": config.params_source,
        "params": params_to_dict(params),
        "config": {
            "truncation": config.truncation,
            "size_cap": config.size_cap,
            "tolerances": config.tolerances,
            "checks": [c for c in CHECK_ORDER if c in config.checks],
            "seed": config.seed,
        },
        "conventions": _conventions_for(config.checks, used_theta),
        "results": results,
        "overall": "pass" if overall else "fail",
    }
    return report, overall


def _cmd_check(args, all_checks=False, export=False) -> int:
    params, used_theta = _load(args)
    config = _config_from(args)
    if all_checks:
        config.checks = CHECK_ORDER
    elif args.checks:
        requested = tuple(s.strip() for s in args.checks.split(",") if s.strip())
        unknown = [c for c in requested if c not in CHECK_ORDER]
        if unknown:
            raise QuonWeylError(f"unknown checks: {', '.join(unknown)}")
        config.checks = requested
    args.export_matrices = export
    report, overall = _run_checks(params, config, used_theta, args)
    if export:
        b = braid_op(params)
        c = cross_op(params)
        report["exports"] = {
            "braid_op": _matrix_json(b.matrix),
            "cross_op": _matrix_json(c.matrix),
            "partial_dual": _matrix_json(partial_dual(c).matrix),
            "insertion_sum_2": _matrix_json(insertion_sum(params, 2).matrix),
        }
        report["command"] = "report"
    _emit(report, args.json)
    for name in CHECK_ORDER:
        if name in report["results"]:
            outcome = report["results"][name]
            status = "PASS" if outcome["passed"] else "FAIL"
            detail = outcome.get("error", "")
            print(f"check {name}: {status}{(' (' + detail + ')') if detail else ''}")
    if report["results"].get("gram", {}).get("warnings"):
        for w in report["results"]["gram"]["warnings"]:
            print(f"warning: {w}")
    print(f"overall: {report['overall']}")
    return 0 if overall else 1


def _config_from(args) -> RunConfig:
    return RunConfig(
        params_source=args.params,
        truncation=getattr(args, "truncation", 6),
        size_cap=getattr(args, "size_cap", DEFAULT_SIZE_CAP),
        seed=getattr(args, "seed", 0),
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quonweyl",
        description=(
            "Validate deformed Weyl algebra parameters, normal-order words, "
            "and run the numerical verification checks."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand")

    def add_common(p, truncation=True):
        p.add_argument("--params", required=True, help="JSON parameter file")
        p.add_argument("--json", default=None, help="write a JSON report here")
        if truncation:
            p.add_argument("--truncation", type=int, default=6, metavar="D")
            p.add_argument("--size-cap", dest="size_cap", type=int,
                           default=DEFAULT_SIZE_CAP)

    p = sub.add_parser("validate", help="validate a parameter file")
    add_common(p, truncation=False)
    p.set_defaults(cmd=_cmd_validate)

    p = sub.add_parser("normal-order", help="normal-order a generator word")
    add_common(p, truncation=False)
    p.add_argument("--word", required=True, help='e.g. "a*1 a1"')
    p.add_argument("--strategy", choices=("leftmost", "rightmost"),
                   default="leftmost")
    p.set_defaults(cmd=_cmd_normal_order)

    p = sub.add_parser("gram", help="Gram matrix report at one degree")
    add_common(p)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--basis", choices=("tensor", "occupation"), default="tensor")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--export-matrix", action="store_true")
    p.set_defaults(cmd=_cmd_gram)

    p = sub.add_parser("fock", help="export a word's matrix on the truncated basis")
    add_common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--state", default=None, help='apply to a state "|n1,...,nN>"')
    p.set_defaults(cmd=_cmd_fock)

    for name, every in (("check", False), ("report", True)):
        p = sub.add_parser(
            name,
            help="run verification checks"
            + (" (all, with matrix exports)" if every else ""),
        )
        add_common(p)
        p.add_argument("--checks", default=None,
                       help="comma list from: " + ",".join(CHECK_ORDER))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--degree", type=int, default=None, help=argparse.SUPPRESS)
        p.add_argument("--inject-c-perturbation", dest="inject", type=float,
                       default=None, help=argparse.SUPPRESS)
        p.set_defaults(
            cmd=lambda a, _every=every: _cmd_check(a, all_checks=_every,
                                                   export=_every)
        )

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "cmd"):
        parser.print_help()
        return 2
    try:
        return args.cmd(args)
    except (SizeCapError, CapError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WordSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuonWeylError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
