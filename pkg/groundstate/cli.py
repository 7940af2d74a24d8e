"""Command line front end.

    python -m groundstate constants --N 3 --alpha 1 --s 0
    python -m groundstate verify --identity A-prime --N 3 --alpha 1 --profile gaussian:1
    python -m groundstate sweep --N 3 --alpha 1 --s 0 --lambdas 1,10,100,1000

Exit codes: 0 every verdict passed, 1 some verdict failed, 2 invalid
configuration, 3 computation error.
"""
import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from groundstate.core.config import settings
from groundstate.core.errors import ConfigError, DomainError, GroundstateError
from groundstate.core.logging import configure_logging
from groundstate.schemas.params import ParamsRecord
from groundstate.schemas.report import VerificationReport
from groundstate.schemas.run_config import (
    CommandEnum,
    IdentityEnum,
    OutputFormat,
    RunConfig,
    load_config_file,
    merge_overrides,
)
from groundstate.services.constants import (
    hardy_constant,
    riesz_normalization,
    seminorm_normalization,
    sharp_constant,
)
from groundstate.services.identities import IdentityVerifier, random_discrete_instance
from groundstate.services.radial_functions import parse_profile
from groundstate.services.report_writer import ReportWriter
from groundstate.services.sharpness import SharpnessService

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_COMPUTATION = 3


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration; flags override its values")
    common.add_argument("--N", type=int, dest="N", help="space dimension")
    common.add_argument("--alpha", type=float, help="Riesz order, 0 < alpha < N")
    common.add_argument("--s", type=float, help="derivative order, 0 <= s <= 2")
    common.add_argument("--rel-tol", type=float, dest="rel_tol")
    common.add_argument("--abs-tol", type=float, dest="abs_tol")
    common.add_argument("--max-subdivisions", type=int, dest="max_subdivisions")
    common.add_argument("--band", type=float, dest="diagonal_band_width", help="near-diagonal band width")
    common.add_argument("--output", dest="output_path", help="report file (default: stdout)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat])
    common.add_argument(
        "--log-level", dest="log_level", type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groundstate",
        description="Sharp constants, groundstate identities and sharpness sweeps for Stein-Weiss inequalities",
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", parents=[common], help="print the sharp constants for (N, alpha, s)")

    verify = sub.add_parser("verify", parents=[common], help="verify one groundstate identity")
    verify.add_argument("--identity", choices=[i.value for i in IdentityEnum])
    verify.add_argument("--profile", help="profile descriptor, e.g. gaussian:1 or truncated:1.5,10")
    verify.add_argument("--beta", type=float, help="power-law exponent (power-law identity)")
    verify.add_argument("--radii", help="comma separated radii for the pointwise checks")
    verify.add_argument("--tol", type=float, help="override the residual tolerance")
    verify.add_argument("--s-small", type=float, dest="s_small")
    verify.add_argument("--s-large", type=float, dest="s_large")

    sweep = sub.add_parser("sweep", parents=[common], help="sharpness sweep over u_lambda")
    sweep.add_argument("--lambdas", help="comma separated, strictly increasing, >= 1")
    sweep.add_argument(
        "--verify-rows", action="store_true", default=None, dest="verify_rows",
        help="check the identity at every row",
    )

    semigroup = sub.add_parser("semigroup", parents=[common], help="check I_alpha * I_beta = I_(alpha+beta)")
    semigroup.add_argument("--beta", type=float)
    semigroup.add_argument("--profile")
    semigroup.add_argument("--radii")
    semigroup.add_argument("--tol", type=float)

    discrete = sub.add_parser("discrete-gs", parents=[common], help="discrete groundstate identity on random instances")
    discrete.add_argument("--size", type=int)
    discrete.add_argument("--count", type=int)
    discrete.add_argument("--seed", type=int)
    discrete.add_argument("--tol", type=float)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    ns = vars(args)
    top = (
        "command", "profile", "lambdas", "output_path", "format", "identity", "beta",
        "radii", "tol", "s_small", "s_large", "verify_rows", "seed", "size", "count",
    )
    overrides: Dict[str, Any] = {key: ns.get(key) for key in top}
    overrides["params"] = {key: ns.get(key) for key in ("N", "alpha", "s")}
    overrides["quadrature"] = {
        key: ns.get(key) for key in ("rel_tol", "abs_tol", "max_subdivisions", "diagonal_band_width")
    }
    return overrides


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """設定ファイルとフラグを統合して RunConfig を作る"""
    base = load_config_file(args.config) if args.config else {}
    file_command = base.get("command")
    if file_command is not None and file_command != args.command:
        raise ConfigError(
            f"config file is for '{file_command}' but '{args.command}' was requested", field="command",
        )
    return RunConfig.model_validate(merge_overrides(base, _overrides(args)))


def _profile(config: RunConfig, default: Optional[str] = None):
    descriptor = config.profile or default
    try:
        return parse_profile(descriptor)
    except DomainError as e:
        raise ConfigError(e.detail, field="profile")


def _constants(config: RunConfig) -> Tuple[Dict[str, Any], str, bool]:
    params = config.inequality_params()
    C = sharp_constant(params)
    payload: Dict[str, Any] = {
        "params": ParamsRecord.of(params).model_dump(),
        "regime": params.regime,
        "sharp_constant": C,
        "hardy_constant": hardy_constant(params.N, params.s),
        "riesz_normalization": riesz_normalization(params.N, params.alpha),
    }
    if params.regime == "fractional":
        payload["seminorm_normalization"] = seminorm_normalization(params.N, params.s)
    return payload, f"C = {C:.10f}", True


def _verify(config: RunConfig) -> VerificationReport:
    verifier = IdentityVerifier(config.quadrature)
    p = config.params
    identity = config.identity
    if identity is IdentityEnum.POWER_LAW:
        return verifier.verify_riesz_power_law(p.N, p.alpha, config.beta, config.radii, config.tol)

    phi = _profile(config)
    if identity is IdentityEnum.A_PRIME:
        return verifier.verify_theorem_a_prime(phi, p.N, p.alpha, config.tol)
    if identity is IdentityEnum.B_PRIME:
        return verifier.verify_theorem_b_prime(phi, p.N, p.alpha, config.tol)
    if identity is IdentityEnum.C_PRIME:
        return verifier.verify_theorem_c_prime(phi, config.inequality_params(), config.tol)
    if identity is IdentityEnum.FLS:
        return verifier.verify_fls_representation(phi, p.N, p.s, config.tol)
    if identity is IdentityEnum.LOCAL_HARDY:
        return verifier.verify_local_hardy(phi, p.N, config.tol)
    if identity is IdentityEnum.SEMINORM_LIMIT:
        return verifier.verify_seminorm_limit(phi, p.N, p.s, config.tol)
    if identity is IdentityEnum.LARGE_S:
        return verifier.verify_large_s_consistency(phi, p.N, p.alpha, config.s_large, config.tol)
    return verifier.verify_small_s_consistency(phi, p.N, p.alpha, config.s_small, config.tol)


def _discrete(config: RunConfig) -> List[VerificationReport]:
    verifier = IdentityVerifier(config.quadrature)
    rng = np.random.default_rng(config.seed)
    reports = []
    for _ in range(config.count):
        K, u, phi = random_discrete_instance(rng, config.size)
        reports.append(verifier.verify_discrete_groundstate(K, u, phi, config.tol))
    return reports


def _stamp(reports: Sequence[VerificationReport], runtime: float) -> None:
    for report in reports:
        report.runtime_seconds = runtime
        report.artifact_version = settings.artifact_version


def run(config: RunConfig) -> Tuple[int, str, str]:
    """Execute one configuration; returns (exit status, summary, document)."""
    started = time.perf_counter()
    command = config.command

    if command is CommandEnum.CONSTANTS:
        payload, summary, passed = _constants(config)
        payload["artifact_version"] = settings.artifact_version
        document = json.dumps(payload, ensure_ascii=False, indent=2)
    elif command is CommandEnum.SWEEP:
        service = SharpnessService(config.quadrature, settings.MAX_WORKERS)
        result = service.sharpness_sweep(config.inequality_params(), config.lambdas, config.verify_rows)
        passed = result.passed
        summary = ReportWriter.generate_sweep_summary(result)
        if config.output_format is OutputFormat.CSV:
            document = ReportWriter.generate_sweep_csv(result)
        else:
            document = ReportWriter.generate_sweep_json(result)
    else:
        if command is CommandEnum.VERIFY:
            reports = [_verify(config)]
        elif command is CommandEnum.SEMIGROUP:
            f = _profile(config, default="gaussian:1")
            verifier = IdentityVerifier(config.quadrature)
            reports = [verifier.verify_semigroup(
                config.params.N, config.params.alpha, config.beta, f, config.radii, config.tol,
            )]
        else:
            reports = _discrete(config)
        _stamp(reports, time.perf_counter() - started)
        passed = all(r.passed for r in reports)
        summary = "\n".join(ReportWriter.generate_summary(r) for r in reports)
        document = ReportWriter.generate_json(reports[0] if len(reports) == 1 else reports)

    logger.info("%s finished in %.3f s", command.value, time.perf_counter() - started)
    return (EXIT_PASS if passed else EXIT_FAIL), summary, document


def _emit(config: RunConfig, summary: str, document: str) -> None:
    print(summary)
    if config.output_path:
        Path(config.output_path).write_text(document, encoding="utf-8")
        logger.info("report written to %s", config.output_path)
    else:
        print(document)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.log_level)

    try:
        config = load_run_config(args)
    except (ConfigError, ValidationError) as e:
        print(f"⚠️ invalid configuration: {getattr(e, 'detail', e)}")
        return EXIT_USAGE

    try:
        status, summary, document = run(config)
    except ConfigError as e:
        print(f"⚠️ invalid configuration: {e.detail}")
        return EXIT_USAGE
    except ValidationError as e:
        print(f"⚠️ invalid parameters: {e}")
        return EXIT_USAGE
    except GroundstateError as e:
        operation = getattr(e, "operation", config.command.value)
        logger.error("computation failed in %s: %s", operation, e.detail)
        print(f"⚠️ computation error in {operation}: {e.detail}")
        return EXIT_COMPUTATION

    _emit(config, summary, document)
    return status


if __name__ == "__main__":
    sys.exit(main())
