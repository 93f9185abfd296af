# backend/main.py

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from app import config
from app.balance import cycler_orbit, sato_tate
from app.bell import quantum_value
from app.entropy import fig2_grid, min_entropy_bound, min_total, minimize_min_entropy
from app.errors import (
    BudgetExceeded,
    InvalidMagicParams,
    QuditError,
    TheoremViolation,
    UnsupportedDimension,
)
from app.field import is_prime
from app.lhv import lhv_best
from app.magic import magic_params, magic_state
from app.persistence import build_metadata, emit_table, render_document, write_artifact
from app.verification import run_suite
from app.wigner import mana, w_min, wigner_csv_rows, wigner_function

logging.basicConfig(level=config.LOG_LEVEL, format="%(levelname)s %(name)s %(message)s", stream=sys.stderr)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3

TABLE1_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29]

DEFAULT_PRIMES: Dict[str, List[int]] = {
    "table1": TABLE1_PRIMES,
    "table2": [7],
    "fig2": [3],
    "satotate": [101],
    "entropy-min": [3, 5, 7],
    "verify": [3, 5, 7],
    "orbit": [5, 7, 11],
    "wigner": [7],
}


class RunConfig(BaseModel):
    command: str
    p_list: List[int] = Field(default_factory=list, description="primes to run; empty means the command default")
    seed: int = config.SEED
    restarts: Optional[int] = Field(None, description="search restarts; None picks the per-module default")
    resolution: int = 90
    tol: float = config.HERMITIAN_TOL
    out: Optional[str] = None
    format: str = "csv"
    a: int = 1
    b: int = 0
    c: int = 0

    @field_validator("p_list")
    @classmethod
    def primes_only(cls, v: List[int]) -> List[int]:
        bad = [p for p in v if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        return v

    @field_validator("format")
    @classmethod
    def known_format(cls, v: str) -> str:
        if v not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        return v

    @field_validator("resolution")
    @classmethod
    def resolution_floor(cls, v: int) -> int:
        if v < 16:
            raise ValueError("resolution must be at least 16")
        return v

    @field_validator("restarts")
    @classmethod
    def positive_restarts(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("restarts must be at least 1")
        return v

    def primes(self) -> List[int]:
        return self.p_list or list(DEFAULT_PRIMES[self.command])


def _require(condition: bool, message: str, **details) -> None:
    if not condition:
        raise UnsupportedDimension(message, details, code="cli.usage")


# -------------------------------------------------
#  Commands
# -------------------------------------------------

def cmd_table1(cfg: RunConfig) -> int:
    primes = cfg.primes()
    _require(all(2 < p <= 29 for p in primes), "table1 covers odd primes up to 29", p_list=primes)

    rows = []
    for p in primes:
        restarts = cfg.restarts or config.LHV_RESTARTS
        lhv = lhv_best(p, restarts=restarts, seed=cfg.seed)
        report = quantum_value(p, lhv)
        rows.append([
            p, report.ic_bound, report.weil_bound, report.lambda_max_B, report.best_class_value,
            report.lhv_value, report.lhv_exact,
        ])
        logger.info("[TABLE1] p=%d | qm=%.4f | lhv=%d | exact=%s", p, report.lambda_max_B, lhv.value, lhv.exact)

    metadata = build_metadata(
        "table1",
        cfg.seed,
        {"ic_bound": 0.0, "weil_bound": 0.0, "qm_lambda_max": config.THEOREM_TOL, "qm_best_class": config.THEOREM_TOL, "lhv": 0},
        restarts=cfg.restarts or config.LHV_RESTARTS,
    )
    columns = ["p", "ic_bound", "weil_bound", "qm_lambda_max", "qm_best_class", "lhv", "lhv_exact"]
    emit_table(columns, rows, metadata, cfg.format, cfg.out)
    return EXIT_OK


def cmd_table2(cfg: RunConfig) -> int:
    primes = cfg.primes()
    _require(all(2 < p <= 11 for p in primes), "table2 accepts odd primes up to 11", p_list=primes)

    rows, footer = [], {}
    for p in primes:
        for a in range(1, p):
            state = magic_state(magic_params(a, 0, 0, p))
            rows.append([p, a, w_min(state), mana(state), min_total(state)])
        footer[f"lower_bound_p{p}"] = min_entropy_bound(p)

    metadata = build_metadata("table2", None, {"w_min": 1e-10, "mana": 1e-10, "min_entropy_total": 1e-10})
    emit_table(["p", "a", "w_min", "mana", "min_entropy_total"], rows, metadata, cfg.format, cfg.out, footer)
    return EXIT_OK


def cmd_fig2(cfg: RunConfig) -> int:
    grid = fig2_grid(cfg.resolution)
    rows = [[float(x), float(y), float(h)] for x, y, h in grid]
    metadata = build_metadata("fig2", None, {"total_min_entropy": 1e-12}, resolution=cfg.resolution)
    emit_table(["x", "y", "total_min_entropy"], rows, metadata, cfg.format, cfg.out)
    return EXIT_OK


def cmd_satotate(cfg: RunConfig) -> int:
    rows, footer = [], {}
    for p in cfg.primes():
        samples, summary = sato_tate(p)
        rows.extend([s.p, s.a, s.c, s.theta] for s in samples)
        if summary.ks_statistic is not None:
            footer[f"ks_statistic_p{p}"] = summary.ks_statistic
            footer[f"ks_passed_p{p}"] = summary.ks_passed
        footer[f"max_abs_sum_p{p}"] = summary.max_abs_sum
        footer[f"weil_limit_p{p}"] = summary.weil_limit

    metadata = build_metadata("satotate", None, {"theta": 1e-10})
    emit_table(["p", "a", "c", "theta"], rows, metadata, cfg.format, cfg.out, footer)
    return EXIT_OK


def cmd_entropy_min(cfg: RunConfig) -> int:
    primes = cfg.primes()
    _require(all(2 < p <= 13 for p in primes), "entropy-min accepts odd primes up to 13", p_list=primes)

    results = []
    for p in primes:
        r = minimize_min_entropy(p, restarts=cfg.restarts, seed=cfg.seed)
        results.append({
            "p": p,
            "value": r.value,
            "magic_value": r.magic_value,
            "is_magic": r.is_magic,
            "lower_bound": min_entropy_bound(p),
            "restarts": r.restarts_used,
            "phases": list(r.phases.phases),
        })

    metadata = build_metadata("entropy-min", cfg.seed, {"value": 1e-2, "magic_value": 1e-10})
    write_artifact(render_document({"results": results}, metadata), cfg.out)
    return EXIT_OK


def cmd_orbit(cfg: RunConfig) -> int:
    orbits = []
    for p in cfg.primes():
        orbit = cycler_orbit(p, c=cfg.c)
        orbits.append({
            "p": p,
            "params": {"a": orbit.params.a, "b": orbit.params.b, "c": orbit.params.c},
            "bases": list(orbit.basis_sequence),
            "steps": [step.model_dump() for step in orbit.steps],
        })

    metadata = build_metadata("orbit", None, {"overlap": config.IDENTIFY_TOL})
    write_artifact(render_document({"orbits": orbits}, metadata), cfg.out)
    return EXIT_OK


def cmd_wigner(cfg: RunConfig) -> int:
    rows = []
    for p in cfg.primes():
        _require(p > 2, "the Wigner function is defined for odd primes", p=p)
        w = wigner_function(magic_state(magic_params(cfg.a, cfg.b, cfg.c, p)))
        rows.extend([p, x, z, value] for x, z, value in wigner_csv_rows(w))

    metadata = build_metadata("wigner", None, {"W": 1e-10}, a=cfg.a, b=cfg.b, c=cfg.c)
    emit_table(["p", "x", "z", "W"], rows, metadata, cfg.format, cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = run_suite(cfg.primes(), cfg.tol)
    rows = [[r.name, r.p, r.passed, r.detail] for r in results]
    metadata = build_metadata("verify", cfg.seed, {"checks": cfg.tol})
    emit_table(["check", "p", "passed", "detail"], rows, metadata, cfg.format, cfg.out)

    failed = [r for r in results if not r.passed]
    if failed:
        first = failed[0]
        logger.error("[VERIFY] %d check(s) failed; first: %s at p=%d (%s)", len(failed), first.name, first.p, first.detail)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "table1": cmd_table1,
    "table2": cmd_table2,
    "fig2": cmd_fig2,
    "satotate": cmd_satotate,
    "entropy-min": cmd_entropy_min,
    "verify": cmd_verify,
    "orbit": cmd_orbit,
    "wigner": cmd_wigner,
}


# -------------------------------------------------
#  Argument parsing
# -------------------------------------------------

class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="qudit-magic", description="Qudit magic-state tables, bounds and invariant checks")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--p", dest="p_list", type=int, action="append", default=[], help="prime dimension (repeatable)")
    parser.add_argument("--seed", type=int, default=config.SEED)
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--resolution", type=int, default=90)
    parser.add_argument("--tol", type=float, default=config.HERMITIAN_TOL)
    parser.add_argument("--out", default=None, help="output path; stdout when omitted")
    parser.add_argument("--format", default="csv", choices=["csv", "json"])
    parser.add_argument("--a", type=int, default=1)
    parser.add_argument("--b", type=int, default=0)
    parser.add_argument("--c", type=int, default=0)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(**vars(args))
    except (UsageError, ValidationError) as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE

    logger.info("[RUN] command=%s | p_list=%s | seed=%d", cfg.command, cfg.primes(), cfg.seed)
    try:
        return COMMANDS[cfg.command](cfg)
    except (UnsupportedDimension, BudgetExceeded, InvalidMagicParams) as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except TheoremViolation as e:
        logger.error("[RUN] verification failure: %s", e)
        return EXIT_VERIFY
    except (QuditError, ArithmeticError) as e:
        logger.error("[RUN] numeric failure: %s", e)
        return EXIT_NUMERIC
    except ValueError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
