#!/usr/bin/env python3
"""
cli.py
------
Command-line front end.

    pvar.py fit      --weight uniform --interval 0 1 --z "x^0.5" --p 1 --degree 2 --target "sqrt(1-x)"
    pvar.py basis    --weight jacobi --params 0 0 --z 1 --p 1/2 --degree 4
    pvar.py polyfam  --family beta_power --params 1/2 --degree 4 --check
    pvar.py odsolve  --matrix datasets/ex13_matrix.csv --rhs datasets/ex13_rhs.csv --z ones --p 1
    pvar.py quad     --nodes 0 1/2 1 --target "x^3" --z x --p 1
    pvar.py bessel   --family sine --degree 5 --target x --p 1/2
    pvar.py vectors  --vectors "1,0,0;0,1,0;0,0,1" --zvec 1,2,3 --p 1/2
    pvar.py verify   --suite all
    pvar.py examples

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator

from analysis_extras import bessel_improved, lagrange_weights, pv_quad_weights, quadrature_error
from approx import expand, fit
from elements import Element, FunctionElement, monomials, poly
from errors import ConstraintViolation, NumericalError, ValidationError
from expectation import chebyshev, jacobi, power_beta, power_gamma, uniform
from ingest import ingest_csv, parse_expression, read_matrix_csv, read_vector_csv
from log_setup import append_run_log, get_logger
from odsolve import ls_solve, objectives, overdetermined_problem, pv_solve
from pcov import pcov_op, var_p
from polyfam import FAMILIES, family_norm, family_poly, identity_suite, jacobi_base
from scalar import FLOAT, RATIONAL, as_scalar, fmt, parse_number
from settings import get_settings
from uncorrelate import describe_basis, gram_schmidt_p, verify_basis
from vectors import vector_basis, vector_companions, vector_conjecture_check
from worked_cases import run_cases

logger = get_logger("cli")

COMMANDS = ("fit", "basis", "polyfam", "odsolve", "quad", "bessel", "vectors", "verify", "examples")
WEIGHTS = ("uniform", "power_beta", "power_gamma", "jacobi", "chebyshev")

# default descriptors exercised by `verify`
VERIFY_FAMILIES = {
    "beta": [("beta_unified", ["1/3", "2/5"]), ("beta_power", ["1/2"]), ("beta_ordinary", ["1/2"])],
    "classical": [("jacobi_divided", ["0", "0"]), ("chebyshev_divided", ["1"]), ("laguerre_divided", ["1"])],
    "shift": [("chebyshev_shift", ["0"]), ("chebyshev_shift", ["1/2"])],
}


class JobSpec(BaseModel):
    """One CLI invocation, validated and normalized."""

    command: str
    weight: str = "uniform"
    params: List[str] = Field(default_factory=list)
    interval: Optional[List[str]] = None
    data: Optional[str] = None
    z: str = "1"
    p: str = "1"
    degree: int = Field(2, ge=0)
    target: Optional[str] = None
    family: Optional[str] = None
    check: bool = False
    matrix: Optional[str] = None
    rhs: Optional[str] = None
    nodes: List[str] = Field(default_factory=list)
    vectors: Optional[str] = None
    zvec: Optional[str] = None
    suite: str = "all"
    backend: str = RATIONAL
    format: str = "json"
    out: Optional[str] = None
    report: Optional[str] = None

    @field_validator("command")
    @classmethod
    def _known_command(cls, value):
        if value not in COMMANDS:
            raise ValueError(f"unknown command '{value}'")
        return value

    @field_validator("weight")
    @classmethod
    def _known_weight(cls, value):
        if value not in WEIGHTS:
            raise ValueError(f"unknown weight '{value}' (choose from {', '.join(WEIGHTS)})")
        return value

    @field_validator("p")
    @classmethod
    def _p_in_range(cls, value):
        p = parse_number(value)
        if not 0 <= p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {value}")
        return value

    @field_validator("backend")
    @classmethod
    def _known_backend(cls, value):
        if value not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown backend '{value}'")
        return value

    @field_validator("format")
    @classmethod
    def _known_format(cls, value):
        if value not in ("json", "csv"):
            raise ValueError(f"unknown format '{value}'")
        return value

    def normalized(self) -> Dict:
        """Canonical inputs echoed into every JSON artifact."""
        return self.model_dump(exclude_none=True, exclude={"out", "report", "format"})


# ---------------------------------------------------------------------
# Job -> library objects
# ---------------------------------------------------------------------
def _scalar(job: JobSpec, text: str):
    value = parse_number(text)
    return float(value) if job.backend == FLOAT else as_scalar(value)


def build_space(job: JobSpec):
    """Continuous space from --weight/--params/--interval, or a sample file."""
    if job.data:
        return ingest_csv(job.data, FLOAT if job.backend == FLOAT else None).space
    params = [_scalar(job, v) for v in job.params]
    if job.weight == "uniform":
        lo, hi = (job.interval or ["0", "1"])
        return uniform(_scalar(job, lo), _scalar(job, hi))
    if job.weight == "power_beta":
        return power_beta(*(params or [0]))
    if job.weight == "power_gamma":
        return power_gamma(*(params or [0]))
    if job.weight == "jacobi":
        if len(params) != 2:
            raise ConstraintViolation("jacobi needs --params ALPHA BETA")
        return jacobi(*params)
    if not params:
        raise ConstraintViolation("chebyshev needs --params KIND")
    return chebyshev(int(params[0]))


def _target(job: JobSpec) -> Element:
    if job.data and job.target is None:
        return ingest_csv(job.data).target
    if job.target is None:
        raise ConstraintViolation(f"{job.command} needs --target")
    return parse_expression(job.target)


def _fixed(job: JobSpec) -> Element:
    if job.data and job.z == "data":
        z = ingest_csv(job.data).z
        if z is None:
            raise ConstraintViolation("--z data needs a z column in the sample file")
        return z
    return parse_expression(job.z)


def _op(job: JobSpec):
    return pcov_op(build_space(job), _fixed(job), _scalar(job, job.p))


def _envelope(job: JobSpec, coefficients=None, residual_var_p=None, residual_ls=None, diagnostics=None) -> Dict:
    return {
        "command": job.command,
        "inputs": job.normalized(),
        "coefficients": coefficients,
        "residual_var_p": None if residual_var_p is None else fmt(residual_var_p),
        "residual_ls": None if residual_ls is None else fmt(residual_ls),
        "diagnostics": diagnostics or {},
    }


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------
def cmd_fit(job: JobSpec) -> Dict:
    op = _op(job)
    result = fit(op, monomials(job.degree), _target(job))
    d = result.to_dict()
    return _envelope(
        job,
        d["coefficients"],
        result.residual_var_p,
        result.residual_ls,
        {"basis_used": d["basis_used"], "degenerate_free_params": d["degenerate_free_params"]},
    )


def cmd_basis(job: JobSpec) -> Dict:
    op = _op(job)
    basis = gram_schmidt_p(op, monomials(job.degree))
    rows = describe_basis(basis)
    diagnostics = {"verification": verify_basis(op, basis)}
    if job.target is not None:
        expansion = expand(op, basis, parse_expression(job.target))
        diagnostics["expansion"] = expansion.to_dict()
    return _envelope(job, rows, diagnostics=diagnostics)


def cmd_polyfam(job: JobSpec) -> Dict:
    if job.family not in FAMILIES:
        raise ConstraintViolation(f"unknown family '{job.family}' (choose from {', '.join(FAMILIES)})")
    args = [int(v) if job.family == "chebyshev_divided" else _scalar(job, v) for v in job.params]
    descriptor = FAMILIES[job.family](*args)
    rows = []
    for n in range(job.degree + 1):
        member = family_poly(descriptor, n)
        rows.append({"n": n, "element": member.describe(), "var_1": fmt(family_norm(descriptor, n))})
    diagnostics = {"family": descriptor.describe()}
    if job.check:
        diagnostics["identities"] = identity_suite(descriptor, job.degree)
    return _envelope(job, rows, diagnostics=diagnostics)


def cmd_odsolve(job: JobSpec) -> Dict:
    if not job.matrix or not job.rhs:
        raise ConstraintViolation("odsolve needs --matrix and --rhs")
    backend = FLOAT if job.backend == FLOAT else None
    a = read_matrix_csv(job.matrix, backend)
    b = read_vector_csv(job.rhs, backend)
    z = None if job.z in ("ones", "1") else read_vector_csv(job.z, backend)
    prob = overdetermined_problem(a, b, z, _scalar(job, job.p))
    ls = ls_solve(prob)
    pv = pv_solve(prob)
    e_ls, v_ls = objectives(prob, ls)
    e_pv, v_pv = objectives(prob, pv)
    return _envelope(
        job,
        [fmt(v) for v in pv],
        v_pv,
        e_pv,
        {
            "ls_solution": [fmt(v) for v in ls],
            "ls_objectives": {"E": fmt(e_ls), "V": fmt(v_ls)},
            "pv_objectives": {"E": fmt(e_pv), "V": fmt(v_pv)},
            "chain_holds": bool(v_pv <= v_ls <= e_ls),
        },
    )


def cmd_quad(job: JobSpec) -> Dict:
    if not job.nodes:
        raise ConstraintViolation("quad needs --nodes")
    op = _op(job)
    nodes = [_scalar(job, v) for v in job.nodes]
    rule = pv_quad_weights(op, nodes)
    diagnostics = {"nodes": [fmt(v) for v in nodes]}
    if job.target is not None:
        f = parse_expression(job.target)
        lagrange = lagrange_weights(op, nodes, f)
        diagnostics.update(
            {
                "var_p": fmt(var_p(op, f)),
                "moment_rule_value": fmt(rule.apply(f)),
                "moment_rule_error": fmt(quadrature_error(rule, f)),
                "lagrange_weights": [fmt(w) for w in lagrange.weights],
                "lagrange_rule_error": fmt(quadrature_error(lagrange, f)),
            }
        )
    return _envelope(job, [fmt(w) for w in rule.weights], diagnostics=diagnostics)


def _bessel_family(job: JobSpec):
    name = job.family or "sine"
    if name == "sine":
        space = uniform(0, math.pi)
        family = [FunctionElement(lambda t, k=k: np.sin(k * t), f"sin({k}x)") for k in range(1, job.degree + 2)]
        return space, family
    if name == "legendre":
        base = jacobi_base(0, 0)
        return uniform(-1, 1), [poly(base.monic(n)) for n in range(job.degree + 1)]
    raise ConstraintViolation(f"bessel family must be sine or legendre, got '{name}'")


def cmd_bessel(job: JobSpec) -> Dict:
    space, family = _bessel_family(job)
    op = pcov_op(space, parse_expression(job.z), _scalar(job, job.p))
    result = bessel_improved(op, family, _target(job))
    return _envelope(
        job,
        None,
        diagnostics={"S_n": fmt(result.s_n), "V_n": fmt(result.v_n), "R_n_sq": fmt(result.r_sq), "holds": result.holds},
    )


def _parse_rows(text: str) -> List[List]:
    return [[parse_number(c) for c in row.split(",")] for row in text.split(";") if row.strip()]


def cmd_vectors(job: JobSpec) -> Dict:
    if not job.vectors or not job.zvec:
        raise ConstraintViolation("vectors needs --vectors and --zvec")
    vs = _parse_rows(job.vectors)
    z = _parse_rows(job.zvec)[0]
    basis = vector_basis(vs, z, _scalar(job, job.p), strict=False)
    companions = vector_companions(basis)
    diagnostics = {
        "variances": [fmt(v) for v in basis.variances],
        "companions": [c.describe() for c in companions],
    }
    if len(vs) == len(z):
        check = vector_conjecture_check(vs, z)
        diagnostics["p1_parallel"] = check.parallel
    return _envelope(job, [x.describe() for x in basis.elements], diagnostics=diagnostics)


def cmd_verify(job: JobSpec) -> Dict:
    groups = list(VERIFY_FAMILIES) if job.suite == "all" else [job.suite]
    reports = []
    for group in groups:
        if group not in VERIFY_FAMILIES:
            raise ConstraintViolation(f"unknown suite '{group}' (choose all, {', '.join(VERIFY_FAMILIES)})")
        for name, params in VERIFY_FAMILIES[group]:
            args = [int(v) if name == "chebyshev_divided" else parse_number(v) for v in params]
            reports.append(identity_suite(FAMILIES[name](*args), min(job.degree, 5)))
    status = "pass" if all(r["status"] == "pass" for r in reports) else "fail"
    return _envelope(job, None, diagnostics={"status": status, "reports": reports})


def cmd_examples(job: JobSpec) -> Dict:
    results = run_cases()
    status = "pass" if all(r["status"] == "pass" for r in results) else "fail"
    return _envelope(job, None, diagnostics={"status": status, "cases": results})


HANDLERS = {
    "fit": cmd_fit,
    "basis": cmd_basis,
    "polyfam": cmd_polyfam,
    "odsolve": cmd_odsolve,
    "quad": cmd_quad,
    "bessel": cmd_bessel,
    "vectors": cmd_vectors,
    "verify": cmd_verify,
    "examples": cmd_examples,
}


def run(job: JobSpec) -> Dict:
    return HANDLERS[job.command](job)


# ---------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------
def _table(result: Dict) -> pd.DataFrame:
    rows = result["coefficients"]
    if rows and isinstance(rows[0], dict):
        return pd.DataFrame(rows)
    if rows:
        return pd.DataFrame({"index": range(len(rows)), "coefficient": rows})
    return pd.DataFrame([{"key": k, "value": json.dumps(v)} for k, v in result["diagnostics"].items()])


def render(result: Dict, fmt_name: str) -> str:
    if fmt_name == "csv":
        return _table(result).to_csv(index=False)
    return json.dumps(result, indent=2, default=str) + "\n"


def write_report(result: Dict, path: str) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(result, f, indent=2, default=str)
    return str(path)


# ---------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--weight", default="uniform", help=f"one of {', '.join(WEIGHTS)}")
    common.add_argument("--params", nargs="*", default=[], help="weight or family parameters")
    common.add_argument("--interval", nargs=2, metavar=("A", "B"), help="interval of the uniform weight")
    common.add_argument("--data", help="sample CSV with header x,y[,j][,z]")
    common.add_argument("--z", default="1", help="fixed variable expression, 'data' or 'ones'")
    common.add_argument("--p", default="1", help="p in [0, 1], e.g. 1/2")
    common.add_argument("--degree", type=int, default=2)
    common.add_argument("--target", help="target expression, e.g. 'sqrt(1-x)'")
    common.add_argument("--backend", default=get_settings().default_backend, choices=[RATIONAL, FLOAT])
    common.add_argument("--format", default="json", choices=["json", "csv"])
    common.add_argument("--out", help="write the rendered result here instead of stdout")
    common.add_argument("--report", help="also write the JSON artifact here")

    parser = argparse.ArgumentParser(prog="pvar", description="Least p-variance approximation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("fit", parents=[common], help="least p-variance polynomial fit")
    sub.add_parser("basis", parents=[common], help="p-uncorrelated polynomial basis")

    fam = sub.add_parser("polyfam", parents=[common], help="closed-form polynomial families")
    fam.add_argument("--family", required=True, choices=sorted(FAMILIES))
    fam.add_argument("--check", action="store_true", help="run the identity suite")

    od = sub.add_parser("odsolve", parents=[common], help="overdetermined linear systems")
    od.add_argument("--matrix", required=True)
    od.add_argument("--rhs", required=True)

    quad = sub.add_parser("quad", parents=[common], help="quadrature weights for p-variances")
    quad.add_argument("--nodes", nargs="+", required=True)

    bes = sub.add_parser("bessel", parents=[common], help="improved Bessel inequality")
    bes.add_argument("--family", default="sine", choices=["sine", "legendre"])

    vec = sub.add_parser("vectors", parents=[common], help="p-uncorrelated vectors")
    vec.add_argument("--vectors", required=True, help="rows separated by ';', entries by ','")
    vec.add_argument("--zvec", required=True)

    ver = sub.add_parser("verify", parents=[common], help="identity suites of the families")
    ver.add_argument("--suite", default="all", choices=["all"] + list(VERIFY_FAMILIES))

    sub.add_parser("examples", parents=[common], help="run every worked example")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = JobSpec(**{k: v for k, v in vars(args).items() if v is not None})
    except Exception as exc:  # pydantic.ValidationError
        print(f"[ERROR] invalid arguments: {exc}", file=sys.stderr)
        return 2

    try:
        result = run(job)
    except FileNotFoundError as exc:
        print(f"[ERROR] input file not found: {exc.filename}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"[ERROR] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"[ERROR] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    text = render(result, job.format)
    if job.out:
        Path(job.out).parent.mkdir(parents=True, exist_ok=True)
        Path(job.out).write_text(text)
    else:
        sys.stdout.write(text)
    if job.report:
        write_report(result, job.report)

    summary = {"command": job.command, "backend": job.backend, "p": job.p}
    status = result["diagnostics"].get("status")
    if status:
        summary["status"] = status
    append_run_log(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
