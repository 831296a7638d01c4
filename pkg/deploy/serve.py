#!/usr/bin/env python3
"""
pvar API Server
FastAPI service for least p-variance fitting, overdetermined systems and
closed-form polynomial families.
"""

import sys
from pathlib import Path
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

# Add src to path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "src"))

from approx import fit  # noqa: E402
from elements import monomials  # noqa: E402
from errors import NumericalError, ValidationError  # noqa: E402
from expectation import uniform  # noqa: E402
from ingest import parse_expression  # noqa: E402
from odsolve import ls_solve, objectives, overdetermined_problem, pv_solve  # noqa: E402
from pcov import pcov_op  # noqa: E402
from polyfam import FAMILIES, family_norm, family_poly, identity_suite  # noqa: E402
from scalar import fmt, parse_number  # noqa: E402

VERSION = "1.0"

app = FastAPI(
    title="pvar",
    description="Least p-variance approximation toolkit",
    version=VERSION,
)


# Request models
class FitRequest(BaseModel):
    target: str
    z: str = "1"
    p: str = "1"
    degree: int = Field(2, ge=0, le=12)
    interval: List[str] = ["0", "1"]


class OdsolveRequest(BaseModel):
    matrix: List[List[str]]
    rhs: List[str]
    z: Optional[List[str]] = None
    p: str = "1"


class FamilyRequest(BaseModel):
    family: str
    params: List[str] = []
    degree: int = Field(3, ge=0, le=12)
    check: bool = False


def _call(fn):
    """Run a library call, mapping input errors to 422 and numerical ones to 500."""
    try:
        return fn()
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=f"{type(e).__name__}: {e}")
    except NumericalError as e:
        raise HTTPException(status_code=500, detail=f"{type(e).__name__}: {e}")


@app.get('/health')
def health():
    """Health check endpoint"""
    return {
        'status': 'ok',
        'families': sorted(FAMILIES),
        'version': VERSION
    }


@app.post('/fit')
def fit_endpoint(req: FitRequest):
    """
    Least p-variance polynomial fit on a uniform weight.

    Returns:
        - coefficients: ascending, exact where possible
        - residual_var_p / residual_ls: residual functionals
    """
    def work():
        lo, hi = (parse_number(v) for v in req.interval)
        op = pcov_op(uniform(lo, hi), parse_expression(req.z), parse_number(req.p))
        result = fit(op, monomials(req.degree), parse_expression(req.target))
        return {'request': req.model_dump(), **result.to_dict()}

    return _call(work)


@app.post('/odsolve')
def odsolve_endpoint(req: OdsolveRequest):
    """Least squares and least p-variance solutions of an overdetermined system."""
    def work():
        a = [[parse_number(v) for v in row] for row in req.matrix]
        b = [parse_number(v) for v in req.rhs]
        z = None if req.z is None else [parse_number(v) for v in req.z]
        prob = overdetermined_problem(a, b, z, parse_number(req.p))
        ls, pv = ls_solve(prob), pv_solve(prob)
        return {
            'ls_solution': [fmt(v) for v in ls],
            'pv_solution': [fmt(v) for v in pv],
            'ls_objectives': [fmt(v) for v in objectives(prob, ls)],
            'pv_objectives': [fmt(v) for v in objectives(prob, pv)],
        }

    return _call(work)


@app.post('/polyfam')
def polyfam_endpoint(req: FamilyRequest):
    """Members and norms of a closed-form family, optionally with its identity checks."""
    if req.family not in FAMILIES:
        raise HTTPException(status_code=422, detail=f"unknown family '{req.family}'")

    def work():
        args = [int(v) if req.family == "chebyshev_divided" else parse_number(v) for v in req.params]
        d = FAMILIES[req.family](*args)
        members = [
            {'n': n, 'element': family_poly(d, n).describe(), 'var_1': fmt(family_norm(d, n))}
            for n in range(req.degree + 1)
        ]
        out = {'family': d.describe(), 'members': members}
        if req.check:
            out['identities'] = identity_suite(d, min(req.degree, 5))
        return out

    return _call(work)


@app.get('/')
def root():
    """Root endpoint with API information"""
    return {
        'name': 'pvar API',
        'version': VERSION,
        'endpoints': {
            '/health': 'Health check',
            '/fit': 'POST - Least p-variance polynomial fit',
            '/odsolve': 'POST - Overdetermined linear system',
            '/polyfam': 'POST - Closed-form polynomial family',
            '/docs': 'API documentation (Swagger UI)',
            '/redoc': 'API documentation (ReDoc)'
        }
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
