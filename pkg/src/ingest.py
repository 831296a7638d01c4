"""
ingest.py
---------
Input side of the CLI and the HTTP layer:

* sample CSV files (`x,y[,j][,z]`) into a discrete space plus tabulated
  target and fixed variable;
* plain numeric CSV files (matrices and vectors) for odsolve;
* the expression mini-language used by --target and --z:
  x^a, (1-x)^b, sqrt(.), exp(a*x), sin(a*x), cos(a*x), pi, numbers,
  sums, differences, products and division by constants.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from elements import Element, FunctionElement, Tabulated, TermSum, combine, constant, monomial, power_term, product
from errors import ConstraintViolation, DuplicateX, ParseError
from expectation import DiscreteSpace, discrete
from log_setup import get_logger
from scalar import FLOAT, RATIONAL, is_exact, is_integer, parse_number, power, to_backend

logger = get_logger("ingest")

SAMPLE_COLUMNS = ("x", "y", "j", "z")


# ---------------------------------------------------------------------
# CSV files
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class SampleSet:
    space: DiscreteSpace
    target: Tabulated
    z: Optional[Tabulated]
    backend: str

    def __len__(self):
        return len(self.space)


def _read_frame(path, header) -> pd.DataFrame:
    path = Path(path)
    try:
        return pd.read_csv(path, dtype=str, header=header, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as exc:
        raise ParseError(f"{path.name} is empty", line=1) from exc
    except pd.errors.ParserError as exc:
        raise ParseError(f"{path.name}: {exc}") from exc


def _cell(text: str, line: int, column: str):
    text = str(text).strip()
    if not text:
        raise ParseError(f"empty value in column '{column}'", line=line)
    try:
        return parse_number(text)
    except ConstraintViolation as exc:
        raise ParseError(f"cannot read '{text}' in column '{column}' as a number", line=line) from exc


def ingest_csv(path, backend: Optional[str] = None) -> SampleSet:
    """
    Read a sample file. Cells of the form p/q or short decimals stay exact;
    anything else (or backend='float') puts the whole set on floats.
    """
    frame = _read_frame(path, header=0)
    columns = [str(c).strip().lower() for c in frame.columns]
    if columns[:2] != ["x", "y"]:
        raise ParseError(f"header must start with x,y (got {','.join(columns)})", line=1)
    unknown = [c for c in columns if c not in SAMPLE_COLUMNS]
    if unknown or len(set(columns)) != len(columns):
        raise ParseError(f"unexpected header columns {unknown or columns}", line=1)
    if frame.empty:
        raise ParseError("no sample rows", line=2)
    frame.columns = columns

    rows = []
    seen = {}
    for idx, record in enumerate(frame.to_dict("records")):
        line = idx + 2
        row = {c: _cell(record[c], line, c) for c in columns}
        if "j" in row and not row["j"] > 0:
            raise ParseError(f"weight must be positive, got {record['j']}", line=line)
        if row["x"] in seen:
            raise DuplicateX(f"x = {record['x']} repeats line {seen[row['x']]}", line=line)
        seen[row["x"]] = line
        rows.append(row)

    values = [v for row in rows for v in row.values()]
    chosen = backend or (RATIONAL if all(is_exact(v) for v in values) else FLOAT)
    if chosen == FLOAT and backend is None:
        logger.debug(f"{Path(path).name}: inexact cells, switching the sample set to floats")
    rows = [{c: to_backend(v, chosen) for c, v in row.items()} for row in rows]

    space = discrete([r["x"] for r in rows], [r["j"] for r in rows] if "j" in columns else None)
    z = Tabulated(r["z"] for r in rows) if "z" in columns else None
    return SampleSet(space, Tabulated(r["y"] for r in rows), z, chosen)


def read_matrix_csv(path, backend: Optional[str] = None) -> List[List]:
    """Headerless numeric CSV, one matrix row per line."""
    frame = _read_frame(path, header=None)
    out = []
    for idx, record in enumerate(frame.itertuples(index=False)):
        out.append([_cell(v, idx + 1, str(k)) for k, v in enumerate(record)])
    if backend is None and not all(is_exact(v) for row in out for v in row):
        backend = FLOAT
    return [[to_backend(v, backend) for v in row] for row in out] if backend else out


def read_vector_csv(path, backend: Optional[str] = None) -> List:
    """A single row or a single column of numbers."""
    rows = read_matrix_csv(path, backend)
    if len(rows) == 1:
        return rows[0]
    if all(len(r) == 1 for r in rows):
        return [r[0] for r in rows]
    raise ParseError(f"{Path(path).name} is not a vector ({len(rows)} rows of width {len(rows[0])})")


# ---------------------------------------------------------------------
# Expression mini-language
# ---------------------------------------------------------------------
TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+)|([A-Za-z_]+)|(\*\*|[-+*/^(),]))")
FUNCTIONS = {"exp": np.exp, "sin": np.sin, "cos": np.cos}


def tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character '{text[pos]}' at position {pos} in '{text}'")
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", number))
        elif name is not None:
            tokens.append(("name", name.lower()))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


def _constant_value(e: Element):
    if isinstance(e, TermSum) and e.is_constant:
        return e.at(0)
    return None


def _linear_slope(e: Element):
    """a for a TermSum equal to a*x, else None."""
    if isinstance(e, TermSum) and len(e.terms) == 1:
        (lam, mu), c = e.terms[0]
        if lam == 1 and mu == 0:
            return c
    return None


def _raise(base: Element, exponent) -> Element:
    if is_exact(exponent) and is_integer(exponent) and exponent >= 0:
        out: Element = constant(Fraction(1))
        for _ in range(int(exponent)):
            out = product(out, base)
        return out
    if isinstance(base, TermSum):
        if base == TermSum([((0, 0), Fraction(1)), ((1, 0), Fraction(-1))]):
            return power_term(0, exponent)
        if len(base.terms) == 1:
            (lam, mu), c = base.terms[0]
            if c < 0:
                raise ParseError(f"negative base {base.describe()} raised to {exponent}")
            return power_term(lam * exponent, mu * exponent, power(c, exponent))
    raise ParseError(f"cannot raise {base.describe()} to the non-integer power {exponent}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected '{value or 'more input'}' in '{self.text}'")
        self.pos += 1
        return tok

    def parse(self) -> Element:
        e = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input '{self.tokens[self.pos][1]}' in '{self.text}'")
        return e

    def expr(self) -> Element:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            sign = 1 if self.take()[1] == "+" else -1
            e = combine([(1, e), (sign, self.term())])
        return e

    def term(self) -> Element:
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                e = product(e, rhs)
                continue
            c = _constant_value(rhs)
            if c is None or c == 0:
                raise ParseError(f"division is only allowed by nonzero constants in '{self.text}'")
            e = e.scaled(Fraction(1) / c if is_exact(c) else 1.0 / c)
        return e

    def unary(self) -> Element:
        if self.peek()[1] == "-":
            self.take()
            return self.unary().scaled(-1)
        if self.peek()[1] == "+":
            self.take()
        return self.power()

    def power(self) -> Element:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            exponent = _constant_value(self.unary())
            if exponent is None:
                raise ParseError(f"exponents must be constants in '{self.text}'")
            return _raise(base, exponent)
        return base

    def atom(self) -> Element:
        kind, value = self.take()
        if kind == "num":
            return constant(parse_number(value))
        if kind == "op" and value == "(":
            e = self.expr()
            self.take(")")
            return e
        if kind == "name":
            if value == "x":
                return monomial(1)
            if value == "pi":
                return constant(math.pi)
            if value in ("sqrt",) + tuple(FUNCTIONS):
                self.take("(")
                arg = self.expr()
                self.take(")")
                return self.function(value, arg)
        raise ParseError(f"unexpected '{value}' in '{self.text}'")

    def function(self, name: str, arg: Element) -> Element:
        if name == "sqrt":
            return _raise(arg, Fraction(1, 2))
        c = _constant_value(arg)
        if c is not None:
            return constant(float(FUNCTIONS[name](float(c))))
        a = _linear_slope(arg)
        if a is None:
            raise ParseError(f"{name}() takes a multiple of x, got {arg.describe()}")
        fn = FUNCTIONS[name]
        return FunctionElement(lambda t, a=float(a), fn=fn: fn(a * t), f"{name}({arg.describe()})")


def parse_expression(text: str) -> Element:
    """Parse a target or fixed-variable expression into an element."""
    if not text or not text.strip():
        raise ParseError("empty expression")
    return _Parser(text).parse()
