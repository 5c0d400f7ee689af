"""
Readers for the combinatorial input formats: DIMACS CNF, Boolsys listings and
Partition weight lists.
"""

import re
from typing import List

from models import BoolsysInstance, CnfFormula, Disjunction, Equation, IsTrue, ModelError, Negation, PartitionInstance
from utils.system_io import SystemFormatError

_VAR = re.compile(r"^X(\d+)$")


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # '%' ends the data, as in the SATLIB benchmark files
        if line.startswith("%"):
            return
        if line and not line.startswith(("c", "#")):
            yield line_no, line


def parse_dimacs(text: str) -> CnfFormula:
    """
    DIMACS CNF: 'p cnf V C' then clauses terminated by 0 (possibly spanning lines).
    """
    num_vars = None
    clauses: List[tuple] = []
    current: List[int] = []
    for line_no, line in _content_lines(text):
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise SystemFormatError(f"bad problem line {line!r}", line_no, 1)
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise SystemFormatError("clause before the 'p cnf' line", line_no, 1)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise SystemFormatError(f"bad literal {token!r}", line_no, line.index(token) + 1)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise SystemFormatError("missing 'p cnf' line")
    try:
        return CnfFormula(num_vars, tuple(clauses))
    except ModelError as e:
        raise SystemFormatError(str(e))


def _var_index(token: str, line_no: int, line: str) -> int:
    match = _VAR.match(token)
    if not match:
        raise SystemFormatError(f"expected a variable X<i>, got {token!r}", line_no, line.find(token) + 1)
    return int(match.group(1))


def parse_boolsys(text: str) -> BoolsysInstance:
    """
    'boolsys N' header, then one equation per line:
    'Xi = true', 'Xi = not Xj' or 'Xi = or Xj Xk'.
    """
    num_vars = None
    equations: List[Equation] = []
    for line_no, line in _content_lines(text):
        tokens = line.split()
        if tokens[0] == "boolsys":
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise SystemFormatError("header must be 'boolsys N'", line_no, 1)
            num_vars = int(tokens[1])
            continue
        if num_vars is None:
            raise SystemFormatError("equation before the 'boolsys N' header", line_no, 1)
        if len(tokens) < 3 or tokens[1] != "=":
            raise SystemFormatError(f"bad equation {line!r}", line_no, 1)
        i = _var_index(tokens[0], line_no, line)
        rhs = tokens[2:]
        if rhs == ["true"]:
            equations.append(IsTrue(i))
        elif rhs[0] == "not" and len(rhs) == 2:
            equations.append(Negation(i, _var_index(rhs[1], line_no, line)))
        elif rhs[0] == "or" and len(rhs) == 3:
            equations.append(Disjunction(i, _var_index(rhs[1], line_no, line), _var_index(rhs[2], line_no, line)))
        else:
            raise SystemFormatError(f"bad right-hand side {' '.join(rhs)!r}", line_no, line.index("=") + 2)
    if num_vars is None:
        raise SystemFormatError("missing 'boolsys N' header")
    try:
        return BoolsysInstance(num_vars, tuple(equations))
    except ModelError as e:
        raise SystemFormatError(str(e))


def format_boolsys(inst: BoolsysInstance) -> str:
    lines = [f"boolsys {inst.num_vars}"]
    for eq in inst.equations:
        if isinstance(eq, IsTrue):
            lines.append(f"X{eq.i} = true")
        elif isinstance(eq, Negation):
            lines.append(f"X{eq.i} = not X{eq.j}")
        else:
            lines.append(f"X{eq.i} = or X{eq.j} X{eq.k}")
    return "\n".join(lines) + "\n"


def parse_partition(text: str) -> PartitionInstance:
    """Whitespace-separated non-negative integers."""
    weights = []
    for line_no, line in _content_lines(text):
        for token in line.split():
            if not token.isdigit():
                raise SystemFormatError(f"bad weight {token!r}", line_no, line.index(token) + 1)
            weights.append(int(token))
    try:
        return PartitionInstance(tuple(weights))
    except ModelError as e:
        raise SystemFormatError(str(e))
