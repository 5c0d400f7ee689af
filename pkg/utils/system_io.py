"""
Plain-text system files.

    field 5                      (0 for Q, p, or "p ext t^2+t+1")
    vars x0 x1
    # method=lambda              (provenance, insertion order, unknown keys kept)
    # any other comment          (kept verbatim in place)
    affine                       (optional: polynomials need not be homogeneous)
    poly 1 x0^2 + -1 x1^2

A term is a coefficient followed by factors name^k; terms are joined by " + ".
Coefficients are integers, rationals a/b, or parenthesized extension elements.
"""

import re
import sys as _sys
from typing import Dict, List, Optional, Sequence, Tuple

from utils import univariate
from utils.field import FieldCtx, FieldElem, FieldError
from utils.poly import Poly, PolySystem, check_homogeneous


class SystemFormatError(ValueError):
    """Custom exception for malformed input files, with 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}" + (f", column {col}" if col else "")
        super().__init__(f"{where}: {message}" if line else message)


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


# Parsing

def _parse_field(rest: str, line_no: int) -> FieldCtx:
    parts = rest.split(None, 2)
    try:
        p = int(parts[0])
    except (IndexError, ValueError):
        raise SystemFormatError(f"bad field line {rest!r}", line_no, 7)
    try:
        if len(parts) == 1:
            return FieldCtx(p)
        if parts[1] != "ext" or len(parts) < 3:
            raise SystemFormatError(f"expected 'ext <modulus>' after the characteristic", line_no)
        modulus = univariate.parse_dense(parts[2].replace(" ", ""), p, "t")
        return FieldCtx(p, modulus)
    except (FieldError, univariate.UnivariateError) as e:
        raise SystemFormatError(f"bad field line: {e}", line_no)


def split_terms(body: str) -> List[Tuple[str, int]]:
    """Split on ' + ' outside parentheses; returns (term, 0-based offset) pairs."""
    terms = []
    depth = 0
    start = 0
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and body.startswith(" + ", i):
            terms.append((body[start:i], start))
            i += 3
            start = i
            continue
        i += 1
    terms.append((body[start:], start))
    return terms


def _parse_term(text: str, ctx: FieldCtx, index: Dict[str, int], line_no: int,
                col: int) -> Tuple[Tuple[int, ...], FieldElem]:
    text = text.strip()
    if text.startswith("("):
        close = text.find(")")
        if close < 0:
            raise SystemFormatError("unbalanced parenthesis", line_no, col)
        coeff_text, rest = text[:close + 1], text[close + 1:]
    else:
        pieces = text.split(None, 1)
        coeff_text, rest = pieces[0], (pieces[1] if len(pieces) > 1 else "")
    try:
        coeff = ctx.parse_element(coeff_text)
    except (FieldError, ZeroDivisionError, univariate.UnivariateError) as e:
        raise SystemFormatError(f"bad coefficient {coeff_text!r}: {e}", line_no, col)

    exps = [0] * len(index)
    for factor in rest.split():
        match = _FACTOR.match(factor)
        if not match:
            raise SystemFormatError(f"bad factor {factor!r}", line_no, col)
        name, power = match.group(1), int(match.group(2) or 1)
        if name not in index:
            raise SystemFormatError(f"unknown variable {name!r}", line_no, col)
        exps[index[name]] += power
    return tuple(exps), coeff


def parse_poly(body: str, ctx: FieldCtx, var_names: Sequence[str], line_no: int = 0,
               offset: int = 0) -> Poly:
    index = {name: i for i, name in enumerate(var_names)}
    body = body.strip()
    if body == "0":
        return Poly.zero(ctx, len(var_names))
    terms = [
        _parse_term(term, ctx, index, line_no, offset + start + 1)
        for term, start in split_terms(body)
    ]
    return Poly(ctx, len(var_names), terms)


def parse_system(text: str) -> PolySystem:
    """
    Parse a system file.

    Raises:
        SystemFormatError: syntax errors, unknown variables, bad field lines and
            non-homogeneous polynomials, each with its line number
    """
    ctx: Optional[FieldCtx] = None
    var_names: Optional[List[str]] = None
    metadata: Dict[str, str] = {}
    comments: List[Tuple[int, str]] = []
    homogeneous = True
    polys: List[Poly] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            entry = line[1:].strip()
            if "=" in entry:
                key, value = entry.split("=", 1)
                metadata[key.strip()] = value.strip()
            else:
                comments.append((len(metadata), line))
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "field":
            if ctx is not None:
                raise SystemFormatError("duplicate field line", line_no, 1)
            ctx = _parse_field(rest.strip(), line_no)
        elif keyword == "vars":
            if ctx is None:
                raise SystemFormatError("vars before field", line_no, 1)
            var_names = rest.split()
            if not var_names or len(set(var_names)) != len(var_names):
                raise SystemFormatError("vars needs distinct names", line_no, 6)
        elif keyword == "affine":
            homogeneous = False
        elif keyword == "poly":
            if var_names is None:
                raise SystemFormatError("poly before vars", line_no, 1)
            offset = raw.index("poly") + len("poly ")
            f = parse_poly(rest, ctx, var_names, line_no, offset)
            if homogeneous and check_homogeneous(f) is None:
                raise SystemFormatError("polynomial is not homogeneous", line_no, offset + 1)
            polys.append(f)
        else:
            raise SystemFormatError(f"unknown directive {keyword!r}", line_no, 1)

    if ctx is None or var_names is None:
        raise SystemFormatError("missing field or vars header")
    if not polys:
        raise SystemFormatError("no polynomials")
    return PolySystem(ctx, var_names, polys, metadata, homogeneous, comments)


# Emitting

def format_coefficient(coeff: FieldElem) -> str:
    if coeff.ctx.extension_modulus is not None:
        return f"({coeff})"
    return str(coeff)


def format_poly(f: Poly, var_names: Sequence[str]) -> str:
    """Canonical body: graded-lex terms, each 'coef name^k ...'."""
    if f.is_zero():
        return "0"
    terms = []
    for exps, coeff in f.sorted_terms():
        factors = [name if k == 1 else f"{name}^{k}" for name, k in zip(var_names, exps) if k]
        terms.append(" ".join([format_coefficient(coeff)] + factors))
    return " + ".join(terms)


def format_field(ctx: FieldCtx) -> str:
    if ctx.extension_modulus is None:
        return f"field {ctx.characteristic}"
    return f"field {ctx.characteristic} ext {univariate.format_dense(ctx.extension_modulus, 't')}"


def emit_system(sys: PolySystem) -> str:
    """Canonical text form; parse_system(emit_system(s)) == s."""
    if sys.ctx.extension_modulus is not None and sys.ctx.symbol != "t":
        sys = PolySystem(FieldCtx(sys.ctx.characteristic, sys.ctx.extension_modulus), sys.var_names,
                         [_rename(f, sys.ctx) for f in sys.polys], sys.metadata, sys.homogeneous,
                         sys.comments)
    lines = [format_field(sys.ctx), "vars " + " ".join(sys.var_names)]
    lines += _header_comments(sys)
    if not sys.homogeneous:
        lines.append("affine")
    lines += ["poly " + format_poly(f, sys.var_names) for f in sys.polys]
    return "\n".join(lines) + "\n"


def _header_comments(sys: PolySystem) -> List[str]:
    """Metadata lines with the plain comments put back where they were read."""
    lines = []
    pending = list(sys.comments)
    for index, (key, value) in enumerate(sys.metadata.items()):
        while pending and pending[0][0] <= index:
            lines.append(pending.pop(0)[1])
        lines.append(f"# {key}={value}")
    lines += [text for _, text in pending]
    return lines


def _rename(f: Poly, ctx: FieldCtx) -> Poly:
    plain = FieldCtx(ctx.characteristic, ctx.extension_modulus)
    return Poly(plain, f.num_vars, [(e, plain.element(c.value)) for e, c in f.terms.items()])


def read_text(path: str) -> str:
    """Contents of path, or of stdin for '-'."""
    if path == "-":
        return _sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def read_system(path: str) -> PolySystem:
    return parse_system(read_text(path))


def write_system(sys: PolySystem, path: Optional[str] = None) -> str:
    """Emit to path, or return the text when path is None or '-'."""
    text = emit_system(sys)
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text
