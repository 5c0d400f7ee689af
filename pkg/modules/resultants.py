"""
Resultant zero-tests: the Sylvester determinant for two binary forms and the
Macaulay matrix quotient for square systems in any number of variables.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from config import Config
from models import Verdict
from modules.verification import BudgetExceededError, VerificationError
from utils.field import FieldElem
from utils.linalg import bareiss_determinant, submatrix
from utils.poly import Poly, PolySystem, check_homogeneous

Monomial = Tuple[int, ...]


# Sylvester

def _binary_form_coefficients(f: Poly) -> List[FieldElem]:
    """[a_0..a_d] for f = sum a_i x^(d-i) y^i."""
    if f.num_vars != 2:
        raise VerificationError(f"expected a bivariate form, got {f.num_vars} variables")
    if f.is_zero():
        raise VerificationError("the resultant of a zero polynomial is undefined")
    d = check_homogeneous(f)
    if d is None:
        raise VerificationError("expected a homogeneous form")
    if d < 1:
        raise VerificationError("forms must have degree >= 1")
    return [f.coefficient((d - i, i)) for i in range(d + 1)]


def sylvester_matrix(f: Poly, g: Poly) -> List[List[FieldElem]]:
    """
    (d+e) x (d+e) matrix: e shifted rows of f's coefficients, then d of g's.

    Built from the full coefficient vectors, so a common root at infinity (y-axis)
    still makes the determinant vanish.
    """
    a = _binary_form_coefficients(f)
    b = _binary_form_coefficients(g)
    d, e = len(a) - 1, len(b) - 1
    size = d + e
    zero = f.ctx.zero()
    rows = []
    for shift in range(e):
        rows.append([zero] * shift + a + [zero] * (size - d - 1 - shift))
    for shift in range(d):
        rows.append([zero] * shift + b + [zero] * (size - e - 1 - shift))
    return rows


def sylvester_resultant(f: Poly, g: Poly, config: Optional[Config] = None) -> FieldElem:
    """
    Resultant of two binary forms.

    Returns:
        Zero iff f and g share a nontrivial projective root over the closure

    Raises:
        VerificationError: zero, non-homogeneous or constant input
        BudgetExceededError: d + e above MAX_SYLVESTER_DEGREE
    """
    config = config or Config()
    if f.ctx != g.ctx:
        raise VerificationError(f"forms over different fields: {f.ctx} and {g.ctx}")
    size = f.total_degree() + g.total_degree()
    if size > config.MAX_SYLVESTER_DEGREE:
        raise BudgetExceededError(f"Sylvester matrix of size {size} exceeds {config.MAX_SYLVESTER_DEGREE}")
    matrix = sylvester_matrix(f, g)
    logger.debug(f"Sylvester determinant of size {len(matrix)} over {f.ctx}")
    return bareiss_determinant(matrix, f.ctx)


def sylvester_zero_test(sys: PolySystem, config: Optional[Config] = None) -> Verdict:
    """Verdict for a system of two binary forms."""
    if sys.num_vars != 2 or sys.num_polys != 2:
        raise VerificationError("the Sylvester test needs two forms in two variables")
    f, g = sys.polys
    if f.is_zero() or g.is_zero():
        other = g if f.is_zero() else f
        if not other.is_zero() and other.total_degree() == 0:
            return Verdict.unsatisfiable("a nonzero constant polynomial has no roots")
        return Verdict.certified_satisfiable("dimension", "a zero form leaves one binary form, which has a root")
    res = sylvester_resultant(sys.polys[0], sys.polys[1], config)
    if res.is_zero():
        return Verdict.certified_satisfiable("resultant", "Sylvester resultant vanishes", resultant="0")
    return Verdict.unsatisfiable("Sylvester resultant is nonzero", resultant=str(res))


# Macaulay

def monomials_of_degree(num_vars: int, degree: int) -> List[Monomial]:
    """All exponent vectors of the given total degree, in descending lex order."""
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        exps = [0] * num_vars
        for var in combo:
            exps[var] += 1
        out.append(tuple(exps))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class MacaulayMatrix:
    """
    Macaulay matrix of a square system at the critical degree D = 1 + sum(d_i - 1).

    Rows and columns are both indexed by the degree-D monomials; the row of x^a is
    (x^a / x_i^(d_i)) f_i for the least i with x_i^(d_i) dividing x^a.
    denominator_indices are the non-reduced monomials (divisible by x_i^(d_i) for
    at least two i), whose square submatrix is the denominator minor.
    """
    critical_degree: int
    monomials: Tuple[Monomial, ...]
    row_sources: Tuple[int, ...]
    entries: Tuple[Tuple[FieldElem, ...], ...]
    denominator_indices: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.monomials)

    def denominator_minor(self) -> List[List[FieldElem]]:
        idx = list(self.denominator_indices)
        return submatrix(self.entries, idx, idx)


def build_macaulay_matrix(sys: PolySystem, config: Optional[Config] = None) -> MacaulayMatrix:
    """
    Raises:
        VerificationError: non-square system, or a zero or constant polynomial
        BudgetExceededError: more than MAX_COLUMNS degree-D monomials
    """
    config = config or Config()
    if not sys.is_square:
        raise VerificationError(
            f"Macaulay matrices need a square system, got {sys.num_polys} polynomials in {sys.num_vars} variables"
        )
    if not sys.homogeneous:
        raise VerificationError("Macaulay matrices need homogeneous polynomials")
    for index, (f, d) in enumerate(zip(sys.polys, sys.degrees)):
        if f.is_zero() or d < 1:
            raise VerificationError(f"polynomial {index} is zero or constant")

    degrees = sys.degrees
    num_vars = sys.num_vars
    critical = 1 + sum(d - 1 for d in degrees)
    columns = comb(critical + num_vars - 1, num_vars - 1)
    if columns > config.MAX_COLUMNS:
        raise BudgetExceededError(f"Macaulay matrix needs {columns} columns, budget is {config.MAX_COLUMNS}")

    monomials = monomials_of_degree(num_vars, critical)
    column: Dict[Monomial, int] = {mono: j for j, mono in enumerate(monomials)}
    zero = sys.ctx.zero()

    rows = []
    sources = []
    reduced_flags = []
    for mono in monomials:
        divisible = [i for i in range(num_vars) if mono[i] >= degrees[i]]
        i = divisible[0]
        shift = list(mono)
        shift[i] -= degrees[i]
        row = [zero] * len(monomials)
        for exps, coeff in sys.polys[i].terms.items():
            target = tuple(s + e for s, e in zip(shift, exps))
            row[column[target]] = coeff
        rows.append(tuple(row))
        sources.append(i)
        reduced_flags.append(len(divisible) < 2)

    denominator = tuple(j for j, reduced in enumerate(reduced_flags) if not reduced)
    logger.debug(f"Macaulay matrix at D = {critical}: {len(monomials)} columns, "
                 f"denominator minor of size {len(denominator)}")
    return MacaulayMatrix(critical, tuple(monomials), tuple(sources), tuple(rows), denominator)


def macaulay_zero_test(sys: PolySystem, config: Optional[Config] = None) -> Verdict:
    """
    Resultant zero-test through det(M) = Res * det(M').

    det(M') != 0: Res = det(M) / det(M'), Unsatisfiable iff nonzero.
    det(M') = 0, det(M) != 0: Unsatisfiable, since Res divides det(M).
    Both zero: Indeterminate.
    """
    matrix = build_macaulay_matrix(sys, config)
    det_m = bareiss_determinant(matrix.entries, sys.ctx)
    det_minor = bareiss_determinant(matrix.denominator_minor(), sys.ctx)
    details = {"critical_degree": str(matrix.critical_degree), "columns": str(matrix.size)}

    if not det_minor.is_zero():
        res = det_m / det_minor
        if res.is_zero():
            return Verdict.certified_satisfiable("resultant", "Macaulay resultant vanishes", resultant="0", **details)
        return Verdict.unsatisfiable("Macaulay resultant is nonzero", resultant=str(res), **details)
    if not det_m.is_zero():
        return Verdict.unsatisfiable("det(M) is nonzero and the resultant divides it", **details)
    return Verdict.indeterminate("det(M) and the denominator minor both vanish", **details)
