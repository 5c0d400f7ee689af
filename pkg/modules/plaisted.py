"""
Plaisted encoder: a 3-CNF formula becomes two sparse univariate integer
polynomials of high degree that share a root iff the formula is satisfiable,
then a pair of homogeneous bivariate forms.

Variable X_j gets a prime p_j and M = prod p_j. Literal polynomials are products
of cyclotomic polynomials Phi_d over explicit divisor sets of M, so a clause
(the lcm of its literals) is the product over the union of those sets.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from loguru import logger
from sympy import Poly as SymPoly, ZZ, cyclotomic_poly, divisors, prime, symbols

from config import Config
from models import CnfFormula
from modules.reductions import ReductionError
from utils.field import FieldCtx
from utils.poly import Poly, PolySystem

_X = symbols("x")


class DeskScaleExceededError(ReductionError):
    """Raised when M = prod p_j exceeds the configured modulus cap."""
    pass


@dataclass(frozen=True)
class SupersparsePoly:
    """Univariate integer polynomial stored as exponent -> nonzero coefficient."""
    terms: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in dict(self.terms).items():
            if e < 0:
                raise ReductionError(f"negative exponent {e}")
            if c:
                clean[int(e)] = int(c)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    @classmethod
    def from_sympy(cls, poly: SymPoly) -> "SupersparsePoly":
        return cls({monom[0]: int(coeff) for monom, coeff in poly.terms()})

    @classmethod
    def binomial(cls, exponent: int) -> "SupersparsePoly":
        """x^exponent - 1"""
        return cls({exponent: 1, 0: -1})

    def to_sympy(self) -> SymPoly:
        if not self.terms:
            return SymPoly(0, _X, domain=ZZ)
        return SymPoly.from_dict({(e,): c for e, c in self.terms.items()}, _X, domain=ZZ)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max(self.terms, default=0)

    def coefficients(self) -> List[int]:
        """Dense coefficient list, constant term first."""
        dense = [0] * (self.degree + 1)
        for e, c in self.terms.items():
            dense[e] = c
        return dense

    def evaluate(self, x):
        total = 0
        for e, c in self.terms.items():
            total += c * x ** e
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in sorted(self.terms.items()):
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if mono and abs(c) == 1:
                pieces.append(("-" if c < 0 else "+") + mono)
            else:
                pieces.append(f"{c:+d}{mono}")
        return "".join(pieces).lstrip("+")


def assign_primes(phi: CnfFormula) -> Dict[int, int]:
    """Successive primes 2, 3, 5, ... to the variables that occur, in index order."""
    return {var: prime(k) for k, var in enumerate(phi.occurring_vars(), start=1)}


def modulus(primes: Mapping[int, int], max_modulus: Optional[int] = None) -> int:
    """M = prod p_j, checked against the desk-scale cap."""
    cap = max_modulus if max_modulus is not None else Config().MAX_MODULUS
    m = 1
    for p in primes.values():
        m *= p
        if m > cap:
            raise DeskScaleExceededError(
                f"desk-scale exceeded: M = {'*'.join(str(q) for q in primes.values())} > {cap}"
            )
    return m


def literal_support(literal: int, primes: Mapping[int, int], m: int) -> Set[int]:
    """
    Divisors d of M with Phi_d dividing the literal polynomial.

    X_j is x^(M/p_j) - 1, i.e. every d | M/p_j; not X_k is (x^M - 1)/(x^(M/p_k) - 1),
    i.e. every d | M with d not dividing M/p_k.
    """
    var = abs(literal)
    if var not in primes:
        raise ReductionError(f"no prime assigned to X_{var}")
    cofactor = m // primes[var]
    if literal > 0:
        return set(divisors(cofactor))
    return {d for d in divisors(m) if cofactor % d}


def _product_of_cyclotomics(support: Iterable[int]) -> SymPoly:
    result = SymPoly(1, _X, domain=ZZ)
    for d in sorted(support):
        result = result * cyclotomic_poly(d, _X, polys=True)
    return result


def plaisted_clause_poly(literals: Sequence[int], primes: Mapping[int, int],
                         max_modulus: Optional[int] = None) -> SupersparsePoly:
    """
    Clause polynomial: the lcm of the literal polynomials.

    Args:
        literals: Up to three signed variable indices
        primes: Prime per formula variable
        max_modulus: Cap on M (Config default when None)

    Returns:
        Squarefree divisor of x^M - 1

    Raises:
        DeskScaleExceededError: M above the cap
    """
    if not literals or len(literals) > 3:
        raise ReductionError(f"a clause has one to three literals, got {literals}")
    if len(set(primes.values())) != len(primes):
        raise ReductionError(f"primes must be distinct, got {dict(primes)}")
    m = modulus(primes, max_modulus)
    support: Set[int] = set()
    for lit in literals:
        support |= literal_support(lit, primes, m)
    return SupersparsePoly.from_sympy(_product_of_cyclotomics(support))


def _reciprocal_shift(poly: SymPoly, m: int) -> SymPoly:
    """x^M * poly(1/x) for deg(poly) <= M."""
    coeffs = poly.all_coeffs()  # leading first
    reversed_poly = SymPoly(list(reversed(coeffs)), _X, domain=ZZ)
    return reversed_poly * SymPoly.from_dict({(m - poly.degree(),): 1}, _X, domain=ZZ)


def plaisted_conjunction(clause_polys: Sequence[SupersparsePoly], m: int,
                         max_modulus: Optional[int] = None) -> Tuple[SupersparsePoly, SupersparsePoly]:
    """
    Combine clause polynomials into P = sum_i x^M P_i(x) P_i(1/x).

    Over the reals each summand is |P_i|^2 on the unit circle, so P vanishes at an
    M-th root of unity iff every P_i does.

    Returns:
        (P, x^M - 1); exponents of P lie in [0, 2M]
    """
    cap = max_modulus if max_modulus is not None else Config().MAX_MODULUS
    if m > cap:
        raise DeskScaleExceededError(f"desk-scale exceeded: M = {m} > {cap}")
    x_m_minus_one = SupersparsePoly.binomial(m)
    modulus_poly = x_m_minus_one.to_sympy()

    total = SymPoly(0, _X, domain=ZZ)
    for index, clause in enumerate(clause_polys):
        p_i = clause.to_sympy()
        if p_i.is_zero or not modulus_poly.rem(p_i).is_zero:
            raise ReductionError(f"clause polynomial {index} ({clause}) does not divide x^{m}-1")
        total = total + p_i * _reciprocal_shift(p_i, m)

    logger.debug(f"Plaisted conjunction of {len(clause_polys)} clauses, M = {m}")
    return SupersparsePoly.from_sympy(total), x_m_minus_one


def _bivariate_form(poly: SupersparsePoly, ctx: FieldCtx) -> Poly:
    degree = poly.degree
    return Poly(ctx, 2, [((e, degree - e), c) for e, c in poly.terms.items()])


def plaisted_homogenize(pair: Tuple[SupersparsePoly, SupersparsePoly],
                        ctx: Optional[FieldCtx] = None) -> PolySystem:
    """
    Homogenize both polynomials with y: [hom(P), hom(x^M - 1)] over (x, y).

    Raises:
        ReductionError: ctx of positive characteristic
    """
    ctx = ctx or FieldCtx.rationals()
    if not ctx.is_rational:
        raise ReductionError(
            "the Plaisted encoding relies on sums of squares vanishing termwise; "
            f"it is only sound in characteristic 0, not over {ctx}"
        )
    polys = [_bivariate_form(f, ctx) for f in pair]
    return PolySystem(ctx, ("x", "y"), polys, {"method": "plaisted"})


def encode_plaisted(phi: CnfFormula, max_modulus: Optional[int] = None,
                    ctx: Optional[FieldCtx] = None) -> PolySystem:
    """
    Full Plaisted pipeline: primes, clause polynomials, conjunction, homogenization.

    Provenance records the primes and M.
    """
    if ctx is not None and not ctx.is_rational:
        raise ReductionError(f"the Plaisted encoding is only sound over Q, not {ctx}")
    primes = assign_primes(phi)
    m = modulus(primes, max_modulus)
    clause_polys = [plaisted_clause_poly(clause, primes, max_modulus) for clause in phi.clauses]
    pair = plaisted_conjunction(clause_polys, m, max_modulus)
    logger.info(f"🔍 Plaisted encoding: {len(phi.clauses)} clauses, M = {m}, deg P = {pair[0].degree}")
    system = plaisted_homogenize(pair)
    return system.with_metadata(
        primes=",".join(f"X{var}:{p}" for var, p in primes.items()),
        M=m,
    )


def spurious_example_system() -> PolySystem:
    """
    The repeated-squaring rewrite of the worked Plaisted example.

    Variable x_k stands for x^k, introduced through homogenized rewrite rules
    x_0 x_k - (product of earlier powers). The system has roots with x_0 = 0 that
    the univariate pair does not have, e.g. x_8 = x_9 != 0 with every other
    coordinate 0.
    """
    ctx = FieldCtx.rationals()
    names = ["x", "x0"] + [f"x{k}" for k in range(2, 10)]
    idx = {name: i for i, name in enumerate(names)}
    v = {name: Poly.variable(ctx, len(names), i) for name, i in idx.items()}

    polys = [
        -v["x3"] + v["x4"] + v["x5"] * 2 + v["x6"] * 9 + v["x7"] * 2 + v["x8"] - v["x9"],
        v["x6"] - v["x0"],
        v["x0"] * v["x2"] - v["x"] ** 2,
        v["x0"] * v["x3"] - v["x2"] * v["x"],
        v["x0"] * v["x4"] - v["x2"] ** 2,
        v["x0"] * v["x5"] - v["x4"] * v["x"],
        v["x0"] * v["x6"] - v["x2"] * v["x4"],
        v["x0"] * v["x7"] - v["x4"] * v["x3"],
        v["x0"] * v["x8"] - v["x4"] ** 2,
        v["x0"] * v["x9"] - v["x8"] * v["x"],
    ]
    return PolySystem(ctx, names, polys, {"method": "plaisted-squared"})
