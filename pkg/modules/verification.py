"""
Verification module: satisfiability oracles over the algebraic closure.

Finite-field systems are decided by enumerating projective points over
F_{p^k}; gadget-shaped systems (from the Boolsys and Partition encoders and the
deterministic squarings) by enumerating sign patterns and back-solving the chain.
"""

from concurrent.futures import ProcessPoolExecutor
from itertools import product
from math import prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from config import Config
from models import EpsilonVector, Verdict, Witness
from modules.squaring import SquaringError, check_gadget_shape, structured_epsilons
from utils.field import FieldCtx, FieldElem
from utils.poly import Poly, PolySystem, poly_eval

Point = Tuple[FieldElem, ...]

PLAIN_SHAPES = ("boolsys", "partition", "partition-bounded")
CHAIN_SHAPES = ("lambda", "ground")


class VerificationError(ValueError):
    """Custom exception for oracle preconditions (wrong field, unrecognized shape)."""
    pass


class BudgetExceededError(VerificationError):
    """Raised instead of silently truncating an enumeration."""
    pass


# Witness checking

def checked_witness(sys: PolySystem, witness: Witness) -> Witness:
    """
    Re-evaluate every polynomial at the witness.

    Raises:
        VerificationError: some polynomial does not vanish, or the point is trivial
    """
    if all(v.is_zero() for v in witness.point):
        raise VerificationError("the trivial point is not a witness")
    for index, f in enumerate(sys.polys):
        if not f.eval_powers(witness.point, witness.powers).is_zero():
            raise VerificationError(f"witness does not annihilate polynomial {index}")
    return witness


# Enumeration

def search_field(ctx: FieldCtx, k: int) -> FieldCtx:
    """F_{p^k} for a prime-field system; an extension-field system only searches itself."""
    if ctx.is_rational:
        raise VerificationError("the algebraic closure of Q cannot be enumerated")
    if ctx.is_prime_field:
        return FieldCtx.extension(ctx.characteristic, k)
    if k != 1:
        raise VerificationError(f"towers over {ctx} are not supported; only k = 1")
    return ctx


def projective_point_count(q: int, num_vars: int) -> int:
    """(q^(n+1) - 1) / (q - 1)"""
    return (q ** num_vars - 1) // (q - 1)


def _scan(polys: Sequence[Poly], field: FieldCtx, num_vars: int, lead: int,
          first: Optional[FieldElem], limit: Optional[int]) -> List[Point]:
    """Points with zeros before lead, 1 at lead and (optionally) a fixed next coordinate."""
    zero, one = field.zero(), field.one()
    elements = list(field.elements())
    prefix = [zero] * lead + [one]
    free = num_vars - lead - 1
    if first is not None:
        prefix.append(first)
        free -= 1
    found: List[Point] = []
    for tail in product(elements, repeat=free):
        point = tuple(prefix) + tail
        if all(poly_eval(f, point).is_zero() for f in polys):
            found.append(point)
            if limit is not None and len(found) >= limit:
                break
    return found


def _scan_task(args) -> List[Point]:
    return _scan(*args)


def _tasks(polys: Sequence[Poly], field: FieldCtx, num_vars: int,
           limit: Optional[int]) -> List[tuple]:
    tasks = []
    for lead in range(num_vars):
        if lead + 1 < num_vars:
            for value in field.elements():
                tasks.append((polys, field, num_vars, lead, value, limit))
        else:
            tasks.append((polys, field, num_vars, lead, None, limit))
    return tasks


def enumerate_projective_roots(sys: PolySystem, k: int = 1, config: Optional[Config] = None,
                               limit: Optional[int] = None) -> List[Point]:
    """
    All projective roots over F_{p^k}, normalized to first nonzero coordinate 1.

    The candidate space is split by leading position and next coordinate; with
    ENUMERATION_WORKERS > 1 the chunks run in worker processes and are merged in
    task order, so the result does not depend on scheduling.

    Args:
        sys: Homogeneous system over F_p (or over an extension with k = 1)
        k: Extension degree of the search field
        config: Budget and worker settings
        limit: Stop after this many roots (sequential scan only)

    Raises:
        BudgetExceededError: more candidates than MAX_CANDIDATES
    """
    config = config or Config()
    if not sys.homogeneous:
        raise VerificationError("projective enumeration needs a homogeneous system")
    field = search_field(sys.ctx, k)
    count = projective_point_count(field.order, sys.num_vars)
    if count > config.MAX_CANDIDATES:
        raise BudgetExceededError(
            f"{count} projective points over {field} exceed the budget of {config.MAX_CANDIDATES}"
        )
    polys = [f.with_context(field) for f in sys.polys]
    tasks = _tasks(polys, field, sys.num_vars, limit)
    logger.debug(f"Enumerating {count} points over {field} in {len(tasks)} chunks")

    if config.is_parallel and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.ENUMERATION_WORKERS) as pool:
            chunks = list(pool.map(_scan_task, tasks))
        roots = [point for chunk in chunks for point in chunk]
    else:
        roots = []
        for task in tasks:
            roots.extend(_scan(*task))
            if limit is not None and len(roots) >= limit:
                break
    return roots[:limit] if limit is not None else roots


def enumerate_affine_roots(sys: PolySystem, k: int = 1, config: Optional[Config] = None) -> List[Point]:
    """Every point of F_{p^k}^N (the origin included) where all polynomials vanish."""
    config = config or Config()
    field = search_field(sys.ctx, k)
    count = field.order ** sys.num_vars
    if count > config.MAX_CANDIDATES:
        raise BudgetExceededError(f"{count} affine points over {field} exceed the budget")
    polys = [f.with_context(field) for f in sys.polys]
    elements = list(field.elements())
    return [
        point for point in product(elements, repeat=sys.num_vars)
        if all(poly_eval(f, point).is_zero() for f in polys)
    ]


# Closure search

def _bezout_bound(degrees: Sequence[int], dim: int) -> int:
    """Product of the dim largest degrees: bounds the degree of a finite zero set in P^dim."""
    return prod(sorted(degrees, reverse=True)[:dim])


def _drop_first_variable(f: Poly) -> Poly:
    """Restrict to x_0 = 0 and forget x_0."""
    terms = [(e[1:], c) for e, c in f.terms.items() if e[0] == 0]
    return Poly(f.ctx, f.num_vars - 1, terms)


def _nonconstant(polys: Sequence[Poly]) -> Tuple[List[Poly], bool]:
    """Nonzero polynomials, and whether one of them is a nonzero constant."""
    nonzero = [f for f in polys if not f.is_zero()]
    return nonzero, any(f.total_degree() == 0 for f in nonzero)


def _first_root(polys: Sequence[Poly], ctx: FieldCtx, num_vars: int, k: int,
                config: Config) -> Tuple[Optional[Point], bool]:
    """(root or None, whether the search fitted the budget)."""
    field = search_field(ctx, k)
    if projective_point_count(field.order, num_vars) > config.MAX_CANDIDATES:
        return None, False
    subsystem = PolySystem(ctx, [f"v{i}" for i in range(num_vars)], polys)
    roots = enumerate_projective_roots(subsystem, k, config, limit=1)
    return (roots[0] if roots else None), True


def _certify_empty(polys: Sequence[Poly], ctx: FieldCtx, num_vars: int, config: Config) -> bool:
    """
    Prove the projective zero set of polys in P^(num_vars-1) is empty.

    The set is empty iff no point of residue degree <= B exists and its section by
    x_0 = 0 is empty: a nonempty set missing a hyperplane is finite of degree <= B.
    """
    if num_vars == 0:
        return True
    nonzero, has_constant = _nonconstant(polys)
    if has_constant:
        return True
    if num_vars == 1:
        return bool(nonzero)
    dim = num_vars - 1
    if len(nonzero) < dim + 1:
        return False
    bound = _bezout_bound([f.total_degree() for f in nonzero], dim)
    if bound > config.K_MAX:
        return False
    for k in range(1, bound + 1):
        root, searched = _first_root(nonzero, ctx, num_vars, k, config)
        if root is not None or not searched:
            return False
    section = [_drop_first_variable(f) for f in nonzero]
    return _certify_empty(section, ctx, num_vars - 1, config)


def closure_satisfiable(sys: PolySystem, config: Optional[Config] = None) -> Verdict:
    """
    Decide nontrivial-root existence over the algebraic closure of F_p.

    Searches F_{p^k} for k = 1..K_MAX. Unsatisfiable is reported only when every
    k up to the Bezout bound came back empty and the hyperplane sections are
    recursively certified empty; otherwise the verdict is Indeterminate.
    """
    config = config or Config()
    if sys.ctx.is_rational:
        raise VerificationError(
            "closure search needs a finite field; use the structured or macaulay oracle over Q"
        )
    if not sys.homogeneous:
        raise VerificationError("closure search needs a homogeneous system")

    nonzero, has_constant = _nonconstant(sys.polys)
    if has_constant:
        return Verdict.unsatisfiable("a nonzero constant polynomial has no roots")

    certifiable = sys.ctx.is_prime_field and len(nonzero) > sys.n
    bound = _bezout_bound([f.total_degree() for f in nonzero], sys.n)
    section_empty = None

    k_max = config.K_MAX if sys.ctx.is_prime_field else 1
    searched = 0
    for k in range(1, k_max + 1):
        root, fitted = _first_root(list(sys.polys), sys.ctx, sys.num_vars, k, config)
        if not fitted:
            logger.warning(f"Enumeration budget exhausted at k = {k}")
            break
        if root is not None:
            logger.debug(f"Root found over F_{sys.ctx.characteristic}^{k * sys.ctx.degree}")
            return Verdict.satisfiable(checked_witness(sys, Witness.plain(root)), reason=f"root over k = {k}")
        searched = k
        if certifiable and k == bound:
            section = [_drop_first_variable(f) for f in nonzero]
            section_empty = _certify_empty(section, sys.ctx, sys.num_vars - 1, config)
            if section_empty:
                return Verdict.unsatisfiable(
                    f"no root of degree <= {bound} and the x0 = 0 section is empty",
                    bezout=str(bound), searched=str(searched),
                )

    if len(nonzero) <= sys.n:
        return Verdict.certified_satisfiable(
            "dimension",
            f"{len(nonzero)} forms in P^{sys.n} always share a root over the closure",
        )
    if not sys.ctx.is_prime_field:
        return Verdict.indeterminate(f"no root over {sys.ctx}; towers are not searched", searched=str(searched))
    if section_empty is False:
        return Verdict.indeterminate(
            "the x0 = 0 section could not be certified empty",
            bezout=str(bound), searched=str(searched),
        )
    return Verdict.indeterminate(
        f"searched k <= {searched}, Bezout bound {bound} not reached",
        bezout=str(bound), searched=str(searched),
    )


# Structured sign oracle

def sign_patterns(n: int, ctx: FieldCtx) -> Iterator[Tuple[FieldElem, ...]]:
    """
    Candidate x-assignments with a_0 = 1: a_i in {1, -1}, or {0, 1} in characteristic 2.
    Any nontrivial root scales to one of these.
    """
    one = ctx.one()
    choices = (ctx.zero(), one) if ctx.characteristic == 2 else (one, -one)
    for tail in product(choices, repeat=n):
        yield (one,) + tail


def chain_solution(eps: EpsilonVector, lam: FieldElem) -> Optional[List[FieldElem]]:
    """
    Back-solve Y_{m-1} = eps_m, Y_{i-1} = eps_i + lambda Y_i.

    Returns:
        [Y_1..Y_{m-1}] when the first row eps_1 + lambda Y_1 vanishes, else None
    """
    ctx = lam.ctx
    values = [ctx.element(e) for e in eps.values]
    m = len(values)
    if m == 1:
        return [] if values[0].is_zero() else None
    ys = [ctx.zero()] * m  # ys[i] = Y_i, index 0 unused
    ys[m - 1] = values[m - 1]
    for i in range(m - 1, 1, -1):
        ys[i - 1] = values[i - 1] + lam * ys[i]
    if not (values[0] + lam * ys[1]).is_zero():
        return None
    return ys[1:]


def _solve_linear_row(f: Poly, values: Dict[int, FieldElem], ctx: FieldCtx) -> Optional[Tuple[int, FieldElem]]:
    """If f is linear in exactly one unassigned variable, that variable and its value."""
    unknown = None
    coeff = ctx.zero()
    const = ctx.zero()
    for exps, c in f.terms.items():
        term = ctx.element(c)
        free = None
        for var, e in enumerate(exps):
            if not e:
                continue
            if var in values:
                term = term * values[var] ** e
            elif e == 1 and free is None:
                free = var
            else:
                return None
        if free is None:
            const = const + term
        elif unknown in (None, free):
            unknown = free
            coeff = coeff + term
        else:
            return None
    if unknown is None or coeff.is_zero():
        return None
    return unknown, -const / coeff


def _propagate(sys: PolySystem, values: Dict[int, FieldElem], ctx: FieldCtx) -> Dict[int, FieldElem]:
    """Fill variables pinned by rows linear in a single unknown (the bounded Partition chain)."""
    values = dict(values)
    progress = True
    while progress and len(values) < sys.num_vars:
        progress = False
        for f in sys.polys:
            solved = _solve_linear_row(f, values, ctx)
            if solved is not None:
                values[solved[0]] = solved[1]
                progress = True
    return values


def _plain_oracle(sys: PolySystem, n: int, ctx: FieldCtx) -> Verdict:
    for a in sign_patterns(n, ctx):
        values = _propagate(sys, dict(enumerate(a)), ctx)
        if len(values) < sys.num_vars:
            raise VerificationError("extra variables are not determined by the sign pattern")
        point = tuple(values[i] for i in range(sys.num_vars))
        if all(poly_eval(f, point).is_zero() for f in sys.polys):
            return Verdict.satisfiable(checked_witness(sys, Witness.plain(point)), reason="sign pattern")
    return Verdict.unsatisfiable(f"none of the {2 ** n} sign patterns is a root")


def _ground_context(sys: PolySystem, n: int, m: int) -> FieldCtx:
    """F_p[X]/(P) read off the last row P(lambda, x_0)."""
    last = sys.polys[-1]
    lam_index = sys.num_vars - 1
    coeffs = [0] * (m + 1)
    for exps, c in last.terms.items():
        if any(e for var, e in enumerate(exps) if var not in (0, lam_index)):
            raise VerificationError("last row of a ground-field system must be P(lambda, x0)")
        coeffs[exps[lam_index]] = c.as_integer()
    return FieldCtx(sys.ctx.characteristic, tuple(coeffs), symbol="lam")


def _chain_oracle(sys: PolySystem, method: str, n: int, ctx: FieldCtx) -> Verdict:
    if method == "lambda":
        m = sys.num_polys - n
        lam_exps = [0] * sys.num_vars
        lam_exps[n + 1] = 2
        lam = sys.polys[n].coefficient(lam_exps)
        work = ctx
        powers = [1] * (n + 1) + [2] * (m - 1)
    else:
        m = sys.num_polys - n - 1
        work = _ground_context(sys, n, m)
        lam = work.generator()
        powers = [1] * (n + 1) + [m - i + 1 for i in range(1, m)] + [1]
    lam = work.element(lam)
    rows = list(sys.polys[n:n + m])
    logger.debug(f"Chain oracle: {method}, n = {n}, m = {m}, lambda = {lam} in {work}")

    for a in sign_patterns(n, work):
        eps = structured_epsilons(rows, a, work, gadget_vars=n)
        ys = chain_solution(eps, lam)
        if ys is None:
            continue
        point = list(a) + ys
        if method == "ground":
            point.append(lam)
        witness = checked_witness(sys, Witness(tuple(point), tuple(powers)))
        return Verdict.satisfiable(witness, reason="sign pattern solves the chain")
    return Verdict.unsatisfiable(f"no sign pattern solves the chain (lambda = {lam})")


def structured_sign_oracle(sys: PolySystem, ctx: Optional[FieldCtx] = None) -> Verdict:
    """
    Exact decision for gadget-shaped systems in O(2^n) pattern checks.

    The shape comes from the provenance metadata: method boolsys, partition or
    partition-bounded (rows must vanish at the pattern), or lambda / ground
    (chain rows give eps, the Y-system is back-solved and the first row tested).
    y-values are reported as the value of y_i^r; an r-th root always exists in
    the closure.

    Raises:
        VerificationError: unrecognized shape
    """
    method = sys.metadata.get("method")
    if method not in PLAIN_SHAPES + CHAIN_SHAPES or "gadget_vars" not in sys.metadata:
        raise VerificationError(
            f"no gadget shape recorded (method={method}); use closure_satisfiable or macaulay instead"
        )
    n = int(sys.metadata["gadget_vars"])
    ctx = ctx or sys.ctx
    try:
        check_gadget_shape(sys, n)
    except SquaringError as e:
        raise VerificationError(str(e))
    if method in PLAIN_SHAPES:
        return _plain_oracle(sys, n, ctx)
    return _chain_oracle(sys, method, n, ctx)
