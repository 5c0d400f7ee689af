"""
Squaring module: turns a homogeneous system of s polynomials in n+1 variables
(s > n+1) into a square system with the same satisfiability.

Three constructions live here: random linear combinations, the lambda chain
(over Q with an integer lambda > 2, or over F_p[X]/(P) with lambda = X) and the
ground-field construction that keeps every coefficient in F_p by adding lambda
as a variable tied to P(lambda, x_0).
"""

from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from config import Config
from models import EpsilonVector, ModelError, SquaringMethod, SquaringPlan
from utils import univariate
from utils.field import FieldCtx, FieldElem
from utils.poly import Poly, PolySystem
from utils.univariate import Dense

RNG_NAME = "PCG64"


class SquaringError(ValueError):
    """Custom exception for squaring precondition violations."""
    pass


# Degree padding

def pad_degrees(sys: PolySystem) -> PolySystem:
    """
    Bring every polynomial to the lcm L of the degrees.

    A polynomial f of degree d < L is replaced by the family x_i^(L-d) f for
    i = 0..n, which has the same nontrivial zero set. Zero polynomials are dropped.
    The family enlarges s; squaring afterwards works on the enlarged count.
    """
    nonzero = [(f, d) for f, d in zip(sys.polys, sys.degrees) if not f.is_zero()]
    if not nonzero:
        raise SquaringError("every polynomial is zero; nothing to pad")
    degrees = {d for _, d in nonzero}
    if len(degrees) <= 1 and len(nonzero) == sys.num_polys:
        return sys
    target = lcm(*[d for d in degrees if d > 0]) if any(d > 0 for d in degrees) else 1

    variables = [Poly.variable(sys.ctx, sys.num_vars, i) for i in range(sys.num_vars)]
    polys: List[Poly] = []
    for f, d in nonzero:
        if d == target:
            polys.append(f)
        else:
            polys.extend(v ** (target - d) * f for v in variables)

    logger.debug(f"Padded {sys.num_polys} polynomials to common degree {target}: {len(polys)} rows")
    metadata = dict(sys.metadata)
    metadata["padded"] = str(target)
    return PolySystem(sys.ctx, sys.var_names, polys, metadata, comments=sys.comments)


# Random linear combinations

def sampling_field(ctx: FieldCtx, field_size: int) -> FieldCtx:
    """
    Field the alpha coefficients are drawn from.

    Q stays Q (integers drawn from [0, field_size)); F_p grows to the smallest
    F_{p^k} with p^k >= field_size. An extension field is used as is.
    """
    if ctx.is_rational:
        return ctx
    if not ctx.is_prime_field:
        if ctx.order < field_size:
            logger.warning(f"Sampling from {ctx} with {ctx.order} < {field_size} elements")
        return ctx
    p = ctx.characteristic
    k = 1
    while p ** k < field_size:
        k += 1
    return FieldCtx.extension(p, k)


def _draw_element(rng: np.random.Generator, ctx: FieldCtx, field_size: int) -> FieldElem:
    if ctx.is_rational:
        return ctx.element(int(rng.integers(0, field_size)))
    digits = rng.integers(0, ctx.characteristic, size=ctx.degree)
    return ctx.element(tuple(int(d) for d in digits))


def draw_alpha(rng: np.random.Generator, ctx: FieldCtx, rows: int, cols: int,
               field_size: int) -> Tuple[Tuple[FieldElem, ...], ...]:
    """rows x cols matrix of uniform draws, row-major."""
    return tuple(
        tuple(_draw_element(rng, ctx, field_size) for _ in range(cols))
        for _ in range(rows)
    )


def _check_equal_degrees(sys: PolySystem):
    degrees = {d for f, d in zip(sys.polys, sys.degrees) if not f.is_zero()}
    if len(degrees) > 1:
        raise SquaringError(
            f"random squaring needs equal degrees, got {sorted(degrees)}; apply pad_degrees first"
        )


def random_square(sys: PolySystem, plan: SquaringPlan, config: Optional[Config] = None,
                  rng: Optional[np.random.Generator] = None) -> PolySystem:
    """
    Square a system by taking n+1 random linear combinations g_i = sum_j alpha_ij f_j.

    Every root of sys is a root of the output; for alpha outside a proper algebraic
    subset the converse holds too, so a large enough sampling field makes spurious
    roots unlikely.

    Args:
        sys: Homogeneous system with all degrees equal and s >= n+1
        plan: RANDOM plan carrying alpha or a seed
        config: Supplies the default field size
        rng: Generator to draw from instead of one seeded from plan.seed

    Returns:
        Square system over the sampling field with seed and rng recorded
    """
    if plan.method is not SquaringMethod.RANDOM:
        raise SquaringError(f"random_square needs a random plan, got {plan.method.value}")
    _check_equal_degrees(sys)
    rows, cols = sys.num_vars, sys.num_polys
    if cols < rows:
        raise SquaringError(f"{cols} polynomials in {rows} variables: nothing to square")

    config = config or Config()
    size = plan.field_size or config.default_field_size(sys.n)
    metadata = dict(sys.metadata)
    metadata["method"] = SquaringMethod.RANDOM.value

    if plan.alpha is not None:
        target = plan.target_ctx if plan.target_ctx != sys.ctx else sys.ctx
        alpha = tuple(tuple(target.element(a) for a in row) for row in plan.alpha)
        if len(alpha) != rows or any(len(row) != cols for row in alpha):
            raise SquaringError(f"alpha must be {rows} x {cols}")
        metadata["alpha"] = "explicit"
    else:
        if plan.target_ctx != sys.ctx and plan.target_ctx.characteristic == sys.ctx.characteristic:
            target = plan.target_ctx
        else:
            target = sampling_field(sys.ctx, size)
        if rng is None:
            rng = np.random.Generator(np.random.PCG64(plan.seed))
        alpha = draw_alpha(rng, target, rows, cols, size)
        metadata["seed"] = str(plan.seed)
        metadata["rng"] = RNG_NAME
        metadata["field_size"] = str(target.order if target.order is not None else size)

    sources = [f.with_context(target) for f in sys.polys]
    squared = []
    for row in alpha:
        g = Poly.zero(target, sys.num_vars)
        for coeff, f in zip(row, sources):
            if not coeff.is_zero():
                g = g + f * coeff
        squared.append(g)

    logger.debug(f"Random squaring over {target}: {cols} -> {rows} polynomials")
    return PolySystem(target, sys.var_names, squared, metadata, comments=sys.comments)


def random_square_trials(sys: PolySystem, plan: SquaringPlan, trials: int,
                         config: Optional[Config] = None) -> List[PolySystem]:
    """
    Independent squarings with seeds spawned from plan.seed.

    Trial i is replayable from (seed, i); the header records both.
    """
    if plan.seed is None:
        raise SquaringError("seeded trials need a plan with a seed")
    children = np.random.SeedSequence(plan.seed).spawn(trials)
    outputs = []
    for index, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        squared = random_square(sys, plan, config, rng=rng)
        outputs.append(squared.with_metadata(trial=index))
    return outputs


# Gadget shape

def gadget_row(ctx: FieldCtx, num_vars: int, i: int) -> Poly:
    """x_0^2 - x_i^2, or x_0 x_i - x_i^2 in characteristic 2."""
    x0 = Poly.variable(ctx, num_vars, 0)
    xi = Poly.variable(ctx, num_vars, i)
    if ctx.characteristic == 2:
        return x0 * xi - xi ** 2
    return x0 ** 2 - xi ** 2


def check_gadget_shape(sys: PolySystem, gadget_vars: Optional[int] = None) -> int:
    """
    Verify the first n rows are the square gadgets over x_0..x_n.

    Returns:
        n, the number of gadget rows
    """
    n = gadget_vars if gadget_vars is not None else sys.n
    if n < 1 or sys.num_polys < n or n + 1 > sys.num_vars:
        raise SquaringError(f"system has no room for {n} gadget rows")
    for i in range(1, n + 1):
        if sys.polys[i - 1] != gadget_row(sys.ctx, sys.num_vars, i):
            raise SquaringError(
                f"row {i} is not the gadget for x{i}; the deterministic constructions "
                "only accept Boolsys-shaped systems"
            )
    return n


def _chain_length(sys: PolySystem, n: int) -> int:
    m = sys.num_polys - n
    if m < 1:
        raise SquaringError(f"{sys.num_polys} polynomials in {sys.num_vars} variables: nothing to chain")
    # A zero row (X_i = X_i or X_i) has every degree; it squares to zero.
    if any(d != 2 for f, d in zip(sys.polys, sys.degrees) if not f.is_zero()):
        raise SquaringError(f"gadget systems have degree 2 throughout, got {sys.degrees}")
    return m


# Lambda chain

def lambda_chain_square(sys: PolySystem, plan: SquaringPlan) -> PolySystem:
    """
    Square a Boolsys-shaped system with the lambda chain.

    With m = s - n chain rows and new variables y_1..y_{m-1}, the output keeps
    f_1..f_n and emits f_{n+1} + lambda y_1^2, f_{n+i} - y_{i-1}^2 + lambda y_i^2,
    and f_s - y_{m-1}^2. For s = n+1 the input is returned unchanged.

    Args:
        sys: Output of boolsys_to_system
        plan: LAMBDA_INT (Q, integer lambda > 2) or LAMBDA_EXT (F_p[X]/(P), deg P = s-n)

    Returns:
        s polynomials in s variables, homogeneous of degree 2
    """
    if plan.method not in (SquaringMethod.LAMBDA_INT, SquaringMethod.LAMBDA_EXT):
        raise SquaringError(f"lambda_chain_square needs a lambda plan, got {plan.method.value}")
    n = check_gadget_shape(sys)
    m = _chain_length(sys, n)
    if sys.num_vars != n + 1:
        raise SquaringError(f"expected variables x0..x{n}, got {sys.num_vars}")
    if m == 1:
        logger.debug("Square already; lambda chain is empty")
        return sys

    target = plan.target_ctx
    if plan.method is SquaringMethod.LAMBDA_INT:
        if not sys.ctx.is_rational:
            raise SquaringError(f"the integer lambda chain runs over Q, not {sys.ctx}")
    else:
        if not sys.ctx.is_prime_field or target.characteristic != sys.ctx.characteristic:
            raise SquaringError(f"the extension lambda chain needs a system over F_{target.characteristic}")
        if target.degree != m:
            raise SquaringError(
                f"lambda must have degree s-n = {m} over F_{target.characteristic}, "
                f"extension has degree {target.degree}"
            )
    lam = plan.lambda_
    if not plan.strict:
        logger.warning(f"Strict lambda checks disabled; lambda = {lam} may admit spurious roots")

    total = n + 1 + (m - 1)
    index_map = list(range(n + 1))
    rows = [f.with_context(target).embed(total, index_map) for f in sys.polys]
    y = [None] + [Poly.variable(target, total, n + i) for i in range(1, m)]

    squared = rows[:n]
    for i in range(1, m + 1):
        g = rows[n + i - 1]
        if i > 1:
            g = g - y[i - 1] ** 2
        if i < m:
            g = g + y[i] ** 2 * lam
        squared.append(g)

    names = list(sys.var_names) + [f"y{i}" for i in range(1, m)]
    metadata = dict(sys.metadata)
    metadata.update({"method": "lambda", "gadget_vars": str(n), "lambda": str(lam)})
    if target.extension_modulus is not None:
        metadata["modulus"] = univariate.format_dense(target.extension_modulus, target.symbol)
    if not plan.strict:
        metadata["strict"] = "false"
    logger.info(f"⚡ Lambda chain over {target}: {sys.num_polys} rows squared with {m - 1} new variables")
    return PolySystem(target, names, squared, metadata, comments=sys.comments)


def epsilon_determinant(eps: EpsilonVector, lam: FieldElem) -> FieldElem:
    """(-1)^(m-1) (eps_1 + eps_2 lambda + ... + eps_m lambda^(m-1))"""
    ctx = lam.ctx
    total = ctx.zero()
    power = ctx.one()
    for e in eps.values:
        total = total + ctx.element(e) * power
        power = power * lam
    return total if len(eps) % 2 == 1 else -total


def epsilon_matrix(eps: EpsilonVector, lam: FieldElem) -> List[List[FieldElem]]:
    """
    Coefficient matrix of the homogenized chain in the unknowns (Z, Y_1..Y_{m-1}).

    Row 1 is eps_1 Z + lambda Y_1, row i is eps_i Z - Y_{i-1} + lambda Y_i and the
    last row drops the lambda term. Its determinant is epsilon_determinant.
    """
    ctx = lam.ctx
    m = len(eps)
    matrix = [[ctx.zero() for _ in range(m)] for _ in range(m)]
    for i in range(m):
        matrix[i][0] = ctx.element(eps.values[i])
        if i > 0:
            matrix[i][i] = matrix[i][i] - 1
        if i < m - 1:
            matrix[i][i + 1] = lam
    return matrix


def gadget_constraints_hold(a: Sequence[FieldElem], n: int) -> bool:
    ctx = a[0].ctx
    a0 = a[0]
    if ctx.characteristic == 2:
        return all(a[i].is_zero() or a[i] == a0 for i in range(1, n + 1))
    return all(a[i] * a[i] == a0 * a0 for i in range(1, n + 1))


def structured_epsilons(rows: Sequence[Poly], a: Sequence[FieldElem], ctx: FieldCtx,
                        gadget_vars: Optional[int] = None, scaled: bool = False) -> EpsilonVector:
    """
    Values of the chain rows at a candidate x-assignment.

    Rows may carry extra variables (chain y's, lambda); those are set to zero.
    With scaled=True, eps_i = a_0^(m-i) f_{n+i}(a) as in the ground-field chain.

    Raises:
        SquaringError: a violates the gadget constraints
    """
    a = [ctx.element(v) for v in a]
    n = gadget_vars if gadget_vars is not None else len(a) - 1
    if not gadget_constraints_hold(a, n):
        raise SquaringError(f"assignment {[str(v) for v in a]} violates the gadget constraints")
    m = len(rows)
    values = []
    for i, f in enumerate(rows, start=1):
        point = list(a) + [ctx.zero()] * (f.num_vars - len(a))
        value = f(point)
        if scaled:
            value = value * a[0] ** (m - i)
        values.append(value)
    return EpsilonVector(tuple(values))


# Ground field

def _validate_ground_modulus(modulus: Dense, p: int, m: int) -> Dense:
    modulus = univariate.normalize(modulus, p)
    if univariate.degree(modulus) != m or not univariate.is_monic(modulus):
        raise SquaringError(f"P must be monic of degree s-n = {m}, got {univariate.format_dense(modulus)}")
    if not univariate.rabin_irreducible(modulus, p):
        raise SquaringError(f"P = {univariate.format_dense(modulus)} is reducible over F_{p}")
    if univariate.evaluate(modulus, 0, p) == 0:
        raise SquaringError("P(0) = 0: lambda would divide P")
    return modulus


def ground_field_square(sys: PolySystem, modulus: Optional[Dense] = None) -> PolySystem:
    """
    Square a Boolsys-shaped system over F_p without leaving F_p.

    Variables x_0..x_n, y_1..y_{m-1} and lambda (last). Chain row i is
    x_0^(m-i) f_{n+i} - y_{i-1}^(m-i+2) + lambda y_i^(m-i+1), so each y_i occurs only
    at power m-i+1; the appended row P(lambda, x_0) = sum c_j lambda^j x_0^(m-j)
    makes lambda a root of P whenever x_0 = 1.

    Args:
        sys: Output of boolsys_to_system over a prime field
        modulus: Monic irreducible P of degree m = s-n (find_irreducible when None)

    Returns:
        s+1 polynomials in s+1 variables over F_p
    """
    ctx = sys.ctx
    if not ctx.is_prime_field:
        raise SquaringError(f"the ground-field construction needs a prime field, got {ctx}")
    n = check_gadget_shape(sys)
    m = _chain_length(sys, n)
    if sys.num_vars != n + 1:
        raise SquaringError(f"expected variables x0..x{n}, got {sys.num_vars}")
    if m == 1:
        logger.debug("Square already; ground-field chain is empty")
        return sys

    p = ctx.characteristic
    if modulus is None:
        modulus = univariate.find_irreducible(p, m)
    modulus = _validate_ground_modulus(modulus, p, m)

    total = n + 1 + (m - 1) + 1
    lam_index = total - 1
    rows = [f.embed(total, list(range(n + 1))) for f in sys.polys]
    x0 = Poly.variable(ctx, total, 0)
    lam = Poly.variable(ctx, total, lam_index)
    y = [None] + [Poly.variable(ctx, total, n + i) for i in range(1, m)]

    squared = rows[:n]
    for i in range(1, m + 1):
        g = x0 ** (m - i) * rows[n + i - 1]
        if i > 1:
            g = g - y[i - 1] ** (m - i + 2)
        if i < m:
            g = g + lam * y[i] ** (m - i + 1)
        squared.append(g)

    p_row = Poly.zero(ctx, total)
    for j, c in enumerate(modulus):
        if c:
            p_row = p_row + lam ** j * x0 ** (m - j) * c
    squared.append(p_row)

    names = list(sys.var_names) + [f"y{i}" for i in range(1, m)] + ["lam"]
    metadata = dict(sys.metadata)
    metadata.update({
        "method": "ground",
        "gadget_vars": str(n),
        "modulus": univariate.format_dense(modulus, "t"),
    })
    logger.info(f"⚡ Ground-field chain over {ctx}: {sys.num_polys} rows -> {len(squared)} with P of degree {m}")
    return PolySystem(ctx, names, squared, metadata, comments=sys.comments)


def square(sys: PolySystem, plan: SquaringPlan, config: Optional[Config] = None) -> PolySystem:
    """Dispatch on plan.method."""
    if plan.method is SquaringMethod.RANDOM:
        return random_square(sys, plan, config)
    if plan.method is SquaringMethod.GROUND:
        if plan.target_ctx.characteristic != sys.ctx.characteristic:
            raise SquaringError(f"plan over {plan.target_ctx} does not match system over {sys.ctx}")
        return ground_field_square(sys)
    return lambda_chain_square(sys, plan)


def lambda_plan_for(sys: PolySystem, value: Optional[int] = None, strict: bool = True) -> SquaringPlan:
    """
    Lambda plan matching a gadget system: integer lambda over Q, the class of X
    in the degree-(s-n) extension over F_p.
    """
    n = check_gadget_shape(sys)
    m = _chain_length(sys, n)
    try:
        if sys.ctx.is_rational:
            return SquaringPlan.lambda_int(value if value is not None else Config().DEFAULT_LAMBDA, strict)
        if not sys.ctx.is_prime_field:
            raise SquaringError(f"the lambda chain needs Q or a prime field, got {sys.ctx}")
        return SquaringPlan.lambda_ext(sys.ctx.characteristic, m)
    except ModelError as e:
        raise SquaringError(str(e))
