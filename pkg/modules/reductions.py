"""
Reductions module: encoders from Partition, Boolsys and 3-CNF into homogeneous
polynomial systems, plus the combinatorial brute-force checks they are measured
against.
"""

from itertools import product
from typing import Dict, List, Optional, Tuple

from loguru import logger

from models import (
    BoolsysInstance, CnfFormula, Disjunction, Equation, IsTrue, Negation, PartitionInstance,
)
from utils.field import FieldCtx
from utils.poly import Poly, PolySystem


class ReductionError(ValueError):
    """Custom exception for encoder precondition failures."""
    pass


def _x_vars(ctx: FieldCtx, count: int) -> List[Poly]:
    return [Poly.variable(ctx, count, i) for i in range(count)]


def _x_names(count: int) -> List[str]:
    return [f"x{i}" for i in range(count)]


# Partition

def partition_to_system(inst: PartitionInstance) -> PolySystem:
    """
    Square system over Q with a nontrivial root iff the weights split evenly.

    Variables x_0..x_n; f_i = x_0^2 - x_i^2 for 1 <= i <= n, then
    f_0 = sum w(s_i) x_i last.
    """
    ctx = FieldCtx.rationals()
    n = len(inst.weights)
    x = _x_vars(ctx, n + 1)
    polys = [x[0] ** 2 - x[i] ** 2 for i in range(1, n + 1)]
    f0 = Poly.zero(ctx, n + 1)
    for i, w in enumerate(inst.weights, start=1):
        f0 = f0 + x[i] * w
    polys.append(f0)
    logger.debug(f"Partition instance with {n} weights encoded into {len(polys)} polynomials")
    return PolySystem(ctx, _x_names(n + 1), polys, {"method": "partition", "gadget_vars": str(n)})


def weight_bits(weight: int) -> List[int]:
    """Little-endian binary digits w_0..w_p of a weight; 0 has the single digit 0."""
    return [int(b) for b in reversed(bin(weight)[2:])]


def partition_bounded_system(inst: PartitionInstance) -> PolySystem:
    """
    Partition encoding with every coefficient in [-2, 2] and every degree <= 2.

    Each weight w_i = sum_j w_ij 2^j gets variables W_i0..W_ip with the descending
    chain W_ip - w_ip x_0 and W_ij - (2 W_i,j+1 + w_ij x_0) for j < p, so that
    W_i0 = w_i x_0 on every root; f_0 becomes sum W_i0 x_i. The system stays square.
    """
    ctx = FieldCtx.rationals()
    n = len(inst.weights)
    digits = [weight_bits(w) for w in inst.weights]

    names = _x_names(n + 1)
    w_index: Dict[Tuple[int, int], int] = {}
    for i, bits in enumerate(digits, start=1):
        for j in range(len(bits)):
            w_index[(i, j)] = len(names)
            names.append(f"W{i}_{j}")
    total = len(names)
    v = _x_vars(ctx, total)
    x0 = v[0]

    polys = [x0 ** 2 - v[i] ** 2 for i in range(1, n + 1)]
    for i, bits in enumerate(digits, start=1):
        top = len(bits) - 1
        polys.append(v[w_index[(i, top)]] - x0 * bits[top])
        for j in range(top - 1, -1, -1):
            polys.append(v[w_index[(i, j)]] - (v[w_index[(i, j + 1)]] * 2 + x0 * bits[j]))
    f0 = Poly.zero(ctx, total)
    for i in range(1, n + 1):
        f0 = f0 + v[w_index[(i, 0)]] * v[i]
    polys.append(f0)

    logger.debug(f"Bounded Partition encoding: {total} variables, {len(polys)} polynomials")
    return PolySystem(ctx, names, polys, {"method": "partition-bounded", "gadget_vars": str(n)})


def partition_feasible(inst: PartitionInstance) -> Optional[Tuple[int, ...]]:
    """
    Subset-sum dynamic program.

    Returns:
        A sign vector (+1/-1 per weight) whose signed sum is 0, or None
    """
    total = sum(inst.weights)
    if total % 2:
        return None
    target = total // 2
    # reach[s] = index of the weight that first reached sum s
    reach: Dict[int, Optional[int]] = {0: None}
    for index, w in enumerate(inst.weights):
        for s in sorted(reach, reverse=True):
            if s + w <= target and s + w not in reach:
                reach[s + w] = index
    if target not in reach:
        return None
    signs = [1] * len(inst.weights)
    s = target
    while s:
        index = reach[s]
        signs[index] = -1
        s -= inst.weights[index]
    return tuple(signs)


# Boolsys

def boolsys_to_system(inst: BoolsysInstance, ctx: FieldCtx) -> PolySystem:
    """
    Degree-2 gadget system with a nontrivial root iff the Boolsys instance is satisfiable.

    Characteristic != 2 (truth is x_i = -x_0, falsity x_i = x_0):
        x_0^2 - x_i^2 for each i; x_0 (x_i + x_0) per X_i = True;
        x_0 (x_i + x_j) per X_i = not X_j; (x_i + x_0)^2 - (x_j + x_0)(x_k + x_0) per disjunction.
    Characteristic 2 (truth is x_i = x_0, falsity x_i = 0):
        x_0 x_i - x_i^2; x_0 (x_i + x_0); x_0 (x_i + x_j + x_0); x_i^2 + x_j x_k + x_0 (x_j + x_k).

    Args:
        inst: Boolsys instance over X_1..X_n
        ctx: Coefficient field (Q, F_p or an extension)

    Returns:
        System in x_0..x_n; the first n rows are the square gadgets
    """
    n = inst.num_vars
    x = _x_vars(ctx, n + 1)
    x0 = x[0]
    char2 = ctx.characteristic == 2

    if char2:
        polys = [x0 * x[i] - x[i] ** 2 for i in range(1, n + 1)]
    else:
        polys = [x0 ** 2 - x[i] ** 2 for i in range(1, n + 1)]

    for eq in inst.equations:
        polys.append(_gadget(eq, x, char2))

    logger.debug(f"Boolsys instance ({n} vars, {len(inst.equations)} equations) encoded over {ctx}")
    return PolySystem(ctx, _x_names(n + 1), polys, {"method": "boolsys", "gadget_vars": str(n)})


def _gadget(eq: Equation, x: List[Poly], char2: bool) -> Poly:
    x0 = x[0]
    if isinstance(eq, IsTrue):
        return x0 * (x[eq.i] + x0)
    if isinstance(eq, Negation):
        if char2:
            return x0 * (x[eq.i] + x[eq.j] + x0)
        return x0 * (x[eq.i] + x[eq.j])
    if char2:
        return x[eq.i] ** 2 + x[eq.j] * x[eq.k] + x0 * (x[eq.j] + x[eq.k])
    return (x[eq.i] + x0) ** 2 - (x[eq.j] + x0) * (x[eq.k] + x0)


def boolsys_brute_force(inst: BoolsysInstance) -> Optional[Tuple[bool, ...]]:
    """First valid assignment (X_1..X_n) in lexicographic order, or None."""
    for assignment in inst.assignments():
        if inst.is_satisfied_by(assignment):
            return tuple(assignment)
    return None


# CNF

def cnf_to_boolsys(phi: CnfFormula) -> BoolsysInstance:
    """
    Boolsys instance whose valid assignments restrict bijectively to the
    satisfying assignments of phi.

    Auxiliary variables follow the original ones: one per negated variable
    (N = not X_k, shared by every occurrence), one per binary disjunction with
    3-literal clauses associated as (l1 or l2) or l3, and a single-literal clause
    becomes A = l or l. Every clause ends in one IsTrue equation.
    """
    next_var = phi.num_vars + 1
    equations: List[Equation] = []
    negations: Dict[int, int] = {}

    def fresh() -> int:
        nonlocal next_var
        index = next_var
        next_var += 1
        return index

    def slot(lit: int) -> int:
        if lit > 0:
            return lit
        k = -lit
        if k not in negations:
            negations[k] = fresh()
            equations.append(Negation(negations[k], k))
        return negations[k]

    for clause in phi.clauses:
        slots = [slot(lit) for lit in clause]
        if len(slots) == 1:
            slots = slots * 2
        acc = slots[0]
        for other in slots[1:]:
            d = fresh()
            equations.append(Disjunction(d, acc, other))
            acc = d
        equations.append(IsTrue(acc))

    if not equations:
        raise ReductionError("a formula without clauses has no Boolsys encoding")
    logger.debug(f"CNF with {len(phi.clauses)} clauses -> Boolsys with {next_var - 1} vars, "
                 f"{len(equations)} equations")
    return BoolsysInstance(next_var - 1, tuple(equations))


def cnf_brute_force(phi: CnfFormula) -> Optional[Tuple[bool, ...]]:
    for assignment in product((False, True), repeat=phi.num_vars):
        if phi.is_satisfied_by(assignment):
            return assignment
    return None


# Homogeneous to affine

def hhn_to_hn(sys: PolySystem) -> PolySystem:
    """
    Affine system with a root iff sys has a nontrivial root.

    Adds y_i for every variable x_i and appends sum x_i y_i - 1.
    """
    count = sys.num_vars
    total = 2 * count
    polys = [f.embed(total) for f in sys.polys]
    v = _x_vars(sys.ctx, total)
    pairing = Poly.zero(sys.ctx, total)
    for i in range(count):
        pairing = pairing + v[i] * v[count + i]
    polys.append(pairing - 1)
    names = list(sys.var_names) + [f"y_{name}" for name in sys.var_names]
    metadata = dict(sys.metadata)
    metadata["method"] = "affine"
    return PolySystem(sys.ctx, names, polys, metadata, homogeneous=False, comments=sys.comments)
