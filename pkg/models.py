"""
Domain models for the reduction toolkit.
Combinatorial source problems, squaring plans and oracle verdicts.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from utils.field import FieldCtx, FieldElem
from utils.univariate import find_irreducible


class VerdictStatus(Enum):
    """Outcome of a satisfiability test."""
    SATISFIABLE = "satisfiable"
    UNSATISFIABLE = "unsatisfiable"
    INDETERMINATE = "indeterminate"


class SquaringMethod(Enum):
    """Construction used to turn a non-square system into a square one."""
    RANDOM = "random"
    LAMBDA_EXT = "lambda-ext"
    LAMBDA_INT = "lambda-int"
    GROUND = "ground"


class ModelError(ValueError):
    """Custom exception for instances violating their invariants."""
    pass


# Boolsys

@dataclass(frozen=True)
class IsTrue:
    """X_i = True"""
    i: int


@dataclass(frozen=True)
class Negation:
    """X_i = not X_j"""
    i: int
    j: int


@dataclass(frozen=True)
class Disjunction:
    """X_i = X_j or X_k"""
    i: int
    j: int
    k: int


Equation = Union[IsTrue, Negation, Disjunction]


def equation_indices(eq: Equation) -> Tuple[int, ...]:
    if isinstance(eq, IsTrue):
        return (eq.i,)
    if isinstance(eq, Negation):
        return (eq.i, eq.j)
    return (eq.i, eq.j, eq.k)


def equation_holds(eq: Equation, assignment: Sequence[bool]) -> bool:
    """assignment[0] is X_1."""
    value = lambda idx: assignment[idx - 1]
    if isinstance(eq, IsTrue):
        return value(eq.i)
    if isinstance(eq, Negation):
        return value(eq.i) == (not value(eq.j))
    return value(eq.i) == (value(eq.j) or value(eq.k))


@dataclass(frozen=True)
class BoolsysInstance:
    """Boolean system over X_1..X_n with equations of the three permitted forms."""
    num_vars: int
    equations: Tuple[Equation, ...]

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        if not self.equations:
            raise ModelError("a Boolsys instance needs at least one equation")
        for eq in self.equations:
            if any(not 1 <= idx <= self.num_vars for idx in equation_indices(eq)):
                raise ModelError(f"equation {eq} refers outside X_1..X_{self.num_vars}")

    def is_satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(equation_holds(eq, assignment) for eq in self.equations)

    def assignments(self):
        return product((False, True), repeat=self.num_vars)


# CNF

Literal = int  # +j for X_j, -j for not X_j


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses with at most three literals each."""
    num_vars: int
    clauses: Tuple[Tuple[Literal, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            if not clause:
                raise ModelError("empty clause")
            if len(clause) > 3:
                raise ModelError(f"clause {clause} has more than three literals")
            if any(lit == 0 or abs(lit) > self.num_vars for lit in clause):
                raise ModelError(f"clause {clause} refers outside X_1..X_{self.num_vars}")

    def is_satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(
            any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause)
            for clause in self.clauses
        )

    def occurring_vars(self) -> List[int]:
        return sorted({abs(lit) for clause in self.clauses for lit in clause})


# Partition

@dataclass(frozen=True)
class PartitionInstance:
    """Multiset of non-negative integer weights w(s_1)..w(s_n)."""
    weights: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise ModelError("a Partition instance needs at least one weight")
        if any(w < 0 for w in self.weights):
            raise ModelError(f"weights must be non-negative, got {self.weights}")


# Squaring

@dataclass(frozen=True)
class SquaringPlan:
    """
    Parameters of one squaring construction.

    lambda_ is the chain coefficient, alpha the (n+1) x s combination matrix,
    target_ctx the field the output lives over. strict=False admits lambda <= 2
    for demonstrations of why the bound matters.
    """
    method: SquaringMethod
    target_ctx: FieldCtx
    lambda_: Optional[FieldElem] = None
    alpha: Optional[Tuple[Tuple[FieldElem, ...], ...]] = None
    seed: Optional[int] = None
    field_size: Optional[int] = None
    strict: bool = True

    def __post_init__(self):
        m = self.method
        if m is SquaringMethod.RANDOM:
            if self.alpha is None and self.seed is None:
                raise ModelError("a random plan needs alpha or a seed")
            if self.seed is not None and not 0 <= self.seed < 2 ** 64:
                raise ModelError(f"seed must fit 64 bits, got {self.seed}")
        elif m is SquaringMethod.LAMBDA_INT:
            if not self.target_ctx.is_rational:
                raise ModelError("the integer lambda chain needs characteristic 0")
            value = self.lambda_.as_integer() if self.lambda_ is not None else None
            if value is None:
                raise ModelError("the integer lambda chain needs an integer lambda")
            if self.strict and value <= 2:
                raise ModelError(f"lambda must be an integer > 2, got {value}")
        elif m is SquaringMethod.LAMBDA_EXT:
            if self.target_ctx.extension_modulus is None:
                raise ModelError("the extension lambda chain needs an extension field")
            if self.lambda_ is None:
                object.__setattr__(self, "lambda_", self.target_ctx.generator())
        elif m is SquaringMethod.GROUND:
            if self.target_ctx.characteristic == 0:
                raise ModelError("the ground-field construction needs a prime characteristic")

    @classmethod
    def lambda_int(cls, value: int = 3, strict: bool = True) -> "SquaringPlan":
        ctx = FieldCtx.rationals()
        return cls(SquaringMethod.LAMBDA_INT, ctx, lambda_=ctx.element(value), strict=strict)

    @classmethod
    def lambda_ext(cls, p: int, chain_length: int) -> "SquaringPlan":
        """lambda = class of X in F_p[X]/(P), P the deterministic irreducible of degree s-n."""
        return cls(SquaringMethod.LAMBDA_EXT, FieldCtx(p, find_irreducible(p, chain_length)))

    @classmethod
    def ground(cls, p: int) -> "SquaringPlan":
        return cls(SquaringMethod.GROUND, FieldCtx.prime(p))

    @classmethod
    def random(cls, ctx: FieldCtx, seed: int, field_size: Optional[int] = None) -> "SquaringPlan":
        return cls(SquaringMethod.RANDOM, ctx, seed=seed, field_size=field_size)


@dataclass(frozen=True)
class EpsilonVector:
    """Values epsilon_1..epsilon_{s-n} of the chain rows at a candidate point."""
    values: Tuple[FieldElem, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.values)


# Verdicts

@dataclass(frozen=True)
class Witness:
    """
    A common root. powers[i] > 1 means point[i] is the value of x_i^powers[i]
    rather than x_i itself (an r-th root always exists in the algebraic closure).
    """
    point: Tuple[FieldElem, ...]
    powers: Tuple[int, ...]

    @classmethod
    def plain(cls, point: Sequence[FieldElem]) -> "Witness":
        return cls(tuple(point), (1,) * len(point))

    @property
    def ctx(self) -> FieldCtx:
        return self.point[0].ctx

    def format(self, var_names: Sequence[str]) -> str:
        parts = []
        for name, value, r in zip(var_names, self.point, self.powers):
            parts.append(f"{name}={value}" if r == 1 else f"{name}^{r}={value}")
        return ", ".join(parts)


@dataclass(frozen=True)
class Verdict:
    """Result of a satisfiability test over the algebraic closure."""
    status: VerdictStatus
    witness: Optional[Witness] = None
    reason: Optional[str] = None
    certificate: Optional[str] = None
    details: Dict[str, str] = field(default_factory=dict, compare=False)

    @classmethod
    def satisfiable(cls, witness: Witness, reason: Optional[str] = None) -> "Verdict":
        return cls(VerdictStatus.SATISFIABLE, witness=witness, reason=reason)

    @classmethod
    def certified_satisfiable(cls, certificate: str, reason: str, **details) -> "Verdict":
        return cls(VerdictStatus.SATISFIABLE, certificate=certificate, reason=reason, details=details)

    @classmethod
    def unsatisfiable(cls, reason: str, **details) -> "Verdict":
        return cls(VerdictStatus.UNSATISFIABLE, reason=reason, details=details)

    @classmethod
    def indeterminate(cls, reason: str, **details) -> "Verdict":
        return cls(VerdictStatus.INDETERMINATE, reason=reason, details=details)

    @property
    def is_satisfiable(self) -> bool:
        return self.status is VerdictStatus.SATISFIABLE

    @property
    def is_decided(self) -> bool:
        return self.status is not VerdictStatus.INDETERMINATE

    @property
    def exit_code(self) -> int:
        return {
            VerdictStatus.SATISFIABLE: 0,
            VerdictStatus.UNSATISFIABLE: 1,
            VerdictStatus.INDETERMINATE: 2,
        }[self.status]
