"""
Sparse multivariate polynomials over a FieldCtx and homogeneous polynomial systems.
Terms map exponent tuples to nonzero FieldElem coefficients; values are never
mutated after construction.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from utils.field import FieldCtx, FieldElem, FieldError, Scalar

Exponents = Tuple[int, ...]


class PolyError(ValueError):
    """Custom exception for polynomial shape errors (arity, homogeneity, rosters)."""
    pass


class Poly:
    """Sparse polynomial in num_vars variables."""

    __slots__ = ("ctx", "num_vars", "_terms")

    def __init__(self, ctx: FieldCtx, num_vars: int,
                 terms: Optional[Iterable[Tuple[Exponents, Scalar]]] = None):
        self.ctx = ctx
        self.num_vars = num_vars
        merged: Dict[Exponents, FieldElem] = {}
        for exps, coeff in terms or ():
            exps = tuple(exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise PolyError(f"exponent vector {exps} does not fit {num_vars} variables")
            coeff = ctx.element(coeff)
            if exps in merged:
                coeff = merged[exps] + coeff
            merged[exps] = coeff
        self._terms = {e: c for e, c in merged.items() if not c.is_zero()}

    @classmethod
    def _from_clean(cls, ctx: FieldCtx, num_vars: int, terms: Dict[Exponents, FieldElem]) -> "Poly":
        poly = cls.__new__(cls)
        poly.ctx = ctx
        poly.num_vars = num_vars
        poly._terms = {e: c for e, c in terms.items() if not c.is_zero()}
        return poly

    # Constructors

    @classmethod
    def zero(cls, ctx: FieldCtx, num_vars: int) -> "Poly":
        return cls(ctx, num_vars)

    @classmethod
    def constant(cls, ctx: FieldCtx, num_vars: int, value: Scalar) -> "Poly":
        return cls(ctx, num_vars, [((0,) * num_vars, value)])

    @classmethod
    def variable(cls, ctx: FieldCtx, num_vars: int, index: int) -> "Poly":
        if not 0 <= index < num_vars:
            raise PolyError(f"variable index {index} out of range for {num_vars} variables")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(ctx, num_vars, [(tuple(exps), 1)])

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Sequence[int], coeff: Scalar = 1) -> "Poly":
        return cls(ctx, len(exps), [(tuple(exps), coeff)])

    # Inspection

    @property
    def terms(self) -> Mapping[Exponents, FieldElem]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Largest total degree of a term; 0 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=0)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self._terms), default=0)

    def coefficient(self, exps: Sequence[int]) -> FieldElem:
        return self._terms.get(tuple(exps), self.ctx.zero())

    def variables(self) -> List[int]:
        """Indices of variables that occur in some term."""
        return [i for i in range(self.num_vars) if any(e[i] for e in self._terms)]

    def sorted_terms(self) -> List[Tuple[Exponents, FieldElem]]:
        """Terms in graded-lex order: higher total degree first, then lex with x_0 > x_1 > ..."""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def check_homogeneous(self) -> Optional[int]:
        return check_homogeneous(self)

    # Arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise FieldError(f"mixed contexts: {self.ctx} and {other.ctx}")
            if other.num_vars != self.num_vars:
                raise PolyError(f"variable counts differ: {self.num_vars} vs {other.num_vars}")
            return other
        return Poly.constant(self.ctx, self.num_vars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly._from_clean(self.ctx, self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._from_clean(self.ctx, self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            scalar = self.ctx.element(other)
            return Poly._from_clean(self.ctx, self.num_vars, {e: c * scalar for e, c in self._terms.items()})
        other = self._coerce(other)
        out: Dict[Exponents, FieldElem] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return Poly._from_clean(self.ctx, self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise PolyError("negative powers of polynomials are not polynomials")
        result = Poly.constant(self.ctx, self.num_vars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.ctx == other.ctx and self.num_vars == other.num_vars
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.ctx, self.num_vars, frozenset(self._terms.items())))

    # Evaluation and transformation

    def __call__(self, point: Sequence[FieldElem]) -> FieldElem:
        return poly_eval(self, point)

    def eval_powers(self, point: Sequence[FieldElem], powers: Sequence[int]) -> FieldElem:
        """
        Evaluate when variable i is known through the value of x_i^powers[i].

        Every exponent of variable i must be a multiple of powers[i]; the term's
        factor is then point[i]^(e/powers[i]).
        """
        if len(point) != self.num_vars or len(powers) != self.num_vars:
            raise PolyError(f"expected {self.num_vars} coordinates, got {len(point)}")
        target = point[0].ctx if point else self.ctx
        total = target.zero()
        for exps, coeff in self._terms.items():
            value = target.element(coeff)
            for x, e, r in zip(point, exps, powers):
                if e == 0:
                    continue
                if e % r:
                    raise PolyError(f"exponent {e} is not a multiple of the witness power {r}")
                value = value * x ** (e // r)
            total = total + value
        return total

    def substitute(self, var: int, value: Scalar) -> "Poly":
        """Replace x_var by a constant; the variable stays in the roster with exponent 0."""
        value = self.ctx.element(value)
        out: Dict[Exponents, FieldElem] = {}
        for exps, coeff in self._terms.items():
            e = list(exps)
            c = coeff * value ** e[var]
            e[var] = 0
            key = tuple(e)
            out[key] = out[key] + c if key in out else c
        return Poly._from_clean(self.ctx, self.num_vars, out)

    def embed(self, num_vars: int, index_map: Optional[Sequence[int]] = None) -> "Poly":
        """
        Move into a roster of num_vars variables; variable i goes to index_map[i]
        (identity prefix by default).
        """
        index_map = list(index_map) if index_map is not None else list(range(self.num_vars))
        if len(index_map) != self.num_vars or any(not 0 <= j < num_vars for j in index_map):
            raise PolyError(f"bad index map {index_map} into {num_vars} variables")
        out: Dict[Exponents, FieldElem] = {}
        for exps, coeff in self._terms.items():
            e = [0] * num_vars
            for i, k in enumerate(exps):
                e[index_map[i]] += k
            out[tuple(e)] = coeff
        return Poly._from_clean(self.ctx, num_vars, out)

    def with_context(self, ctx: FieldCtx) -> "Poly":
        """Re-read the coefficients in ctx (Q integers into F_p, F_p into an extension)."""
        if ctx == self.ctx:
            return self
        out = {}
        for exps, coeff in self._terms.items():
            if self.ctx.is_rational:
                out[exps] = ctx.element(coeff.value)
            else:
                out[exps] = ctx.embed(coeff)
        return Poly._from_clean(ctx, self.num_vars, out)

    def max_abs_coefficient(self) -> int:
        """Largest |c| over integer coefficients of a polynomial over Q."""
        if not self.ctx.is_rational:
            raise PolyError("absolute values only make sense over Q")
        return max((abs(c.value) for c in self._terms.values()), default=0)

    def format(self, var_names: Sequence[str]) -> str:
        """Human-readable rendering, e.g. 'x0^2 - x1^2'."""
        if self.is_zero():
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            mono = " ".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(var_names, exps) if k
            )
            pieces.append(f"({coeff}) {mono}".strip() if mono else f"({coeff})")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.num_vars)]
        return f"Poly[{self.ctx}]({self.format(names)})"


def poly_eval(f: Poly, point: Sequence[FieldElem]) -> FieldElem:
    """
    Exact value of f at point.

    The point may live in an extension of f's prime field; coefficients are
    embedded on the fly.

    Raises:
        PolyError: arity mismatch
    """
    if len(point) != f.num_vars:
        raise PolyError(f"expected {f.num_vars} coordinates, got {len(point)}")
    target = point[0].ctx if point else f.ctx
    total = target.zero()
    for exps, coeff in f.terms.items():
        value = target.element(coeff)
        for x, e in zip(point, exps):
            if e:
                value = value * (x if e == 1 else x ** e)
        total = total + value
    return total


def homogenize(f: Poly, hom_var: int, target_degree: Optional[int] = None) -> Poly:
    """
    Pad every term of f with powers of hom_var up to deg(f) (or target_degree).

    Raises:
        PolyError: hom_var occurs in f, or target_degree < deg(f)
    """
    if f.degree_in(hom_var) > 0:
        raise PolyError(f"homogenizing variable x{hom_var} already occurs in the polynomial")
    degree = f.total_degree() if target_degree is None else target_degree
    if degree < f.total_degree():
        raise PolyError(f"target degree {degree} below the polynomial degree {f.total_degree()}")
    out = {}
    for exps, coeff in f.terms.items():
        e = list(exps)
        e[hom_var] = degree - sum(exps)
        out[tuple(e)] = coeff
    return Poly._from_clean(f.ctx, f.num_vars, out)


def check_homogeneous(f: Poly) -> Optional[int]:
    """Common total degree of all terms, None if they disagree, 0 for the zero polynomial."""
    degrees = {sum(e) for e in f.terms}
    if not degrees:
        return 0
    if len(degrees) == 1:
        return degrees.pop()
    return None


@dataclass(frozen=True)
class PolySystem:
    """
    Ordered list of polynomials over one context with a named variable roster.

    Homogeneity of every polynomial is checked on construction unless
    homogeneous=False (the affine output of hhn_to_hn). metadata holds the
    provenance header lines in insertion order; comments holds the other "#"
    lines as (number of metadata entries before it, text).
    """
    ctx: FieldCtx
    var_names: Tuple[str, ...]
    polys: Tuple[Poly, ...]
    metadata: Mapping[str, str] = field(default_factory=dict, compare=False)
    homogeneous: bool = True
    comments: Tuple[Tuple[int, str], ...] = field(default=(), compare=False)
    degrees: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        object.__setattr__(self, "polys", tuple(self.polys))
        object.__setattr__(self, "metadata", dict(self.metadata))
        object.__setattr__(self, "comments", tuple(self.comments))
        if not self.var_names:
            raise PolyError("a system needs at least one variable")
        if not self.polys:
            raise PolyError("a system needs at least one polynomial")
        if len(set(self.var_names)) != len(self.var_names):
            raise PolyError(f"duplicate variable names in {self.var_names}")
        degrees = []
        for index, f in enumerate(self.polys):
            if f.ctx != self.ctx:
                raise PolyError(f"polynomial {index} lives over {f.ctx}, system over {self.ctx}")
            if f.num_vars != len(self.var_names):
                raise PolyError(
                    f"polynomial {index} has {f.num_vars} variables, roster has {len(self.var_names)}"
                )
            if self.homogeneous:
                d = check_homogeneous(f)
                if d is None:
                    raise PolyError(f"polynomial {index} is not homogeneous")
            else:
                d = f.total_degree()
            degrees.append(d)
        object.__setattr__(self, "degrees", tuple(degrees))

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def num_polys(self) -> int:
        return len(self.polys)

    @property
    def n(self) -> int:
        """Projective dimension: variables are x_0..x_n."""
        return self.num_vars - 1

    @property
    def is_square(self) -> bool:
        return self.num_polys == self.num_vars

    def vanishes_at(self, point: Sequence[FieldElem]) -> bool:
        return all(poly_eval(f, point).is_zero() for f in self.polys)

    def with_metadata(self, **entries) -> "PolySystem":
        merged = dict(self.metadata)
        merged.update({k: str(v) for k, v in entries.items()})
        return PolySystem(self.ctx, self.var_names, self.polys, merged, self.homogeneous, self.comments)

    def with_context(self, ctx: FieldCtx) -> "PolySystem":
        return PolySystem(
            ctx, self.var_names, [f.with_context(ctx) for f in self.polys],
            self.metadata, self.homogeneous, self.comments,
        )

    def __str__(self) -> str:
        lines = [f"System over {self.ctx} in ({', '.join(self.var_names)}):"]
        lines += [f"  {f.format(self.var_names)}" for f in self.polys]
        return "\n".join(lines)
