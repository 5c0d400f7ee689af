"""
Exact coefficient domains: the rationals, prime fields F_p and extensions F_p[X]/(P).
FieldElem values are immutable and always kept in canonical form, so equality is
a structural comparison.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional, Tuple, Union

from sympy import isprime

from utils import univariate
from utils.univariate import Dense


class FieldError(ValueError):
    """Custom exception for invalid field contexts and mixed-context arithmetic."""
    pass


Scalar = Union[int, Fraction, "FieldElem"]


@dataclass(frozen=True)
class FieldCtx:
    """
    Coefficient domain descriptor.

    characteristic 0 means Q; a prime p without modulus means F_p; a prime p with
    extension_modulus P (monic, irreducible, low degree first) means F_p[X]/(P).
    """
    characteristic: int = 0
    extension_modulus: Optional[Dense] = None
    symbol: str = field(default="t", compare=False)

    def __post_init__(self):
        p = self.characteristic
        if p < 0 or (p != 0 and not isprime(p)):
            raise FieldError(f"characteristic must be 0 or a prime, got {p}")
        if self.extension_modulus is None:
            return
        if p == 0:
            raise FieldError("characteristic 0 never carries an extension modulus")
        modulus = univariate.normalize(self.extension_modulus, p)
        if not univariate.is_monic(modulus) or univariate.degree(modulus) < 1:
            raise FieldError(f"extension modulus must be monic of degree >= 1, got {modulus}")
        if not univariate.rabin_irreducible(modulus, p):
            raise FieldError(
                f"extension modulus {univariate.format_dense(modulus, self.symbol)} "
                f"is reducible over F_{p}"
            )
        object.__setattr__(self, "extension_modulus", modulus)

    # Constructors

    @classmethod
    def rationals(cls) -> "FieldCtx":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldCtx":
        return cls(p)

    @classmethod
    def extension(cls, p: int, degree: int) -> "FieldCtx":
        """F_{p^degree} built on the deterministic irreducible of that degree."""
        if degree == 1:
            return cls(p)
        return cls(p, univariate.find_irreducible(p, degree))

    # Properties

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic > 0 and self.extension_modulus is None

    @property
    def degree(self) -> int:
        """Degree over the prime field (1 for Q and F_p)."""
        if self.extension_modulus is None:
            return 1
        return univariate.degree(self.extension_modulus)

    @property
    def order(self) -> Optional[int]:
        """Number of elements, None for Q."""
        if self.is_rational:
            return None
        return self.characteristic ** self.degree

    @property
    def prime_field(self) -> "FieldCtx":
        return FieldCtx(self.characteristic)

    # Elements

    def zero(self) -> "FieldElem":
        return self.element(0)

    def one(self) -> "FieldElem":
        return self.element(1)

    def element(self, value: Union[int, Fraction, Tuple[int, ...], "FieldElem"]) -> "FieldElem":
        """
        Coerce a Python value into this field.

        Args:
            value: int, Fraction (Q only), residue tuple (low degree first) or FieldElem

        Returns:
            Canonical FieldElem
        """
        if isinstance(value, FieldElem):
            if value.ctx == self:
                return value
            return self.embed(value)
        p = self.characteristic
        if p == 0:
            if isinstance(value, tuple):
                raise FieldError("residue tuples are not elements of Q")
            return FieldElem(self, Fraction(value))
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{p}")
            value = value.numerator * pow(value.denominator, -1, p)
        if isinstance(value, int):
            residue: Dense = univariate.normalize((value,), p)
        else:
            residue = univariate.normalize(value, p)
        if self.extension_modulus is not None:
            residue = univariate.mod(residue, self.extension_modulus, p)
        elif len(residue) > 1:
            raise FieldError(f"F_{p} has no element {value}")
        return FieldElem(self, residue)

    def embed(self, elem: "FieldElem") -> "FieldElem":
        """Embed an element of the prime subfield (or of this very field)."""
        if elem.ctx == self:
            return elem
        if elem.ctx.characteristic != self.characteristic or not elem.ctx.is_prime_field:
            raise FieldError(f"cannot embed an element of {elem.ctx} into {self}")
        return FieldElem(self, elem.value)

    def generator(self) -> "FieldElem":
        """The class of X in F_p[X]/(P)."""
        if self.extension_modulus is None:
            raise FieldError(f"{self} is not an extension field")
        return self.element((0, 1))

    def elements(self) -> Iterator["FieldElem"]:
        """Every element of a finite field, zero first, in a fixed order."""
        if self.is_rational:
            raise FieldError("Q cannot be enumerated")
        for digits in product(range(self.characteristic), repeat=self.degree):
            yield FieldElem(self, univariate.normalize(tuple(reversed(digits)), self.characteristic))

    # Text form

    def format_element(self, elem: "FieldElem") -> str:
        if self.is_rational:
            return str(elem.value)
        if self.is_prime_field:
            return str(elem.value[0]) if elem.value else "0"
        return univariate.format_dense(elem.value, self.symbol)

    def parse_element(self, text: str) -> "FieldElem":
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        if self.is_rational:
            try:
                return self.element(Fraction(text))
            except (ValueError, ZeroDivisionError) as e:
                raise FieldError(f"bad rational coefficient {text!r}: {e}")
        if self.extension_modulus is not None:
            return self.element(univariate.parse_dense(text, self.characteristic, self.symbol))
        try:
            return self.element(Fraction(text))
        except ValueError:
            raise FieldError(f"bad F_{self.characteristic} coefficient {text!r}")

    def __str__(self) -> str:
        if self.is_rational:
            return "Q"
        if self.is_prime_field:
            return f"F_{self.characteristic}"
        modulus = univariate.format_dense(self.extension_modulus, self.symbol)
        return f"F_{self.characteristic}[{self.symbol}]/({modulus})"


@dataclass(frozen=True)
class FieldElem:
    """
    Element of a FieldCtx. value is a Fraction in characteristic 0 and a
    residue tuple (low degree first, empty for zero) otherwise.
    """
    ctx: FieldCtx
    value: Union[Fraction, Dense]

    def _coerce(self, other: Scalar) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise FieldError(f"mixed contexts: {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.element(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.value

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ctx.characteristic
        if p == 0:
            return FieldElem(self.ctx, self.value + other.value)
        return FieldElem(self.ctx, univariate.add(self.value, other.value, p))

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        p = self.ctx.characteristic
        if p == 0:
            return FieldElem(self.ctx, -self.value)
        return FieldElem(self.ctx, univariate.scale(self.value, -1, p))

    def __sub__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "FieldElem":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ctx.characteristic
        if p == 0:
            return FieldElem(self.ctx, self.value * other.value)
        product_ = univariate.mul(self.value, other.value, p)
        if self.ctx.extension_modulus is not None:
            product_ = univariate.mod(product_, self.ctx.extension_modulus, p)
        return FieldElem(self.ctx, product_)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError(f"zero has no inverse in {self.ctx}")
        p = self.ctx.characteristic
        if p == 0:
            return FieldElem(self.ctx, 1 / self.value)
        if self.ctx.extension_modulus is None:
            return FieldElem(self.ctx, (pow(self.value[0], -1, p),))
        d, s, _ = univariate.ext_gcd(self.value, self.ctx.extension_modulus, p)
        if d != (1,):
            raise FieldError(f"{self} is not invertible modulo the extension polynomial")
        return FieldElem(self.ctx, univariate.mod(s, self.ctx.extension_modulus, p))

    def __truediv__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "FieldElem":
        return self.inverse() * other

    def __pow__(self, exponent: int) -> "FieldElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.ctx.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.ctx.element(other).value
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.value))

    def as_integer(self) -> Optional[int]:
        """The integer value when this is an integer of Q or an element of F_p."""
        if self.ctx.is_rational:
            return self.value.numerator if self.value.denominator == 1 else None
        if self.ctx.is_prime_field:
            return self.value[0] if self.value else 0
        return None

    def __str__(self) -> str:
        return self.ctx.format_element(self)

    def __repr__(self) -> str:
        return f"FieldElem({self}, {self.ctx})"


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """
    Apply one of add/sub/mul/div to two elements of the same context.

    Raises:
        FieldError: mixed contexts or unknown op
        ZeroDivisionError: op == 'div' and b == 0
    """
    if a.ctx != b.ctx:
        raise FieldError(f"mixed contexts: {a.ctx} and {b.ctx}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown field operation {op!r}")
