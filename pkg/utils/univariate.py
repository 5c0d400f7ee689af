"""
Dense univariate polynomials over a prime field F_p.
Coefficient tuples are stored low degree first; the zero polynomial is ().
Used for extension moduli, the Rabin irreducibility test and residue arithmetic.
"""

import re
from itertools import product
from typing import Dict, Iterator, Sequence, Tuple

from loguru import logger
from sympy import primefactors

Dense = Tuple[int, ...]


class UnivariateError(ValueError):
    """Custom exception for malformed dense univariate input."""
    pass


def normalize(coeffs: Sequence[int], p: int) -> Dense:
    """Reduce coefficients mod p and strip trailing zeros."""
    reduced = [c % p for c in coeffs]
    while reduced and reduced[-1] == 0:
        reduced.pop()
    return tuple(reduced)


def degree(f: Dense) -> int:
    """Degree of f, -1 for the zero polynomial."""
    return len(f) - 1


def is_monic(f: Dense) -> bool:
    return bool(f) and f[-1] == 1


def add(f: Dense, g: Dense, p: int) -> Dense:
    size = max(len(f), len(g))
    return normalize(
        [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(size)], p
    )


def sub(f: Dense, g: Dense, p: int) -> Dense:
    size = max(len(f), len(g))
    return normalize(
        [(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(size)], p
    )


def mul(f: Dense, g: Dense, p: int) -> Dense:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return normalize(out, p)


def scale(f: Dense, c: int, p: int) -> Dense:
    return normalize([a * c for a in f], p)


def divmod_poly(f: Dense, g: Dense, p: int) -> Tuple[Dense, Dense]:
    """
    Euclidean division over F_p.

    Args:
        f: Dividend
        g: Nonzero divisor
        p: Prime modulus

    Returns:
        (quotient, remainder) with deg(remainder) < deg(g)
    """
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(f)
    dg = degree(g)
    inv_lead = pow(g[-1], -1, p)
    quot = [0] * max(len(f) - dg, 0)
    for shift in range(len(f) - 1 - dg, -1, -1):
        c = rem[shift + dg] * inv_lead % p
        if c == 0:
            continue
        quot[shift] = c
        for j, b in enumerate(g):
            rem[shift + j] = (rem[shift + j] - c * b) % p
    return normalize(quot, p), normalize(rem, p)


def mod(f: Dense, g: Dense, p: int) -> Dense:
    return divmod_poly(f, g, p)[1]


def make_monic(f: Dense, p: int) -> Dense:
    if not f:
        return ()
    return scale(f, pow(f[-1], -1, p), p)


def gcd(f: Dense, g: Dense, p: int) -> Dense:
    """Monic gcd over F_p."""
    while g:
        f, g = g, mod(f, g, p)
    return make_monic(f, p)


def ext_gcd(f: Dense, g: Dense, p: int) -> Tuple[Dense, Dense, Dense]:
    """Return (d, s, t) with s*f + t*g = d, d monic."""
    r0, r1 = f, g
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = divmod_poly(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return (), s0, t0
    inv = pow(r0[-1], -1, p)
    return scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)


def powmod(base: Dense, exponent: int, modulus: Dense, p: int) -> Dense:
    """Square-and-multiply base^exponent mod modulus."""
    result: Dense = mod((1,), modulus, p)
    base = mod(base, modulus, p)
    while exponent > 0:
        if exponent & 1:
            result = mod(mul(result, base, p), modulus, p)
        base = mod(mul(base, base, p), modulus, p)
        exponent >>= 1
    return result


def evaluate(f: Dense, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _frobenius_power(k: int, modulus: Dense, p: int) -> Dense:
    """X^(p^k) mod modulus, by k successive p-th powerings."""
    h: Dense = mod((0, 1), modulus, p)
    for _ in range(k):
        h = powmod(h, p, modulus, p)
    return h


def rabin_irreducible(P: Dense, p: int) -> bool:
    """
    Rabin's irreducibility test over F_p.

    P of degree N is irreducible iff X^(p^N) = X (mod P) and
    gcd(X^(p^(N/q)) - X, P) = 1 for every prime q dividing N.

    Args:
        P: Monic polynomial, degree N >= 1
        p: Prime

    Returns:
        True iff P is irreducible over F_p
    """
    P = normalize(P, p)
    if not is_monic(P):
        raise UnivariateError(f"irreducibility test needs a monic polynomial, got {P}")
    n = degree(P)
    if n < 1:
        raise UnivariateError("irreducibility test needs degree >= 1")
    if n == 1:
        return True

    x = mod((0, 1), P, p)
    for q in primefactors(n):
        h = _frobenius_power(n // q, P, p)
        if gcd(sub(h, x, p), P, p) != (1,):
            return False
    return _frobenius_power(n, P, p) == x


def monic_polynomials(p: int, n: int) -> Iterator[Dense]:
    """
    All monic degree-n polynomials over F_p in the fixed enumeration order:
    the lower coefficients c_0..c_{n-1} read as base-p digits of a counter,
    c_0 least significant.
    """
    for digits in product(range(p), repeat=n):
        yield tuple(reversed(digits)) + (1,)


def find_irreducible(p: int, n: int) -> Dense:
    """
    Deterministic construction of a monic irreducible polynomial of degree n.

    Returns the first irreducible polynomial in monic_polynomials(p, n), so the
    output depends only on (p, n).
    """
    if n < 1:
        raise UnivariateError(f"degree must be >= 1, got {n}")
    for candidate in monic_polynomials(p, n):
        if rabin_irreducible(candidate, p):
            logger.debug(f"Irreducible of degree {n} over F_{p}: {format_dense(candidate)}")
            return candidate
    raise UnivariateError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


def format_dense(f: Dense, var: str = "t") -> str:
    """Render f as e.g. 't^2+2*t+1'; the zero polynomial renders as '0'."""
    pieces = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if c == 0:
            continue
        if k == 0:
            pieces.append(str(c))
            continue
        mono = var if k == 1 else f"{var}^{k}"
        pieces.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(pieces) if pieces else "0"


def parse_dense(text: str, p: int, var: str = "t") -> Dense:
    """Inverse of format_dense; accepts signed integer coefficients too."""
    compact = text.replace(" ", "")
    if not re.fullmatch(r"(?:[+-]?[^+-]+)+", compact):
        raise UnivariateError(f"cannot parse polynomial {text!r}")
    term = re.compile(rf"(?P<coeff>\d+)?(?:\*?(?P<var>{re.escape(var)})(?:\^(?P<exp>\d+))?)?")
    coeffs: Dict[int, int] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", compact):
        match = term.fullmatch(body)
        if not match or not (match.group("coeff") or match.group("var")):
            raise UnivariateError(f"cannot parse term {body!r} in {text!r}")
        coeff = int(match.group("coeff") or 1) * (-1 if sign == "-" else 1)
        exp = int(match.group("exp") or 1) if match.group("var") else 0
        coeffs[exp] = coeffs.get(exp, 0) + coeff
    return normalize([coeffs.get(k, 0) for k in range(max(coeffs) + 1)], p)
