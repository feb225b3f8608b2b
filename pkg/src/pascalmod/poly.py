"""Integer polynomial identities behind the row-value sequences.

Two polynomials attach to each index n: the row polynomial (residues of
row n as coefficients) and the product expansion of (1+X^(p^i))^(n_i) over
the base-p digits n_i of n.  They agree exactly when the digit condition
holds; the defect polynomial records the difference otherwise.  Evaluating
the row polynomial at X=p recovers the row value, and other evaluation
points generate sibling sequences with the same recursive structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .basep import ensure_prime, rep
from .pascal import row


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; coeffs[i] is the coefficient of X**i.

    Canonical form: no trailing zero coefficient (the zero polynomial has an
    empty coefficient tuple).
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        cs = tuple(self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(tuple(out))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] -= c
        return IntPolynomial(tuple(out))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        # schoolbook convolution; degrees stay desk-scale here
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __call__(self, x: int) -> int:
        return eval_at(self, x)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*X" if c != 1 else "X")
            else:
                parts.append(f"{c}*X^{i}" if c != 1 else f"X^{i}")
        return " + ".join(parts)


ONE = IntPolynomial((1,))


def row_polynomial(n: int, p: int) -> IntPolynomial:
    """Polynomial with coefficient C(n,j) mod p at X**j; value at X=p is the row value."""
    return IntPolynomial(row(n, p).coeffs)


def product_polynomial(n: int, p: int) -> IntPolynomial:
    """Exact integer expansion of prod_i (1 + X**(p**i))**(n_i) over the digits of n."""
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("index must be non-negative")
    result = ONE
    for i, digit in enumerate(rep(n, p).digits):
        if digit == 0:
            continue
        factor = IntPolynomial((1,) + (0,) * (p**i - 1) + (1,))
        for _ in range(digit):
            result = result * factor
    return result


def digit_condition(n: int, p: int) -> bool:
    """True iff every choice of digits d_i <= n_i keeps prod C(n_i, d_i) below p.

    The maximum over digit choices factors into per-digit maxima, so no
    exponential enumeration is needed.
    """
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("index must be non-negative")
    best = 1
    for digit in rep(n, p).digits:
        best *= max(comb(digit, d) for d in range(digit + 1))
        if best >= p:
            return False
    return True


def defect_polynomial(n: int, p: int) -> IntPolynomial:
    """product_polynomial minus row_polynomial; zero exactly when the digit condition holds."""
    return product_polynomial(n, p) - row_polynomial(n, p)


def eval_at(poly: IntPolynomial, x: int) -> int:
    """Exact Horner evaluation at a non-negative integer point."""
    if x < 0:
        raise ValueError("evaluation point must be non-negative")
    total = 0
    for c in reversed(poly.coeffs):
        total = total * x + c
    return total
