"""Base-p digit arithmetic: representations, carry-free addition, digit statistics.

Digits are stored least-significant-first internally; rendering is
most-significant-first.  All integers are arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check (desk-scale moduli)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Prime(int):
    """An int validated to be prime at construction time."""

    def __new__(cls, value: int) -> "Prime":
        if not is_prime(int(value)):
            raise ValueError(f"{value} is not a prime")
        return super().__new__(cls, value)


def ensure_prime(p: int) -> int:
    """Validate a modulus, accepting plain ints as well as Prime instances."""
    if not is_prime(int(p)):
        raise ValueError(f"modulus {p} is not a prime")
    return int(p)


@dataclass(frozen=True)
class DigitWord:
    """A canonical base-`base` digit word; `digits[i]` is the coefficient of base**i.

    The integer 0 is the empty word.  Construction strips most-significant
    zeros, so ``value -> word -> value`` round-trips exactly.
    """

    digits: tuple[int, ...]
    base: int

    def __post_init__(self):
        p = ensure_prime(self.base)
        ds = tuple(self.digits)
        for d in ds:
            if not 0 <= d < p:
                raise ValueError(f"digit {d} out of range for base {p}")
        while ds and ds[-1] == 0:
            ds = ds[:-1]
        object.__setattr__(self, "digits", ds)

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        if not self.digits:
            return ""
        if self.base <= 10:
            return "".join(str(d) for d in reversed(self.digits))
        return ".".join(str(d) for d in reversed(self.digits))

    @classmethod
    def parse(cls, text: str, p: int) -> "DigitWord":
        """Parse a most-significant-first digit string ("43", base 5 -> 23)."""
        parts = list(text.split(".")) if "." in text else list(text)
        digits = tuple(int(c) for c in reversed(parts)) if text else ()
        return cls(digits, p)

    def value(self) -> int:
        return val_digits(self.digits, self.base)


def rep(n: int, p: int) -> DigitWord:
    """Base-p representation of n >= 0 (0 becomes the empty word)."""
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("rep is defined for non-negative integers")
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return DigitWord(tuple(digits), p)


def val_digits(digits: Iterable[int], p: int) -> int:
    """Evaluate least-significant-first digits in base p; range-checks digits."""
    p = ensure_prime(p)
    total = 0
    shift = 1
    for d in digits:
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range for base {p}")
        total += d * shift
        shift *= p
    return total


def val(w: DigitWord | Sequence[int], p: int | None = None) -> int:
    """Evaluate a digit word; leading (most-significant) zeros are ignored."""
    if isinstance(w, DigitWord):
        return val_digits(w.digits, w.base)
    if p is None:
        raise ValueError("val of a raw digit sequence needs an explicit base")
    return val_digits(w, p)


def nim_add(m: int, n: int, p: int) -> int:
    """Digit-wise addition mod p without carries (XOR of expansions at p=2)."""
    p = ensure_prime(p)
    if m < 0 or n < 0:
        raise ValueError("nim_add is defined for non-negative integers")
    if p == 2:
        return m ^ n
    total = 0
    shift = 1
    while m or n:
        total += ((m + n) % p) * shift
        m //= p
        n //= p
        shift *= p
    return total


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n."""
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("digit_sum is defined for non-negative integers")
    total = 0
    while n:
        n, d = divmod(n, p)
        total += d
    return total


def alt_digit_sum(n: int, p: int) -> int:
    """Alternating digit sum (d0 - d1 + d2 - ...) mod p, signs from the low end."""
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("alt_digit_sum is defined for non-negative integers")
    total = 0
    sign = 1
    while n:
        n, d = divmod(n, p)
        total += sign * d
        sign = -sign
    return total % p


def scale_table(a: int, b: int, p: int) -> tuple[int, ...]:
    """Value table of the digit permutation x -> C(a,b)*x mod p.

    Defined only when 0 <= b <= a < p and C(a,b) is nonzero mod p; the table
    is then a permutation of {0,...,p-1} fixing 0.
    """
    p = ensure_prime(p)
    if not 0 <= b <= a < p:
        raise ValueError(f"digit scaling needs 0 <= b <= a < p, got a={a}, b={b}")
    c = comb(a, b) % p
    if c == 0:
        raise ValueError(f"C({a},{b}) vanishes mod {p}; not a digit permutation")
    return tuple((c * x) % p for x in range(p))


def digit_scale(a: int, b: int, w: DigitWord) -> DigitWord:
    """Multiply every digit of w by C(a,b) mod p (a letter-wise permutation)."""
    table = scale_table(a, b, w.base)
    return DigitWord(tuple(table[d] for d in w.digits), w.base)


def digit_unscale(a: int, b: int, w: DigitWord) -> DigitWord:
    """Inverse of digit_scale: multiply digits by the inverse of C(a,b) mod p."""
    p = w.base
    c = comb(a, b) % p
    scale_table(a, b, p)  # validates (a, b)
    inv = pow(c, -1, p)
    return DigitWord(tuple((inv * d) % p for d in w.digits), p)
