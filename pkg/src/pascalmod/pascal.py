"""Rows of Pascal's triangle mod p and their base-p values.

Every quantity here is computed along at least two independent routes
(direct row construction, Lucas digit products, leading-digit recursion,
Fermat-number products) so the routes can be checked against each other.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .basep import DigitWord, ensure_prime, rep, scale_table
from .report import CheckReport

# Ascending sweeps dominate usage, so remember the last row per modulus and
# extend it in O(n); random access below the cache recomputes with a two-row
# buffer.  Guarded by a lock; results are copied out.
_row_cache: dict[int, tuple[int, list[int]]] = {}
_row_lock = threading.Lock()


@dataclass(frozen=True)
class ResidueRow:
    """Row n of Pascal's triangle mod p: coeffs[i] = C(n,i) mod p."""

    n: int
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError("row length must be n+1")

    def value(self) -> int:
        """The base-p numeral whose digit at p**i is coeffs[i]."""
        total = 0
        for c in reversed(self.coeffs):
            total = total * self.p + c
        return total

    def mask_value(self) -> int:
        """Base-2 value of the zero/nonzero mask of the row."""
        total = 0
        for c in reversed(self.coeffs):
            total = 2 * total + (1 if c else 0)
        return total

    def word(self) -> str:
        sep = "" if self.p <= 10 else "."
        return sep.join(str(c) for c in self.coeffs)


def _next_row(prev: list[int], p: int) -> list[int]:
    return [1] + [(a + b) % p for a, b in zip(prev, prev[1:])] + [1]


def row(n: int, p: int) -> ResidueRow:
    """Row n mod p via the additive Pascal rule (no divisions, O(n) memory)."""
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("row index must be non-negative")
    with _row_lock:
        cached_n, cached = _row_cache.get(p, (-1, []))
        current = list(cached) if 0 <= cached_n <= n else [1]
        start = cached_n if 0 <= cached_n <= n else 0
    for _ in range(start, n):
        current = _next_row(current, p)
    with _row_lock:
        stored_n, _ = _row_cache.get(p, (-1, []))
        if n > stored_n:
            _row_cache[p] = (n, list(current))
    return ResidueRow(n, p, tuple(current))


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n,k) mod p by digit-pairwise products (Lucas), never full factorials."""
    p = ensure_prime(p)
    if n < 0 or k < 0:
        raise ValueError("binom_mod needs non-negative arguments")
    if k > n:
        return 0
    result = 1
    while k or n:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        result = result * comb(nd, kd) % p
    return result


def row_value(n: int, p: int) -> int:
    """The integer whose base-p expansion is row n of the triangle mod p."""
    return row(n, p).value()


def _leading_split(n: int, p: int) -> tuple[int, int, int]:
    # n = d * p**k + s with d in 1..p-1 the leading digit and s = n mod p**k
    k = 0
    power = 1
    while power * p <= n:
        power *= p
        k += 1
    return n // power, k, n % power


@lru_cache(maxsize=None)
def row_value_recursive(n: int, p: int) -> int:
    """row_value by recursion on the leading base-p digit of n.

    With n = d*p**k + s, the row value is the sum over m = 0..d of
    p**(m*p**k) times the value of row s with each digit scaled by
    C(d,m) mod p.  Subresults are memoized per (n, p).
    """
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("row index must be non-negative")
    if n == 0:
        return 1
    d, k, s = _leading_split(n, p)
    sub_digits = rep(row_value_recursive(s, p), p).digits
    total = 0
    for m in range(d, -1, -1):
        table = scale_table(d, m, p)
        block = 0
        for digit in reversed(sub_digits):
            block = block * p + table[digit]
        total += block * p ** (m * p**k)
    return total


def row_concat(n: int, p: int) -> ResidueRow:
    """Row n built by concatenating scaled copies of row s, s = n mod p**k.

    The copies are separated by p**k - s - 1 zero entries; the construction
    recurses on s and must agree entry-wise with row(n, p).
    """
    p = ensure_prime(p)
    if n < 1:
        raise ValueError("row_concat needs n >= 1")
    d, k, s = _leading_split(n, p)
    base = row_concat(s, p).coeffs if s >= 1 else (1,)
    gap = (0,) * (p**k - s - 1)
    coeffs: list[int] = []
    for m in range(d + 1):
        table = scale_table(d, m, p)
        coeffs.extend(table[c] for c in base)
        if m < d:
            coeffs.extend(gap)
    return ResidueRow(n, p, tuple(coeffs))


@lru_cache(maxsize=None)
def fermat_number(j: int) -> int:
    """2**(2**j) + 1."""
    if j < 0:
        raise ValueError("Fermat index must be non-negative")
    return (1 << (1 << j)) + 1


def fermat_product(n: int) -> int:
    """Product of Fermat numbers over the set bits of n (empty product is 1)."""
    if n < 0:
        raise ValueError("fermat_product needs n >= 0")
    result = 1
    j = 0
    while n:
        if n & 1:
            result *= fermat_number(j)
        n >>= 1
        j += 1
    return result


def row_mask_value(n: int, p: int) -> int:
    """Base-2 value of the zero/nonzero mask of row n mod p.

    Coincides with row_value for p = 2, and for general p satisfies the
    product law mask(n) = mask(s) * sum(2**(m*p**k) for m = 0..d).
    """
    return row(n, p).mask_value()


def growth_witness(p: int, n_max: int) -> CheckReport:
    """Verify the growth bounds that rule out polynomial growth of row values.

    Checks value(n + 2p) >= (p+1)**2 * value(n) and
    value(n) >= (p+1)**floor(n/p) for all n <= n_max.
    """
    p = ensure_prime(p)
    if n_max < 2 * p:
        raise ValueError("growth_witness needs n_max >= 2p")
    report = CheckReport(name=f"growth-witness p={p} n<={n_max}")
    values = [row_value(n, p) for n in range(n_max + 2 * p + 1)]
    factor = (p + 1) ** 2
    for n in range(n_max + 1):
        report.checked += 1
        if values[n + 2 * p] < factor * values[n]:
            report.fail(f"value({n + 2 * p}) < {factor}*value({n})")
        if values[n] < (p + 1) ** (n // p):
            report.fail(f"value({n}) < (p+1)^({n}//{p})")
    return report


def clear_caches() -> None:
    """Drop memoized rows and values (test isolation hook)."""
    with _row_lock:
        _row_cache.clear()
    row_value_recursive.cache_clear()
    fermat_number.cache_clear()


def row_word(n: int, p: int) -> DigitWord:
    """Row n as a digit word (digit i of the value at p**i)."""
    return DigitWord(row(n, p).coeffs, p)
