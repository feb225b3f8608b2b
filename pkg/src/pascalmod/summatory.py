"""Exact summatory functions for the evil numbers and the base-2 step map.

The step-map values over a dyadic interval [2^k, 2^(k+1)) are a permutation
of the evil numbers over the same interval, which yields a closed form for
the partial sums of the step map from the closed form for the evil numbers
plus Gray-code range sums.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basep import digit_sum
from .nim import evil_nth, gray_code, nim_step
from .report import CheckReport


def evil_sum(M: int) -> int:
    """Sum of the first M evil numbers evil_nth(1) + ... + evil_nth(M), closed form."""
    if M < 0:
        raise ValueError("summation bound must be non-negative")
    if M == 0:
        return 0
    r = M % 2
    s = digit_sum(M // 2, 2) % 2
    return (
        M * (M + 1)
        + M // 2
        - r * (r + 1) // 2
        + s * (r + 1)
        + 2 * max(0, r - s)
    )


def step_sum(M: int, p: int = 2) -> int:
    """Direct summation of the step map: nim_step(1) + ... + nim_step(M)."""
    if M < 0:
        raise ValueError("summation bound must be non-negative")
    return sum(nim_step(i, p) for i in range(1, M + 1))


def gray_range_sum(k: int, ell: int) -> int:
    """Sum of gray_code(j) for j in [2^k, 2^k + ell], by halving recursion.

    Pairing consecutive terms halves the interval: the paired sums satisfy
    gray(4n) + gray(4n+1) = 4*gray(2n) + 1 and likewise for the odd pairs,
    with the last term kept separate when the interval has odd length.
    Only the base case k = 1 is summed directly.
    """
    if k < 1:
        raise ValueError("gray_range_sum needs k >= 1")
    if not 0 <= ell < 2**k:
        raise ValueError(f"offset {ell} outside [0, 2^{k})")
    if k == 1:
        return sum(gray_code(j) for j in range(2, 3 + ell))
    if ell == 0:
        return gray_code(2**k)
    half = (ell - 1) // 2
    total = 4 * gray_range_sum(k - 1, half) + half + 1
    if ell % 2 == 0:
        total += gray_code(2**k + ell)
    return total


def _step_minus_evil_offset(j: int) -> int:
    # nim_step(j) - evil_nth(j) - 2*(gray_code(j) - j); always in {-1, 0, 1}
    return nim_step(j) - evil_nth(j) - 2 * (gray_code(j) - j)


def step_sum_closed(M: int) -> int:
    """step_sum(M) without direct summation, for M >= 1.

    With k the bit length of M minus one, the sum decomposes into the evil
    closed form, twice a Gray-code range sum, an arithmetic-progression
    correction, and a residual.  The residual vanishes for odd M because the
    per-index offsets cancel in consecutive pairs; for even M the single
    unpaired offset at M is computed exactly.
    """
    if M < 1:
        raise ValueError("step_sum_closed needs M >= 1")
    if M == 1:
        return nim_step(1)
    k = M.bit_length() - 1
    ell = M - 2**k
    residual = 0 if M % 2 else _step_minus_evil_offset(M)
    return (
        evil_sum(M)
        + 2 * gray_range_sum(k, ell)
        - (M - 2**k + 1) * (2**k + M)
        + residual
    )


@dataclass(frozen=True)
class DyadicIntervalReport:
    """Behavior of step_sum - evil_sum over one dyadic interval [2^k, 2^(k+1)).

    The difference vanishes at both ends (at 2^k - 1 and 2^(k+1) - 1) and
    peaks at 2^k + 2^(k-1) - 1; parabola_samples holds (M, difference,
    parabola) rows where the parabola is -2M^2 + 6*2^k*M - 4*2^(2k).
    """

    k: int
    max_difference: int
    argmax: int
    parabola_samples: tuple[tuple[int, int, int], ...]


def _parabola(k: int, M: int) -> int:
    return -2 * M * M + 6 * 2**k * M - 4 * 2 ** (2 * k)


def dyadic_report(k: int, max_samples: int = 16384) -> DyadicIntervalReport:
    """Sweep the interval [2^k, 2^(k+1)), verifying peak location and value.

    Every point is swept for k <= 14; larger intervals are sampled with a
    stride (the peak is still verified exactly from the closed forms).
    """
    if k < 2:
        raise ValueError("dyadic_report needs k >= 2")
    lo, hi = 2**k, 2 ** (k + 1)
    expected_argmax = 2**k + 2 ** (k - 1) - 1
    expected_max = evil_sum(hi - 1) - 2 * evil_sum(expected_argmax) + evil_sum(lo - 1)

    stride = 1 if hi - lo <= max_samples else (hi - lo) // max_samples
    samples = []
    if stride == 1:
        diff = 0
        best, best_at = None, None
        for M in range(lo, hi):
            diff += nim_step(M) - evil_nth(M)
            if best is None or diff > best:
                best, best_at = diff, M
            samples.append((M, diff, _parabola(k, M)))
        if diff != 0:
            raise ArithmeticError(f"difference at 2^{k + 1}-1 is {diff}, expected 0")
        if (best, best_at) != (expected_max, expected_argmax):
            raise ArithmeticError(
                f"peak {best} at {best_at}, expected {expected_max} at {expected_argmax}"
            )
    else:
        for M in range(lo, hi, stride):
            diff = step_sum_closed(M) - evil_sum(M)
            if diff > expected_max:
                raise ArithmeticError(f"difference at {M} exceeds the closed-form peak")
            samples.append((M, diff, _parabola(k, M)))
        peak = step_sum_closed(expected_argmax) - evil_sum(expected_argmax)
        if peak != expected_max:
            raise ArithmeticError(
                f"peak at {expected_argmax} is {peak}, expected {expected_max}"
            )
    return DyadicIntervalReport(
        k=k,
        max_difference=expected_max,
        argmax=expected_argmax,
        parabola_samples=tuple(samples),
    )


def gray_offset_check(limit: int) -> CheckReport:
    """Check the per-index offset law and its pairwise cancellation.

    For every j the offset nim_step(j) - evil_nth(j) - 2*(gray_code(j) - j)
    lies in {-1, 0, 1}; offsets at 2j and 2j+1 cancel; and the even/odd
    halves satisfy nim_step(2j) = 2*gray_code(2j) and
    nim_step(2j+1) = 2*gray_code(2j+1) + 1.
    """
    if limit < 2:
        raise ValueError("limit must be >= 2")
    report = CheckReport(name=f"gray-offset limit={limit}")
    for j in range(1, limit + 1):
        report.checked += 1
        if _step_minus_evil_offset(j) not in (-1, 0, 1):
            report.fail(f"offset at {j} outside -1..1")
        if _step_minus_evil_offset(2 * j) + _step_minus_evil_offset(2 * j + 1) != 0:
            report.fail(f"offsets at {2 * j}, {2 * j + 1} do not cancel")
        if nim_step(2 * j) != 2 * gray_code(2 * j):
            report.fail(f"even half-law fails at {2 * j}")
        if nim_step(2 * j + 1) != 2 * gray_code(2 * j + 1) + 1:
            report.fail(f"odd half-law fails at {2 * j + 1}")
    return report


def difference_csv(start: int, end: int) -> str:
    """CSV rows "M,diff" of step_sum - evil_sum over [start, end)."""
    if not 0 <= start <= end:
        raise ValueError("invalid range")
    lines = ["M,diff"]
    diff = step_sum(start - 1) - evil_sum(start - 1) if start >= 1 else 0
    for M in range(start, end):
        diff += nim_step(M) - evil_nth(M) if M >= 1 else 0
        lines.append(f"{M},{diff}")
    return "\n".join(lines) + "\n"


def parabola_csv(k: int, max_samples: int = 16384) -> str:
    """CSV rows "M,diff,parabola" for one dyadic interval."""
    rep = dyadic_report(k, max_samples)
    lines = ["M,diff,parabola"]
    for M, diff, par in rep.parabola_samples:
        lines.append(f"{M},{diff},{par}")
    return "\n".join(lines) + "\n"
