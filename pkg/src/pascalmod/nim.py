"""The carry-free step map m -> m (+) p*m, its inverse, and the sets it generates.

For p = 2 the image of the step map is exactly the evil numbers (even
number of ones in binary), the images of the Gray-code permutation
enumerate it in step order, and iterating the map from odious seeds
partitions the image into disjoint chains.  For general p the image is
the set of integers whose alternating base-p digit sum vanishes mod p.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basep import alt_digit_sum, digit_sum, ensure_prime, nim_add, rep
from .report import CheckReport


def nim_step(m: int, p: int = 2) -> int:
    """m (+)_p p*m: the carry-free step map; sends row value n-1 to row value n."""
    return nim_add(m, p * m, p)


def nim_step_inverse(e: int, p: int = 2) -> int | None:
    """The unique m with nim_step(m, p) == e, or None when e is not in the image.

    Existence is equivalent to alt_digit_sum(e, p) == 0; the digits of m
    are then recovered by the forward sweep m_i = (e_i - m_{i-1}) mod p,
    which never needs backtracking.
    """
    p = ensure_prime(p)
    if e < 0:
        raise ValueError("inverse is defined for non-negative integers")
    if alt_digit_sum(e, p) != 0:
        return None
    m = 0
    shift = 1
    prev = 0
    for digit in rep(e, p).digits:
        prev = (digit - prev) % p
        m += prev * shift
        shift *= p
    # the sweep's final digit is forced to 0 by the alternating-sum condition,
    # which makes m one digit shorter than e
    return m


def is_evil(n: int) -> bool:
    """Even number of ones in the binary expansion of n."""
    if n < 0:
        raise ValueError("parity classes are defined for non-negative integers")
    return digit_sum(n, 2) % 2 == 0


def is_odious(n: int) -> bool:
    """Odd number of ones in the binary expansion of n."""
    return not is_evil(n)


def in_step_image(n: int, p: int = 2) -> bool:
    """Whether n is a value of the step map (alternating digit sum 0 mod p)."""
    return alt_digit_sum(n, p) == 0


def evil_nth(m: int) -> int:
    """The m-th evil number in increasing order, starting evil_nth(0) == 0.

    Append the parity-fixing bit to the binary expansion of m.
    """
    if m < 0:
        raise ValueError("rank must be non-negative")
    return 2 * m + digit_sum(m, 2) % 2


def step_image_nth(m: int, p: int = 2) -> int:
    """The m-th element of the step-map image in increasing order.

    Append the unique digit that makes the alternating sum vanish to the
    base-p expansion of m; for p = 2 this is exactly evil_nth.
    """
    p = ensure_prime(p)
    if m < 0:
        raise ValueError("rank must be non-negative")
    return p * m + alt_digit_sum(m, p)


def gray_code(m: int, p: int = 2) -> int:
    """m (+)_p floor(m/p): the binary Gray code at p = 2, a permutation for every p."""
    p = ensure_prime(p)
    if m < 0:
        raise ValueError("gray_code is defined for non-negative integers")
    return nim_add(m, m // p, p)


def gray_link(m: int, p: int = 2) -> tuple[int, int]:
    """(image element ranked by the Gray code, step-map value); the pair is equal.

    Returns (step_image_nth(gray_code(m)), nim_step(m)) so callers can check
    the identity rather than assume it.
    """
    return step_image_nth(gray_code(m, p), p), nim_step(m, p)


@dataclass(frozen=True)
class ChainRecord:
    """Iterates of the step map from a root: iterates[j] = step^(j+1)(root)."""

    root: int
    p: int
    iterates: tuple[int, ...]

    def __post_init__(self):
        prev = self.root
        for x in self.iterates:
            if x <= prev:
                raise ValueError("step-map iterates must strictly increase")
            prev = x


def iterate_chain(root: int, count: int, p: int = 2) -> ChainRecord:
    """Apply the step map `count` times starting from root >= 1."""
    p = ensure_prime(p)
    if root < 1:
        raise ValueError("chain root must be >= 1")
    if count < 0:
        raise ValueError("iteration count must be non-negative")
    iterates = []
    x = root
    for _ in range(count):
        x = nim_step(x, p)
        iterates.append(x)
    return ChainRecord(root, p, tuple(iterates))


def odious_root(e: int) -> tuple[int, int]:
    """Pull an evil number e back through the step map until an odious root appears.

    Returns (root, depth) with step^depth(root) == e.  Raises for e odious
    or zero, which belong to no chain.
    """
    if e < 1 or is_odious(e):
        raise ValueError("odious_root needs a positive evil number")
    x = e
    depth = 0
    while is_evil(x):
        x = nim_step_inverse(x, 2)
        depth += 1
    return x, depth


def chain_partition_check(limit: int) -> CheckReport:
    """Verify that the step-map values up to `limit` are exactly the evil numbers
    in [1, limit] and that each lies in exactly one odious-rooted chain."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    report = CheckReport(name=f"chain-partition limit={limit}")
    image = {nim_step(m, 2) for m in range(1, limit + 1) if nim_step(m, 2) <= limit}
    evil = {n for n in range(1, limit + 1) if is_evil(n)}
    report.checked = len(evil)
    if image != evil:
        extra = sorted(image - evil)[:3]
        missing = sorted(evil - image)[:3]
        report.fail(f"image/evil mismatch: extra={extra} missing={missing}")
        return report
    chains: dict[int, dict[int, int]] = {}
    for e in sorted(evil):
        root, depth = odious_root(e)
        slot = chains.setdefault(root, {})
        if depth in slot:
            report.fail(f"{e} and {slot[depth]} both claim chain {root} depth {depth}")
        slot[depth] = e
    for root, members in chains.items():
        replay = root
        for depth in sorted(members):
            while replay != members[depth] and replay <= limit:
                replay = nim_step(replay, 2)
            if replay != members[depth]:
                report.fail(f"chain {root} does not reach {members[depth]}")
                break
    report.details["chain_roots"] = sorted(chains)
    return report
