"""Pascal's pyramid modulo p: trinomial residues, plane slices, and the
cube substitution that regenerates the whole pyramid from one seed cell.

A trinomial C(n; x, y, z) with x+y+z = n factors as C(n, z) * C(n-z, x),
so residues come from digit-pairwise binomial products.  Scaling a point
by p and adding a digit offset (a, b, c) multiplies the residue by
C(a+b+c, a) * C(b+c, b) when a+b+c < p and kills it otherwise, which is
exactly a 3D substitution rule expanding each cell into a p*p*p block.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .basep import ensure_prime, nim_add
from .pascal import binom_mod
from .report import CheckReport

# refuse cubes larger than this many cells (2**27)
CUBE_CELL_CAP = 1 << 27


def trinomial_mod(n: int, x: int, y: int, z: int, p: int) -> int:
    """C(n; x, y, z) mod p for x + y + z = n, via the two-binomial factorization."""
    p = ensure_prime(p)
    if min(x, y, z) < 0 or x + y + z != n:
        raise ValueError("trinomial needs non-negative x, y, z with x+y+z = n")
    first = binom_mod(n, z, p)
    if first == 0:
        return 0
    return first * binom_mod(n - z, x, p) % p


@dataclass(frozen=True)
class PyramidPlane:
    """The plane x + y + z = n of the pyramid mod p, sliced into lines.

    lines[k][i] = C(n; i, k-i, n-k) mod p; line 0 is the apex cell and line n
    is row n of Pascal's triangle mod p.
    """

    n: int
    p: int
    lines: tuple[tuple[int, ...], ...]

    def cell_count(self) -> int:
        return sum(len(line) for line in self.lines)

    def line_value(self, k: int) -> int:
        total = 0
        for c in reversed(self.lines[k]):
            total = total * self.p + c
        return total


def plane(n: int, p: int) -> PyramidPlane:
    """All (n+1)(n+2)/2 residues of the plane x + y + z = n."""
    p = ensure_prime(p)
    if n < 0:
        raise ValueError("plane index must be non-negative")
    lines = []
    for k in range(n + 1):
        lines.append(tuple(trinomial_mod(n, i, k - i, n - k, p) for i in range(k + 1)))
    return PyramidPlane(n, p, tuple(lines))


def line_value(n: int, k: int, p: int) -> int:
    """Base-p value of line k in plane n; line n recovers the triangle row value."""
    p = ensure_prime(p)
    if not 0 <= k <= n:
        raise ValueError("line index must satisfy 0 <= k <= n")
    total = 0
    for i in range(k, -1, -1):
        total = total * p + trinomial_mod(n, i, k - i, n - k, p)
    return total


def pyramid_rule_check(limit: int, p: int) -> CheckReport:
    """Verify the three-term recurrence of the pyramid mod p up to plane `limit`.

    Each cell of plane n is the mod-p sum of its three neighbors in plane
    n-1 (out-of-range neighbors contribute 0).
    """
    p = ensure_prime(p)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    report = CheckReport(name=f"pyramid-rule p={p} n<={limit}")
    prev = plane(0, p)
    for n in range(1, limit + 1):
        cur = plane(n, p)

        def prev_cell(i, j, zz):
            if min(i, j, zz) < 0:
                return 0
            return prev.lines[i + j][i]

        for k in range(n + 1):
            for i in range(k + 1):
                j = k - i
                zc = n - k
                expected = (
                    prev_cell(i - 1, j, zc) + prev_cell(i, j - 1, zc) + prev_cell(i, j, zc - 1)
                ) % p
                report.checked += 1
                if cur.lines[k][i] != expected:
                    report.fail(f"rule fails at plane {n}, point ({i},{j},{zc})")
        prev = cur
    return report


def line_step_check(limit: int) -> CheckReport:
    """Verify the carry-free recurrence between consecutive base-2 line values.

    value(i, j) = value(i-1, j) (+) value(i-1, j-1) (+) 2*value(i-1, j-1)
    with value(i, j) = 0 outside 0 <= j <= i.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    report = CheckReport(name=f"line-step limit={limit}")
    values: dict[tuple[int, int], int] = {}
    for i in range(limit + 1):
        for j in range(i + 1):
            values[(i, j)] = line_value(i, j, 2)
    for i in range(1, limit + 1):
        for j in range(i + 1):
            above = values.get((i - 1, j), 0)
            diag = values.get((i - 1, j - 1), 0)
            expected = nim_add(nim_add(above, diag, 2), 2 * diag, 2)
            report.checked += 1
            if values[(i, j)] != expected:
                report.fail(f"step recurrence fails at ({i},{j})")
    return report


def patch_translation_check(i: int, k: int, p: int) -> CheckReport:
    """Check the digit-block translation identity on plane i at scale p**k.

    For each point (x, y, z) of the plane with x < p**(k+1), write d for the
    k-th digit of x and a for the k-th digit of i - z.  When C(a, d) is
    invertible mod p, dividing the residue at (x, y, z) by C(a, d) must give
    the residue at the translated point (x - d*p**k, y + d*p**k, z); when
    C(a, d) vanishes mod p the residue itself must vanish (white regions map
    to white regions).  The report counts which case applied per cell and
    records the inverse multiplier used for each (a, d) pair.
    """
    p = ensure_prime(p)
    if i < p**k:
        raise ValueError("plane index must be at least p**k")
    report = CheckReport(name=f"patch-translation plane={i} k={k} p={p}")
    scale = p**k
    identity_cells = 0
    zero_cells = 0
    multipliers: dict[tuple[int, int], int] = {}
    for z in range(i + 1):
        a = (i - z) // scale % p
        for x in range(min(i - z, p * scale - 1) + 1):
            y = i - z - x
            d = x // scale % p
            value = trinomial_mod(i, x, y, z, p)
            report.checked += 1
            coeff = comb(a, d) % p if d <= a else 0
            if coeff == 0:
                zero_cells += 1
                if value != 0:
                    report.fail(f"nonzero residue {value} at ({x},{y},{z}) in a zero block")
                continue
            identity_cells += 1
            inv = pow(coeff, -1, p)
            multipliers[(a, d)] = inv
            translated = trinomial_mod(i, x - d * scale, y + d * scale, z, p)
            if value * inv % p != translated:
                report.fail(f"translation identity fails at ({x},{y},{z})")
    report.details["identity_cells"] = identity_cells
    report.details["zero_cells"] = zero_cells
    report.details["multipliers"] = multipliers
    return report


def block_relation(x: int, y: int, z: int, a: int, b: int, c: int, p: int) -> int:
    """Residue at the composite point (p*x + a, p*y + b, p*z + c) by the block law.

    Returns C(a+b+c, a) * C(b+c, b) * C(x+y+z; x, y, z) mod p when
    a + b + c < p, and 0 otherwise; agreement with trinomial_mod at the
    composite point is the module's central tested law.
    """
    p = ensure_prime(p)
    if not all(0 <= d < p for d in (a, b, c)):
        raise ValueError("offsets a, b, c must be digits below p")
    if min(x, y, z) < 0:
        raise ValueError("base point must be non-negative")
    if a + b + c >= p:
        return 0
    return (
        comb(a + b + c, a) * comb(b + c, b) % p
        * trinomial_mod(x + y + z, x, y, z, p)
        % p
    )


@dataclass(frozen=True)
class CubeSubstitution:
    """The p*p*p expansion rule of the pyramid: images[q][c, b, a] in axis
    order (z, y, x), so expansion is a Kronecker product of residue cubes."""

    p: int
    images: dict[int, np.ndarray]

    def image(self, q: int) -> np.ndarray:
        return self.images[q]


def cube_substitution(p: int) -> CubeSubstitution:
    """Build the substitution sending q to the cube q*C(a+b+c,a)*C(b+c,b) mod p."""
    p = ensure_prime(p)
    seed = np.zeros((p, p, p), dtype=np.int64)
    for c in range(p):
        for b in range(p):
            for a in range(p):
                if a + b + c < p:
                    seed[c, b, a] = comb(a + b + c, a) * comb(b + c, b) % p
    images = {q: (q * seed % p).astype(np.uint8) for q in range(p)}
    return CubeSubstitution(p, images)


@dataclass(frozen=True)
class PyramidCube:
    """A p**k side cube of pyramid residues; cells[z, y, x] so the flat
    layout is x + side*y + side**2*z."""

    p: int
    k: int
    cells: np.ndarray

    @property
    def side(self) -> int:
        return self.p**self.k

    def value(self, x: int, y: int, z: int) -> int:
        return int(self.cells[z, y, x])


def iterate_substitution(p: int, k: int) -> PyramidCube:
    """Expand the seed cell 1 through k rounds of the cube substitution.

    The resulting p**k cube holds C(x+y+z; x, y, z) mod p at (x, y, z); each
    round is a Kronecker product with the substitution seed because the rule
    is multiplicative in the cell value.
    """
    p = ensure_prime(p)
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    if p ** (3 * k) > CUBE_CELL_CAP:
        raise ValueError(f"cube of side {p}^{k} exceeds the {CUBE_CELL_CAP}-cell cap")
    seed = cube_substitution(p).images[1].astype(np.uint16)
    cells = np.ones((1, 1, 1), dtype=np.uint16)
    for _ in range(k):
        cells = np.kron(cells, seed) % p
    return PyramidCube(p, k, cells.astype(np.uint8))


def digit_quotient_check(p_values=(2, 3, 5, 7)) -> CheckReport:
    """Exhaustive check that 0 <= x <= y < p with x + y >= p forces x > (x+y)//p."""
    report = CheckReport(name="digit-quotient")
    for p in p_values:
        ensure_prime(p)
        for y in range(p):
            for x in range(y + 1):
                if x + y >= p:
                    report.checked += 1
                    if x <= (x + y) // p:
                        report.fail(f"p={p}: x={x}, y={y}")
    return report
