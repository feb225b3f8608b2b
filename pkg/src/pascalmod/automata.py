"""Finite automata over digit tuples: synchronized relations, minimization,
the uniform morphism behind the alternating-sum set, and an exact-rational
linear representation of the carry-free step map.

Machines record their reading direction ("msd" or "lsd") because padded
digit words can be consumed from either end: carry automata work from the
least significant digit, the step-pair acceptor from the most significant.
The two conventions never mix inside one machine.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .basep import ensure_prime, rep


@dataclass(frozen=True, eq=False)
class Dfa:
    """Deterministic automaton over digit symbols (ints or digit tuples).

    Transitions may be partial: a missing entry is an implicit transition
    to a rejecting sink, so the mapping is total over the declared alphabet.
    """

    state_count: int
    alphabet: tuple
    transitions: dict
    initial: int
    accepting: frozenset
    direction: str
    base: int
    arity: int

    def __post_init__(self):
        if self.direction not in ("msd", "lsd"):
            raise ValueError("direction must be 'msd' or 'lsd'")
        ensure_prime(self.base)

    def step(self, state: int | None, symbol) -> int | None:
        if state is None:
            return None
        return self.transitions.get((state, symbol))

    def run(self, word) -> list:
        """States visited while reading `word`; a None entry marks the sink."""
        path = [self.initial]
        state = self.initial
        for symbol in word:
            state = self.step(state, symbol)
            path.append(state)
            if state is None:
                break
        return path

    def accepts(self, word) -> bool:
        state = self.initial
        for symbol in word:
            state = self.step(state, symbol)
            if state is None:
                return False
        return state in self.accepting

    def accepts_values(self, *values: int) -> bool:
        """Accept the zero-padded digit encoding of a tuple of integers."""
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} integers, got {len(values)}")
        word = pad_tuple(values, self.base)
        if self.arity == 1:
            word = tuple(sym[0] for sym in word)
        if self.direction == "lsd":
            word = tuple(reversed(word))
        return self.accepts(word)

    def to_dot(self, name: str = "dfa") -> str:
        """DOT digraph, one line per transition, accepting states double-circled."""
        lines = [
            f"digraph {name} {{",
            f"  // reading direction: {self.direction}-first, base {self.base}, arity {self.arity}",
            "  rankdir=LR;",
            "  node [shape=circle];",
        ]
        for s in sorted(self.accepting):
            lines.append(f"  {s} [shape=doublecircle];")
        lines.append("  __start [shape=point];")
        lines.append(f"  __start -> {self.initial};")
        for (q, sym), r in sorted(self.transitions.items(), key=lambda kv: (kv[0][0], _symbol_key(kv[0][1]))):
            lines.append(f'  {q} -> {r} [label="{_render_symbol(sym)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def isomorphic(self, other: "Dfa") -> bool:
        """Structural equality up to a renumbering of reachable states."""
        return _canonical_key(self) == _canonical_key(other)


def _render_symbol(sym) -> str:
    if isinstance(sym, tuple):
        return "/".join(str(d) for d in sym)
    return str(sym)


def _symbol_key(sym):
    return sym if isinstance(sym, tuple) else (sym,)


def _canonical_key(d: Dfa):
    symbols = sorted(d.alphabet, key=_symbol_key)
    order = {d.initial: 0}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for sym in symbols:
            r = d.transitions.get((q, sym))
            if r is not None and r not in order:
                order[r] = len(order)
                queue.append(r)
    edges = tuple(
        (order[q], _symbol_key(sym), order[r])
        for (q, sym), r in d.transitions.items()
        if q in order and r in order
    )
    accepting = tuple(sorted(order[q] for q in d.accepting if q in order))
    return len(order), tuple(map(_symbol_key, symbols)), tuple(sorted(edges)), accepting


def pad_tuple(values, p: int) -> tuple:
    """Zero-padded digit-tuple word for a tuple of integers, most significant first."""
    p = ensure_prime(p)
    digit_lists = []
    for v in values:
        if v < 0:
            raise ValueError("padded encodings are defined for non-negative integers")
        digit_lists.append(rep(v, p).digits)
    length = max((len(ds) for ds in digit_lists), default=0)
    word = []
    for pos in range(length - 1, -1, -1):
        word.append(tuple(ds[pos] if pos < len(ds) else 0 for ds in digit_lists))
    return tuple(word)


def pad_pair(m: int, n: int, p: int) -> tuple:
    """Padded pair word for (m, n); the empty word encodes (0, 0)."""
    return pad_tuple((m, n), p)


def step_pair_dfa(p: int) -> Dfa:
    """Acceptor for the pairs (m, step(m)) read most significant digit first.

    State = the expected next digit of m.  Reading (a, b) requires a to match
    the expectation and predicts the digit below as (b - a) mod p, since each
    output digit is the sum of two adjacent input digits.  Valid pair words
    start with a zero-padded m digit, so the initial expectation is 0; the
    final expectation must be 0 again (no digit below the units).
    """
    p = ensure_prime(p)
    alphabet = tuple((a, b) for a in range(p) for b in range(p))
    transitions = {}
    for s in range(p):
        for b in range(p):
            transitions[(s, (s, b))] = (b - s) % p
    return Dfa(
        state_count=p,
        alphabet=alphabet,
        transitions=transitions,
        initial=0,
        accepting=frozenset({0}),
        direction="msd",
        base=p,
        arity=2,
    )


def affine_dfa(a: int, b: int, p: int) -> Dfa:
    """Acceptor for the pairs (m, a*m + b), least significant digit first.

    States are carry values, seeded with b; reading (x, y) from carry c
    requires y == (a*x + c) mod p and moves to carry (a*x + c) // p.
    Acceptance at carry 0 (nothing left to propagate).
    """
    p = ensure_prime(p)
    if a < 0 or b < 0:
        raise ValueError("affine coefficients must be non-negative")
    alphabet = tuple((x, y) for x in range(p) for y in range(p))
    carries = {b: 0}
    queue = deque([b])
    transitions = {}
    while queue:
        c = queue.popleft()
        for x in range(p):
            total = a * x + c
            nxt = total // p
            if nxt not in carries:
                carries[nxt] = len(carries)
                queue.append(nxt)
            transitions[(carries[c], (x, total % p))] = carries[nxt]
    accepting = frozenset({carries[0]}) if 0 in carries else frozenset()
    return Dfa(
        state_count=len(carries),
        alphabet=alphabet,
        transitions=transitions,
        initial=carries[b],
        accepting=accepting,
        direction="lsd",
        base=p,
        arity=2,
    )


def nim_sum_dfa(p: int) -> Dfa:
    """Single-state acceptor for the triples (m, n, m (+)_p n); no carries exist."""
    p = ensure_prime(p)
    alphabet = tuple((x, y, z) for x in range(p) for y in range(p) for z in range(p))
    transitions = {(0, (x, y, (x + y) % p)): 0 for x in range(p) for y in range(p)}
    return Dfa(
        state_count=1,
        alphabet=alphabet,
        transitions=transitions,
        initial=0,
        accepting=frozenset({0}),
        direction="lsd",
        base=p,
        arity=3,
    )


def alt_sum_dfa(p: int) -> Dfa:
    """2p-state acceptor for digit words whose alternating sum is 0 mod p.

    States (i, +) are numbered i and (i, -) are numbered p + i; the sign
    tracks the parity of the number of digits still to be read.
    """
    p = ensure_prime(p)
    alphabet = tuple(range(p))
    transitions = {}
    for i in range(p):
        for d in range(p):
            transitions[(i, d)] = p + (i + d) % p
            transitions[(p + i, d)] = (i - d) % p
    return Dfa(
        state_count=2 * p,
        alphabet=alphabet,
        transitions=transitions,
        initial=0,
        accepting=frozenset({0, p}),
        direction="msd",
        base=p,
        arity=1,
    )


_SINK = object()


def minimize(d: Dfa) -> Dfa:
    """Language-preserving minimization (Moore partition refinement).

    The result has no pair of distinct equivalent states, drops states that
    cannot reach acceptance (the implicit sink stays implicit), and uses a
    canonical breadth-first state numbering so that equal-language machines
    minimize to structurally identical objects.
    """
    symbols = sorted(d.alphabet, key=_symbol_key)

    reachable = {d.initial}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for sym in symbols:
            r = d.transitions.get((q, sym))
            if r is not None and r not in reachable:
                reachable.add(r)
                queue.append(r)

    states = list(reachable) + [_SINK]

    def total_next(q, sym):
        if q is _SINK:
            return _SINK
        return d.transitions.get((q, sym), _SINK)

    block = {q: (q in d.accepting if q is not _SINK else False) for q in states}
    while True:
        signature = {
            q: (block[q], tuple(block[total_next(q, sym)] for sym in symbols))
            for q in states
        }
        new_ids = {sig: i for i, sig in enumerate(sorted(set(signature.values()), key=repr))}
        new_block = {q: new_ids[signature[q]] for q in states}
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block

    # blocks that can reach an accepting block stay; the rest reject forever
    block_next: dict[tuple[int, object], int] = {}
    block_accepting = set()
    for q in states:
        if q is not _SINK and q in d.accepting:
            block_accepting.add(block[q])
        for sym in symbols:
            block_next[(block[q], sym)] = block[total_next(q, sym)]
    live = set(block_accepting)
    changed = True
    while changed:
        changed = False
        for (b, _), nb in block_next.items():
            if nb in live and b not in live:
                live.add(b)
                changed = True

    initial_block = block[d.initial]
    order = {initial_block: 0}
    queue = deque([initial_block])
    while queue:
        b = queue.popleft()
        for sym in symbols:
            nb = block_next[(b, sym)]
            if nb in live and nb not in order:
                order[nb] = len(order)
                queue.append(nb)

    transitions = {
        (order[b], sym): order[nb]
        for (b, sym), nb in block_next.items()
        if b in order and nb in order and nb in live and b in live
    }
    accepting = frozenset(order[b] for b in block_accepting if b in order)
    return Dfa(
        state_count=len(order),
        alphabet=d.alphabet,
        transitions=transitions,
        initial=0,
        accepting=accepting,
        direction=d.direction,
        base=d.base,
        arity=d.arity,
    )


def _cylinder(d: Dfa, tracks: tuple[int, ...], arity: int) -> Dfa:
    """Lift a relation to a wider tuple alphabet, reading its old tracks."""
    p = d.base
    symbols = _tuple_alphabet(p, arity)
    transitions = {}
    for sym in symbols:
        sub = tuple(sym[t] for t in tracks)
        if d.arity == 1:
            sub = sub[0]
        for q in range(d.state_count):
            r = d.transitions.get((q, sub))
            if r is not None:
                transitions[(q, sym)] = r
    return Dfa(d.state_count, symbols, transitions, d.initial, d.accepting,
               d.direction, p, arity)


def _tuple_alphabet(p: int, arity: int) -> tuple:
    symbols = [()]
    for _ in range(arity):
        symbols = [s + (d,) for s in symbols for d in range(p)]
    return tuple(symbols)


def _intersect(d1: Dfa, d2: Dfa) -> Dfa:
    if (d1.base, d1.arity, d1.direction) != (d2.base, d2.arity, d2.direction):
        raise ValueError("cannot intersect automata with different base/arity/direction")
    symbols = _tuple_alphabet(d1.base, d1.arity)
    start = (d1.initial, d2.initial)
    index = {start: 0}
    queue = deque([start])
    transitions = {}
    accepting = set()
    while queue:
        pair = queue.popleft()
        q1, q2 = pair
        if q1 in d1.accepting and q2 in d2.accepting:
            accepting.add(index[pair])
        for sym in symbols:
            r1 = d1.transitions.get((q1, sym))
            r2 = d2.transitions.get((q2, sym))
            if r1 is None or r2 is None:
                continue
            nxt = (r1, r2)
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            transitions[(index[pair], sym)] = index[nxt]
    return Dfa(len(index), symbols, transitions, 0, frozenset(accepting),
               d1.direction, d1.base, d1.arity)


def _project(d: Dfa, keep: tuple[int, ...]) -> Dfa:
    """Existentially drop tuple tracks (subset construction).

    The hidden tracks may need more digits than the visible ones, so the
    construction closes over symbols whose visible part is all zeros: as
    leading symbols for msd machines, as trailing symbols for lsd machines.
    """
    p = d.base
    visible = _tuple_alphabet(p, len(keep))

    moves: dict[tuple[int, tuple], set] = {}
    zero_moves: dict[int, set] = {}
    for (q, sym), r in d.transitions.items():
        vis = tuple(sym[t] for t in keep)
        moves.setdefault((q, vis), set()).add(r)
        if all(v == 0 for v in vis):
            zero_moves.setdefault(q, set()).add(r)

    def zero_closure(seed: set) -> set:
        out = set(seed)
        queue = deque(out)
        while queue:
            q = queue.popleft()
            for r in zero_moves.get(q, ()):
                if r not in out:
                    out.add(r)
                    queue.append(r)
        return out

    if d.direction == "msd":
        start = frozenset(zero_closure({d.initial}))
        good = set(d.accepting)
    else:
        start = frozenset({d.initial})
        # states that can reach acceptance through hidden-only suffixes
        good = set(d.accepting)
        changed = True
        while changed:
            changed = False
            for q, rs in zero_moves.items():
                if q not in good and rs & good:
                    good.add(q)
                    changed = True

    index = {start: 0}
    queue = deque([start])
    transitions = {}
    accepting = set()
    while queue:
        subset = queue.popleft()
        if subset & good:
            accepting.add(index[subset])
        for vis in visible:
            nxt = set()
            for q in subset:
                nxt |= moves.get((q, vis), set())
            if not nxt:
                continue
            nxt_key = frozenset(nxt)
            if nxt_key not in index:
                index[nxt_key] = len(index)
                queue.append(nxt_key)
            transitions[(index[subset], vis)] = index[nxt_key]
    return Dfa(len(index), visible, transitions, 0, frozenset(accepting),
               d.direction, p, len(keep))


def _functional_on_sample(d: Dfa, x_bound: int, y_bound: int) -> bool:
    # bounded enumeration: each first component relates to at most one second
    for x in range(x_bound):
        hits = 0
        for y in range(y_bound):
            if d.accepts_values(x, y):
                hits += 1
                if hits > 1:
                    return False
    return True


def compose_synchronized(rel1: Dfa, rel2: Dfa) -> Dfa:
    """Join two synchronized relations and project out the shared middle track.

    rel1 relates (x, y).  rel2 either relates (y, z), or is a triple relation
    over (x, y, z) such as the carry-free addition acceptor.  The result
    accepts (x, z) iff some y satisfies both.  Both relations must read in
    the same direction over the same base, and are sanity-checked to be
    graphs of functions on a small sample.
    """
    if rel1.arity != 2 or rel2.arity not in (2, 3):
        raise ValueError("composition needs a pair relation and a pair/triple relation")
    if rel1.base != rel2.base or rel1.direction != rel2.direction:
        raise ValueError("composition needs matching base and reading direction")
    if not _functional_on_sample(rel1, 16, 16 * rel1.base + rel1.base):
        raise ValueError("first relation is not functional on the checked sample")
    lifted1 = _cylinder(rel1, (0, 1), 3)
    lifted2 = rel2 if rel2.arity == 3 else _cylinder(rel2, (1, 2), 3)
    return _project(_intersect(lifted1, lifted2), (0, 2))


@dataclass(frozen=True)
class UniformMorphism:
    """A p-uniform morphism with a binary output coding.

    Every image word has length exactly p and the image of 0 starts with 0,
    so iterating from 0 converges to a unique infinite fixed point.
    """

    p: int
    images: dict[int, tuple[int, ...]]
    coding: dict[int, int]

    def __post_init__(self):
        p = ensure_prime(self.p)
        if sorted(self.images) != list(range(p)):
            raise ValueError("images must cover the digits 0..p-1")
        for j, word in self.images.items():
            if len(word) != p or any(not 0 <= c < p for c in word):
                raise ValueError(f"image of {j} must be a length-{p} digit word")
        if self.images[0][0] != 0:
            raise ValueError("image of 0 must start with 0")
        if sorted(self.coding) != list(range(p)) or any(v not in (0, 1) for v in self.coding.values()):
            raise ValueError("coding must map each digit to 0 or 1")

    def coded(self, word) -> tuple[int, ...]:
        return tuple(self.coding[c] for c in word)


def cobham_morphism(p: int) -> UniformMorphism:
    """Morphism whose coded fixed point is the alternating-sum-zero indicator.

    Image of j at position d is (p - j - d) mod p, matching the transitions
    of the minimized alternating-sum acceptor; the coding sends 0 to 1 and
    everything else to 0.
    """
    p = ensure_prime(p)
    images = {j: tuple((p - j - d) % p for d in range(p)) for j in range(p)}
    coding = {j: 1 if j == 0 else 0 for j in range(p)}
    return UniformMorphism(p, images, coding)


def morphism_dfa(m: UniformMorphism) -> Dfa:
    """The digit acceptor whose states are the morphism's letters."""
    transitions = {(j, d): m.images[j][d] for j in range(m.p) for d in range(m.p)}
    accepting = frozenset(j for j in range(m.p) if m.coding[j] == 1)
    return Dfa(m.p, tuple(range(m.p)), transitions, 0, accepting, "msd", m.p, 1)


def fixed_point_prefix(m: UniformMorphism, length: int) -> tuple[int, ...]:
    """Prefix of the fixed point of the morphism starting at 0."""
    if length < 0:
        raise ValueError("length must be non-negative")
    if length == 0:
        return ()
    word: tuple[int, ...] = (0,)
    while len(word) < length:
        word = tuple(c for s in word for c in m.images[s])
    return word[:length]


@dataclass(frozen=True)
class LinearRep:
    """Row vector, per-digit matrices, column vector over exact rationals."""

    left: tuple[Fraction, ...]
    mats: dict[int, tuple[tuple[Fraction, ...], ...]]
    right: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.left)
        for digit, mat in self.mats.items():
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError(f"matrix for digit {digit} is not {n}x{n}")
        if len(self.right) != n:
            raise ValueError("output vector has wrong dimension")


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def step_linear_rep() -> LinearRep:
    """Exact 3-dimensional linear representation of the base-2 step map."""
    return LinearRep(
        left=(Fraction(1), Fraction(0), Fraction(0)),
        mats={
            0: _frac_matrix([[2, 0, 0], [0, 0, 1], [4, 0, 1]]),
            1: _frac_matrix([[0, 1, 0], [Fraction(4, 3), 2, Fraction(-1, 3)], [-4, 4, 1]]),
        },
        right=(Fraction(0), Fraction(3), Fraction(3)),
    )


def eval_linear_rep(r: LinearRep, m: int) -> int:
    """left * mats[d0] * mats[d1] * ... * right, least significant digit first.

    The exact-rational product must land on an integer; a non-integral
    result means the representation data is corrupt.
    """
    if m < 0:
        raise ValueError("evaluation point must be non-negative")
    row = r.left
    for digit in rep(m, 2).digits:
        mat = r.mats[digit]
        row = tuple(
            sum(row[i] * mat[i][j] for i in range(len(row)))
            for j in range(len(row))
        )
    value = sum(row[i] * r.right[i] for i in range(len(row)))
    if value.denominator != 1:
        raise ArithmeticError(f"linear representation produced non-integer {value}")
    return int(value)


_SCALED_M0 = ((2, 0, 0), (0, 0, 1), (4, 0, 1))
_SCALED_M1 = ((0, 3, 0), (4, 6, -1), (-12, 12, 3))  # 3 * matrix for digit 1


def eval_linear_rep_scaled(m: int) -> int:
    """Integer-only evaluation of the step representation.

    Uses the digit-1 matrix scaled by 3 and divides by the accumulated
    power of 3 at the end; exact divisibility is enforced.
    """
    if m < 0:
        raise ValueError("evaluation point must be non-negative")
    row = [1, 0, 0]
    ones = 0
    for digit in rep(m, 2).digits:
        mat = _SCALED_M0 if digit == 0 else _SCALED_M1
        ones += digit
        row = [sum(row[i] * mat[i][j] for i in range(3)) for j in range(3)]
    value = 3 * (row[1] + row[2])
    denom = 3**ones
    if value % denom:
        raise ArithmeticError("scaled evaluation is not divisible by its denominator")
    return value // denom
