"""
avoidgroup.perms

Contains the permutation kernel: construction, composition, the reverse, complement
and inverse symmetries, parity, cycle form and pattern containment.

Permutations are 1-based one-line words everywhere outside this module's private
helpers.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, reduce
from itertools import combinations, permutations
from typing import FrozenSet, List, Optional, Sequence, Tuple


class DegreeMismatchError(ValueError):
    """Raised when permutations of different lengths are combined."""


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True, order=True)
class Permutation:
    """
    A permutation of {1..n} in one-line notation.

    The empty word is the unique element of S_0. Instances compare
    lexicographically on their words.
    """

    word: Tuple[int, ...]

    def __post_init__(self):
        word = tuple(int(x) for x in self.word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"<{' '.join(map(str, word))}> is not a permutation")
        object.__setattr__(self, "word", word)

    @classmethod
    def _trusted(cls, word: Tuple[int, ...]) -> "Permutation":
        # skips validation for words built by the kernel itself
        p = object.__new__(cls)
        object.__setattr__(p, "word", word)
        return p

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """
        Parse a permutation from its textual form.

        Args:
           - text (str): Space separated entries, e.g. "4 2 3 1", or the compact
             digit form "4231" when the length is at most 9

        Returns:
           - Permutation: The parsed permutation

        Raises:
           - ValueError: If the text is not a permutation of 1..n
        """
        tokens = text.split()
        if len(tokens) == 1 and len(tokens[0]) > 1:
            if not tokens[0].isdigit() or "0" in tokens[0]:
                raise ValueError(f"Cannot parse <{text}> as a permutation.")
            tokens = list(tokens[0])
        try:
            return cls(tuple(int(t) for t in tokens))
        except ValueError as e:
            raise ValueError(f"Cannot parse <{text}> as a permutation.") from e

    @property
    def n(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.word)

    def compact(self) -> str:
        """Digit form used in short labels; falls back to spaces past length 9."""
        if self.n <= 9:
            return "".join(str(x) for x in self.word)
        return str(self)

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.word, start=1))


@dataclass(frozen=True)
class CycleForm:
    """Disjoint cycles of a permutation of {1..n}, fixed points omitted."""

    cycles: Tuple[Tuple[int, ...], ...]
    n: int

    def __str__(self) -> str:
        if not self.cycles:
            return "()"
        return "".join("(" + ",".join(str(x) for x in c) + ")" for c in self.cycles)


def identity(n: int) -> Permutation:
    return Permutation._trusted(tuple(range(1, n + 1)))


def decreasing(n: int) -> Permutation:
    """The decreasing permutation n n-1 ... 1, also written psi_n."""
    return Permutation._trusted(tuple(range(n, 0, -1)))


def transposition(i: int, j: int, n: int) -> Permutation:
    return cycle_perm((i, j), n)


def cycle_perm(points: Sequence[int], n: int) -> Permutation:
    """Return the single cycle (points[0], points[1], ...) as a permutation of {1..n}."""
    return from_cycles(CycleForm(cycles=(tuple(points),), n=n))


def _check_degrees(*perms: Permutation) -> None:
    degrees = {p.n for p in perms}
    if len(degrees) > 1:
        raise DegreeMismatchError(
            f"Incompatible degrees {sorted(degrees)} for "
            f"<{', '.join(map(str, perms))}>."
        )


def compose(p: Permutation, q: Permutation) -> Permutation:
    """
    Compose two permutations, applying q first.

    Args:
       - p (Permutation): The permutation applied second
       - q (Permutation): The permutation applied first

    Returns:
       - Permutation: r with r(i) = p(q(i))

    Raises:
       - DegreeMismatchError: If p and q have different lengths
    """
    _check_degrees(p, q)
    pw = p.word
    return Permutation._trusted(tuple(pw[x - 1] for x in q.word))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, x in enumerate(p.word, start=1):
        inv[x - 1] = i
    return Permutation._trusted(tuple(inv))


def reverse(p: Permutation) -> Permutation:
    return Permutation._trusted(p.word[::-1])


def complement(p: Permutation) -> Permutation:
    n = p.n
    return Permutation._trusted(tuple(n + 1 - x for x in p.word))


def reverse_complement(p: Permutation) -> Permutation:
    """Conjugation by the decreasing permutation."""
    return complement(reverse(p))


def to_cycles(p: Permutation) -> CycleForm:
    seen = set()
    cycles = []
    for start in range(1, p.n + 1):
        if start in seen or p(start) == start:
            continue
        cycle = [start]
        seen.add(start)
        x = p(start)
        while x != start:
            seen.add(x)
            cycle.append(x)
            x = p(x)
        cycles.append(tuple(cycle))
    return CycleForm(cycles=tuple(cycles), n=p.n)


def from_cycles(c: CycleForm) -> Permutation:
    """
    Build the permutation described by disjoint cycles.

    Raises:
       - ValueError: If the cycles overlap or leave {1..n}
    """
    word = list(range(1, c.n + 1))
    used = set()
    for cycle in c.cycles:
        for x in cycle:
            if not 1 <= x <= c.n:
                raise ValueError(f"Point {x} of cycle {cycle} is outside 1..{c.n}.")
            if x in used:
                raise ValueError(f"Overlapping cycles: point {x} appears twice.")
            used.add(x)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            word[a - 1] = b
    return Permutation._trusted(tuple(word))


def format_cycles(p: Permutation) -> str:
    return str(to_cycles(p))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """
    Parse cycle notation such as "(1,6,3,4,2,5)(7,8)" into a permutation of {1..n}.

    Raises:
       - ValueError: If the text is malformed or the cycles overlap
    """
    stripped = text.replace(" ", "")
    if _CYCLE_RE.sub("", stripped):
        raise ValueError(f"Cannot parse <{text}> as cycle notation.")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            continue
        try:
            cycles.append(tuple(int(x) for x in body.split(",")))
        except ValueError as e:
            raise ValueError(f"Cannot parse <{text}> as cycle notation.") from e
    return from_cycles(CycleForm(cycles=tuple(cycles), n=n))


def parity(p: Permutation) -> Parity:
    cycles = to_cycles(p).cycles
    # fixed points count as cycles of length one
    cycle_count = len(cycles) + p.n - sum(len(c) for c in cycles)
    return Parity.ODD if (p.n - cycle_count) % 2 else Parity.EVEN


def order_of(p: Permutation) -> int:
    """The multiplicative order, lcm of the cycle lengths."""
    lengths = [len(c) for c in to_cycles(p).cycles]
    return reduce(lambda a, b: a * b // math.gcd(a, b), lengths, 1)


def standardize(values: Sequence[int]) -> Tuple[int, ...]:
    """Return the order-isomorphic word on 1..k of k distinct values."""
    ranks = {v: r for r, v in enumerate(sorted(values), start=1)}
    return tuple(ranks[v] for v in values)


@lru_cache(maxsize=None)
def _windows(tau: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    # for entry j: the earlier entries holding the nearest smaller and larger values
    out = []
    for j, v in enumerate(tau):
        lo = hi = -1
        for i in range(j):
            u = tau[i]
            if u < v and (lo < 0 or u > tau[lo]):
                lo = i
            if u > v and (hi < 0 or u < tau[hi]):
                hi = i
        out.append((lo, hi))
    return tuple(out)


def occurs_in(
    word: Sequence[int],
    tau: Sequence[int],
    anchor: Optional[Tuple[int, int]] = None,
) -> bool:
    """
    Decide whether a sequence of distinct values has a subsequence order-isomorphic
    to tau.

    Entries of tau are assigned to positions left to right; each new entry must fall
    strictly between the values matched by its nearest smaller and larger
    predecessors in tau.

    Args:
       - word (Sequence[int]): Distinct values, not necessarily 1..n
       - tau (Sequence[int]): The pattern word
       - anchor (Tuple[int, int], optional): A 0-based (position, entry) pair; only
         occurrences matching entry `entry` of tau at position `position` count

    Returns:
       - bool: True if such an occurrence exists
    """
    k, n = len(tau), len(word)
    if k == 0:
        return anchor is None
    if k > n:
        return False
    windows = _windows(tuple(tau))
    pos = [0] * k
    neg_inf, pos_inf = float("-inf"), float("inf")

    def place(j: int, start: int) -> bool:
        if j == k:
            return True
        first, last = start, n - (k - j)
        if anchor is not None:
            a, e = anchor
            if j < e:
                last = min(last, a - (e - j))
            elif j == e:
                if a < first or a > last:
                    return False
                first = last = a
        lo, hi = windows[j]
        low = word[pos[lo]] if lo >= 0 else neg_inf
        high = word[pos[hi]] if hi >= 0 else pos_inf
        for q in range(first, last + 1):
            if low < word[q] < high:
                pos[j] = q
                if place(j + 1, q + 1):
                    return True
        return False

    return place(0, 0)


def contains(p: Permutation, tau: Permutation) -> bool:
    """
    Decide pattern containment.

    Args:
       - p (Permutation): The permutation searched
       - tau (Permutation): The pattern

    Returns:
       - bool: True if some subsequence of p is order-isomorphic to tau; the empty
         pattern is contained in everything, longer patterns in nothing
    """
    return occurs_in(p.word, tau.word)


def contains_at(p: Permutation, tau: Permutation, position: int, entry: int) -> bool:
    """
    Decide whether p has an occurrence of tau with tau's `entry`-th entry placed at
    `position` of p (both 1-based).
    """
    if not (1 <= position <= p.n and 1 <= entry <= tau.n):
        return False
    return occurs_in(p.word, tau.word, anchor=(position - 1, entry - 1))


def patterns_of(p: Permutation, k: int) -> FrozenSet[Permutation]:
    """
    Return every pattern of length k contained in p.

    Raises:
       - ValueError: If k is outside 0..|p|
    """
    if not 0 <= k <= p.n:
        raise ValueError(f"Pattern length {k} is outside 0..{p.n}.")
    return frozenset(
        Permutation._trusted(standardize(sub)) for sub in combinations(p.word, k)
    )


def all_permutations(n: int) -> List[Permutation]:
    """S_n in lexicographic order."""
    return [Permutation._trusted(w) for w in permutations(range(1, n + 1))]


def sort_key(p: Permutation) -> Tuple[int, Tuple[int, ...]]:
    """Shorter patterns first, then lexicographic."""
    return (p.n, p.word)
