"""
avoidgroup.avoidance

Contains the enumeration and counting of S_n(T), the symmetry images of pattern sets
and the Erdos-Szekeres emptiness bound.
"""

from dataclasses import dataclass
from math import factorial
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from prefect.utilities.logging import get_logger

from . import groups
from ._utils import get_setting, split_pattern_text
from .perms import (
    Permutation,
    complement,
    decreasing,
    identity,
    inverse,
    occurs_in,
    reverse,
    reverse_complement,
    sort_key,
)

logger = get_logger("avoidgroup.avoidance")

STRATEGIES = ("prefix", "insertion")


class MemberLimitExceeded(RuntimeError):
    """Raised when an enumeration would hold more members than allowed."""


@dataclass(frozen=True)
class PatternSet:
    """
    A finite set of patterns T, possibly of mixed lengths.

    Patterns are kept verbatim; redundant patterns are only removed by an explicit
    call to `normalized`.
    """

    patterns: FrozenSet[Permutation]

    def __init__(self, patterns: Iterable[Union[Permutation, str]] = ()):
        items = frozenset(
            p if isinstance(p, Permutation) else Permutation.parse(p) for p in patterns
        )
        object.__setattr__(self, "patterns", items)

    @classmethod
    def parse(cls, text: str) -> "PatternSet":
        """
        Parse a comma separated pattern set such as "132, 231, 4 1 2 3".

        Raises:
           - ValueError: If one of the patterns is malformed
        """
        return cls(Permutation.parse(token) for token in split_pattern_text(text))

    def sorted(self) -> Tuple[Permutation, ...]:
        return tuple(sorted(self.patterns, key=sort_key))

    @property
    def key(self) -> str:
        """Canonical textual form: patterns by length, then lexicographically."""
        return ", ".join(str(p) for p in self.sorted())

    @property
    def sort_key(self) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
        return tuple(sort_key(p) for p in self.sorted())

    @property
    def max_length(self) -> int:
        return max((p.n for p in self.patterns), default=0)

    def __str__(self) -> str:
        return "{" + ", ".join(p.compact() for p in self.sorted()) + "}"

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.sorted())

    def __contains__(self, p: object) -> bool:
        return p in self.patterns

    def map(self, fn: Callable[[Permutation], Permutation]) -> "PatternSet":
        return PatternSet(fn(p) for p in self.patterns)

    def normalized(self) -> "PatternSet":
        """Drop every pattern that contains another pattern of the set."""
        kept = [
            p
            for p in self.patterns
            if not any(q != p and occurs_in(p.word, q.word) for q in self.patterns)
        ]
        return PatternSet(kept)


@dataclass(frozen=True)
class AvoiderSet:
    n: int
    source: PatternSet
    members: Tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.members)

    def __contains__(self, p: object) -> bool:
        return p in set(self.members)


@dataclass(frozen=True)
class SymmetryImage:
    name: str
    image: PatternSet
    group_preserving: bool


def _inv_of(fn: Callable[[Permutation], Permutation]) -> Callable:
    return lambda p: inverse(fn(p))


_SYMMETRIES: Tuple[Tuple[str, Callable[[Permutation], Permutation]], ...] = (
    ("id", lambda p: p),
    ("r", reverse),
    ("c", complement),
    ("rc", reverse_complement),
    ("inv", inverse),
    ("r-inv", _inv_of(reverse)),
    ("c-inv", _inv_of(complement)),
    ("rc-inv", _inv_of(reverse_complement)),
)

# images whose generated group equals (or is conjugate to) the original one for any T
_ALWAYS_PRESERVING = frozenset({"id", "inv", "rc", "rc-inv"})


def contains_psi(T: PatternSet) -> bool:
    return any(p.n >= 1 and p == decreasing(p.n) for p in T.patterns)


def contains_identity(T: PatternSet) -> bool:
    return any(p.n >= 1 and p == identity(p.n) for p in T.patterns)


def symmetry_images(T: PatternSet) -> Tuple[SymmetryImage, ...]:
    """
    Return the eight images T, T^r, T^c, T^rc, T^-1, (T^r)^-1, (T^c)^-1, (T^rc)^-1.

    The inverse and reverse-complement images always preserve the generated group
    up to conjugation; the others only when no decreasing pattern lies in T.
    """
    psi_free = not contains_psi(T)
    return tuple(
        SymmetryImage(
            name=name,
            image=T.map(fn),
            group_preserving=psi_free or name in _ALWAYS_PRESERVING,
        )
        for name, fn in _SYMMETRIES
    )


def image(T: PatternSet, name: str) -> PatternSet:
    for image_name, fn in _SYMMETRIES:
        if image_name == name:
            return T.map(fn)
    raise ValueError(f"Unknown symmetry <{name}>.")


def es_empty_bound(T: PatternSet) -> Optional[int]:
    """
    Return the Erdos-Szekeres bound (r-1)(s-1) for id_r and psi_s in T.

    Returns:
       - int or None: The smallest bound over all such pairs; S_n(T) is empty for
         every n above it. None when T holds no such pair
    """
    increasing = [p.n for p in T.patterns if p.n >= 1 and p == identity(p.n)]
    decreasing_ = [p.n for p in T.patterns if p.n >= 1 and p == decreasing(p.n)]
    if not increasing or not decreasing_:
        return None
    return min((r - 1) * (s - 1) for r in increasing for s in decreasing_)


def _prefix_search(n: int, taus: List[Tuple[int, ...]]) -> Iterator[Tuple[int, ...]]:
    # left to right; a new entry can only complete occurrences ending with it
    word: List[int] = []
    used = [False] * (n + 1)
    anchors = [(t, len(t) - 1) for t in taus]

    def extend() -> Iterator[Tuple[int, ...]]:
        if len(word) == n:
            yield tuple(word)
            return
        last = len(word)
        for v in range(1, n + 1):
            if used[v]:
                continue
            word.append(v)
            if not any(occurs_in(word, t, (last, e)) for t, e in anchors):
                used[v] = True
                yield from extend()
                used[v] = False
            word.pop()

    if any(len(t) == 0 for t in taus):
        return
    yield from extend()


def _insertion_search(n: int, taus: List[Tuple[int, ...]]) -> Iterator[Tuple[int, ...]]:
    # generating tree: every avoider of length m comes from exactly one avoider of
    # length m-1 by inserting m
    anchors = [(t, t.index(len(t))) for t in taus if t]

    def grow(word: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        m = len(word)
        if m == n:
            yield word
            return
        for i in range(m + 1):
            child = word[:i] + (m + 1,) + word[i:]
            if not any(occurs_in(child, t, (i, e)) for t, e in anchors):
                yield from grow(child)

    if any(len(t) == 0 for t in taus):
        return
    yield from grow(())


def iter_avoiders(
    n: int, T: PatternSet, strategy: Optional[str] = None
) -> Iterator[Permutation]:
    """
    Lazily produce the members of S_n(T).

    Args:
       - n (int): The permutation length
       - T (PatternSet): The patterns to avoid
       - strategy (str, optional): "prefix" yields members in lexicographic order,
         "insertion" grows avoiders by inserting the maximum and visits far fewer
         partial words on sparse classes. Defaults to `enumeration.strategy`

    Returns:
       - Iterator[Permutation]: The members of S_n(T)

    Raises:
       - ValueError: If n is negative or the strategy is unknown
    """
    if n < 0:
        raise ValueError(f"Length must be non-negative, got {n}.")
    strategy = strategy or get_setting("enumeration.strategy", "prefix")
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown enumeration strategy <{strategy}>.")
    taus = [p.word for p in T.sorted()]
    search = _prefix_search if strategy == "prefix" else _insertion_search
    for word in search(n, taus):
        yield Permutation._trusted(word)


def enumerate_avoiders(
    n: int,
    T: PatternSet,
    strategy: Optional[str] = None,
    member_limit: Optional[int] = None,
) -> AvoiderSet:
    """
    Enumerate S_n(T) in lexicographic order.

    Args:
       - n (int): The permutation length
       - T (PatternSet): The patterns to avoid
       - strategy (str, optional): The search strategy, see `iter_avoiders`
       - member_limit (int, optional): Abort past this many members. Defaults to
         `enumeration.member_limit`

    Returns:
       - AvoiderSet: The sorted members

    Raises:
       - MemberLimitExceeded: If S_n(T) has more members than the limit
    """
    limit = member_limit or get_setting("enumeration.member_limit", 10 ** 7)
    members = []
    for p in iter_avoiders(n, T, strategy):
        members.append(p)
        if len(members) > limit:
            raise MemberLimitExceeded(
                f"S_{n}({T.key}) exceeds the member limit of {limit}."
            )
    members.sort()
    return AvoiderSet(n=n, source=T, members=tuple(members))


def count_avoiders(n: int, T: PatternSet, strategy: Optional[str] = None) -> int:
    """Return |S_n(T)| without storing members."""
    strategy = strategy or get_setting("enumeration.count_strategy", "insertion")
    return sum(1 for _ in iter_avoiders(n, T, strategy))


def group_of_avoiders(
    n: int, T: PatternSet, strategy: Optional[str] = None
) -> "groups.GroupHandle":
    """
    Build the group generated by S_n(T).

    Members are streamed into the group engine, skipping those already generated, and
    the stream stops once the whole of S_n is reached.
    """
    strategy = strategy or get_setting("enumeration.count_strategy", "insertion")
    handle = groups.build_group(
        iter_avoiders(n, T, strategy), n, stop_order=factorial(n)
    )
    logger.debug(f"<S_{n}({T.key})> has order {handle.order}")
    return handle


def is_subgroup_set(n: int, T: PatternSet) -> bool:
    """
    Decide whether S_n(T) is itself a subgroup of S_n.

    A finite nonempty set lies inside the group it generates, so it is closed under
    composition and inverse exactly when both have the same size.
    """
    count = count_avoiders(n, T)
    if count == 0:
        return False
    return group_of_avoiders(n, T).order == count
