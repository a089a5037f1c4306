"""
avoidgroup.groups

Contains the stabilizer chain engine used for every group computation: building
<generators> with the incremental Schreier-Sims algorithm, order, membership, element
listing, conjugation and the semidirect product check.

Internally elements are 0-based image tuples and products are read left to right:
`_mul(a, b)` applies a first, then b.
"""

from dataclasses import dataclass, field
from math import prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from prefect.utilities.logging import get_logger

from ._utils import get_setting
from .perms import (
    DegreeMismatchError,
    Permutation,
    format_cycles,
    identity,
    parse_cycles,
)

logger = get_logger("avoidgroup.groups")

_Word = Tuple[int, ...]


class ElementCapExceeded(RuntimeError):
    """Raised when a group is too large to list under the given cap."""


def _mul(a: _Word, b: _Word) -> _Word:
    return tuple(b[x] for x in a)


def _inv(a: _Word) -> _Word:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _is_id(a: _Word) -> bool:
    return all(i == x for i, x in enumerate(a))


def _to_word(p: Permutation) -> _Word:
    return tuple(x - 1 for x in p.word)


def _to_perm(a: _Word) -> Permutation:
    return Permutation._trusted(tuple(x + 1 for x in a))


def _orbit_transversal(gens: Sequence[_Word], alpha: int, n: int) -> Dict[int, _Word]:
    """Map every point of the orbit of alpha to an element carrying alpha there."""
    tr = [(alpha, tuple(range(n)))]
    seen = {alpha}
    for x, px in tr:
        for gen in gens:
            y = gen[x]
            if y not in seen:
                seen.add(y)
                tr.append((y, _mul(px, gen)))
    return dict(tr)


def _distribute_gens_by_base(base: List[int], gens: List[_Word]) -> List[List[_Word]]:
    # level i receives the generators fixing base[0..i-1]
    stabs: List[List[_Word]] = [[] for _ in base]
    for gen in gens:
        j = 0
        while j < len(base) - 1 and gen[base[j]] == base[j]:
            j += 1
        for k in range(j + 1):
            stabs[k].append(gen)
    return stabs


def _strip(
    h: _Word, base: List[int], transversals: List[Dict[int, _Word]], j: int
) -> Tuple[Optional[_Word], int]:
    # sift h below level j; returns the residue and the level where sifting stopped
    base_len = len(base)
    for i in range(j + 1, base_len):
        beta = h[base[i]]
        if beta == base[i]:
            continue
        u = transversals[i].get(beta)
        if u is None:
            return h, i + 1
        if h == u:
            return None, base_len + 1
        h = _mul(h, _inv(u))
    return (None if _is_id(h) else h), base_len + 1


def _first_moved(g: _Word) -> int:
    return next(x for x, y in enumerate(g) if x != y)


def _schreier_sims(
    gens: List[_Word], base: List[int], n: int
) -> Tuple[List[int], List[_Word], List[Dict[int, _Word]]]:
    """
    Extend a base and generating set to a base and strong generating set.

    Returns:
       - tuple: (base, strong generators, transversal per base point)
    """
    base = list(base)
    gens = [g for g in gens if not _is_id(g)]
    if not gens:
        return base, [], [{b: tuple(range(n))} for b in base]
    for gen in gens:
        if all(gen[b] == b for b in base):
            base.append(_first_moved(gen))
    distr = _distribute_gens_by_base(base, gens)
    transversals = [_orbit_transversal(distr[i], b, n) for i, b in enumerate(base)]
    new_strong: List[_Word] = []
    base_len = len(base)
    i = base_len - 1
    while i >= 0:
        restart = False
        for beta, u_beta in list(transversals[i].items()):
            for gen in distr[i]:
                u1 = transversals[i][gen[beta]]
                g1 = _mul(u_beta, gen)
                if g1 == u1:
                    continue
                h, j = _strip(_mul(g1, _inv(u1)), base, transversals, i)
                if h is None:
                    continue
                if j > base_len:
                    # h fixes every base point
                    base.append(_first_moved(h))
                    base_len += 1
                    distr.append([])
                    transversals.append({base[-1]: tuple(range(n))})
                new_strong.append(h)
                for level in range(i + 1, min(j, base_len)):
                    distr[level].append(h)
                    transversals[level] = _orbit_transversal(
                        distr[level], base[level], n
                    )
                i = min(j, base_len) - 1
                restart = True
                break
            if restart:
                break
        logger.debug(
            f"Schreier-Sims: i = {i}, restart = {restart}, "
            f"orbit size = {len(transversals[i]) if 0 <= i < base_len else '-'}"
        )
        if not restart:
            i -= 1
    return base, gens + new_strong, transversals


@dataclass(frozen=True)
class StabLevel:
    """One level of a stabilizer chain, in 1-based points."""

    base_point: int
    orbit: Tuple[int, ...]
    strong_generators: Tuple[Permutation, ...]


@dataclass(frozen=True)
class StabChain:
    degree: int
    base: Tuple[int, ...]
    levels: Tuple[StabLevel, ...]
    _transversals: Tuple[Dict[int, _Word], ...] = field(repr=False, compare=False)
    _strong: Tuple[_Word, ...] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return prod(len(t) for t in self._transversals)

    def sift(self, p: Permutation) -> bool:
        h = _to_word(p)
        for b, tr in zip(self.base, self._transversals):
            beta = h[b - 1]
            u = tr.get(beta)
            if u is None:
                return False
            h = _mul(h, _inv(u))
        return _is_id(h)


def _make_chain(
    degree: int,
    base: List[int],
    strong: List[_Word],
    transversals: List[Dict[int, _Word]],
) -> StabChain:
    distr = _distribute_gens_by_base(base, strong) if base else []
    levels = tuple(
        StabLevel(
            base_point=b + 1,
            orbit=tuple(sorted(x + 1 for x in transversals[i])),
            strong_generators=tuple(_to_perm(g) for g in distr[i]),
        )
        for i, b in enumerate(base)
    )
    return StabChain(
        degree=degree,
        base=tuple(b + 1 for b in base),
        levels=levels,
        _transversals=tuple(transversals),
        _strong=tuple(strong),
    )


@dataclass(frozen=True)
class GroupHandle:
    """
    A permutation group of the given degree, held as its generators and a stabilizer
    chain. Only generators that enlarged the group are kept.
    """

    generators: Tuple[Permutation, ...]
    chain: StabChain
    degree: int
    order: int

    def __contains__(self, p: object) -> bool:
        return isinstance(p, Permutation) and is_member(self, p)


def _check_degree(p: Permutation, degree: int) -> None:
    if p.n != degree:
        raise DegreeMismatchError(
            f"Permutation <{p}> has degree {p.n}, expected {degree}."
        )


def build_group(
    generators: Iterable[Permutation], degree: int, stop_order: Optional[int] = None
) -> GroupHandle:
    """
    Build the group generated by a stream of permutations.

    Args:
       - generators (Iterable[Permutation]): The generators, consumed lazily
       - degree (int): The common length n of the generators
       - stop_order (int, optional): Stop consuming once the group reaches this order,
         e.g. n! for a subgroup of S_n

    Returns:
       - GroupHandle: The group with a base and strong generating set

    Raises:
       - DegreeMismatchError: If a generator does not have length `degree`
    """
    base: List[int] = []
    strong: List[_Word] = []
    transversals: List[Dict[int, _Word]] = []
    consumed: List[Permutation] = []
    chain = _make_chain(degree, base, strong, transversals)
    order = 1
    for p in generators:
        _check_degree(p, degree)
        if p.is_identity() or chain.sift(p):
            continue
        consumed.append(p)
        base, strong, transversals = _schreier_sims(
            strong + [_to_word(p)], base, degree
        )
        chain = _make_chain(degree, base, strong, transversals)
        order = chain.order
        if stop_order is not None and order >= stop_order:
            break
    logger.debug(
        f"Built group of degree {degree} and order {order} "
        f"from {len(consumed)} generators"
    )
    return GroupHandle(
        generators=tuple(consumed), chain=chain, degree=degree, order=order
    )


def group_from_cycles(texts: Iterable[str], degree: int) -> GroupHandle:
    """Build a group from generators written in cycle notation, e.g. "(1,6,2,5)(3,4)"."""
    return build_group((parse_cycles(t, degree) for t in texts), degree)


def order(g: GroupHandle) -> int:
    return g.order


def is_member(g: GroupHandle, p: Permutation) -> bool:
    """
    Decide membership by sifting through the stabilizer chain.

    Raises:
       - DegreeMismatchError: If |p| differs from the degree of g
    """
    _check_degree(p, g.degree)
    return g.chain.sift(p)


def elements(g: GroupHandle, cap: Optional[int] = None) -> List[Permutation]:
    """
    List every element of g once, in lexicographic order.

    Args:
       - g (GroupHandle): The group
       - cap (int, optional): Refuse groups larger than this. Defaults to
         `groups.element_cap`

    Returns:
       - List[Permutation]: The sorted elements

    Raises:
       - ElementCapExceeded: If the order of g is above the cap
    """
    cap = cap or get_setting("groups.element_cap", 10 ** 6)
    if g.order > cap:
        raise ElementCapExceeded(
            f"Group of order {g.order} exceeds the element cap of {cap}."
        )
    elems: List[_Word] = [tuple(range(g.degree))]
    # every element factors uniquely as u_k ... u_1 u_0 with u_i from level i
    for tr in g.chain._transversals:
        elems = [_mul(u, e) for e in elems for u in tr.values()]
    return sorted(_to_perm(e) for e in elems)


def conjugate_group(g: GroupHandle, p: Permutation) -> GroupHandle:
    """
    Return p<generators>p^-1.

    Raises:
       - DegreeMismatchError: If |p| differs from the degree of g
    """
    _check_degree(p, g.degree)
    pw = _to_word(p)
    pinv = _inv(pw)
    # p x p^-1 applies p^-1 first
    conjugated = (_to_perm(_mul(_mul(pinv, _to_word(x)), pw)) for x in g.generators)
    return build_group(conjugated, g.degree)


def same_group(g: GroupHandle, h: GroupHandle) -> bool:
    """Equality of element sets, by mutual generator membership."""
    if g.degree != h.degree or g.order != h.order:
        return False
    return all(is_member(h, x) for x in g.generators)


def semidirect_check(
    g: GroupHandle, N: GroupHandle, H: GroupHandle, cap: Optional[int] = None
) -> bool:
    """
    Decide whether g is the inner semidirect product of the normal subgroup N by H.

    Args:
       - g (GroupHandle): The whole group
       - N (GroupHandle): The candidate normal subgroup
       - H (GroupHandle): The candidate complement
       - cap (int, optional): Largest order of N or H to work with. Defaults to
         `groups.element_cap`

    Returns:
       - bool: True iff N and H lie in g, N is normal in g, |N||H| = |g| and
         N and H meet trivially

    Raises:
       - DegreeMismatchError: If the degrees differ
       - ElementCapExceeded: If N or H is larger than the cap
    """
    if not g.degree == N.degree == H.degree:
        raise DegreeMismatchError(
            f"Incompatible degrees {g.degree}, {N.degree}, {H.degree}."
        )
    cap = cap or get_setting("groups.element_cap", 10 ** 6)
    for name, sub in (("N", N), ("H", H)):
        if sub.order > cap:
            raise ElementCapExceeded(
                f"Subgroup {name} of order {sub.order} exceeds the cap of {cap}."
            )
    if not all(is_member(g, x) for sub in (N, H) for x in sub.generators):
        return False
    if N.order * H.order != g.order:
        return False
    for x in g.generators:
        xw = _to_word(x)
        xinv = _inv(xw)
        for y in N.generators:
            # x^-1 y x, reading left to right
            if not N.chain.sift(_to_perm(_mul(_mul(xw, _to_word(y)), xinv))):
                return False
    return not any(
        not h.is_identity() and is_member(N, h) for h in elements(H, cap)
    )


def orbits(g: GroupHandle) -> List[Tuple[int, ...]]:
    """Point orbits of g, each sorted, ordered by their smallest point."""
    seen = set()
    out = []
    for start in range(1, g.degree + 1):
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for gen in g.generators:
                y = gen(x)
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        seen |= orbit
        out.append(tuple(sorted(orbit)))
    return out


def fixed_points(g: GroupHandle) -> List[int]:
    return [o[0] for o in orbits(g) if len(o) == 1]


def swapped_blocks(g: GroupHandle) -> List[Tuple[int, int]]:
    """Orbits of size two, i.e. pairs that every element fixes or swaps."""
    return [(o[0], o[1]) for o in orbits(g) if len(o) == 2]


def export_cas(g: GroupHandle) -> str:
    """Generators in cycle notation, one per line, for use in a computer algebra system."""
    gens = g.generators or (identity(g.degree),)
    return "\n".join(format_cycles(x) for x in gens) + "\n"
