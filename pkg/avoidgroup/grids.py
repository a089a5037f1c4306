"""
avoidgroup.grids

Contains peg permutations, inflations, grid class membership and sections, the
bounded class check and the monotone core decomposition of a permutation.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from prefect.utilities.logging import get_logger

from .perms import Permutation, decreasing, identity, standardize

logger = get_logger("avoidgroup.grids")


class Label(str, Enum):
    NONE = ""
    PLUS = "+"
    MINUS = "-"


_SIGNS = {"+": Label.PLUS, "-": Label.MINUS, "−": Label.MINUS}
_TOKEN_RE = re.compile(r"^(\d+)([+\-−]?)$")


@dataclass(frozen=True)
class PegPermutation:
    """
    A skeleton permutation with every entry unlabeled, marked + (inflated by an
    increasing block) or marked - (inflated by a decreasing block).
    """

    skeleton: Permutation
    labels: Tuple[Label, ...]

    def __post_init__(self):
        if len(self.labels) != self.skeleton.n:
            raise ValueError(
                f"Peg skeleton <{self.skeleton}> has {self.skeleton.n} entries "
                f"but {len(self.labels)} labels."
            )

    @classmethod
    def parse(cls, text: str) -> "PegPermutation":
        """
        Parse "3+1-24-", or "10+ 2 3-" for skeletons with multi-digit entries.

        Raises:
           - ValueError: If the text is not a labeled permutation
        """
        text = text.strip()
        if " " in text:
            tokens = text.split()
        else:
            tokens = re.findall(r"\d[+\-−]?", text)
            if "".join(tokens) != text:
                raise ValueError(f"Cannot parse <{text}> as a peg permutation.")
        entries, labels = [], []
        for token in tokens:
            match = _TOKEN_RE.match(token)
            if not match:
                raise ValueError(f"Cannot parse <{text}> as a peg permutation.")
            entries.append(int(match.group(1)))
            labels.append(_SIGNS.get(match.group(2), Label.NONE))
        return cls(skeleton=Permutation(tuple(entries)), labels=tuple(labels))

    def __str__(self) -> str:
        sep = "" if self.skeleton.n <= 9 else " "
        pairs = zip(self.skeleton.word, self.labels)
        return sep.join(f"{x}{lab.value}" for x, lab in pairs)

    @property
    def labeled_count(self) -> int:
        return sum(1 for lab in self.labels if lab != Label.NONE)


@dataclass(frozen=True)
class GridSection:
    peg: PegPermutation
    n: int
    members: Tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: object) -> bool:
        return p in set(self.members)


def inflate(sigma: Permutation, parts: Sequence[Permutation]) -> Permutation:
    """
    Inflate every entry of sigma by a block, e.g. 3142[1, 321, 1, 12] = 6321745.

    Args:
       - sigma (Permutation): The skeleton
       - parts (Sequence[Permutation]): One block per entry of sigma, possibly empty

    Returns:
       - Permutation: Block i sits at consecutive positions and consecutive values,
         placed according to sigma

    Raises:
       - ValueError: If the number of parts differs from |sigma|
    """
    if len(parts) != sigma.n:
        raise ValueError(
            f"Cannot inflate <{sigma}> by {len(parts)} parts, expected {sigma.n}."
        )
    sizes = [len(part) for part in parts]
    offsets = [
        sum(sizes[j] for j in range(sigma.n) if sigma.word[j] < sigma.word[i])
        for i in range(sigma.n)
    ]
    word = tuple(offsets[i] + x for i, part in enumerate(parts) for x in part.word)
    return Permutation._trusted(word)


def _monotone_part(label: Label, length: int) -> Permutation:
    return decreasing(length) if label == Label.MINUS else identity(length)


def _max_part(label: Label, n: int) -> int:
    return 1 if label == Label.NONE else n


def find_grid_witness(
    p: Permutation, peg: PegPermutation
) -> Optional[Tuple[Permutation, ...]]:
    """
    Search for a decomposition of p as an inflation of the peg.

    Blocks are cut left to right; a block must be monotone in the direction of its
    label and its values must sit on the correct side of every earlier non-empty
    block.

    Returns:
       - Tuple[Permutation, ...] or None: The parts of a witnessing inflation
    """
    word = p.word
    n, k = p.n, peg.skeleton.n
    skeleton = peg.skeleton.word
    cuts: List[Tuple[int, int]] = []
    # (skeleton value, min, max) of the non-empty blocks placed so far
    ranges: List[Tuple[int, int, int]] = []

    def monotone(start: int, end: int, label: Label) -> bool:
        if label == Label.MINUS:
            return all(word[q] > word[q + 1] for q in range(start, end - 1))
        return all(word[q] < word[q + 1] for q in range(start, end - 1))

    def place(b: int, start: int) -> bool:
        if b == k:
            return start == n
        label = peg.labels[b]
        for length in range(0, min(_max_part(label, n), n - start) + 1):
            end = start + length
            if length and not monotone(start, end, label):
                break
            if length:
                lo, hi = min(word[start:end]), max(word[start:end])
                if not all(
                    (hi < r_lo) if skeleton[b] < v else (lo > r_hi)
                    for v, r_lo, r_hi in ranges
                ):
                    continue
                ranges.append((skeleton[b], lo, hi))
            cuts.append((start, end))
            if place(b + 1, end):
                return True
            cuts.pop()
            if length:
                ranges.pop()
        return False

    if not place(0, 0):
        return None
    return tuple(Permutation._trusted(standardize(word[s:e])) for s, e in cuts)


def grid_member(p: Permutation, peg: PegPermutation) -> bool:
    """Decide whether p lies in the grid class of the peg."""
    return find_grid_witness(p, peg) is not None


def _size_vectors(peg: PegPermutation, n: int) -> Iterator[Tuple[int, ...]]:
    caps = [_max_part(label, n) for label in peg.labels]

    def extend(i: int, left: int) -> Iterator[Tuple[int, ...]]:
        if i == len(caps):
            if left == 0:
                yield ()
            return
        for size in range(0, min(caps[i], left) + 1):
            for rest in extend(i + 1, left - size):
                yield (size,) + rest

    yield from extend(0, n)


def grid_section(peg: PegPermutation, n: int) -> GridSection:
    """
    Return every permutation of length n in the grid class of the peg, sorted.

    Raises:
       - ValueError: If n is negative
    """
    if n < 0:
        raise ValueError(f"Length must be non-negative, got {n}.")
    members = {
        inflate(
            peg.skeleton,
            [_monotone_part(label, size) for label, size in zip(peg.labels, sizes)],
        )
        for sizes in _size_vectors(peg, n)
    }
    return GridSection(peg=peg, n=n, members=tuple(sorted(members)))


def grid_union(pegs: Iterable[PegPermutation], n: int) -> Tuple[Permutation, ...]:
    """The union of the grid sections of several pegs at length n, sorted."""
    members = set()
    for peg in pegs:
        members.update(grid_section(peg, n).members)
    return tuple(sorted(members))


@dataclass(frozen=True)
class BoundedClassReport:
    bounded: bool
    D: Optional[int]
    stabilization_length: Optional[int]
    counts: Tuple[Tuple[int, int], ...]
    constant_verified: bool

    def to_dict(self) -> Dict:
        return {
            "bounded": self.bounded,
            "D": None if self.D is None else str(self.D),
            "stabilization_length": self.stabilization_length,
            "counts": {str(n): str(c) for n, c in self.counts},
            "constant_verified": self.constant_verified,
        }


def _stabilization_length(peg: PegPermutation) -> int:
    # from here on the labeled block is never empty, so no two size vectors of the
    # peg collapse onto the same permutation; an unlabeled peg has nothing past its
    # own length
    if peg.labeled_count:
        return peg.skeleton.n
    return peg.skeleton.n + 1


def bounded_class_check(pegs: Iterable[PegPermutation]) -> BoundedClassReport:
    """
    Decide whether the union of the grid classes of the pegs has boundedly many
    members of each length, and measure the eventual count D.

    A union is bounded iff no peg carries two or more labels. D is measured at the
    stabilization length and checked on the next three lengths.

    Returns:
       - BoundedClassReport: The verdict with per-length counts
    """
    pegs = list(pegs)
    if any(peg.labeled_count > 1 for peg in pegs):
        return BoundedClassReport(
            bounded=False,
            D=None,
            stabilization_length=None,
            counts=(),
            constant_verified=False,
        )
    start = max((_stabilization_length(peg) for peg in pegs), default=0)
    counts = tuple((n, len(grid_union(pegs, n))) for n in range(start, start + 4))
    D = counts[0][1]
    constant = all(c == D for _, c in counts)
    if not constant:
        logger.warning(f"Grid class counts not constant from n = {start}: {counts}")
    return BoundedClassReport(
        bounded=True,
        D=D,
        stabilization_length=start,
        counts=counts,
        constant_verified=constant,
    )


@dataclass(frozen=True)
class StructureForm:
    """
    p = 123[head, id_m, tail] ("ascending") or p = 321[head, psi_m, tail]
    ("descending"), with the middle monotone block as long as possible.
    """

    kind: str
    head: Permutation
    middle_length: int
    tail: Permutation

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "head": str(self.head),
            "middle_length": self.middle_length,
            "tail": str(self.tail),
        }


def _best_cut(word: Tuple[int, ...], ascending: bool) -> Optional[Tuple[int, int]]:
    n = len(word)
    best: Optional[Tuple[int, int]] = None
    prefix_max, prefix_min = 0, n + 1
    for i in range(n):
        if i:
            prefix_max = max(prefix_max, word[i - 1])
            prefix_min = min(prefix_min, word[i - 1])
        # the head must hold the i smallest (ascending) or largest (descending) values
        if i and (prefix_max != i if ascending else prefix_min != n - i + 1):
            continue
        m = 0
        while i + m < n and word[i + m] == (i + m + 1 if ascending else n - i - m):
            m += 1
        if m and (best is None or m > best[1]):
            best = (i, m)
    return best


def structure_form_check(p: Permutation) -> Optional[StructureForm]:
    """
    Decompose p around its longest monotone middle block.

    Ties between the two forms go to the ascending one, then to the shortest head.

    Returns:
       - StructureForm or None: None when neither form exists
    """
    word = p.word
    options = []
    for kind, ascending in (("ascending", True), ("descending", False)):
        cut = _best_cut(word, ascending)
        if cut is not None:
            options.append((cut[1], kind, cut[0]))
    if not options:
        return None
    m, kind, i = max(options, key=lambda o: o[0])
    return StructureForm(
        kind=kind,
        head=Permutation._trusted(standardize(word[:i])),
        middle_length=m,
        tail=Permutation._trusted(standardize(word[i + m :])),
    )
