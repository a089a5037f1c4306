import pathlib
import tempfile
from itertools import combinations, permutations, product

import pytest

from avoidgroup.perms import Permutation


def brute_all_perms(n):
    return [Permutation(w) for w in permutations(range(1, n + 1))]


def brute_contains(p, tau):
    k = len(tau.word)
    for idx in combinations(range(p.n), k):
        values = [p.word[i] for i in idx]
        ranks = sorted(values)
        if tuple(ranks.index(v) + 1 for v in values) == tau.word:
            return True
    return k == 0


def brute_avoiders(n, patterns):
    return [
        p for p in brute_all_perms(n) if not any(brute_contains(p, t) for t in patterns)
    ]


def brute_closure(gens, n):
    identity = tuple(range(1, n + 1))
    seen = {identity}
    frontier = [identity]
    words = [g.word for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in words:
                y = tuple(g[i - 1] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return {Permutation(w) for w in seen}


def brute_inflations(peg, n):
    """Every inflation of the peg of length n, built from its labels."""
    out = set()
    labels = [lab.value for lab in peg.labels]
    caps = [1 if lab == "" else n for lab in labels]
    for sizes in product(*(range(c + 1) for c in caps)):
        if sum(sizes) != n:
            continue
        blocks = []
        for lab, size in zip(labels, sizes):
            block = list(range(1, size + 1))
            blocks.append(block[::-1] if lab == "-" else block)
        skeleton = peg.skeleton.word
        word = []
        for i, block in enumerate(blocks):
            below = sum(
                sizes[j] for j in range(len(skeleton)) if skeleton[j] < skeleton[i]
            )
            word.extend(below + x for x in block)
        out.add(Permutation(tuple(word)))
    return out


@pytest.fixture(scope="session")
def all_perms():
    return brute_all_perms


@pytest.fixture(scope="session")
def oracle_contains():
    return brute_contains


@pytest.fixture(scope="session")
def oracle_avoiders():
    return brute_avoiders


@pytest.fixture(scope="session")
def oracle_closure():
    return brute_closure


@pytest.fixture(scope="session")
def oracle_inflations():
    return brute_inflations


@pytest.fixture()
def dbpath():
    with tempfile.TemporaryDirectory() as tmpdir:
        yield str(pathlib.Path(tmpdir).joinpath("avoidgroup_test.sqlite"))
