"""Symmetric-group combinatorics: lengths, reduced words, Bruhat order.

Permutations are stored in 1-based one-line notation, so ``w(i)`` is
``image[i-1]``.  Generator indices run over 1..n-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import NotComparable, RankTooLarge

INTERVAL_GUARD = 7
ALL_WORDS_GUARD = 4


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(1, len(self.image) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.image)}: {self.image}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def longest(n: int) -> "Permutation":
        return Permutation(tuple(range(n, 0, -1)))

    @staticmethod
    def transposition(i: int, n: int) -> "Permutation":
        """The simple reflection s_i, swapping i and i+1."""
        img = list(range(1, n + 1))
        img[i - 1], img[i] = img[i], img[i - 1]
        return Permutation(tuple(img))

    @staticmethod
    def parse(text: str) -> "Permutation":
        return Permutation(tuple(int(p) for p in text.split(",")))

    def serialize(self) -> str:
        return ",".join(str(v) for v in self.image)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition (self*other)(i) = self(other(i))."""
        if self.n != other.n:
            raise ValueError("rank mismatch")
        return Permutation(tuple(self.image[other.image[i] - 1] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        img = [0] * self.n
        for i, v in enumerate(self.image):
            img[v - 1] = i + 1
        return Permutation(tuple(img))

    @cached_property
    def length(self) -> int:
        img = self.image
        return sum(
            1
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if img[i] > img[j]
        )

    def descents(self) -> list[int]:
        """Right descents: i with w(i) > w(i+1)."""
        return [i + 1 for i in range(self.n - 1) if self.image[i] > self.image[i + 1]]

    @cached_property
    def rank_table(self) -> tuple[tuple[int, ...], ...]:
        """r(i,j) = #{k <= i : w(k) <= j}, the Bruhat dominance table."""
        n = self.n
        table = []
        row = [0] * (n + 1)
        for i in range(1, n + 1):
            row = row.copy()
            for j in range(self.image[i - 1], n + 1):
                row[j] += 1
            table.append(tuple(row))
        return tuple(table)


def length(w: Permutation) -> int:
    return w.length


def bruhat_leq(u: Permutation, v: Permutation) -> bool:
    """Bruhat order via rank-table dominance: u <= v iff r_u >= r_v entrywise."""
    if u.n != v.n:
        raise ValueError("rank mismatch")
    ru, rv = u.rank_table, v.rank_table
    return all(ru[i][j] >= rv[i][j] for i in range(u.n) for j in range(u.n + 1))


def bruhat_less(u: Permutation, v: Permutation) -> bool:
    return u != v and bruhat_leq(u, v)


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(img) for img in itertools.permutations(range(1, n + 1))]


@dataclass(frozen=True)
class BruhatInterval:
    lower: Permutation
    upper: Permutation
    elements: frozenset[Permutation]


def interval(u: Permutation, v: Permutation) -> BruhatInterval:
    if u.n > INTERVAL_GUARD:
        raise RankTooLarge(f"interval enumeration guarded at n <= {INTERVAL_GUARD}")
    if not bruhat_leq(u, v):
        raise NotComparable(f"{u.serialize()} is not <= {v.serialize()}")
    elems = frozenset(
        w for w in all_permutations(u.n) if bruhat_leq(u, w) and bruhat_leq(w, v)
    )
    return BruhatInterval(u, v, elems)


def mobius(u: Permutation, v: Permutation) -> int:
    """Mobius function of the Bruhat order, by the recursive sieve."""
    box = interval(u, v)
    ordered = sorted(box.elements, key=lambda w: w.length)
    mu: dict[Permutation, int] = {}
    for w in ordered:
        if w == u:
            mu[w] = 1
            continue
        mu[w] = -sum(mu[z] for z in ordered if z != w and bruhat_leq(z, w))
    return mu[v]


def verma_sum(u: Permutation, v: Permutation) -> int:
    box = interval(u, v)
    return sum((-1) ** w.length for w in box.elements)


@dataclass(frozen=True)
class ReducedWord:
    letters: tuple[int, ...]
    target: Permutation

    def serialize(self) -> str:
        return ".".join(f"s{a}" for a in self.letters)

    @staticmethod
    def parse(text: str, n: int) -> "ReducedWord":
        letters = tuple(int(p[1:]) for p in text.split(".")) if text else ()
        return ReducedWord(letters, word_product(letters, n))


def word_product(letters: tuple[int, ...], n: int) -> Permutation:
    w = Permutation.identity(n)
    for a in letters:
        w = w * Permutation.transposition(a, n)
    return w


def reduced_word(w: Permutation) -> ReducedWord:
    """Canonical reduced word, peeling off the leftmost descent on the right."""
    letters: list[int] = []
    v = w
    while True:
        ds = v.descents()
        if not ds:
            break
        i = ds[0]
        letters.append(i)
        v = v * Permutation.transposition(i, v.n)
    letters.reverse()
    return ReducedWord(tuple(letters), w)


def all_reduced_words(w: Permutation) -> set[tuple[int, ...]]:
    if w.n > ALL_WORDS_GUARD:
        raise RankTooLarge(f"all_reduced_words guarded at n <= {ALL_WORDS_GUARD}")
    if w.length == 0:
        return {()}
    out: set[tuple[int, ...]] = set()
    for i in w.descents():
        shorter = w * Permutation.transposition(i, w.n)
        out.update(word + (i,) for word in all_reduced_words(shorter))
    return out


def bruhat_leq_subword(u: Permutation, v: Permutation) -> bool:
    """Test oracle: some reduced word of u is a subword of every reduced word of v.

    By the subword property it suffices to scan one reduced word of v for
    every reduced word of u.
    """
    if u == v:
        return True
    if u.length >= v.length:
        return False
    vword = reduced_word(v).letters
    for uword in all_reduced_words(u):
        it = iter(vword)
        if all(a in it for a in uword):
            return True
    return False
