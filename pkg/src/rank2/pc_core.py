"""Exact arithmetic in finite p-groups given by power-commutator relations.

A presentation lists, for each generator g_i, a power relation
g_i^{m_i} = (word in later generators) and, for each ordered pair t > i, a
commutator relation [g_t, g_i] = (word in generators after g_i).  Elements
are canonical exponent vectors collected from the left.  Enumerating all
p^n normal forms and checking the group axioms on the resulting Cayley
table certifies consistency of the presentation; collection itself is
never trusted on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _core
from .errors import (InconsistentPresentation, MalformedRelation, MixedAmbient,
                     NonOddPrime, OrderBoundExceeded)
from .tablegroup import TableGroup

Word = Sequence[tuple[str, int]]

DEFAULT_ORDER_BOUND = 3 ** 7
FULL_ASSOC_BOUND = 3 ** 5
ASSOC_SAMPLES = 1_000_000


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


class PcPresentation:
    """Validated power-commutator presentation of a finite p-group.

    ``rel_orders[i]`` is the relative order of generator i (a power of p,
    derived from its power relation); the group order is their product.
    """

    def __init__(self, p, labels, rel_orders, power_words, comm_words):
        self.p = p
        self.labels = tuple(labels)
        self.rel_orders = tuple(rel_orders)
        self.power_words = power_words      # dict i -> Word (value of g_i^{m_i})
        self.comm_words = comm_words        # dict (t, i), t > i -> Word ([g_t, g_i])
        self.n_gens = len(self.labels)
        self.order = 1
        for m in self.rel_orders:
            self.order *= m
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._compile()

    def gen_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise MalformedRelation(f"unknown generator {label!r}") from None

    def word_indices(self, word: Word) -> list[tuple[int, int]]:
        out = []
        for lab, e in word:
            if not isinstance(e, int):
                raise MalformedRelation(f"exponent {e!r} is not an integer")
            out.append((self.gen_index(lab), e))
        return out

    # -- compilation to positive-letter rewriting data ------------------

    def _compile(self) -> None:
        n = self.n_gens
        pow_letters: list[list[int]] = [[] for _ in range(n)]
        for i in range(n - 1, -1, -1):
            raw = self.word_indices(self.power_words.get(i, ()))
            for j, _ in raw:
                if j <= i:
                    raise MalformedRelation(
                        f"power relation of {self.labels[i]} uses {self.labels[j]}; "
                        "only later generators are allowed")
            pow_letters[i] = self._positive_letters(raw, pow_letters, low=i)
        inv_letters: list[list[int]] = [[] for _ in range(n)]
        for i in range(n - 1, -1, -1):
            # g^-1 = g^{m-1} * (g^m)^-1, all letters strictly later than i
            w = [i] * (self.rel_orders[i] - 1)
            for j in reversed(pow_letters[i]):
                w.extend(inv_letters[j])
            inv_letters[i] = w
        self._inv_letters = inv_letters
        self._pow_letters = pow_letters

        comm_letters: dict[tuple[int, int], list[int]] = {}
        for (t, i), word in self.comm_words.items():
            if t <= i:
                raise MalformedRelation("commutator relations are keyed by (later, earlier)")
            letters = self._positive_letters(self.word_indices(word), pow_letters, low=i)
            if letters:
                comm_letters[(t, i)] = letters
        self._comm_letters = comm_letters

        self.strides = [0] * n
        acc = 1
        for i in range(n - 1, -1, -1):
            self.strides[i] = acc
            acc *= self.rel_orders[i]

    def _positive_letters(self, word, pow_letters, low: int) -> list[int]:
        """Expand a (gen, exponent) word to positive single letters > low."""
        out: list[int] = []
        for j, e in word:
            if j <= low:
                raise MalformedRelation(
                    f"relation word uses {self.labels[j]} at or before position {low}")
            if e >= 0:
                out.extend([j] * e)
            else:
                inv_j = [j] * (self.rel_orders[j] - 1)
                for k in reversed(pow_letters[j]):
                    inv_j.extend(self._known_inverse(k, pow_letters))
                out.extend(inv_j * (-e))
        return out

    def _known_inverse(self, j: int, pow_letters) -> list[int]:
        w = [j] * (self.rel_orders[j] - 1)
        for k in reversed(pow_letters[j]):
            w.extend(self._known_inverse(k, pow_letters))
        return w

    # -- normal forms ----------------------------------------------------

    def rank_of(self, exponents: Sequence[int]) -> int:
        return int(sum(e * s for e, s in zip(exponents, self.strides)))

    def exponents_of(self, rank: int) -> tuple[int, ...]:
        return tuple((rank // s) % m for s, m in zip(self.strides, self.rel_orders))

    def collect_letters(self, letters: Iterable[int], max_steps: int = 10_000_000):
        """Collect a positive-letter word into an exponent vector."""
        n = self.n_gens
        m = self.rel_orders
        v = [0] * n
        budget = max_steps
        for letter in letters:
            stack = [letter]
            while stack:
                budget -= 1
                if budget <= 0:
                    raise InconsistentPresentation("collection step budget exhausted")
                i = stack.pop()
                t = -1
                for j in range(n - 1, i, -1):
                    if v[j]:
                        t = j
                        break
                if t < 0:
                    e = v[i] + 1
                    if e < m[i]:
                        v[i] = e
                    else:
                        v[i] = 0
                        stack.extend(reversed(self._pow_letters[i]))
                else:
                    v[t] -= 1
                    w = self._comm_letters.get((t, i))
                    if w:
                        stack.extend(reversed(w))
                    stack.append(t)
                    stack.append(i)
        return tuple(v)

    def collect_word(self, word: Word) -> tuple[int, ...]:
        letters = self._positive_letters(self.word_indices(word), self._pow_letters, low=-1)
        return self.collect_letters(letters)

    # -- misc -------------------------------------------------------------

    def describe(self) -> dict:
        return {
            "p": self.p,
            "labels": list(self.labels),
            "relative_orders": list(self.rel_orders),
            "power_relations": {
                self.labels[i]: word_str(w) for i, w in sorted(self.power_words.items())},
            "commutator_relations": {
                f"[{self.labels[t]},{self.labels[i]}]": word_str(w)
                for (t, i), w in sorted(self.comm_words.items())},
            "order": self.order,
        }

    def __repr__(self) -> str:
        return f"<PcPresentation p={self.p} gens={','.join(self.labels)} order={self.order}>"


def word_str(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(lab if e == 1 else f"{lab}^{e}" for lab, e in word)


def parse_word(text: str) -> list[tuple[str, int]]:
    """Parse words like ``"s1^3 s2^-1"`` (or ``"1"`` for the identity)."""
    text = text.strip()
    if text in ("", "1"):
        return []
    out = []
    for tok in text.replace("*", " ").split():
        if "^" in tok:
            lab, _, e = tok.partition("^")
            try:
                out.append((lab, int(e)))
            except ValueError:
                raise MalformedRelation(f"bad exponent in token {tok!r}") from None
        else:
            out.append((tok, 1))
    return out


def make_presentation(p: int, labels: Sequence[str],
                      power_relations: Mapping[str, object] | None = None,
                      commutator_relations: Mapping[tuple[str, str], object] | None = None,
                      ) -> PcPresentation:
    """Build and validate a PcPresentation.

    ``power_relations[lab]`` is the value of lab^p as a word (or a pair
    ``(m, word)`` to declare relative order m = p^k).  Omitted power
    relations mean g^p = 1; omitted commutators mean the pair commutes.
    ``commutator_relations[(u, v)]`` is the value of [u, v] where u comes
    after v in ``labels``.
    """
    if p < 3 or p % 2 == 0 or not _is_prime(p):
        raise NonOddPrime(f"p must be an odd prime, got {p}")
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise MalformedRelation("duplicate generator labels")
    index = {lab: i for i, lab in enumerate(labels)}

    def as_word(value) -> list[tuple[str, int]]:
        if isinstance(value, str):
            return parse_word(value)
        return [(lab, int(e)) for lab, e in value]

    rel_orders = [p] * len(labels)
    power_words: dict[int, list[tuple[str, int]]] = {}
    for lab, value in (power_relations or {}).items():
        if lab not in index:
            raise MalformedRelation(f"power relation for unknown generator {lab!r}")
        if isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], int):
            m, word = value
            if m < p or _p_part(m, p) != m:
                raise MalformedRelation(f"relative order {m} is not a power of {p}")
            rel_orders[index[lab]] = m
            power_words[index[lab]] = as_word(word)
        else:
            power_words[index[lab]] = as_word(value)

    comm_words: dict[tuple[int, int], list[tuple[str, int]]] = {}
    for (u, v), value in (commutator_relations or {}).items():
        if u not in index or v not in index:
            missing = u if u not in index else v
            raise MalformedRelation(f"commutator relation uses unknown generator {missing!r}")
        t, i = index[u], index[v]
        if t == i:
            raise MalformedRelation(f"[{u},{v}] is trivially 1")
        if t < i:
            raise MalformedRelation(
                f"commutator relations are given as [later, earlier]; got [{u},{v}]")
        word = as_word(value)
        if word:
            comm_words[(t, i)] = word

    pres = PcPresentation(p, labels, rel_orders, power_words, comm_words)
    for word in list(power_words.values()) + list(comm_words.values()):
        pres.word_indices(word)  # label validation happens inside
    return pres


def _p_part(m: int, p: int) -> int:
    out = 1
    while m % p == 0:
        m //= p
        out *= p
    return out


@dataclass(frozen=True)
class Element:
    """Canonical exponent vector in a fixed presentation."""

    pres: PcPresentation
    exponents: tuple[int, ...]

    def __post_init__(self):
        for e, m in zip(self.exponents, self.pres.rel_orders):
            if not 0 <= e < m:
                raise MalformedRelation(f"exponent {e} out of range [0,{m})")

    def _check(self, other: "Element") -> None:
        if self.pres is not other.pres:
            raise MixedAmbient("elements come from different presentations")

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        word = [(self.pres.labels[i], e) for i, e in enumerate(self.exponents) if e]
        word += [(self.pres.labels[i], e) for i, e in enumerate(other.exponents) if e]
        return Element(self.pres, self.pres.collect_word(word))

    def inverse(self) -> "Element":
        word = [(self.pres.labels[i], -e)
                for i, e in reversed(list(enumerate(self.exponents))) if e]
        return Element(self.pres, self.pres.collect_word(word))

    def __pow__(self, k: int) -> "Element":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        acc = identity(self.pres)
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def commutator(self, other: "Element") -> "Element":
        self._check(other)
        return self.inverse() * other.inverse() * self * other

    def order(self) -> int:
        k, cur = 1, self
        e = identity(self.pres)
        while cur != e:
            cur = cur * self
            k += 1
        return k

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def __str__(self) -> str:
        w = [(self.pres.labels[i], e) for i, e in enumerate(self.exponents) if e]
        return word_str(w)


def identity(pres: PcPresentation) -> Element:
    return Element(pres, (0,) * pres.n_gens)


def normal_form(pres: PcPresentation, word: Word) -> Element:
    """Collected normal form of an arbitrary word."""
    return Element(pres, pres.collect_word(word))


def multiply(x: Element, y: Element) -> Element:
    return x * y


def inverse(x: Element) -> Element:
    return x.inverse()


def power(x: Element, k: int) -> Element:
    return x ** k


def commutator(x: Element, y: Element) -> Element:
    return x.commutator(y)


def element_order(x: Element) -> int:
    return x.order()


class EnumeratedGroup(TableGroup):
    """All elements of a consistent PcPresentation with full Cayley table."""

    def __init__(self, pres: PcPresentation, mult, exponents, gen_elements):
        super().__init__(mult, name="x".join(pres.labels))
        self.pres = pres
        self.p = pres.p
        self.exponents = exponents            # (order, n_gens) int array
        self.gen_elements = gen_elements      # element index of each pc generator

    def generator_hint(self) -> np.ndarray:
        # pc generators always generate; keep them in presentation order
        return np.asarray(self.gen_elements, dtype=np.int64)

    def element(self, index: int) -> Element:
        return Element(self.pres, tuple(int(e) for e in self.exponents[index]))

    def index_of(self, x: Element | Sequence[int]) -> int:
        if isinstance(x, Element):
            if x.pres is not self.pres:
                raise MixedAmbient("element from a different presentation")
            return self.pres.rank_of(x.exponents)
        return self.pres.rank_of(x)

    def index_of_word(self, word: Word) -> int:
        return self.pres.rank_of(self.pres.collect_word(word))

    def describe(self) -> dict:
        info = self.pres.describe()
        info["element_count"] = self.n
        return info


def enumerate_group(pres: PcPresentation, bound: int = DEFAULT_ORDER_BOUND,
                    assoc_samples: int = ASSOC_SAMPLES, rng_seed: int = 0,
                    ) -> EnumeratedGroup:
    """Enumerate all normal forms and certify the presentation.

    Raises InconsistentPresentation unless collection reaches exactly
    ``order`` distinct elements, the table has two-sided identity and
    inverses, associativity holds (all triples up to 3^5, sampled above),
    and every declared relation re-evaluates correctly in the table.
    """
    if pres.order > bound:
        raise OrderBoundExceeded(
            f"group order {pres.order} exceeds bound {bound}")
    n = pres.order
    rel = np.asarray(pres.rel_orders, dtype=np.int64)
    pow_flat, pow_off = _flatten([pres._pow_letters[i] for i in range(pres.n_gens)])
    comm_list = []
    ng = pres.n_gens
    for t in range(ng):
        for i in range(ng):
            comm_list.append(pres._comm_letters.get((t, i), []))
    comm_flat, comm_off = _flatten(comm_list)
    gen_table = _core.collect_gen_table(rel, pow_flat, pow_off, comm_flat, comm_off)

    # reachability from the identity certifies that collection did not
    # collapse the normal-form space
    mult = np.full((n, n), -1, dtype=np.int64)
    mult[:, 0] = np.arange(n)
    parent = np.full(n, -1, dtype=np.int64)
    pgen = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = [0]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for g in range(ng):
            y = int(gen_table[x, g])
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                pgen[y] = g
                queue.append(y)
    if len(queue) != n:
        raise InconsistentPresentation(
            f"closure from identity reaches {len(queue)} of {n} normal forms")
    for y in queue:
        if y == 0:
            continue
        mult[:, y] = gen_table[mult[:, parent[y]], pgen[y]]

    exps = np.empty((n, ng), dtype=np.int64)
    rem = np.arange(n)
    for i in range(ng):
        exps[:, i] = (rem // pres.strides[i]) % pres.rel_orders[i]

    _certify_table(mult, assoc_samples=assoc_samples, rng_seed=rng_seed)

    gen_elements = tuple(pres.rank_of(tuple(int(i == j) for j in range(ng)))
                         for i in range(ng))
    group = EnumeratedGroup(pres, mult, exps, gen_elements)
    _certify_relations(group)
    return group


def _flatten(words: list[list[int]]):
    flat, off = [], [0]
    for w in words:
        flat.extend(w)
        off.append(len(flat))
    return np.asarray(flat, dtype=np.int64), np.asarray(off, dtype=np.int64)


def _certify_table(mult: np.ndarray, assoc_samples: int, rng_seed: int) -> None:
    n = mult.shape[0]
    if (mult[0, :] != np.arange(n)).any() or (mult[:, 0] != np.arange(n)).any():
        raise InconsistentPresentation("identity fails in the collected table")
    has_inverse = (mult == 0).any(axis=1)
    if not has_inverse.all():
        raise InconsistentPresentation("an element has no right inverse")
    if n <= FULL_ASSOC_BOUND:
        for a in range(n):
            if not (mult[mult[a, :], :] == mult[a, mult]).all():
                raise InconsistentPresentation(f"associativity fails at row {a}")
    else:
        rng = np.random.default_rng(rng_seed)
        a = rng.integers(0, n, assoc_samples)
        b = rng.integers(0, n, assoc_samples)
        c = rng.integers(0, n, assoc_samples)
        if not (mult[mult[a, b], c] == mult[a, mult[b, c]]).all():
            raise InconsistentPresentation("associativity fails on a sampled triple")


def _certify_relations(g: EnumeratedGroup) -> None:
    pres = g.pres
    for i in range(pres.n_gens):
        lhs = g.power(g.gen_elements[i], pres.rel_orders[i])
        rhs = g.index_of_word(pres.power_words.get(i, ()))
        if lhs != rhs:
            raise InconsistentPresentation(
                f"power relation of {pres.labels[i]} fails in the table")
    for t in range(pres.n_gens):
        for i in range(t):
            lhs = g.comm(g.gen_elements[t], g.gen_elements[i])
            rhs = g.index_of_word(pres.comm_words.get((t, i), ()))
            if lhs != rhs:
                raise InconsistentPresentation(
                    f"commutator [{pres.labels[t]},{pres.labels[i]}] fails in the table")
