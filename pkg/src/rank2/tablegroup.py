"""Finite groups as explicit multiplication tables.

Everything downstream (subgroup lattices, automorphism search, fusion
categories) works on integer element indices into a Cayley table, with
index 0 the identity.  Tables are numpy arrays shared read-only.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _core
from .errors import NotASubgroup


class TableGroup:
    """A finite group given by its Cayley table (identity at index 0)."""

    def __init__(self, mult: np.ndarray, name: str = "G"):
        mult = np.ascontiguousarray(mult, dtype=np.int64)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1]:
            raise ValueError("multiplication table must be square")
        self.mult = mult
        self.n = mult.shape[0]
        self.name = name
        self.mult_flat = mult.reshape(-1)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} of order {self.n}>"

    @cached_property
    def inv(self) -> np.ndarray:
        inv = np.empty(self.n, dtype=np.int64)
        rows, cols = np.nonzero(self.mult == 0)
        inv[rows] = cols
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.n, dtype=np.int64)
        orders[0] = 1
        cur = np.arange(self.n)
        idx = np.arange(self.n)
        k = 1
        while (orders == 0).any():
            k += 1
            cur = self.mult[cur, idx]
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if k > self.n:
                raise RuntimeError("order computation diverged; table is not a group")
        return orders

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def prod(self, seq) -> int:
        acc = 0
        for x in seq:
            acc = int(self.mult[acc, x])
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        acc, base = 0, a
        while k:
            if k & 1:
                acc = int(self.mult[acc, base])
            base = int(self.mult[base, base])
            k >>= 1
        return acc

    def conj(self, x: int, g: int) -> int:
        """x^g = g^-1 x g."""
        return int(self.mult[self.mult[self.inv[g], x], g])

    def comm(self, x: int, y: int) -> int:
        """[x, y] = x^-1 y^-1 x y."""
        m = self.mult
        return int(m[m[m[self.inv[x], self.inv[y]], x], y])

    def conj_perm(self, g: int) -> np.ndarray:
        """The permutation x -> g^-1 x g over all elements."""
        return self.mult[self.mult[self.inv[g], np.arange(self.n)], g]

    def conj_by_all(self, x: int) -> np.ndarray:
        """x^g for every g, as an array indexed by g."""
        return self.mult[self.mult[self.inv, x], np.arange(self.n)]

    def closure(self, seeds) -> np.ndarray:
        return _core.closure(self.mult, np.asarray(list(seeds), dtype=np.int64))

    @cached_property
    def center_members(self) -> np.ndarray:
        return self.centralizer_members(np.arange(self.n))

    def centralizer_members(self, members) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        for x in self._reduce_gens(members):
            mask &= self.mult[:, x] == self.mult[x, :]
        return np.flatnonzero(mask)

    def normalizer_members(self, members) -> np.ndarray:
        members = np.asarray(members, dtype=np.int64)
        in_set = np.zeros(self.n, dtype=bool)
        in_set[members] = True
        ok = np.ones(self.n, dtype=bool)
        idx = np.arange(self.n)
        for x in self._reduce_gens(members):
            conj_x = self.mult[self.mult[self.inv, x], idx]
            ok &= in_set[conj_x]
        return np.flatnonzero(ok)

    def _reduce_gens(self, members) -> np.ndarray:
        """A small generating subset of a member list (greedy closure)."""
        members = np.asarray(members, dtype=np.int64)
        gens: list[int] = []
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        for x in members:
            if seen[x]:
                continue
            gens.append(int(x))
            cur = self.closure(gens)
            seen[:] = False
            seen[cur] = True
            if len(cur) >= len(members):
                break
        return np.asarray(gens if gens else [0], dtype=np.int64)

    def generator_hint(self) -> np.ndarray:
        """A generating set; subclasses with presentations override this."""
        return self._reduce_gens(np.arange(self.n))

    @cached_property
    def bfs_tree(self):
        """(order, parent, pgen, gens): spanning tree over generator_hint."""
        gens = np.asarray(self.generator_hint(), dtype=np.int64)
        parent = np.full(self.n, -1, dtype=np.int64)
        pgen = np.full(self.n, -1, dtype=np.int64)
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        queue = np.empty(self.n, dtype=np.int64)
        queue[0] = 0
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            for gi, g in enumerate(gens):
                y = self.mult[x, g]
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    pgen[y] = gi
                    queue[tail] = y
                    tail += 1
        if tail != self.n:
            raise RuntimeError("generator_hint does not generate the group")
        return queue.copy(), parent, pgen, gens

    def subgroup_table(self, members) -> tuple["TableGroup", np.ndarray]:
        """Re-indexed Cayley table of a subgroup; returns (group, members)."""
        members = np.asarray(sorted(int(x) for x in members), dtype=np.int64)
        if members.size == 0 or members[0] != 0:
            raise NotASubgroup("subgroup must contain the identity")
        pos = -np.ones(self.n, dtype=np.int64)
        pos[members] = np.arange(len(members))
        sub = pos[self.mult[np.ix_(members, members)]]
        if (sub < 0).any():
            raise NotASubgroup("member set is not closed under multiplication")
        return TableGroup(sub, name=f"{self.name}|{len(members)}"), members

    def sylow_p(self, p: int) -> np.ndarray:
        """Members of one Sylow p-subgroup (greedy normalizer growth)."""
        orders = self.element_orders
        start = np.flatnonzero(orders == p)
        if start.size == 0:
            return np.array([0], dtype=np.int64)
        cur = self.closure([int(start[0])])
        while True:
            nm = self.normalizer_members(cur)
            in_cur = np.zeros(self.n, dtype=bool)
            in_cur[cur] = True
            grown = False
            for x in nm:
                if in_cur[x] or not _is_p_power(int(orders[x]), p):
                    continue
                bigger = self.closure(list(cur) + [int(x)])
                if _is_p_power(len(bigger), p):
                    cur = bigger
                    grown = True
                    break
            if not grown:
                return cur

    def p_core_members(self, p: int) -> np.ndarray:
        """O_p: the intersection of the conjugates of one Sylow p-subgroup."""
        syl = self.sylow_p(p)
        mask = np.zeros(self.n, dtype=bool)
        mask[syl] = True
        core = mask.copy()
        for g in range(self.n):
            conj_g = self.conj_perm(g)
            new_mask = np.zeros(self.n, dtype=bool)
            new_mask[conj_g[syl]] = True
            core &= new_mask
            if core.sum() == 1:
                break
        return np.flatnonzero(core)

    def quotient(self, normal_members) -> tuple["TableGroup", np.ndarray]:
        """Quotient by a normal subgroup; returns (table, coset label per elt)."""
        normal_members = np.asarray(normal_members, dtype=np.int64)
        coset_of = np.full(self.n, -1, dtype=np.int64)
        reps = []
        for x in range(self.n):
            if coset_of[x] >= 0:
                continue
            coset_of[self.mult[x, normal_members]] = len(reps)
            reps.append(x)
        reps = np.asarray(reps, dtype=np.int64)
        qt = coset_of[self.mult[np.ix_(reps, reps)]]
        return TableGroup(qt, name=f"{self.name}/N"), coset_of

    def is_abelian(self) -> bool:
        return bool((self.mult == self.mult.T).all())

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors (d_1 | d_2 | ...) of an abelian table group."""
        if not self.is_abelian():
            raise ValueError("abelian_invariants needs an abelian group")
        invs: list[int] = []
        remaining = self
        while remaining.n > 1:
            e = remaining.exponent()
            invs.append(e)
            x = int(np.flatnonzero(remaining.element_orders == e)[0])
            q, _ = remaining.quotient(remaining.closure([x]))
            remaining = q
        invs.sort()
        return tuple(invs)


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1
