"""Pure numpy/Python implementations of the hot kernels.

Used when the compiled extension (``rank2._core.kernels``) is unavailable
or when ``RANK2_PURE=1``.  Semantics must match the Cython versions
exactly; the benchmark suite compares both.
"""

from __future__ import annotations

import numpy as np

from ..errors import InconsistentPresentation

COMPILED = False


def collect_gen_table(rel_orders, power_flat, power_off, comm_flat, comm_off,
                      max_steps=10_000_000):
    """Right-multiplication table ``x * g_i`` for all normal forms x.

    Normal forms are ranked in mixed radix with generator 0 most
    significant.  Words are flat arrays of positive generator letters;
    ``power_off``/``comm_off`` delimit the collected word of g_i^{m_i} and
    of [g_t, g_i] for t > i.
    """
    n = len(rel_orders)
    m = [int(x) for x in rel_orders]
    strides = [0] * n
    acc = 1
    for i in range(n - 1, -1, -1):
        strides[i] = acc
        acc *= m[i]
    total = acc
    power_words = [list(power_flat[power_off[i]:power_off[i + 1]]) for i in range(n)]
    comm_words = {}
    for t in range(n):
        for i in range(n):
            w = list(comm_flat[comm_off[t * n + i]:comm_off[t * n + i + 1]])
            if w:
                comm_words[(t, i)] = w

    table = np.empty((total, n), dtype=np.int64)
    v = [0] * n
    budget = max_steps

    def mul_gen(i0):
        nonlocal budget
        stack = [i0]
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
                    stack.extend(reversed(power_words[i]))
            else:
                v[t] -= 1
                w = comm_words.get((t, i))
                if w:
                    stack.extend(reversed(w))
                stack.append(t)
                stack.append(i)

    for rank in range(total):
        rem = rank
        base = [0] * n
        for i in range(n):
            base[i] = (rem // strides[i]) % m[i]
        for g in range(n):
            v[:] = base
            mul_gen(g)
            r = 0
            for i in range(n):
                r += v[i] * strides[i]
            table[rank, g] = r
    return table


def closure(mult, seeds):
    """Sorted member set of the subgroup generated by ``seeds``."""
    n = mult.shape[0]
    seen = np.zeros(n, dtype=bool)
    gens = np.unique(np.asarray(seeds, dtype=np.int64))
    seen[0] = True
    seen[gens] = True
    frontier = np.flatnonzero(seen)
    while frontier.size:
        prods = np.unique(mult[np.ix_(frontier, gens)])
        new = prods[~seen[prods]]
        seen[new] = True
        frontier = new
    return np.flatnonzero(seen).astype(np.int64)


def image_tables(mult_t_flat, n_target, bfs_order, parent, pgen, gen_images):
    """Extend generator images to full maps along a BFS spanning tree.

    ``gen_images`` is (batch, d); returns (batch, n_source) where entry
    [b, x] is the image of source element x under candidate b.
    """
    gen_images = np.asarray(gen_images, dtype=np.int64)
    batch = gen_images.shape[0]
    n_src = parent.shape[0]
    img = np.zeros((batch, n_src), dtype=np.int64)
    for x in bfs_order:
        if x == 0:
            continue
        img[:, x] = mult_t_flat[img[:, parent[x]] * n_target + gen_images[:, pgen[x]]]
    return img


def hom_filter(mult_s, mult_t_flat, n_target, img, gen_idx):
    """Boolean mask of candidates whose image map is a homomorphism.

    Checks f(x*g) == f(x)*f(g) for all x and the listed generators g; that
    suffices because any map satisfying it is multiplicative on all pairs.
    """
    ok = np.ones(img.shape[0], dtype=bool)
    for g in gen_idx:
        lhs = img[:, mult_s[:, g]]
        rhs = mult_t_flat[img * n_target + img[:, [g]]]
        ok &= (lhs == rhs).all(axis=1)
        if not ok.any():
            break
    return ok
