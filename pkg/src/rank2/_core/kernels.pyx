# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: pc collection, subgroup closure, hom image tables.

Mirrors rank2._core.fallback; keep both in sync.
"""

import numpy as np

cimport numpy as cnp

from ..errors import InconsistentPresentation

COMPILED = True

cnp.import_array()


def collect_gen_table(rel_orders, power_flat, power_off, comm_flat, comm_off,
                      long max_steps=10_000_000):
    cdef cnp.int64_t[:] m = np.ascontiguousarray(rel_orders, dtype=np.int64)
    cdef cnp.int64_t[:] pflat = np.ascontiguousarray(power_flat, dtype=np.int64)
    cdef cnp.int64_t[:] poff = np.ascontiguousarray(power_off, dtype=np.int64)
    cdef cnp.int64_t[:] cflat = np.ascontiguousarray(comm_flat, dtype=np.int64)
    cdef cnp.int64_t[:] coff = np.ascontiguousarray(comm_off, dtype=np.int64)
    cdef int n = m.shape[0]
    cdef cnp.int64_t[:] strides = np.empty(n, dtype=np.int64)
    cdef long total = 1
    cdef int i, j, g, t
    for i in range(n - 1, -1, -1):
        strides[i] = total
        total *= m[i]

    out = np.empty((total, n), dtype=np.int64)
    cdef cnp.int64_t[:, :] table = out
    cdef cnp.int64_t[:] v = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] base = np.zeros(n, dtype=np.int64)
    # worst-case stack depth is modest; grow-on-demand via Python would cost,
    # so allocate generously and fail hard on overflow
    cdef int cap = 1 << 16
    cdef cnp.int64_t[:] stack = np.empty(cap, dtype=np.int64)
    cdef long sp, budget = max_steps
    cdef long rank, rem, r, e, a, k

    for rank in range(total):
        rem = rank
        for i in range(n):
            base[i] = (rem // strides[i]) % m[i]
        for g in range(n):
            for i in range(n):
                v[i] = base[i]
            sp = 0
            stack[sp] = g
            sp += 1
            while sp > 0:
                budget -= 1
                if budget <= 0:
                    raise InconsistentPresentation("collection step budget exhausted")
                sp -= 1
                i = <int> stack[sp]
                t = -1
                for j in range(n - 1, i, -1):
                    if v[j] != 0:
                        t = j
                        break
                if t < 0:
                    e = v[i] + 1
                    if e < m[i]:
                        v[i] = e
                    else:
                        v[i] = 0
                        for k in range(poff[i + 1] - 1, poff[i] - 1, -1):
                            stack[sp] = pflat[k]
                            sp += 1
                else:
                    v[t] -= 1
                    for k in range(coff[t * n + i + 1] - 1, coff[t * n + i] - 1, -1):
                        stack[sp] = cflat[k]
                        sp += 1
                    stack[sp] = t
                    sp += 1
                    stack[sp] = i
                    sp += 1
                if sp > cap - n - 8:
                    raise InconsistentPresentation("collection stack overflow")
            r = 0
            for i in range(n):
                r += v[i] * strides[i]
            table[rank, g] = r
    return out


def closure(mult, seeds):
    cdef cnp.int64_t[:, :] mt = np.ascontiguousarray(mult, dtype=np.int64)
    cdef cnp.int64_t[:] gens = np.unique(np.asarray(seeds, dtype=np.int64))
    cdef int n = mt.shape[0]
    cdef int ng = gens.shape[0]
    cdef cnp.npy_bool[:] seen = np.zeros(n, dtype=bool)
    cdef cnp.int64_t[:] queue = np.empty(n, dtype=np.int64)
    cdef long head = 0, tail = 0
    cdef long x, y
    cdef int gi
    seen[0] = True
    queue[tail] = 0
    tail += 1
    for gi in range(ng):
        x = gens[gi]
        if not seen[x]:
            seen[x] = True
            queue[tail] = x
            tail += 1
    while head < tail:
        x = queue[head]
        head += 1
        for gi in range(ng):
            y = mt[x, gens[gi]]
            if not seen[y]:
                seen[y] = True
                queue[tail] = y
                tail += 1
    out = np.asarray(queue[:tail])
    out.sort()
    return out


def image_tables(mult_t_flat, long n_target, bfs_order, parent, pgen, gen_images):
    cdef cnp.int64_t[:] mt = np.ascontiguousarray(mult_t_flat, dtype=np.int64)
    cdef cnp.int64_t[:] order = np.ascontiguousarray(bfs_order, dtype=np.int64)
    cdef cnp.int64_t[:] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef cnp.int64_t[:] pg = np.ascontiguousarray(pgen, dtype=np.int64)
    gi = np.ascontiguousarray(gen_images, dtype=np.int64)
    cdef cnp.int64_t[:, :] gimg = gi
    cdef long batch = gimg.shape[0]
    cdef long n_src = par.shape[0]
    out = np.zeros((batch, n_src), dtype=np.int64)
    cdef cnp.int64_t[:, :] img = out
    cdef long b, idx, x
    for idx in range(order.shape[0]):
        x = order[idx]
        if x == 0:
            continue
        for b in range(batch):
            img[b, x] = mt[img[b, par[x]] * n_target + gimg[b, pg[x]]]
    return out


def hom_filter(mult_s, mult_t_flat, long n_target, img_arr, gen_idx):
    cdef cnp.int64_t[:, :] ms = np.ascontiguousarray(mult_s, dtype=np.int64)
    cdef cnp.int64_t[:] mt = np.ascontiguousarray(mult_t_flat, dtype=np.int64)
    cdef cnp.int64_t[:, :] img = np.ascontiguousarray(img_arr, dtype=np.int64)
    cdef cnp.int64_t[:] gens = np.ascontiguousarray(gen_idx, dtype=np.int64)
    cdef long batch = img.shape[0]
    cdef long n_src = img.shape[1]
    out = np.ones(batch, dtype=bool)
    cdef cnp.npy_bool[:] ok = out
    cdef long b, x, fg
    cdef int gi
    for b in range(batch):
        for gi in range(gens.shape[0]):
            fg = img[b, gens[gi]]
            for x in range(n_src):
                if img[b, ms[x, gens[gi]]] != mt[img[b, x] * n_target + fg]:
                    ok[b] = False
                    break
            if not ok[b]:
                break
    return out
