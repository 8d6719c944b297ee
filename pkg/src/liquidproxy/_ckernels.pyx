# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled functional-graph kernels; mirrors ``_pykernels`` exactly."""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, uint8_t, uint64_t

import numpy as np


cdef extern from *:
    int popcountll "__builtin_popcountll"(unsigned long long) nogil


cdef inline bint _row_has_fixpoint(const int64_t[:] row, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        if row[i] == i:
            return True
    return False


cdef bint _row_all_hung(const int64_t[:] row, const uint8_t[:] val, Py_ssize_t n,
                        int64_t* color) noexcept nogil:
    cdef Py_ssize_t s, x, y, length, acc
    for s in range(n):
        color[s] = -1
    for s in range(n):
        x = s
        while color[x] == -1:
            color[x] = s
            x = row[x]
        if color[x] != s:
            continue
        # x lies on a cycle first met during this walk
        length = 0
        acc = 0
        y = x
        while True:
            length += 1
            acc += val[y]
            y = row[y]
            if y == x:
                break
        if length % 2 == 1 or 2 * acc != length:
            return False
    return True


def count_fixpoint_free_rows(const int64_t[:, :] maps):
    cdef Py_ssize_t r, rows = maps.shape[0], n = maps.shape[1]
    cdef long long count = 0
    with nogil:
        for r in range(rows):
            if not _row_has_fixpoint(maps[r], n):
                count += 1
    return count


def count_all_hung_rows(const int64_t[:, :] maps, const uint8_t[:, :] values):
    cdef Py_ssize_t r, rows = maps.shape[0], n = maps.shape[1]
    cdef long long count = 0
    cdef int64_t* color = <int64_t*> malloc(max(n, 1) * sizeof(int64_t))
    try:
        with nogil:
            for r in range(rows):
                if _row_all_hung(maps[r], values[r], n, color):
                    count += 1
    finally:
        free(color)
    return count


def count_fixpoint_free_proxy(int n):
    """Enumerate all (n+1)**n single-issue proxy profiles; count those without a guru."""
    cdef int64_t* opt = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* succ = <int64_t*> malloc(n * sizeof(int64_t))
    cdef Py_ssize_t i, k
    cdef long long count = 0
    cdef bint done = False, fix
    try:
        for i in range(n):
            opt[i] = 0
        with nogil:
            while not done:
                # option 0/1: cast a value (self-loop); option 2+k: delegate to k-th other agent
                fix = False
                for i in range(n):
                    if opt[i] < 2:
                        succ[i] = i
                    else:
                        k = opt[i] - 2
                        succ[i] = k if k < i else k + 1
                    if succ[i] == i:
                        fix = True
                if not fix:
                    count += 1
                i = 0
                while True:
                    if i == n:
                        done = True
                        break
                    opt[i] += 1
                    if opt[i] <= n:
                        break
                    opt[i] = 0
                    i += 1
    finally:
        free(opt)
        free(succ)
    return count


def count_all_hung_default(int n):
    """Enumerate all 2**n * n**n default profiles; count those whose cycles are all even and hung."""
    if n > 62:
        raise ValueError("n too large for bitmask enumeration")
    cdef int64_t* succ = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* color = <int64_t*> malloc(n * sizeof(int64_t))
    cdef uint64_t* cmask = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef int* clen = <int*> malloc(n * sizeof(int))
    cdef Py_ssize_t i, s, x, y, nc
    cdef uint64_t v, nvals = (<uint64_t> 1) << n
    cdef long long count = 0
    cdef bint done = False, odd, ok
    try:
        for i in range(n):
            succ[i] = 0
        with nogil:
            while not done:
                for s in range(n):
                    color[s] = -1
                nc = 0
                odd = False
                for s in range(n):
                    x = s
                    while color[x] == -1:
                        color[x] = s
                        x = succ[x]
                    if color[x] != s:
                        continue
                    cmask[nc] = 0
                    clen[nc] = 0
                    y = x
                    while True:
                        cmask[nc] |= (<uint64_t> 1) << y
                        clen[nc] += 1
                        y = succ[y]
                        if y == x:
                            break
                    if clen[nc] % 2 == 1:
                        odd = True
                    nc += 1
                if not odd:
                    for v in range(nvals):
                        ok = True
                        for s in range(nc):
                            if 2 * popcountll(v & cmask[s]) != clen[s]:
                                ok = False
                                break
                        if ok:
                            count += 1
                i = 0
                while True:
                    if i == n:
                        done = True
                        break
                    succ[i] += 1
                    if succ[i] < n:
                        break
                    succ[i] = 0
                    i += 1
    finally:
        free(succ)
        free(color)
        free(cmask)
        free(clen)
    return count
