# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled rewriting kernel; same API and results as ``_pykernels``."""

import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

BACKEND = "cython"


cdef class WordReducer:
    cdef public object one
    cdef public object zero
    cdef public dict rules
    cdef public list lengths
    cdef public dict memo

    def __init__(self, rules, one, zero):
        self.one = one
        self.zero = zero
        self.rules = {}
        self.lengths = []
        self.memo = {}
        self.add_rules(rules)

    def add_rules(self, rules):
        for lw, tail in rules.items():
            self.rules[tuple(lw)] = tuple(tail.items()) if isinstance(tail, dict) else tuple(tail)
        self.lengths = sorted({len(w) for w in self.rules}, reverse=True)
        self.memo = {}

    def clear(self):
        self.memo = {}

    cpdef Py_ssize_t match_suffix(self, tuple w):
        cdef Py_ssize_t n = len(w)
        cdef Py_ssize_t L
        for L in self.lengths:
            if L <= n and w[n - L:] in self.rules:
                return L
        return 0

    cpdef bint is_normal(self, tuple w):
        cdef Py_ssize_t n = len(w)
        cdef Py_ssize_t L, i
        for L in self.lengths:
            for i in range(n - L + 1):
                if w[i:i + L] in self.rules:
                    return False
        return True

    cpdef dict word_letter(self, tuple v, object x):
        cdef tuple w = v + (x,)
        cdef object r = self.memo.get(w)
        cdef Py_ssize_t L, n
        cdef dict acc, part
        cdef tuple p
        if r is not None:
            return <dict>r
        L = self.match_suffix(w)
        if L == 0:
            r = {w: self.one}
        else:
            n = len(w)
            p = w[:n - L]
            acc = {}
            zero = self.zero
            for u, c in self.rules[w[n - L:]]:
                part = self.word_times_word(p, u)
                for k, d in part.items():
                    acc[k] = acc.get(k, zero) + c * d
            r = {k: c for k, c in acc.items() if c}
        self.memo[w] = r
        return <dict>r

    cpdef dict poly_letter(self, dict f, object x):
        cdef dict acc = {}
        zero = self.zero
        for v, c in f.items():
            for k, d in self.word_letter(v, x).items():
                acc[k] = acc.get(k, zero) + c * d
        return {k: c for k, c in acc.items() if c}

    cpdef dict word_times_word(self, tuple v, tuple u):
        cdef dict f
        cdef Py_ssize_t j
        if len(u) == 0:
            return {v: self.one}
        f = self.word_letter(v, u[0])
        for j in range(1, len(u)):
            f = self.poly_letter(f, u[j])
        return f

    cpdef dict mul(self, dict f, dict g):
        cdef dict acc = {}
        zero = self.zero
        for v, c in f.items():
            for u, d in g.items():
                cd = c * d
                if not cd:
                    continue
                for k, e in self.word_times_word(v, u).items():
                    acc[k] = acc.get(k, zero) + cd * e
        return {k: c for k, c in acc.items() if c}

    cpdef dict nf(self, dict f):
        cdef dict acc = {}
        zero = self.zero
        for u, c in f.items():
            for k, e in self.word_times_word((), u).items():
                acc[k] = acc.get(k, zero) + c * e
        return {k: c for k, c in acc.items() if c}


cpdef dict free_mul(dict f, dict g, object zero):
    cdef dict acc = {}
    cdef tuple w
    for v, c in f.items():
        for u, d in g.items():
            w = <tuple>v + <tuple>u
            acc[w] = acc.get(w, zero) + c * d
    return {k: c for k, c in acc.items() if c}


cpdef dict substitute(dict f, list images, object reducer, object one, object zero):
    cdef dict cache = {(): {(): one}}
    cdef dict acc = {}
    cdef Py_ssize_t k, j
    cdef tuple w
    cdef dict cur
    for wo, c in f.items():
        w = <tuple>wo
        if w not in cache:
            k = len(w) - 1
            while w[:k] not in cache:
                k -= 1
            cur = cache[w[:k]]
            for j in range(k, len(w)):
                cur = reducer.mul(cur, images[w[j]])
                cache[w[:j + 1]] = cur
        for u, d in (<dict>cache[w]).items():
            acc[u] = acc.get(u, zero) + c * d
    return {k2: c2 for k2, c2 in acc.items() if c2}
