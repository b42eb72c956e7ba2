"""Pure-Python rewriting kernel.

Words are tuples of letter ids; polynomials are dicts word -> coefficient.
Coefficients are any field elements supporting ``+``, ``*`` and truthiness.
``_kernels.pyx`` mirrors this module line for line.
"""

import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

BACKEND = "python"


class WordReducer:
    """Normal forms modulo a fixed set of rules ``leading word -> tail``.

    Every reduction is driven by multiplying a normal word by one letter, so
    only suffixes of the product can be reducible; results are memoized per
    word.  The memo is only valid for the current rule set.
    """

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

    def match_suffix(self, w):
        """Length of the longest suffix of ``w`` that is a leading word, or 0."""
        n = len(w)
        rules = self.rules
        for L in self.lengths:
            if L <= n and w[n - L:] in rules:
                return L
        return 0

    def is_normal(self, w):
        rules = self.rules
        n = len(w)
        for L in self.lengths:
            for i in range(n - L + 1):
                if w[i:i + L] in rules:
                    return False
        return True

    def word_letter(self, v, x):
        """Normal form of ``v * x`` for a normal word ``v``."""
        w = v + (x,)
        r = self.memo.get(w)
        if r is not None:
            return r
        L = self.match_suffix(w)
        if not L:
            r = {w: self.one}
        else:
            p = w[:len(w) - L]
            acc = {}
            zero = self.zero
            for u, c in self.rules[w[len(w) - L:]]:
                part = self.word_times_word(p, u)
                for k, d in part.items():
                    acc[k] = acc.get(k, zero) + c * d
            r = {k: c for k, c in acc.items() if c}
        self.memo[w] = r
        return r

    def poly_letter(self, f, x):
        """Normal form of ``f * x`` for ``f`` in normal words."""
        acc = {}
        zero = self.zero
        for v, c in f.items():
            for k, d in self.word_letter(v, x).items():
                acc[k] = acc.get(k, zero) + c * d
        return {k: c for k, c in acc.items() if c}

    def word_times_word(self, v, u):
        """Normal form of ``v * u`` for a normal word ``v`` and any word ``u``."""
        if not u:
            return {v: self.one}
        f = self.word_letter(v, u[0])
        for x in u[1:]:
            f = self.poly_letter(f, x)
        return f

    def mul(self, f, g):
        """Normal form of ``f * g`` for ``f`` in normal words and any ``g``."""
        acc = {}
        zero = self.zero
        for v, c in f.items():
            for u, d in g.items():
                cd = c * d
                if not cd:
                    continue
                for k, e in self.word_times_word(v, u).items():
                    acc[k] = acc.get(k, zero) + cd * e
        return {k: c for k, c in acc.items() if c}

    def nf(self, f):
        """Normal form of an arbitrary polynomial."""
        acc = {}
        zero = self.zero
        for u, c in f.items():
            for k, e in self.word_times_word((), u).items():
                acc[k] = acc.get(k, zero) + c * e
        return {k: c for k, c in acc.items() if c}


def free_mul(f, g, zero):
    """Product in the free algebra (concatenation of words)."""
    acc = {}
    for v, c in f.items():
        for u, d in g.items():
            w = v + u
            acc[w] = acc.get(w, zero) + c * d
    return {k: c for k, c in acc.items() if c}


def substitute(f, images, reducer, one, zero):
    """Normal form of ``f`` with letter ``i`` replaced by ``images[i]``.

    Images must already be in normal form for ``reducer``.  Products of
    images are reduced as they are built, sharing prefixes through a cache.
    """
    cache = {(): {(): one}}
    acc = {}
    for w, c in f.items():
        if w not in cache:
            k = len(w) - 1
            while w[:k] not in cache:
                k -= 1
            cur = cache[w[:k]]
            for j in range(k, len(w)):
                cur = reducer.mul(cur, images[w[j]])
                cache[w[:j + 1]] = cur
        for u, d in cache[w].items():
            acc[u] = acc.get(u, zero) + c * d
    return {k: c for k, c in acc.items() if c}
