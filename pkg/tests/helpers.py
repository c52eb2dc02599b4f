"""Shared builders and brute-force oracles for the test suite."""

import itertools
import random

from freefix import _kernels
from freefix.stallings import build_subgroup, from_raw
from freefix.words import Alphabet, Morphism, Word

F1, F2, F3 = Alphabet(1), Alphabet(2), Alphabet(3)

# filled by the acceptance module, printed at the end of the session
ACCEPTANCE_LINES = []


def sub(alphabet, *words):
    return build_subgroup([alphabet.parse(w) for w in words], alphabet)


def mor(alphabet, text):
    return Morphism.parse(alphabet, text)


def random_word(rng, n, lo, hi):
    length = rng.randint(lo, hi)
    out = []
    while len(out) < length:
        x = rng.choice([i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)])
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


def random_subgroup(rng, n, gens=(1, 3), length=(1, 5), max_vertices=None):
    a = Alphabet(n)
    while True:
        k = rng.randint(*gens)
        H = from_raw(a, [random_word(rng, n, *length) for _ in range(k)])
        if max_vertices is None or H.num_vertices <= max_vertices:
            return H


def random_morphism(rng, n, lo=0, hi=3):
    a = Alphabet(n)
    return Morphism._raw(a, tuple(random_word(rng, n, lo, hi) for _ in range(n)))


def all_words(n, max_len):
    """Every reduced word of length <= max_len."""
    letters = list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        frontier = nxt
    return out


def products(gens, max_factors, max_len):
    """Reduced products of at most max_factors generators/inverses, length-capped."""
    pieces = list(gens) + [tuple(-x for x in reversed(g)) for g in gens]
    seen = {()}
    frontier = {()}
    for _ in range(max_factors):
        nxt = set()
        for w in frontier:
            for p in pieces:
                v = _kernels.python_kernels.reduce_word(w + p)
                if len(v) <= max_len + 12 and v not in seen:
                    nxt.add(v)
        seen |= nxt
        frontier = nxt
    return {w for w in seen if len(w) <= max_len}


def naive_fold(n, gens):
    """Slow independent folding: merge duplicate edges until none remain."""
    edges = set()
    count = 1
    for g in gens:
        if not g:
            continue
        prev = 0
        for i, x in enumerate(g):
            nxt = 0 if i == len(g) - 1 else count
            if nxt:
                count += 1
            edges.add((prev, x, nxt) if x > 0 else (nxt, -x, prev))
            prev = nxt
    changed = True
    while changed:
        changed = False
        for (u, x, v), (u2, x2, v2) in itertools.combinations(sorted(edges), 2):
            if x != x2:
                continue
            if u == u2 and v != v2:
                keep, drop = min(v, v2), max(v, v2)
            elif v == v2 and u != u2:
                keep, drop = min(u, u2), max(u, u2)
            else:
                continue
            ren = {drop: keep}
            edges = {(ren.get(p, p), y, ren.get(q, q)) for p, y, q in edges}
            changed = True
            break
    return edges


def naive_member(n, gens, w):
    edges = naive_fold(n, gens)
    v = 0
    for x in w:
        if x > 0:
            nxt = [q for p, y, q in edges if p == v and y == x]
        else:
            nxt = [p for p, y, q in edges if q == v and y == -x]
        if not nxt:
            return False
        v = nxt[0]
    return v == 0


def W(alphabet, text):
    return alphabet.parse(text)


def words_of(H):
    return [Word._raw(H.alphabet, w) for w in H._tree[2]]
