"""Whitehead automorphisms, length minimization and pointwise stabilizers.

Type II automorphisms are indexed by a multiplier ``a`` and a cut set ``A``
containing ``a`` but not ``a^-1``; a generator ``x`` goes to ``x``, ``xa``,
``a^-1 x`` or ``a^-1 x a`` according to whether ``x`` and ``x^-1`` lie in
``A``. Stabilizers are generated McCool-style from the graph of tuples at
minimal total length joined by length-preserving Whitehead moves.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from . import _kernels
from .budget import DEFAULT, Budget
from .errors import BudgetExceededError
from .stallings import SubgroupGraph, cyclic_core_edges, equals, from_raw, is_full
from .words import Alphabet, Morphism, Word, compose, invert


@dataclass(frozen=True)
class WhiteheadAuto:
    kind: str
    realized: Morphism = field(repr=False)
    inverse: Morphism = field(repr=False)
    perm: tuple | None = None
    multiplier: int | None = None
    cut: frozenset | None = None

    def __str__(self):
        a = self.realized.alphabet
        if self.kind == "I":
            return "I(" + ",".join(a.symbol(x) for x in self.perm) + ")"
        cut = "".join(a.symbol(x) for x in sorted(self.cut, key=lambda x: (abs(x), -x)))
        return f"II({a.symbol(self.multiplier)};{cut})"

    def apply_raw(self, letters: tuple) -> tuple:
        return _kernels.apply_images(self.realized.images, letters)


def _type_two_images(n, a, cut):
    ai = -a
    images = []
    for i in range(1, n + 1):
        if i == abs(a):
            images.append((i,))
            continue
        left = (ai,) if -i in cut else ()
        right = (a,) if i in cut else ()
        images.append(_kernels.reduce_word(left + (i,) + right))
    return tuple(images)


@lru_cache(maxsize=None)
def _autos(n: int) -> tuple[WhiteheadAuto, ...]:
    alphabet = Alphabet(n)
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            images = tuple((s * p,) for s, p in zip(signs, perm))
            inv = [None] * n
            for i, (y,) in enumerate(images, 1):
                inv[abs(y) - 1] = (i if y > 0 else -i,)
            out.append(WhiteheadAuto(
                "I", Morphism._raw(alphabet, images), Morphism._raw(alphabet, tuple(inv)),
                perm=tuple(im[0] for im in images)))
    for a in alphabet.signed_letters():
        others = [x for x in alphabet.signed_letters() if abs(x) != abs(a)]
        for mask in range(1, 2 ** len(others)):
            cut = frozenset([a] + [x for j, x in enumerate(others) if mask >> j & 1])
            inv_cut = (cut - {a}) | {-a}
            out.append(WhiteheadAuto(
                "II",
                Morphism._raw(alphabet, _type_two_images(n, a, cut)),
                Morphism._raw(alphabet, _type_two_images(n, -a, inv_cut)),
                multiplier=a, cut=cut))
    return tuple(out)


def whitehead_autos(alphabet: Alphabet) -> list[WhiteheadAuto]:
    """Every type I automorphism (identity first) then every nontrivial type II one."""
    autos = _autos(alphabet.size)
    if autos and autos[0].realized.alphabet != alphabet:
        return [WhiteheadAuto(w.kind, Morphism._raw(alphabet, w.realized.images),
                              Morphism._raw(alphabet, w.inverse.images),
                              w.perm, w.multiplier, w.cut) for w in autos]
    return list(autos)


def _type_two(n: int):
    return [w for w in _autos(n) if w.kind == "II"]


def _total(t) -> int:
    return sum(len(w) for w in t)


def _minimize_raw(t: tuple, n: int):
    """Greedy strict descent; returns (tuple, sigma images, sigma^-1 images)."""
    alphabet = Alphabet(n)
    sigma = Morphism.identity(alphabet)
    sigma_inv = sigma
    total = _total(t)
    autos = _type_two(n)
    improved = True
    while improved:
        improved = False
        for w in autos:
            img = tuple(w.apply_raw(x) for x in t)
            s = _total(img)
            if s < total:
                t, total = img, s
                sigma = compose(sigma, w.realized)
                sigma_inv = compose(w.inverse, sigma_inv)
                improved = True
                break
    return t, sigma, sigma_inv


def minimize_tuple(t: Sequence[Word], budget: Budget = DEFAULT) -> tuple[list[Word], Morphism]:
    """Whitehead-minimize the total length of a tuple of words.

    Returns ``(t', sigma)`` with ``t'`` the entrywise image of ``t`` under
    ``sigma``.
    """
    if not t:
        raise ValueError("empty tuple")
    alphabet = t[0].alphabet
    raw, sigma, _, _ = _minimize_full(tuple(w.letters for w in t), alphabet.size, budget)
    sigma = Morphism._raw(alphabet, sigma.images)
    return [Word._raw(alphabet, w) for w in raw], sigma


@dataclass
class PeakGraph:
    """Tuples at minimal total length joined by length-preserving moves."""

    alphabet: Alphabet
    vertices: list[tuple]
    edges: list[tuple[int, int, int]]
    autos: list[WhiteheadAuto]
    base: int = 0

    def vertex_words(self, i: int) -> list[Word]:
        return [Word._raw(self.alphabet, w) for w in self.vertices[i]]


class _Shorter(Exception):
    def __init__(self, t, sigma, sigma_inv):
        self.t, self.sigma, self.sigma_inv = t, sigma, sigma_inv


def _explore(t0: tuple, n: int, budget: Budget, keep_edges: bool, want_loops: bool = True):
    """BFS over the level of ``t0``; collects Schreier generators as morphisms.

    Raises :class:`_Shorter` carrying the path when a move drops below the level.
    """
    autos = [w for w in _autos(n) if not w.realized.is_identity()]
    total = _total(t0)
    index = {t0: 0}
    verts = [t0]
    ident = Morphism.identity(Alphabet(n))
    gamma = [ident]
    gamma_inv = [ident]
    edges = []
    gens = {}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        tu = verts[u]
        for k, w in enumerate(autos):
            tv = tuple(w.apply_raw(x) for x in tu)
            s = _total(tv)
            if s < total:
                raise _Shorter(tv, compose(gamma[u], w.realized), compose(w.inverse, gamma_inv[u]))
            if s != total:
                continue
            v = index.get(tv)
            if v is None:
                v = len(verts)
                if v >= budget.level_vertices:
                    raise BudgetExceededError(
                        f"Whitehead level graph exceeds {budget.level_vertices} vertices")
                index[tv] = v
                verts.append(tv)
                gamma.append(compose(gamma[u], w.realized))
                gamma_inv.append(compose(w.inverse, gamma_inv[u]))
                queue.append(v)
                if keep_edges:
                    edges.append((u, k, v))
                continue
            if keep_edges:
                edges.append((u, k, v))
            if not want_loops:
                continue
            g = compose(compose(gamma[u], w.realized), gamma_inv[v])
            if g.is_identity() or g.images in gens:
                continue
            g_inv = compose(compose(gamma[v], w.inverse), gamma_inv[u])
            if g_inv.images in gens:
                continue
            gens[g.images] = g
    return verts, edges, autos, list(gens.values())


def _minimize_full(t: tuple, n: int, budget: Budget, keep_edges=False, want_loops=False,
                   max_total=None):
    """Greedy descent, then exhaustive exploration of the bottom level.

    If the level exploration finds a shorter tuple, descent resumes from it.
    """
    t, sigma, sigma_inv = _minimize_raw(t, n)
    while True:
        if max_total is not None and _total(t) > max_total:
            raise BudgetExceededError(
                f"minimal total length {_total(t)} exceeds the level cap {max_total}")
        try:
            level = _explore(t, n, budget, keep_edges, want_loops)
        except _Shorter as e:
            t2, s2, s2i = _minimize_raw(e.t, n)
            sigma = compose(compose(sigma, e.sigma), s2)
            sigma_inv = compose(compose(s2i, e.sigma_inv), sigma_inv)
            t = t2
            continue
        return t, sigma, sigma_inv, level


def _check_budget(alphabet: Alphabet, budget: Budget):
    if alphabet.size > budget.max_rank:
        raise BudgetExceededError(
            f"ambient rank {alphabet.size} exceeds the stabilizer cap {budget.max_rank}")


def peak_graph(t: Sequence[Word], budget: Budget = DEFAULT) -> PeakGraph:
    alphabet = t[0].alphabet
    _check_budget(alphabet, budget)
    raw = tuple(w.letters for w in t if w.letters)
    _, _, _, (verts, edges, autos, _) = _minimize_full(
        raw, alphabet.size, budget, keep_edges=True, max_total=budget.level_length)
    return PeakGraph(alphabet, verts, edges, autos)


def _morphism_key(m: Morphism):
    return (sum(len(im) for im in m.images), m.images)


def stabilizer_generators(t: Sequence[Word], budget: Budget = DEFAULT,
                          alphabet: Alphabet | None = None) -> list[Morphism]:
    """Generators of the automorphisms fixing every entry of ``t``.

    Raises :class:`BudgetExceededError` when a cap is hit; the generator set
    is then unavailable, not empty.
    """
    if alphabet is None:
        if not t:
            raise ValueError("an alphabet is required for an empty tuple")
        alphabet = t[0].alphabet
    _check_budget(alphabet, budget)
    n = alphabet.size
    raw = tuple(w.letters for w in t if w.letters)
    if not raw:
        gens = [Morphism._raw(alphabet, w.realized.images) for w in _autos(n)
                if not w.realized.is_identity()]
        return sorted(gens, key=_morphism_key)
    _, sigma, sigma_inv, (_, _, _, loops) = _minimize_full(
        raw, n, budget, want_loops=True, max_total=budget.level_length)
    out = {}
    for g in loops:
        h = compose(compose(sigma, g), sigma_inv)
        h = Morphism._raw(alphabet, h.images)
        if not h.is_identity():
            out[h.images] = h
    result = sorted(out.values(), key=_morphism_key)
    for h in result:
        for w in raw:
            if h.apply_raw(w) != w:
                raise AssertionError("stabilizer generator does not fix the tuple")
    return result


def minimize_subgroup(H: SubgroupGraph, budget: Budget = DEFAULT):
    """Whitehead descent on the edge count of H's unbased core.

    Returns ``(H', sigma, sigma^-1)`` with ``H' = H sigma`` a local minimum.
    """
    alphabet = H.alphabet
    n = alphabet.size
    if n > budget.ff_max_rank:
        raise BudgetExceededError(
            f"ambient rank {n} exceeds the free-factor cap {budget.ff_max_rank}")
    ident = Morphism.identity(alphabet)
    sigma, sigma_inv = ident, ident
    basis = H._tree[2]
    size = cyclic_core_edges(H)
    G = H
    autos = _type_two(n)
    improved = True
    while improved:
        improved = False
        for w in autos:
            cand = from_raw(alphabet, [w.apply_raw(x) for x in basis])
            s = cyclic_core_edges(cand)
            if s < size:
                G, size, basis = cand, s, cand._tree[2]
                sigma = compose(sigma, Morphism._raw(alphabet, w.realized.images))
                sigma_inv = compose(Morphism._raw(alphabet, w.inverse.images), sigma_inv)
                improved = True
                break
    return G, sigma, sigma_inv


def is_free_factor_of_ambient(H: SubgroupGraph, budget: Budget = DEFAULT) -> bool:
    if H.rank == 0 or is_full(H):
        return True
    G, _, _ = minimize_subgroup(H, budget)
    return cyclic_core_edges(G) == G.rank


def factor_map(H: SubgroupGraph, budget: Budget = DEFAULT) -> tuple[Morphism, int] | None:
    """An automorphism ``tau`` with ``H tau = <a_1, ..., a_k>``, or None.

    None means H is not a free factor of the ambient group.
    """
    alphabet = H.alphabet
    n = alphabet.size
    k = H.rank
    if k == 0:
        return Morphism.identity(alphabet), 0
    G, sigma, _ = minimize_subgroup(H, budget)
    if cyclic_core_edges(G) != k:
        return None
    # walk the stem from the base to the vertex carrying the loops
    stem = []
    v = 0
    prev = None
    while not any(G.table[v][j] == v for j in range(n)):
        nxt = [(x, G.table[v][(x - 1) if x > 0 else n - x - 1]) for x in alphabet.signed_letters()]
        nxt = [(x, t) for x, t in nxt if t >= 0 and x != prev]
        x, t = nxt[0]
        stem.append(x)
        prev = -x
        v = t
    loops = [j + 1 for j in range(n) if G.table[v][j] == v]
    conj = Morphism.conjugation(Word._raw(alphabet, tuple(stem)))
    rest = [i for i in range(1, n + 1) if i not in loops]
    target = loops + rest
    images = [None] * n
    for new, old in enumerate(target, 1):
        images[old - 1] = (new,)
    perm = Morphism._raw(alphabet, tuple(images))
    tau = compose(compose(sigma, conj), perm)
    std = from_raw(alphabet, [(i,) for i in range(1, k + 1)])
    Ht = from_raw(alphabet, [tau.apply_raw(w) for w in H._tree[2]])
    if not equals(Ht, std):
        raise AssertionError("factor map does not carry H onto a standard factor")
    return tau, k


def ball(alphabet: Alphabet, depth: int) -> dict[tuple, Morphism]:
    """All products of at most ``depth`` Whitehead automorphisms (test oracle)."""
    autos = [Morphism._raw(alphabet, w.realized.images) for w in _autos(alphabet.size)]
    ident = Morphism.identity(alphabet)
    seen = {ident.images: ident}
    frontier = [ident]
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for w in autos:
                p = compose(m, w)
                if p.images not in seen:
                    seen[p.images] = p
                    nxt.append(p)
        frontier = nxt
    return seen


def invert_word_tuple(t: tuple) -> tuple:
    return tuple(invert(w) for w in t)
