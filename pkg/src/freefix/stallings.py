"""Stallings core graphs of finitely generated subgroups.

A :class:`SubgroupGraph` stores its folded based core as a transition table
``table[v][j]`` where column ``j < n`` is letter ``j + 1`` and column
``n + j`` its inverse (``-1`` means no edge). Vertices are numbered in
breadth-first order from the base (vertex 0), exploring letters before
inverses, so two graphs are equal iff they represent the same subgroup.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from functools import cached_property

from . import _kernels
from .errors import AlphabetMismatchError, NotASubgroupError
from .words import Alphabet, Morphism, Word, invert, lex_key


class SubgroupGraph:
    """Canonical folded based core graph Γ(H)."""

    canonical = True

    def __init__(self, alphabet: Alphabet, table: tuple[tuple[int, ...], ...]):
        self.alphabet = alphabet
        self.table = table

    def __eq__(self, other):
        if isinstance(other, SubgroupGraph):
            return self.alphabet == other.alphabet and self.table == other.table
        return NotImplemented

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        gens = ", ".join(str(w) for w in self.basis)
        return f"<SubgroupGraph rank={self.rank} vertices={self.num_vertices} <{gens}>>"

    def sort_key(self):
        return (self.num_vertices, self.table)

    @property
    def num_vertices(self) -> int:
        return len(self.table)

    @property
    def num_edges(self) -> int:
        n = self.alphabet.size
        return sum(1 for row in self.table for t in row[:n] if t >= 0)

    @property
    def rank(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def edges(self) -> list[tuple[int, int, int]]:
        """``(source, letter, target)`` for positive letters."""
        n = self.alphabet.size
        return [(v, j + 1, t) for v, row in enumerate(self.table)
                for j, t in enumerate(row[:n]) if t >= 0]

    def degree(self, v: int) -> int:
        return sum(1 for t in self.table[v] if t >= 0)

    @cached_property
    def _tree(self):
        """BFS spanning tree: parent links and generator numbering of non-tree edges."""
        n = self.alphabet.size
        order = self.alphabet.signed_letters()
        parent = {0: None}
        path = {0: ()}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in order:
                t = self.table[v][_col(x, n)]
                if t >= 0 and t not in parent:
                    parent[t] = (v, x)
                    path[t] = path[v] + (x,)
                    queue.append(t)
        gen_of = {}
        words = []
        for v in range(self.num_vertices):
            for j in range(n):
                t = self.table[v][j]
                if t < 0:
                    continue
                x = j + 1
                if parent.get(t) == (v, x) or parent.get(v) == (t, -x):
                    continue
                gen_of[(v, x)] = len(words) + 1
                words.append(_kernels.reduce_word(path[v] + (x,) + invert(path[t])))
        return path, gen_of, tuple(words)

    @property
    def basis(self) -> list[Word]:
        return [Word._raw(self.alphabet, w) for w in self._tree[2]]

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == 0 else "circle"
            lines.append(f'  {v} [shape={shape}];')
        for u, x, v in self.edges():
            lines.append(f'  {u} -> {v} [label="{self.alphabet.symbol(x)}"];')
        lines.append("}")
        return "\n".join(lines)


def _col(x: int, n: int) -> int:
    return x - 1 if x > 0 else n - x - 1


def _fold(n: int, nverts: int, edges: Iterable[tuple[int, int, int]], base: int = 0,
          trim_base: bool = False):
    """Fold a labelled graph with union-find merging, trim to the core.

    Returns the surviving adjacency as ``{vertex: {letter: vertex}}`` and the
    base representative. With ``trim_base`` the base is trimmed too.
    """
    parent = list(range(nverts))
    adj = [dict() for _ in range(nverts)]

    def find(v):
        r = v
        while parent[r] != r:
            r = parent[r]
        while parent[v] != r:
            parent[v], v = r, parent[v]
        return r

    stack = list(edges)

    def union(a, b):
        if len(adj[a]) < len(adj[b]):
            a, b = b, a
        parent[b] = a
        moved = adj[b]
        adj[b] = {}
        for y, t in moved.items():
            stack.append((a, y, t))

    while stack:
        u, x, v = stack.pop()
        u = find(u)
        v = find(v)
        t = adj[u].get(x)
        if t is None:
            adj[u][x] = v
        else:
            t = find(t)
            if t != v:
                union(t, v)
                stack.append((u, x, v))
                continue
        s = adj[v].get(-x)
        if s is None:
            adj[v][-x] = u
        else:
            s = find(s)
            if s != u:
                union(s, u)
                stack.append((u, x, v))
                continue

    base = find(base)
    out = {}
    for v in range(nverts):
        if parent[v] == v and (adj[v] or v == base):
            out[v] = {x: find(t) for x, t in adj[v].items()}
    pending = [v for v, nb in out.items() if len(nb) <= 1 and (trim_base or v != base)]
    while pending:
        v = pending.pop()
        if v not in out or len(out[v]) > 1 or (v == base and not trim_base):
            continue
        for x, t in out.pop(v).items():
            nb = out[t]
            nb.pop(-x, None)
            if len(nb) <= 1 and (trim_base or t != base):
                pending.append(t)
    return out, base


def _canonical(alphabet: Alphabet, adj: dict, base: int) -> SubgroupGraph:
    n = alphabet.size
    order = alphabet.signed_letters()
    index = {base: 0}
    seq = [base]
    i = 0
    while i < len(seq):
        v = seq[i]
        i += 1
        nb = adj.get(v, {})
        for x in order:
            t = nb.get(x)
            if t is not None and t not in index:
                index[t] = len(seq)
                seq.append(t)
    table = []
    for v in seq:
        nb = adj.get(v, {})
        table.append(tuple(index[nb[x]] if x in nb else -1 for x in order))
    return SubgroupGraph(alphabet, tuple(table))


def _alphabet_of(gens, alphabet):
    if alphabet is None:
        if not gens:
            raise ValueError("an alphabet is required for an empty generator list")
        alphabet = gens[0].alphabet
    for g in gens:
        if g.alphabet != alphabet:
            raise AlphabetMismatchError("generators over different alphabets")
    return alphabet


def _flower(words: Sequence[tuple]):
    edges = []
    nverts = 1
    for w in words:
        if not w:
            continue
        prev = 0
        for i, x in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = nverts
                nverts += 1
            edges.append((prev, x, nxt))
            prev = nxt
    return nverts, edges


def build_subgroup(gens: Sequence[Word], alphabet: Alphabet | None = None) -> SubgroupGraph:
    """Flower-and-fold; the canonical core graph of ``<gens>``."""
    gens = [alphabet.word(g) if alphabet is not None else g for g in gens]
    alphabet = _alphabet_of(gens, alphabet)
    nverts, edges = _flower([g.letters for g in gens])
    adj, base = _fold(alphabet.size, nverts, edges)
    return _canonical(alphabet, adj, base)


def from_raw(alphabet: Alphabet, words: Iterable[tuple]) -> SubgroupGraph:
    nverts, edges = _flower(list(words))
    adj, base = _fold(alphabet.size, nverts, edges)
    return _canonical(alphabet, adj, base)


def quotient(H: SubgroupGraph, blocks: Sequence[int]) -> SubgroupGraph:
    """Fold the graph obtained by identifying vertices with equal block ids."""
    nb = max(blocks) + 1
    edges = [(blocks[u], x, blocks[v]) for u, x, v in H.edges()]
    adj, base = _fold(H.alphabet.size, nb, edges, base=blocks[0])
    return _canonical(H.alphabet, adj, base)


def trivial(alphabet: Alphabet) -> SubgroupGraph:
    return SubgroupGraph(alphabet, (tuple([-1] * (2 * alphabet.size)),))


def full(alphabet: Alphabet) -> SubgroupGraph:
    return build_subgroup(alphabet.generators(), alphabet)


def is_full(H: SubgroupGraph) -> bool:
    return H.num_vertices == 1 and all(t == 0 for t in H.table[0])


def contains(H: SubgroupGraph, w: Word) -> bool:
    if w.alphabet != H.alphabet:
        raise AlphabetMismatchError("word and subgroup over different alphabets")
    return _kernels.trace(H.table, H.alphabet.size, w.letters) == 0


def contains_raw(H: SubgroupGraph, letters: tuple) -> bool:
    return _kernels.trace(H.table, H.alphabet.size, letters) == 0


def is_subgroup(H: SubgroupGraph, K: SubgroupGraph) -> bool:
    """``H <= K``."""
    return all(contains_raw(K, w) for w in H._tree[2])


def basis(H: SubgroupGraph) -> list[Word]:
    return H.basis


def rank(H: SubgroupGraph) -> int:
    return H.rank


def equals(H: SubgroupGraph, K: SubgroupGraph) -> bool:
    if H.alphabet != K.alphabet:
        raise AlphabetMismatchError("subgroups over different alphabets")
    return H.table == K.table


def join(*groups: SubgroupGraph) -> SubgroupGraph:
    alphabet = groups[0].alphabet
    return from_raw(alphabet, [w for G in groups for w in G._tree[2]])


def intersect(H: SubgroupGraph, K: SubgroupGraph) -> SubgroupGraph:
    """Pullback: core of the base component of the product graph."""
    if H.alphabet != K.alphabet:
        raise AlphabetMismatchError("subgroups over different alphabets")
    n = H.alphabet.size
    ids = {(0, 0): 0}
    queue = deque([(0, 0)])
    edges = []
    while queue:
        p = queue.popleft()
        rh, rk = H.table[p[0]], K.table[p[1]]
        for j in range(2 * n):
            s, t = rh[j], rk[j]
            if s < 0 or t < 0:
                continue
            q = (s, t)
            if q not in ids:
                ids[q] = len(ids)
                queue.append(q)
            if j < n:
                edges.append((ids[p], j + 1, ids[q]))
    adj, base = _fold(n, len(ids), edges)
    return _canonical(H.alphabet, adj, base)


def rewrite_raw(K: SubgroupGraph, letters: tuple) -> tuple | None:
    """Coordinates of ``letters`` in K's basis, or None if not a member."""
    n = K.alphabet.size
    _, gen_of, _ = K._tree
    v = 0
    out = []
    for x in letters:
        t = K.table[v][_col(x, n)]
        if t < 0:
            return None
        if x > 0:
            g = gen_of.get((v, x))
            if g is not None:
                out.append(g)
        else:
            g = gen_of.get((t, -x))
            if g is not None:
                out.append(-g)
        v = t
    if v != 0:
        return None
    return _kernels.reduce_word(out)


def basis_alphabet(K: SubgroupGraph) -> Alphabet:
    """Alphabet naming K's basis elements; needs rank(K) >= 1."""
    return Alphabet(K.rank)


def rewrite_in(H: SubgroupGraph, K: SubgroupGraph) -> list[Word]:
    """H's basis written over K's basis (a fresh alphabet of size rank(K))."""
    if H.alphabet != K.alphabet:
        raise AlphabetMismatchError("subgroups over different alphabets")
    words = []
    for w in H._tree[2]:
        r = rewrite_raw(K, w)
        if r is None:
            raise NotASubgroupError(
                f"{Word._raw(H.alphabet, w)} is not in the target subgroup",
                Word._raw(H.alphabet, w))
        words.append(r)
    if not words:
        return []
    alphabet = basis_alphabet(K)
    return [Word._raw(alphabet, w) for w in words]


def substitute(words: Iterable[Word], K: SubgroupGraph) -> list[Word]:
    """Inverse of :func:`rewrite_in`: evaluate basis-words of K in F."""
    kb = K._tree[2]
    return [Word._raw(K.alphabet, _kernels.apply_images(kb, w.letters)) for w in words]


def image(H: SubgroupGraph, m: Morphism) -> SubgroupGraph:
    if H.alphabet != m.alphabet:
        raise AlphabetMismatchError("subgroup and morphism over different alphabets")
    return from_raw(H.alphabet, [m.apply_raw(w) for w in H._tree[2]])


def elements(H: SubgroupGraph, max_len: int) -> list[Word]:
    """Members of H of length <= max_len, length-lex ordered."""
    n = H.alphabet.size
    order = H.alphabet.signed_letters()
    out = []
    word = []

    def dfs(v):
        if v == 0:
            out.append(tuple(word))
        if len(word) == max_len:
            return
        prev = word[-1] if word else 0
        for x in order:
            if x == -prev:
                continue
            t = H.table[v][_col(x, n)]
            if t >= 0:
                word.append(x)
                dfs(t)
                word.pop()

    dfs(0)
    out.sort(key=lambda w: lex_key(w, n))
    return [Word._raw(H.alphabet, w) for w in out]


def cyclic_core_edges(H: SubgroupGraph) -> int:
    """Edge count of the unbased core (base trimmed too); 0 for trivial H."""
    adj = {v: {x: H.table[v][_col(x, H.alphabet.size)]
               for x in H.alphabet.signed_letters() if H.table[v][_col(x, H.alphabet.size)] >= 0}
           for v in range(H.num_vertices)}
    pending = [v for v, nb in adj.items() if len(nb) <= 1]
    while pending:
        v = pending.pop()
        if v not in adj or len(adj[v]) > 1:
            continue
        for x, t in adj.pop(v).items():
            adj[t].pop(-x, None)
            if len(adj[t]) <= 1:
                pending.append(t)
    return sum(len(nb) for nb in adj.values()) // 2


def express(gens: Sequence[Word], targets: Sequence[Word]) -> list[Word | None]:
    """Write each target as a word in ``gens`` (None if not in ``<gens>``).

    Folding carries a tag on every edge, a word in the generators, such that
    reading a closed path at the base multiplies tags to an expression for the
    path label. Merging two vertices first rescales the tags around one of
    them so the merged edges carry equal tags.
    """
    if not gens:
        return [None if t.letters else t for t in targets]
    alphabet = gens[0].alphabet
    # edge id -> [src, letter, dst, tag]
    edges = {}
    inc = {0: set()}
    nv = 1
    eid = 0

    def add_edge(p, x, q, tag):
        nonlocal eid
        edges[eid] = [p, x, q, tag]
        inc.setdefault(p, set()).add(eid)
        inc.setdefault(q, set()).add(eid)
        eid += 1

    for gi, g in enumerate(gens, 1):
        w = g.letters
        if not w:
            continue
        prev = 0
        for i, x in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = nv
                nv += 1
            add_edge(prev, x, nxt, (gi,) if i == 0 else ())
            prev = nxt

    def ends(v):
        """(letter at v, far vertex, tag read leaving v, edge id)."""
        for e in inc[v]:
            p, x, q, tag = edges[e]
            if p == v:
                yield x, q, tag, e
            if q == v:
                yield -x, p, invert(tag), e

    def gauge(v, c):
        """Left-multiply tags of edges leaving v by c."""
        ci = invert(c)
        for e in inc[v]:
            p, x, q, tag = edges[e]
            if p == v:
                tag = _kernels.reduce_word(c + tag)
            if q == v:
                tag = _kernels.reduce_word(tag + ci)
            edges[e][3] = tag

    work = list(inc)
    while work:
        u = work.pop()
        if u not in inc:
            continue
        seen = {}
        conflict = None
        for x, far, tag, e in ends(u):
            if x in seen and seen[x][2] != e:
                conflict = (seen[x], (far, tag, e))
                break
            seen[x] = (far, tag, e)
        if conflict is None:
            continue
        (v1, t1, e1), (v2, t2, e2) = conflict
        if v1 != v2:
            if v2 == 0:
                v1, t1, e1, v2, t2, e2 = v2, t2, e2, v1, t1, e1
            # make e2 read like e1, then merge v2 into v1
            gauge(v2, _kernels.reduce_word(invert(t1) + t2))
            for e in inc[v2]:
                if edges[e][0] == v2:
                    edges[e][0] = v1
                if edges[e][2] == v2:
                    edges[e][2] = v1
            inc[v1] |= inc.pop(v2)
        p, x, q, _ = edges.pop(e2)
        inc[p].discard(e2)
        inc[q].discard(e2)
        work.extend([u, v1])

    gen_alphabet = alphabet if len(gens) == alphabet.size else Alphabet(len(gens))
    table = {}
    for v in inc:
        table[v] = {x: (far, tag) for x, far, tag, _ in ends(v)}
    out = []
    for t in targets:
        v = 0
        acc = []
        ok = True
        for x in t.letters:
            step = table[v].get(x)
            if step is None:
                ok = False
                break
            v, tag = step
            acc.extend(tag)
        if ok and v == 0:
            out.append(Word._raw(gen_alphabet, _kernels.reduce_word(acc)))
        else:
            out.append(None)
    return out
