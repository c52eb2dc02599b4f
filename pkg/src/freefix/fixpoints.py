"""Fixed words, exactly certified fixed subgroups, stable images and retractions."""

from __future__ import annotations

import warnings
from collections.abc import Sequence
from dataclasses import dataclass

from . import _kernels
from .budget import DEFAULT, Budget
from .errors import BudgetExceededError, CertificateError, UndefinedRootError
from .stallings import (
    SubgroupGraph,
    build_subgroup,
    contains_raw,
    elements,
    equals,
    from_raw,
    full,
    image,
    intersect,
    is_full,
    rewrite_raw,
    trivial,
)
from .words import Alphabet, Morphism, Word, compose, inner_element, lex_key, root


def _as_list(ms) -> list[Morphism]:
    if isinstance(ms, Morphism):
        return [ms]
    ms = list(ms)
    if not ms:
        raise ValueError("at least one morphism is required")
    a = ms[0].alphabet
    for m in ms:
        if m.alphabet != a:
            from .errors import AlphabetMismatchError
            raise AlphabetMismatchError("morphisms over different alphabets")
    return ms


def _check_caps(alphabet: Alphabet, L: int, budget: Budget):
    if L < 0:
        raise ValueError("length bound must be non-negative")
    if L > budget.fixed_len_cap:
        raise BudgetExceededError(
            f"fixed-word length {L} exceeds the cap {budget.fixed_len_cap}")
    if alphabet.size > budget.max_rank:
        raise BudgetExceededError(
            f"fixed-word enumeration is capped at rank {budget.max_rank}")


def fixed_words(ms, L: int, budget: Budget = DEFAULT) -> list[Word]:
    """Reduced words of length <= L fixed by every morphism, length-lex ordered."""
    ms = _as_list(ms)
    alphabet = ms[0].alphabet
    _check_caps(alphabet, L, budget)
    n = alphabet.size
    found = _kernels.fixed_words([m.images for m in ms], n, L)
    found.sort(key=lambda w: lex_key(w, n))
    return [Word._raw(alphabet, w) for w in found]


# exact fixed subgroups ---------------------------------------------------

def _standard(alphabet: Alphabet, k: int) -> SubgroupGraph:
    return from_raw(alphabet, [(i,) for i in range(1, k + 1)])


def involution(alphabet: Alphabet, k: int) -> Morphism:
    """Fix a_1..a_k and invert the remaining letters."""
    return Morphism._raw(alphabet, tuple((i,) if i <= k else (-i,)
                                         for i in range(1, alphabet.size + 1)))


@dataclass(frozen=True)
class ExactFix:
    """A morphism together with a rule that determines its fixed subgroup.

    Rules: ``identity``; ``inner`` (conjugation by u^k, Fix = <u>);
    ``retraction`` (idempotent, Fix = image); ``factor-involution``
    (``tau . iota_k . tau^-1``, Fix = <a_1..a_k> tau^-1); ``transport``
    (retraction onto <basis> followed by a certified morphism of the basis
    group, Fix = the inner fixed subgroup written back in F).
    """

    rule: str
    morphism: Morphism
    root: Word | None = None
    tau: Morphism | None = None
    k: int | None = None
    retraction: Morphism | None = None
    basis: tuple[Word, ...] | None = None
    inner: ExactFix | None = None

    def fixed_subgroup(self) -> SubgroupGraph:
        a = self.morphism.alphabet
        if self.rule == "identity":
            return full(a)
        if self.rule == "inner":
            return from_raw(a, [self.root.letters])
        if self.rule == "retraction":
            return image(full(a), self.morphism)
        if self.rule == "factor-involution":
            return image(_standard(a, self.k), self.tau.inverse())
        if self.rule == "transport":
            inner = self.inner.fixed_subgroup()
            kb = tuple(w.letters for w in self.basis)
            return from_raw(a, [_kernels.apply_images(kb, w) for w in inner._tree[2]])
        raise CertificateError(f"unknown rule {self.rule!r}")

    def validate(self) -> None:
        """Recheck the relation between the morphism and the rule data."""
        m = self.morphism
        a = m.alphabet
        if self.rule == "identity":
            ok = m.is_identity()
        elif self.rule == "inner":
            w = inner_element(m)
            ok = w is not None and bool(w.letters) and root(w)[0] == self.root
        elif self.rule == "retraction":
            ok = m.is_idempotent()
        elif self.rule == "factor-involution":
            tau = self.tau
            ok = (0 <= self.k <= a.size and tau.alphabet == a and tau.is_automorphism()
                  and compose(compose(tau, involution(a, self.k)), tau.inverse()) == m)
        elif self.rule == "transport":
            ok = self._validate_transport()
        else:
            ok = False
        if not ok:
            raise CertificateError(f"{self.rule} certificate does not hold for {m!r}")

    def _validate_transport(self) -> bool:
        m, rho, B = self.morphism, self.retraction, self.basis
        a = m.alphabet
        if rho is None or B is None or self.inner is None or not rho.is_idempotent():
            return False
        K = from_raw(a, [w.letters for w in B])
        if K.rank != len(B) or not equals(image(full(a), rho), K):
            return False
        if self.inner.morphism.alphabet.size != len(B):
            return False
        self.inner.validate()
        kb = tuple(w.letters for w in B)
        alpha = self.inner.morphism.images
        for x in range(1, a.size + 1):
            y = rho.apply_raw((x,))
            r = _rewrite_in_basis(K, kb, y)
            if r is None:
                return False
            if _kernels.apply_images(kb, _kernels.apply_images(alpha, r)) != m.images[x - 1]:
                return False
        return True

    def to_dict(self) -> dict:
        d = {"rule": self.rule, "rank": self.morphism.alphabet.size,
             "morphism": self.morphism.to_text()}
        if self.root is not None:
            d["root"] = str(self.root)
        if self.tau is not None:
            d["tau"] = self.tau.to_text()
        if self.k is not None:
            d["k"] = self.k
        if self.retraction is not None:
            d["retraction"] = self.retraction.to_text()
        if self.basis is not None:
            d["basis"] = [str(w) for w in self.basis]
        if self.inner is not None:
            d["inner"] = self.inner.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExactFix:
        a = Alphabet(d["rank"])
        return cls(
            d["rule"], Morphism.parse(a, d["morphism"]),
            root=a.parse(d["root"]) if "root" in d else None,
            tau=Morphism.parse(a, d["tau"]) if "tau" in d else None,
            k=d.get("k"),
            retraction=Morphism.parse(a, d["retraction"]) if "retraction" in d else None,
            basis=tuple(a.parse(w) for w in d["basis"]) if "basis" in d else None,
            inner=cls.from_dict(d["inner"]) if "inner" in d else None,
        )


def _rewrite_in_basis(K: SubgroupGraph, kb: tuple, w: tuple) -> tuple | None:
    """Write w over an arbitrary free basis kb of K (not necessarily K's own)."""
    if tuple(K._tree[2]) == kb:
        return rewrite_raw(K, w)
    from .stallings import express

    a = K.alphabet
    r = express([Word._raw(a, b) for b in kb], [Word._raw(a, w)])[0]
    return None if r is None else r.letters


def certify(m: Morphism) -> ExactFix | None:
    """An exact fixed-subgroup certificate detectable from m alone."""
    if m.is_identity():
        return ExactFix("identity", m)
    u = inner_element(m)
    if u is not None:
        return ExactFix("inner", m, root=root(u)[0])
    if m.is_idempotent():
        return ExactFix("retraction", m)
    return None


def factor_involution(H: SubgroupGraph, budget: Budget = DEFAULT) -> ExactFix | None:
    """An automorphism whose fixed subgroup is exactly the free factor H."""
    from .whitehead import factor_map

    fm = factor_map(H, budget)
    if fm is None:
        return None
    tau, k = fm
    a = H.alphabet
    sigma = compose(compose(tau, involution(a, k)), tau.inverse())
    return ExactFix("factor-involution", sigma, tau=tau, k=k)


def transport(rho: Morphism, basis: Sequence[Word], inner: ExactFix) -> ExactFix:
    """Lift a certified morphism of F_r to F through a retraction onto <basis>."""
    a = rho.alphabet
    kb = tuple(w.letters for w in basis)
    K = from_raw(a, kb)
    alpha = inner.morphism.images
    images = []
    for x in range(1, a.size + 1):
        r = _rewrite_in_basis(K, kb, rho.apply_raw((x,)))
        if r is None:
            raise CertificateError("retraction does not map into the basis subgroup")
        images.append(_kernels.apply_images(kb, _kernels.apply_images(alpha, r)))
    return ExactFix("transport", Morphism._raw(a, tuple(images)), retraction=rho,
                    basis=tuple(basis), inner=inner)


def exact_fix_inner(w: Word) -> SubgroupGraph:
    """Fixed subgroup of conjugation by a cyclically reduced w."""
    if not w.letters:
        raise UndefinedRootError("conjugation by the identity fixes everything; w must be nonempty")
    if not w.is_cyclically_reduced():
        raise ValueError(f"{w} is not cyclically reduced; conjugate it first")
    return from_raw(w.alphabet, [root(w)[0].letters])


def exact_intersection(certs: Sequence[ExactFix]) -> SubgroupGraph:
    K = certs[0].fixed_subgroup()
    for c in certs[1:]:
        K = intersect(K, c.fixed_subgroup())
    return K


# bounded approximation ---------------------------------------------------

@dataclass(frozen=True)
class FixApproximation:
    morphisms: tuple[Morphism, ...]
    length_bound: int
    subgroup: SubgroupGraph
    exact: bool
    certificates: tuple[ExactFix, ...] | None = None

    @property
    def rank(self) -> int:
        return self.subgroup.rank


def _bounded_fix(ms: list[Morphism], L: int) -> SubgroupGraph:
    alphabet = ms[0].alphabet
    n = alphabet.size
    images = [m.images for m in ms]
    K = trivial(alphabet)
    for ell in range(1, L + 1):
        if is_full(K):
            break
        new = _kernels.fixed_words(images, n, ell, K.table)
        new.sort(key=lambda w: lex_key(w, n))
        gens = list(K._tree[2])
        for w in new:
            if not contains_raw(K, w):
                gens.append(w)
                K = from_raw(alphabet, gens)
    return K


def fix_approx(ms, L: int, budget: Budget = DEFAULT,
               certificates: Sequence[ExactFix] | None = None) -> FixApproximation:
    """Subgroup generated by the common fixed words of length <= L.

    ``exact`` is set when every morphism has an exact certificate (given, or
    detected) and the bounded subgroup already equals their intersection.
    """
    ms = _as_list(ms)
    _check_caps(ms[0].alphabet, L, budget)
    K = _bounded_fix(ms, L)
    for m in ms:
        for w in K._tree[2]:
            if m.apply_raw(w) != w:
                raise AssertionError("bounded fixed subgroup contains a moved word")
    certs = list(certificates) if certificates is not None else [certify(m) for m in ms]
    exact = False
    if certs and all(c is not None for c in certs):
        exact = equals(K, exact_intersection(certs))
    return FixApproximation(tuple(ms), L, K, exact,
                            tuple(certs) if exact else None)


# stable image -------------------------------------------------------------

@dataclass(frozen=True)
class StableImageResult:
    subgroup: SubgroupGraph
    iterations: int
    stabilized: bool
    restriction: Morphism | None = None


def restriction(K: SubgroupGraph, m: Morphism) -> Morphism | None:
    """m restricted to K, written in K's basis, if m maps K into itself."""
    if K.rank == 0:
        return None
    kb = K._tree[2]
    images = []
    for b in kb:
        r = rewrite_raw(K, m.apply_raw(b))
        if r is None:
            return None
        images.append(r)
    return Morphism._raw(Alphabet(K.rank), tuple(images))


def stable_image(m: Morphism, max_iter: int = DEFAULT.max_iter) -> StableImageResult:
    K = full(m.alphabet)
    for t in range(max_iter + 1):
        nxt = image(K, m)
        if equals(nxt, K):
            res = restriction(K, m)
            if res is not None and not res.is_automorphism():
                raise AssertionError("restriction to the stable image is not onto")
            return StableImageResult(K, t, True, res)
        if t == max_iter:
            break
        K = nxt
    return StableImageResult(K, max_iter, False)


# retractions --------------------------------------------------------------

@dataclass(frozen=True)
class NotFound:
    """No retraction with letter images of length <= bound (if ``complete``)."""

    bound: int
    complete: bool = True
    nodes: int = 0

    def __bool__(self):
        return False


def find_retraction(H: SubgroupGraph, bound: int = DEFAULT.retraction_bound,
                    budget: Budget = DEFAULT) -> Morphism | NotFound:
    """Search letter images among elements of H, shortest first."""
    a = H.alphabet
    n = a.size
    if is_full(H):
        return Morphism.identity(a)
    if H.rank == 0:
        return Morphism._raw(a, ((),) * n)
    basis = H._tree[2]
    forced = {x: (x,) for x in range(1, n + 1) if contains_raw(H, (x,))}
    free = [x for x in range(1, n + 1) if x not in forced]
    uses = {x: sum(w.count(x) + w.count(-x) for w in basis) for x in free}
    free.sort(key=lambda x: (-uses[x], x))
    order = sorted(forced) + free
    pos = {x: i for i, x in enumerate(order)}
    # each basis word is checked once its last-assigned letter is set
    checks = [[] for _ in order]
    for w in basis:
        checks[max(pos[abs(x)] for x in w)].append(w)
    cands = [e.letters for e in elements(H, bound)]
    images = [None] * n
    nodes = 0

    def ok(i):
        for w in checks[i]:
            if _kernels.apply_images(images, w) != w:
                return False
        return True

    def search(i):
        nonlocal nodes
        if i == len(order):
            return True
        x = order[i]
        options = [forced[x]] if x in forced else cands
        for c in options:
            nodes += 1
            if nodes > budget.retraction_nodes:
                raise _Abort
            images[x - 1] = c
            if ok(i) and search(i + 1):
                return True
        images[x - 1] = None
        return False

    try:
        found = search(0)
    except _Abort:
        return NotFound(bound, complete=False, nodes=nodes)
    if not found:
        return NotFound(bound, complete=True, nodes=nodes)
    rho = Morphism._raw(a, tuple(images))
    if not rho.is_idempotent() or not equals(image(full(a), rho), H):
        raise AssertionError("retraction search returned a non-retraction")
    return rho


class _Abort(Exception):
    pass


# family reduction ---------------------------------------------------------

@dataclass(frozen=True)
class ReducedFamily:
    morphisms: tuple[Morphism, ...]
    warning: bool = False

    def __iter__(self):
        return iter(self.morphisms)

    def __len__(self):
        return len(self.morphisms)

    def __getitem__(self, i):
        return self.morphisms[i]


class FamilyReductionWarning(UserWarning):
    pass


def reduce_family(ms, L: int, budget: Budget = DEFAULT) -> ReducedFamily:
    """Greedy subfamily of size <= 2n with the same fixed words up to length L."""
    ms = _as_list(ms)
    alphabet = ms[0].alphabet
    _check_caps(alphabet, L, budget)
    uniq = list(dict.fromkeys(ms))
    moving = [m for m in uniq if not m.is_identity()]
    if not moving:
        return ReducedFamily((uniq[0],))
    n = alphabet.size
    fixed = [set(_kernels.fixed_words([m.images], n, L)) for m in moving]
    target = set.intersection(*fixed)
    chosen = []
    current = None
    while current != target:
        best = None
        for i, f in enumerate(fixed):
            if moving[i] in chosen:
                continue
            size = len(f if current is None else current & f)
            if best is None or size < best[0]:
                best = (size, i)
        i = best[1]
        chosen.append(moving[i])
        current = set(fixed[i]) if current is None else current & fixed[i]
    warn = len(chosen) > 2 * n
    if warn:
        warnings.warn(f"family reduction kept {len(chosen)} > {2 * n} morphisms at "
                      f"length bound {L}", FamilyReductionWarning, stacklevel=2)
    return ReducedFamily(tuple(chosen), warn)


def subgroup_from_words(words: Sequence[Word], alphabet: Alphabet) -> SubgroupGraph:
    return build_subgroup(list(words), alphabet)
