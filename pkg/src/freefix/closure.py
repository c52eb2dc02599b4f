"""Auto- and endo-fixedness verdicts with re-checkable certificates.

A verdict is one of ``CertifiedYes`` (a family of morphisms whose exact fixed
subgroups intersect to H), ``CertifiedNo`` (an element outside H that every
morphism fixing H must fix) or ``Evidence`` (budget ran out; a bound on the
closure is attached).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from . import _kernels
from .budget import DEFAULT, Budget
from .errors import BudgetExceededError, CertificateError, FreeFixError
from .extensions import algebraic_extensions
from .fixpoints import (
    ExactFix,
    certify,
    exact_intersection,
    factor_involution,
    find_retraction,
    fix_approx,
    reduce_family,
    transport,
)
from .stallings import (
    SubgroupGraph,
    contains,
    contains_raw,
    elements,
    equals,
    from_raw,
    full,
    intersect,
    is_full,
    join,
    rewrite_in,
)
from .whitehead import stabilizer_generators
from .words import Alphabet, Morphism, Word, lex_key, root

YES = "CertifiedYes"
NO = "CertifiedNo"
EVIDENCE = "Evidence"


@dataclass(frozen=True)
class Verdict:
    question: str
    subgroup: SubgroupGraph
    answer: str
    rule: str
    witnesses: tuple = ()
    element: Word | None = None
    certificate: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    closure_bound: SubgroupGraph | None = None
    bound_kind: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def definitive(self) -> bool:
        return self.answer in (YES, NO)

    def to_dict(self) -> dict:
        d = {
            "question": self.question,
            "rank": self.subgroup.alphabet.size,
            "subgroup": [str(w) for w in self.subgroup.basis],
            "answer": self.answer,
            "rule": self.rule,
            "budget": dict(self.budget),
        }
        if self.answer == YES:
            d["witnesses"] = [c.to_dict() for c in self.witnesses]
        else:
            d["witnesses"] = [m.to_text() for m in self.witnesses]
        if self.element is not None:
            d["element"] = str(self.element)
        if self.certificate:
            d["certificate"] = dict(self.certificate)
        if self.closure_bound is not None:
            d["closure_bound"] = [str(w) for w in self.closure_bound.basis]
            d["bound_kind"] = self.bound_kind
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def report(self) -> str:
        """Plain-text report."""
        lines = [f"question: {self.question}",
                 f"subgroup: {', '.join(str(w) for w in self.subgroup.basis) or '1'}",
                 f"answer: {self.answer}",
                 f"rule: {self.rule}"]
        if self.element is not None:
            lines.append(f"witness element: {self.element}")
        for k, v in self.certificate.items():
            lines.append(f"certificate {k}: {v}")
        for i, w in enumerate(self.witnesses, 1):
            if isinstance(w, ExactFix):
                lines.append(f"witness {i} ({w.rule}):")
                lines.extend("  " + s for s in w.morphism.to_text().splitlines())
            else:
                lines.append(f"witness {i}:")
                lines.extend("  " + s for s in w.to_text().splitlines())
        if self.closure_bound is not None:
            basis = ", ".join(str(w) for w in self.closure_bound.basis) or "1"
            lines.append(f"closure bound ({self.bound_kind}): {basis}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append("budget: " + ", ".join(f"{k}={v}" for k, v in self.budget.items()))
        return "\n".join(lines)


# membership in the auto-closure -------------------------------------------

def _stabilizer(H: SubgroupGraph, budget: Budget) -> list[Morphism]:
    return stabilizer_generators(H.basis, budget, alphabet=H.alphabet)


def acl_membership(H: SubgroupGraph, x: Word, budget: Budget = DEFAULT) -> bool:
    """Whether x lies in the auto-closure of H (exact when generation succeeds)."""
    gens = _stabilizer(H, budget)
    return all(g.apply_raw(x.letters) == x.letters for g in gens)


def _first_fixed_outside(H: SubgroupGraph, gens: list[Morphism], max_len: int):
    n = H.alphabet.size
    images = [g.images for g in gens]
    for ell in range(1, max_len + 1):
        found = _kernels.fixed_words(images, n, ell, H.table)
        found = [w for w in found if w]
        if found:
            return Word._raw(H.alphabet, min(found, key=lambda w: lex_key(w, n)))
    return None


def _root_witness(H: SubgroupGraph, max_len: int):
    """Some u outside H with a proper power u^k in H."""
    candidates = [w.letters for w in elements(H, max_len)] + list(H._tree[2])
    for h in candidates:
        if not h:
            continue
        u, k = root(Word._raw(H.alphabet, h))
        if k >= 2 and not contains(H, u):
            return u, k, Word._raw(H.alphabet, h)
    return None


def _yes(question, H, rule, certs, budget, notes=()):
    return Verdict(question, H, YES, rule, tuple(certs), budget=budget.as_dict(),
                   closure_bound=H, bound_kind="exact", notes=tuple(notes))


def _root_no(question, H, hit, budget, notes=()):
    u, k, h = hit
    return Verdict(question, H, NO, "root", (), element=u,
                   certificate={"power": k, "member": str(h)},
                   budget=budget.as_dict(), notes=tuple(notes))


def auto_fixed_verdict(H: SubgroupGraph, budget: Budget = DEFAULT) -> Verdict:
    q = "auto-fixed"
    a = H.alphabet
    if is_full(H):
        return _yes(q, H, "identity", [ExactFix("identity", Morphism.identity(a))], budget)
    if H.rank == 1:
        w = H.basis[0]
        u, k = root(w)
        if k == 1:
            cert = ExactFix("inner", Morphism.conjugation(w), root=u)
            return _yes(q, H, "inner", [cert], budget)
    notes = []
    try:
        cert = factor_involution(H, budget)
    except BudgetExceededError as e:
        cert = None
        notes.append(f"free-factor test skipped: {e}")
    if cert is not None:
        return _yes(q, H, "factor-involution", [cert], budget, notes)
    try:
        gens = _stabilizer(H, budget)
    except BudgetExceededError as e:
        gens = None
        notes.append(f"stabilizer unavailable: {e}")
    if gens is not None:
        x = _first_fixed_outside(H, gens, budget.max_len)
        if x is not None:
            return Verdict(q, H, NO, "stabilizer", tuple(gens), element=x,
                           certificate={"generators": len(gens)},
                           budget=budget.as_dict(), notes=tuple(notes))
        certs = [certify(g) for g in gens]
        if gens and all(c is not None for c in certs) and equals(exact_intersection(certs), H):
            return _yes(q, H, "exact-fix", certs, budget, notes)
    hit = _root_witness(H, budget.max_len)
    if hit is not None:
        return _root_no(q, H, hit, budget, notes)
    bound, kind = H, "lower"
    if gens:
        try:
            approx = fix_approx(gens, budget.max_len, budget)
            bound = join(H, approx.subgroup)
        except BudgetExceededError as e:
            notes.append(f"closure bound truncated: {e}")
    notes.append(f"no fixed word outside H up to length {budget.max_len}")
    return Verdict(q, H, EVIDENCE, "budget", tuple(gens or ()), budget=budget.as_dict(),
                   closure_bound=bound, bound_kind=kind, notes=tuple(notes))


# endo-closure --------------------------------------------------------------

@dataclass(frozen=True)
class EndoClosureBound:
    subgroup: SubgroupGraph
    witnesses: tuple[ExactFix, ...]
    retracts: tuple[SubgroupGraph, ...]
    unconfirmed: tuple[SubgroupGraph, ...]


def _inner_witnesses(Hp: SubgroupGraph, budget: Budget) -> list[ExactFix]:
    """Certified morphisms of the basis group that fix Hp."""
    r = Hp.alphabet
    if is_full(Hp):
        return [ExactFix("identity", Morphism.identity(r))]
    if Hp.rank == 1:
        w = Hp.basis[0]
        m = Morphism.conjugation(w)
        if m.is_identity():
            return [ExactFix("identity", m)]
        return [ExactFix("inner", m, root=root(w)[0])]
    try:
        cert = factor_involution(Hp, budget)
    except BudgetExceededError:
        cert = None
    if cert is not None:
        return [cert]
    out = []
    try:
        for g in _stabilizer(Hp, budget):
            c = certify(g)
            if c is not None:
                out.append(c)
    except BudgetExceededError:
        pass
    return out


def endo_closure_upper(H: SubgroupGraph, budget: Budget = DEFAULT) -> EndoClosureBound:
    """A subgroup containing the endo-closure of H, with the morphisms proving it."""
    a = H.alphabet
    witnesses = []
    retracts = []
    unconfirmed = []
    for Hi in algebraic_extensions(H, budget):
        rho = find_retraction(Hi, budget.retraction_bound, budget)
        if not rho:
            unconfirmed.append(Hi)
            continue
        retracts.append(Hi)
        if Hi.rank == 0:
            witnesses.append(ExactFix("retraction", rho))
            continue
        Hp = from_raw(Alphabet(Hi.rank), [w.letters for w in rewrite_in(H, Hi)]) \
            if H.rank else from_raw(Alphabet(Hi.rank), [])
        inner = [c for c in _inner_witnesses(Hp, budget) if c.rule != "identity"]
        if not inner:
            witnesses.append(ExactFix("retraction", rho))
            continue
        for c in inner:
            witnesses.append(transport(rho, Hi.basis, c))
    if not witnesses:
        return EndoClosureBound(full(a), (), tuple(retracts), tuple(unconfirmed))
    K = exact_intersection(witnesses)
    return EndoClosureBound(K, tuple(witnesses), tuple(retracts), tuple(unconfirmed))


def endo_fixed_verdict(H: SubgroupGraph, budget: Budget = DEFAULT) -> Verdict:
    q = "endo-fixed"
    a = H.alphabet
    if is_full(H):
        return _yes(q, H, "identity", [ExactFix("identity", Morphism.identity(a))], budget)
    rho = find_retraction(H, budget.retraction_bound, budget)
    if rho:
        return _yes(q, H, "retraction", [ExactFix("retraction", rho)], budget)
    notes = []
    if not rho.complete:
        notes.append(f"retraction search stopped after {rho.nodes} nodes")
    hit = _root_witness(H, budget.max_len)
    if hit is not None:
        return _root_no(q, H, hit, budget, notes)
    try:
        up = endo_closure_upper(H, budget)
    except BudgetExceededError as e:
        notes.append(f"closure bound unavailable: {e}")
        return Verdict(q, H, EVIDENCE, "budget", budget=budget.as_dict(),
                       closure_bound=H, bound_kind="lower", notes=tuple(notes))
    if equals(up.subgroup, H):
        return _yes(q, H, "retract-closure", up.witnesses, budget, notes)
    if up.unconfirmed:
        notes.append(f"{len(up.unconfirmed)} algebraic extension(s) not confirmed as retracts")
    return Verdict(q, H, EVIDENCE, "budget", tuple(c.morphism for c in up.witnesses),
                   budget=budget.as_dict(), closure_bound=up.subgroup, bound_kind="upper",
                   notes=tuple(notes))


# witness thinning ----------------------------------------------------------

def _greedy_exact(H, certs):
    chosen = []
    K = None
    for c in certs:
        F = c.fixed_subgroup()
        new = F if K is None else intersect(K, F)
        if K is None or not equals(new, K):
            chosen.append(c)
            K = new
        if equals(K, H):
            break
    # drop members made redundant by later ones
    for c in list(chosen):
        rest = [d for d in chosen if d is not c]
        if rest and equals(exact_intersection(rest), H):
            chosen = rest
    return chosen


def reduce_witnesses(v: Verdict, length_bound: int = 6) -> Verdict:
    """Thin a CertifiedYes witness family to at most 2n morphisms."""
    if v.answer != YES:
        raise ValueError("only CertifiedYes verdicts carry a witness family")
    H = v.subgroup
    n = H.alphabet.size
    certs = list(dict.fromkeys(v.witnesses))
    by_morphism = {c.morphism: c for c in certs}
    chosen = None
    try:
        import warnings

        from .fixpoints import FamilyReductionWarning
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FamilyReductionWarning)
            fam = reduce_family([c.morphism for c in certs], length_bound)
        picked = [by_morphism[m] for m in fam]
        if not fam.warning and equals(exact_intersection(picked), H):
            chosen = picked
    except BudgetExceededError:
        pass
    if chosen is None:
        chosen = _greedy_exact(H, certs)
    if len(chosen) > 2 * n:
        for size in range(1, 2 * n + 1):
            for combo in itertools.combinations(certs, size):
                if equals(exact_intersection(list(combo)), H):
                    chosen = list(combo)
                    break
            if len(chosen) <= 2 * n:
                break
    return Verdict(v.question, H, YES, v.rule, tuple(chosen), budget=v.budget,
                   closure_bound=v.closure_bound, bound_kind=v.bound_kind, notes=v.notes)


# re-validation from a serialized report -------------------------------------

def validate_report(report: dict | str) -> bool:
    """Re-check a definitive verdict using only its serialized form.

    Returns True for a valid certificate; raises :class:`CertificateError`
    otherwise. Evidence reports carry no certificate and return False.
    """
    d = json.loads(report) if isinstance(report, str) else report
    try:
        a = Alphabet(d["rank"])
        H = from_raw(a, [a.parse(w).letters for w in d["subgroup"]])
        answer = d["answer"]
        if answer == EVIDENCE:
            return False
        if answer == YES:
            certs = [ExactFix.from_dict(c) for c in d["witnesses"]]
            if not certs:
                raise CertificateError("no witnesses")
            for c in certs:
                c.validate()
                for h in H._tree[2]:
                    if c.morphism.apply_raw(h) != h:
                        raise CertificateError("a witness moves an element of H")
            if not equals(exact_intersection(certs), H):
                raise CertificateError("certified fixed subgroups do not intersect to H")
            return True
        if answer == NO:
            x = a.parse(d["element"])
            if contains(H, x):
                raise CertificateError("witness element lies in H")
            if d["rule"] == "root":
                h = a.parse(d["certificate"]["member"])
                k = int(d["certificate"]["power"])
                if k < 2 or x ** k != h or not contains(H, h):
                    raise CertificateError("root certificate does not hold")
                return True
            if d["rule"] == "stabilizer" and d["question"] == "auto-fixed":
                gens = [Morphism.parse(a, t) for t in d["witnesses"]]
                budget = Budget.from_dict(d["budget"])
                fresh = _stabilizer(H, budget)
                if set(fresh) != set(gens):
                    raise CertificateError("listed generators differ from a fresh computation")
                for g in gens:
                    if any(g.apply_raw(h) != h for h in H._tree[2]):
                        raise CertificateError("a generator moves an element of H")
                    if g.apply_raw(x.letters) != x.letters:
                        raise CertificateError("a generator moves the witness element")
                return True
            raise CertificateError(f"unknown rule {d['rule']!r}")
        raise CertificateError(f"unknown answer {answer!r}")
    except CertificateError:
        raise
    except (FreeFixError, KeyError, TypeError, ValueError) as e:
        raise CertificateError(f"malformed report: {e}") from e


__all__ = [
    "EVIDENCE", "NO", "YES", "EndoClosureBound", "Verdict", "acl_membership",
    "auto_fixed_verdict", "endo_closure_upper", "endo_fixed_verdict",
    "reduce_witnesses", "validate_report",
]
