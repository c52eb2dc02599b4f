import random
import warnings

import pytest

from freefix.budget import Budget
from freefix.errors import BudgetExceededError, CertificateError, UndefinedRootError
from freefix.fixpoints import (
    ExactFix, FamilyReductionWarning, NotFound, certify, exact_fix_inner, factor_involution,
    find_retraction, fix_approx, fixed_words, reduce_family, stable_image, transport,
)
from freefix.stallings import contains, equals, full, image, is_subgroup, trivial
from freefix.words import Alphabet, Morphism, compose, root
from helpers import F1, F2, F3, mor, random_morphism, random_subgroup, random_word, sub

D = "baccbCCBA"
PSI = "a -> a\nb -> baccbCCBA\nc -> 1"


def strs(ws):
    return [str(w) for w in ws]


def test_fixed_words_examples():
    ca = Morphism.conjugation(F2.parse("a"))
    assert strs(fixed_words(ca, 3)) == ["1", "a", "A", "aa", "AA", "aaa", "AAA"]
    assert strs(fixed_words(Morphism.identity(F2), 1)) == ["1", "a", "b", "A", "B"]
    assert strs(fixed_words(mor(F3, PSI), 1)) == ["1", "a", "A"]


def test_fixed_words_cap():
    with pytest.raises(BudgetExceededError):
        fixed_words(Morphism.identity(F2), 11)


def test_fix_approx_examples():
    fa = fix_approx([Morphism.conjugation(F2.parse("a"))], 4)
    assert equals(fa.subgroup, sub(F2, "a")) and fa.exact
    fa = fix_approx([mor(F3, PSI)], 9)
    assert contains(fa.subgroup, F3.parse("a")) and contains(fa.subgroup, F3.parse(D))
    assert fa.exact
    fa = fix_approx([Morphism.identity(F2)], 3)
    assert equals(fa.subgroup, full(F2)) and fa.exact


def test_fix_approx_not_exact_without_rule():
    phi = mor(F3, "a -> a\nb -> b\nc -> cb")
    fa = fix_approx([phi], 4)
    assert not fa.exact
    assert equals(fa.subgroup, sub(F3, "a", "b", "cbC"))


def test_exact_fix_inner_examples():
    assert equals(exact_fix_inner(F2.parse("a")), sub(F2, "a"))
    assert equals(exact_fix_inner(F2.parse("aa")), sub(F2, "a"))
    assert equals(exact_fix_inner(F2.parse("ab")), sub(F2, "ab"))
    with pytest.raises(UndefinedRootError):
        exact_fix_inner(F2.identity())
    with pytest.raises(ValueError):
        exact_fix_inner(F2.parse("baB"))


@pytest.mark.parametrize("seed", range(20))
def test_exact_fix_inner_depends_on_root_only(seed):
    rng = random.Random(seed)
    w = F2.word(random_word(rng, 2, 1, 4))
    if not w.is_cyclically_reduced():
        return
    w = w ** rng.randint(1, 3)
    assert equals(exact_fix_inner(w), exact_fix_inner(root(w)[0]))


def test_stable_image_examples():
    r = stable_image(mor(F3, PSI), 5)
    assert r.stabilized and r.iterations == 1 and equals(r.subgroup, sub(F3, "a", D))
    assert r.restriction.is_automorphism()
    r = stable_image(Morphism.identity(F2))
    assert r.stabilized and r.iterations == 0 and equals(r.subgroup, full(F2))
    r = stable_image(mor(F1, "a -> aa"), 4)
    assert not r.stabilized and equals(r.subgroup, sub(F1, "a^16"))


@pytest.mark.parametrize("seed", range(15))
def test_stable_image_is_a_retract(seed):
    rng = random.Random(seed)
    m = random_morphism(rng, 2, 0, 2)
    r = stable_image(m, 6)
    if not r.stabilized:
        return
    assert equals(image(r.subgroup, m), r.subgroup)
    if r.subgroup.rank:
        assert r.restriction.is_automorphism()
    rho = find_retraction(r.subgroup, max(1, m.length()))
    if rho:
        assert rho.is_idempotent()
        assert equals(image(full(F2), rho), r.subgroup)


def test_find_retraction_examples():
    rho = find_retraction(sub(F2, "a"), 1)
    assert rho == mor(F2, "a -> a; b -> 1")
    nf = find_retraction(sub(F2, "aa"), 3)
    assert isinstance(nf, NotFound) and nf.bound == 3 and nf.complete and not nf
    rho = find_retraction(sub(F3, "a", D), 9)
    assert rho == mor(F3, PSI)


def test_find_retraction_node_budget():
    nf = find_retraction(sub(F3, "abAB", "cc"), 8, Budget(retraction_nodes=5))
    assert isinstance(nf, NotFound) and not nf.complete


def test_reduce_family_examples():
    phi = mor(F3, PSI)
    assert list(reduce_family([phi, phi, phi], 6)) == [phi]
    ca = Morphism.conjugation(F2.parse("a"))
    caa = Morphism.conjugation(F2.parse("aa"))
    assert list(reduce_family([ca, caa], 4)) == [ca]
    assert list(reduce_family([Morphism.identity(F2), ca], 4)) == [ca]


@pytest.mark.parametrize("seed", range(15))
def test_reduce_family_keeps_fixed_words(seed):
    rng = random.Random(seed)
    ms = [random_morphism(rng, 2, 0, 2) for _ in range(rng.randint(1, 7))]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FamilyReductionWarning)
        fam = reduce_family(ms, 5)
    assert set(map(tuple, fixed_words(list(fam), 5))) == set(map(tuple, fixed_words(ms, 5)))
    assert len(fam) <= 4 or fam.warning


@pytest.mark.parametrize("seed", range(20))
def test_fix_approx_monotone_and_sound(seed):
    rng = random.Random(seed)
    ms = [random_morphism(rng, 2, 0, 3) for _ in range(rng.randint(1, 2))]
    prev = None
    for L in range(1, 7):
        fa = fix_approx(ms, L)
        for m in ms:
            for w in fa.subgroup.basis:
                assert m(w) == w
        if prev is not None:
            assert is_subgroup(prev, fa.subgroup)
        prev = fa.subgroup


def test_certificates_round_trip_and_validate():
    ca = Morphism.conjugation(F2.parse("abab"))
    c = certify(ca)
    assert c.rule == "inner" and str(c.root) == "ab"
    c.validate()
    assert ExactFix.from_dict(c.to_dict()) == c
    fi = factor_involution(sub(F3, "bab", "cB"))
    fi.validate()
    assert equals(fi.fixed_subgroup(), sub(F3, "bab", "cB"))
    assert ExactFix.from_dict(fi.to_dict()) == fi
    k0 = factor_involution(trivial(F2))
    assert equals(k0.fixed_subgroup(), trivial(F2))
    bad = ExactFix("inner", mor(F2, "a -> a; b -> ab"), root=F2.parse("a"))
    with pytest.raises(CertificateError):
        bad.validate()


def test_transport_fix_is_written_back():
    # retraction of F3 onto <a, d>, then conjugation by x in the basis group
    rho = mor(F3, PSI)
    K = sub(F3, "a", D)
    inner = certify(Morphism.conjugation(Alphabet(2).parse("a")))
    t = transport(rho, K.basis, inner)
    t.validate()
    assert equals(t.fixed_subgroup(), sub(F3, "a"))
    assert all(t.morphism(w) == w for w in t.fixed_subgroup().basis)
    assert ExactFix.from_dict(t.to_dict()) == t
