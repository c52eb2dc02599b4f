"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed at the end of the pytest
session. Run this file directly to print the lines without pytest.
"""

import functools
import itertools
import json
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import helpers  # noqa: E402
from freefix.closure import (  # noqa: E402
    NO, YES, auto_fixed_verdict, endo_fixed_verdict, reduce_witnesses, validate_report,
)
from freefix.extensions import algebraic_extensions, fringe, is_free_factor  # noqa: E402
from freefix.fixpoints import fix_approx, stable_image  # noqa: E402
from freefix.stallings import (  # noqa: E402
    contains_raw, equals, from_raw, full, intersect, is_subgroup,
)
from freefix.words import Alphabet, Morphism, compose, reduce  # noqa: E402
from helpers import F2, F3, naive_member, products, random_subgroup, random_word, sub  # noqa: E402

D = "baccbCCBA"
PSI = "a -> a\nb -> baccbCCBA\nc -> 1"
PHI = "a -> a\nb -> b\nc -> cb"


def record(number, title, ok, detail, seconds, limit=None):
    status = "PASS" if ok else "FAIL"
    timing = f"{seconds:.2f}s" + (f" (limit {limit}s)" if limit else "")
    line = f"criterion {number} [{status}] {title}: {detail}; {timing}"
    helpers.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


# shared corpora -------------------------------------------------------------

def fixture_subgroups():
    return [sub(F2, "a"), sub(F2, "aa"), full(F2), sub(F2, "ab"), sub(F3, "a", D),
            sub(F2, "abAB"), sub(F3, "a", "b"), sub(F2, "aab", "bb")]


@functools.lru_cache(maxsize=None)
def subgroup_corpus():
    """50 random subgroups of ranks 2 and 3, small enough for every pipeline."""
    rng = random.Random(20240611)
    out = []
    while len(out) < 50:
        n = rng.choice([2, 3])
        H = random_subgroup(rng, n, gens=(1, 2), length=(1, 4), max_vertices=6)
        if H not in out:
            out.append(H)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def verdict_corpus():
    out = []
    for H in fixture_subgroups() + list(subgroup_corpus()):
        out.append(auto_fixed_verdict(H))
        out.append(endo_fixed_verdict(H))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def morphism_corpus():
    rng = random.Random(77)
    ms = [Morphism.parse(F3, PSI), Morphism.parse(F3, PHI), Morphism.identity(F2),
          Morphism.conjugation(F2.parse("ab")), Morphism.conjugation(F3.parse("abc"))]
    for _ in range(25):
        n = rng.choice([2, 3])
        ms.append(helpers.random_morphism(rng, n, 0, 3))
    return tuple(ms)


# criteria -------------------------------------------------------------------

def check_1():
    t0 = time.perf_counter()
    rng = random.Random(1)
    bad = 0
    for _ in range(200):
        n = rng.choice([2, 3])
        gens = [random_word(rng, n, 1, 4) for _ in range(rng.randint(1, 3))]
        H = from_raw(Alphabet(n), gens)
        for w in list(products(gens, 2, 8))[:10]:
            bad += not contains_raw(H, w)
        w = random_word(rng, n, 0, 8)
        bad += contains_raw(H, w) != naive_member(n, gens, w)
    pairs_bad = 0
    for _ in range(100):
        n = rng.choice([2, 3])
        H, K = random_subgroup(rng, n), random_subgroup(rng, n)
        I = intersect(H, K)
        for _ in range(10):
            w = random_word(rng, n, 0, 10)
            pairs_bad += contains_raw(I, w) != (contains_raw(H, w) and contains_raw(K, w))
        r = lambda G: max(0, G.rank - 1)
        pairs_bad += r(I) > 2 * r(H) * r(K)
    dt = time.perf_counter() - t0
    ok = bad == 0 and pairs_bad == 0 and dt < 10
    return record(1, "Stallings oracle suite", ok,
                  f"{bad} membership and {pairs_bad} pullback/rank disagreements", dt, 10)


def check_2():
    t0 = time.perf_counter()
    rng = random.Random(2)
    failures = 0
    done = 0
    while done < 100:
        n = rng.choice([2, 3])
        K = random_subgroup(rng, n, gens=(1, 3), length=(1, 3))
        kb = list(K._tree[2])
        if not kb:
            continue
        hgens = []
        for _ in range(rng.randint(1, 2)):
            idx = random_word(rng, len(kb), 1, 3)
            w = []
            for i in idx:
                w.extend(kb[i - 1] if i > 0 else tuple(-x for x in reversed(kb[-i - 1])))
            hgens.append(reduce(w, K.alphabet).letters)
        H = from_raw(K.alphabet, hgens)
        if H.num_vertices > 8 or H.rank == 0:
            continue
        done += 1
        assert is_subgroup(H, K)
        if not any(is_subgroup(Hi, K) and is_free_factor(Hi, K) for Hi in fringe(H)):
            failures += 1
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 60
    return record(2, "Takahasi cover property", ok, f"{failures} failures in {done} pairs",
                  dt, 60)


def check_3():
    t0 = time.perf_counter()
    cases = [
        (fringe(sub(F2, "aa")).members, (sub(F2, "aa"), sub(F2, "a"))),
        (fringe(sub(F2, "ab")).members, (sub(F2, "ab"), full(F2))),
        (algebraic_extensions(sub(F2, "ab")).members, (sub(F2, "ab"),)),
        (algebraic_extensions(sub(F2, "aa")).members, (sub(F2, "aa"), sub(F2, "a"))),
    ]
    good = sum(len(got) == len(want) and all(equals(x, y) for x, y in zip(got, want))
               for got, want in cases)
    dt = time.perf_counter() - t0
    return record(3, "golden extension sets", good == len(cases),
                  f"{good}/{len(cases)} sets equal", dt)


def check_4():
    t0 = time.perf_counter()
    psi, phi = Morphism.parse(F3, PSI), Morphism.parse(F3, PHI)
    a, d = F3.parse("a"), F3.parse(D)
    H = sub(F3, "a", D)
    checks = {"d psi = d": psi(d) == d}
    checks["phi^n psi fixes a, d"] = all(
        compose(phi.power(n), psi)(a) == a and compose(phi.power(n), psi)(d) == d
        for n in range(-3, 4))
    checks["(phi^n psi)(phi^m psi) = phi^n psi"] = all(
        compose(compose(phi.power(n), psi), compose(phi.power(m), psi))
        == compose(phi.power(n), psi)
        for n, m in itertools.product(range(-2, 3), repeat=2))
    si = stable_image(psi, 5)
    checks["stable image"] = si.stabilized and si.iterations == 1 and equals(si.subgroup, H)
    checks["endo verdict"] = endo_fixed_verdict(H).answer == YES
    dt = time.perf_counter() - t0
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and dt < 60
    return record(4, "Example fixture in F3 with d = ba[c^2,b]a^-1", ok,
                  f"failed: {failed}" if failed else f"{len(checks)} checks hold", dt, 60)


def check_5():
    t0 = time.perf_counter()
    results = []
    va, ve = auto_fixed_verdict(sub(F2, "a")), endo_fixed_verdict(sub(F2, "a"))
    results.append(va.answer == YES and va.rule == "inner"
                   and va.witnesses[0].morphism == Morphism.conjugation(F2.parse("a")))
    results.append(ve.answer == YES)
    va, ve = auto_fixed_verdict(sub(F2, "aa")), endo_fixed_verdict(sub(F2, "aa"))
    results.append(va.answer == NO and str(va.element) == "a")
    results.append(ve.answer == NO and str(ve.element) == "a")
    results.append(auto_fixed_verdict(full(F2)).answer == YES)
    results.append(endo_fixed_verdict(full(F2)).answer == YES)
    dt = time.perf_counter() - t0
    ok = all(results) and dt < 30
    return record(5, "verdict fixtures", ok, f"{sum(results)}/{len(results)} verdicts match",
                  dt, 30)


def check_6():
    t0 = time.perf_counter()
    violations = 0
    checked = 0
    for v in verdict_corpus():
        if v.answer in (YES, NO) and v.closure_bound is not None:
            checked += 1
            violations += v.closure_bound.rank > v.subgroup.alphabet.size
        if v.answer == YES:
            for c in v.witnesses:
                checked += 1
                violations += c.fixed_subgroup().rank > v.subgroup.alphabet.size
    for m in morphism_corpus():
        for L in (3, 5):
            fa = fix_approx([m], L)
            if fa.exact:
                checked += 1
                violations += fa.subgroup.rank > m.alphabet.size
    dt = time.perf_counter() - t0
    return record(6, "rank bound on certified bounds and exact fixed subgroups",
                  violations == 0, f"{violations} violations among {checked} subgroups", dt)


def check_7():
    t0 = time.perf_counter()
    bad = 0
    count = 0
    for v in verdict_corpus():
        if v.answer != YES:
            continue
        count += 1
        r = reduce_witnesses(v)
        n = v.subgroup.alphabet.size
        try:
            ok = len(r.witnesses) <= 2 * n and validate_report(r.to_dict())
        except Exception:
            ok = False
        bad += not ok
    dt = time.perf_counter() - t0
    return record(7, "witness thinning", bad == 0,
                  f"{bad} failures over {count} certified verdicts", dt)


def check_8():
    t0 = time.perf_counter()
    bad = 0
    count = 0
    for v in verdict_corpus():
        if v.answer not in (YES, NO):
            continue
        count += 1
        try:
            ok = validate_report(json.loads(v.to_json()))
        except Exception:
            ok = False
        bad += not ok
    dt = time.perf_counter() - t0
    return record(8, "soundness audit from serialized reports", bad == 0,
                  f"{bad} invalid among {count} definitive verdicts", dt)


def check_9():
    t0 = time.perf_counter()
    problems = []
    for m in morphism_corpus():
        prev = None
        for L in range(1, 7):
            cur = fix_approx([m], L).subgroup
            if prev is not None and not is_subgroup(prev, cur):
                problems.append("fix_approx not monotone")
            prev = cur
    rng = random.Random(9)
    for _ in range(200):
        raw = [rng.choice([1, -1]) * rng.randint(1, 3) for _ in range(rng.randint(0, 15))]
        once = reduce(raw, F3)
        if reduce(once.letters, F3) != once:
            problems.append("reduce not idempotent")
    corpus = list(subgroup_corpus())
    # re-generated copies of each subgroup from shuffled generators
    copies = [from_raw(H.alphabet, list(H._tree[2])[::-1]) for H in corpus]
    for H, C in zip(corpus, copies):
        if not equals(H, H) or not (equals(H, C) and equals(C, H)):
            problems.append("equals not reflexive/symmetric")
    for X, Y, Z in itertools.product(corpus[:20], repeat=3):
        if X.alphabet == Y.alphabet == Z.alphabet and equals(X, Y) and equals(Y, Z):
            if not equals(X, Z):
                problems.append("equals not transitive")
    for X, Y in itertools.product(corpus, repeat=2):
        if X.alphabet == Y.alphabet and equals(X, Y) != equals(Y, X):
            problems.append("equals not symmetric")
    dt = time.perf_counter() - t0
    return record(9, "monotonicity and idempotence suite", not problems,
                  f"{len(problems)} problems", dt)


def test_criterion_1_stallings_oracles():
    assert check_1()


def test_criterion_2_takahasi_cover():
    assert check_2()


def test_criterion_3_golden_extension_sets():
    assert check_3()


def test_criterion_4_example_fixture():
    assert check_4()


def test_criterion_5_verdict_fixtures():
    assert check_5()


def test_criterion_6_rank_bound():
    assert check_6()


def test_criterion_7_witness_thinning():
    assert check_7()


def test_criterion_8_soundness_audit():
    assert check_8()


def test_criterion_9_monotonicity_idempotence():
    assert check_9()


if __name__ == "__main__":
    results = [f() for f in (check_1, check_2, check_3, check_4, check_5, check_6, check_7,
                             check_8, check_9)]
    sys.exit(0 if all(results) else 1)
