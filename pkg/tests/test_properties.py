from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from freefix import _kernels
from freefix.cli import main
from freefix.stallings import build_subgroup, contains_raw, equals, from_raw, intersect
from freefix.whitehead import minimize_tuple
from freefix.words import Alphabet, Morphism, Word, apply, compose, reduce, root
from helpers import naive_member

N = 2
A = Alphabet(N)
letters = st.sampled_from([1, 2, -1, -2])
raw_words = st.lists(letters, max_size=12)
words = raw_words.map(lambda r: reduce(r, A))
nonempty = words.filter(lambda w: len(w) > 0)
morphisms = st.lists(st.lists(letters, max_size=3), min_size=N, max_size=N).map(
    lambda ims: Morphism(A, [reduce(i, A) for i in ims]))
gen_sets = st.lists(nonempty, min_size=1, max_size=3)


@given(raw_words)
def test_reduce_idempotent(r):
    once = reduce(r, A)
    assert reduce(once.letters, A) == once
    assert all(a != -b for a, b in zip(once.letters, once.letters[1:]))


@given(morphisms, morphisms, words)
def test_compose_is_sequential_application(m1, m2, w):
    assert apply(compose(m1, m2), w) == apply(m2, apply(m1, w))


@given(words, words, morphisms)
def test_apply_is_a_homomorphism(u, v, m):
    assert apply(m, u * v) == apply(m, u) * apply(m, v)


@given(nonempty)
def test_root_power_reconstructs(w):
    u, k = root(w)
    assert u ** k == w


@given(gen_sets, words)
@settings(suppress_health_check=[HealthCheck.too_slow])
def test_membership_matches_naive_folding(gens, w):
    H = build_subgroup(gens, A)
    assert contains_raw(H, w.letters) == naive_member(N, [g.letters for g in gens], w.letters)


@given(gen_sets)
def test_basis_round_trip(gens):
    H = build_subgroup(gens, A)
    assert equals(build_subgroup(H.basis, A), H)
    assert len(H.basis) == H.rank


@given(gen_sets, gen_sets, words)
def test_intersection_membership(g1, g2, w):
    H, K = build_subgroup(g1, A), build_subgroup(g2, A)
    I = intersect(H, K)
    assert contains_raw(I, w.letters) == (contains_raw(H, w.letters) and contains_raw(K, w.letters))


@given(st.lists(nonempty, min_size=1, max_size=2))
@settings(deadline=None, max_examples=40)
def test_minimize_never_increases(t):
    m, s = minimize_tuple(t)
    assert sum(map(len, m)) <= sum(map(len, t))
    assert [apply(s, w) for w in t] == m


@given(st.lists(st.sampled_from(["a", "B", "ab", "Ab", "1", ",", "?", "aaaa", "->", ";"]),
                max_size=6).map("".join),
       st.sampled_from(["member", "basis", "fix", "fringe", "retract", "auto-fixed"]))
@settings(deadline=None, max_examples=60)
def test_cli_exit_status_contract(text, cmd):
    argv = [cmd, "--rank", "2", "--gens", text, "--word", text, "--morphism", text,
            "--max-len", "4", "--retraction-bound", "3"]
    code = main(argv)
    assert code in (0, 1, 2, 3)


def test_kernels_reexported():
    assert _kernels.reduce_word((1, -1, 2)) == (2,)
    assert isinstance(Word(A, (1,)), Word)
