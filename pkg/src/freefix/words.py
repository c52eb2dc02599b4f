"""Alphabets, reduced words and endomorphisms of a free group.

Letters are encoded as nonzero ints: ``i`` is the i-th generator and ``-i``
its inverse. In text, lowercase is a generator and uppercase its inverse
(``A`` is ``a^-1``); ``1`` is the empty word. Morphisms act on the right,
so ``compose(m1, m2)`` applies ``m1`` first.
"""

from __future__ import annotations

import re
import string
from collections.abc import Iterable, Mapping, Sequence

from . import _kernels
from .errors import AlphabetMismatchError, UndefinedRootError, WordParseError

_TOKEN = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")


class Alphabet:
    """An ordered set of ``size`` free generators."""

    __slots__ = ("size", "letters")

    def __init__(self, size: int, letters: Sequence[str] | None = None):
        if size < 1:
            raise ValueError("alphabet size must be positive")
        if letters is None:
            if size <= 26:
                letters = string.ascii_lowercase[:size]
            else:
                letters = [f"x{i}" for i in range(1, size + 1)]
        letters = tuple(letters)
        if len(letters) != size or len(set(letters)) != size:
            raise ValueError("alphabet needs exactly `size` distinct symbols")
        self.size = size
        self.letters = letters

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({self.size})"

    @property
    def textual(self) -> bool:
        return all(len(s) == 1 and s.islower() for s in self.letters)

    def symbol(self, x: int) -> str:
        s = self.letters[abs(x) - 1]
        if x > 0:
            return s
        return s.upper() if self.textual else f"{s}^-1"

    def generators(self) -> list[Word]:
        return [Word._raw(self, (i,)) for i in range(1, self.size + 1)]

    def signed_letters(self) -> list[int]:
        """Letters before inverses: ``1..n, -1..-n``."""
        return list(range(1, self.size + 1)) + [-i for i in range(1, self.size + 1)]

    def identity(self) -> Word:
        return Word._raw(self, ())

    def word(self, raw) -> Word:
        if isinstance(raw, Word):
            if raw.alphabet != self:
                raise AlphabetMismatchError("word over a different alphabet")
            return raw
        if isinstance(raw, str):
            return self.parse(raw)
        return reduce(raw, self)

    def parse(self, text: str) -> Word:
        """Parse ``baccbCCBA``-style text; ``a^3`` and ``A^-2`` are accepted."""
        if not self.textual:
            raise WordParseError("text format needs a single-letter alphabet (size <= 26)")
        text = "".join(text.split())
        if text in ("", "1"):
            return self.identity()
        raw = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise WordParseError(f"unexpected character {text[pos]!r} in {text!r}")
            ch, exp = m.group(1), m.group(2)
            x = self.letters.index(ch.lower()) + 1 if ch.lower() in self.letters else None
            if x is None:
                raise AlphabetMismatchError(f"symbol {ch!r} is not in the alphabet {self.letters}")
            if ch.isupper():
                x = -x
            e = int(exp) if exp is not None else 1
            raw.extend([x] * e if e >= 0 else [-x] * (-e))
            pos = m.end()
        return Word._raw(self, _kernels.reduce_word(raw))


class Word:
    """A freely reduced word; immutable and hashable."""

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters: Iterable[int] = ()):
        w = reduce(letters, alphabet)
        self.alphabet = alphabet
        self.letters = w.letters

    @classmethod
    def _raw(cls, alphabet, letters):
        w = object.__new__(cls)
        w.alphabet = alphabet
        w.letters = letters
        return w

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.letters == other.letters and self.alphabet == other.alphabet
        return NotImplemented

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other: Word) -> Word:
        _check(self.alphabet, other.alphabet)
        return Word._raw(self.alphabet, _kernels.reduce_word(self.letters + other.letters))

    def __pow__(self, k: int) -> Word:
        base = self.letters if k >= 0 else invert(self.letters)
        return Word._raw(self.alphabet, _kernels.reduce_word(base * abs(k)))

    def inverse(self) -> Word:
        return Word._raw(self.alphabet, invert(self.letters))

    def __str__(self):
        if not self.letters:
            return "1"
        sep = "" if self.alphabet.textual else "*"
        return sep.join(self.alphabet.symbol(x) for x in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def is_cyclically_reduced(self) -> bool:
        t = self.letters
        return len(t) < 2 or t[0] != -t[-1]

    def sort_key(self):
        return lex_key(self.letters, self.alphabet.size)


def invert(letters: tuple) -> tuple:
    return tuple(-x for x in reversed(letters))


def lex_key(letters: tuple, n: int):
    """Length-lex key with letters before inverses (``a < b < A < B``)."""
    return (len(letters), tuple(x - 1 if x > 0 else n - x - 1 for x in letters))


def _check(a: Alphabet, b: Alphabet):
    if a != b:
        raise AlphabetMismatchError(f"alphabets differ: {a.letters} vs {b.letters}")


def reduce(raw, alphabet: Alphabet) -> Word:
    """Freely reduce a sequence of signed letters."""
    raw = tuple(raw)
    n = alphabet.size
    for x in raw:
        if not isinstance(x, int) or x == 0 or abs(x) > n:
            raise AlphabetMismatchError(f"letter {x!r} is not in an alphabet of size {n}")
    return Word._raw(alphabet, _kernels.reduce_word(raw))


def cyclic_split(letters: tuple) -> tuple[tuple, tuple]:
    """Split a reduced word as ``g c g^-1`` with ``c`` cyclically reduced."""
    i = 0
    j = len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return letters[:i], letters[i:j + 1]


def root(w: Word) -> tuple[Word, int]:
    """The maximal ``k`` and ``u`` with ``u^k = w``."""
    if not w.letters:
        raise UndefinedRootError("the identity has no root")
    g, c = cyclic_split(w.letters)
    m = len(c)
    for p in range(1, m + 1):
        if m % p == 0 and c[:p] * (m // p) == c:
            break
    u = _kernels.reduce_word(g + c[:p] + invert(g))
    return Word._raw(w.alphabet, u), m // p


class Morphism:
    """An endomorphism of F given by the images of the generators."""

    __slots__ = ("alphabet", "images", "_hash")

    def __init__(self, alphabet: Alphabet, images):
        if isinstance(images, Mapping):
            missing = [s for s in alphabet.letters if s not in images]
            extra = [k for k in images if k not in alphabet.letters]
            if missing:
                raise WordParseError(f"no image given for letter(s) {', '.join(missing)}")
            if extra:
                raise AlphabetMismatchError(f"unknown letter(s) {', '.join(map(str, extra))}")
            images = [images[s] for s in alphabet.letters]
        images = list(images)
        if len(images) != alphabet.size:
            raise WordParseError(f"expected {alphabet.size} images, got {len(images)}")
        self.alphabet = alphabet
        self.images = tuple(alphabet.word(im).letters for im in images)
        self._hash = None

    @classmethod
    def _raw(cls, alphabet, images):
        m = object.__new__(cls)
        m.alphabet = alphabet
        m.images = images
        m._hash = None
        return m

    @classmethod
    def identity(cls, alphabet: Alphabet) -> Morphism:
        return cls._raw(alphabet, tuple((i,) for i in range(1, alphabet.size + 1)))

    @classmethod
    def conjugation(cls, w: Word) -> Morphism:
        """``x -> w^-1 x w``."""
        a = w.alphabet
        wi = invert(w.letters)
        return cls._raw(a, tuple(_kernels.reduce_word(wi + (i,) + w.letters)
                                 for i in range(1, a.size + 1)))

    @classmethod
    def parse(cls, alphabet: Alphabet, text: str) -> Morphism:
        """Parse ``a -> ab`` lines (``;`` or ``,`` also separate entries)."""
        images = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0]
            for part in re.split(r"[;,]", line):
                part = part.strip()
                if not part:
                    continue
                if "->" not in part:
                    raise WordParseError(f"expected 'x -> word', got {part!r}", lineno)
                lhs, rhs = (s.strip() for s in part.split("->", 1))
                if lhs not in alphabet.letters:
                    raise WordParseError(f"unknown letter {lhs!r}", lineno)
                if lhs in images:
                    raise WordParseError(f"letter {lhs!r} given twice", lineno)
                try:
                    images[lhs] = alphabet.parse(rhs)
                except WordParseError as exc:
                    raise WordParseError(str(exc), lineno) from None
                except AlphabetMismatchError as exc:
                    raise WordParseError(str(exc), lineno) from None
        return cls(alphabet, images)

    def __eq__(self, other):
        if isinstance(other, Morphism):
            return self.images == other.images and self.alphabet == other.alphabet
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{s}->{Word._raw(self.alphabet, im)}"
                         for s, im in zip(self.alphabet.letters, self.images))
        return f"Morphism({body})"

    def to_text(self) -> str:
        return "\n".join(f"{s} -> {Word._raw(self.alphabet, im)}"
                         for s, im in zip(self.alphabet.letters, self.images))

    def image(self, i: int) -> Word:
        return Word._raw(self.alphabet, self.images[i - 1])

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def then(self, other: Morphism) -> Morphism:
        return compose(self, other)

    def apply_raw(self, letters: tuple) -> tuple:
        return _kernels.apply_images(self.images, letters)

    def is_identity(self) -> bool:
        return all(im == (i,) for i, im in enumerate(self.images, 1))

    def is_idempotent(self) -> bool:
        return all(self.apply_raw(im) == im for im in self.images)

    def length(self) -> int:
        """Longest letter image."""
        return max(len(im) for im in self.images)

    def is_automorphism(self) -> bool:
        return is_automorphism(self)

    def inverse(self) -> Morphism:
        """Exact inverse of an automorphism; ``ValueError`` otherwise."""
        from .stallings import express

        gens = [Word._raw(self.alphabet, im) for im in self.images]
        exprs = express(gens, self.alphabet.generators())
        if any(e is None for e in exprs):
            raise ValueError("morphism is not an automorphism")
        inv = Morphism._raw(self.alphabet, tuple(e.letters for e in exprs))
        if not compose(self, inv).is_identity():
            raise ValueError("morphism is not an automorphism")
        return inv

    def power(self, k: int) -> Morphism:
        base = self if k >= 0 else self.inverse()
        out = Morphism.identity(self.alphabet)
        for _ in range(abs(k)):
            out = compose(out, base)
        return out


def apply(m: Morphism, w: Word) -> Word:
    _check(m.alphabet, w.alphabet)
    return Word._raw(m.alphabet, _kernels.apply_images(m.images, w.letters))


def compose(m1: Morphism, m2: Morphism) -> Morphism:
    """``x -> m2(m1(x))``."""
    _check(m1.alphabet, m2.alphabet)
    return Morphism._raw(m1.alphabet, tuple(_kernels.apply_images(m2.images, im)
                                            for im in m1.images))


def is_automorphism(m: Morphism) -> bool:
    """Surjectivity test; free groups are hopfian, so this is bijectivity."""
    from .stallings import build_subgroup, is_full

    return is_full(build_subgroup([Word._raw(m.alphabet, im) for im in m.images], m.alphabet))


def inner_element(m: Morphism) -> Word | None:
    """A word ``u`` with ``m = conjugation(u)``, or None if m is not inner."""
    a = m.alphabet
    if m.is_identity():
        return a.identity()
    first = m.images[0]
    if len(first) % 2 == 0:
        return None
    h = len(first) // 2
    p = first[:h]
    if first[h] != 1 or first[h + 1:] != invert(p):
        return None
    # u = a^i p^-1 for some i; recover i from a second letter
    candidates = [invert(p)]
    if a.size > 1:
        other = _kernels.reduce_word(invert(p) + m.images[1] + p)  # a^-i b a^i
        i = 0
        while i < len(other) and other[i] == -1:
            i += 1
        if i == 0:
            while i < len(other) and other[i] == 1:
                i += 1
            i = -i
        candidates = [_kernels.reduce_word((1,) * i + invert(p)) if i >= 0
                      else _kernels.reduce_word((-1,) * (-i) + invert(p))]
    for u in candidates:
        cand = Morphism.conjugation(Word._raw(a, u))
        if cand.images == m.images:
            return Word._raw(a, u)
    return None
