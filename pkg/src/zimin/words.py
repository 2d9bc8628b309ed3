"""Alphabets, words, Zimin words and the plain-text word file format.

Symbols are dense integer ids ``0..q-1``; letters are only a rendering.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_ZIMIN = 30
LETTERS = "abcdefghijklmnopqrstuvwxyz"


class WordError(ValueError):
    """Bad symbol, bad token or an alphabet that cannot hold the word."""


class SizeError(ValueError):
    """Requested object is too large to materialise."""


@dataclass(frozen=True)
class Alphabet:
    size: int
    mode: str = "chars"

    def __post_init__(self):
        if self.size < 1:
            raise WordError(f"alphabet size must be >= 1, got {self.size}")
        if self.mode not in ("chars", "ints"):
            raise WordError(f"unknown rendering mode {self.mode!r}")

    def symbols(self) -> range:
        return range(self.size)


@dataclass(frozen=True, eq=False)
class Word:
    """An immutable finite word over ``alphabet``.

    Equality and hashing use the symbol sequence only, so the same word read
    from two files with different ``alphabet`` headers compares equal.
    """

    symbols: tuple
    alphabet: Alphabet

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(self.symbols))
        q = self.alphabet.size
        for s in self.symbols:
            if not 0 <= s < q:
                raise WordError(f"symbol id {s} outside alphabet of size {q}")

    @classmethod
    def of(cls, symbols: Iterable[int], q: int | None = None, mode: str | None = None) -> "Word":
        syms = tuple(int(s) for s in symbols)
        if q is None:
            q = max(syms, default=0) + 1
        if mode is None:
            mode = "chars" if q <= 26 else "ints"
        return cls(syms, Alphabet(q, mode))

    @classmethod
    def from_str(cls, text: str, q: int | None = None) -> "Word":
        return parse_word(text, "chars", q)

    @cached_property
    def text(self) -> str:
        # one code point per symbol; lets the checkers lean on str.find
        return "".join(map(chr, self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.symbols[idx], self.alphabet)
        return self.symbols[idx]

    def __add__(self, other: "Word") -> "Word":
        q = max(self.alphabet.size, other.alphabet.size)
        return Word(self.symbols + tuple(other.symbols), Alphabet(q, self.alphabet.mode if q <= 26 else "ints"))

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.symbols == other.symbols
        return NotImplemented

    def __hash__(self):
        return hash(self.symbols)

    def __str__(self) -> str:
        return render_word(self)

    def __repr__(self) -> str:
        body = render_word(self)
        if len(body) > 60:
            body = body[:57] + "..."
        return f"Word({body!r}, q={self.alphabet.size})"

    def with_alphabet(self, q: int) -> "Word":
        return Word(self.symbols, Alphabet(q, "chars" if q <= 26 else "ints"))

    def is_palindrome(self) -> bool:
        return self.symbols == self.symbols[::-1]


def zimin(n: int) -> Word:
    """Return Z_n over the alphabet {0..n-1}; symbol k sits first at 2^k - 1."""
    if not 1 <= n <= MAX_ZIMIN:
        raise SizeError(f"zimin(n) needs 1 <= n <= {MAX_ZIMIN}, got {n}")
    # Z_n[p] is the number of trailing zeros of p+1
    syms = [((p + 1) & -(p + 1)).bit_length() - 1 for p in range((1 << n) - 1)]
    return Word(tuple(syms), Alphabet(n, "chars" if n <= 26 else "ints"))


def as_word(w) -> Word:
    """Coerce a Word, a chars-format string or an int sequence to a Word."""
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return parse_word(w, "chars")
    return Word.of(w)


def subwords(w: Sequence, min_len: int = 1) -> Iterator[tuple[int, int]]:
    """Yield ``(start, end)`` inclusive intervals of all subwords of length >= min_len."""
    n = len(w)
    for i in range(n):
        for j in range(i + min_len - 1, n):
            yield i, j


def parse_word(text: str, format: str = "chars", q: int | None = None) -> Word:
    text = text.strip()
    if format == "chars":
        if q is not None and q > 26:
            raise WordError("chars format only supports alphabets of size <= 26")
        ids = []
        for pos, ch in enumerate(text):
            k = LETTERS.find(ch)
            if k < 0:
                raise WordError(f"unknown symbol token {ch!r} at column {pos}")
            ids.append(k)
        mode = "chars"
    elif format == "ints":
        ids = []
        for tok in text.split():
            if not tok.isdigit():
                raise WordError(f"unknown symbol token {tok!r}")
            ids.append(int(tok))
        mode = "ints"
    else:
        raise WordError(f"unknown word format {format!r}")
    if q is None:
        q = max(ids, default=0) + 1
    for s in ids:
        if s >= q:
            raise WordError(f"symbol id {s} >= alphabet size {q}")
    return Word(tuple(ids), Alphabet(q, mode))


def render_word(w: Word, format: str | None = None) -> str:
    if format is None:
        format = w.alphabet.mode
    if format == "chars":
        if w.alphabet.size > 26:
            raise WordError("chars format only supports alphabets of size <= 26")
        return "".join(LETTERS[s] for s in w.symbols)
    if format == "ints":
        return " ".join(map(str, w.symbols))
    raise WordError(f"unknown word format {format!r}")


_HEADER = re.compile(r"^alphabet\s+(\d+)\s*$")


class WordFileError(WordError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _guess_format(lines: list[str]) -> str:
    # the first word decides, so a stray token is reported on its own line
    return "ints" if lines and any(ch.isdigit() for ch in lines[0]) else "chars"


def parse_word_lines(lines: Iterable[str], format: str = "auto") -> list[Word]:
    """Parse the word file format.

    One word per line; ``#`` starts a comment line; blank lines are skipped;
    the first non-comment line may be ``alphabet <q>``.
    """
    body: list[tuple[int, str]] = []
    q = None
    seen_first = False
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not seen_first:
            seen_first = True
            m = _HEADER.match(line)
            if m:
                q = int(m.group(1))
                if q < 1:
                    raise WordFileError(lineno, "alphabet size must be >= 1")
                continue
        body.append((lineno, line))
    if format == "auto":
        format = _guess_format([ln for _, ln in body])
    if q is None:
        q = 1
        for lineno, line in body:
            try:
                w = parse_word(line, format)
            except WordError as exc:
                raise WordFileError(lineno, str(exc)) from None
            q = max(q, w.alphabet.size)
    words = []
    for lineno, line in body:
        try:
            words.append(parse_word(line, format, q))
        except WordError as exc:
            raise WordFileError(lineno, str(exc)) from None
    return words


def read_words(path, format: str = "auto") -> list[Word]:
    with open(path) as fh:
        return parse_word_lines(fh, format)


def format_word_file(words: Sequence[Word], format: str | None = None, q: int | None = None,
                     comments: Sequence[str] = ()) -> str:
    if q is None:
        q = max((w.alphabet.size for w in words), default=1)
    if format is None:
        format = "chars" if q <= 26 else "ints"
    out = [f"# {c}" for c in comments]
    out.append(f"alphabet {q}")
    out.extend(render_word(w, format) for w in words)
    return "\n".join(out) + "\n"


def write_words(path, words: Sequence[Word], format: str | None = None, q: int | None = None,
                comments: Sequence[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(format_word_file(words, format, q, comments))
