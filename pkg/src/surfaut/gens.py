"""Named automorphisms (sigma, alpha, beta, gamma, eta, the zeta lift),
generator words over them, and the Humphries rewriting of alpha_i (i >= 3).

Generator word tokens are `s<j>`, `a<i>`, `b<i>`, `g<i>`, with a trailing
apostrophe for the inverse and `1` for the empty word.  Evaluation is
left-to-right composition, matching the right-action convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .core import Signature, Word, commutator
from .endo import Automorphism, Endomorphism, aut_from_map, compose
from .errors import IndexOutOfRange, ParseError

_FAMILIES = ("s", "a", "b", "g")
_TOKEN_RE = re.compile(r"^([sabg])([1-9][0-9]*)(')?$")


@dataclass(frozen=True)
class GenName:
    """A named generator: family 's', 'a', 'b' or 'g' plus its index."""

    family: str
    index: int

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES or self.index < 1:
            raise IndexOutOfRange(f"bad generator name {self.family}{self.index}")

    def validate(self, sig: Signature) -> None:
        ok = {
            "s": 2 <= self.index <= sig.p,
            "a": 1 <= self.index <= sig.g,
            "b": 1 <= self.index <= sig.g,
            "g": max(2 - sig.p, 1) <= self.index <= sig.g,
        }[self.family]
        if not ok:
            raise IndexOutOfRange(f"{self} is not a generator name for {sig}")

    def shifted(self, offset: int) -> "GenName":
        return GenName(self.family, self.index + offset)

    def __str__(self) -> str:
        return f"{self.family}{self.index}"


@dataclass(frozen=True)
class GenWord:
    """Word in generator names, freely reduced over the tokens."""

    tokens: tuple[tuple[GenName, int], ...]

    def __post_init__(self) -> None:
        out: list[tuple[GenName, int]] = []
        for name, exp in self.tokens:
            if exp not in (1, -1):
                raise ValueError(f"token exponent must be +-1, got {exp}")
            if out and out[-1] == (name, -exp):
                out.pop()
            else:
                out.append((name, exp))
        if tuple(out) != tuple(self.tokens):
            object.__setattr__(self, "tokens", tuple(out))
        else:
            object.__setattr__(self, "tokens", tuple(self.tokens))

    @staticmethod
    def empty() -> "GenWord":
        return GenWord(())

    @staticmethod
    def of(*names: GenName) -> "GenWord":
        return GenWord(tuple((n, 1) for n in names))

    def __mul__(self, other: "GenWord") -> "GenWord":
        return GenWord(self.tokens + other.tokens)

    def inverse(self) -> "GenWord":
        return GenWord(tuple((n, -e) for n, e in reversed(self.tokens)))

    def shifted(self, offset: int) -> "GenWord":
        return GenWord(tuple((n.shifted(offset), e) for n, e in self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        if not self.tokens:
            return "1"
        return " ".join(f"{n}{'' if e > 0 else chr(39)}" for n, e in self.tokens)


def parse_gen_word(text: str) -> GenWord:
    tokens = text.split()
    if not tokens:
        raise ParseError("empty generator word; use '1' for the identity")
    if tokens == ["1"]:
        return GenWord.empty()
    out = []
    for tok in tokens:
        m = _TOKEN_RE.match(tok)
        if m is None:
            raise ParseError(f"bad generator token {tok!r}")
        fam, idx, inv = m.groups()
        out.append((GenName(fam, int(idx)), -1 if inv else 1))
    return GenWord(tuple(out))


@lru_cache(maxsize=None)
def generator(name: GenName, sig: Signature) -> Automorphism:
    """Witnessed automorphism for a generator name; inverses are closed-form."""
    name.validate(sig)
    i = name.index
    W = lambda *codes: Word(sig, codes)  # noqa: E731
    if name.family == "s":
        tj, tk = sig.t_code(i), sig.t_code(i - 1)
        return aut_from_map(
            sig,
            {tj: W(tk), tk: W(-tk, tj, tk)},
            {tk: W(tj), tj: W(tj, tk, -tj)},
        )
    if name.family == "a":
        x, y = sig.x_code(i), sig.y_code(i)
        return aut_from_map(sig, {x: W(-y, x)}, {x: W(y, x)})
    if name.family == "b":
        x, y = sig.x_code(i), sig.y_code(i)
        return aut_from_map(sig, {y: W(x, y)}, {y: W(-x, y)})
    # gamma
    x_i, y_i = sig.x_code(i), sig.y_code(i)
    if i >= 2:
        x_prev, y_prev = sig.x_code(i - 1), sig.y_code(i - 1)
        w = W(y_prev, -x_i, -y_i, x_i)
    else:
        x_prev, y_prev = None, sig.t_code(1)
        w = W(sig.t_code(1), -x_i, -y_i, x_i)
    wi = w.inverse()
    fwd = {y_prev: wi * W(y_prev) * w, x_i: W(x_i) * w}
    inv = {y_prev: w * W(y_prev) * wi, x_i: W(x_i) * wi}
    if x_prev is not None:
        fwd[x_prev] = wi * W(x_prev)
        inv[x_prev] = w * W(x_prev)
    return aut_from_map(sig, fwd, inv)


def gen_set(sig: Signature, variant: str = "adl") -> list[GenName]:
    """The ADL generating set, or ADLH (alpha_i dropped for i >= 3)."""
    if variant not in ("adl", "adlh"):
        raise ValueError(f"variant must be 'adl' or 'adlh', got {variant!r}")
    names = [GenName("s", j) for j in range(2, sig.p + 1)]
    amax = sig.g if variant == "adl" else min(2, sig.g)
    names += [GenName("a", i) for i in range(1, amax + 1)]
    names += [GenName("b", i) for i in range(1, sig.g + 1)]
    names += [GenName("g", i) for i in range(max(2 - sig.p, 1), sig.g + 1)]
    return names


def eval_gen_word(w: GenWord, sig: Signature) -> Automorphism:
    """Left-to-right composition of the named generators."""
    auts = [
        generator(n, sig) if e > 0 else generator(n, sig).inverse()
        for n, e in w.tokens
    ]
    if not auts:
        return Automorphism.identity(sig)
    return compose(*auts)


_ETA_SIG = Signature(3, 0)


@lru_cache(maxsize=1)
def eta() -> Automorphism:
    """The genus-3 element conjugating alpha_1 into alpha_3."""
    sig = _ETA_SIG
    x = [None] + [Word(sig, (sig.x_code(i),)) for i in range(1, 4)]
    y = [None] + [Word(sig, (sig.y_code(i),)) for i in range(1, 4)]
    c3 = commutator(x[3], y[3])
    c2 = commutator(x[2], y[2])
    fwd = Endomorphism(
        sig,
        (
            y[3].inverse() * x[3].inverse() * y[3].inverse(),
            y[3].inverse().conjugate_by(x[3] * y[3]),
            x[2].conjugate_by(c3),
            y[2].conjugate_by(c3),
            x[1].conjugate_by(c2 * c3),
            y[1].conjugate_by(c2 * c3),
        ),
    )
    from .groupoid import certify_automorphism  # deferred: groupoid imports endo

    aut = certify_automorphism(fwd)
    if aut is None:
        raise RuntimeError("eta failed certification")
    return aut


def zeta_lift(sig: Signature) -> Automorphism:
    """Involution x_i <-> y_{g+1-i}, t_j -> t_{p+1-j} inverted."""
    moved: dict[int, Word] = {}
    for j in range(1, sig.p + 1):
        moved[sig.t_code(j)] = Word(sig, (-sig.t_code(sig.p + 1 - j),))
    for i in range(1, sig.g + 1):
        moved[sig.x_code(i)] = Word(sig, (sig.y_code(sig.g + 1 - i),))
        moved[sig.y_code(i)] = Word(sig, (sig.x_code(sig.g + 1 - i),))
    return aut_from_map(sig, moved, moved)


#: Conjugating chain for the Humphries rewriting at base index 3.
HUMPHRIES_CHAIN = tuple(
    GenName(f, i)
    for f, i in [
        ("b", 1), ("g", 2), ("b", 2), ("a", 2), ("g", 3), ("b", 3), ("b", 2),
        ("g", 3), ("g", 2), ("b", 2), ("b", 1), ("g", 2), ("a", 2), ("b", 2),
        ("g", 3), ("b", 3),
    ]
)


@lru_cache(maxsize=None)
def humphries_rewrite(i: int, sig: Signature) -> GenWord:
    """Rewrite alpha_i (i >= 3) over the ADLH names: conjugate alpha_(i-2) by
    the index-shifted 16-step chain, then recursively rewrite any alpha_(>=3)
    token the shift has introduced.  Correctness is checked by evaluation."""
    if not 3 <= i <= sig.g:
        raise IndexOutOfRange(f"humphries_rewrite needs 3 <= i <= g, got i={i} at {sig}")
    shift = i - 3
    chain = GenWord.of(*(n.shifted(shift) for n in HUMPHRIES_CHAIN))
    raw = chain.inverse() * GenWord.of(GenName("a", i - 2)) * chain
    tokens: list[tuple[GenName, int]] = []
    for name, exp in raw.tokens:
        if name.family == "a" and name.index >= 3:
            sub = humphries_rewrite(name.index, sig)
            tokens.extend((sub if exp > 0 else sub.inverse()).tokens)
        else:
            tokens.append((name, exp))
    word = GenWord(tuple(tokens))
    target = generator(GenName("a", i), sig)
    if eval_gen_word(word, sig).fwd != target.fwd:
        raise RuntimeError(f"Humphries rewriting failed evaluation for alpha_{i} at {sig}")
    if any(n.family == "a" and n.index >= 3 for n, _ in word.tokens):
        raise RuntimeError(f"Humphries rewriting for alpha_{i} still uses alpha_(>=3)")
    return word
