"""Exact arithmetic in the Yangian Y(gl_n).

Elements are rational combinations of ordered words in the generators
``t^(r)_ij`` (r >= 1), encoded as tuples ``(r, i, j)``.  Tuple comparison is
the PBW order: lexicographic on (level, row, col).  Products are brought to
normal form by the rewrite

    t^(r)_ij t^(s)_kl -> t^(s)_kl t^(r)_ij
        + sum_{a=1}^{min(r,s)} (t^(a-1)_kj t^(r+s-a)_il - t^(r+s-a)_kj t^(a-1)_il)

applied to out-of-order adjacent pairs.  Every correction term has weight
r+s-1, so rewriting terminates.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .linear import LinearCombination, as_exact, RingMismatch

__all__ = [
    "Element",
    "RingMismatch",
    "generator_order",
    "normal_form",
    "commutator",
    "defining_relation_residual",
    "gen",
    "one",
    "word_weight",
    "rewrite_pair",
    "normal_form_randomized",
]


def generator_order(a, b) -> int:
    """-1, 0, 1 comparing generators ``(r, i, j)`` lexicographically."""
    return (a > b) - (a < b)


def word_weight(word) -> int:
    return sum(g[0] for g in word)


def _is_ordered(word) -> bool:
    return all(word[k] <= word[k + 1] for k in range(len(word) - 1))


def _level_word(r, i, j):
    """Word (or scalar) for t^(r)_ij; level 0 is the Kronecker scalar."""
    if r == 0:
        return () if i == j else None
    return ((r, i, j),)


@lru_cache(maxsize=None)
def rewrite_pair(x, g):
    """Correction terms for ``x*g -> g*x + corrections``.

    Returns a tuple of (word, coef) with each word of length <= 2 (not
    necessarily ordered).
    """
    r, i, j = x
    s, k, l = g
    out: dict = {}
    for a in range(1, min(r, s) + 1):
        for (p, q, c) in (((a - 1, k, j), (r + s - a, i, l), 1),
                          ((r + s - a, k, j), (a - 1, i, l), -1)):
            w1 = _level_word(*p)
            w2 = _level_word(*q)
            if w1 is None or w2 is None:
                continue
            w = w1 + w2
            out[w] = out.get(w, 0) + c
    return tuple((w, c) for w, c in out.items() if c)


@lru_cache(maxsize=None)
def _insert(word, g):
    """Normal form of ``word * g`` for an ordered ``word``; dict word -> coef."""
    if not word or word[-1] <= g:
        return {word + (g,): 1}
    head, x = word[:-1], word[-1]
    out: dict = {}
    # head * g * x
    for w, c in _insert(head, g).items():
        for w2, c2 in _insert(w, x).items():
            _acc(out, w2, c * c2)
    # head * corrections
    for cw, cc in rewrite_pair(x, g):
        for w, c in _mul_word_word(head, cw).items():
            _acc(out, w, cc * c)
    return {w: c for w, c in out.items() if c}


def _acc(d, k, c):
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


@lru_cache(maxsize=None)
def _mul_word_word(w1, w2):
    """Normal form of ``w1 * w2`` where ``w1`` is ordered (w2 arbitrary)."""
    cur = {w1: 1}
    for g in w2:
        nxt: dict = {}
        for w, c in cur.items():
            for w3, c3 in _insert(w, g).items():
                _acc(nxt, w3, c * c3)
        cur = nxt
    return cur


def _normalize_terms(terms):
    out: dict = {}
    for w, c in terms.items():
        if _is_ordered(w):
            _acc(out, w, c)
        else:
            for w2, c2 in _mul_word_word((), w).items():
                _acc(out, w2, c * c2)
    return out


class Element(LinearCombination):
    """An element of Y_n.

    ``normalized`` is False only for elements built from raw (possibly
    unordered) words via :meth:`from_words`; all arithmetic returns
    normalized elements.
    """

    __slots__ = ("n", "normalized")

    def __init__(self, n: int, terms=None, normalized: bool = True):
        super().__init__(terms)
        self.n = n
        self.normalized = normalized
        for w in self.terms:
            for g in w:
                if g[0] < 1 or not (1 <= g[1] <= n and 1 <= g[2] <= n):
                    raise ValueError(f"bad generator {g} for n={n}")
        if normalized and not all(_is_ordered(w) for w in self.terms):
            self.terms = {w: as_exact(c) for w, c in _normalize_terms(self.terms).items()}

    @classmethod
    def from_words(cls, n, terms):
        """Build an element from arbitrary words without normalizing."""
        return cls(n, terms, normalized=False)

    @property
    def _context(self):
        return self.n

    def _unit_key(self):
        return ()

    def _mul_keys(self, a, b):
        return _mul_word_word(a, b)

    def _lift(self, other):
        out = super()._lift(other)
        if out is not NotImplemented and isinstance(out, Element) and out is not other:
            object.__setattr__(out, "normalized", True)
        return out

    def __add__(self, other):
        if isinstance(other, Element) and not (self.normalized and other.normalized):
            return normal_form(self) + normal_form(other)
        out = super().__add__(other)
        return out

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, Element):
            return super(Element, normal_form(self)).__mul__(normal_form(other))
        return super().__mul__(other)

    def __eq__(self, other):
        if isinstance(other, Element):
            if other.n != self.n:
                return False
            return normal_form(self).terms == normal_form(other).terms
        return super(Element, normal_form(self)).__eq__(other)

    __hash__ = None

    @property
    def weight(self) -> int:
        return max((word_weight(w) for w in self.terms), default=0)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def top_weight_part(self) -> "Element":
        """Terms of maximal weight (the image in the associated graded)."""
        wt = self.weight
        return Element(self.n, {w: c for w, c in self.terms.items() if word_weight(w) == wt},
                       normalized=self.normalized)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (word_weight(kv[0]), kv[0])):
            mono = "*".join(f"t{r}_{i}{j}" for r, i, j in w) or "1"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


def one(n: int) -> Element:
    return Element(n, {(): 1})


def gen(n: int, r: int, i: int, j: int) -> Element:
    """The generator t^(r)_ij; level 0 resolves to delta_ij."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"index out of range for n={n}: ({i},{j})")
    if r < 0:
        raise ValueError("level must be >= 0")
    if r == 0:
        return Element(n, {(): 1} if i == j else {})
    return Element(n, {((r, i, j),): 1})


def normal_form(x: Element) -> Element:
    if x.normalized:
        return x
    return Element(x.n, _normalize_terms(x.terms))


def commutator(x: Element, y: Element) -> Element:
    return x * y - y * x


def defining_relation_residual(n, i, j, k, l, r, s) -> Element:
    """LHS - RHS of the defining relation; zero for every valid input.

    [t^(r+1)_ij, t^(s)_kl] - [t^(r)_ij, t^(s+1)_kl] = t^(r)_kj t^(s)_il - t^(s)_kj t^(r)_il
    """
    t = lambda lev, a, b: gen(n, lev, a, b)  # noqa: E731
    lhs = commutator(t(r + 1, i, j), t(s, k, l)) - commutator(t(r, i, j), t(s + 1, k, l))
    rhs = t(r, k, j) * t(s, i, l) - t(s, k, j) * t(r, i, l)
    return lhs - rhs


def normal_form_randomized(x: Element, rng: random.Random, max_steps: int = 10**6):
    """Normalize by rewriting randomly chosen descents; returns (element, steps).

    Independent of the memoized insertion path used by ``normal_form``; used
    to probe confluence.
    """
    terms = {w: c for w, c in x.terms.items()}
    steps = 0
    while True:
        bad = [w for w in terms if not _is_ordered(w)]
        if not bad:
            return Element(x.n, terms), steps
        steps += 1
        if steps > max_steps:
            raise RuntimeError("rewriting did not terminate within the step bound")
        w = rng.choice(sorted(bad))
        c = terms.pop(w)
        descents = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
        p = rng.choice(descents)
        x_, g = w[p], w[p + 1]
        _acc(terms, w[:p] + (g, x_) + w[p + 2:], c)
        for cw, cc in rewrite_pair(x_, g):
            _acc(terms, w[:p] + cw + w[p + 2:], c * cc)
