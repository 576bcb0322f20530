"""Exact linear combinations over Q and an incremental span for membership tests."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def as_exact(c):
    """Coerce an int/Fraction to the narrowest exact type (int when integral)."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return as_exact(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class RingMismatch(ValueError):
    """Raised when combining elements that live in different rings (e.g. different n)."""


class LinearCombination:
    """Finite map basis-key -> nonzero exact rational, with ring operations.

    Subclasses provide ``_context`` (anything that must agree for two operands),
    ``_unit_key`` and ``_mul_keys``.  Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = as_exact(c)
                if c:
                    clean[k] = c
        self.terms = clean

    # -- hooks ---------------------------------------------------------------
    @property
    def _context(self):
        raise NotImplementedError

    def _new(self, terms):
        raise NotImplementedError

    def _unit_key(self):
        raise NotImplementedError

    def _mul_keys(self, a, b) -> dict:
        raise NotImplementedError

    # -- construction helpers -----------------------------------------------
    @classmethod
    def _raw(cls, proto, terms):
        obj = object.__new__(cls)
        for slot in _all_slots(cls):
            if slot != "terms":
                object.__setattr__(obj, slot, getattr(proto, slot))
        obj.terms = terms
        return obj

    def _lift(self, other):
        if isinstance(other, LinearCombination):
            if type(other) is not type(self) or other._context != self._context:
                raise RingMismatch(f"cannot combine {self._context!r} with {other._context!r}")
            return other
        if is_scalar(other):
            other = as_exact(other)
            return self._raw(self, {self._unit_key(): other} if other else {})
        return NotImplemented

    # -- vector space --------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = as_exact(v)
            else:
                out.pop(k, None)
        return self._raw(self, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_exact(c)
        if not c:
            return self._raw(self, {})
        return self._raw(self, {k: as_exact(v * c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                cab = ca * cb
                for k, c in self._mul_keys(ka, kb).items():
                    v = out.get(k, 0) + cab * c
                    if v:
                        out[k] = v
                    else:
                        del out[k]
        return self._raw(self, {k: as_exact(v) for k, v in out.items()})

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c):
        if not is_scalar(c):
            return NotImplemented
        return self.scale(Fraction(1) / as_exact(c))

    # -- comparisons -----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        lifted = self._lift(other) if not isinstance(other, LinearCombination) else other
        if lifted is NotImplemented:
            return NotImplemented
        if type(lifted) is not type(self) or lifted._context != self._context:
            return False
        return self.terms == lifted.terms

    __hash__ = None

    def scalar_value(self):
        """The rational c if this element equals c*1, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            (k, c), = self.terms.items()
            if k == self._unit_key():
                return c
        return None

    def __len__(self):
        return len(self.terms)


def _all_slots(cls):
    out = []
    for klass in cls.__mro__:
        out.extend(getattr(klass, "__slots__", ()))
    return out


def is_zero(x) -> bool:
    if is_scalar(x):
        return x == 0
    return not x


class ExactSpan:
    """Row-reduced spanning set of sparse rational vectors (dict key -> coef)."""

    def __init__(self):
        self._pivots: dict = {}  # pivot key -> reduced vector with coef 1 at pivot
        self._order: list = []

    def __len__(self):
        return len(self._pivots)

    def reduce(self, vec: dict) -> dict:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        changed = True
        while changed:
            changed = False
            for p in self._order:
                c = v.get(p)
                if c:
                    for k, b in self._pivots[p].items():
                        nv = v.get(k, 0) - c * b
                        if nv:
                            v[k] = nv
                        else:
                            v.pop(k, None)
                    changed = True
        return v

    def add(self, vec: dict) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r, key=repr)
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for q in self._order:
            row = self._pivots[q]
            c = row.get(p)
            if c:
                for k, b in r.items():
                    nv = row.get(k, 0) - c * b
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self._pivots[p] = r
        self._order.append(p)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)
