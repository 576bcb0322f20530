"""The Yangian flag algebra: generators, coproduct and coaction, sigma/mu maps and the module action.

The flag algebra is never built as a quotient with normal forms.  Elements
live in the tensor algebra on the generators f_I^(r) modulo the alternating
relations only (``FlagElement``), and every relation-level statement is
checked either in the minor model f_I(u) -> t^[|I|]_I(u) or as an exact
ideal-membership test on windowed coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .linear import ExactSpan, LinearCombination, as_exact, is_scalar
from .minor_calculus import (
    c_rel_numerators,
    initial,
    inversion_sign,
    sort_with_sign,
    straightening_terms,
    ydet,
    young_sum,
)
from .report import IdentityReport, ResourceGuard, residual_summary, stopwatch
from .series_ring import INF, BiSeries, Series, clear_denominators, linear_factor, shift
from .yangian_core import Element, _mul_word_word, gen, one

__all__ = [
    "Composition",
    "FlagElement",
    "flag_gen",
    "flag_monomial",
    "flag_series",
    "Tensor",
    "tensor_op",
    "apply_slot",
    "coproduct",
    "counit",
    "coproduct_series",
    "bialgebra_check",
    "minor_model_check",
    "rho",
    "rho_raw",
    "rho_tensor",
    "coaction_check",
    "sigma_series",
    "sigma_map",
    "mu_domain_element",
    "mu_map",
    "comodule_map_check",
    "flag_c_relation",
    "c_ideal_stability_check",
    "module_action",
    "action_on_tuples",
    "action_check",
    "preferred_basis_monomials",
]

MAX_N = 3
MAX_ORDER = 4


@dataclass(frozen=True)
class Composition:
    parts: tuple

    def __post_init__(self):
        if not self.parts or any(int(g) != g or g <= 0 for g in self.parts):
            raise ValueError(f"composition parts must be positive integers, got {self.parts}")

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Composition":
        try:
            parts = tuple(int(x) for x in text.split(","))
        except ValueError as exc:
            raise ValueError(f"malformed composition {text!r}") from exc
        comp = cls(parts)
        if n is not None and comp.n != n:
            raise ValueError(f"composition {text} sums to {comp.n}, not n={n}")
        return comp

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def partial_sums(self) -> tuple:
        return tuple(itertools.accumulate(self.parts))

    def allows(self, size: int) -> bool:
        return size in self.partial_sums


def _guard(n, N):
    if n > MAX_N or N > MAX_ORDER:
        raise ResourceGuard(f"flag checks are limited to n <= {MAX_N}, N <= {MAX_ORDER}")


# -- flag elements -------------------------------------------------------------

class FlagElement(LinearCombination):
    """Linear combination of words in f_I^(r), I strictly increasing, r >= 1."""

    __slots__ = ("n",)

    def __init__(self, n: int, terms=None):
        super().__init__(terms)
        self.n = n

    @property
    def _context(self):
        return self.n

    def _unit_key(self):
        return ()

    def _mul_keys(self, a, b):
        return {a + b: 1}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            mono = "*".join(f"f{''.join(map(str, I))}^({r})" for I, r in w) or "1"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


def flag_monomial(n, factors, coef=1) -> FlagElement:
    """Product of f_{I_k}^(r_k); tuples are sorted with sign, a repeat gives zero."""
    word, sign = [], 1
    for I, r in factors:
        I = tuple(I)
        if r < 0:
            raise ValueError("flag generators have level r >= 0")
        if not I or any(not 1 <= x <= n for x in I):
            raise ValueError(f"bad index tuple {I} for n={n}")
        sI, g = sort_with_sign(I)
        sign *= g
        word.append((sI, r))
    return FlagElement(n, {tuple(word): coef * sign} if sign else {})


def flag_gen(n, I, r) -> FlagElement:
    return flag_monomial(n, [(I, r)])


def flag_series(n, I, N, a=0, tilde=False) -> Series:
    """f_I(u + a) = sum_r f_I^(r) (u+a)^-r, window (0, N).

    Flag generators start at r = 1; the ``tilde`` variant also carries the
    constant coefficient f_I^(0) of the space the sigma and mu maps act on.
    """
    s = Series({r: flag_gen(n, I, r) for r in range(0 if tilde else 1, N + 1)}, 0, N)
    return shift(s, a) if a else s


def _word_levels(word):
    return sum(r for _, r in word)


# -- tensors ---------------------------------------------------------------------

class Tensor(LinearCombination):
    """Element of a tensor product; ``slots`` lists 'Y' (Yangian) or 'F' (flag) factors."""

    __slots__ = ("n", "slots")

    def __init__(self, n, slots, terms=None):
        super().__init__(terms)
        self.n = n
        self.slots = tuple(slots)

    @property
    def _context(self):
        return (self.n, self.slots)

    def _unit_key(self):
        return tuple(() for _ in self.slots)

    def _mul_keys(self, a, b):
        parts = []
        for kind, x, y in zip(self.slots, a, b):
            parts.append(_mul_word_word(x, y) if kind == "Y" else {x + y: 1})
        out: dict = {}
        for combo in itertools.product(*(p.items() for p in parts)):
            c = 1
            for _, ci in combo:
                c *= ci
            key = tuple(k for k, _ in combo)
            out[key] = out.get(key, 0) + c
        return out

    def __repr__(self):
        return " + ".join(f"{c}*{k}" for k, c in sorted(self.terms.items(), key=repr)) or "0"


def _as_terms(x, slots, n):
    """Terms dict {tuple of slot keys: coef} for a scalar, Element, FlagElement or Tensor."""
    if is_scalar(x):
        return {tuple(() for _ in slots): as_exact(x)} if x else {}
    if isinstance(x, Tensor):
        if x.slots != tuple(slots):
            raise ValueError(f"slot mismatch {x.slots} vs {slots}")
        return x.terms
    kind = "Y" if isinstance(x, Element) else "F"
    if tuple(slots) != (kind,):
        raise ValueError(f"slot mismatch {kind} vs {slots}")
    return {(k,): c for k, c in x.terms.items()}


def tensor_op(left, right, n):
    """Bilinear x (tensor) y for coefficients of the given slot kinds (scalars allowed)."""
    slots = tuple(left) + tuple(right)

    def op(x, y):
        tx, ty = _as_terms(x, left, n), _as_terms(y, right, n)
        out: dict = {}
        for kx, cx in tx.items():
            for ky, cy in ty.items():
                k = kx + ky
                out[k] = out.get(k, 0) + cx * cy
        return Tensor(n, slots, out)

    return op


def apply_slot(T: Tensor, slot: int, fn, new_slots) -> Tensor:
    """Replace slot ``slot`` by the image of a linear map on its basis keys.

    ``fn(key)`` returns a scalar or element whose slot kinds are ``new_slots``
    (an empty tuple means the slot is consumed, as for the counit).
    """
    new_slots = tuple(new_slots)
    slots = T.slots[:slot] + new_slots + T.slots[slot + 1:]
    out: dict = {}
    cache: dict = {}
    for key, c in T.terms.items():
        k = key[slot]
        if k not in cache:
            val = fn(k)
            cache[k] = ({(): as_exact(val)} if val else {}) if not new_slots else _as_terms(val, new_slots, T.n)
        for sub, cs in cache[k].items():
            nk = key[:slot] + sub + key[slot + 1:]
            out[nk] = out.get(nk, 0) + c * cs
    return Tensor(T.n, slots, out)


def _merge_slots(T: Tensor, i: int, j: int) -> Tensor:
    """Multiply Yangian slots i < j together into slot i."""
    assert T.slots[i] == T.slots[j] == "Y"
    slots = T.slots[:j] + T.slots[j + 1:]
    out: dict = {}
    for key, c in T.terms.items():
        for w, cw in _mul_word_word(key[i], key[j]).items():
            nk = key[:i] + (w,) + key[i + 1:j] + key[j + 1:]
            out[nk] = out.get(nk, 0) + c * cw
    return Tensor(T.n, slots, out)


def _count(x) -> int:
    if is_scalar(x):
        return 0 if x == 0 else 1
    return len(x)


def _residual(pairs):
    total, first = 0, None
    for label, lhs, rhs in pairs:
        c = _count(lhs - rhs)
        if c and first is None:
            first = label
        total += c
    return total, first


# -- bialgebra ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _delta_gen(n, r, i, j):
    out: dict = {}
    for k in range(1, n + 1):
        for a in range(r + 1):
            x, y = gen(n, a, i, k), gen(n, r - a, k, j)
            for wx, cx in x.terms.items():
                for wy, cy in y.terms.items():
                    out[(wx, wy)] = out.get((wx, wy), 0) + cx * cy
    return Tensor(n, "YY", out)


@lru_cache(maxsize=None)
def _delta_word(n, word):
    out = Tensor(n, "YY", {((), ()): 1})
    for r, i, j in word:
        out = out * _delta_gen(n, r, i, j)
    return out


def coproduct(x) -> Tensor:
    """Delta on Y_n: t_ij(u) -> sum_k t_ik(u) (x) t_kj(u), extended multiplicatively."""
    if is_scalar(x):
        raise TypeError("coproduct of a bare scalar needs n; use coproduct(c * one(n))")
    out = Tensor(x.n, "YY")
    for w, c in x.terms.items():
        out = out + _delta_word(x.n, w) * c
    return out


def counit(x):
    """epsilon(T(u)) = 1: kills every word containing a generator of level >= 1."""
    if is_scalar(x):
        return x
    return x.terms.get((), 0)


def _word_element(n, w):
    return Element(n, {w: 1})


def coproduct_series(s: Series, n) -> Series:
    return s.map(lambda c: coproduct(c * one(n)) if is_scalar(c) else coproduct(c))


def bialgebra_check(kind, n, N, params=None) -> IdentityReport:
    """kind in {unit, counit, coassociativity, algebra_map, minor_coproduct}."""
    _guard(n, N)
    params = dict(params or {})
    gens = [(r, i, j) for r in range(1, N + 1) for i in range(1, n + 1) for j in range(1, n + 1)]
    with stopwatch() as sw:
        if kind == "unit":
            pairs = [("unit", coproduct(one(n)), Tensor(n, "YY", {((), ()): 1}))]
        elif kind == "coassociativity":
            pairs = []
            for g in gens:
                D = coproduct(gen(n, *g))
                left = apply_slot(D, 0, lambda w: coproduct(_word_element(n, w)), "YY")
                right = apply_slot(D, 1, lambda w: coproduct(_word_element(n, w)), "YY")
                pairs.append((f"t{g}", left, right))
        elif kind == "counit":
            pairs = []
            for g in gens:
                x = gen(n, *g)
                D = coproduct(x)
                eps = lambda w: 1 if w == () else 0  # noqa: E731
                pairs.append((f"left t{g}", apply_slot(D, 0, eps, ()), Tensor(n, "Y", _as_terms(x, "Y", n))))
                pairs.append((f"right t{g}", apply_slot(D, 1, eps, ()), Tensor(n, "Y", _as_terms(x, "Y", n))))
        elif kind == "algebra_map":
            pairs = []
            for g, h in itertools.product(gens, repeat=2):
                x, y = gen(n, *g), gen(n, *h)
                pairs.append((f"t{g}*t{h}", coproduct(x * y), coproduct(x) * coproduct(y)))
        elif kind == "minor_coproduct":
            I, J = tuple(params["I"]), tuple(params["J"])
            d = len(I)
            lhs = coproduct_series(ydet(n, I, J, N), n)
            op = tensor_op("Y", "Y", n)
            rhs = Series({}, 0, N)
            for K in itertools.combinations(range(1, n + 1), d):
                rhs = rhs + ydet(n, I, K, N).mul(ydet(n, K, J, N), op)
            pairs = [(f"u^-{k}", lhs[k], rhs[k]) for k in range(N + 1)]
        else:
            raise ValueError(f"unsupported bialgebra check {kind!r}")
        res, first = _residual(pairs)
    return IdentityReport(f"bialgebra:{kind}", dict(params, n=n, N=N), (0, N), res, sw["ms"], first)


# -- minor model --------------------------------------------------------------------

def _replace(t, pos, vals):
    out = list(t)
    for p, v in zip(pos, vals):
        out[p] = v
    return tuple(out)


def _pick(t, pos):
    return tuple(t[p] for p in pos)


def minor_model_check(family, params, gamma, n, N) -> IdentityReport:
    """Flag relation family A/C/Y/M with f_I(u) -> t^[|I|]_I(u)."""
    comp = gamma if isinstance(gamma, Composition) else Composition(tuple(gamma))
    if comp.n != n:
        raise ValueError(f"composition {comp.parts} does not sum to n={n}")
    notes: dict = {}
    with stopwatch() as sw:
        if family == "A":
            I, perm = tuple(params["I"]), tuple(params["sigma"])
            _need(comp, len(I))
            sI = tuple(I[p] for p in perm)
            d = len(I)
            res = ydet(n, initial(d), sI, N, raw=True) - ydet(n, initial(d), I, N, raw=True) * inversion_sign(perm)
        elif family == "C":
            I, J = tuple(params["I"]), tuple(params["J"])
            d, e = len(I), len(J)
            _need(comp, d, e)
            if d > e:
                raise ValueError("need |I| <= |J|")
            fJ = BiSeries.from_u(ydet(n, initial(e), J, N))
            fI = BiSeries.from_v(ydet(n, initial(d), I, N))
            nums = []
            for p in range(1, d + 1):
                acc = fJ * fI * comb(d, p)
                for ks in itertools.combinations(range(d), p):
                    for ls in itertools.combinations(range(e), p):
                        i_new = _replace(I, ks, _pick(J, ls))
                        j_new = _replace(J, ls, _pick(I, ks))
                        acc = acc - BiSeries.from_v(ydet(n, initial(d), i_new, N)) * BiSeries.from_u(
                            ydet(n, initial(e), j_new, N))
                nums.append(acc)
            res = clear_denominators(fJ * fI - fI * fJ, nums, d, e)
            minor_nums = c_rel_numerators(n, N, initial(e), J, initial(d), I)
            agree = all((a - b).is_zero() for a, b in zip(nums, minor_nums))
            notes["first_term"] = "agrees with the minor relation's row term" if agree else "differs"
        elif family == "Y":
            p, I, J = params["p"], tuple(params["I"]), tuple(params["J"])
            d, e = len(I) + p, len(J) - p
            _need(comp, d, e)
            terms = young_sum(n, N, p, d, e, I, J, e + p)
            res = Series({}, 0, N)
            for t in terms:
                res = res + t
        elif family == "M":
            I, J = tuple(params["I"]), tuple(params["J"])
            d, e = len(I), len(J)
            _need(comp, d, e)
            res = ydet(n, initial(e), J, N, e) * ydet(n, initial(d), I, N, d)
            for t in straightening_terms(n, N, d, e, I, J):
                res = res - t
        else:
            raise ValueError(f"unsupported flag relation family {family!r}")
    terms, first = residual_summary(res)
    return IdentityReport(f"model:{family}", dict(params, gamma=comp.parts, n=n, N=N), res.window,
                          terms, sw["ms"], first, notes)


def _need(comp, *sizes):
    for s in sizes:
        if not comp.allows(s):
            raise ValueError(f"size {s} is not a partial sum of {comp.parts}")


# -- coaction ------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _rho_gen(n, I, r, tilde):
    """rho(f_I^(r)) = sum_J sum_a f_J^(a) (x) [t^J_I]_{r-a}, I canonical; a >= 1 unless tilde."""
    out: dict = {}
    for J in itertools.combinations(range(1, n + 1), len(I)):
        m = ydet(n, J, I, r)
        for a in range(0 if tilde else 1, r + 1):
            for yk, yc in _as_terms(m[r - a], "Y", n).items():
                key = (((J, a),), yk[0])
                out[key] = out.get(key, 0) + yc
    return Tensor(n, "FY", out)


@lru_cache(maxsize=None)
def _rho_word(n, word, tilde):
    out = Tensor(n, "FY", {((), ()): 1})
    for I, r in word:
        out = out * _rho_gen(n, I, r, tilde)
    return out


def rho(x: FlagElement, tilde=False) -> Tensor:
    """The coaction on T(C_n), multiplicative on words.

    With ``tilde`` the level-0 coefficients are genuine generators; without
    it they are zero, which is the quotient by the subcomodule they span.
    """
    out = Tensor(x.n, "FY")
    for w, c in x.terms.items():
        if not tilde and any(r == 0 for _, r in w):
            raise ValueError("level-0 generators need tilde=True")
        out = out + _rho_word(x.n, w, tilde) * c
    return out


def rho_raw(n, I, r, tilde=False) -> Tensor:
    """rho(f_I^(r)) from the literal formula with the column tuple I taken as written."""
    I = tuple(I)
    out: dict = {}
    for J in itertools.combinations(range(1, n + 1), len(I)):
        m = ydet(n, J, I, r, raw=True)
        for a in range(0 if tilde else 1, r + 1):
            for yk, yc in _as_terms(m[r - a], "Y", n).items():
                key = (((J, a),), yk[0])
                out[key] = out.get(key, 0) + yc
    return Tensor(n, "FY", out)


def rho_tensor(T: Tensor, tilde=False) -> Tensor:
    """rho on every flag slot of an all-F tensor; Yangian parts are multiplied in order."""
    if any(s != "F" for s in T.slots):
        raise ValueError("rho_tensor expects flag slots only")
    k = len(T.slots)
    out = T
    for s in range(k):
        # slots so far: F * (s) ... ; each application appends a Y right after the F slot
        out = apply_slot(out, s, lambda w: rho(FlagElement(T.n, {w: 1}), tilde), "FY")
        out = _move_to_end(out, s + 1)
    while len(out.slots) > k + 1:
        out = _merge_slots(out, k, k + 1)
    return out


def _move_to_end(T: Tensor, i: int) -> Tensor:
    order = [j for j in range(len(T.slots)) if j != i] + [i]
    return Tensor(T.n, [T.slots[j] for j in order], {tuple(k[j] for j in order): c for k, c in T.terms.items()})


def coaction_check(kind, n, N, params=None) -> IdentityReport:
    """kind in {coaction_law, counit, alternating}."""
    _guard(n, N)
    params = dict(params or {})
    tilde = bool(params.get("tilde", False))
    with stopwatch() as sw:
        pairs = []
        if kind in ("coaction_law", "counit"):
            d = params.get("d", 1)
            for I in itertools.combinations(range(1, n + 1), d):
                for r in range(0 if tilde else 1, N + 1):
                    x = flag_gen(n, I, r)
                    R = rho(x, tilde)
                    if kind == "coaction_law":
                        left = apply_slot(R, 0, lambda w: rho(FlagElement(n, {w: 1}), tilde), "FY")
                        right = apply_slot(R, 1, lambda w: coproduct(_word_element(n, w)), "YY")
                        pairs.append((f"f{I}^({r})", left, right))
                    else:
                        back = apply_slot(R, 1, lambda w: 1 if w == () else 0, ())
                        pairs.append((f"f{I}^({r})", back, Tensor(n, "F", _as_terms(x, "F", n))))
        elif kind == "alternating":
            I = tuple(params["I"])
            for perm in itertools.permutations(range(len(I))):
                sI = tuple(I[p] for p in perm)
                for r in range(0 if tilde else 1, N + 1):
                    pairs.append((f"{sI}^({r})", rho_raw(n, sI, r, tilde),
                                  rho_raw(n, I, r, tilde) * inversion_sign(perm)))
        else:
            raise ValueError(f"unsupported coaction check {kind!r}")
        res, first = _residual(pairs)
    return IdentityReport(f"coaction:{kind}", dict(params, n=n, N=N), (0, N), res, sw["ms"], first)


# -- sigma and mu -----------------------------------------------------------------------

def sigma_series(n, J, e, p, N) -> Series:
    """sigma(f_J(u)) = sum_Lambda sign f_Lambda(u-e) (x) f_{J-Lambda}(u); J strictly increasing."""
    J = tuple(J)
    if any(a >= b for a, b in zip(J, J[1:])):
        raise ValueError(f"sigma is only defined on strictly increasing tuples, got {J}")
    if len(J) != e + p:
        raise ValueError(f"need |J| = e + p = {e + p}")
    op = tensor_op("F", "F", n)
    out = Series({}, 0, N)
    for lam in itertools.combinations(J, p):
        rest = tuple(x for x in J if x not in lam)
        term = flag_series(n, lam, N, -e, True).mul(flag_series(n, rest, N, 0, True), op)
        out = out + term * inversion_sign(lam, rest)
    return out


def sigma_map(x: FlagElement, e, p) -> Tensor:
    """sigma on degree-one elements of C_n(e+p), coefficientwise (level 0 included)."""
    out = Tensor(x.n, "FF")
    for w, c in x.terms.items():
        if len(w) != 1:
            raise ValueError("sigma acts on degree-one elements")
        (J, r), = w
        if len(J) != e + p:
            raise ValueError(f"need |J| = e + p = {e + p}")
        out = out + _sigma_coef(x.n, J, e, p, r) * c
    return out


@lru_cache(maxsize=None)
def _sigma_coef(n, J, e, p, r):
    s = sigma_series(n, J, e, p, r)
    v = s[r]
    return v if isinstance(v, Tensor) else Tensor(n, "FF", _as_terms(v, "FF", n))


def mu_domain_element(n, I, lam, alpha, r) -> Tensor:
    """Coefficient of v^-r in f_I(v + alpha) (x) f_Lambda(v), constant terms included."""
    s = flag_series(n, I, r, alpha, True).mul(flag_series(n, lam, r, 0, True), tensor_op("F", "F", n))
    v = s[r]
    return v if isinstance(v, Tensor) else Tensor(n, "FF", _as_terms(v, "FF", n))


def mu_map(T: Tensor, alpha) -> FlagElement:
    """mu: f_I(v+alpha) (x) f_Lambda(v) -> f_{I|Lambda}(v+alpha) on its domain.

    The input is decomposed into domain basis elements by peeling the terms
    of top total level; anything left over means it is outside the domain.
    """
    if T.slots != ("F", "F"):
        raise ValueError("mu acts on F (x) F tensors")
    n = T.n
    rest = Tensor(n, "FF", dict(T.terms))
    out = FlagElement(n)
    while rest.terms:
        top = max(_word_levels(a) + _word_levels(b) for a, b in rest.terms)
        (a, b), c = min(((k, v) for k, v in rest.terms.items()
                         if _word_levels(k[0]) + _word_levels(k[1]) == top), key=repr)
        if len(a) != 1 or len(b) != 1:
            raise ValueError("mu acts on products of two degree-one elements")
        (I, _), (lam, _) = a[0], b[0]
        rest = rest - mu_domain_element(n, I, lam, alpha, top) * c
        if any(k[0][0][0] == I and k[1][0][0] == lam and _word_levels(k[0]) + _word_levels(k[1]) == top
               for k in rest.terms):
            raise ValueError("element is outside the domain of mu")
        out = out + flag_series(n, I + lam, top, alpha, True)[top] * c
    return out


def _mu_tensor(T: Tensor, alpha) -> Tensor:
    """(mu (x) 1) on an F, F, rest tensor: group by the trailing slots."""
    groups: dict = {}
    for key, c in T.terms.items():
        groups.setdefault(key[2:], {})[key[:2]] = c
    out: dict = {}
    tail = T.slots[2:]
    for tail_key, terms in groups.items():
        img = mu_map(Tensor(T.n, "FF", terms), alpha)
        for w, c in img.terms.items():
            k = (w,) + tail_key
            out[k] = out.get(k, 0) + c
    return Tensor(T.n, ("F",) + tail, out)


def comodule_map_check(kind, n, N, params) -> IdentityReport:
    """kind in {sigma_square, mu_square, young_composition}."""
    _guard(n, N)
    with stopwatch() as sw:
        pairs = []
        if kind == "sigma_square":
            e, p = params["e"], params["p"]
            for J in itertools.combinations(range(1, n + 1), e + p):
                for r in range(N + 1):
                    x = flag_gen(n, J, r)
                    left = rho_tensor(sigma_map(x, e, p), True)
                    right = apply_slot(rho(x, True), 0, lambda w: sigma_map(FlagElement(n, {w: 1}), e, p), "FF")
                    pairs.append((f"f{J}^({r})", left, right))
        elif kind == "mu_square":
            d, p = params["d"], params["p"]
            alpha = d - p
            for I in itertools.permutations(range(1, n + 1), d - p):
                for lam in itertools.combinations(range(1, n + 1), p):
                    for r in range(N + 1):
                        X = mu_domain_element(n, I, lam, alpha, r)
                        left = rho(mu_map(X, alpha), True)
                        right = _mu_tensor(rho_tensor(X, True), alpha)
                        pairs.append((f"I={I} L={lam} r={r}", left, right))
        elif kind == "young_composition":
            p, I, J = params["p"], tuple(params["I"]), tuple(params["J"])
            d, e = len(I) + p, len(J) - p
            src = flag_series(n, I, N, d, True).mul(flag_series(n, J, N, e + p, True), tensor_op("F", "F", n))
            target = Series({}, 0, N)
            for lam in itertools.combinations(J, p):
                rest = tuple(x for x in J if x not in lam)
                target = target + flag_series(n, I + lam, N, d, True).mul(
                    flag_series(n, rest, N, e + p, True), tensor_op("F", "F", n)) * inversion_sign(lam, rest)
            for k in range(N + 1):
                c = src[k]
                if is_scalar(c):
                    continue
                step = apply_slot(c, 1, lambda w: sigma_map(FlagElement(n, {w: 1}), e, p), "FF")
                pairs.append((f"u^-{k}", _mu_tensor(step, d - p), target[k]))
        else:
            raise ValueError(f"unsupported comodule check {kind!r}")
        res, first = _residual(pairs)
    return IdentityReport(f"comodule:{kind}", dict(params, n=n, N=N), (0, N), res, sw["ms"], first)


# -- commuting relation and ideal stability ----------------------------------------

def flag_c_relation(n, I, J, N) -> BiSeries:
    """The cleared commuting relation in T(C_n); coefficients are flag elements."""
    I, J = tuple(I), tuple(J)
    d, e = len(I), len(J)
    mul = lambda x, y: x * y  # noqa: E731
    fu = lambda K: BiSeries.from_u(flag_series(n, K, N))  # noqa: E731
    fv = lambda K: BiSeries.from_v(flag_series(n, K, N))  # noqa: E731
    lhs = fu(J).mul(fv(I), mul) - fv(I).mul(fu(J), mul)
    nums = []
    for p in range(1, d + 1):
        acc = fu(J).mul(fv(I), mul) * comb(d, p)
        for ks in itertools.combinations(range(d), p):
            for ls in itertools.combinations(range(e), p):
                i_new = _replace(I, ks, _pick(J, ls))
                j_new = _replace(J, ls, _pick(I, ks))
                acc = acc - fv(i_new).mul(fu(j_new), mul)
        nums.append(acc)
    return clear_denominators(lhs, nums, d, e)


def _flag_vector(x):
    return {} if is_scalar(x) else dict(x.terms)


def _relation_span(gens):
    span = ExactSpan()
    for x in gens:
        span.add(_flag_vector(x))
    return span


def _c_relation_elements(n, d, e, N):
    out = []
    for I in itertools.product(range(1, n + 1), repeat=d):
        for J in itertools.product(range(1, n + 1), repeat=e):
            rel = flag_c_relation(n, I, J, N)
            out += [c for c in rel.coeffs.values() if not is_scalar(c)]
    return out


def c_ideal_stability_check(n, N, d=1, e=1) -> IdentityReport:
    """rho of every commuting-relation coefficient lies in (relation span) (x) Y_n."""
    if n > 3 or N > 3 or d != 1 or e != 1:
        raise ResourceGuard("c_ideal_stability_check runs at n <= 3, d = e = 1, N <= 3")
    with stopwatch() as sw:
        rels = _c_relation_elements(n, d, e, N)
        span = _relation_span(rels)
        residual, first = 0, None
        for idx, x in enumerate(rels):
            groups: dict = {}
            for (fw, yw), c in rho(x).terms.items():
                groups.setdefault(yw, {})[fw] = c
            for yw, vec in groups.items():
                left = span.reduce(vec)
                if left:
                    residual += len(left)
                    first = first or f"relation #{idx}, Yangian word {yw}"
    return IdentityReport("c_ideal_stability", dict(n=n, N=N, d=d, e=e), (0, N), residual, sw["ms"], first,
                          {"relations": len(rels), "span_dim": len(span)})


# -- module action -----------------------------------------------------------------------

def _replace_entry(I, b, a):
    return tuple(a if x == b else x for x in I)


def _derivation(n, a, b, x: FlagElement) -> FlagElement:
    """sum_i partial^i_ab: replace b by a in one tuple at a time."""
    out = FlagElement(n)
    for w, c in x.terms.items():
        for i, (I, r) in enumerate(w):
            if b in I:
                new = list(w)
                new[i] = (_replace_entry(I, b, a), r)
                out = out + flag_monomial(n, new, c)
    return out


def module_action(a, b, x: FlagElement, N=None) -> Series:
    """t_ab(u) . x = delta_ab x + u^-1 sum_i partial^i_ab x (an exact polynomial in u^-1)."""
    n = x.n
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"index out of range for n={n}")
    return Series({0: x if a == b else FlagElement(n), 1: _derivation(n, a, b, x)}, 0, INF)


def action_on_tuples(n, a, b, factors) -> Series:
    """The action computed on the tuples as written (entries distinct), before any sorting."""
    for I, _ in factors:
        if len(set(I)) != len(I):
            raise ValueError(f"tuple {I} has repeated entries")
    base = flag_monomial(n, factors)
    der = FlagElement(n)
    for i, (I, r) in enumerate(factors):
        if b in I:
            new = list(factors)
            new[i] = (_replace_entry(I, b, a), r)
            der = der + flag_monomial(n, new)
    return Series({0: base if a == b else FlagElement(n), 1: der}, 0, INF)


def _op_u(n, a, b, x):
    s = module_action(a, b, x)
    return BiSeries({(k, 0): c for k, c in s.coeffs.items()})


def _op_v(n, a, b, x):
    s = module_action(a, b, x)
    return BiSeries({(0, k): c for k, c in s.coeffs.items()})


def _apply_bi(n, outer, inner_fn, x):
    """Compose two action series: outer(.) applied to every coefficient of inner_fn(x)."""
    inner = inner_fn(x)
    out = BiSeries({})
    for (p, q), c in inner.coeffs.items():
        img = outer(c)
        out = out + BiSeries({(p + p2, q + q2): c2 for (p2, q2), c2 in img.coeffs.items()})
    return out


def _case_of(a, b, c, d):
    if b == d:
        return 1
    if b == a:
        return 2
    if b == c:
        return 3
    return 4


def well_defined_residual(n, a, b, c, d, x: FlagElement) -> BiSeries:
    """(u-v)[t_ab(u), t_cd(v)] x - (t_cb(u) t_ad(v) - t_cb(v) t_ad(u)) x."""
    tu = lambda i, j: (lambda y: _op_u(n, i, j, y))  # noqa: E731
    tv = lambda i, j: (lambda y: _op_v(n, i, j, y))  # noqa: E731
    comm = _apply_bi(n, tu(a, b), tv(c, d), x) - _apply_bi(n, tv(c, d), tu(a, b), x)
    rhs = _apply_bi(n, tu(c, b), tv(a, d), x) - _apply_bi(n, tv(c, b), tu(a, d), x)
    return linear_factor(0) * comm - rhs


def _monomials(n, max_size=2, max_len=2, levels=(1,)):
    tuples = [t for s in range(1, max_size + 1) for t in itertools.permutations(range(1, n + 1), s)]
    out = []
    for length in range(1, max_len + 1):
        for combo in itertools.product(tuples, repeat=length):
            for lv in itertools.product(levels, repeat=length):
                out.append(list(zip(combo, lv)))
    return out


def _y_relation_elements(n, p, d, e, N):
    out = []
    for I in itertools.permutations(range(1, n + 1), d - p):
        for J in itertools.combinations(range(1, n + 1), e + p):
            s = Series({}, 0, N)
            for lam in itertools.combinations(J, p):
                rest = tuple(x for x in J if x not in lam)
                s = s + flag_series(n, I + lam, N, d) * flag_series(n, rest, N, e + p) * inversion_sign(lam, rest)
            out += [c for c in s.coeffs.values() if not is_scalar(c)]
    return out


def _m_relation_elements(n, d, e, N):
    out = []
    for I in itertools.combinations(range(1, n + 1), d):
        for J in itertools.combinations(range(1, n + 1), e):
            s = flag_series(n, J, N, e) * flag_series(n, I, N, d)
            for lam in itertools.combinations(J, e - d):
                rest = tuple(x for x in J if x not in lam)
                s = s - flag_series(n, rest, N, d) * flag_series(n, lam + I, N, e) * inversion_sign(lam, rest)
            out += [c for c in s.coeffs.values() if not is_scalar(c)]
    return out


def _respects(n, rels):
    """Every t^(1)_ab derivation image of every relation lies in the relation span."""
    span = _relation_span(rels)
    residual, first = 0, None
    for idx, x in enumerate(rels):
        for a, b in itertools.product(range(1, n + 1), repeat=2):
            left = span.reduce(_flag_vector(_derivation(n, a, b, x)))
            if left:
                residual += len(left)
                first = first or f"relation #{idx}, t_{a}{b}"
    return residual, first, {"relations": len(rels), "span_dim": len(span)}


def action_check(kind, n, N, params=None) -> IdentityReport:
    """Module-action checks at desk scale (n <= 3, tuple sizes <= 2, monomial length <= 2)."""
    _guard(n, N)
    params = dict(params or {})
    notes: dict = {}
    with stopwatch() as sw:
        if kind.startswith("well_defined_case"):
            case = int(kind[-1])
            if case not in (1, 2, 3, 4):
                raise ValueError(f"unsupported case {kind!r}")
            residual, first, count = 0, None, 0
            for abcd in itertools.product(range(1, n + 1), repeat=4):
                if _case_of(*abcd) != case:
                    continue
                for mono in _monomials(n, params.get("max_size", 2), params.get("max_len", 2)):
                    x = flag_monomial(n, mono)
                    if not x:
                        continue
                    count += 1
                    r = well_defined_residual(n, *abcd, x).residual_terms()
                    if r and first is None:
                        first = f"t_ab,t_cd={abcd} on {mono}"
                    residual += r
            notes["instances"] = count
        elif kind == "respects_A":
            residual, first = 0, None
            for mono in _monomials(n, params.get("max_size", 2), params.get("max_len", 2)):
                for perms in itertools.product(*(list(itertools.permutations(range(len(I)))) for I, _ in mono)):
                    moved = [(tuple(I[q] for q in pm), r) for (I, r), pm in zip(mono, perms)]
                    sign = 1
                    for pm in perms:
                        sign *= inversion_sign(pm)
                    for a, b in itertools.product(range(1, n + 1), repeat=2):
                        lhs = action_on_tuples(n, a, b, moved)
                        rhs = action_on_tuples(n, a, b, mono)
                        for k in (0, 1):
                            c = _count(lhs[k] - rhs[k] * sign)
                            if c and first is None:
                                first = f"t_{a}{b} on {moved}"
                            residual += c
        elif kind == "respects_Y":
            p, d, e = params.get("p", 1), params.get("d", 1), params.get("e", 1)
            residual, first, notes = _respects(n, _y_relation_elements(n, p, d, e, N))
        elif kind == "respects_M":
            d, e = params.get("d", 1), params.get("e", 2)
            residual, first, notes = _respects(n, _m_relation_elements(n, d, e, N))
        elif kind == "respects_C":
            d, e = params.get("d", 1), params.get("e", 1)
            residual, first, notes = _respects(n, _c_relation_elements(n, d, e, N))
        elif kind == "highest_weight":
            comp = Composition(tuple(params["gamma"]))
            if comp.n != n:
                raise ValueError(f"composition {comp.parts} does not sum to n={n}")
            residual, first = 0, None
            for levels in itertools.product(range(1, N + 1), repeat=len(comp.partial_sums)):
                mono = [(initial(dk), r) for dk, r in zip(comp.partial_sums, levels)]
                x = flag_monomial(n, mono)
                for i in range(1, n + 1):
                    ci = sum(1 for dk in comp.partial_sums if i <= dk)
                    s = module_action(i, i, x)
                    for k, want in ((0, x), (1, x * ci)):
                        c = _count(s[k] - want)
                        if c and first is None:
                            first = f"t_{i}{i} on {mono}"
                        residual += c
                    for j in range(i + 1, n + 1):
                        s = module_action(i, j, x)
                        c = _count(s[0]) + _count(s[1])
                        if c and first is None:
                            first = f"t_{i}{j} on {mono}"
                        residual += c
        else:
            raise ValueError(f"unsupported action check {kind!r}")
    return IdentityReport(f"action:{kind}", dict(params, n=n, N=N), "exact", residual, sw["ms"], first, notes)


def preferred_basis_monomials(gamma, max_len=2, max_level=2):
    """Monomials f_{I_1}^(r_1)...f_{I_p}^(r_p) with |I_k| weakly increasing and I_k increasing.

    An enumeration utility only; no basis property is assumed anywhere.
    """
    comp = gamma if isinstance(gamma, Composition) else Composition(tuple(gamma))
    n = comp.n
    gens = [(I, r) for s in comp.partial_sums for I in itertools.combinations(range(1, n + 1), s)
            for r in range(1, max_level + 1)]
    out = []
    for length in range(1, max_len + 1):
        for combo in itertools.product(gens, repeat=length):
            if all(len(x[0]) <= len(y[0]) for x, y in zip(combo, combo[1:])):
                out.append(flag_monomial(n, combo))
    return out
