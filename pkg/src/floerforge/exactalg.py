"""Exact arithmetic: GF(2) and rational scalars, half-integers, Laurent
polynomials with half-integer exponents, and sparse matrices with exact
rank/kernel computation.

No floating point is used anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import comb
from typing import Dict, Iterable, List, Mapping, Tuple, Union


class ExactAlgError(ValueError):
    """Raised for malformed exact-arithmetic input."""


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class Field:
    """A coefficient field. Scalars are plain ``int`` (GF(2)) or ``Fraction``."""

    name = "?"

    def coerce(self, value) -> Union[int, Fraction]:
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == 0


class _GF2(Field):
    name = "GF2"

    def coerce(self, value) -> int:
        q = Fraction(value)
        if q.denominator % 2 == 0:
            raise ExactAlgError(f"{value!r} has no image in GF(2)")
        return q.numerator % 2

    def add(self, x, y):
        return (x + y) & 1

    def neg(self, x):
        return x

    def mul(self, x, y):
        return x & y

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 in GF(2)")
        return 1


class _Q(Field):
    name = "Q"

    def coerce(self, value) -> Fraction:
        return Fraction(value)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return 1 / Fraction(x)


GF2 = _GF2()
Q = _Q()


def field_from_name(name: str) -> Field:
    key = name.strip().lower()
    if key in ("gf2", "f2", "z2"):
        return GF2
    if key in ("q", "qq", "rational"):
        return Q
    raise ExactAlgError(f"unknown field {name!r}")


def format_scalar(x) -> str:
    q = Fraction(x)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Half-integers
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """An element of (1/2)Z stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        q = Fraction(value) * 2
        if q.denominator != 1:
            raise ExactAlgError(f"{value!r} is not a half-integer")
        return cls(int(q))

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __add__(self, other):
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).doubled - self.doubled)

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __lt__(self, other):
        return self.doubled < HalfInt.of(other).doubled

    def __eq__(self, other):
        try:
            return self.doubled == HalfInt.of(other).doubled
        except (ExactAlgError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.doubled))

    def __str__(self):
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half(value) -> HalfInt:
    return HalfInt.of(value)


def format_half_doubled(doubled: int) -> str:
    return str(HalfInt(doubled))


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

Exponent = Tuple[int, ...]  # doubled exponents, one per variable


class LaurentPoly:
    """Laurent polynomial in one or two variables with half-integer exponents
    and rational coefficients.

    Exponents are stored doubled, so ``t^{3/2}`` has key ``(3,)``.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] = ()):
        if nvars not in (1, 2):
            raise ExactAlgError("LaurentPoly supports 1 or 2 variables")
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ExactAlgError("exponent length does not match variable count")
            c = Fraction(c)
            if c:
                total = clean.get(exp, Fraction(0)) + c
                if total:
                    clean[exp] = total
                else:
                    clean.pop(exp, None)
        self._terms = clean

    # construction helpers
    @classmethod
    def zero(cls, nvars: int = 1) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int = 1) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, coeff, *exponents) -> "LaurentPoly":
        """``monomial(c, e1[, e2])`` with exponents as ordinary values (ints,
        Fractions or strings like ``"3/2"``)."""
        exp = tuple(HalfInt.of(e).doubled for e in exponents)
        return cls(len(exp), {exp: coeff})

    @classmethod
    def from_terms(cls, pairs: Iterable[Tuple[object, object]]) -> "LaurentPoly":
        """One-variable polynomial from ``(exponent, coeff)`` pairs."""
        return cls(1, [((HalfInt.of(e).doubled,), c) for e, c in pairs])

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def coeff(self, *exponents) -> Fraction:
        exp = tuple(HalfInt.of(e).doubled for e in exponents)
        return self._terms.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest doubled exponent of a one-variable polynomial."""
        self._need_one_var()
        if not self._terms:
            raise ExactAlgError("zero polynomial has no degree")
        return max(e[0] for e in self._terms)

    def min_degree(self) -> int:
        self._need_one_var()
        if not self._terms:
            raise ExactAlgError("zero polynomial has no degree")
        return min(e[0] for e in self._terms)

    def _need_one_var(self):
        if self.nvars != 1:
            raise ExactAlgError("operation needs a one-variable polynomial")

    # arithmetic
    def _check(self, other: "LaurentPoly"):
        if not isinstance(other, LaurentPoly):
            raise TypeError("expected LaurentPoly")
        if other.nvars != self.nvars:
            raise ExactAlgError("variable-count mismatch")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.nvars, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.nvars, {e: c * other for e, c in self._terms.items()})
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly) and self.nvars == other.nvars
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Replace every variable t by t^k."""
        return LaurentPoly(self.nvars, {tuple(x * k for x in e): c for e, c in self._terms.items()})

    def collapse(self) -> "LaurentPoly":
        """Set both variables of a two-variable polynomial equal: t1 = t2 = t."""
        if self.nvars == 1:
            return self
        out: Dict[Exponent, Fraction] = {}
        for (a, b), c in self._terms.items():
            out[(a + b,)] = out.get((a + b,), 0) + c
        return LaurentPoly(1, out)

    def evaluate_at_one(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def is_odd(self) -> bool:
        """True if every exponent of a one-variable polynomial is an odd integer."""
        self._need_one_var()
        return all(e[0] % 4 == 2 or e[0] % 4 == -2 for e in self._terms)

    def is_antisymmetric(self) -> bool:
        """p(1/t) == -p(t)."""
        self._need_one_var()
        return all(self._terms.get((-e[0],), 0) == -c for e, c in self._terms.items())

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: tuple(-x for x in kv[0]))

    def render(self, names: Tuple[str, ...] = None) -> str:
        """Canonical text: descending exponent order, half exponents as ``a/2``."""
        if names is None:
            names = ("t",) if self.nvars == 1 else ("x", "y")
        if not self._terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms():
            mono = []
            for name, d in zip(names, exp):
                if d == 0:
                    continue
                if d == 2:
                    mono.append(name)
                else:
                    mono.append(f"{name}^{{{format_half_doubled(d)}}}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono:
                body = "*".join(mono)
                text = body if mag == 1 else f"{format_scalar(mag)}*{body}"
            else:
                text = format_scalar(mag)
            pieces.append((sign, text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LaurentPoly({self.render()})"


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact product of two Laurent polynomials in the same number of variables."""
    if not isinstance(p, LaurentPoly) or not isinstance(q, LaurentPoly):
        raise TypeError("expected LaurentPoly operands")
    if p.nvars != q.nvars:
        raise ExactAlgError("variable-count mismatch")
    out: Dict[Exponent, Fraction] = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly(p.nvars, out)


def parse_laurent(text: str, var: str = "t") -> LaurentPoly:
    """Parse one-variable text such as ``"-t^{-6} + 2*t^{3/2} - 4"``.

    Accepts ``t^k``, ``t^{k}``, ``t^{a/b}``, implicit or explicit ``*``, and
    unicode minus signs.
    """
    import re

    s = text.replace("−", "-").replace(" ", "")
    if not s:
        raise ExactAlgError("empty polynomial text")
    if s[0] not in "+-":
        s = "+" + s
    term_re = re.compile(
        r"([+-])(\d+(?:/\d+)?)?\*?(?:(%s)(?:\^(?:\{([+-]?\d+(?:/\d+)?)\}|([+-]?\d+(?:/\d+)?)))?)?" % re.escape(var))
    pos = 0
    pairs = []
    while pos < len(s):
        m = term_re.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ExactAlgError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            exp = m.group(4) or m.group(5) or "1"
        else:
            exp = "0"
        pairs.append((Fraction(exp), sign * coeff))
        pos = m.end()
    return LaurentPoly.from_terms(pairs)


def u_power_in_t(k: int) -> LaurentPoly:
    """(t - 1/t)^k expanded by the binomial theorem."""
    return LaurentPoly(1, {(2 * (k - 2 * j),): (-1) ** j * comb(k, j) for j in range(k + 1)})


class NotInImageError(ExactAlgError):
    """``rewrite_in_z`` input is not a polynomial in t - 1/t."""

    def __init__(self, residual: LaurentPoly):
        super().__init__(f"not a polynomial in t - 1/t; residual {residual.render()}")
        self.residual = residual


def rewrite_in_z(p: LaurentPoly) -> LaurentPoly:
    """Find q with q(t - 1/t) == p(t) by descending-degree elimination.

    The result is returned as a one-variable polynomial in ``u``. Raises
    :class:`NotInImageError` carrying the residual if no such q exists.
    """
    if p.nvars != 1:
        raise ExactAlgError("rewrite_in_z needs a one-variable polynomial")
    rest = p
    out: Dict[Exponent, Fraction] = {}
    while not rest.is_zero():
        top = rest.degree()
        if top < 0 or top % 2:
            raise NotInImageError(rest)
        k = top // 2
        c = rest._terms[(top,)]
        out[(2 * k,)] = c
        rest = rest - u_power_in_t(k) * c
    return LaurentPoly(1, out)


def substitute_u(q: LaurentPoly) -> LaurentPoly:
    """Evaluate a polynomial in u at u = t - 1/t (inverse of ``rewrite_in_z``)."""
    total = LaurentPoly.zero(1)
    for (e,), c in q._terms.items():
        if e < 0 or e % 2:
            raise ExactAlgError("substitute_u needs a polynomial with integer exponents >= 0")
        total = total + u_power_in_t(e // 2) * c
    return total


# ---------------------------------------------------------------------------
# Sparse matrices
# ---------------------------------------------------------------------------

class SparseMatrix:
    """Sparse matrix over a field; ``entries`` maps (row, col) to nonzero scalars."""

    def __init__(self, rows: int, cols: int, entries: Mapping[Tuple[int, int], object] = (),
                 field: Field = Q):
        self.rows = rows
        self.cols = cols
        self.field = field
        clean = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (r, c), v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ExactAlgError(f"entry ({r},{c}) out of range")
            v = field.coerce(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def identity(cls, n: int, field: Field = Q) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)}, field)

    def columns(self) -> List[Dict[int, object]]:
        cols: List[Dict[int, object]] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def apply(self, vec: Mapping[int, object]) -> Dict[int, object]:
        """Multiply by a sparse column vector {col: value}."""
        f = self.field
        out: Dict[int, object] = {}
        cols = self.columns()
        for j, x in vec.items():
            for r, v in cols[j].items():
                out[r] = f.add(out.get(r, 0), f.mul(v, x))
        return {r: v for r, v in out.items() if v}


def rank_and_kernel(m: SparseMatrix) -> Tuple[int, List[Dict[int, object]]]:
    """Rank of ``m`` and a basis of its kernel as sparse vectors {col: value}.

    Column reduction: each column is reduced against previously found pivots
    while tracking the combination of original columns that produced it. A
    column that reduces to zero yields a kernel vector.
    """
    f = m.field
    pivots: Dict[int, Tuple[Dict[int, object], Dict[int, object]]] = {}
    kernel: List[Dict[int, object]] = []
    rank = 0
    for j, col in enumerate(m.columns()):
        vec = dict(col)
        combo: Dict[int, object] = {j: f.coerce(1)}
        while vec:
            low = max(vec)
            if low not in pivots:
                break
            pvec, pcombo = pivots[low]
            factor = f.neg(f.mul(vec[low], f.inv(pvec[low])))
            for r, v in pvec.items():
                nv = f.add(vec.get(r, 0), f.mul(factor, v))
                if nv:
                    vec[r] = nv
                else:
                    vec.pop(r, None)
            for c, v in pcombo.items():
                nv = f.add(combo.get(c, 0), f.mul(factor, v))
                if nv:
                    combo[c] = nv
                else:
                    combo.pop(c, None)
        if vec:
            pivots[max(vec)] = (vec, combo)
            rank += 1
        else:
            kernel.append(combo)
    return rank, kernel


def rank(m: SparseMatrix) -> int:
    return rank_and_kernel(m)[0]
