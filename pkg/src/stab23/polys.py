"""Graded polynomial carriers for the Lubin-Tate ring models.

Three concrete models share WittElement coefficients:

* ``WPoly`` over x1,x2,x3 (the symmetric-algebra model, deg x_i = -2),
  or over x1,x2 after the substitution x3 = -x1-x2 (the quotient by
  the first elementary symmetric function);
* ``LocPoly``: a pair (numerator, r) representing f / sigma3^r in
  canonical form with minimal r;
* ``TamePoly`` over u1, u^{+-1} (deg u = -2, deg u1 = 0) for the
  groups of order prime to 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import witt
from .errors import PrecisionMismatch
from .witt import WittElement


class WPoly:
    """Finitely supported map from exponent tuples to WittElement."""

    __slots__ = ("coeffs", "nvars", "precision")

    def __init__(self, nvars: int, precision: int, coeffs=None):
        self.nvars = nvars
        self.precision = precision
        self.coeffs = {}
        if coeffs:
            for mono, c in coeffs.items():
                if len(mono) != nvars:
                    raise ValueError("monomial arity mismatch")
                if c.precision != precision:
                    raise PrecisionMismatch("coefficient precision mismatch")
                if not c.is_zero():
                    self.coeffs[tuple(mono)] = c

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars, precision):
        return cls(nvars, precision)

    @classmethod
    def constant(cls, c: WittElement, nvars: int):
        return cls(nvars, c.precision, {tuple([0] * nvars): c})

    @classmethod
    def variable(cls, i: int, nvars: int, precision: int):
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, precision, {tuple(mono): witt.one(precision)})

    # -- basic ring ops ---------------------------------------------------
    def _check(self, other: "WPoly"):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        if self.precision != other.precision:
            raise PrecisionMismatch("poly precision mismatch")

    def __add__(self, other: "WPoly") -> "WPoly":
        self._check(other)
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            s = out.get(mono)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return WPoly(self.nvars, self.precision, out)

    def __neg__(self) -> "WPoly":
        return WPoly(
            self.nvars, self.precision, {m: -c for m, c in self.coeffs.items()}
        )

    def __sub__(self, other: "WPoly") -> "WPoly":
        return self + (-other)

    def __mul__(self, other: "WPoly") -> "WPoly":
        self._check(other)
        out = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return WPoly(self.nvars, self.precision, out)

    def scale(self, c: WittElement) -> "WPoly":
        return WPoly(
            self.nvars, self.precision, {m: c * v for m, v in self.coeffs.items()}
        )

    def __pow__(self, n: int) -> "WPoly":
        out = WPoly.constant(witt.one(self.precision), self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def frobenius(self) -> "WPoly":
        return WPoly(
            self.nvars,
            self.precision,
            {m: c.frobenius() for m, c in self.coeffs.items()},
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WPoly)
            and self.nvars == other.nvars
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.nvars, self.precision, frozenset(self.coeffs.items())))

    # -- structure ---------------------------------------------------------
    def total_degrees(self) -> set:
        return {sum(m) for m in self.coeffs}

    def homogeneous_part(self, d: int) -> "WPoly":
        return WPoly(
            self.nvars,
            self.precision,
            {m: c for m, c in self.coeffs.items() if sum(m) == d},
        )

    def reduce(self, precision: int) -> "WPoly":
        return WPoly(
            self.nvars, precision, {m: c.reduce(precision) for m, c in self.coeffs.items()}
        )

    def render(self, names=None) -> str:
        if self.is_zero():
            return "0"
        names = names or [f"x{i+1}" for i in range(self.nvars)]
        terms = []
        for m in sorted(self.coeffs, reverse=True):
            c = self.coeffs[m]
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(m)
                if e
            )
            coef = f"({c.c0}+{c.c1}w)"
            terms.append(f"{coef}{'*' + mono if mono else ''}")
        return " + ".join(terms)

    def __repr__(self):
        return f"WPoly({self.render()})"


def substitute_x3(p: WPoly) -> WPoly:
    """Image of a 3-variable poly under x3 -> -x1-x2, in 2 variables."""
    if p.nvars != 3:
        raise ValueError("substitute_x3 expects 3 variables")
    out = WPoly.zero(2, p.precision)
    one = witt.one(p.precision)
    for (e1, e2, e3), c in p.coeffs.items():
        sign = one if e3 % 2 == 0 else -one
        acc = {}
        for k in range(e3 + 1):
            mono = (e1 + k, e2 + e3 - k)
            coef = sign * c * witt.from_int(comb(e3, k), p.precision)
            prev = acc.get(mono)
            acc[mono] = coef if prev is None else prev + coef
        q = WPoly(2, p.precision, {m: v for m, v in acc.items() if not v.is_zero()})
        out = out + q
    return out


def embed_2_to_3(p: WPoly) -> WPoly:
    if p.nvars != 2:
        raise ValueError("embed_2_to_3 expects 2 variables")
    return WPoly(
        3, p.precision, {(e1, e2, 0): c for (e1, e2), c in p.coeffs.items()}
    )


def monomials_of_degree(nvars: int, d: int) -> list:
    """Exponent tuples of total degree d, in lexicographic order."""
    if nvars == 1:
        return [(d,)]
    out = []
    for e in range(d, -1, -1):
        out.extend([(e, *rest) for rest in monomials_of_degree(nvars - 1, d - e)])
    return sorted(out)


# -- division by the sigma3 image, for canonical localization -------------

def divide_by_variable(p: WPoly, i: int):
    out = {}
    for m, c in p.coeffs.items():
        if m[i] == 0:
            return None
        mm = list(m)
        mm[i] -= 1
        out[tuple(mm)] = c
    return WPoly(p.nvars, p.precision, out)


def divide_by_x1_plus_x2(p: WPoly):
    """Exact division by (x1 + x2) in 2 variables, or None."""
    if p.nvars != 2:
        raise ValueError("requires 2 variables")
    rem = WPoly(2, p.precision, dict(p.coeffs))
    quo = WPoly.zero(2, p.precision)
    divisor = WPoly(
        2,
        p.precision,
        {(1, 0): witt.one(p.precision), (0, 1): witt.one(p.precision)},
    )
    while not rem.is_zero():
        lead = max(rem.coeffs)  # lex: x1 first
        c = rem.coeffs[lead]
        if lead[0] == 0:
            return None
        m = (lead[0] - 1, lead[1])
        term = WPoly(2, p.precision, {m: c})
        quo = quo + term
        rem = rem - term * divisor
    return quo


def sigma3_rho(precision: int) -> WPoly:
    """Image of x1*x2*x3 in 2 variables: -x1^2*x2 - x1*x2^2."""
    mone = -witt.one(precision)
    return WPoly(2, precision, {(2, 1): mone, (1, 2): mone})


def divide_by_sigma3(p: WPoly):
    """Exact division by the sigma3 image, or None."""
    q = divide_by_variable(p, 0)
    if q is None:
        return None
    q = divide_by_variable(q, 1)
    if q is None:
        return None
    q = divide_by_x1_plus_x2(q)
    if q is None:
        return None
    return -q


@dataclass(frozen=True)
class LocPoly:
    """num / sigma3^r over the 2-variable quotient model, canonical minimal r."""

    num: WPoly
    r: int

    @property
    def precision(self) -> int:
        return self.num.precision

    def canonical(self) -> "LocPoly":
        num, r = self.num, self.r
        while r > 0 and not num.is_zero():
            q = divide_by_sigma3(num)
            if q is None:
                break
            num, r = q, r - 1
        if num.is_zero():
            r = 0
        return LocPoly(num, r)

    def __add__(self, other: "LocPoly") -> "LocPoly":
        r = max(self.r, other.r)
        s3 = sigma3_rho(self.precision)
        a = self.num * s3 ** (r - self.r)
        b = other.num * s3 ** (r - other.r)
        return LocPoly(a + b, r).canonical()

    def __neg__(self):
        return LocPoly(-self.num, self.r)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LocPoly") -> "LocPoly":
        return LocPoly(self.num * other.num, self.r + other.r).canonical()

    def __pow__(self, n: int) -> "LocPoly":
        out = LocPoly(WPoly.constant(witt.one(self.precision), 2), 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: WittElement) -> "LocPoly":
        return LocPoly(self.num.scale(c), self.r)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocPoly):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.r == b.r and a.num == b.num

    def internal_degree(self):
        degs = {(-2) * d + 6 * self.r for d in self.num.total_degrees()}
        return degs

    def render(self) -> str:
        base = self.num.render()
        return base if self.r == 0 else f"({base})/sigma3^{self.r}"


class TamePoly:
    """Map (i, j) -> coefficient for monomials u1^i * u^j, j of either sign."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, precision: int, coeffs=None):
        self.precision = precision
        self.coeffs = {}
        if coeffs:
            for (i, j), c in coeffs.items():
                if i < 0:
                    raise ValueError("u1 exponent must be >= 0")
                if not c.is_zero():
                    self.coeffs[(i, j)] = c

    @classmethod
    def monomial(cls, i: int, j: int, precision: int, coeff=None):
        return cls(precision, {(i, j): coeff or witt.one(precision)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return TamePoly(self.precision, out)

    def __neg__(self):
        return TamePoly(self.precision, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                m = (i1 + i2, j1 + j2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return TamePoly(self.precision, out)

    def __eq__(self, other):
        return (
            isinstance(other, TamePoly)
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self):
        return not self.coeffs

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (i, j) in sorted(self.coeffs):
            c = self.coeffs[(i, j)]
            mono = []
            if i:
                mono.append(f"u1^{i}" if i > 1 else "u1")
            if j:
                mono.append(f"u^{j}")
            parts.append(f"({c.c0}+{c.c1}w)" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)
