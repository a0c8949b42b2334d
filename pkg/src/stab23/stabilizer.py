"""Arithmetic in the stabilizer algebra O2 and the extended group G2.

O2 is W<S> subject to S^2 = 3 and S*a = frobenius(a)*S; an element of
the extended group G2 = units(O2) x| Gal(F9/F3) is a pair (a + b*S, e)
with e in {0,1} the Galois exponent.  The product of unit parts follows

    (a + b*S)(c + d*S) = (a*c + 3*b*phi(d)) + (a*d + b*phi(c))*S.

Also implemented: the congruence filtration, the reduced determinant
and its torsion/principal splitting, bounded subgroup closure, the
named finite subgroups, and the projection onto C3 = F9/F3 used to cut
out the subgroup K of the 3-Sylow part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import witt
from .errors import ClosureBoundExceeded, NonUnitError, PrecisionMismatch
from .witt import DEFAULT_PRECISION, WittElement

CLOSURE_CAP = 10_000


@dataclass(frozen=True)
class StabilizerElement:
    a: WittElement
    b: WittElement
    galois: int = 0

    def __post_init__(self):
        if self.a.precision != self.b.precision:
            raise PrecisionMismatch("a and b disagree in precision")
        object.__setattr__(self, "galois", self.galois % 2)

    @property
    def precision(self) -> int:
        return self.a.precision

    def key(self) -> tuple:
        return (self.a.c0, self.a.c1, self.b.c0, self.b.c1, self.galois)

    def is_unit(self) -> bool:
        return self.a.is_unit()

    def frobenius(self) -> "StabilizerElement":
        """Coefficientwise Galois action on the unit part (exponent kept)."""
        return StabilizerElement(self.a.frobenius(), self.b.frobenius(), self.galois)

    def _unit_mul(self, other: "StabilizerElement"):
        a, b = self.a, self.b
        c, d = other.a, other.b
        three = witt.from_int(3, self.precision)
        return (a * c + three * b * d.frobenius(), a * d + b * c.frobenius())

    def __mul__(self, other: "StabilizerElement") -> "StabilizerElement":
        if self.precision != other.precision:
            raise PrecisionMismatch("mixed precisions in stabilizer product")
        rhs = other.frobenius() if self.galois else other
        rhs = StabilizerElement(rhs.a, rhs.b, 0)
        a, b = self._unit_mul(rhs)
        return StabilizerElement(a, b, self.galois + other.galois)

    def det(self) -> int:
        """a*phi(a) - 3*b*phi(b), a Galois-invariant element of Z/3^N."""
        d = (self.a.norm() - 3 * self.b.norm()) % self.a.modulus
        return d

    def inv(self) -> "StabilizerElement":
        if not self.is_unit():
            raise NonUnitError("only units are invertible in O2")
        d_inv = pow(self.det(), -1, self.a.modulus)
        scale = witt.from_int(d_inv, self.precision)
        ua = self.a.frobenius() * scale
        ub = -self.b * scale
        u = StabilizerElement(ua, ub, 0)
        if self.galois:
            u = u.frobenius()
        return StabilizerElement(u.a, u.b, self.galois)

    def __pow__(self, n: int) -> "StabilizerElement":
        if n < 0:
            return self.inv() ** (-n)
        result = identity(self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        tail = f", phi^{self.galois}" if self.galois else ""
        return f"Stab({self.a.encode()} + ({self.b.encode()})*S{tail})"


def identity(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    return StabilizerElement(witt.one(precision), witt.zero(precision), 0)


def from_witt(a: WittElement) -> StabilizerElement:
    return StabilizerElement(a, witt.zero(a.precision), 0)


def S_element(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    return StabilizerElement(witt.zero(precision), witt.one(precision), 0)


def omega_element(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    return from_witt(witt.omega(precision))


def s_element(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    """s = -(1 + omega*S)/2, the chosen element of order 3."""
    minus_half = -witt.from_int(2, precision).inv()
    return StabilizerElement(minus_half, minus_half * witt.omega(precision), 0)


def t_element(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    return from_witt(witt.omega(precision) ** 2)


def phi_element(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    return StabilizerElement(witt.one(precision), witt.zero(precision), 1)


def psi_element(precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    """psi = omega * phi."""
    return StabilizerElement(witt.omega(precision), witt.zero(precision), 1)


def central(n: int, precision: int = DEFAULT_PRECISION) -> StabilizerElement:
    return from_witt(witt.from_int(n, precision))


def reduced_det(g: StabilizerElement) -> tuple:
    """Split det(g) in Z_3^x as (torsion in {+1,-1}, principal in 1+3Z).

    g lies in G2^1 exactly when the principal part is 1.
    """
    if not g.is_unit():
        raise NonUnitError("reduced_det needs a unit")
    d = g.det()
    M = g.a.modulus
    torsion = 1 if d % 3 == 1 else -1
    principal = (d * torsion) % M
    return torsion, principal


def is_in_g2_1(g: StabilizerElement) -> bool:
    return reduced_det(g)[1] == 1


def filtration_valuation(g: StabilizerElement):
    """min(v(a-1), v(b)+1/2) as a Fraction, or None past the precision cap."""
    if g.galois != 0:
        raise ValueError("filtration is defined on the Galois-trivial part")
    if not g.is_unit():
        raise NonUnitError("filtration_valuation needs a unit")
    va = (g.a - witt.one(g.precision)).valuation()
    vb = g.b.valuation()
    cands = []
    if va is not None:
        cands.append(Fraction(va))
    if vb is not None:
        cands.append(Fraction(vb) + Fraction(1, 2))
    return min(cands) if cands else None


def to_c3(g: StabilizerElement) -> int:
    """Image in C3 = F9/F3: the w-coordinate of the S-coefficient mod 3.

    Defined on the 3-Sylow part (filtration >= 1/2); the kernel on the
    reduced-determinant-1 part is the subgroup K.
    """
    v = filtration_valuation(g)
    if v is None or v < Fraction(1, 2):
        raise ValueError("to_c3 needs filtration valuation >= 1/2")
    return g.b.c1 % 3


def in_k(g: StabilizerElement) -> bool:
    return is_in_g2_1(g) and to_c3(g) == 0


def subgroup_closure(generators, cap: int = CLOSURE_CAP) -> list:
    """Full element list of the subgroup generated at this precision."""
    gens = list(generators)
    if not gens:
        return [identity()]
    for g in gens:
        if not g.is_unit():
            raise NonUnitError("subgroup generators must be units")
    seen = {}
    frontier = [identity(gens[0].precision)]
    seen[frontier[0].key()] = frontier[0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                k = y.key()
                if k not in seen:
                    if len(seen) >= cap:
                        raise ClosureBoundExceeded(f"closure exceeded {cap} elements")
                    seen[k] = y
                    nxt.append(y)
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


@lru_cache(maxsize=None)
def named_subgroup(name: str, precision: int = DEFAULT_PRECISION) -> tuple:
    """Element tuple of one of the named finite subgroups of G2."""
    s, t, psi = s_element(precision), t_element(precision), psi_element(precision)
    om, phi = omega_element(precision), phi_element(precision)
    gens = {
        "C3": [s],
        "C6": [s, t * t],
        "C12": [s, psi],
        "G12": [s, t],
        "G24": [s, t, psi],
        "Q8": [t, psi],
        "SD16": [om, phi],
    }
    if name not in gens:
        raise KeyError(f"unknown subgroup {name!r}")
    return tuple(subgroup_closure(gens[name]))


SUBGROUP_ORDERS = {"C3": 3, "C6": 6, "C12": 12, "G12": 12, "G24": 24, "Q8": 8, "SD16": 16}


def g2_relations_check(precision: int = DEFAULT_PRECISION) -> dict:
    """Exact verification of the defining relations at this precision."""
    one = identity(precision)
    S = S_element(precision)
    om = omega_element(precision)
    s = s_element(precision)
    t = t_element(precision)
    psi = psi_element(precision)
    phi = phi_element(precision)
    s2 = om * s * om.inv()
    checks = {
        "S^2 = 3": S * S == central(3, precision),
        "s^3 = 1": s**3 == one,
        "omega^8 = 1": om**8 == one,
        "omega^4 = -1": om**4 == central(-1, precision),
        "omega^2 s omega^6 = s^2": t * s * om**6 == s * s,
        "psi s = s psi": psi * s == s * psi,
        "t psi = psi t^3": t * psi == psi * t**3,
        "psi^2 = t^2": psi * psi == t * t,
        "phi(s) = s2^2": s.frobenius() == s2 * s2,
    }
    return checks


def normalize_to_s21(g: StabilizerElement) -> StabilizerElement:
    """Scale by a central unit in 1+3Z so the principal determinant is 1.

    Requires g in the 3-Sylow part (a = 1 mod 3); the result lies in
    S2^1 and has the same image in every quotient of S2^1 by a central
    correction.
    """
    _, principal = reduced_det(g)
    u = witt.sqrt_principal(principal, g.precision)
    scale = witt.from_int(pow(u, -1, g.a.modulus), g.precision)
    out = StabilizerElement(g.a * scale, g.b * scale, g.galois)
    assert reduced_det(out)[1] == 1
    return out
