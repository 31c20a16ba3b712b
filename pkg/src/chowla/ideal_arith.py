"""Exact ideal arithmetic in the cubic field attached to a monic form.

The field is presented through the order Z[theta] with theta a root of the
monic minimal polynomial; the point map sends (x, y) to the principal ideal
generated by x - y*theta, whose norm is exactly the form value.  Primes whose
square divides the discriminant might divide the index of Z[theta] in the
maximal order; a Dedekind-criterion test shrinks that set, and the survivors
are refused by every operation that would need the maximal order.

Everything here is factorization-level: an ideal is its sorted list of
(prime ideal, exponent) pairs, and all functions (norm, tau, omega, Mobius,
radical, divisor streams, S-part splits) read off that list exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Iterator, Optional

from .cubic_form import BinaryCubicForm, ReducibleFormError, is_irreducible
from .polymod import factor_cubic_mod_p, hensel_lift_root, poly_gcd, poly_reduce
from .primes import factor_int, is_prime, primes_up_to
from .region_lattice import RowForm

_DIVISOR_CAP = 1 << 16
_SAMPLE_BUDGET = 4_000_000


class IndexBoundError(ValueError):
    """Operation touched a prime that may divide the index of Z[theta]."""


# ------------------------------------------------------------------ field


class CubicField:
    """Cubic field data: minimal polynomial, discriminant, risky primes."""

    __slots__ = ("form", "min_poly", "disc", "index_bound", "sign", "_factor_cache")

    def __init__(self, form: BinaryCubicForm, disc: int, index_bound: frozenset[int]):
        self.form = form
        # t^3 + b t^2 + c t + d, stored lowest degree first
        self.min_poly = [form.d, form.c, form.b, 1]
        self.disc = disc
        self.index_bound = index_bound
        self.sign = 1  # f(x, y) = N(x - y*theta) identically for a monic form
        self._factor_cache: dict[int, tuple["PrimeIdeal", ...]] = {}

    def value(self, x: int, y: int) -> int:
        return self.form(x, y)

    def __repr__(self) -> str:
        return f"CubicField(t^3 + {self.form.b}t^2 + {self.form.c}t + {self.form.d})"


def build_field(g: BinaryCubicForm) -> CubicField:
    """Field of the monic irreducible form g, with exact discriminant.

    The index-risk set starts as the primes whose square divides the
    discriminant and is shrunk by the Dedekind criterion per prime.
    """
    if not g.is_monic():
        raise ValueError("field construction needs a monic form")
    if not is_irreducible(g):
        raise ReducibleFormError("field construction needs an irreducible form")
    disc = g.discriminant()
    min_poly = [g.d, g.c, g.b, 1]
    risky = []
    for p, e in factor_int(abs(disc)):
        if e >= 2 and _dedekind_index_divisible(min_poly, p):
            risky.append(p)
    field = CubicField(g, disc, frozenset(risky))
    return field


def _zpoly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _dedekind_index_divisible(min_poly: list[int], p: int) -> bool:
    """Dedekind's criterion: does p divide [O_K : Z[theta]]?"""
    factors = factor_cubic_mod_p(min_poly, p)
    g_star = [1]
    h_star = [1]
    for coeffs, mult in factors:
        g_star = _zpoly_mul(g_star, coeffs)
        for _ in range(mult - 1):
            h_star = _zpoly_mul(h_star, coeffs)
    gh = _zpoly_mul(g_star, h_star)
    diff = [x - y for x, y in zip(gh, min_poly + [0] * (len(gh) - len(min_poly)))]
    if any(c % p for c in diff):
        raise ArithmeticError("factor product does not reduce to the minimal polynomial")
    t_bar = poly_reduce([c // p for c in diff], p)
    common = poly_gcd(poly_reduce(g_star, p), poly_reduce(h_star, p), p)
    common = poly_gcd(common, t_bar, p)
    return len(common) - 1 > 0


# ------------------------------------------------------------------ primes


@dataclass(frozen=True, order=False)
class PrimeIdeal:
    """A prime of the field: degree-1 primes carry their root mod p as tag;
    the (unique) higher-degree prime above p carries tag -1."""

    p: int
    residue_degree: int
    ramification: int
    root_tag: int

    @property
    def norm(self) -> int:
        return self.p**self.residue_degree

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.p, self.root_tag)

    def __lt__(self, other: "PrimeIdeal") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        tag = "*" if self.root_tag < 0 else str(self.root_tag)
        return f"P({self.p};f{self.residue_degree}e{self.ramification};t{tag})"


def factor_prime(K: CubicField, p: int) -> list[PrimeIdeal]:
    """Prime ideals above p, from the factorization of the minimal polynomial."""
    cached = K._factor_cache.get(p)
    if cached is not None:
        return list(cached)
    if p in K.index_bound:
        raise IndexBoundError(f"unsupported: {p} may divide the index")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    out = []
    for coeffs, mult in factor_cubic_mod_p(K.min_poly, p):
        deg = len(coeffs) - 1
        if deg == 1:
            root = (-coeffs[0]) % p
            out.append(PrimeIdeal(p, 1, mult, root))
        else:
            out.append(PrimeIdeal(p, deg, mult, -1))
    if sum(q.residue_degree * q.ramification for q in out) != 3:
        raise ArithmeticError(f"splitting of {p} does not sum to the field degree")
    out.sort()
    K._factor_cache[p] = tuple(out)
    return out


def warm_up(K: CubicField, Z: int) -> None:
    """Populate the factorization cache for all usable primes up to Z."""
    for p in primes_up_to(Z):
        p = int(p)
        if p not in K.index_bound:
            factor_prime(K, p)


def prime_ideals_up_to(K: CubicField, B: int) -> list[PrimeIdeal]:
    """All prime ideals of norm <= B above usable primes, sorted."""
    out = []
    for p in primes_up_to(B):
        p = int(p)
        if p in K.index_bound:
            continue
        for q in factor_prime(K, p):
            if q.norm <= B:
                out.append(q)
    out.sort()
    return out


# ------------------------------------------------------------------ ideals


@dataclass(frozen=True)
class Ideal:
    """Product of prime ideals, canonically sorted; empty tuple = unit ideal."""

    factors: tuple[tuple[PrimeIdeal, int], ...] = ()

    @staticmethod
    def unit() -> "Ideal":
        return Ideal(())

    @staticmethod
    def from_factors(pairs: Iterable[tuple[PrimeIdeal, int]]) -> "Ideal":
        acc: dict[PrimeIdeal, int] = {}
        for q, e in pairs:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                acc[q] = acc.get(q, 0) + e
        items = sorted(acc.items(), key=lambda t: t[0].sort_key)
        return Ideal(tuple(items))

    @staticmethod
    def prime(q: PrimeIdeal, e: int = 1) -> "Ideal":
        return Ideal.from_factors([(q, e)])

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def valuation(self, q: PrimeIdeal) -> int:
        for qq, e in self.factors:
            if qq == q:
                return e
        return 0

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal.from_factors(list(self.factors) + list(other.factors))

    def divide(self, other: "Ideal") -> "Ideal":
        acc = {q: e for q, e in self.factors}
        for q, e in other.factors:
            acc[q] = acc.get(q, 0) - e
            if acc[q] < 0:
                raise ValueError("not a divisor")
        return Ideal.from_factors(acc.items())

    def divides(self, other: "Ideal") -> bool:
        return all(other.valuation(q) >= e for q, e in self.factors)

    def coprime(self, other: "Ideal") -> bool:
        mine = {q for q, _ in self.factors}
        return not any(q in mine for q, _ in other.factors)

    def __repr__(self) -> str:
        if not self.factors:
            return "(1)"
        return "*".join(f"{q}^{e}" if e > 1 else f"{q}" for q, e in self.factors)


def norm(a: Ideal) -> int:
    acc = 1
    for q, e in a.factors:
        acc *= q.norm**e
    return acc


def tau(a: Ideal) -> int:
    acc = 1
    for _, e in a.factors:
        acc *= e + 1
    return acc


def omega(a: Ideal) -> int:
    return len(a.factors)


def big_omega(a: Ideal) -> int:
    return sum(e for _, e in a.factors)


def mu_ideal(a: Ideal) -> int:
    if any(e > 1 for _, e in a.factors):
        return 0
    return -1 if len(a.factors) % 2 else 1


def rad(a: Ideal) -> Ideal:
    return Ideal.from_factors((q, 1) for q, _ in a.factors)


def split_S(a: Ideal, S: Iterable[PrimeIdeal]) -> tuple[Ideal, Ideal]:
    """(part supported on S, part outside S); the product is a."""
    sset = set(S)
    inside = [(q, e) for q, e in a.factors if q in sset]
    outside = [(q, e) for q, e in a.factors if q not in sset]
    return Ideal.from_factors(inside), Ideal.from_factors(outside)


def divisors(a: Ideal, cap: int = _DIVISOR_CAP) -> Iterator[Ideal]:
    """All tau(a) divisors, each exactly once."""
    if tau(a) > cap:
        raise ValueError(f"divisor count {tau(a)} exceeds the cap {cap}")
    primes = [q for q, _ in a.factors]
    ranges = [range(e + 1) for _, e in a.factors]
    for exps in itertools.product(*ranges):
        yield Ideal.from_factors(zip(primes, exps))


def gcd_ideal(a: Ideal, b: Ideal) -> Ideal:
    return Ideal.from_factors((q, min(e, b.valuation(q))) for q, e in a.factors)


# ------------------------------------------------------------------ points


def ideal_from_point(
    K: CubicField, x: int, y: int, factors: Optional[Iterable[tuple[int, int]]] = None
) -> Ideal:
    """The ideal generated by x - y*theta, for coprime (x, y).

    For each prime p dividing the (nonzero) form value, p cannot divide y
    (monic model), so exactly one degree-1 prime above p — the one whose
    root tag is x/y mod p — divides the point, with the full valuation.
    A precomputed factorization of |f(x, y)| may be passed to skip the
    factoring step (it is still checked through the norm identity).
    """
    if math.gcd(x, y) != 1:
        raise ValueError("point must be primitive (coprime coordinates)")
    v = K.value(x, y)
    if v == 0:
        raise ValueError("form vanishes at the point")
    pairs = []
    for p, e in factors if factors is not None else factor_int(abs(v)):
        if p in K.index_bound:
            raise IndexBoundError(f"unsupported: value divisible by index-risk prime {p}")
        if y % p == 0:
            raise ArithmeticError("monic model cannot have p | y at a struck point")
        r = (x * pow(y, -1, p)) % p
        match = next(
            (q for q in factor_prime(K, p) if q.residue_degree == 1 and q.root_tag == r),
            None,
        )
        if match is None:
            raise ArithmeticError(f"no degree-1 prime above {p} matches the point")
        pairs.append((match, e))
    ideal = Ideal.from_factors(pairs)
    if norm(ideal) != abs(v):
        raise ArithmeticError("point ideal norm does not reproduce the value")
    return ideal


def valuation_at_point(K: CubicField, q: PrimeIdeal, x: int, y: int) -> float:
    """v at the prime q of the element x - y*theta; (0, 0) maps to infinity."""
    if x == 0 and y == 0:
        return math.inf
    p = q.p
    if p in K.index_bound:
        raise IndexBoundError(f"unsupported: valuation at index-risk prime {p}")
    s = 0
    while x % p == 0 and y % p == 0:
        x //= p
        y //= p
        s += 1
    val = s * q.ramification
    if q.residue_degree == 1 and y % p != 0:
        r = (x * pow(y, -1, p)) % p
        if r == q.root_tag:
            v = abs(K.value(x, y))
            while v % p == 0:
                v //= p
                val += 1
    return val


def point_lattice(K: CubicField, q: PrimeIdeal, v: int) -> RowForm:
    """The lattice of (x, y) with v at q of x - y*theta at least v.

    Degree-1 unramified primes give a single congruence x = r*y modulo p^v
    with r the Hensel-lifted root; higher-degree primes give p^ceil(v/e)
    times the full lattice; ramified degree-1 primes are sampled over a
    fundamental domain and the lattice is rebuilt from the members.
    """
    if v < 0:
        raise ValueError("negative order")
    if v == 0:
        return RowForm(1, 0, 1, 0, 0)
    p = q.p
    if q.residue_degree == 1 and q.ramification == 1:
        r = hensel_lift_root(K.min_poly, p, q.root_tag, v)
        m = p**v
        return RowForm(1, 0, m, r % m, 0)
    if q.residue_degree >= 2:
        m = p ** _ceil_div(v, q.ramification)
        return RowForm(m, 0, m, 0, 0)
    # ramified degree-1: sample the fundamental domain
    k = _ceil_div(v, q.ramification)
    mod = p**k
    if mod * mod > _SAMPLE_BUDGET:
        raise ValueError("sampling domain too large for a ramified-prime lattice")
    members = [
        (x, y)
        for y in range(mod)
        for x in range(mod)
        if valuation_at_point(K, q, x, y) >= v
    ]
    return _lattice_from_members(members, mod)


def ideal_lattice(K: CubicField, d: Ideal) -> RowForm:
    """Intersection of the prime-power point lattices of d (a sublattice)."""
    acc = RowForm(1, 0, 1, 0, 0)
    for q, e in d.factors:
        nxt = acc.intersect(point_lattice(K, q, e))
        if nxt is None:
            raise ArithmeticError("point lattices of one ideal cannot be disjoint")
        acc = nxt
    return acc


def _lattice_from_members(members: list[tuple[int, int]], mod: int) -> RowForm:
    """Sublattice of Z^2 generated by the members together with mod*Z^2."""
    gens = members + [(mod, 0), (0, mod)]
    # vector with minimal positive y-component via extended gcds
    wx, wy = 0, mod
    for gx, gy in gens:
        if gy == 0:
            continue
        g, s, t = _extgcd(wy, gy)
        wx, wy = s * wx + t * gx, g
    c = wy if wy else mod
    a = 0
    for gx, gy in gens:
        rx = gx - (gy // c) * wx if gy % c == 0 else None
        if rx is None:
            raise ArithmeticError("member outside the generated row structure")
        a = math.gcd(a, rx)
    a = math.gcd(a, mod)
    if a == 0:
        a = mod
    form = RowForm(c, 0, a, wx % a, 0)
    if a * c * len(members) != mod * mod:
        raise ArithmeticError("rebuilt lattice index disagrees with the member count")
    return form


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    return old_r, old_s, old_t


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def compute_D0(K: CubicField) -> int:
    """Product of the primes dividing the discriminant (index risks included).

    Outside these primes, any prime ideal dividing a primitive point value
    is unramified of degree 1, so its norm is a rational prime.
    """
    acc = 1
    for p, _ in factor_int(abs(K.disc)):
        acc *= p
    return acc
