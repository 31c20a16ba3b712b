"""Convex regions, lattice cosets, and exact integer point enumeration.

Regions are boxes, discs, and convex polygons with rational parameters, so
membership and row extents are exact; no floating point decides a boundary.
A lattice coset is offset + (integer span of two basis columns).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .cubic_form import parse_rational


class NonCoprimeIndexError(ValueError):
    """intersect_cosets only handles cosets of coprime index."""


def _crt(r1: int, m1: int, r2: int, m2: int) -> Optional[tuple[int, int]]:
    """Solve x = r1 (m1), x = r2 (m2); returns (residue, lcm) or None."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    l = m1 // g * m2
    k = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 != g else 0
    return ((r1 + m1 * k) % l, l)


@dataclass(frozen=True)
class RowForm:
    """Canonical row description of a lattice coset.

    The set is {(x, y) : y = y0 (mod c), x = x0 + b*t (mod a)} with
    t = (y - y0) / c.  Index in Z^2 is a * c.
    """

    c: int
    y0: int
    a: int
    b: int
    x0: int

    @property
    def index(self) -> int:
        return self.a * self.c

    @staticmethod
    def from_basis(u: tuple[int, int], v: tuple[int, int], offset=(0, 0)) -> "RowForm":
        u1, u2 = u
        v1, v2 = v
        det = u1 * v2 - v1 * u2
        if det == 0:
            raise ValueError("basis vectors are linearly dependent")
        c = math.gcd(u2, v2)
        if c == 0:
            raise ValueError("degenerate basis")  # unreachable with det != 0
        # w spans the y-direction of the lattice; z generates lattice & {y=0}
        g, alpha, beta = _extgcd(u2, v2)
        assert g == c
        w1 = alpha * u1 + beta * v1
        a = abs(det) // c
        b = w1 % a
        ox, oy = offset
        y0 = oy % c
        t_shift = (oy - y0) // c
        x0 = (ox - t_shift * w1) % a
        return RowForm(c=c, y0=y0, a=a, b=b, x0=x0)

    def contains(self, x: int, y: int) -> bool:
        if (y - self.y0) % self.c:
            return False
        t = (y - self.y0) // self.c
        return (x - self.x0 - self.b * t) % self.a == 0

    def row_solution(self, y: int) -> Optional[tuple[int, int]]:
        """For row y: the x-residue class (residue, modulus), or None."""
        if (y - self.y0) % self.c:
            return None
        t = (y - self.y0) // self.c
        return ((self.x0 + self.b * t) % self.a, self.a)

    def basis_offset(self):
        return ((self.a, self.b), (0, self.c)), (self.x0, self.y0)

    def intersect(self, other: "RowForm") -> Optional["RowForm"]:
        """Exact intersection; None when the cosets are disjoint."""
        ycrt = _crt(self.y0, self.c, other.y0, other.c)
        if ycrt is None:
            return None
        yy0, lcm_y = ycrt
        # x-congruences along y = yy0 + lcm_y * T:
        #   x = P1 + Q1*T (mod a1),  x = P2 + Q2*T (mod a2)
        p1 = self.x0 + self.b * ((yy0 - self.y0) // self.c)
        q1 = self.b * (lcm_y // self.c)
        p2 = other.x0 + other.b * ((yy0 - other.y0) // other.c)
        q2 = other.b * (lcm_y // other.c)
        g = math.gcd(self.a, other.a)
        aa = (q1 - q2) % g if g > 1 else 0
        bb = (p2 - p1) % g if g > 1 else 0
        d = math.gcd(aa, g)
        if bb % d:
            return None
        step = g // d
        t0 = (bb // d * pow(aa // d, -1, step)) % step if step > 1 else 0
        lcm_a = self.a // g * other.a

        def xval(tv: int) -> int:
            # CRT of the two x-congruences at parameter T = tv
            r = _crt((p1 + q1 * tv) % self.a, self.a, (p2 + q2 * tv) % other.a, other.a)
            assert r is not None
            return r[0]

        x_at_0 = xval(t0)
        x_at_1 = xval(t0 + step)
        new_c = lcm_y * step
        return RowForm(
            c=new_c,
            y0=(yy0 + lcm_y * t0) % new_c,
            a=lcm_a,
            b=(x_at_1 - x_at_0) % lcm_a,
            x0=x_at_0 % lcm_a,
        )


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class LatticeCoset:
    """offset + integer span of the two basis matrix columns."""

    basis: tuple[tuple[int, int], tuple[int, int]]  # rows of the matrix
    offset: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("coset basis is singular")

    @property
    def det(self) -> int:
        (b11, b12), (b21, b22) = self.basis
        return b11 * b22 - b12 * b21

    @property
    def index(self) -> int:
        return abs(self.det)

    def columns(self) -> tuple[tuple[int, int], tuple[int, int]]:
        (b11, b12), (b21, b22) = self.basis
        return (b11, b21), (b12, b22)

    def contains(self, x: int, y: int) -> bool:
        (b11, b12), (b21, b22) = self.basis
        vx, vy = x - self.offset[0], y - self.offset[1]
        det = self.det
        return (b22 * vx - b12 * vy) % det == 0 and (b11 * vy - b21 * vx) % det == 0

    def row_form(self) -> RowForm:
        u, v = self.columns()
        return RowForm.from_basis(u, v, self.offset)


FULL_LATTICE = LatticeCoset(basis=((1, 0), (0, 1)))


def coset_index(L: LatticeCoset) -> int:
    return L.index


def intersect_cosets(L1: LatticeCoset, L2: LatticeCoset) -> LatticeCoset:
    """Intersection of two cosets of coprime index (always nonempty then)."""
    if math.gcd(L1.index, L2.index) != 1:
        raise NonCoprimeIndexError(
            f"indices {L1.index} and {L2.index} share a factor"
        )
    rf = L1.row_form().intersect(L2.row_form())
    assert rf is not None  # coprime indices cannot be disjoint
    basis, offset = rf.basis_offset()
    return LatticeCoset(basis=basis, offset=offset)


@dataclass(frozen=True)
class ConvexRegion:
    """Closed convex region: 'box', 'disc', or convex 'poly', rational data."""

    kind: str
    data: tuple

    @staticmethod
    def box(x0, x1, y0, y1) -> "ConvexRegion":
        x0, x1, y0, y1 = map(Fraction, (x0, x1, y0, y1))
        if x0 > x1 or y0 > y1:
            raise ValueError("box corners out of order")
        return ConvexRegion("box", (x0, x1, y0, y1))

    @staticmethod
    def disc(cx, cy, r) -> "ConvexRegion":
        cx, cy, r = map(Fraction, (cx, cy, r))
        if r <= 0:
            raise ValueError("disc radius must be positive")
        return ConvexRegion("disc", (cx, cy, r))

    @staticmethod
    def polygon(vertices) -> "ConvexRegion":
        verts = tuple((Fraction(x), Fraction(y)) for x, y in vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least three vertices")
        crosses = []
        n = len(verts)
        for i in range(n):
            px, py = verts[i]
            qx, qy = verts[(i + 1) % n]
            rx, ry = verts[(i + 2) % n]
            crosses.append((qx - px) * (ry - py) - (qy - py) * (rx - px))
        if all(cr > 0 for cr in crosses):
            pass
        elif all(cr < 0 for cr in crosses):
            verts = tuple(reversed(verts))  # normalize to counterclockwise
        else:
            raise ValueError("vertices are not in strictly convex position")
        return ConvexRegion("poly", verts)

    def scale(self, t) -> "ConvexRegion":
        """Dilate all coordinates by t > 0 about the origin."""
        t = Fraction(t)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        if self.kind == "box":
            x0, x1, y0, y1 = self.data
            return ConvexRegion("box", (x0 * t, x1 * t, y0 * t, y1 * t))
        if self.kind == "disc":
            cx, cy, r = self.data
            return ConvexRegion("disc", (cx * t, cy * t, r * t))
        return ConvexRegion("poly", tuple((x * t, y * t) for x, y in self.data))

    def half_width(self) -> float:
        """Smallest N with the region inside [-N, N]^2."""
        if self.kind == "box":
            x0, x1, y0, y1 = self.data
            m = max(abs(x0), abs(x1), abs(y0), abs(y1))
        elif self.kind == "disc":
            cx, cy, r = self.data
            m = max(abs(cx), abs(cy)) + r
        else:
            m = max(max(abs(x), abs(y)) for x, y in self.data)
        return float(m)

    def area(self) -> float:
        if self.kind == "box":
            x0, x1, y0, y1 = self.data
            return float((x1 - x0) * (y1 - y0))
        if self.kind == "disc":
            return math.pi * float(self.data[2]) ** 2
        verts = self.data
        acc = Fraction(0)
        for i in range(len(verts)):
            x1, y1 = verts[i]
            x2, y2 = verts[(i + 1) % len(verts)]
            acc += x1 * y2 - x2 * y1
        return float(acc) / 2.0

    def y_range(self) -> tuple[int, int]:
        if self.kind == "box":
            lo, hi = self.data[2], self.data[3]
        elif self.kind == "disc":
            cx, cy, r = self.data
            lo, hi = cy - r, cy + r
        else:
            ys = [y for _, y in self.data]
            lo, hi = min(ys), max(ys)
        return math.ceil(lo), math.floor(hi)

    def x_range(self) -> tuple[int, int]:
        if self.kind == "box":
            lo, hi = self.data[0], self.data[1]
        elif self.kind == "disc":
            cx, cy, r = self.data
            lo, hi = cx - r, cx + r
        else:
            xs = [x for x, _ in self.data]
            lo, hi = min(xs), max(xs)
        return math.ceil(lo), math.floor(hi)

    def row_extent(self, y: int) -> Optional[tuple[int, int]]:
        """Integer x-range [xlo, xhi] of the row, or None if empty. Exact."""
        if self.kind == "box":
            x0, x1, y0, y1 = self.data
            if not y0 <= y <= y1:
                return None
            lo, hi = math.ceil(x0), math.floor(x1)
        elif self.kind == "disc":
            cx, cy, r = self.data
            q = _lcm3(cx.denominator, cy.denominator, r.denominator)
            A, B, R = int(cx * q), int(cy * q), int(r * q)
            t = R * R - (q * y - B) ** 2
            if t < 0:
                return None
            s = math.isqrt(t)
            lo = -((s - A) // q)  # ceil((A - s) / q)
            hi = (A + s) // q
        else:
            lo_f: Optional[Fraction] = None
            hi_f: Optional[Fraction] = None
            verts = self.data
            for i in range(len(verts)):
                px, py = verts[i]
                qx, qy = verts[(i + 1) % len(verts)]
                # inside means (qx-px)(y-py) - (qy-py)(x-px) >= 0
                aco = py - qy
                bco = -(qx - px) * (y - py) - (qy - py) * px
                if aco == 0:
                    if bco > 0:
                        return None
                elif aco > 0:
                    cand = Fraction(bco, aco)
                    lo_f = cand if lo_f is None else max(lo_f, cand)
                else:
                    cand = Fraction(bco, aco)
                    hi_f = cand if hi_f is None else min(hi_f, cand)
            lo = math.ceil(lo_f) if lo_f is not None else None
            hi = math.floor(hi_f) if hi_f is not None else None
            if lo is None or hi is None:
                raise ValueError("polygon is unbounded?")  # cannot happen if convex
        if lo > hi:
            return None
        return lo, hi

    def contains(self, x, y) -> bool:
        if self.kind == "box":
            x0, x1, y0, y1 = self.data
            return x0 <= x <= x1 and y0 <= y <= y1
        if self.kind == "disc":
            cx, cy, r = self.data
            return (x - cx) ** 2 + (y - cy) ** 2 <= r * r
        verts = self.data
        for i in range(len(verts)):
            px, py = verts[i]
            qx, qy = verts[(i + 1) % len(verts)]
            if (qx - px) * (y - py) - (qy - py) * (x - px) < 0:
                return False
        return True


def _lcm3(a: int, b: int, c: int) -> int:
    return math.lcm(math.lcm(a, b), c)


def area(S: ConvexRegion) -> float:
    return S.area()


def count_points(S: ConvexRegion, L: Optional[LatticeCoset] = None) -> int:
    """Exact number of integer points of the coset inside the closed region."""
    rf = L.row_form() if L is not None else None
    ylo, yhi = S.y_range()
    total = 0
    for y in range(ylo, yhi + 1):
        ext = S.row_extent(y)
        if ext is None:
            continue
        xlo, xhi = ext
        if rf is None:
            total += xhi - xlo + 1
            continue
        sol = rf.row_solution(y)
        if sol is None:
            continue
        res, mod = sol
        first = xlo + (res - xlo) % mod
        if first <= xhi:
            total += (xhi - first) // mod + 1
    return total


def enumerate_coprime_points(
    S: ConvexRegion, L: Optional[LatticeCoset] = None
) -> Iterator[tuple[int, int]]:
    """Stream the points of S n L with gcd(x, y) = 1, row by row.

    gcd(0, k) = |k|, so (0, +-1) and (+-1, 0) qualify and (0, 0) never does.
    """
    rf = L.row_form() if L is not None else None
    ylo, yhi = S.y_range()
    for y in range(ylo, yhi + 1):
        ext = S.row_extent(y)
        if ext is None:
            continue
        xlo, xhi = ext
        if rf is None:
            xs = range(xlo, xhi + 1)
        else:
            sol = rf.row_solution(y)
            if sol is None:
                continue
            res, mod = sol
            xs = range(xlo + (res - xlo) % mod, xhi + 1, mod)
        for x in xs:
            if math.gcd(x, y) == 1:
                yield (x, y)


def parse_region(text: str) -> ConvexRegion:
    """Region literals: box:x0,x1,y0,y1  disc:cx,cy,r  poly:x1,y1;x2,y2;..."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind == "box":
        vals = [parse_rational(t) for t in rest.split(",")]
        if len(vals) != 4:
            raise ValueError(f"box wants four numbers: {text!r}")
        return ConvexRegion.box(*vals)
    if kind == "disc":
        vals = [parse_rational(t) for t in rest.split(",")]
        if len(vals) != 3:
            raise ValueError(f"disc wants three numbers: {text!r}")
        return ConvexRegion.disc(*vals)
    if kind == "poly":
        pts = []
        for chunk in rest.split(";"):
            xy = chunk.split(",")
            if len(xy) != 2:
                raise ValueError(f"bad polygon vertex in {text!r}")
            pts.append((parse_rational(xy[0]), parse_rational(xy[1])))
        return ConvexRegion.polygon(pts)
    raise ValueError(f"unknown region kind {kind!r}")


def parse_coset(text: str) -> LatticeCoset:
    """Coset literal: coset:b11,b21,b12,b22;ox,oy (basis columns, then offset)."""
    kind, _, rest = text.partition(":")
    if kind.strip() != "coset":
        raise ValueError(f"unknown coset literal {text!r}")
    mat, _, off = rest.partition(";")
    ents = [int(t) for t in mat.split(",")]
    if len(ents) != 4:
        raise ValueError(f"coset wants four basis entries: {text!r}")
    b11, b21, b12, b22 = ents
    if off.strip():
        ox, oy = (int(t) for t in off.split(","))
    else:
        ox, oy = 0, 0
    return LatticeCoset(basis=((b11, b12), (b21, b22)), offset=(ox, oy))
