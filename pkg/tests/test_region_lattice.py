import math
import random
from fractions import Fraction

import pytest

from chowla.region_lattice import (
    ConvexRegion,
    FULL_LATTICE,
    LatticeCoset,
    NonCoprimeIndexError,
    RowForm,
    count_points,
    enumerate_coprime_points,
    intersect_cosets,
    parse_coset,
    parse_region,
)


def _random_coset(rng, span=5, shift=6) -> LatticeCoset:
    while True:
        rows = (
            (rng.randint(-span, span), rng.randint(-span, span)),
            (rng.randint(-span, span), rng.randint(-span, span)),
        )
        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if det:
            return LatticeCoset(
                basis=rows, offset=(rng.randint(-shift, shift), rng.randint(-shift, shift))
            )


def test_row_form_from_basis_membership():
    rng = random.Random(5)
    for _ in range(120):
        L = _random_coset(rng)
        rf = L.row_form()
        assert rf.index == L.index
        # spanned points and only those
        ox, oy = L.offset
        (u1, u2), (v1, v2) = L.columns()
        for _ in range(25):
            s, t = rng.randint(-4, 4), rng.randint(-4, 4)
            x, y = ox + s * u1 + t * v1, oy + s * u2 + t * v2
            assert rf.contains(x, y)
            assert L.contains(x, y)
        for _ in range(25):
            x, y = rng.randint(-40, 40), rng.randint(-40, 40)
            assert rf.contains(x, y) == L.contains(x, y)


def test_row_form_index_counts_residues():
    rng = random.Random(17)
    for _ in range(60):
        L = _random_coset(rng)
        rf = L.row_form()
        period_y = rf.c
        period_x = rf.a
        hits = sum(
            rf.contains(x, y) for y in range(period_y) for x in range(period_x)
        )
        # exactly one x-hit per admissible row in one fundamental box
        assert hits * rf.index == period_x * period_y


def test_row_solution_matches_contains():
    rng = random.Random(23)
    for _ in range(80):
        L = _random_coset(rng)
        rf = L.row_form()
        for y in range(-12, 13):
            sol = rf.row_solution(y)
            for x in range(-20, 21):
                inside = rf.contains(x, y)
                if sol is None:
                    assert not inside
                else:
                    res, mod = sol
                    assert inside == ((x - res) % mod == 0)


def test_row_form_intersection():
    rng = random.Random(31)
    for _ in range(150):
        L1 = _random_coset(rng, span=3, shift=4)
        L2 = _random_coset(rng, span=3, shift=4)
        r1, r2 = L1.row_form(), L2.row_form()
        inter = r1.intersect(r2)
        # window covering a full fundamental domain of both lattices
        wy = math.lcm(r1.c, r2.c)
        wx = math.lcm(r1.a, r2.a)
        for y in range(wy):
            for x in range(wx):
                both = r1.contains(x, y) and r2.contains(x, y)
                if inter is None:
                    assert not both
                else:
                    assert both == inter.contains(x, y)
        if inter is not None:
            # the canonical anchor must genuinely lie in both cosets
            assert r1.contains(inter.x0, inter.y0)
            assert r2.contains(inter.x0, inter.y0)


def test_intersect_cosets_coprime_index():
    L1 = LatticeCoset(basis=((5, 1), (0, 1)), offset=(0, 0))  # x = y mod 5
    L2 = LatticeCoset(basis=((3, 0), (0, 1)), offset=(1, 0))  # x = 1 mod 3
    L = intersect_cosets(L1, L2)
    assert L.index == 15
    for x in range(-20, 21):
        for y in range(-20, 21):
            assert L.contains(x, y) == (L1.contains(x, y) and L2.contains(x, y))
    with pytest.raises(NonCoprimeIndexError):
        intersect_cosets(L1, LatticeCoset(basis=((5, 0), (0, 1))))


def test_full_lattice():
    assert FULL_LATTICE.index == 1
    assert FULL_LATTICE.contains(3, -7)


def test_box_region():
    S = ConvexRegion.box(-2, 3, -1, 2)
    for x in range(-5, 6):
        for y in range(-5, 6):
            assert S.contains(x, y) == (-2 <= x <= 3 and -1 <= y <= 2)
    assert S.y_range() == (-1, 2)
    assert S.x_range() == (-2, 3)
    assert S.area() == 15.0
    with pytest.raises(ValueError):
        ConvexRegion.box(1, 0, 0, 1)


def test_disc_region_exact_rows():
    S = ConvexRegion.disc(Fraction(1, 2), 0, Fraction(7, 2))
    for y in range(-5, 6):
        ext = S.row_extent(y)
        want = [
            x
            for x in range(-6, 8)
            if (Fraction(x) - Fraction(1, 2)) ** 2 + y * y <= Fraction(49, 4)
        ]
        if ext is None:
            assert want == []
        else:
            lo, hi = ext
            assert want == list(range(lo, hi + 1))
    with pytest.raises(ValueError):
        ConvexRegion.disc(0, 0, 0)


def test_polygon_region():
    # a box written as a polygon must trace the same point set
    B = ConvexRegion.box(-3, 2, -2, 4)
    P = ConvexRegion.polygon([(-3, -2), (2, -2), (2, 4), (-3, 4)])
    for x in range(-5, 6):
        for y in range(-5, 7):
            assert B.contains(x, y) == P.contains(x, y)
        # whole rows agree too
    for y in range(-5, 7):
        assert B.row_extent(y) == P.row_extent(y)
    # clockwise input is normalized, not rejected
    Q = ConvexRegion.polygon([(-3, -2), (-3, 4), (2, 4), (2, -2)])
    assert count_points(Q) == count_points(P)
    with pytest.raises(ValueError):
        ConvexRegion.polygon([(0, 0), (1, 1), (2, 2)])  # collinear
    with pytest.raises(ValueError):
        ConvexRegion.polygon([(0, 0), (1, 0)])


def test_triangle_rows_match_brute():
    T = ConvexRegion.polygon([(0, 0), (7, 1), (2, 6)])
    for y in range(-2, 8):
        ext = T.row_extent(y)
        want = [x for x in range(-3, 11) if T.contains(x, y)]
        if ext is None:
            assert want == []
        else:
            lo, hi = ext
            assert want == list(range(lo, hi + 1))


def test_scale_membership():
    S = ConvexRegion.polygon([(-1, -1), (1, 0), (0, 1)])
    N = 9
    big = S.scale(N)
    for x in range(-12, 13):
        for y in range(-12, 13):
            assert big.contains(x, y) == S.contains(Fraction(x, N), Fraction(y, N))
    with pytest.raises(ValueError):
        S.scale(0)


def test_count_points_vs_brute():
    rng = random.Random(41)
    regions = [
        ConvexRegion.box(-7, 5, -4, 6),
        ConvexRegion.disc(0, 1, Fraction(13, 2)),
        ConvexRegion.polygon([(-5, -3), (6, -2), (4, 5), (-6, 4)]),
    ]
    for S in regions:
        for L in (None, _random_coset(rng), _random_coset(rng)):
            brute = 0
            for x in range(-15, 16):
                for y in range(-15, 16):
                    if S.contains(x, y) and (L is None or L.contains(x, y)):
                        brute += 1
            assert count_points(S, L) == brute


def test_enumerate_coprime_points():
    S = ConvexRegion.box(-6, 6, -6, 6)
    got = set(enumerate_coprime_points(S))
    want = {
        (x, y)
        for x in range(-6, 7)
        for y in range(-6, 7)
        if math.gcd(x, y) == 1
    }
    assert got == want
    assert (0, 0) not in got
    assert (0, 1) in got and (-1, 0) in got
    L = LatticeCoset(basis=((2, 0), (0, 1)), offset=(1, 0))  # odd x
    got_l = set(enumerate_coprime_points(S, L))
    assert got_l == {p for p in want if p[0] % 2 == 1}


def test_parse_region_round_trip():
    S = parse_region("box:-1,1,-1,1")
    assert S.kind == "box" and S.data == (-1, 1, -1, 1)
    D = parse_region("disc:0,0,5/2")
    assert D.kind == "disc" and D.data[2] == Fraction(5, 2)
    P = parse_region("poly:0,0;4,0;0,4")
    assert P.kind == "poly"
    with pytest.raises(ValueError):
        parse_region("box:1,2,3")
    with pytest.raises(ValueError):
        parse_region("blob:1,2,3,4")


def test_parse_coset():
    L = parse_coset("coset:5,0,1,1;0,0")
    assert L.index == 5
    assert L.contains(3, 3) and not L.contains(3, 1)  # x = y mod 5
    L2 = parse_coset("coset:2,0,1,2;1,0")
    assert L2.index == 4
    with pytest.raises(ValueError):
        parse_coset("coset:1,2,3;0,0")
    with pytest.raises(ValueError):
        parse_coset("box:-1,1,-1,1")
