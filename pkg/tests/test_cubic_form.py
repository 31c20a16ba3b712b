import random

import pytest

from chowla.cubic_form import (
    BinaryCubicForm,
    ExactRangeError,
    ReducibleFormError,
    ZeroFormError,
    content,
    evaluate,
    is_irreducible,
    monicize,
    parse_form,
    parse_rational,
)
from fractions import Fraction


def test_discriminant_known_values():
    assert BinaryCubicForm(1, 0, 0, 2).discriminant() == -108
    assert BinaryCubicForm(1, -1, 0, 1).discriminant() == -23
    assert BinaryCubicForm(1, 0, 1, 1).discriminant() == -31
    assert BinaryCubicForm(1, 1, -2, 8).discriminant() == -2012


def test_discriminant_detects_repeated_roots():
    # (x - y)^2 (x + 2y) has a repeated linear factor, so discriminant 0
    # expansion: x^3 - 3 x y^2 + 2 y^3
    assert BinaryCubicForm(1, 0, -3, 2).discriminant() == 0


def test_evaluate_matches_polynomial():
    rng = random.Random(7)
    for _ in range(200):
        f = BinaryCubicForm(*(rng.randint(-9, 9) or 1 for _ in range(4)))
        x, y = rng.randint(-30, 30), rng.randint(-30, 30)
        want = f.a * x**3 + f.b * x**2 * y + f.c * x * y**2 + f.d * y**3
        assert f(x, y) == want
        assert evaluate(f, x, y) == want


def test_evaluate_range_guard():
    f = BinaryCubicForm(1, 0, 0, 2)
    with pytest.raises(ExactRangeError):
        evaluate(f, 1 << 45, 0)


def test_zero_form_rejected():
    with pytest.raises(ZeroFormError):
        BinaryCubicForm(0, 0, 0, 0)


def test_content():
    assert content(BinaryCubicForm(2, 4, -6, 8)) == 2
    assert content(BinaryCubicForm(1, 0, 0, 2)) == 1
    assert content(BinaryCubicForm(0, 3, 9, 6)) == 3


def test_irreducibility_flags_linear_factors():
    assert is_irreducible(BinaryCubicForm(1, 0, 0, 2))
    assert is_irreducible(BinaryCubicForm(1, -1, 0, 1))
    assert not is_irreducible(BinaryCubicForm(1, 0, 0, -8))  # x - 2y divides
    assert not is_irreducible(BinaryCubicForm(1, 0, 0, 0))  # y divides
    assert not is_irreducible(BinaryCubicForm(0, 1, 1, 1))  # degree drop: x divides
    # (x + 2y)(x^2 - xy + 3y^2) = x^3 + x^2 y + x y^2 + 6 y^3
    assert not is_irreducible(BinaryCubicForm(1, 1, 1, 6))


def test_irreducibility_vs_root_scan():
    rng = random.Random(11)
    for _ in range(300):
        f = BinaryCubicForm(
            rng.randint(-6, 6) or 1,
            rng.randint(-6, 6),
            rng.randint(-6, 6),
            rng.randint(-6, 6) or 1,
        )
        has_int_line = any(
            f(p, q) == 0
            for p in range(-12, 13)
            for q in range(-12, 13)
            if (p, q) != (0, 0)
        )
        if has_int_line:
            # a rational zero line certainly means reducible
            assert not is_irreducible(f)


def test_monicize_identity():
    rng = random.Random(13)
    checked = 0
    while checked < 50:
        f = BinaryCubicForm(
            rng.randint(1, 5),
            rng.randint(-5, 5),
            rng.randint(-5, 5),
            rng.randint(-5, 5) or 1,
        )
        if content(f) != 1 or not is_irreducible(f):
            continue
        data = monicize(f)
        g = data.model
        assert g.is_monic()
        for _ in range(20):
            x, y = rng.randint(-20, 20), rng.randint(-20, 20)
            assert data.scale * f(x, y) == g(*data.mapped(x, y))
        checked += 1


def test_monicize_rejects_bad_input():
    with pytest.raises(ValueError):
        monicize(BinaryCubicForm(2, 0, 0, 4))  # content 2
    with pytest.raises(ReducibleFormError):
        monicize(BinaryCubicForm(1, 0, 0, -8))


def test_parse_form():
    assert parse_form(" 1, 0 ,0, 2 ") == BinaryCubicForm(1, 0, 0, 2)
    with pytest.raises(ValueError):
        parse_form("1,2,3")
    with pytest.raises(ValueError):
        parse_form("1,2,3,x")


def test_parse_rational():
    assert parse_rational("3") == 3
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational(" -7/3 ") == Fraction(-7, 3)
