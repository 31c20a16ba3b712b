import pytest

from chowla.cubic_form import BinaryCubicForm
from chowla.ideal_arith import build_field


@pytest.fixture(scope="session")
def K2():
    """x^3 + 2y^3: discriminant -108, trivial index bound."""
    return build_field(BinaryCubicForm(1, 0, 0, 2))


@pytest.fixture(scope="session")
def K23():
    """x^3 - x^2 y + y^3: discriminant -23."""
    return build_field(BinaryCubicForm(1, -1, 0, 1))


@pytest.fixture(scope="session")
def K31():
    """x^3 + x y^2 + y^3: discriminant -31."""
    return build_field(BinaryCubicForm(1, 0, 1, 1))
