import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdt.cyclotomic import CyclotomicElement
from pdt.errors import UnsupportedInputError
from pdt.gauss import GaussQ

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
orders = st.sampled_from([3, 4, 6])


def as_complex(x: CyclotomicElement) -> complex:
    return complex(x.a) + complex(x.b) * cmath.exp(2j * cmath.pi / x.l)


@given(orders, fractions, fractions, fractions, fractions)
def test_cyclotomic_arithmetic_matches_complex_numbers(l, a, b, c, d):
    x, y = CyclotomicElement(l, a, b), CyclotomicElement(l, c, d)
    assert abs(as_complex(x * y) - as_complex(x) * as_complex(y)) < 1e-9
    assert abs(as_complex(x + y) - (as_complex(x) + as_complex(y))) < 1e-9
    assert abs(as_complex(x.conjugate()) - as_complex(x).conjugate()) < 1e-9
    assert x.norm() == (x * x.conjugate()).a and (x * x.conjugate()).b == 0
    if x != 0:
        assert x * x.inverse() == 1


@pytest.mark.parametrize("l", [3, 4, 6])
def test_zeta_has_order_l(l):
    z = CyclotomicElement.zeta(l)
    p = CyclotomicElement(l, 1)
    for k in range(1, l + 1):
        p = p * z
        assert (p == 1) == (k == l)


def test_rational_orders_fold():
    assert CyclotomicElement(2, 3, 1) == CyclotomicElement(2, 2)
    assert CyclotomicElement.zeta(1) == 1


def test_unsupported_order():
    with pytest.raises(UnsupportedInputError):
        CyclotomicElement(5, 1)
    with pytest.raises(UnsupportedInputError):
        CyclotomicElement(3, 1) + CyclotomicElement(4, 1)


@given(fractions, fractions, fractions, fractions)
def test_gauss_rationals_are_exact_complex_numbers(a, b, c, d):
    x, y = GaussQ(a, b), GaussQ(c, d)
    zx, zy = complex(float(a), float(b)), complex(float(c), float(d))
    assert abs(complex(x * y) - zx * zy) < 1e-9
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.abs2() == (x * x.conjugate()).re
    if y != 0:
        assert (x / y) * y == x
    assert x - x == 0


def test_gauss_mixed_scalars():
    assert GaussQ(1, 2) * 3 == GaussQ(3, 6)
    assert Fraction(1, 2) + GaussQ(0, 1) == GaussQ(Fraction(1, 2), 1)
    assert GaussQ(0, 1) * GaussQ(0, 1) == -1
