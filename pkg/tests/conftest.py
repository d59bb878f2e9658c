import pytest

from mcmbetti.rings import GradedRing
from mcmbetti.specio import parse_ring_spec

E4_TEXT = (
    "p=32003; vars=x0,x1,x2,x3; "
    "ideal= x0^2+x1^2+x2^2+x3^2, x0^2+2*x1^2+3*x2^2+4*x3^2"
)
E3_TEXT = "p=32003; vars=x,y,z; ideal= x^3+y^3+z^3"


def series_coeffs(num, den, n):
    """Coefficients of num(t)/den(t) up to t^n; num/den are coeff lists."""
    out = []
    acc = list(num) + [0] * (n + 1 - len(num))
    for k in range(n + 1):
        c = acc[k] // den[0]
        out.append(c)
        for i, d in enumerate(den):
            if k + i <= n:
                acc[k + i] -= c * d
    return out


@pytest.fixture(scope="session")
def e4():
    return GradedRing(parse_ring_spec(E4_TEXT))


@pytest.fixture(scope="session")
def e3():
    return GradedRing(parse_ring_spec(E3_TEXT))
