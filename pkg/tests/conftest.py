from fractions import Fraction

from hypothesis import strategies as st

from starq import SymbolPoly


@st.composite
def exponents(draw, n, max_total):
    v = [0] * n
    for _ in range(draw(st.integers(0, max_total))):
        v[draw(st.integers(0, n - 1))] += 1
    return tuple(v)


coefficients = st.builds(
    Fraction, st.integers(-6, 6).filter(bool), st.sampled_from([1, 1, 2, 3, 5])
)


def symbols(n=1, max_x=3, max_xi=3, max_nu=0, max_terms=3):
    key = st.tuples(exponents(n, max_x), exponents(n, max_xi), st.integers(0, max_nu))
    return st.dictionaries(key, coefficients, max_size=max_terms).map(lambda d: SymbolPoly(n, d))
