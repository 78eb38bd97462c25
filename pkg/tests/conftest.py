import pytest
from hypothesis import strategies as st

from ban.circulant import CirculantSpec
from ban.formula import And, Const, Not, Or, Var, Xor
from ban.network import Network


@pytest.fixture
def copy_xnor():
    return Network.from_formulas(["x1", "(!x0 & !x1) | (x0 & x1)"])


@pytest.fixture
def xor_xnor():
    return Network.from_formulas(["x0 ^ x1", "!(x0 ^ x1)"])


def formulas(n, max_leaves=12):
    leaves = st.one_of(
        st.builds(Var, st.integers(0, n - 1)),
        st.builds(Const, st.integers(0, 1)),
    )

    def extend(children):
        nary = st.lists(children, min_size=2, max_size=3).map(tuple)
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, nary),
            st.builds(Or, nary),
            st.builds(Xor, nary),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def networks(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.integers(0, (1 << (1 << n)) - 1), min_size=n, max_size=n))
    return Network.from_bits(n, bits)


@st.composite
def circulant_specs(draw, min_n=2, max_n=16):
    n = draw(st.integers(min_n, max_n))
    rest = draw(st.integers(0, (1 << (n - 1)) - 1).filter(lambda r: r != 0))
    return CirculantSpec(n, rest | (1 << (n - 1)))
