"""Hypothesis strategies for concepts and role hierarchies."""

from hypothesis import strategies as st

from shoi.concepts import BOTTOM, TOP, All, Atom, Nominal, Not, Role, Some, conj, disj

ATOMS = ("A", "B", "C", "D")
NOMINALS = ("o1", "o2", "o3")
ROLE_NAMES = ("R", "S")

roles = st.builds(Role, st.sampled_from(ROLE_NAMES), st.booleans())
leaves = st.one_of(
    st.sampled_from([Atom(a) for a in ATOMS]),
    st.sampled_from([Nominal(o) for o in NOMINALS]),
    st.sampled_from([TOP, BOTTOM]),
)


def _extend(children):
    return st.one_of(
        st.builds(Not, children),
        st.builds(lambda xs: conj(*xs), st.lists(children, min_size=2, max_size=3)),
        st.builds(lambda xs: disj(*xs), st.lists(children, min_size=2, max_size=3)),
        st.builds(Some, roles, children),
        st.builds(All, roles, children),
    )


def concepts(max_depth: int = 6):
    return st.recursive(leaves, _extend, max_leaves=2 ** max_depth // 4)


def depth(c) -> int:
    kids = c.children()
    return 1 + max((depth(k) for k in kids), default=0)
