"""Property-based checks over randomly drawn machines and words."""

from hypothesis import given, settings
from hypothesis import strategies as st

from productlearn import (
    MooreMachine,
    OutputDecomposition,
    equivalent,
    minimize,
    product,
    project,
    reachable,
    run,
)

INPUTS = ("a", "b")


@st.composite
def machines(draw, max_states=5, arity=2):
    n = draw(st.integers(1, max_states))
    transitions = [
        [draw(st.integers(0, n - 1)) for _ in INPUTS] for _ in range(n)
    ]
    outputs = [
        tuple(draw(st.integers(0, 1)) for _ in range(arity)) for _ in range(n)
    ]
    return MooreMachine(INPUTS, transitions, outputs, draw(st.integers(0, n - 1)))


words = st.lists(st.sampled_from(INPUTS), max_size=10).map(tuple)


@given(machines(arity=1), machines(arity=1), st.lists(words, max_size=20))
@settings(max_examples=150, deadline=None)
def test_product_runs_are_paired_runs(m1, m2, ws):
    p = product(m1, m2)
    for w in ws:
        assert run(p, w) == run(m1, w) + run(m2, w)


@given(machines(arity=3), words)
@settings(max_examples=150, deadline=None)
def test_projection_commutes_with_run(m, w):
    d = OutputDecomposition.bitwise(3)
    for i in range(3):
        assert run(project(m, d, i), w) == d.project(i, run(m, w))


@given(machines())
@settings(max_examples=150, deadline=None)
def test_minimize_is_a_sound_fixed_point(m):
    small = minimize(m)
    assert small.n_states <= m.n_states
    assert minimize(small).n_states == small.n_states
    assert equivalent(small, m) is None


@given(machines(), words)
@settings(max_examples=150, deadline=None)
def test_reachable_preserves_behaviour(m, w):
    assert run(reachable(m), w) == run(m, w)


@given(machines())
@settings(max_examples=100, deadline=None)
def test_size_bounds_under_decomposition(m):
    d = OutputDecomposition.bitwise(2)
    whole = minimize(m).n_states
    parts = [minimize(project(m, d, i)).n_states for i in range(2)]
    assert all(p <= whole for p in parts)
    assert whole <= parts[0] * parts[1]
