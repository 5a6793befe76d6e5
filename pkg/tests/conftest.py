import random

import pytest

from productlearn import MooreMachine, reachable


def random_machine(rng, max_states=8, inputs=("a", "b"), arity=2, n_atoms=2):
    """A random reachable machine with `arity`-wide outputs."""
    n = rng.randint(1, max_states)
    transitions = [[rng.randrange(n) for _ in inputs] for _ in range(n)]
    outputs = [tuple(rng.randrange(n_atoms) for _ in range(arity)) for _ in range(n)]
    return reachable(MooreMachine(inputs, transitions, outputs, rng.randrange(n)))


def random_word(rng, inputs, max_len=12):
    return tuple(rng.choice(inputs) for _ in range(rng.randrange(max_len + 1)))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
