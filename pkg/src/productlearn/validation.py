"""Input-validation helpers shared by the algebra, learners and estimators."""

from .errors import AlphabetMismatchError, DecompositionError, InputSymbolError


def check_word(word, input_index):
    """Normalize `word` to a tuple of symbols, all drawn from the alphabet.

    `input_index` is a mapping symbol -> position (as kept by MooreMachine).
    Raises InputSymbolError naming the first offending symbol and where it sits.
    """
    w = tuple(word)
    for pos, sym in enumerate(w):
        if sym not in input_index:
            raise InputSymbolError(sym, pos)
    return w


def check_same_inputs(m1, m2):
    """Require two machines to share the same ordered input alphabet."""
    if m1.inputs != m2.inputs:
        raise AlphabetMismatchError(
            f"input alphabets differ: {m1.inputs!r} vs {m2.inputs!r}"
        )


def check_comparable_outputs(m1, m2):
    """Require output tuples of equal arity so behaviours can be compared."""
    if m1.output_arity != m2.output_arity:
        raise AlphabetMismatchError(
            f"output arities differ: {m1.output_arity} vs {m2.output_arity}"
        )


def check_decomposition(decomposition, machine):
    """Require a decomposition to cover exactly the machine's output arity."""
    if decomposition.width != machine.output_arity:
        raise DecompositionError(
            f"decomposition covers {decomposition.width} output positions, "
            f"machine outputs have arity {machine.output_arity}"
        )
    alphabets = decomposition.component_alphabets
    if alphabets is not None:
        for o in machine.outputs:
            for i in range(decomposition.arity):
                value = decomposition.project(i, o)
                if value not in alphabets[i]:
                    raise DecompositionError(
                        f"projected value {value!r} of output {o!r} is not in "
                        f"the declared alphabet of component {i}"
                    )
