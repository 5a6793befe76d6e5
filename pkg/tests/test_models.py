import pytest

from productlearn import (
    ConflictingTransitionError,
    MissingTransitionError,
    MooreMachine,
    OutputArityError,
    ParseError,
    ResourceLimitError,
    UndeclaredSymbolError,
    UnknownResetStateError,
    WidthMismatchError,
    circuit_to_moore,
    equivalent,
    make_register_component,
    make_register_machine,
    minimize,
    parse_kiss2,
    parse_moore,
    product_machines,
    reachable,
    run,
    serialize_moore,
)
from conftest import random_machine, random_word

TOY_KISS = """\
.i 1
.o 1
.p 1
.s 1
.r s0
- s0 s0 0
.end
"""

FOUR_STATE_KISS = """\
.i 2
.o 2
.p 8
.s 2
.r ready
00 ready ready 00
01 ready busy  01
1- ready ready 10
00 busy  ready 11
01 busy  busy  01
1- busy  busy  10
"""


class TestRegisterMachines:
    def test_one_bit_machine(self):
        m = make_register_machine(1)
        assert m.n_states == 2
        assert run(m, "F") == (1,)
        assert run(m, "FF") == (0,)
        assert run(m, "LLRR") == (0,)

    def test_sizes(self):
        for n, expected in [(2, 8), (3, 24), (4, 64), (5, 160)]:
            assert make_register_machine(n).n_states == expected

    def test_machines_are_minimal(self):
        for n in range(1, 6):
            m = make_register_machine(n)
            assert minimize(m).n_states == m.n_states

    def test_component_matches_full_machine_for_one_bit(self):
        assert (
            equivalent(make_register_component(1, 1), make_register_machine(1)) is None
        )

    def test_component_product_equivalence(self):
        for n in range(1, 6):
            comps = [make_register_component(n, l) for l in range(1, n + 1)]
            assert equivalent(product_machines(comps), make_register_machine(n)) is None

    def test_component_is_minimal_2n(self):
        assert minimize(make_register_component(5, 2)).n_states == 10

    def test_bit_cap(self):
        with pytest.raises(ResourceLimitError):
            make_register_machine(21)
        with pytest.raises(ValueError):
            make_register_component(3, 4)


class TestMooreFormat:
    def test_minimal_file(self):
        text = "inputs a\noutputs 1\ninitial s\ns : 0\ns a -> s\n"
        m = parse_moore(text)
        assert m.n_states == 1
        assert run(m, "aaa") == ("0",)

    def test_round_trip_is_identity_on_normalized_files(self, rng):
        for _ in range(100):
            m = random_machine(rng, n_atoms=3)
            text = serialize_moore(m)
            again = serialize_moore(parse_moore(text))
            assert text == again

    def test_parse_preserves_behaviour(self, rng):
        for _ in range(20):
            m = random_machine(rng)
            stringy = MooreMachine(
                [str(a) for a in m.inputs],
                m.transitions,
                [tuple(str(x) for x in o) for o in m.state_outputs],
                m.initial,
                m.state_names,
            )
            parsed = parse_moore(serialize_moore(m))
            assert equivalent(parsed, stringy) is None

    def test_missing_transition_is_named(self):
        text = "inputs a b\noutputs 1\ninitial s\ns : 0\ns a -> s\n"
        with pytest.raises(MissingTransitionError, match="'s'.*'b'"):
            parse_moore(text)

    def test_undeclared_symbol(self):
        text = "inputs a\noutputs 1\ninitial s\ns : 0\ns a -> s\ns q -> s\n"
        with pytest.raises(UndeclaredSymbolError):
            parse_moore(text)

    def test_output_arity_enforced(self):
        text = "inputs a\noutputs 2\ninitial s\ns : 0\ns a -> s\n"
        with pytest.raises(OutputArityError):
            parse_moore(text)

    def test_syntax_error_carries_line(self):
        text = "inputs a\noutputs 1\ninitial s\nwhat is this\n"
        with pytest.raises(ParseError) as exc:
            parse_moore(text)
        assert exc.value.line == 4

    def test_missing_headers(self):
        with pytest.raises(ParseError):
            parse_moore("outputs 1\ninitial s\ns : 0\n")

    def test_comments_and_blanks_ignored(self):
        text = "# hello\n\ninputs a\noutputs 1\ninitial s\ns : 0  # output\ns a -> s\n"
        assert parse_moore(text).n_states == 1


class TestKiss2:
    def test_toy_file(self):
        c = parse_kiss2(TOY_KISS)
        assert c.input_width == 1
        assert c.output_width == 1
        assert c.reset_state == "s0"
        assert c.expanded_count() == 2
        assert c.lookup("s0", "0") == ("s0", "0")
        assert c.lookup("s0", "1") == ("s0", "0")

    def test_width_mismatch(self):
        bad = TOY_KISS.replace("- s0 s0 0", "-- s0 s0 0")
        with pytest.raises(WidthMismatchError):
            parse_kiss2(bad)
        bad = TOY_KISS.replace("- s0 s0 0", "- s0 s0 01")
        with pytest.raises(WidthMismatchError):
            parse_kiss2(bad)

    def test_conflicting_transitions(self):
        bad = TOY_KISS.replace("- s0 s0 0\n", "- s0 s0 0\n1 s0 s0 1\n")
        with pytest.raises(ConflictingTransitionError):
            parse_kiss2(bad)

    def test_redundant_overlap_is_fine(self):
        ok = TOY_KISS.replace("- s0 s0 0\n", "- s0 s0 0\n1 s0 s0 0\n")
        assert parse_kiss2(ok).expanded_count() == 3

    def test_unknown_reset_state(self):
        bad = TOY_KISS.replace(".r s0", ".r nowhere")
        with pytest.raises(UnknownResetStateError):
            parse_kiss2(bad)

    def test_reset_defaults_to_first_source(self):
        c = parse_kiss2(TOY_KISS.replace(".r s0\n", ""))
        assert c.reset_state == "s0"

    def test_missing_transition_surfaces_on_lookup(self):
        c = parse_kiss2(FOUR_STATE_KISS)
        assert c.lookup("busy", "11") == ("busy", "10")  # wildcard hit
        c2 = parse_kiss2(FOUR_STATE_KISS.replace("00 busy  ready 11\n", ""))
        with pytest.raises(MissingTransitionError):
            c2.lookup("busy", "00")


class TestCircuitConversion:
    def test_constant_circuit_collapses(self):
        m, d = circuit_to_moore(parse_kiss2(TOY_KISS))
        # initial placeholder state plus the single real (state, output) pair
        assert m.n_states == 2
        assert d.arity == 1
        assert run(m, ()) == ("x",)
        assert run(m, ("0",)) == ("0",)

    def test_grouping_controls_arity(self):
        kiss = """.i 1\n.o 4\n.r a\n- a a 0110\n"""
        c = parse_kiss2(kiss)
        m1, d1 = circuit_to_moore(c)
        assert d1.arity == 4 and m1.output_arity == 4
        m2, d2 = circuit_to_moore(c, [(0, 1), (2, 3)])
        assert d2.arity == 2 and m2.output_arity == 2
        assert run(m2, "00") == ("01", "10")

    def test_against_enumerated_state_output_product(self):
        # oracle: materialize every (state, output) pair, then trim
        c = parse_kiss2(FOUR_STATE_KISS)
        alphabet = c.input_alphabet()
        outs = sorted({t[3] for t in c.transitions})
        pairs = [(s, o) for s in c.states for o in ["xx"] + outs]
        index = {p: i for i, p in enumerate(pairs)}
        rows = []
        for s, _ in pairs:
            rows.append(
                tuple(
                    index[(c.lookup(s, v)[0], c.lookup(s, v)[1])] for v in alphabet
                )
            )
        outputs = [(o[0], o[1]) for _, o in pairs]
        oracle = reachable(
            MooreMachine(alphabet, rows, outputs, index[(c.reset_state, "xx")])
        )
        converted, _ = circuit_to_moore(c)
        assert converted.n_states == oracle.n_states
        assert equivalent(converted, oracle) is None

    def test_placeholder_never_matters_after_first_step(self, rng):
        c = parse_kiss2(FOUR_STATE_KISS)
        m1, _ = circuit_to_moore(c, initial_marker="x")
        m2, _ = circuit_to_moore(c, initial_marker="?")
        for _ in range(300):
            w = random_word(rng, m1.inputs, 8)
            if w:
                assert run(m1, w) == run(m2, w)

    def test_determinism(self):
        c = parse_kiss2(FOUR_STATE_KISS)
        m1, _ = circuit_to_moore(c)
        m2, _ = circuit_to_moore(c)
        assert m1 == m2

    def test_wide_inputs_are_refused(self):
        header = ".i 13\n.o 1\n.r s\n"
        line = "-" * 13 + " s s 0\n"
        c = parse_kiss2(header + line)
        with pytest.raises(ResourceLimitError):
            circuit_to_moore(c)

    def test_bad_grouping(self):
        c = parse_kiss2(FOUR_STATE_KISS)
        with pytest.raises(Exception):
            circuit_to_moore(c, [(0,)])
