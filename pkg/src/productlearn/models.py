"""Benchmark machine generators and file ingestion.

Two sources of machines are supported besides programmatic construction:

* a native line-oriented Moore format (``parse_moore`` / ``serialize_moore``),
* the KISS2 FSM exchange format used by the logic-synthesis benchmark
  circuits (``parse_kiss2``), with a Mealy-to-Moore conversion that attaches
  an output decomposition (``circuit_to_moore``).

The register-machine family provides scalable synthetic benchmarks: ``n``
bits on a circular tape with a read/write head that can move left or right
(wrapping at the ends) or flip the bit under it.  The output is the full bit
vector, so it decomposes naturally bit by bit.
"""

import itertools
from collections import deque
from dataclasses import dataclass

from .errors import (
    ConflictingTransitionError,
    MissingTransitionError,
    OutputArityError,
    ParseError,
    ResourceLimitError,
    UndeclaredSymbolError,
    UnknownResetStateError,
    WidthMismatchError,
)
from .machine import MooreMachine, OutputDecomposition

__all__ = [
    "REGISTER_INPUTS",
    "make_register_machine",
    "make_register_component",
    "parse_moore",
    "serialize_moore",
    "CircuitModel",
    "parse_kiss2",
    "circuit_to_moore",
]

REGISTER_INPUTS = ("L", "R", "F")
REGISTER_BIT_CAP = 20


def make_register_machine(n):
    """The n-bit register machine: state space is (bit vector, head position).

    ``L``/``R`` move the head (wrapping around), ``F`` flips the bit under
    the head; the output is the bit vector.  The machine has ``n * 2**n``
    states, all reachable and pairwise distinguishable.
    """
    if n < 1:
        raise ValueError("need at least one bit")
    if n > REGISTER_BIT_CAP:
        raise ResourceLimitError(f"register machines are capped at {REGISTER_BIT_CAP} bits")
    bit_vectors = list(itertools.product((0, 1), repeat=n))
    index = {}
    names = []
    for b, bits in enumerate(bit_vectors):
        for k in range(1, n + 1):
            index[(bits, k)] = len(names)
            names.append("".join(map(str, bits)) + f"@{k}")
    transitions = []
    outputs = []
    for bits in bit_vectors:
        for k in range(1, n + 1):
            left = (bits, k - 1 if k > 1 else n)
            right = (bits, k + 1 if k < n else 1)
            flipped = tuple(1 - b if j == k - 1 else b for j, b in enumerate(bits))
            transitions.append((index[left], index[right], index[(flipped, k)]))
            outputs.append(bits)
    return MooreMachine(REGISTER_INPUTS, transitions, outputs, index[(bit_vectors[0], 1)], names)


def make_register_component(n, l):
    """The single-bit view of the register machine for bit `l` (1-based).

    States are (bit value, head position); ``F`` changes the bit only when
    the head sits on `l`.  Minimal with ``2 * n`` states; the product of the
    components for l = 1..n behaves exactly like the full machine.
    """
    if n < 1:
        raise ValueError("need at least one bit")
    if n > REGISTER_BIT_CAP:
        raise ResourceLimitError(f"register machines are capped at {REGISTER_BIT_CAP} bits")
    if not 1 <= l <= n:
        raise ValueError(f"bit index {l} out of range 1..{n}")
    index = {(b, k): b * n + (k - 1) for b in (0, 1) for k in range(1, n + 1)}
    transitions = []
    outputs = []
    names = []
    for b in (0, 1):
        for k in range(1, n + 1):
            left = (b, k - 1 if k > 1 else n)
            right = (b, k + 1 if k < n else 1)
            flip = (1 - b if k == l else b, k)
            transitions.append((index[left], index[right], index[flip]))
            outputs.append((b,))
            names.append(f"{b}@{k}")
    return MooreMachine(REGISTER_INPUTS, transitions, outputs, index[(0, 1)], names)


# ---------------------------------------------------------------------------
# Native Moore format
#
#   machine     = { line } ;
#   line        = blank | comment | header | output | transition ;
#   comment     = "#" , { any } ;
#   header      = inputs | outputs | initial ;
#   inputs      = "inputs" , symbol , { symbol } ;
#   outputs     = "outputs" , integer ;            (* tuple arity *)
#   initial     = "initial" , name ;
#   output      = name , ":" , atom , { atom } ;   (* exactly arity atoms *)
#   transition  = name , symbol , "->" , name ;
#
# Tokens are whitespace-separated.  States are declared implicitly and
# ordered by first appearance; the serializer emits sorted input alphabets.
# ---------------------------------------------------------------------------


def parse_moore(text):
    """Parse the native Moore format into a machine."""
    inputs = None
    arity = None
    initial = None
    outputs = {}
    transitions = {}
    state_order = []

    def remember(state):
        if state not in transitions:
            transitions[state] = {}
            state_order.append(state)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        head = tokens[0]
        if head == "inputs":
            if len(tokens) < 2:
                raise ParseError("'inputs' needs at least one symbol", lineno, raw.find("inputs") + 1)
            if inputs is not None:
                raise ParseError("duplicate 'inputs' line", lineno)
            inputs = tuple(tokens[1:])
        elif head == "outputs":
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ParseError("'outputs' needs a positive tuple arity", lineno)
            arity = int(tokens[1])
        elif head == "initial":
            if len(tokens) != 2:
                raise ParseError("'initial' needs exactly one state name", lineno)
            initial = tokens[1]
        elif ":" in tokens:
            sep = tokens.index(":")
            if sep != 1:
                raise ParseError("output line must be 'state : atoms...'", lineno, raw.find(":") + 1)
            state, atoms = tokens[0], tokens[2:]
            if not atoms:
                raise ParseError("output line has no atoms", lineno)
            if arity is not None and len(atoms) != arity:
                raise OutputArityError(
                    f"line {lineno}: output of {state!r} has {len(atoms)} atoms, declared arity is {arity}"
                )
            remember(state)
            if state in outputs and outputs[state] != tuple(atoms):
                raise ParseError(f"conflicting output for state {state!r}", lineno)
            outputs[state] = tuple(atoms)
        elif "->" in tokens:
            if len(tokens) != 4 or tokens[2] != "->":
                raise ParseError("transition line must be 'state input -> state'", lineno, raw.find("->") + 1)
            src, sym, _, dst = tokens
            remember(src)
            remember(dst)
            if sym in transitions[src] and transitions[src][sym] != dst:
                raise ParseError(f"conflicting transition for ({src!r}, {sym!r})", lineno)
            transitions[src][sym] = dst
        else:
            raise ParseError(f"unrecognized line {raw.strip()!r}", lineno, len(raw) - len(raw.lstrip()) + 1)

    if inputs is None:
        raise ParseError("missing 'inputs' declaration")
    if arity is None:
        raise ParseError("missing 'outputs' declaration")
    if initial is None:
        raise ParseError("missing 'initial' declaration")
    if initial not in transitions:
        raise UndeclaredSymbolError(f"initial state {initial!r} never appears")
    for state in state_order:
        if state not in outputs:
            raise MissingTransitionError(f"state {state!r} has no output line")
        if len(outputs[state]) != arity:
            raise OutputArityError(
                f"output of {state!r} has {len(outputs[state])} atoms, declared arity is {arity}"
            )
        for sym in transitions[state]:
            if sym not in inputs:
                raise UndeclaredSymbolError(f"input {sym!r} of state {state!r} is not declared")
        for sym in inputs:
            if sym not in transitions[state]:
                raise MissingTransitionError(f"missing transition for ({state!r}, {sym!r})")
    index = {s: q for q, s in enumerate(state_order)}
    rows = [
        tuple(index[transitions[s][a]] for a in inputs)
        for s in state_order
    ]
    return MooreMachine(inputs, rows, [outputs[s] for s in state_order], index[initial], state_order)


def _token_safe(text):
    return bool(text) and not any(c.isspace() for c in text) and text not in (":", "->")


def serialize_moore(machine):
    """Render a machine in the native format (sorted alphabets, state order).

    State names that would not survive whitespace tokenization (or collide)
    are replaced wholesale by positional names ``s0..sN``.
    """
    for a in machine.inputs:
        if not _token_safe(str(a)):
            raise ValueError(f"input symbol {a!r} cannot be serialized")
    for o in machine.state_outputs:
        for atom in o:
            if not _token_safe(str(atom)):
                raise ValueError(f"output atom {atom!r} cannot be serialized")
    inputs = tuple(sorted(machine.inputs, key=str))
    names = [machine.state_name(q) for q in range(machine.n_states)]
    if len(set(names)) != len(names) or not all(_token_safe(s) for s in names):
        names = [f"s{q}" for q in range(machine.n_states)]
    lines = [
        "inputs " + " ".join(str(a) for a in inputs),
        f"outputs {machine.output_arity}",
        f"initial {names[machine.initial]}",
    ]
    for q in range(machine.n_states):
        lines.append(f"{names[q]} : " + " ".join(str(x) for x in machine.state_outputs[q]))
        for a in inputs:
            lines.append(f"{names[q]} {a} -> {names[machine.step(q, a)]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# KISS2 circuits
# ---------------------------------------------------------------------------


@dataclass
class CircuitModel:
    """A state machine with bit-vector inputs/outputs on the transitions.

    Transitions are (input pattern, current state, next state, output bits);
    patterns may contain ``-`` wildcards and are expanded on demand, never
    eagerly.  The model is validated to be deterministic: overlapping
    patterns from the same state must agree on target and output.
    """

    input_width: int
    output_width: int
    reset_state: str
    transitions: list
    states: list

    def expanded_count(self):
        return sum(2 ** pattern.count("-") for pattern, _, _, _ in self.transitions)

    def lookup(self, state, vector):
        """The (next state, output bits) for a concrete input vector."""
        for pattern, cur, nxt, out in self.transitions:
            if cur != state:
                continue
            if all(p in ("-", v) for p, v in zip(pattern, vector)):
                return nxt, out
        raise MissingTransitionError(
            f"state {state!r} has no transition for input {vector!r}"
        )

    def input_alphabet(self, width_cap=12):
        """All concrete input vectors appearing after wildcard expansion."""
        if self.input_width > width_cap:
            raise ResourceLimitError(
                f"refusing to expand input patterns of width {self.input_width} "
                f"(cap {width_cap})"
            )
        vectors = set()
        for pattern, _, _, _ in self.transitions:
            slots = [("0", "1") if c == "-" else (c,) for c in pattern]
            for combo in itertools.product(*slots):
                vectors.add("".join(combo))
        return sorted(vectors)


def _patterns_overlap(p1, p2):
    return all(a == "-" or b == "-" or a == b for a, b in zip(p1, p2))


def parse_kiss2(text):
    """Parse a KISS2-style FSM description."""
    input_width = None
    output_width = None
    reset_state = None
    declared_p = None
    declared_s = None
    transitions = []
    states = []
    seen_states = set()

    def remember(state):
        if state not in seen_states:
            seen_states.add(state)
            states.append(state)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(".end"):
            break
        if line.startswith("."):
            tokens = line.split()
            directive = tokens[0]
            if directive in (".i", ".o", ".p", ".s"):
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise ParseError(f"directive {directive} needs one integer", lineno)
                value = int(tokens[1])
                if directive == ".i":
                    input_width = value
                elif directive == ".o":
                    output_width = value
                elif directive == ".p":
                    declared_p = value
                else:
                    declared_s = value
            elif directive == ".r":
                if len(tokens) != 2:
                    raise ParseError(".r needs one state name", lineno)
                reset_state = tokens[1]
            else:
                raise ParseError(f"unknown directive {directive!r}", lineno)
            continue
        tokens = line.split()
        if len(tokens) != 4:
            raise ParseError(f"transition line needs 4 fields, got {len(tokens)}", lineno)
        pattern, cur, nxt, out = tokens
        if input_width is None or output_width is None:
            raise ParseError("transition before .i/.o headers", lineno)
        if len(pattern) != input_width:
            raise WidthMismatchError(
                f"line {lineno}: input pattern {pattern!r} has width {len(pattern)}, declared {input_width}"
            )
        if any(c not in "01-" for c in pattern):
            raise ParseError(f"bad input pattern {pattern!r}", lineno)
        if len(out) != output_width:
            raise WidthMismatchError(
                f"line {lineno}: output {out!r} has width {len(out)}, declared {output_width}"
            )
        if any(c not in "01" for c in out):
            raise ParseError(f"bad output bits {out!r}", lineno)
        remember(cur)
        remember(nxt)
        transitions.append((pattern, cur, nxt, out))

    if input_width is None or output_width is None:
        raise ParseError("missing .i or .o header")
    if not transitions:
        raise ParseError("no transitions")
    # .p and .s are treated as advisory; benchmark files are not always exact.
    del declared_p, declared_s
    if reset_state is None:
        reset_state = transitions[0][1]
    if reset_state not in seen_states:
        raise UnknownResetStateError(f"reset state {reset_state!r} never appears")

    by_state = {}
    for t in transitions:
        by_state.setdefault(t[1], []).append(t)
    for group in by_state.values():
        for a in range(len(group)):
            p1, _, n1, o1 = group[a]
            for b in range(a + 1, len(group)):
                p2, _, n2, o2 = group[b]
                if (n1, o1) != (n2, o2) and _patterns_overlap(p1, p2):
                    raise ConflictingTransitionError(
                        f"state {group[a][1]!r}: patterns {p1!r} and {p2!r} overlap "
                        f"but disagree on target or output"
                    )
    return CircuitModel(input_width, output_width, reset_state, transitions, states)


def circuit_to_moore(circuit, grouping=None, initial_marker="x", input_width_cap=12):
    """Convert a transition-labelled circuit into a Moore machine.

    Moore states are (circuit state, last emitted output) pairs reachable
    from the reset state paired with a placeholder output; the placeholder
    is `initial_marker` repeated to each group's width, so it can never
    collide with real bit strings.  `grouping` partitions the output bit
    indices (default: one group per bit); each group becomes one atom of the
    output tuple, and the returned decomposition has one component per group.

    Outputs on words of length >= 1 depend only on the circuit, not on the
    placeholder.
    """
    if grouping is None:
        grouping = [(j,) for j in range(circuit.output_width)]
    bit_partition = OutputDecomposition(grouping)
    if bit_partition.width != circuit.output_width:
        raise WidthMismatchError(
            f"grouping covers {bit_partition.width} bits, "
            f"circuit outputs have width {circuit.output_width}"
        )
    groups = bit_partition.groups
    alphabet = circuit.input_alphabet(width_cap=input_width_cap)

    def atoms(bits):
        return tuple("".join(bits[j] for j in g) for g in groups)

    placeholder = tuple(initial_marker * len(g) for g in groups)
    start = (circuit.reset_state, placeholder)
    index = {start: 0}
    order = [start]
    rows = []
    pending = deque([start])
    while pending:
        state, _ = pending.popleft()
        row = []
        for vector in alphabet:
            nxt, out = circuit.lookup(state, vector)
            target = (nxt, atoms(out))
            t = index.get(target)
            if t is None:
                t = len(order)
                index[target] = t
                order.append(target)
                pending.append(target)
            row.append(t)
        rows.append(row)
    outputs = [o for _, o in order]
    names = [f"{s}/{''.join(o)}" for s, o in order]
    machine = MooreMachine(alphabet, rows, outputs, 0, names)
    decomposition = OutputDecomposition.bitwise(len(groups))
    return machine, decomposition
