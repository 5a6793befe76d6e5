"""Moore machines and the algebra used throughout the library.

A machine is a finite deterministic transducer with outputs attached to
states.  States are dense integers ``0 .. n_states-1``; human-readable names,
when available, live in a side table so the transition function can be a flat
array.  The input alphabet is an ordered tuple and every traversal in this
module (BFS, refinement, counterexample search) follows that order, so all
operations are deterministic.

Output values are flat tuples of atomic symbols.  Machines whose outputs
consist of several observables simply carry wider tuples; an
:class:`OutputDecomposition` describes how the positions group into
components.
"""

from collections import deque
from dataclasses import dataclass

from .errors import DecompositionError, ResourceLimitError
from .validation import check_comparable_outputs, check_same_inputs, check_word

__all__ = [
    "MooreMachine",
    "OutputDecomposition",
    "Counterexample",
    "run",
    "product",
    "product_machines",
    "project",
    "reachable",
    "reachable_product",
    "minimize",
    "equivalent",
    "reverse_machine",
]


class MooreMachine:
    """A deterministic finite-state transducer with state outputs.

    Parameters
    ----------
    inputs:
        Ordered, nonempty alphabet of input symbols.
    transitions:
        ``transitions[q][i]`` is the successor of state ``q`` on the
        ``i``-th input symbol.  Must be total.
    state_outputs:
        ``state_outputs[q]`` is the output tuple of state ``q``.  All tuples
        must have the same arity ``k >= 1``.
    initial:
        Index of the initial state.
    state_names:
        Optional external names, parallel to the state indices.

    Instances are immutable by convention: all fields are tuples and no
    method mutates them, so machines are safe to share between threads.
    """

    __slots__ = ("inputs", "transitions", "state_outputs", "initial", "state_names", "_input_index")

    def __init__(self, inputs, transitions, state_outputs, initial, state_names=None):
        inputs = tuple(inputs)
        if not inputs:
            raise ValueError("input alphabet must be nonempty")
        if len(set(inputs)) != len(inputs):
            raise ValueError("input alphabet contains duplicate symbols")
        transitions = tuple(tuple(row) for row in transitions)
        state_outputs = tuple(tuple(o) if isinstance(o, (tuple, list)) else (o,) for o in state_outputs)
        n = len(transitions)
        if len(state_outputs) != n:
            raise ValueError(f"{n} transition rows but {len(state_outputs)} outputs")
        if n == 0:
            raise ValueError("machine must have at least one state")
        for q, row in enumerate(transitions):
            if len(row) != len(inputs):
                raise ValueError(f"state {q} has {len(row)} transitions, expected {len(inputs)}")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError(f"transition of state {q} targets unknown state {t}")
        arity = len(state_outputs[0])
        if arity < 1:
            raise ValueError("output tuples must have arity >= 1")
        for q, o in enumerate(state_outputs):
            if len(o) != arity:
                raise ValueError(f"output of state {q} has arity {len(o)}, expected {arity}")
        if not 0 <= initial < n:
            raise ValueError(f"initial state {initial} out of range")
        if state_names is not None:
            state_names = tuple(str(s) for s in state_names)
            if len(state_names) != n:
                raise ValueError("state_names length does not match state count")
        self.inputs = inputs
        self.transitions = transitions
        self.state_outputs = state_outputs
        self.initial = initial
        self.state_names = state_names
        self._input_index = {a: i for i, a in enumerate(inputs)}

    @classmethod
    def from_maps(cls, inputs, delta, outputs, initial):
        """Build a machine from name-keyed mappings.

        `delta` maps state name -> {symbol -> state name}, `outputs` maps
        state name -> output tuple (bare atoms are wrapped into 1-tuples).
        State indices follow the key order of `outputs`.
        """
        names = list(outputs)
        index = {s: q for q, s in enumerate(names)}
        if initial not in index:
            raise ValueError(f"initial state {initial!r} has no output entry")
        inputs = tuple(inputs)
        rows = []
        for s in names:
            row = []
            moves = delta.get(s, {})
            for a in inputs:
                if a not in moves:
                    raise ValueError(f"no transition for state {s!r} on input {a!r}")
                target = moves[a]
                if target not in index:
                    raise ValueError(f"transition of {s!r} targets unknown state {target!r}")
                row.append(index[target])
            rows.append(row)
        return cls(inputs, rows, [outputs[s] for s in names], index[initial], names)

    @property
    def n_states(self):
        return len(self.transitions)

    @property
    def output_arity(self):
        return len(self.state_outputs[0])

    @property
    def outputs(self):
        """The set of output tuples that actually occur."""
        return frozenset(self.state_outputs)

    def step(self, state, symbol):
        return self.transitions[state][self._input_index[symbol]]

    def state_name(self, q):
        return self.state_names[q] if self.state_names is not None else str(q)

    def __eq__(self, other):
        if not isinstance(other, MooreMachine):
            return NotImplemented
        return (
            self.inputs == other.inputs
            and self.transitions == other.transitions
            and self.state_outputs == other.state_outputs
            and self.initial == other.initial
        )

    def __hash__(self):
        return hash((self.inputs, self.transitions, self.state_outputs, self.initial))

    def __repr__(self):
        return (
            f"MooreMachine({self.n_states} states, inputs={list(self.inputs)!r}, "
            f"output arity {self.output_arity})"
        )


class OutputDecomposition:
    """How the positions of an output tuple group into components.

    ``groups`` is a sequence of disjoint index groups that together cover
    ``0 .. width-1``.  Component ``i`` observes the sub-tuple of atoms at the
    positions in ``groups[i]``.  Components are indexed from 0.
    """

    __slots__ = ("groups", "component_alphabets", "width", "_positions")

    def __init__(self, groups, component_alphabets=None):
        groups = tuple(tuple(int(j) for j in g) for g in groups)
        if not groups:
            raise DecompositionError("decomposition must have at least one group")
        flat = [j for g in groups for j in g]
        if not flat:
            raise DecompositionError("groups must not all be empty")
        if sorted(flat) != list(range(len(flat))):
            raise DecompositionError(
                f"groups {groups!r} do not partition the output positions 0..{max(flat) if flat else 0}"
            )
        if component_alphabets is not None:
            component_alphabets = tuple(frozenset(a) for a in component_alphabets)
            if len(component_alphabets) != len(groups):
                raise DecompositionError("one alphabet per component is required")
        self.groups = groups
        self.component_alphabets = component_alphabets
        self.width = len(flat)
        self._positions = {j: i for i, g in enumerate(groups) for j in g}

    @classmethod
    def bitwise(cls, width):
        """One component per output position."""
        return cls([(j,) for j in range(width)])

    @classmethod
    def whole(cls, width):
        """A single component observing the entire tuple."""
        return cls([tuple(range(width))])

    @classmethod
    def from_group_sizes(cls, sizes):
        """Contiguous groups of the given sizes, left to right."""
        groups, j = [], 0
        for s in sizes:
            groups.append(tuple(range(j, j + s)))
            j += s
        return cls(groups)

    @property
    def arity(self):
        return len(self.groups)

    def project(self, i, output):
        """The sub-tuple of `output` observed by component `i`."""
        return tuple(output[j] for j in self.groups[i])

    def reassemble(self, parts):
        """Inverse of projecting into every component.

        `parts` is one sub-tuple per component; the result places each atom
        back at its original position.
        """
        full = [None] * self.width
        for i, g in enumerate(self.groups):
            part = parts[i]
            for slot, j in enumerate(g):
                full[j] = part[slot]
        return tuple(full)

    @property
    def is_trivial_order(self):
        """True when groups are contiguous and in order, so reassembly is concatenation."""
        flat = [j for g in self.groups for j in g]
        return flat == sorted(flat)

    def __eq__(self, other):
        if not isinstance(other, OutputDecomposition):
            return NotImplemented
        return self.groups == other.groups

    def __hash__(self):
        return hash(self.groups)

    def __repr__(self):
        return f"OutputDecomposition(groups={self.groups!r})"


@dataclass(frozen=True)
class Counterexample:
    """A word on which two behaviours disagree, with both outputs."""

    word: tuple
    expected: tuple
    actual: tuple

    def __post_init__(self):
        if self.expected == self.actual:
            raise ValueError("a counterexample requires expected != actual")


def run(machine, word):
    """The output of `machine` after reading `word` from the initial state."""
    word = check_word(word, machine._input_index)
    q = machine.initial
    transitions = machine.transitions
    index = machine._input_index
    for sym in word:
        q = transitions[q][index[sym]]
    return machine.state_outputs[q]


def product(m1, m2):
    """Synchronous product of two machines over the same ordered alphabet.

    The state set is the full Cartesian product (unreachable combinations are
    kept); output tuples are concatenated left to right.
    """
    check_same_inputs(m1, m2)
    n2 = m2.n_states
    transitions = []
    outputs = []
    for q1 in range(m1.n_states):
        row1 = m1.transitions[q1]
        for q2 in range(m2.n_states):
            row2 = m2.transitions[q2]
            transitions.append(tuple(row1[i] * n2 + row2[i] for i in range(len(m1.inputs))))
            outputs.append(m1.state_outputs[q1] + m2.state_outputs[q2])
    names = None
    if m1.state_names is not None and m2.state_names is not None:
        names = [
            f"({m1.state_names[q1]},{m2.state_names[q2]})"
            for q1 in range(m1.n_states)
            for q2 in range(n2)
        ]
    return MooreMachine(
        m1.inputs, transitions, outputs, m1.initial * n2 + m2.initial, names
    )


def product_machines(machines):
    """Left fold of :func:`product` over a nonempty sequence of machines."""
    machines = list(machines)
    if not machines:
        raise ValueError("need at least one machine")
    result = machines[0]
    for m in machines[1:]:
        result = product(result, m)
    return result


def project(machine, decomposition, i):
    """Component `i` of `machine`: same transition structure, projected outputs."""
    if not 0 <= i < decomposition.arity:
        raise DecompositionError(
            f"component index {i} out of range for arity {decomposition.arity}"
        )
    if decomposition.width != machine.output_arity:
        raise DecompositionError(
            f"decomposition covers {decomposition.width} positions, "
            f"machine outputs have arity {machine.output_arity}"
        )
    outputs = [decomposition.project(i, o) for o in machine.state_outputs]
    return MooreMachine(
        machine.inputs, machine.transitions, outputs, machine.initial, machine.state_names
    )


def reachable(machine):
    """The sub-machine on states reachable from the initial state."""
    order = []
    remap = {}
    queue = deque([machine.initial])
    remap[machine.initial] = 0
    order.append(machine.initial)
    while queue:
        q = queue.popleft()
        for t in machine.transitions[q]:
            if t not in remap:
                remap[t] = len(order)
                order.append(t)
                queue.append(t)
    transitions = [tuple(remap[t] for t in machine.transitions[q]) for q in order]
    outputs = [machine.state_outputs[q] for q in order]
    names = [machine.state_names[q] for q in order] if machine.state_names is not None else None
    return MooreMachine(machine.inputs, transitions, outputs, 0, names)


def reachable_product(machines, decomposition=None, max_states=None):
    """Reachable part of the product of `machines`, built without materializing
    the full Cartesian state set.

    With a `decomposition`, the concatenated component outputs are reassembled
    into the original atom order (a no-op for in-order groupings).
    `max_states` optionally caps exploration.
    """
    machines = list(machines)
    if not machines:
        raise ValueError("need at least one machine")
    first = machines[0]
    for m in machines[1:]:
        check_same_inputs(first, m)
    n_inputs = len(first.inputs)
    assemble = (
        decomposition.reassemble
        if decomposition is not None and not decomposition.is_trivial_order
        else None
    )

    def output_of(combo):
        parts = [m.state_outputs[q] for m, q in zip(machines, combo)]
        if assemble is not None:
            return assemble(parts)
        out = ()
        for p in parts:
            out += p
        return out

    start = tuple(m.initial for m in machines)
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        combo = queue.popleft()
        row = []
        for i in range(n_inputs):
            nxt = tuple(m.transitions[q][i] for m, q in zip(machines, combo))
            t = index.get(nxt)
            if t is None:
                t = len(order)
                if max_states is not None and t >= max_states:
                    raise ResourceLimitError(
                        f"reachable product exceeds {max_states} states"
                    )
                index[nxt] = t
                order.append(nxt)
                queue.append(nxt)
            row.append(t)
        transitions.append(tuple(row))
    outputs = [output_of(c) for c in order]
    names = None
    if all(m.state_names is not None for m in machines):
        names = [
            "(" + ",".join(m.state_names[q] for m, q in zip(machines, c)) + ")"
            for c in order
        ]
    return MooreMachine(first.inputs, transitions, outputs, 0, names)


def minimize(machine):
    """The canonical minimal machine with the same behaviour.

    Trims to the reachable part, then refines the partition seeded by output
    values until transition signatures stabilize, and finally quotients.
    """
    m = reachable(machine)
    n = m.n_states
    block = [0] * n
    seen = {}
    for q in range(n):
        o = m.state_outputs[q]
        if o not in seen:
            seen[o] = len(seen)
        block[q] = seen[o]
    n_blocks = len(seen)
    while True:
        sigs = {}
        new_block = [0] * n
        for q in range(n):
            sig = (block[q], tuple(block[t] for t in m.transitions[q]))
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block[q] = sigs[sig]
        if len(sigs) == n_blocks:
            break
        block = new_block
        n_blocks = len(sigs)
    reps = [None] * n_blocks
    for q in range(n):
        if reps[block[q]] is None:
            reps[block[q]] = q
    transitions = [tuple(block[t] for t in m.transitions[reps[b]]) for b in range(n_blocks)]
    outputs = [m.state_outputs[reps[b]] for b in range(n_blocks)]
    names = [m.state_names[reps[b]] for b in range(n_blocks)] if m.state_names is not None else None
    return MooreMachine(m.inputs, transitions, outputs, block[m.initial], names)


def equivalent(m1, m2):
    """Decide behavioural equality by synchronized BFS over state pairs.

    Returns ``None`` when the machines agree on every word; otherwise a
    :class:`Counterexample` for a shortest disagreeing word (expected is
    `m1`'s output, actual is `m2`'s).
    """
    check_same_inputs(m1, m2)
    check_comparable_outputs(m1, m2)
    start = (m1.initial, m2.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        q1, q2 = pair
        if m1.state_outputs[q1] != m2.state_outputs[q2]:
            word = []
            node = pair
            while parent[node] is not None:
                node, sym = parent[node]
                word.append(sym)
            word.reverse()
            return Counterexample(tuple(word), m1.state_outputs[q1], m2.state_outputs[q2])
        for i, a in enumerate(m1.inputs):
            nxt = (m1.transitions[q1][i], m2.transitions[q2][i])
            if nxt not in parent:
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return None


def reverse_machine(machine, max_states=10**6):
    """The minimal machine whose behaviour reads words back to front.

    States of the construction are the residual maps from `machine`'s states
    to outputs: the start state is the output map itself, reading a symbol
    pre-composes with that symbol's transition, and a state's output is its
    value at `machine`'s initial state.  Only the reachable maps are built
    (memoized as value vectors in state order); the state count can approach
    ``|outputs| ** n_states``, so construction aborts with
    :class:`ResourceLimitError` beyond `max_states`.
    """
    machine = reachable(machine)  # unreachable states only pad the vectors
    n = machine.n_states
    n_inputs = len(machine.inputs)
    start = tuple(machine.state_outputs)
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        f = queue.popleft()
        row = []
        for i in range(n_inputs):
            g = tuple(f[machine.transitions[q][i]] for q in range(n))
            t = index.get(g)
            if t is None:
                t = len(order)
                if t >= max_states:
                    raise ResourceLimitError(
                        f"reversed machine exceeds {max_states} states before minimization"
                    )
                index[g] = t
                order.append(g)
                queue.append(g)
            row.append(t)
        transitions.append(tuple(row))
    outputs = [f[machine.initial] for f in order]
    raw = MooreMachine(machine.inputs, transitions, outputs, 0)
    return minimize(raw)
