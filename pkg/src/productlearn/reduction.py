"""Learning a product machine by composing independent per-component learners.

The driver runs one base learner per component, forwards each learner's
membership queries to the shared teacher (answering with the projected
output), and only talks to the real equivalence oracle once every active
learner has proposed a hypothesis.  A counterexample is resolved with a
single extra membership query and then delivered to exactly those learners
whose hypothesis disagrees with the corresponding projection; the others stay
suspended with their current hypothesis until a later counterexample concerns
them.
"""

from collections import deque
from dataclasses import dataclass, field

from .errors import ProtocolViolationError
from .machine import reachable_product, run
from .table import lstar_engine

__all__ = [
    "LearnerState",
    "LearnerHandle",
    "CompositionRun",
    "run_reduction_learner",
    "check_allowed_outputs",
]


class LearnerState:
    AWAITING_ANSWER = "awaiting-answer"
    PROPOSING = "proposing-hypothesis"
    SUSPENDED = "suspended"
    DONE = "done"


class LearnerHandle:
    """A resumable base learner for one component.

    Wraps an event generator (see :func:`~productlearn.table.lstar_engine`):
    the handle tracks whether the learner is waiting for a membership answer,
    proposing a hypothesis, suspended with an unrefuted hypothesis, or done.
    """

    def __init__(self, component_index, engine):
        self.component_index = component_index
        self._engine = engine
        self.state = None
        self.pending_word = None
        self.hypothesis = None
        self.mq_count = 0

    def start(self):
        self._consume(next(self._engine))

    def _consume(self, event):
        kind, payload = event
        if kind == "mq":
            self.state = LearnerState.AWAITING_ANSWER
            self.pending_word = payload
        elif kind == "eq":
            self.state = LearnerState.PROPOSING
            self.pending_word = None
            self.hypothesis = payload
        else:
            raise ProtocolViolationError(f"unknown learner event {kind!r}")

    def answer(self, value):
        if self.state != LearnerState.AWAITING_ANSWER:
            raise ProtocolViolationError("learner is not awaiting an answer")
        self.mq_count += 1
        self._consume(self._engine.send(value))

    def deliver_counterexample(self, word):
        if self.state not in (LearnerState.PROPOSING, LearnerState.SUSPENDED):
            raise ProtocolViolationError("learner has no hypothesis to refute")
        self._consume(self._engine.send(tuple(word)))

    def deliver_yes(self):
        if self.state not in (LearnerState.PROPOSING, LearnerState.SUSPENDED):
            raise ProtocolViolationError("learner has no hypothesis to accept")
        try:
            self._engine.send(None)
        except StopIteration as stop:
            if stop.value is not None:
                self.hypothesis = stop.value
        self.state = LearnerState.DONE

    def suspend(self):
        if self.state == LearnerState.PROPOSING:
            self.state = LearnerState.SUSPENDED


@dataclass
class CompositionRun:
    """Everything a finished (or failed) composed run exposes.

    `hypothesis_log` records the reachable product state count immediately
    before each equivalence query, in order.
    """

    handles: list
    teacher: object
    hypothesis_log: list = field(default_factory=list)
    machine: object = None

    @property
    def components(self):
        return [h.hypothesis for h in self.handles]


def _resolve_dispatch(teacher, word):
    query = getattr(teacher, "dispatch_mq", None)
    return query(word) if query is not None else teacher.mq(word)


def check_allowed_outputs(machine, allowed):
    """Shortest word leading `machine` to an output outside `allowed`.

    Breadth-first search from the initial state, expanding inputs in alphabet
    order; returns None when every reachable output is allowed.
    """
    allowed = set(allowed)
    start = machine.initial
    if machine.state_outputs[start] not in allowed:
        return ()
    paths = {start: ()}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        base = paths[q]
        for i, a in enumerate(machine.inputs):
            t = machine.transitions[q][i]
            if t in paths:
                continue
            word = base + (a,)
            if machine.state_outputs[t] not in allowed:
                return word
            paths[t] = word
            queue.append(t)
    return None


def run_reduction_learner(
    teacher,
    inputs,
    decomposition,
    base_learner_factory=None,
    allowed_outputs=None,
    observer=None,
):
    """Drive one base learner per component until their product is accepted.

    `base_learner_factory(component_index)` must return a fresh event
    generator compatible with :func:`~productlearn.table.lstar_engine`, which
    is the default.  With `allowed_outputs`, every hypothesis is first
    screened by reachability for outputs outside the allowed set; such traces
    are resolved with one membership query and dispatched like
    counterexamples without consulting the equivalence oracle.

    Returns a :class:`CompositionRun` whose `machine` is the reachable
    product certified by the final equivalence query.
    """
    inputs = tuple(inputs)
    if base_learner_factory is None:
        base_learner_factory = lambda index: lstar_engine(inputs)
    handles = [LearnerHandle(i, base_learner_factory(i)) for i in range(decomposition.arity)]
    outcome = CompositionRun(handles=handles, teacher=teacher)
    for h in handles:
        h.start()

    def drive_all():
        # Round-robin in component order; each learner runs to its hypothesis
        # before the next one is resumed.
        for h in handles:
            while h.state == LearnerState.AWAITING_ANSWER:
                full = teacher.mq(h.pending_word)
                h.answer(decomposition.project(h.component_index, full))

    def dispatch(word):
        full = _resolve_dispatch(teacher, word)
        affected = [
            h
            for h in handles
            if run(h.hypothesis, word) != decomposition.project(h.component_index, full)
        ]
        if not affected:
            raise ProtocolViolationError(
                f"word {word!r} is not a counterexample for any component"
            )
        for h in handles:
            if h in affected:
                h.deliver_counterexample(word)
            else:
                h.suspend()

    while True:
        drive_all()
        hypothesis = reachable_product([h.hypothesis for h in handles], decomposition)
        if allowed_outputs is not None:
            trace = check_allowed_outputs(hypothesis, allowed_outputs)
            if trace is not None:
                dispatch(trace)
                continue
        outcome.hypothesis_log.append(hypothesis.n_states)
        if observer is not None:
            observer(hypothesis)
        cex = teacher.eq(hypothesis)
        if cex is None:
            for h in handles:
                h.deliver_yes()
            outcome.machine = hypothesis
            return outcome
        dispatch(tuple(cex.word))
