"""Query oracles over a hidden machine, with query and action accounting.

A teacher answers two kinds of questions: the output of the hidden machine on
a word, and whether a proposed machine is equivalent to it.  Equivalence can
be answered exactly (bisimulation) or by random sampling, which models
testing a black box.  Every word executed on the hidden machine costs one
reset plus one action per symbol; the counters live in :class:`QueryStats`.
"""

import math
import random
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .errors import ProtocolViolationError
from .machine import Counterexample, equivalent, run

__all__ = [
    "Teacher",
    "QueryStats",
    "SamplingEQConfig",
    "SimulatorTeacher",
    "CachingTeacher",
    "sample_words",
]


@dataclass
class QueryStats:
    """Monotone counters describing the cost of a learning run.

    `action_count` is the total number of input symbols sent to the hidden
    machine plus one reset per executed word.  `dispatch_mq_count` tallies the
    extra membership queries a composed learner spends on routing
    counterexamples; those are kept out of `mq_count` so both raw columns can
    be reported side by side.
    """

    mq_count: int = 0
    eq_count: int = 0
    action_count: int = 0
    dispatch_mq_count: int = 0

    @property
    def total_mq_count(self):
        return self.mq_count + self.dispatch_mq_count

    def copy(self):
        return QueryStats(
            self.mq_count, self.eq_count, self.action_count, self.dispatch_mq_count
        )


@dataclass(frozen=True)
class SamplingEQConfig:
    """Word distribution for sampling equivalence checks.

    Each sample has length ``min_length + Geometric(expected_extra_length)``
    with symbols drawn uniformly.  The stream is re-seeded from
    ``(rng_seed, eq ordinal)`` for every equivalence query, so unrelated
    membership queries in between never shift the samples.
    """

    sample_count: int = 1000
    min_length: int = 3
    expected_extra_length: float = 10.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.min_length < 0:
            raise ValueError("min_length must be >= 0")
        if self.expected_extra_length < 0:
            raise ValueError("expected_extra_length must be >= 0")


def _draw_word(rng, inputs, cfg):
    extra = 0
    m = cfg.expected_extra_length
    if m > 0:
        q = m / (m + 1.0)
        extra = int(math.log(1.0 - rng.random()) / math.log(q))
    length = cfg.min_length + extra
    return tuple(rng.choice(inputs) for _ in range(length))


def sample_words(inputs, cfg, eq_ordinal):
    """The exact word sequence a sampling EQ with this config would draw.

    Exposed so tests and tools can replay a stream without a teacher.
    """
    rng = random.Random(cfg.rng_seed * 1_000_003 + eq_ordinal)
    return [_draw_word(rng, tuple(inputs), cfg) for _ in range(cfg.sample_count)]


class Teacher(ABC):
    """Answers membership and equivalence queries about a hidden behaviour."""

    @abstractmethod
    def mq(self, word):
        """Output of the hidden machine on `word`."""

    @abstractmethod
    def eq(self, hypothesis):
        """None if `hypothesis` is (believed) equivalent, else a Counterexample."""


class SimulatorTeacher(Teacher):
    """Teacher backed by simulating a known machine.

    `eq_mode` is ``"exact"`` (bisimulation; answers are authoritative and cost
    no machine actions) or ``"sample"`` (random words drawn per `sampling`;
    sound but incomplete).  Membership queries are never cached here: asking
    the same word twice costs twice, see :class:`CachingTeacher` for the
    opt-in alternative.  Counter updates are lock-guarded so concurrent
    membership queries keep the stats consistent.
    """

    def __init__(self, machine, eq_mode="exact", sampling=None, stats=None):
        if eq_mode not in ("exact", "sample"):
            raise ValueError(f"unknown eq_mode {eq_mode!r}")
        self.machine = machine
        self.eq_mode = eq_mode
        self.sampling = sampling if sampling is not None else SamplingEQConfig()
        self.stats = stats if stats is not None else QueryStats()
        self._lock = threading.Lock()

    @property
    def inputs(self):
        return self.machine.inputs

    @property
    def output_arity(self):
        return self.machine.output_arity

    def _execute(self, word):
        out = run(self.machine, word)
        with self._lock:
            self.stats.action_count += len(word) + 1
        return out

    def mq(self, word):
        word = tuple(word)
        out = self._execute(word)
        with self._lock:
            self.stats.mq_count += 1
        return out

    def dispatch_mq(self, word):
        """A membership query spent on counterexample routing, counted apart."""
        word = tuple(word)
        out = self._execute(word)
        with self._lock:
            self.stats.dispatch_mq_count += 1
        return out

    def eq(self, hypothesis):
        ordinal = self.stats.eq_count
        self.stats.eq_count += 1
        if self.eq_mode == "exact":
            return equivalent(self.machine, hypothesis)
        rng = random.Random(self.sampling.rng_seed * 1_000_003 + ordinal)
        inputs = self.machine.inputs
        for _ in range(self.sampling.sample_count):
            word = _draw_word(rng, inputs, self.sampling)
            expected = self._execute(word)
            actual = run(hypothesis, word)
            if expected != actual:
                return Counterexample(word, expected, actual)
        return None


class CachingTeacher(Teacher):
    """Memoizing wrapper around another teacher's membership queries.

    Repeated words are answered from the cache without touching the hidden
    machine (no action cost), but the raw `mq_count` still advances so query
    totals stay comparable with uncached runs; hits are tallied separately in
    `cache_hits` and never subtracted from any counter.
    """

    def __init__(self, inner):
        self.inner = inner
        self.cache = {}
        self.cache_hits = 0

    @property
    def stats(self):
        return self.inner.stats

    @property
    def inputs(self):
        return self.inner.inputs

    @property
    def output_arity(self):
        return self.inner.output_arity

    def mq(self, word):
        word = tuple(word)
        if word in self.cache:
            self.cache_hits += 1
            self.inner.stats.mq_count += 1
            return self.cache[word]
        out = self.inner.mq(word)
        self.cache[word] = out
        return out

    def dispatch_mq(self, word):
        word = tuple(word)
        if word in self.cache:
            self.cache_hits += 1
            self.inner.stats.dispatch_mq_count += 1
            return self.cache[word]
        out = self.inner.dispatch_mq(word) if hasattr(self.inner, "dispatch_mq") else self.inner.mq(word)
        self.cache[word] = out
        return out

    def eq(self, hypothesis):
        return self.inner.eq(hypothesis)


def verify_counterexample(hypothesis, cex):
    """Reject teacher answers that are not actually counterexamples.

    A sound teacher only returns words on which the hypothesis disagrees with
    the target; anything else would make the learner loop forever, so it is
    reported as a protocol violation instead.
    """
    if run(hypothesis, cex.word) == cex.expected:
        raise ProtocolViolationError(
            f"teacher returned {cex.word!r} as a counterexample, "
            "but the hypothesis already agrees with the target on it"
        )
