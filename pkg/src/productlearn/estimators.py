"""Scikit-learn style frontends for the three learners.

Each estimator is configured with hyperparameters in ``__init__`` (so
``get_params`` / ``set_params`` / ``clone`` work as usual), learns a machine
in ``fit`` and evaluates it with ``predict``.  The fit target may be a
:class:`~productlearn.machine.MooreMachine` (a simulator teacher is built
around it) or any :class:`~productlearn.teacher.Teacher`.
"""

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import DecompositionError
from .machine import OutputDecomposition, run
from .reduction import run_reduction_learner
from .table import lstar, product_lstar
from .teacher import QueryStats, SamplingEQConfig, SimulatorTeacher, Teacher

__all__ = ["LStarLearner", "ProductLStarLearner", "ReductionLearner", "resolve_split"]


def _output_arity(teacher):
    arity = getattr(teacher, "output_arity", None)
    if arity is None:
        arity = len(teacher.mq(()))
    return arity


def resolve_split(split, output_arity):
    """Turn a split description into an :class:`OutputDecomposition`.

    Accepts a ready decomposition, ``"bits"`` (one component per position),
    ``"none"`` (a single component), or an integer group size for contiguous
    groups (the last group may be smaller).
    """
    if isinstance(split, OutputDecomposition):
        if split.width != output_arity:
            raise DecompositionError(
                f"decomposition covers {split.width} positions, outputs have {output_arity}"
            )
        return split
    if split == "bits":
        return OutputDecomposition.bitwise(output_arity)
    if split == "none":
        return OutputDecomposition.whole(output_arity)
    if isinstance(split, int):
        if split < 1:
            raise DecompositionError("group size must be >= 1")
        sizes = []
        left = output_arity
        while left > 0:
            sizes.append(min(split, left))
            left -= sizes[-1]
        return OutputDecomposition.from_group_sizes(sizes)
    raise DecompositionError(f"cannot interpret split {split!r}")


class _BaseLearner(BaseEstimator):
    """Shared teacher plumbing; subclasses implement `_learn`."""

    def _make_teacher(self, target):
        if isinstance(target, Teacher) or (hasattr(target, "mq") and hasattr(target, "eq")):
            return target
        sampling = SamplingEQConfig(
            sample_count=self.samples,
            min_length=self.min_length,
            expected_extra_length=self.expected_extra_length,
            rng_seed=self.seed,
        )
        return SimulatorTeacher(target, eq_mode=self.eq, sampling=sampling)

    def fit(self, target, inputs=None):
        """Learn from a machine or a teacher; returns self.

        `inputs` is only needed when `target` is a teacher that does not
        expose its input alphabet.
        """
        teacher = self._make_teacher(target)
        if inputs is None:
            inputs = getattr(teacher, "inputs", None)
            if inputs is None:
                raise ValueError("pass inputs= when the teacher has no .inputs")
        self.hypothesis_log_ = []
        self._learn(teacher, tuple(inputs))
        self.stats_ = teacher.stats.copy() if hasattr(teacher, "stats") else QueryStats()
        self.n_states_ = self.machine_.n_states
        return self

    def predict(self, words):
        """Outputs of the learned machine on each word."""
        if not hasattr(self, "machine_"):
            raise NotFittedError("call fit before predict")
        return [run(self.machine_, w) for w in words]

    def score(self, words, outputs):
        """Fraction of `words` whose predicted output equals `outputs`."""
        got = self.predict(words)
        expected = [tuple(o) for o in outputs]
        return sum(g == e for g, e in zip(got, expected)) / len(expected)


class LStarLearner(_BaseLearner):
    """Classic observation-table learner for the whole output at once.

    Parameters mirror the teacher configuration used when fitting a bare
    machine: `eq` is ``"exact"`` or ``"sample"``, the rest configure sampling.
    """

    def __init__(self, eq="exact", samples=1000, min_length=3, expected_extra_length=10.0, seed=0):
        self.eq = eq
        self.samples = samples
        self.min_length = min_length
        self.expected_extra_length = expected_extra_length
        self.seed = seed

    def _learn(self, teacher, inputs):
        self.machine_ = lstar(teacher, inputs, hypothesis_log=self.hypothesis_log_)


class ProductLStarLearner(_BaseLearner):
    """Single-table learner that builds one minimal machine per component."""

    def __init__(
        self,
        split="bits",
        eq="exact",
        samples=1000,
        min_length=3,
        expected_extra_length=10.0,
        seed=0,
    ):
        self.split = split
        self.eq = eq
        self.samples = samples
        self.min_length = min_length
        self.expected_extra_length = expected_extra_length
        self.seed = seed

    def _learn(self, teacher, inputs):
        decomposition = resolve_split(self.split, _output_arity(teacher))
        self.components_, self.machine_ = product_lstar(
            teacher, inputs, decomposition, hypothesis_log=self.hypothesis_log_
        )
        self.decomposition_ = decomposition


class ReductionLearner(_BaseLearner):
    """Composed learner: one independent base learner per component.

    `allowed_outputs`, when set, enables the self-check that screens every
    hypothesis for reachable outputs outside the allowed set before asking
    the equivalence oracle.
    """

    def __init__(
        self,
        split="bits",
        eq="exact",
        samples=1000,
        min_length=3,
        expected_extra_length=10.0,
        seed=0,
        allowed_outputs=None,
    ):
        self.split = split
        self.eq = eq
        self.samples = samples
        self.min_length = min_length
        self.expected_extra_length = expected_extra_length
        self.seed = seed
        self.allowed_outputs = allowed_outputs

    def _learn(self, teacher, inputs):
        decomposition = resolve_split(self.split, _output_arity(teacher))
        outcome = run_reduction_learner(
            teacher,
            inputs,
            decomposition,
            allowed_outputs=self.allowed_outputs,
        )
        self.machine_ = outcome.machine
        self.components_ = outcome.components
        self.hypothesis_log_ = outcome.hypothesis_log
        self.decomposition_ = decomposition
