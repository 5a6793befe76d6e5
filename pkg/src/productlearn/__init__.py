"""Active learning of Moore machines whose outputs split into components.

The package provides the machine algebra (products, projections,
minimization, equivalence, reversal), observation-table learners that are
aware of output decompositions, a composed learner that runs one base
learner per component, query oracles with cost accounting, benchmark
generators, file-format support and a command-line experiment harness.
"""

from .errors import (
    AlphabetMismatchError,
    ConflictingTransitionError,
    DecompositionError,
    InputSymbolError,
    MissingTransitionError,
    OutputArityError,
    ParseError,
    ProductLearnError,
    ProtocolViolationError,
    ResourceLimitError,
    TableStateError,
    UndeclaredSymbolError,
    UnknownResetStateError,
    WidthMismatchError,
)
from .machine import (
    Counterexample,
    MooreMachine,
    OutputDecomposition,
    equivalent,
    minimize,
    product,
    product_machines,
    project,
    reachable,
    reachable_product,
    reverse_machine,
    run,
)
from .table import ObservationTable, lstar, lstar_engine, product_lstar
from .reduction import (
    CompositionRun,
    LearnerHandle,
    LearnerState,
    check_allowed_outputs,
    run_reduction_learner,
)
from .teacher import (
    CachingTeacher,
    QueryStats,
    SamplingEQConfig,
    SimulatorTeacher,
    Teacher,
    sample_words,
)
from .models import (
    CircuitModel,
    circuit_to_moore,
    make_register_component,
    make_register_machine,
    parse_kiss2,
    parse_moore,
    serialize_moore,
)
from .estimators import LStarLearner, ProductLStarLearner, ReductionLearner

__version__ = "0.1.0"
