"""Standard and variant Leggett-Garg functionals for sequentially measured qubits."""

from .errors import ConsistencyError, ContractError, DomainError, LGError, ResourceError
from .functionals import (
    BoundPair,
    FunctionalSpec,
    K3_4,
    L3_4,
    eval_all_measured,
    eval_separate,
    macrorealist_bound,
    parse_spec,
    standard_K,
    three_time_variant,
    variant_K3,
    variant_L3,
)
from .qubit import PureState, Schedule, density_from_pure, evolution, heisenberg_observable, projector
from .search import SearchConfig, ViolationReport, optimize, sweep

__version__ = "0.1.0"
