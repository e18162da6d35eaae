"""Two-objective surrogate-assisted black-box optimization (MO-SRS)."""

from .evaluator import EvaluationError, EvaluatorSpec, evaluate_builtin, evaluate_external, make_evaluator
from .optimizer import RunAborted, RunConfig, RunResult, random_search, resume, run
from .pareto import ObjectivePair, ParetoArchive, build_grid, dominates, hypervolume_2d, pareto_front, select_leader
from .sampling import lhs
from .space import Kind, ParamSpec, SearchSpace, builtin_space, denormalize, normalize, unit_space
from .surrogate import Dataset, RbfModel, fit, predict, update

__version__ = "0.1.0"
