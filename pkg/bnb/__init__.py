"""Branch-and-bound: nodes, strong branching, parallel search, checkpoints, reports."""
from .branching import ReducedProblem, cold_dual, fold_assignment, reduced_problem
from .node import Incumbent, Node
from .strong_branch import BranchChoice, LineMode, branch_children, strong_branch_select
from .checkpoint import (
    CheckpointError,
    CheckpointState,
    OpenNode,
    checkpoint_load,
    checkpoint_save,
    read_checkpoint,
    write_checkpoint,
)
from .report import SolveReport, SolveStatus
from .oracle import oracle_qap
from .solver import BranchAndBound, SolverConfig, make_root, solve_bnb

