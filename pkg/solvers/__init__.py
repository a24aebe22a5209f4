"""求解器模块"""
from .models import (
    NO_ARC,
    Arc,
    Augmentation,
    DispatchEvent,
    FlowInstance,
    FlowSolution,
    GapReport,
    ReceiverScore,
    SenderRule,
    SolveStatus,
    Tableau,
    is_no_arc,
)
from .exceptions import ConfigError, ContractError, InstanceFormatError, InvalidInstanceError
from .tableau import build_tableau, check_tableau, format_tableau
from .heuristic import (
    dispatch,
    replay_trace,
    run_heuristic,
    score_receivers,
    select_receiver,
    select_sender,
    total_cost,
)
from .oracle import (
    ResidualNetwork,
    compare_solutions,
    gap,
    max_feasible_flow,
    solve_exact,
    verify_solution,
)

__all__ = [
    'NO_ARC',
    'Arc',
    'Augmentation',
    'DispatchEvent',
    'FlowInstance',
    'FlowSolution',
    'GapReport',
    'ReceiverScore',
    'SenderRule',
    'SolveStatus',
    'Tableau',
    'is_no_arc',
    'ConfigError',
    'ContractError',
    'InstanceFormatError',
    'InvalidInstanceError',
    'build_tableau',
    'check_tableau',
    'format_tableau',
    'dispatch',
    'replay_trace',
    'run_heuristic',
    'score_receivers',
    'select_receiver',
    'select_sender',
    'total_cost',
    'ResidualNetwork',
    'compare_solutions',
    'gap',
    'max_feasible_flow',
    'solve_exact',
    'verify_solution',
]
