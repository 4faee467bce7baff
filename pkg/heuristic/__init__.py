"""Initial upper bound: multi-start 2-swap local search."""
from .local_search import local_search_2opt, two_swap_deltas
from .multistart import HeuristicConfig, heuristic_ub
