"""Instance I/O: QAPLIB parsing, objective evaluation, memory estimates."""
from .model import (
    DimensionError,
    Permutation,
    QapInstance,
    check_permutation,
    evaluate,
    evaluate_split,
    instance_digest,
)
from .qaplib import (
    DISTANCE_FIRST,
    FLOW_FIRST,
    OrientationError,
    ParseError,
    format_instance,
    format_solution,
    load_fixture,
    match_orientation,
    parse_instance,
    parse_solution,
    read_instance,
    read_solution,
)
from .capacity import CapacityError, MemoryEstimate, check_capacity, estimate_memory
