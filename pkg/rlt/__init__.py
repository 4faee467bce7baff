"""RLT dual ascent: reduced-cost tensors and the spreading/transfer/concentration loop."""
from .state import DualState, d_shape, init_dual, init_dual_from_costs
from .operations import (
    concentrate_b_to_lb,
    concentrate_c_to_b,
    concentrate_d_to_c,
    spread_b_to_c,
    spread_c_to_d,
    transfer_complements_c,
    transfer_complements_d,
)
from .ascent import (
    AscentConfig,
    AscentResult,
    AscentStatus,
    dual_ascent,
    dual_ascent_rlt1,
    dual_ascent_rlt2,
    exceeds,
)
