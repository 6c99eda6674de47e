from src.thompson.flexibility import (
    CorePush,
    check_same_class,
    comparison_group,
    exchange,
    map_cones_v,
    match_clopen,
    push_into_core,
)
from src.thompson.points import cone_swap, stabilizer_contraction, transposition_product
from src.thompson.velement import (
    VElement,
    is_v_like,
    v_apply_point,
    v_as_rational,
    v_compose,
    v_equal,
    v_evaluate,
    v_invert,
    velement_from_map,
)

__all__ = [
    "CorePush",
    "VElement",
    "check_same_class",
    "comparison_group",
    "cone_swap",
    "exchange",
    "is_v_like",
    "map_cones_v",
    "match_clopen",
    "push_into_core",
    "stabilizer_contraction",
    "transposition_product",
    "v_apply_point",
    "v_as_rational",
    "v_compose",
    "v_equal",
    "v_evaluate",
    "v_invert",
    "velement_from_map",
]
