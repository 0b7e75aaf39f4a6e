"""Distributed coloring protocols run on the round simulator."""

from .common import RunResult
from .defective import defective_color, defective_list_color, defective_shape
from .linial import iterated_linial, linial_fixpoint, linial_reduce
from .lists import (
    defective_desk_parameters,
    linial_for_lists,
    lists_desk_parameters,
    solve_p2,
)
from .partition import low_outdegree_partition
from .pipeline import deg_plus_one_list_color

__all__ = [
    "RunResult",
    "defective_color",
    "defective_desk_parameters",
    "defective_list_color",
    "defective_shape",
    "deg_plus_one_list_color",
    "iterated_linial",
    "linial_fixpoint",
    "linial_for_lists",
    "linial_reduce",
    "lists_desk_parameters",
    "low_outdegree_partition",
    "solve_p2",
]
