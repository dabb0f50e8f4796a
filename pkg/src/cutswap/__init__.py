"""Consecutive ones property testing by overlap classes and cut-or-swap refinement."""

from cutswap.errors import (
    BadSpec,
    CutswapError,
    InternalInvariant,
    InvalidOrder,
    MalformedRow,
    TooLarge,
)
from cutswap.family import (
    GeneratorSpec,
    LROrder,
    SetFamily,
    SLLists,
    gen_family,
    lr_order,
    parse_family,
    render_family,
    sl_lists,
    star_family,
)
from cutswap.maxcomp import MaxTable, compute_max, refine_step1
from cutswap.overlap import build_intervals, classes_and_orders, singleton_rows
from cutswap.refine import ClassReport, FamilyReport, c1p_test, swap_partition_class

__version__ = "0.1.0"
