from .optables import OpPolyTable, derive_op_polys, get_table
from .vectors import (
    WittVec,
    comp_power,
    f_lambda,
    frobenius,
    ghost,
    make_a,
    scalar_int,
    t_map,
    teich_scale,
    teichmuller,
    truncate,
    verschiebung,
    witt_add,
    witt_mul,
    witt_neg,
    witt_sub,
    zero,
    zero_extend,
)

__all__ = [
    "OpPolyTable",
    "WittVec",
    "comp_power",
    "derive_op_polys",
    "f_lambda",
    "frobenius",
    "get_table",
    "ghost",
    "make_a",
    "scalar_int",
    "t_map",
    "teich_scale",
    "teichmuller",
    "truncate",
    "verschiebung",
    "witt_add",
    "witt_mul",
    "witt_neg",
    "witt_sub",
    "zero",
    "zero_extend",
]
