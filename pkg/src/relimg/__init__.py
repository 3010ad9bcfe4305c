"""Relational programming with delayed answer streams, and the image
processing built on it: summed tables, moving averages and component
labeling."""

from .ccl import (
    BinaryImage, LabelGrid, canonicalize, flood_fill_oracle,
    label_components_relational,
)
from .integral2d import (
    HaarFeature, Image, LazySAT, SummedAreaTable, box_sum, box_sum_lazy,
    build_sat, haar_value, lazy_entry,
)
from .kanren import (
    NIL, Pair, ProjectionError, Substitution, Symbol, Var, conda, conj, disj,
    eq, fail, fresh, project, run, run_all, succeed, unified_varo, unify, walk,
)
from .loops import builde, builde_nest
from .signal import (
    StrategyStats, moving_average_memo, moving_average_naive,
    moving_average_relational, moving_average_stream, strategy_selecto,
    summed_table,
)

__version__ = "0.1.0"
