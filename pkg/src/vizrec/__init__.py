"""vizrec: a rule-based visualization recommendation engine.

Maps selections of typed tabular variables to chart specifications and to
question-grouped next-step recommendations, emitting Vega-Lite JSON. Ships
with an HTTP exploration service and a batch CLI on the same core.
"""

from .dataset import (
    ColumnStats,
    Dataset,
    TYPE_COLORS,
    VarType,
    Variable,
    column_stats,
    infer_types,
    load_csv,
    override_type,
    parse_csv,
)
from .encoding import (
    Aggregate,
    Channel,
    ChannelMap,
    FieldRef,
    FilterClause,
    MarkType,
    TimeUnit,
    VisSpec,
    assign,
    auto_aggregate,
    available_channels,
    build_spec,
    channel_map,
    clear,
    select_mark,
)
from .emitter import encoding_to_map, serialize, to_vegalite, validate
from .errors import (
    ChannelUnavailableError,
    DanglingFieldError,
    FilterError,
    InvalidFieldError,
    NoMappingError,
    ParseError,
    UnknownVariableError,
    UnsupportedSelectionError,
    VizrecError,
)
from .recommender import (
    BookmarkStore,
    QuestionTemplate,
    RecommendationGroup,
    enumerate_groups,
    instantiate,
    promote,
    template_lookup,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregate",
    "BookmarkStore",
    "Channel",
    "ChannelMap",
    "ChannelUnavailableError",
    "ColumnStats",
    "DanglingFieldError",
    "Dataset",
    "FieldRef",
    "FilterClause",
    "FilterError",
    "InvalidFieldError",
    "MarkType",
    "NoMappingError",
    "ParseError",
    "QuestionTemplate",
    "RecommendationGroup",
    "TYPE_COLORS",
    "TimeUnit",
    "UnknownVariableError",
    "UnsupportedSelectionError",
    "VarType",
    "Variable",
    "VisSpec",
    "VizrecError",
    "assign",
    "auto_aggregate",
    "available_channels",
    "build_spec",
    "channel_map",
    "clear",
    "column_stats",
    "encoding_to_map",
    "enumerate_groups",
    "infer_types",
    "instantiate",
    "load_csv",
    "override_type",
    "parse_csv",
    "promote",
    "select_mark",
    "serialize",
    "template_lookup",
    "to_vegalite",
    "validate",
]
