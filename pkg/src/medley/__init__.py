"""Medley: intent-based dashboard collection recommendation engine."""

from .catalog import (Collection, CollectionTemplate, Intent, default_catalog,
                      enumerate_attribute_sets, load_catalog, populate_collection)
from .canvas import CanvasElement, CanvasState, Geometry
from .dataset import (AggregateQuery, AttributeMeta, AttrType, Dataset, Predicate,
                      aggregate, infer_attribute_type, load_csv,
                      year_over_year_change)
from .engine import (AttrsOfInterest, EngineConfig, RankedCollection, UserInput,
                     attr_match, coverage, implicit_attributes,
                     rank_collections, rank_views, recommend_collections,
                     select_display_set)
from .interactions import (InteractionLink, InteractionMode, SelectionEvent,
                           apply_event, classify_pair, infer_links, set_link_mode)
from .interestingness import (InterestingnessScore, Metric, cardinality_penalty,
                              normalize_across_sets, pearson, raw_interestingness,
                              smoothed_zscore_peaks)
from .emitter import (ColorAssignment, assign_colors, emit_chart_spec,
                      emit_widget_spec, export_dashboard)
from .session import Session
from .specs import ChartKind, ViewSpec, WidgetKind, WidgetSpec

__version__ = "0.1.0"
