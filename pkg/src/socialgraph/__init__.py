"""socialgraph: an engine for social content graphs.

A property-graph algebra over attributed nodes and links, a small query
language compiling to shared operator DAGs, collaborative and
content-based recommendation expressed as algebraic plans, a
network-aware clustered tag index with safe top-k pruning, and grouped,
explained result presentation.
"""

from . import algebra, aggfn, discovery, dsl, fixtures, index, io, presentation
from .aggfn import (
    COUNT,
    AttrRef,
    Arith,
    Builtin,
    CompositionFn,
    Const,
    ConstString,
    CopyAny,
    CopyFrom,
    JaccardOf,
    ProdOver,
    SafExpr,
    SumOver,
    apply_composition,
    avg_of,
    eval_naf,
    eval_saf,
    jaccard,
    max_of,
    min_of,
    sum_of,
)
from .algebra import (
    GraphPattern,
    SetOpKind,
    compose,
    link_aggregate,
    link_minus,
    link_select,
    node_aggregate,
    node_select,
    pattern_aggregate,
    semi_join,
    set_op,
)
from .discovery import (
    DiscoveryConfig,
    MeaningfulSocialGraph,
    cf_recommend,
    content_recommend,
    discover,
    network_search,
)
from .errors import SocialGraphError
from .graph import (
    Condition,
    DirectionalCondition,
    Link,
    Node,
    SocialContentGraph,
    StructPredicate,
    attr_eq,
    attr_ge,
    attr_gt,
    attr_le,
    attr_lt,
    attr_ne,
    build_graph,
    default_keyword_score,
    has_all,
    link,
    node,
    satisfies,
)
from .index import (
    ClusteredIndex,
    ClusteringStrategy,
    ClusterModel,
    SocialSets,
    build_index,
    cluster_users,
    estimate_index_size,
    exact_score,
    social_sets,
    topk_query,
)
from .io import load_graph, save_graph
from .presentation import (
    Explanation,
    ItemGroup,
    SocialGrouping,
    StructuralGrouping,
    TopicalGrouping,
    aggregate_explanations,
    explain_item,
    group_items,
    select_groups,
)

__version__ = "0.1.0"
