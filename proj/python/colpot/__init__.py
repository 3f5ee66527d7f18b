"""App-collusion potential detection.

Thin Python surface over the C++ engine: parse access/send/receive
signatures, index them into a fact store, enumerate communication paths,
and evaluate the collusion threat rules.
"""

from ._core import (
    ActionMapping,
    AsrSignature,
    Channel,
    ChannelKind,
    CommPath,
    FactStore,
    FilterSet,
    Finding,
    HighLevelAction,
    Label,
    Threat,
    actions_of,
    coll_resource,
    comm_paths,
    compute_intent_ratios,
    default_resources,
    derive_trusted_list,
    direct_threat_findings,
    estimate_max_sets,
    filter_by_label,
    findings_to_ndjson,
    generate_synthetic_corpus,
    is_excluded,
    merge_signature,
    parse_intent_list,
    parse_manifest,
    parse_signature,
    report_json,
    run_analysis,
    serialize_signature,
    service_misuse_findings,
    strip_permission_prefix,
)

__all__ = [
    "ActionMapping",
    "AsrSignature",
    "Channel",
    "ChannelKind",
    "CommPath",
    "FactStore",
    "FilterSet",
    "Finding",
    "HighLevelAction",
    "Label",
    "Threat",
    "actions_of",
    "coll_resource",
    "comm_paths",
    "compute_intent_ratios",
    "default_resources",
    "derive_trusted_list",
    "direct_threat_findings",
    "estimate_max_sets",
    "filter_by_label",
    "findings_to_ndjson",
    "generate_synthetic_corpus",
    "is_excluded",
    "merge_signature",
    "parse_intent_list",
    "parse_manifest",
    "parse_signature",
    "report_json",
    "run_analysis",
    "serialize_signature",
    "service_misuse_findings",
    "strip_permission_prefix",
]

__version__ = "1.0.0"
