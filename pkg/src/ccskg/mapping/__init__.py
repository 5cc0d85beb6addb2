"""Record-to-RDF mapping: declarative rules plus the dataset-id mapper."""
from .drs import map_drs, resolve_driving_model, simulation_facets
from .rules import MappingRule, RuleError, RuleSet, apply, compile_rules, merge_rulesets

__all__ = [
    "MappingRule",
    "RuleError",
    "RuleSet",
    "apply",
    "compile_rules",
    "map_drs",
    "merge_rulesets",
    "resolve_driving_model",
    "simulation_facets",
]
