"""causal-forge: evaluate causal models and forge bipolar argumentative explanations."""

from .domains import BOOL, Domain, Ordering, chain, compare, ordered_alternatives
from .dsl import ModelDocument, ParseError, parse_document, parse_model, serialize_model
from .explanation import (
    ArgumentPolicy,
    ArgumentativeExplanation,
    EdgeRole,
    EdgeWitness,
    ExplanationContext,
    ExplanationMould,
    InfluenceGraph,
    ReinforcementExplanation,
    RelationCharacterisation,
    characterise_reinforcement,
    extract_rx,
    forge_explanation,
    influence_graph,
    reinforcement_mould,
)
from .fuzz import (
    CampaignReport,
    Counterexample,
    GeneratorParams,
    generate_model,
    naive_evaluate,
    replay_counterexample,
    run_campaign,
)
from .model import (
    Assignment,
    CausalModel,
    EvaluationError,
    Input,
    Intervention,
    ModelError,
    StructuralEquation,
    Variable,
    Violation,
    evaluate,
    validate_model,
)
from .verify import (
    CoherenceResult,
    ExternalIncoherence,
    InternalIncoherence,
    Path,
    PropertyReport,
    PropertyResult,
    accepted_arguments,
    check_external_coherence,
    check_internal_coherence,
    check_witness,
    verify_properties,
)

__all__ = [
    "BOOL",
    "Domain",
    "Ordering",
    "chain",
    "compare",
    "ordered_alternatives",
    "ModelDocument",
    "ParseError",
    "parse_document",
    "parse_model",
    "serialize_model",
    "ArgumentPolicy",
    "ArgumentativeExplanation",
    "EdgeRole",
    "EdgeWitness",
    "ExplanationContext",
    "ExplanationMould",
    "InfluenceGraph",
    "ReinforcementExplanation",
    "RelationCharacterisation",
    "characterise_reinforcement",
    "extract_rx",
    "forge_explanation",
    "influence_graph",
    "reinforcement_mould",
    "CampaignReport",
    "Counterexample",
    "GeneratorParams",
    "generate_model",
    "naive_evaluate",
    "replay_counterexample",
    "run_campaign",
    "Assignment",
    "CausalModel",
    "EvaluationError",
    "Input",
    "Intervention",
    "ModelError",
    "StructuralEquation",
    "Variable",
    "Violation",
    "evaluate",
    "validate_model",
    "CoherenceResult",
    "ExternalIncoherence",
    "InternalIncoherence",
    "Path",
    "PropertyReport",
    "PropertyResult",
    "accepted_arguments",
    "check_external_coherence",
    "check_internal_coherence",
    "check_witness",
    "verify_properties",
]
