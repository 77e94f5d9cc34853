"""Repair partial-order scripts from natural-language feedback.

The public surface is re-exported here; modules stay importable directly
when you need the long tail (tokenizers, error subclasses, CLI internals).
"""

from .config import Config, load_config
from .correctors import (
    CorrectionRequest,
    CorrectionResult,
    ExternalCorrectorError,
    ExternalModelCorrector,
    FeedbackSource,
    KeywordCorrector,
    NoopCorrector,
    RetrievalCorrector,
    correct,
)
from .dataset import (
    DatasetError,
    ErrorType,
    EvalTuple,
    PerturbationTable,
    Split,
    attach_distractors,
    build_iset,
    import_published,
    load,
    save,
    validate_file,
)
from .edits import EditCommand, EditKind, EditParseError, canonical_edit_text, parse_edit, serialize_edit
from .engine import (
    CyclicResultError,
    EditApplicationError,
    NotSingleEditError,
    PreconditionError,
    UnresolvableLocationError,
    apply_edit,
    diff,
    enumerate_edits,
    scripts_equivalent,
)
from .graph import (
    CycleError,
    DotParseError,
    Node,
    NodeRef,
    Occurrence,
    Script,
    ScriptError,
    canonical_equal,
    chain,
    linearize,
    numbered_steps,
    parse_dot,
    serialize_dot,
)
from .harness import EvalRun, FeedbackMode, StreamEvent, StreamResult, emit_curve, run_eval, run_stream
from .memory import FeedbackMemory, HashingEmbedder, HttpEmbedder, LookupResult, MemoryRecord
from .metrics import ConsistencyGroup, MetricsReport, ScoredPair, bleu, component_match, consistency, exact_match, rouge_l, score_corpus
from .synthetic import bundled_corpus, identity_twins, reuse_stream

__version__ = "0.1.0"

__all__ = [
    "Config",
    "ConsistencyGroup",
    "CorrectionRequest",
    "CorrectionResult",
    "CycleError",
    "CyclicResultError",
    "DatasetError",
    "DotParseError",
    "EditApplicationError",
    "EditCommand",
    "EditKind",
    "EditParseError",
    "ErrorType",
    "EvalRun",
    "EvalTuple",
    "ExternalCorrectorError",
    "ExternalModelCorrector",
    "FeedbackMemory",
    "FeedbackMode",
    "FeedbackSource",
    "HashingEmbedder",
    "HttpEmbedder",
    "KeywordCorrector",
    "LookupResult",
    "MemoryRecord",
    "MetricsReport",
    "Node",
    "NodeRef",
    "NoopCorrector",
    "NotSingleEditError",
    "Occurrence",
    "PerturbationTable",
    "PreconditionError",
    "RetrievalCorrector",
    "ScoredPair",
    "Script",
    "ScriptError",
    "Split",
    "StreamEvent",
    "StreamResult",
    "UnresolvableLocationError",
    "apply_edit",
    "attach_distractors",
    "bleu",
    "build_iset",
    "bundled_corpus",
    "canonical_edit_text",
    "canonical_equal",
    "chain",
    "component_match",
    "consistency",
    "correct",
    "diff",
    "emit_curve",
    "enumerate_edits",
    "exact_match",
    "identity_twins",
    "import_published",
    "linearize",
    "load",
    "load_config",
    "numbered_steps",
    "parse_dot",
    "parse_edit",
    "reuse_stream",
    "rouge_l",
    "run_eval",
    "run_stream",
    "save",
    "score_corpus",
    "scripts_equivalent",
    "serialize_dot",
    "serialize_edit",
    "validate_file",
]
