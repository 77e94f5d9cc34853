"""Correctors: map (script, feedback) to a single edit command.

All correctors run behind correct(), which enforces the one hard guarantee of
the interface: a non-noop result always applies cleanly to the input script.
A corrector whose proposal fails that check degrades to noop with a note
rather than raising; only infrastructure failures (network trouble in the
external client) propagate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import requests

from .edits import (
    EditCommand,
    EditKind,
    EditParseError,
    insert_after,
    insert_before,
    noop,
    parse_edit,
    remove_node,
    reorder_edge,
)
from .engine import EditApplicationError, apply_edit
from .graph import Node, Script, _topological_ids, normalize_label
from .memory import LookupResult


class FeedbackSource(Enum):
    USER = "user"
    MEMORY = "memory"
    NONE = "none"


class ExternalCorrectorError(RuntimeError):
    """The external model endpoint could not be reached or answered badly."""


@dataclass(frozen=True)
class CorrectionRequest:
    script: Script
    feedback: str | None = None
    feedback_source: FeedbackSource = FeedbackSource.NONE
    retrieved: LookupResult | None = None

    def __post_init__(self):
        if self.feedback_source is FeedbackSource.NONE and self.feedback is not None:
            raise ValueError("feedback_source 'none' forbids feedback text")
        if self.feedback_source is not FeedbackSource.NONE and not (self.feedback or "").strip():
            raise ValueError(f"feedback_source {self.feedback_source.value!r} requires feedback text")
        if self.feedback_source is FeedbackSource.MEMORY and self.retrieved is None:
            raise ValueError("feedback_source 'memory' requires the retrieved record")


@dataclass(frozen=True)
class CorrectionResult:
    edit: EditCommand
    repaired: Script
    corrector_name: str
    raw_model_text: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class Proposal:
    edit: EditCommand
    raw_text: str | None = None
    note: str | None = None


def correct(request: CorrectionRequest, corrector) -> CorrectionResult:
    """Run a corrector and enforce final applicability.

    A proposal that does not apply to the request's script is replaced by
    noop, with the failure recorded in the note.
    """
    proposal = corrector.propose(request)
    edit, note = proposal.edit, proposal.note
    if edit.kind is EditKind.NOOP:
        repaired = request.script
    else:
        try:
            repaired = apply_edit(request.script, edit)
        except EditApplicationError as exc:
            note = f"proposed edit not applicable: {exc}"
            edit = noop()
            repaired = request.script
    return CorrectionResult(edit, repaired, corrector.name, proposal.raw_text, note)


class NoopCorrector:
    """The no-feedback baseline: with no signal, change nothing."""

    name = "noop"

    def propose(self, request: CorrectionRequest) -> Proposal:
        return Proposal(noop())


# --- token matching helpers -------------------------------------------------

_PUNCT = ".,!?;:\"()"

_STOPWORDS = {
    "a", "an", "the", "to", "of", "in", "on", "at", "for", "and", "or",
    "is", "are", "be", "it", "its", "they", "then", "you", "your", "we",
    "i", "must", "should", "need", "needs", "first", "always", "people",
    "person", "when", "that", "this", "if", "any", "their",
}


def _stem(tok: str) -> str:
    t = tok
    if len(t) > 4 and t.endswith("ing"):
        t = t[:-3]
    elif len(t) > 3 and t.endswith(("ed", "es")):
        t = t[:-2]
    elif len(t) > 3 and t.endswith("s") and not t.endswith("ss"):
        t = t[:-1]
    if len(t) > 3 and t.endswith("e"):
        t = t[:-1]
    return t


def raw_tokens(text: str) -> set[str]:
    return {tok.strip(_PUNCT) for tok in normalize_label(text).split()} - {""}


def match_tokens(text: str) -> set[str]:
    """Stemmed, stopword-filtered tokens for clause/label matching."""
    return {_stem(tok) for tok in raw_tokens(text) if tok not in _STOPWORDS}


def token_jaccard(a: str, b: str) -> float:
    """Plain token Jaccard on normalized, unstemmed tokens."""
    ta, tb = raw_tokens(a), raw_tokens(b)
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


def _overlap(clause_toks: set[str], label_toks: set[str]) -> float:
    # overlap coefficient: a short clause ("driving") should still hit a
    # longer label ("drive to the zoo") that plain Jaccard would dilute away
    if not clause_toks or not label_toks:
        return 0.0
    return len(clause_toks & label_toks) / min(len(clause_toks), len(label_toks))


def _jaccard_sets(a: set[str], b: set[str]) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


class RetrievalCorrector:
    """Re-target a stored gold edit onto the current script.

    Each stored location label is mapped to the script node with maximal
    token-Jaccard similarity; anything under min_jaccard, or a pair collapsing
    onto one node, degrades to noop. Insert args are copied verbatim.
    """

    name = "retrieval"

    def __init__(self, min_jaccard: float = 0.34):
        self.min_jaccard = min_jaccard

    def _map_label(self, script: Script, label: str) -> str | None:
        best, best_score = None, 0.0
        for nid in _topological_ids(script):
            node = script.node_by_id(nid)
            score = token_jaccard(label, node.label)
            if score > best_score:
                best, best_score = node, score
        if best is None or best_score < self.min_jaccard:
            return None
        return best.label

    def propose(self, request: CorrectionRequest) -> Proposal:
        hit = request.retrieved
        if hit is None:
            return Proposal(noop(), note="nothing retrieved from memory")
        stored = hit.record.gold_edit
        if stored is None or stored.kind is EditKind.NOOP:
            return Proposal(noop(), note="retrieved record carries no edit")
        mapped = []
        for ref in stored.locs:
            label = self._map_label(request.script, ref.label)
            if label is None:
                return Proposal(noop(), note=f"no node close enough to {ref.label!r}")
            mapped.append(label)
        if len(mapped) == 2 and normalize_label(mapped[0]) == normalize_label(mapped[1]):
            return Proposal(noop(), note="stored pair collapsed onto one node")
        try:
            edit = EditCommand(stored.kind, arg=stored.arg, locs=tuple(type(r)(m) for r, m in zip(stored.locs, mapped)))
        except ValueError as exc:
            return Proposal(noop(), note=str(exc))
        return Proposal(edit, note=f"re-targeted record {hit.record.id} (similarity {hit.similarity:.3f})")


_BEFORE_RE = re.compile(r"^(?P<x>.+?)\s+before\s+(?P<y>.+)$", re.IGNORECASE)
_AFTER_THEN_RE = re.compile(
    r"\bafter\s+(?P<x>.+?)\s*,?\s+(?:they\s+then|they|then)\s+(?P<arg>.+)$", re.IGNORECASE
)

_NEGATION_CUES = ("don't", "dont", "can't", "cant", "shouldn't", "shouldnt")
_DUPLICATION_CUES = ("redundant",)


def _clean_clause(clause: str) -> str:
    return " ".join(clause.split()).strip(" " + _PUNCT)


class KeywordCorrector:
    """Rule-based corrector over feedback phrasing, applied in order:

    1. "X before Y": when both clauses match existing nodes the two are
       reordered; when only Y matches, X becomes a new node inserted before
       it. Existence of X is judged by symmetric Jaccard (strict), anchors by
       overlap coefficient (loose), both on stemmed content tokens.
    2. Negation cues ("don't", "can't", "shouldn't", "not right") remove the
       node whose label is most contained in the feedback; the duplication cue
       ("redundant") instead finds the closest label pair and removes the
       later occurrence.
    3. "after X, they/then Y" inserts Y as a new node after the X match.
    4. Otherwise noop.
    """

    name = "keyword"

    def __init__(self, jaccard_threshold: float = 0.34, containment_threshold: float = 0.5):
        self.jaccard_threshold = jaccard_threshold
        self.containment_threshold = containment_threshold

    def _nodes_in_topo(self, script: Script) -> list[Node]:
        return [script.node_by_id(nid) for nid in _topological_ids(script)]

    def _anchor(self, script: Script, clause: str) -> Node | None:
        toks = match_tokens(clause)
        best, best_score = None, 0.0
        for node in self._nodes_in_topo(script):
            score = _overlap(toks, match_tokens(node.label))
            if score > best_score:
                best, best_score = node, score
        return best if best_score >= self.jaccard_threshold else None

    def _existing(self, script: Script, clause: str) -> Node | None:
        toks = match_tokens(clause)
        best, best_score = None, 0.0
        for node in self._nodes_in_topo(script):
            score = _jaccard_sets(toks, match_tokens(node.label))
            if score > best_score:
                best, best_score = node, score
        return best if best_score >= self.jaccard_threshold else None

    def _rule_before(self, script: Script, feedback: str) -> EditCommand | None:
        m = _BEFORE_RE.match(" ".join(feedback.split()))
        if not m:
            return None
        x_clause, y_clause = _clean_clause(m.group("x")), _clean_clause(m.group("y"))
        y_node = self._anchor(script, y_clause)
        if y_node is None:
            return None
        x_node = self._existing(script, x_clause)
        if x_node is not None and x_node.id != y_node.id:
            pos = {nid: i for i, nid in enumerate(_topological_ids(script))}
            earlier, later = sorted((x_node, y_node), key=lambda n: pos[n.id])
            return reorder_edge(earlier.label, later.label)
        if x_node is None and x_clause:
            return insert_before(x_clause, y_node.label)
        return None

    def _rule_negation(self, script: Script, feedback: str) -> EditCommand | None:
        fb_toks = raw_tokens(feedback)
        lowered = " ".join(feedback.lower().split())
        has_dup = any(cue in fb_toks for cue in _DUPLICATION_CUES)
        has_neg = any(cue in fb_toks for cue in _NEGATION_CUES) or "not right" in lowered
        if has_dup:
            nodes = self._nodes_in_topo(script)
            best_pair, best_score = None, 0.0
            for i in range(len(nodes)):
                for j in range(i + 1, len(nodes)):
                    score = _jaccard_sets(match_tokens(nodes[i].label), match_tokens(nodes[j].label))
                    if score > best_score:
                        best_pair, best_score = (nodes[i], nodes[j]), score
            if best_pair and best_score >= self.jaccard_threshold:
                return remove_node(best_pair[1].label)
            return None
        if has_neg:
            fb_match = match_tokens(feedback)
            best, best_score = None, 0.0
            for node in self._nodes_in_topo(script):
                toks = match_tokens(node.label)
                if not toks:
                    continue
                score = len(toks & fb_match) / len(toks)
                if score >= best_score:  # >= so later occurrences win ties
                    best, best_score = node, score
            if best is not None and best_score >= self.containment_threshold:
                return remove_node(best.label)
        return None

    def _rule_after_then(self, script: Script, feedback: str) -> EditCommand | None:
        m = _AFTER_THEN_RE.search(" ".join(feedback.split()))
        if not m:
            return None
        anchor = self._anchor(script, _clean_clause(m.group("x")))
        arg = _clean_clause(m.group("arg"))
        if anchor is None or not arg:
            return None
        return insert_after(arg, anchor.label)

    def propose(self, request: CorrectionRequest) -> Proposal:
        if not (request.feedback or "").strip():
            return Proposal(noop(), note="no feedback to act on")
        for rule in (self._rule_before, self._rule_negation, self._rule_after_then):
            edit = rule(request.script, request.feedback)
            if edit is not None:
                return Proposal(edit, note=rule.__name__.lstrip("_"))
        return Proposal(noop(), note="no rule matched")


class ExternalModelCorrector:
    """Client for a generation service: POST /correct -> {"edit": "..."}.

    Unparseable model output degrades to noop (the raw text is kept on the
    result); network failures raise ExternalCorrectorError after the
    configured retries.
    """

    name = "external"

    def __init__(self, url: str, timeout: float = 15.0, retries: int = 1):
        base = url.rstrip("/")
        self.url = base if base.endswith("/correct") else base + "/correct"
        self.timeout = timeout
        self.retries = retries

    def propose(self, request: CorrectionRequest) -> Proposal:
        from .graph import serialize_dot

        payload = {"script_dot": serialize_dot(request.script), "feedback": request.feedback or ""}
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(self.url, json=payload, timeout=self.timeout)
                resp.raise_for_status()
                raw = resp.json().get("edit", "")
                break
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
        else:
            raise ExternalCorrectorError(f"external corrector unreachable: {last_error}")
        try:
            return Proposal(parse_edit(raw), raw_text=raw)
        except EditParseError:
            return Proposal(noop(), raw_text=raw, note="model output did not parse as an edit")
