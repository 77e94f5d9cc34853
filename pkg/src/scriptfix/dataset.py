"""Evaluation tuples: loading, validation, import, and perturbation.

An EvalTuple is one repair episode: a flawed script x, feedback paraphrases,
the gold edit, and the repaired script y. The invariant the whole package
leans on is checked at load time: applying the gold edit to x must reproduce
y (canonically). Files are JSON lines, one tuple per line.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources

from .edits import EditCommand, EditKind, EditParseError, NodeRef, noop, parse_edit, serialize_edit
from .engine import EditApplicationError, NotSingleEditError, apply_edit, diff, scripts_equivalent
from .graph import Node, Script, ScriptError, chain, parse_dot, serialize_dot

logger = logging.getLogger(__name__)


class DatasetError(ValueError):
    pass


class ErrorType(Enum):
    MISSING_STEP = "missing_step"
    WRONG_STEP = "wrong_step"
    WRONG_ORDER = "wrong_order"
    ADD_PARTIAL_ORDER = "add_partial_order"
    REMOVE_PARTIAL_ORDER = "remove_partial_order"


class Split(Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"
    ISET = "iset"


# Which edit kinds legitimately repair which error type.
KINDS_BY_ERROR = {
    ErrorType.MISSING_STEP: {EditKind.INSERT_BEFORE, EditKind.INSERT_AFTER},
    ErrorType.WRONG_STEP: {EditKind.REMOVE_NODE},
    ErrorType.WRONG_ORDER: {EditKind.REORDER_EDGE},
    ErrorType.ADD_PARTIAL_ORDER: {EditKind.ADD_PARTIAL_ORDER},
    ErrorType.REMOVE_PARTIAL_ORDER: {EditKind.REMOVE_PARTIAL_ORDER},
}


@dataclass(frozen=True)
class EvalTuple:
    """One repair episode. error_type may be None only for noop edits
    (flagged rows from imported data where x already equals y)."""

    id: str
    goal: str
    script_x: Script
    feedbacks: tuple[str, ...]
    gold_edit: EditCommand
    script_y: Script
    error_type: ErrorType | None
    split: Split
    iset_source_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "feedbacks", tuple(self.feedbacks))
        if not self.feedbacks or not all(f.strip() for f in self.feedbacks):
            raise DatasetError(f"tuple {self.id!r}: needs at least one non-empty feedback")
        if self.gold_edit.kind is EditKind.NOOP:
            if not scripts_equivalent(self.script_x, self.script_y):
                raise DatasetError(f"tuple {self.id!r}: noop edit but x != y")
        else:
            if self.error_type is None:
                raise DatasetError(f"tuple {self.id!r}: error_type required for non-noop edits")
            if self.gold_edit.kind not in KINDS_BY_ERROR[self.error_type]:
                raise DatasetError(
                    f"tuple {self.id!r}: edit kind {self.gold_edit.kind.value!r} does not repair {self.error_type.value!r}"
                )
            try:
                repaired = apply_edit(self.script_x, self.gold_edit)
            except EditApplicationError as exc:
                raise DatasetError(f"tuple {self.id!r}: gold edit does not apply: {exc}") from exc
            if not scripts_equivalent(repaired, self.script_y):
                raise DatasetError(f"tuple {self.id!r}: applying the gold edit does not reproduce y")


def to_record(t: EvalTuple) -> dict:
    rec = {
        "id": t.id,
        "goal": t.goal,
        "script_x_dot": serialize_dot(t.script_x),
        "feedbacks": list(t.feedbacks),
        "edit": serialize_edit(t.gold_edit),
        "script_y_dot": serialize_dot(t.script_y),
        "error_type": t.error_type.value if t.error_type else None,
        "split": t.split.value,
    }
    if t.iset_source_id is not None:
        rec["iset_source_id"] = t.iset_source_id
    return rec


def from_record(rec: dict) -> EvalTuple:
    try:
        goal = rec["goal"]
        return EvalTuple(
            id=str(rec["id"]),
            goal=goal,
            script_x=parse_dot(rec["script_x_dot"]).with_goal(goal),
            feedbacks=tuple(rec["feedbacks"]),
            gold_edit=parse_edit(rec["edit"]),
            script_y=parse_dot(rec["script_y_dot"]).with_goal(goal),
            error_type=ErrorType(rec["error_type"]) if rec.get("error_type") else None,
            split=Split(rec.get("split", "test")),
            iset_source_id=rec.get("iset_source_id"),
        )
    except KeyError as exc:
        raise DatasetError(f"missing field {exc}") from exc
    except (ScriptError, EditParseError, ValueError) as exc:
        if isinstance(exc, DatasetError):
            raise
        raise DatasetError(str(exc)) from exc


def validate_file(path: str) -> list[str]:
    """Line-numbered diagnostics for every invalid tuple; empty means clean."""
    problems = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                from_record(json.loads(line))
            except (json.JSONDecodeError, DatasetError) as exc:
                problems.append(f"{path}:{lineno}: {exc}")
    return problems


def load(path: str, strict: bool = True) -> list[EvalTuple]:
    """Load a tuple file. strict raises on the first bad line; lenient skips
    bad lines with a warning."""
    out: list[EvalTuple] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(from_record(json.loads(line)))
            except (json.JSONDecodeError, DatasetError) as exc:
                if strict:
                    raise DatasetError(f"{path}:{lineno}: {exc}") from exc
                logger.warning("%s:%d: skipping invalid tuple: %s", path, lineno, exc)
    return out


def save(path: str, tuples: list[EvalTuple]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in tuples:
            fh.write(json.dumps(to_record(t), ensure_ascii=False) + "\n")


# --- importing published data ------------------------------------------------


def _coerce_script(value, goal: str) -> Script:
    """Published layouts carry scripts as DOT text or as ordered step lists."""
    if isinstance(value, str):
        return parse_dot(value).with_goal(goal)
    if isinstance(value, list):
        steps = [re.sub(r"^\s*\d+\s*[.)]\s*", "", str(s)).strip() for s in value]
        return chain(goal, [s for s in steps if s])
    raise DatasetError(f"cannot read a script from {type(value).__name__}")


_X_KEYS = ("script_x_dot", "script_x", "input_graph", "x", "input")
_Y_KEYS = ("script_y_dot", "script_y", "output_graph", "y", "output")
_FB_KEYS = ("feedbacks", "feedback", "fb")
_EDIT_KEYS = ("edit", "gold_edit", "edit_text")


def _first_key(rec: dict, keys: tuple[str, ...]):
    for key in keys:
        if key in rec and rec[key] is not None:
            return rec[key]
    return None


_ERROR_BY_KIND = {
    EditKind.INSERT_BEFORE: ErrorType.MISSING_STEP,
    EditKind.INSERT_AFTER: ErrorType.MISSING_STEP,
    EditKind.REMOVE_NODE: ErrorType.WRONG_STEP,
    EditKind.REORDER_EDGE: ErrorType.WRONG_ORDER,
    EditKind.ADD_PARTIAL_ORDER: ErrorType.ADD_PARTIAL_ORDER,
    EditKind.REMOVE_PARTIAL_ORDER: ErrorType.REMOVE_PARTIAL_ORDER,
}


def import_published(path: str, quarantine_path: str | None = None) -> list[EvalTuple]:
    """Convert a published-layout file (JSON array or JSON lines) to tuples.

    The gold edit is taken from the record when present, otherwise derived by
    diff(x, y). Records that defeat conversion (multi-edit pairs, malformed
    graphs) are quarantined to a side file with reasons rather than dropped
    silently; records where x already equals y come back flagged as noop.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
        if isinstance(data, list):
            records = data
        elif "data" in data:
            records = data["data"]
        else:
            records = [data]  # a one-line JSON-lines file parses as one dict
    except json.JSONDecodeError:
        records = [json.loads(line) for line in text.splitlines() if line.strip()]

    quarantine_path = quarantine_path or path + ".quarantine.jsonl"
    kept: list[EvalTuple] = []
    quarantined: list[dict] = []
    for i, rec in enumerate(records):
        try:
            goal = str(rec.get("goal", rec.get("title", ""))).strip()
            x = _coerce_script(_first_key(rec, _X_KEYS), goal)
            y = _coerce_script(_first_key(rec, _Y_KEYS), goal)
            fbs = _first_key(rec, _FB_KEYS)
            if isinstance(fbs, str):
                fbs = [fbs]
            if not fbs:
                raise DatasetError("no feedback")
            edit_text = _first_key(rec, _EDIT_KEYS)
            if edit_text:
                edit = parse_edit(edit_text)
            elif scripts_equivalent(x, y):
                edit = noop()
            else:
                edit = diff(x, y)
            etype = None
            if rec.get("error_type"):
                etype = ErrorType(str(rec["error_type"]).strip().lower().replace(" ", "_"))
            elif edit.kind is not EditKind.NOOP:
                etype = _ERROR_BY_KIND[edit.kind]
            kept.append(
                EvalTuple(
                    id=str(rec.get("id", f"imported-{i}")),
                    goal=goal,
                    script_x=x,
                    feedbacks=tuple(fbs),
                    gold_edit=edit,
                    script_y=y,
                    error_type=etype,
                    split=Split(rec.get("split", "test")),
                )
            )
        except (DatasetError, ScriptError, EditParseError, NotSingleEditError, EditApplicationError, ValueError) as exc:
            quarantined.append({"index": i, "reason": str(exc), "record": rec})
    if quarantined:
        with open(quarantine_path, "w", encoding="utf-8") as fh:
            for row in quarantined:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        logger.warning("quarantined %d of %d records to %s", len(quarantined), len(records), quarantine_path)
    return kept


# --- ISET construction --------------------------------------------------------


@dataclass(frozen=True)
class PerturbationRule:
    """Replace a token sequence wherever it appears. kind is descriptive:
    lexical (synonym) or analogical (same-role substitute)."""

    match: str
    replacements: tuple[str, ...]
    kind: str = "lexical"

    def __post_init__(self):
        if not self.match.strip() or not self.replacements:
            raise DatasetError("perturbation rule needs a match and at least one replacement")
        if any(r.strip().lower() == self.match.strip().lower() for r in self.replacements):
            raise DatasetError(f"identity mapping for {self.match!r}")


@dataclass(frozen=True)
class PerturbationTable:
    rules: tuple[PerturbationRule, ...]

    @classmethod
    def from_json(cls, text: str) -> "PerturbationTable":
        rows = json.loads(text)
        rules = []
        for row in rows:
            repl = row["replace"]
            repls = tuple([repl] if isinstance(repl, str) else repl)
            rules.append(PerturbationRule(row["match"], repls, row.get("kind", "lexical")))
        return cls(tuple(rules))

    @classmethod
    def load(cls, path: str) -> "PerturbationTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    @classmethod
    def bundled(cls) -> "PerturbationTable":
        text = resources.files("scriptfix.data").joinpath("perturbations.json").read_text("utf-8")
        return cls.from_json(text)


def _substitute(text: str, match: str, replacement: str) -> str:
    pattern = r"\b" + r"\s+".join(re.escape(tok) for tok in match.split()) + r"\b"
    return re.sub(pattern, replacement, text, flags=re.IGNORECASE)


def _perturb_text(text: str, picks: list[tuple[str, str]]) -> str:
    for match, replacement in picks:
        text = _substitute(text, match, replacement)
    return text


def _perturb_script(s: Script, picks: list[tuple[str, str]]) -> Script:
    nodes = tuple(Node(n.id, _perturb_text(n.label, picks)) for n in s.nodes)
    return Script(goal=_perturb_text(s.goal, picks), nodes=nodes, edges=s.edges)


def _perturb_edit(e: EditCommand, picks: list[tuple[str, str]]) -> EditCommand:
    if e.kind is EditKind.NOOP:
        return e
    arg = _perturb_text(e.arg, picks) if e.arg is not None else None
    locs = tuple(NodeRef(_perturb_text(ref.label, picks), ref.occurrence) for ref in e.locs)
    return EditCommand(e.kind, arg=arg, locs=locs)


def build_iset(sources: list[EvalTuple], table: PerturbationTable, seed: int = 0) -> list[EvalTuple]:
    """Deterministically perturb each source tuple into an ISET twin.

    Every matching rule is applied consistently across labels, goal, feedback
    and the gold edit; when a rule offers several replacements the seeded RNG
    picks one. Twins that no longer satisfy the apply-check (a substitution
    collided with an existing label, say) are reported and skipped. An empty
    table yields identity twins.
    """
    rng = random.Random(seed)
    out: list[EvalTuple] = []
    for src in sources:
        picks = [(rule.match, rng.choice(rule.replacements)) for rule in table.rules]
        try:
            twin = EvalTuple(
                id=f"{src.id}-iset",
                goal=_perturb_text(src.goal, picks),
                script_x=_perturb_script(src.script_x, picks),
                feedbacks=tuple(_perturb_text(fb, picks) for fb in src.feedbacks),
                gold_edit=_perturb_edit(src.gold_edit, picks),
                script_y=_perturb_script(src.script_y, picks),
                error_type=src.error_type,
                split=Split.ISET,
                iset_source_id=src.id,
            )
        except (DatasetError, ScriptError, ValueError) as exc:
            logger.warning("perturbation broke tuple %s, skipping: %s", src.id, exc)
            continue
        out.append(twin)
    return out


def attach_distractors(tuples: list[EvalTuple], k: int = 4, embedder=None) -> list[tuple[EvalTuple, str]]:
    """Pair each tuple with the feedback of its rank-k script neighbor.

    Rank 1 is the most similar other tuple; rank k is lexically related but
    (almost surely) about a different flaw. Skips forward past neighbors whose
    feedback happens to equal the tuple's own, so the distractor is never the
    true feedback. Needs at least k+1 tuples.
    """
    from .memory import HashingEmbedder

    if len(tuples) < k + 1:
        raise DatasetError(f"need at least {k + 1} tuples for rank-{k} distractors")
    embedder = embedder or HashingEmbedder()
    vecs = [embedder.embed_script(t.script_x) for t in tuples]
    out = []
    for i, t in enumerate(tuples):
        sims = [(float(vecs[i] @ vecs[j]), j) for j in range(len(tuples)) if j != i]
        sims.sort(key=lambda p: (-p[0], p[1]))
        own = t.feedbacks[0].strip()
        pick = None
        for rank in range(k - 1, len(sims)):
            candidate = tuples[sims[rank][1]].feedbacks[0]
            if candidate.strip() != own:
                pick = candidate
                break
        if pick is None:
            raise DatasetError(f"no usable distractor for tuple {t.id!r}")
        out.append((t, pick))
    return out
