"""Debate transcripts and community-QA threads: ingestion, validation,
segmentation, and all labels.

File formats (line-delimited JSON, UTF-8):

* Debate transcript — one record per sentence:
  ``{debate_id, sentence_id, speaker, is_moderator, text, events[],
  annotations{source: 0|1 for the nine sources}, tokens?}``
  where optional ``tokens`` is a list of ``[surface, pos|null, ne|null]``.
  System events (applause / laugh / crosstalk) attach to the sentence they
  follow.

* cQA threads — one record per thread, mirroring :class:`CqaThread`; an
  optional sidecar file ``{id, tokens}`` keyed by question/answer id carries
  ingested token annotations.

Corpora are immutable after loading; loaders are the only writers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .text import Token, make_tokens

SOURCES = ("CT", "ABC", "CNN", "WP", "NPR", "PF", "TG", "NYT", "FC")
SYSTEM_EVENTS = frozenset({"applause", "laugh", "crosstalk"})

QUESTION_CLASSES = ("Factual", "Opinion", "Socializing")
FACTUALITY_LABELS = ("Positive", "Negative")
FINE_LABELS = (
    "Factual - True",
    "Factual - False",
    "Factual - Partially True",
    "Factual - Conditionally True",
    "Factual - Responder Unsure",
    "NonFactual",
)
GOODNESS_LABELS = ("Good", "Bad", "PotentiallyUseful")


class CorpusError(ValueError):
    pass


class ParseError(CorpusError):
    """Malformed record, positioned at its source line."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class SchemaError(CorpusError):
    """Structurally parseable input violating the corpus schema."""


@dataclass(frozen=True)
class Sentence:
    id: int
    text: str
    speaker: str
    is_moderator: bool = False
    system_events: frozenset[str] = frozenset()
    tokens: tuple[Token, ...] = ()

    def words(self) -> list[str]:
        return [t.surface for t in self.tokens]


class AnnotationMatrix:
    """Binary sentence x source matrix over the nine fixed sources, with the
    derived ANY column (logical OR)."""

    def __init__(self, rows: dict[int, dict[str, int]]):
        for sid, row in rows.items():
            unknown = set(row) - set(SOURCES)
            if unknown:
                raise SchemaError(
                    f"sentence {sid}: unknown annotation source(s) {sorted(unknown)}"
                )
            missing = set(SOURCES) - set(row)
            if missing:
                raise SchemaError(
                    f"sentence {sid}: missing annotation source(s) {sorted(missing)}"
                )
            for src, v in row.items():
                if v not in (0, 1):
                    raise SchemaError(f"sentence {sid}: non-binary cell {src}={v!r}")
        self._rows = {sid: dict(row) for sid, row in rows.items()}

    def value(self, sentence_id: int, source: str) -> int:
        if source == "ANY":
            return self.any_label(sentence_id)
        if source not in SOURCES:
            raise SchemaError(f"unknown source {source!r}")
        return self._rows[sentence_id][source]

    def any_label(self, sentence_id: int) -> int:
        return int(any(self._rows[sentence_id][s] for s in SOURCES))

    def row(self, sentence_id: int) -> dict[str, int]:
        return dict(self._rows[sentence_id])

    def count(self, source: str) -> int:
        if source == "ANY":
            return sum(self.any_label(sid) for sid in self._rows)
        return sum(row[source] for row in self._rows.values())

    def sentence_ids(self):
        return self._rows.keys()

    def __eq__(self, other):
        return isinstance(other, AnnotationMatrix) and self._rows == other._rows


@dataclass(frozen=True)
class Debate:
    debate_id: str
    sentences: tuple[Sentence, ...]
    annotations: AnnotationMatrix

    @property
    def moderators(self) -> frozenset[str]:
        return frozenset(s.speaker for s in self.sentences if s.is_moderator)

    @property
    def candidates(self) -> tuple[str, ...]:
        seen: list[str] = []
        for s in self.sentences:
            if not s.is_moderator and s.speaker not in seen:
                seen.append(s.speaker)
        return tuple(seen)

    def positive_count(self) -> int:
        return self.annotations.count("ANY")

    def source_count(self, source: str) -> int:
        return self.annotations.count(source)

    def sentence_by_id(self, sentence_id: int) -> Sentence:
        for s in self.sentences:
            if s.id == sentence_id:
                return s
        raise KeyError(sentence_id)


@dataclass(frozen=True)
class Segment:
    speaker: str
    sentence_ids: tuple[int, ...]
    index_in_debate: int

    def __len__(self):
        return len(self.sentence_ids)


def _coerce_tokens(raw, text: str):
    if raw is None:
        return tuple(make_tokens(text))
    out = []
    for entry in raw:
        if isinstance(entry, str):
            out.append(Token(entry))
        else:
            surface, pos, ne = (list(entry) + [None, None])[:3]
            out.append(Token(surface, pos, ne))
    return tuple(out)


def load_debates(path) -> list[Debate]:
    """Parse a transcript file into debates with annotation matrices."""
    path = Path(path)
    per_debate: dict[str, list[Sentence]] = {}
    per_debate_rows: dict[str, dict[int, dict[str, int]]] = {}
    order: list[str] = []
    any_records = False
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            any_records = True
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from exc
            try:
                debate_id = str(rec["debate_id"])
                sid = int(rec["sentence_id"])
                speaker = str(rec["speaker"])
                text = str(rec["text"])
                annotations = rec["annotations"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, lineno, f"malformed record: {exc}") from exc
            if not text:
                raise ParseError(path, lineno, "empty sentence text")
            if not speaker:
                raise ParseError(path, lineno, "missing speaker")
            events = frozenset(rec.get("events", ()))
            bad_events = events - SYSTEM_EVENTS
            if bad_events:
                raise ParseError(path, lineno, f"unknown system events {sorted(bad_events)}")
            sentence = Sentence(
                id=sid,
                text=text,
                speaker=speaker,
                is_moderator=bool(rec.get("is_moderator", False)),
                system_events=events,
                tokens=_coerce_tokens(rec.get("tokens"), text),
            )
            bucket = per_debate.setdefault(debate_id, [])
            rows = per_debate_rows.setdefault(debate_id, {})
            if debate_id not in order:
                order.append(debate_id)
            if sid in rows:
                raise ParseError(path, lineno, f"duplicate sentence id {sid}")
            bucket.append(sentence)
            rows[sid] = annotations
    if not any_records:
        raise CorpusError(f"{path}: no records")
    debates = []
    for debate_id in order:
        matrix = AnnotationMatrix(per_debate_rows[debate_id])
        debates.append(
            Debate(debate_id, tuple(per_debate[debate_id]), matrix)
        )
    return debates


def save_debates(debates, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for debate in debates:
            for s in debate.sentences:
                rec = {
                    "debate_id": debate.debate_id,
                    "sentence_id": s.id,
                    "speaker": s.speaker,
                    "is_moderator": s.is_moderator,
                    "text": s.text,
                    "events": sorted(s.system_events),
                    "annotations": debate.annotations.row(s.id),
                    "tokens": [[t.surface, t.pos, t.ne] for t in s.tokens],
                }
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def segment_debate(debate: Debate) -> list[Segment]:
    """Partition into maximal same-speaker runs, in transcript order."""
    segments: list[Segment] = []
    current_speaker = None
    current_ids: list[int] = []
    for s in debate.sentences:
        if not s.speaker:
            raise SchemaError(f"sentence {s.id} has no speaker")
        if s.speaker != current_speaker:
            if current_ids:
                segments.append(
                    Segment(current_speaker, tuple(current_ids), len(segments))
                )
            current_speaker = s.speaker
            current_ids = [s.id]
        else:
            current_ids.append(s.id)
    if current_ids:
        segments.append(Segment(current_speaker, tuple(current_ids), len(segments)))
    return segments


@dataclass(frozen=True)
class CqaQuestion:
    id: str
    subject: str
    body: str
    category: str = ""
    datetime: str = ""
    user: str = ""
    tokens: tuple[Token, ...] = ()

    def text(self) -> str:
        return f"{self.subject} {self.body}".strip()


@dataclass(frozen=True)
class CqaAnswer:
    id: str
    text: str
    user: str = ""
    goodness: str = "Good"
    factuality: str | None = None
    fine_label: str | None = None
    tokens: tuple[Token, ...] = ()


@dataclass(frozen=True)
class CqaThread:
    question: CqaQuestion
    answers: tuple[CqaAnswer, ...]
    question_class: str | None = None
    excluded: bool = False

    def good_answers(self) -> tuple[CqaAnswer, ...]:
        return tuple(a for a in self.answers if a.goodness == "Good")


def _load_sidecar(path) -> dict[str, tuple[Token, ...]]:
    out: dict[str, tuple[Token, ...]] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                out[str(rec["id"])] = _coerce_tokens(rec["tokens"], "")
            except (json.JSONDecodeError, KeyError) as exc:
                raise ParseError(path, lineno, f"malformed sidecar record: {exc}") from exc
    return out


def load_cqa(path, sidecar=None) -> list[CqaThread]:
    """Parse a thread file; attach question classes, factuality labels, and
    optional sidecar tokens."""
    path = Path(path)
    tokens_by_id = _load_sidecar(sidecar) if sidecar else {}
    threads: list[CqaThread] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from exc
            try:
                q = rec["question"]
                question = CqaQuestion(
                    id=str(q["id"]),
                    subject=str(q.get("subject", "")),
                    body=str(q.get("body", "")),
                    category=str(q.get("category", "")),
                    datetime=str(q.get("datetime", "")),
                    user=str(q.get("user", "")),
                )
            except (KeyError, TypeError) as exc:
                raise ParseError(path, lineno, f"malformed question: {exc}") from exc
            qc = rec.get("question_class")
            if qc is not None and qc not in QUESTION_CLASSES:
                raise SchemaError(f"{path}:{lineno}: unknown question class {qc!r}")
            answers = []
            for a in rec.get("answers", ()):
                try:
                    answer = CqaAnswer(
                        id=str(a["id"]),
                        text=str(a["text"]),
                        user=str(a.get("user", "")),
                        goodness=str(a.get("goodness", "Good")),
                        factuality=a.get("factuality"),
                        fine_label=a.get("fine_label"),
                    )
                except (KeyError, TypeError) as exc:
                    raise ParseError(path, lineno, f"malformed answer: {exc}") from exc
                if answer.goodness not in GOODNESS_LABELS:
                    raise SchemaError(
                        f"{path}:{lineno}: unknown goodness label {answer.goodness!r}"
                    )
                if answer.factuality is not None:
                    if answer.factuality not in FACTUALITY_LABELS:
                        raise SchemaError(
                            f"{path}:{lineno}: unknown factuality label "
                            f"{answer.factuality!r}"
                        )
                    if answer.goodness != "Good":
                        raise SchemaError(
                            f"{path}:{lineno}: factuality label on non-Good "
                            f"answer {answer.id}"
                        )
                if answer.fine_label is not None and answer.fine_label not in FINE_LABELS:
                    raise SchemaError(
                        f"{path}:{lineno}: unknown fine label {answer.fine_label!r}"
                    )
                sidecar_tokens = tokens_by_id.get(answer.id)
                answer = replace(
                    answer,
                    tokens=sidecar_tokens or tuple(make_tokens(answer.text)),
                )
                answers.append(answer)
            question = replace(
                question,
                tokens=tokens_by_id.get(question.id)
                or tuple(make_tokens(question.text())),
            )
            threads.append(
                CqaThread(
                    question=question,
                    answers=tuple(answers),
                    question_class=qc,
                    excluded=bool(rec.get("excluded", False)),
                )
            )
    if not threads:
        raise CorpusError(f"{path}: no records")
    return threads


def save_cqa(threads, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for t in threads:
            rec = {
                "question": {
                    "id": t.question.id,
                    "subject": t.question.subject,
                    "body": t.question.body,
                    "category": t.question.category,
                    "datetime": t.question.datetime,
                    "user": t.question.user,
                },
                "answers": [
                    {
                        "id": a.id,
                        "text": a.text,
                        "user": a.user,
                        "goodness": a.goodness,
                        "factuality": a.factuality,
                        "fine_label": a.fine_label,
                    }
                    for a in t.answers
                ],
                "question_class": t.question_class,
                "excluded": t.excluded,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def question_class_counts(threads) -> dict[str, int]:
    counts = {qc: 0 for qc in QUESTION_CLASSES}
    for t in threads:
        if t.question_class and not t.excluded:
            counts[t.question_class] += 1
    return counts


def factuality_counts(threads) -> dict[str, int]:
    counts = {lab: 0 for lab in FACTUALITY_LABELS}
    for t in threads:
        for a in t.answers:
            if a.factuality:
                counts[a.factuality] += 1
    return counts
