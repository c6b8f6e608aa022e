"""Shared fixture builders: tiny debates, threads, and vector files."""

import json

import pytest

from factkit.corpus import SOURCES


def debate_record(debate_id, sentence_id, speaker, text, *, moderator=False,
                  events=(), positive_sources=(), tokens=None):
    rec = {
        "debate_id": debate_id,
        "sentence_id": sentence_id,
        "speaker": speaker,
        "is_moderator": moderator,
        "text": text,
        "events": list(events),
        "annotations": {s: int(s in positive_sources) for s in SOURCES},
    }
    if tokens is not None:
        rec["tokens"] = tokens
    return rec


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    return path


@pytest.fixture
def tiny_debate_file(tmp_path):
    """One debate: moderator opening, two Clinton-like turns, one reply."""
    records = [
        debate_record("d1", 1, "Moderator", "Welcome to the debate.", moderator=True),
        debate_record("d1", 2, "Alpha", "Our economy is on the precipice of change.",
                      positive_sources=("NPR",)),
        debate_record("d1", 3, "Alpha", "Their plan would blow up the debt by five trillion dollars.",
                      positive_sources=("CT", "ABC", "NPR", "PF", "NYT", "FC"),
                      events=("applause",)),
        debate_record("d1", 4, "Alpha", "I think it's real."),
        debate_record("d1", 5, "Beta", "I did not.",
                      positive_sources=("CT", "ABC", "WP", "NPR", "PF")),
        debate_record("d1", 6, "Moderator", "Let's move on.", moderator=True,
                      events=("crosstalk",)),
    ]
    return write_jsonl(tmp_path / "debate.jsonl", records)


def cqa_thread_record(qid, subject, body, answers, question_class="Factual",
                      excluded=False, category="Visas"):
    return {
        "question": {
            "id": qid,
            "subject": subject,
            "body": body,
            "category": category,
            "datetime": "2016-01-01T00:00:00",
            "user": f"user_{qid}",
        },
        "answers": answers,
        "question_class": question_class,
        "excluded": excluded,
    }


def cqa_answer(aid, text, goodness="Good", factuality=None, fine_label=None, user=""):
    return {
        "id": aid,
        "text": text,
        "user": user or f"user_{aid}",
        "goodness": goodness,
        "factuality": factuality,
        "fine_label": fine_label,
    }


@pytest.fixture
def tiny_cqa_file(tmp_path):
    threads = [
        cqa_thread_record(
            "q1", "Visa extension", "How long can my wife stay on a visit visa?",
            [
                cqa_answer("q1_a1", "Maximum period is 9 months.", factuality="Negative",
                           fine_label="Factual - False"),
                cqa_answer("q1_a2", "6 months maximum.", factuality="Positive",
                           fine_label="Factual - True"),
                cqa_answer("q1_a3", "Search before asking.", goodness="Bad"),
            ],
        ),
        cqa_thread_record(
            "q2", "Best vet", "Can anyone recommend a good vet in the city?",
            [], question_class="Opinion",
        ),
        cqa_thread_record(
            "q3", "First car", "What was your first car?",
            [cqa_answer("q3_a1", "A rusty hatchback!", factuality=None)],
            question_class="Socializing",
        ),
    ]
    return write_jsonl(tmp_path / "threads.jsonl", threads)
