"""Fallback text processing: tokenizer, coarse POS tagger, capitalization NER,
sentence splitting.

These are deliberately simple, deterministic stand-ins used whenever the input
files do not carry ingested token/POS/NE annotations.  Feature modules consume
`Token` triples and never care which route produced them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Coarse tagset used for the 25 POS-count features.  Fixed order; do not
# reorder without versioning feature dumps.
POS_TAGS = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "MD", "NN", "NNP", "NNS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RP", "TO", "UH", "VB", "VBD",
    "VBG", "VBN", "VBP", "VBZ",
)

# NE type inventory for the 20 NE-count features.  "ENTITY" is the bucket the
# capitalization fallback maps everything to.
NE_TYPES = (
    "PERSON", "ORG", "LOC", "GPE", "FACILITY", "PRODUCT", "EVENT",
    "WORK_OF_ART", "LAW", "LANGUAGE", "DATE", "TIME", "PERCENT", "MONEY",
    "QUANTITY", "ORDINAL", "CARDINAL", "NORP", "MISC", "ENTITY",
)


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str | None = None
    ne: str | None = None


_WORD_RE = re.compile(r"[A-Za-z0-9]+(?:['’][A-Za-z]+)*|[^\sA-Za-z0-9]")

_DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no"}
_CONJUNCTIONS = {"and", "or", "but", "nor", "yet", "so"}
_PREPOSITIONS = {
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
    "about", "over", "under", "after", "before", "between", "against",
    "during", "through", "as", "if", "because", "while", "than", "that",
}
_MODALS = {"can", "could", "may", "might", "must", "shall", "should", "will", "would"}
_PRONOUNS = {
    "i", "we", "you", "he", "she", "it", "they", "me", "us", "him", "her",
    "them", "myself", "ourselves", "yourself", "yourselves", "himself",
    "herself", "itself", "themselves", "who", "whom", "anybody", "anyone",
    "everyone", "everybody", "someone", "somebody", "nobody",
}
_POSS_PRONOUNS = {"my", "our", "your", "his", "its", "their", "mine", "ours", "yours", "hers", "theirs"}
_PAST_VERBS = {
    "was", "were", "did", "had", "said", "went", "got", "made", "took",
    "came", "saw", "knew", "thought", "told", "became", "left", "felt",
    "put", "brought", "began", "kept", "held", "wrote", "stood", "heard",
    "let", "meant", "met", "ran", "paid", "sat", "spoke", "lost", "won",
    "attacked", "weakened", "failed", "looked", "proposed", "impeached",
}
_BASE_VERBS = {
    "be", "have", "do", "say", "go", "get", "make", "take", "come", "see",
    "know", "think", "tell", "believe", "want", "need", "give", "find",
    "use", "try", "ask", "work", "call", "open", "provide", "lose", "win",
    "pay", "vote", "support", "check", "claim", "guarantee", "figure",
}
_PRESENT_3SG = {"is", "has", "does", "says", "goes", "thinks", "believes", "wants", "knows", "seems"}
_PRESENT_PL = {"are", "am", "have", "do", "say", "go", "think", "believe", "want", "know", "seem"}
_INTERJECTIONS = {"oh", "well", "wow", "hey", "ok", "okay", "yes", "yeah", "no", "hmm", "uh"}
_ADVERBS = {"very", "too", "also", "just", "now", "then", "here", "there", "not", "never", "always", "again", "up", "down", "out"}

_ORDINAL_RE = re.compile(r"^\d+(st|nd|rd|th)$", re.IGNORECASE)


def tokenize(text: str) -> list[str]:
    """Whitespace+punctuation tokenizer; keeps internal apostrophes so that
    contractions like "didn't" stay one token."""
    return _WORD_RE.findall(text)


def _tag_word(word: str, prev: str | None) -> str:
    low = word.lower()
    if not word[0].isalnum():
        return "UH" if word in {"!", "?"} else "POS" if word in {"'", "’"} else "FW"
    if low in _MODALS:
        return "MD"
    if word.replace(",", "").replace(".", "").isdigit():
        return "CD"
    if _ORDINAL_RE.match(word):
        return "CD"
    if low in _DETERMINERS:
        return "DT"
    if low in _CONJUNCTIONS:
        return "CC"
    if low == "to":
        return "TO"
    if low in _POSS_PRONOUNS:
        return "PRP$"
    if low in _PRONOUNS:
        return "PRP"
    if low in _INTERJECTIONS:
        return "UH"
    if low == "there":
        return "EX"
    if low in _PREPOSITIONS:
        return "IN"
    if low in _PAST_VERBS or (low.endswith("ed") and len(low) > 3):
        return "VBD"
    if low in _PRESENT_3SG:
        return "VBZ"
    if low in _PRESENT_PL:
        return "VBP"
    if low.endswith("ing") and len(low) > 4:
        return "VBG"
    if low in _BASE_VERBS:
        return "VB"
    if low.endswith("ly") and len(low) > 3:
        return "RB"
    if low in _ADVERBS:
        return "RB"
    if low.endswith(("ous", "ful", "ible", "able", "ive", "al", "ic")) and len(low) > 4:
        return "JJ"
    if word[0].isupper() and prev is not None:
        return "NNP"
    if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
        return "NNS"
    return "NN"


def pos_tag(tokens: list[str]) -> list[str]:
    """Heuristic coarse POS tagging over the fixed 25-tag set."""
    tags = []
    prev = None
    for tok in tokens:
        tags.append(_tag_word(tok, prev))
        prev = tok
    return tags


def ne_tag(tokens: list[str]) -> list[str | None]:
    """Capitalization-heuristic NER: maximal runs of capitalized tokens (not
    counting a lone sentence-initial word) are tagged ENTITY."""
    tags: list[str | None] = [None] * len(tokens)
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok[:1].isupper() and tok[:1].isalpha():
            j = i
            while j < len(tokens) and tokens[j][:1].isupper() and tokens[j][:1].isalpha():
                j += 1
            run = j - i
            # a single capitalized sentence-opening word is most likely not a name
            if not (run == 1 and i == 0):
                for k in range(i, j):
                    tags[k] = "ENTITY"
            i = j
        else:
            i += 1
    return tags


def make_tokens(text: str) -> list[Token]:
    """Tokenize and annotate with the fallback POS and NE taggers."""
    words = tokenize(text)
    pos = pos_tag(words)
    nes = ne_tag(words)
    return [Token(w, p, n) for w, p, n in zip(words, pos, nes)]


_SENT_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def split_sentences(text: str) -> list[str]:
    """Period/question/exclamation based sentence splitting."""
    parts = [p.strip() for p in _SENT_SPLIT_RE.split(text)]
    return [p for p in parts if p]


def ne_span_count(tokens: list[Token]) -> int:
    """Number of contiguous named-entity spans in a token list."""
    count = 0
    prev_tagged = False
    for tok in tokens:
        tagged = tok.ne is not None
        if tagged and not prev_tagged:
            count += 1
        prev_tagged = tagged
    return count
