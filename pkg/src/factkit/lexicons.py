"""Cue lexicons and normalized cue-frequency features.

Twelve bias-type lexicons (factives, implicatives, assertives, hedges,
report verbs, wiki-bias terms, modals, negations, strong/weak subjectivity,
positive/negative sentiment) back 12 frequency features; a 13th feature
counts multi-word first-person cue patterns such as "I believe" or
"we can obviously see".

Lexicon files are plain text, one cue per line (n-grams allowed), `#`
comments ignored.  Small default lexicons ship with the package; callers may
load fuller ones from disk.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

BIAS_TYPES = (
    "factives",
    "implicatives",
    "assertives",
    "hedges",
    "report_verbs",
    "wiki_bias",
    "modals",
    "negations",
    "strong_subj",
    "weak_subj",
    "positives",
    "negatives",
)

VERB_CUE_TYPES = ("factives", "assertives", "implicatives", "report_verbs")


@dataclass(frozen=True)
class BiasLexicon:
    bias_type: str
    entries: frozenset[str]

    def __post_init__(self):
        if not self.entries:
            raise ValueError(f"lexicon {self.bias_type!r} is empty")

    @property
    def max_ngram(self) -> int:
        return max(len(e.split()) for e in self.entries)


@dataclass(frozen=True)
class CueFrequency:
    bias_type: str
    value: float


def load_lexicon(path, bias_type: str) -> BiasLexicon:
    entries = set()
    text = Path(path).read_text(encoding="utf-8")
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            entries.add(line)
    return BiasLexicon(bias_type, frozenset(entries))


def _lower(tokens) -> list[str]:
    out = []
    for tok in tokens:
        word = tok if isinstance(tok, str) else tok.surface
        out.append(word.lower())
    return out


def count_matches(tokens, lexicon: BiasLexicon) -> int:
    """Greedy left-to-right n-gram matching without overlap, longest first."""
    words = _lower(tokens)
    limit = lexicon.max_ngram
    count = 0
    i = 0
    while i < len(words):
        matched = 0
        for n in range(min(limit, len(words) - i), 0, -1):
            if " ".join(words[i : i + n]) in lexicon.entries:
                matched = n
                break
        if matched:
            count += 1
            i += matched
        else:
            i += 1
    return count


def cue_frequency(tokens, lexicon: BiasLexicon) -> CueFrequency:
    """Cue matches normalized by the total token count."""
    if not tokens:
        raise ValueError("empty text")
    value = count_matches(tokens, lexicon) / len(tokens)
    return CueFrequency(lexicon.bias_type, value)


def negation_count(tokens, negations: BiasLexicon) -> int:
    """Tokens that are negation cues (single-token membership)."""
    return sum(1 for w in _lower(tokens) if w in negations.entries)


class LexiconSet:
    """All twelve bias lexicons, keyed by bias type."""

    def __init__(self, lexicons: dict[str, BiasLexicon]):
        missing = set(BIAS_TYPES) - set(lexicons)
        if missing:
            raise ValueError(f"missing lexicons: {sorted(missing)}")
        self.lexicons = lexicons

    def __getitem__(self, bias_type: str) -> BiasLexicon:
        return self.lexicons[bias_type]

    @classmethod
    def from_dir(cls, directory) -> "LexiconSet":
        directory = Path(directory)
        return cls(
            {bt: load_lexicon(directory / f"{bt}.txt", bt) for bt in BIAS_TYPES}
        )

    @classmethod
    def default(cls) -> "LexiconSet":
        root = resources.files("factkit") / "resources" / "lexicons"
        return cls(
            {bt: load_lexicon(root / f"{bt}.txt", bt) for bt in BIAS_TYPES}
        )

    def verb_cues(self) -> frozenset[str]:
        out: set[str] = set()
        for bt in VERB_CUE_TYPES:
            out |= self.lexicons[bt].entries
        return frozenset(e for e in out if " " not in e)

    def strong_subj_adverbs(self) -> frozenset[str]:
        # the strong-subjectivity lexicon mixes parts of speech; -ly entries
        # serve as its adverbs
        return frozenset(
            e for e in self.lexicons["strong_subj"].entries
            if e.endswith("ly") and " " not in e
        )


def multiword_cue_count(tokens, lexicons: LexiconSet) -> int:
    """First-person cue patterns: I/we [+modal] [+adverb] +verb.

    The verb must be a factive, assertive, implicative, or report verb; the
    optional modal comes from the modals lexicon and the optional adverb from
    the strong-subjectivity -ly entries.  Each pronoun occurrence counts at
    most once.
    """
    words = _lower(tokens)
    verbs = lexicons.verb_cues()
    modals = lexicons["modals"].entries
    adverbs = lexicons.strong_subj_adverbs()
    count = 0
    for i, word in enumerate(words):
        if word not in ("i", "we"):
            continue
        rest = words[i + 1 : i + 4]
        if not rest:
            continue
        if rest[0] in verbs:
            count += 1
        elif rest[0] in adverbs and len(rest) > 1 and rest[1] in verbs:
            count += 1
        elif rest[0] in modals and len(rest) > 1:
            if rest[1] in verbs:
                count += 1
            elif rest[1] in adverbs and len(rest) > 2 and rest[2] in verbs:
                count += 1
    return count


def linguistic_features(tokens, lexicons: LexiconSet) -> list[float]:
    """The 13 linguistic cue features: 12 per-lexicon frequencies plus the
    multi-word cue count."""
    if not tokens:
        raise ValueError("empty text")
    values = [cue_frequency(tokens, lexicons[bt]).value for bt in BIAS_TYPES]
    values.append(float(multiword_cue_count(tokens, lexicons)))
    return values
