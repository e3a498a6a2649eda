"""User-story parsing and deterministic keyword extraction.

Stories follow the "As a [role], I want [feature], so that [reason]"
skeleton, which localizes the interesting words: the action verbs live in
the feature block and the candidate nouns in the reason block. That makes
a small rule-based lexicon sufficient; no statistical tagging is involved,
so extraction is reproducible byte for byte.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedStoryError, MissingReasonError
from .model import UserStory

log = logging.getLogger(__name__)

_AS_A_RE = re.compile(r"\bas\s+an?\b", re.IGNORECASE)
_I_WANT_RE = re.compile(r"\bi\s+want\b(\s+to\b)?", re.IGNORECASE)
_SO_THAT_RE = re.compile(r"\bso\s+that\b", re.IGNORECASE)

_TOKEN_RE = re.compile(r"[a-z]+")

_VOWELS = "aeiou"
# Geminated consonants kept as-is when stripping vowel-initial suffixes
# ("falling" -> "fall", "passing" -> "pass", but "stopping" -> "stop").
_KEEP_DOUBLED = "lsz"


def _strip_edges(text: str) -> str:
    return text.strip().strip(".,;:!?…").strip()


def parse_story(raw_text: str, *, story_id: str = "US1", strict: bool = True) -> UserStory:
    """Split a raw story sentence into its role, feature and reason blocks.

    In strict mode a missing "so that" clause raises MissingReasonError;
    in lenient mode it is logged and the reason is left empty.
    """
    if not raw_text or not raw_text.strip():
        raise MalformedStoryError("story text is empty")

    as_a = _AS_A_RE.search(raw_text)
    if as_a is None:
        raise MalformedStoryError(f"story {story_id}: no 'As a' marker found")
    i_want = _I_WANT_RE.search(raw_text, as_a.end())
    if i_want is None:
        raise MalformedStoryError(f"story {story_id}: no 'I want' marker found")

    so_that = _SO_THAT_RE.search(raw_text, i_want.end())
    if so_that is None:
        if strict:
            raise MissingReasonError(f"story {story_id}: no 'so that' clause found")
        log.warning("story %s has no 'so that' clause; reason left empty", story_id)

    role = _strip_edges(raw_text[as_a.end() : i_want.start()])
    feature_end = so_that.start() if so_that else len(raw_text)
    feature = _strip_edges(raw_text[i_want.end() : feature_end])
    reason = _strip_edges(raw_text[so_that.end() :]) if so_that else ""

    if not role:
        raise MalformedStoryError(f"story {story_id}: empty role block")
    if not feature:
        raise MalformedStoryError(f"story {story_id}: empty feature block")

    return UserStory(id=story_id, role=role, feature=feature, reason=reason, raw_text=raw_text)


def reconstructed_text(story: UserStory) -> str:
    """The story re-assembled from its blocks in the canonical skeleton."""
    return f"As a {story.role}, I want {story.feature}, so that {story.reason}"


@dataclass(frozen=True)
class Lexicon:
    """Word lists driving extraction: stopwords, verb forms, noun suffixes.

    ``verb_lemma_table`` maps inflected or irregular verb forms to their
    lemma and doubles as the verb recognizer. ``noun_suffix_rules`` is an
    ordered list of (suffix, replacement) rewrites applied to the first
    match only.
    """

    stopwords: frozenset[str]
    verb_lemma_table: dict[str, str] = field(default_factory=dict)
    noun_suffix_rules: tuple[tuple[str, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "stopwords": sorted(self.stopwords),
            "verb_lemmas": dict(sorted(self.verb_lemma_table.items())),
            "noun_suffix_rules": [list(rule) for rule in self.noun_suffix_rules],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Lexicon":
        return cls(
            stopwords=frozenset(w.lower() for w in data.get("stopwords", [])),
            verb_lemma_table={
                form.lower(): lemma.lower()
                for form, lemma in data.get("verb_lemmas", {}).items()
            },
            noun_suffix_rules=tuple(
                (suffix, replacement)
                for suffix, replacement in data.get("noun_suffix_rules", [])
            ),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


_DEFAULT_STOPWORDS = frozenset(
    """
    a an the
    i me my mine you your yours he him his she her hers it its we us our ours
    they them their theirs this that these those who whom whose which what
    myself yourself himself herself itself ourselves themselves something
    anything everything nothing someone anyone everyone
    in on at by for with about against between into through during before
    after above below to from up down out off over under of as within without
    onto upon via per across around near behind beside
    be am is are was were been being have has had having do does did doing
    will would shall should may might must can could want wants wanted need
    needs needed able
    and or but nor so yet if because while when where than then once unless
    until although though whether
    all any both each few more most other others some such only own same no
    not too very also just again further there here how why ever never always
    often sometimes
    """.split()
)

# Verb forms recognized outright. Keys double as a "this token is a verb"
# test, so base forms of noun-capable keywords (access, backup, change,
# export, send, recover, password, role, time) are deliberately absent:
# those must survive as nouns when they appear in the reason block.
_DEFAULT_VERB_LEMMAS: dict[str, str] = {}


def _add_verb(lemma: str, *forms: str) -> None:
    for form in forms:
        _DEFAULT_VERB_LEMMAS[form] = lemma


_add_verb("use", "use", "uses", "used", "using")
_add_verb("stay", "stays", "stayed", "staying")
_add_verb("secure", "secure", "secures", "secured", "securing")
_add_verb("make", "make", "makes", "made", "making")
_add_verb("get", "get", "gets", "got", "getting", "gotten")
_add_verb("see", "see", "sees", "saw", "seeing", "seen")
_add_verb("know", "know", "knows", "knew", "knowing", "known")
_add_verb("keep", "keep", "keeps", "kept", "keeping")
_add_verb("go", "go", "goes", "went", "going", "gone")
_add_verb("take", "take", "takes", "took", "taking", "taken")
_add_verb("become", "become", "becomes", "became", "becoming")
_add_verb("ensure", "ensure", "ensures", "ensured", "ensuring")
_add_verb("remain", "remain", "remains", "remained", "remaining")
_add_verb("store", "stored", "storing")
_add_verb("bring", "bring", "brings", "brought", "bringing")
_add_verb("give", "give", "gives", "gave", "given", "giving")
_add_verb("find", "find", "finds", "found", "finding")
_add_verb("send", "sent")
_add_verb("change", "changed", "changing")
_add_verb("write", "written", "wrote", "writing")
_add_verb("read", "reading")
_add_verb("lose", "lose", "loses", "lost", "losing")
_add_verb("leave", "leave", "leaves", "left", "leaving")

_DEFAULT_NOUN_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("sses", "ss"),
    ("ies", "y"),
    ("ings", ""),
    ("ing", ""),
    ("ed", ""),
    ("s", ""),
)

DEFAULT_LEXICON = Lexicon(
    stopwords=_DEFAULT_STOPWORDS,
    verb_lemma_table=dict(_DEFAULT_VERB_LEMMAS),
    noun_suffix_rules=_DEFAULT_NOUN_SUFFIX_RULES,
)


def tokenize(text: str) -> list[str]:
    """Lowercase alphabetic tokens; any non-letter is a boundary."""
    return _TOKEN_RE.findall(text.lower())


def _apply_suffix_rule(token: str, suffix: str, replacement: str) -> str | None:
    if not token.endswith(suffix) or len(token) <= len(suffix):
        return None
    # Avoid chopping a repeated edge character ("access" must not lose an s).
    if token[-len(suffix) - 1] == suffix[0]:
        return None
    stem = token[: -len(suffix)] + replacement
    min_len = 4 if suffix[0] in _VOWELS else 3
    if len(stem) < min_len:
        return None
    if (
        suffix[0] in _VOWELS
        and len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and stem[-1] not in _KEEP_DOUBLED
    ):
        stem = stem[:-1]
    return stem


def lemmatize(token: str, lexicon: Lexicon = DEFAULT_LEXICON) -> str:
    """Reduce a token to its base form.

    The verb table wins; otherwise the first applicable noun suffix rule
    fires; otherwise the lowercased token is its own lemma.
    """
    token = token.lower()
    lemma = lexicon.verb_lemma_table.get(token)
    if lemma is not None:
        return lemma
    for suffix, replacement in lexicon.noun_suffix_rules:
        stem = _apply_suffix_rule(token, suffix, replacement)
        if stem is not None:
            return stem
    return token


@dataclass(frozen=True)
class ExtractionResult:
    """Lemmas pulled from one story: verbs from the feature block, nouns
    from the reason block, plus the combined escape-hatch list.

    ``all_lemmas`` additionally keeps feature-block content words that were
    not classified as verbs (keywords like "password" or "backup" are nouns
    even when they show up in the feature), so callers that want a wider
    net than the block rule can still see them.
    """

    story_id: str
    verbs: tuple[str, ...]
    nouns: tuple[str, ...]
    all_lemmas: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "verbs": list(self.verbs),
            "nouns": list(self.nouns),
            "all_lemmas": list(self.all_lemmas),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtractionResult":
        return cls(
            story_id=data["story_id"],
            verbs=tuple(data["verbs"]),
            nouns=tuple(data["nouns"]),
            all_lemmas=tuple(data["all_lemmas"]),
        )


def _looks_like_adverb(token: str) -> bool:
    return len(token) > 3 and token.endswith("ly")


def _classify_feature_tokens(tokens: list[str], lexicon: Lexicon) -> list[bool]:
    """Mark which feature-block tokens are verbs.

    A token is a verb when the verb table knows it, when it opens the block
    (the skeleton puts the action first), when it follows an infinitive
    "to", or when it continues a verb chain across "and"/"or". Adverbs pass
    those position markers through to the next token.
    """
    is_verb = [False] * len(tokens)
    first_eligible_seen = False
    pending_infinitive = False
    pending_chain = False
    last_content_was_verb = False
    for idx, token in enumerate(tokens):
        if token == "to":
            pending_infinitive = True
            last_content_was_verb = False
            continue
        if token in ("and", "or"):
            pending_chain = last_content_was_verb
            continue
        if _looks_like_adverb(token):
            continue
        eligible = token not in lexicon.stopwords
        verb = token in lexicon.verb_lemma_table or pending_infinitive or pending_chain
        if eligible and not first_eligible_seen:
            verb = True
            first_eligible_seen = True
        is_verb[idx] = verb
        pending_infinitive = False
        pending_chain = False
        last_content_was_verb = verb and eligible
    return is_verb


def extract(story: UserStory, lexicon: Lexicon = DEFAULT_LEXICON) -> ExtractionResult:
    """Extract candidate verbs and nouns for property linking.

    Verbs come only from the feature block, nouns only from the reason
    block; the role block contributes nothing. Stopwords never appear in
    the output. The result is a pure function of (story, lexicon).
    """
    feature_tokens = tokenize(story.feature)
    reason_tokens = tokenize(story.reason)

    is_verb = _classify_feature_tokens(feature_tokens, lexicon)

    verbs: list[str] = []
    feature_extras: list[str] = []
    for token, verb in zip(feature_tokens, is_verb):
        if token in lexicon.stopwords:
            continue
        lemma = lemmatize(token, lexicon)
        if verb:
            if lemma not in verbs:
                verbs.append(lemma)
        elif lemma not in feature_extras:
            feature_extras.append(lemma)

    nouns: list[str] = []
    for token in reason_tokens:
        if token in lexicon.stopwords or token in lexicon.verb_lemma_table:
            continue
        lemma = lemmatize(token, lexicon)
        if lemma not in nouns:
            nouns.append(lemma)

    all_lemmas: list[str] = []
    for lemma in (*verbs, *feature_extras, *nouns):
        if lemma not in all_lemmas:
            all_lemmas.append(lemma)

    return ExtractionResult(
        story_id=story.id,
        verbs=tuple(verbs),
        nouns=tuple(nouns),
        all_lemmas=tuple(all_lemmas),
    )
