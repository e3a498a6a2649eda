"""Keyword repository and the lemma-to-security-property linking step."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyPropertySetError, WeakenedCanonicalEntryError
from .model import ALL_PROPERTIES, PROPERTY_ORDER, SecurityProperty
from .parsing import ExtractionResult

PROVENANCE_TABLE = "table4"
PROVENANCE_SYNONYM = "synonym"
PROVENANCE_USER = "user"

_C = SecurityProperty.CONFIDENTIALITY
_I = SecurityProperty.INTEGRITY
_A = SecurityProperty.AVAILABILITY
_IA = SecurityProperty.IDENTIFICATION_AUTHENTICATION

#: The built-in keyword matrix. These nine rows are canonical: they are
#: always present and their property sets can grow but never shrink.
CANONICAL_KEYWORDS: dict[str, frozenset[SecurityProperty]] = {
    "access": frozenset({_C, _IA}),
    "change": frozenset({_I}),
    "export": frozenset({_C}),
    "send": frozenset({_C}),
    "recover": frozenset({_A}),
    "backup": frozenset({_A}),
    "password": frozenset({_IA}),
    "role": frozenset({_IA}),
    "time": frozenset({_A}),
}

#: Synonyms shipped alongside the canonical rows so common phrasings of the
#: same concepts still match. Extensible through repository files.
DEFAULT_SYNONYMS: dict[str, frozenset[SecurityProperty]] = {
    "login": frozenset({_IA}),
    "log": frozenset({_IA}),
    "authenticate": frozenset({_IA}),
    "authentication": frozenset({_IA}),
    "credential": frozenset({_IA}),
    "account": frozenset({_IA}),
    "user": frozenset({_IA}),
    "permission": frozenset({_IA}),
    "privilege": frozenset({_IA}),
    "share": frozenset({_C}),
    "transfer": frozenset({_C}),
    "download": frozenset({_C}),
    "upload": frozenset({_C}),
    "encrypt": frozenset({_C}),
    "encryption": frozenset({_C}),
    "private": frozenset({_C}),
    "confidential": frozenset({_C}),
    "modify": frozenset({_I}),
    "edit": frozenset({_I}),
    "update": frozenset({_I}),
    "delete": frozenset({_I}),
    "remove": frozenset({_I}),
    "validate": frozenset({_I}),
    "audit": frozenset({_I}),
    "restore": frozenset({_A}),
    "available": frozenset({_A}),
    "uptime": frozenset({_A}),
    "back up": frozenset({_A}),
}


@dataclass(frozen=True)
class RepositoryEntry:
    keyword: str
    properties: frozenset[SecurityProperty]
    provenance: str

    def to_dict(self) -> dict:
        return {
            "keyword": self.keyword,
            "properties": sorted(p.code for p in self.properties),
            "provenance": self.provenance,
        }


class KeywordRepository:
    """Immutable lemma -> security-property mapping.

    Keywords are stored lowercase and lemmatized; a keyword may span several
    tokens ("back up"), in which case it matches contiguous lemma sequences.
    """

    def __init__(self, entries: dict[str, RepositoryEntry] | None = None):
        merged = {
            keyword: RepositoryEntry(keyword, properties, PROVENANCE_TABLE)
            for keyword, properties in CANONICAL_KEYWORDS.items()
        }
        if entries:
            for keyword, entry in entries.items():
                canonical = CANONICAL_KEYWORDS.get(keyword)
                if canonical is not None and not canonical <= entry.properties:
                    missing = ", ".join(
                        sorted(p.code for p in canonical - entry.properties)
                    )
                    raise WeakenedCanonicalEntryError(
                        f"entry {keyword!r} drops canonical properties: {missing}"
                    )
                if not entry.properties:
                    raise EmptyPropertySetError(f"entry {keyword!r} has no properties")
                merged[keyword] = entry
        self._entries = merged

    @classmethod
    def default(cls) -> "KeywordRepository":
        entries = {
            keyword: RepositoryEntry(keyword, properties, PROVENANCE_SYNONYM)
            for keyword, properties in DEFAULT_SYNONYMS.items()
        }
        return cls(entries)

    def entries(self) -> list[RepositoryEntry]:
        return [self._entries[k] for k in sorted(self._entries)]

    def properties_for(self, keyword: str) -> frozenset[SecurityProperty] | None:
        entry = self._entries.get(keyword.lower())
        return entry.properties if entry else None

    def __contains__(self, keyword: str) -> bool:
        return keyword.lower() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def add(
        self,
        keyword: str,
        properties: set[SecurityProperty] | frozenset[SecurityProperty],
        provenance: str = PROVENANCE_USER,
    ) -> "KeywordRepository":
        """A new repository with the entry added or replaced.

        Canonical rows may gain properties but never lose one; re-adding a
        canonical row with exactly its canonical set is a no-op.
        """
        keyword = " ".join(keyword.lower().split())
        if not keyword:
            raise ValueError("keyword must be non-empty")
        properties = frozenset(properties)
        if not properties:
            raise EmptyPropertySetError(f"cannot map {keyword!r} to no properties")
        canonical = CANONICAL_KEYWORDS.get(keyword)
        if canonical is not None:
            if not canonical <= properties:
                missing = ", ".join(sorted(p.code for p in canonical - properties))
                raise WeakenedCanonicalEntryError(
                    f"cannot remove canonical properties from {keyword!r}: {missing}"
                )
            current = self._entries[keyword]
            if properties == current.properties:
                return self
        non_canonical = {
            k: e for k, e in self._entries.items() if e.provenance != PROVENANCE_TABLE
        }
        non_canonical[keyword] = RepositoryEntry(keyword, properties, provenance)
        return KeywordRepository(non_canonical)

    def to_dict(self) -> dict:
        return {"entries": [entry.to_dict() for entry in self.entries()]}

    @classmethod
    def from_dict(cls, data: dict) -> "KeywordRepository":
        entries: dict[str, RepositoryEntry] = {}
        for raw in data.get("entries", []):
            keyword = " ".join(raw["keyword"].lower().split())
            properties = frozenset(
                SecurityProperty.from_code(code) for code in raw["properties"]
            )
            if not properties:
                raise EmptyPropertySetError(f"entry {keyword!r} has no properties")
            entries[keyword] = RepositoryEntry(
                keyword, properties, raw.get("provenance", PROVENANCE_USER)
            )
        return cls(entries)

    @classmethod
    def load(cls, path: str | Path) -> "KeywordRepository":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_dict(), handle, indent=2)
            handle.write("\n")


@dataclass(frozen=True)
class LinkResult:
    """Security properties selected for one story.

    When no lemma matches any keyword the story is linked to all four
    properties and ``fallback_applied`` is set.
    """

    story_id: str
    matched: tuple[tuple[str, frozenset[SecurityProperty]], ...]
    properties: frozenset[SecurityProperty]
    fallback_applied: bool

    def ordered_properties(self) -> list[SecurityProperty]:
        return [p for p in PROPERTY_ORDER if p in self.properties]

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "matched": [
                {"keyword": keyword, "properties": sorted(p.code for p in props)}
                for keyword, props in self.matched
            ],
            "properties": [p.code for p in self.ordered_properties()],
            "fallback_applied": self.fallback_applied,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinkResult":
        return cls(
            story_id=data["story_id"],
            matched=tuple(
                (
                    item["keyword"],
                    frozenset(SecurityProperty.from_code(c) for c in item["properties"]),
                )
                for item in data["matched"]
            ),
            properties=frozenset(
                SecurityProperty.from_code(c) for c in data["properties"]
            ),
            fallback_applied=data["fallback_applied"],
        )


def _candidate_phrases(lemmas: tuple[str, ...], max_width: int) -> list[str]:
    phrases = []
    for width in range(1, max_width + 1):
        for start in range(len(lemmas) - width + 1):
            phrases.append(" ".join(lemmas[start : start + width]))
    return phrases


def link(extraction: ExtractionResult, repo: KeywordRepository) -> LinkResult:
    """Match extracted lemmas against the repository.

    Matching is exact and case-insensitive on lemmas; multi-token keywords
    match contiguous runs within the verb list or within the noun list.
    Zero matches trigger the all-properties fallback.
    """
    max_width = max((len(e.keyword.split()) for e in repo.entries()), default=1)
    matched: list[tuple[str, frozenset[SecurityProperty]]] = []
    seen: set[str] = set()
    for block in (extraction.verbs, extraction.nouns):
        for phrase in _candidate_phrases(block, max_width):
            if phrase in seen:
                continue
            properties = repo.properties_for(phrase)
            if properties is not None:
                matched.append((phrase, properties))
                seen.add(phrase)

    if matched:
        properties = frozenset().union(*(props for _, props in matched))
        fallback = False
    else:
        properties = ALL_PROPERTIES
        fallback = True

    return LinkResult(
        story_id=extraction.story_id,
        matched=tuple(matched),
        properties=properties,
        fallback_applied=fallback,
    )
