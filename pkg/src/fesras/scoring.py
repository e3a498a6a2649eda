"""Validation of filled defect reports and scoring against a seeded key.

Defects are counted in marks, mirroring how a filled reporting form reads:
each omitted requirement, each ambiguous or incorrect specification id, and
each member of an inconsistency group is one mark. Inconsistency groups
match atomically (exact set equality, no partial credit), and a matched
group is worth as many marks as it has members. A group may be a singleton
when a specification conflicts with its own story rather than with another
specification.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .errors import KeyMismatchError
from .model import DefectType
from .technique import ReadingTechnique, ReportForm

#: Inspectors get up to an hour; longer sessions are flagged, not rejected.
DEFAULT_SESSION_CAP_MINUTES = 60


@dataclass(frozen=True)
class StoryKey:
    """Seeded defects for one story."""

    story_id: str
    omitted_requirements: frozenset[str]
    ambiguous: frozenset[str]
    inconsistency_groups: tuple[frozenset[str], ...]
    incorrect_facts: frozenset[str]

    @property
    def seeded_count(self) -> int:
        return (
            len(self.omitted_requirements)
            + len(self.ambiguous)
            + sum(len(group) for group in self.inconsistency_groups)
            + len(self.incorrect_facts)
        )

    def per_type(self) -> dict[DefectType, int]:
        return {
            DefectType.OMISSION: len(self.omitted_requirements),
            DefectType.AMBIGUITY: len(self.ambiguous),
            DefectType.INCONSISTENCY: sum(len(g) for g in self.inconsistency_groups),
            DefectType.INCORRECT_FACT: len(self.incorrect_facts),
        }

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "omitted_requirements": sorted(self.omitted_requirements),
            "ambiguous": sorted(self.ambiguous),
            "inconsistency_groups": [sorted(g) for g in self.inconsistency_groups],
            "incorrect_facts": sorted(self.incorrect_facts),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StoryKey":
        return cls(
            story_id=data["story_id"],
            omitted_requirements=frozenset(data.get("omitted_requirements", ())),
            ambiguous=frozenset(data.get("ambiguous", ())),
            inconsistency_groups=tuple(
                frozenset(group) for group in data.get("inconsistency_groups", ())
            ),
            incorrect_facts=frozenset(data.get("incorrect_facts", ())),
        )


@dataclass(frozen=True)
class AnswerKey:
    """The seeded-defect key for a review document (one or more stories)."""

    stories: tuple[StoryKey, ...]

    @property
    def total_seeded(self) -> int:
        return sum(story.seeded_count for story in self.stories)

    def story(self, story_id: str) -> StoryKey:
        for story in self.stories:
            if story.story_id == story_id:
                return story
        raise KeyMismatchError(f"story {story_id!r} is not covered by the answer key")

    def __contains__(self, story_id: str) -> bool:
        return any(story.story_id == story_id for story in self.stories)

    def to_dict(self) -> dict:
        return {
            "stories": [story.to_dict() for story in self.stories],
            "total_seeded": self.total_seeded,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnswerKey":
        key = cls(stories=tuple(StoryKey.from_dict(s) for s in data["stories"]))
        declared = data.get("total_seeded")
        if declared is not None and declared != key.total_seeded:
            raise ValueError(
                f"answer key declares {declared} seeded defects but its stories "
                f"list {key.total_seeded}"
            )
        return key

    @classmethod
    def load(cls, path: str | Path) -> "AnswerKey":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_dict(), handle, indent=2)
            handle.write("\n")


def parse_timestamp(value: str | datetime) -> datetime:
    if isinstance(value, datetime):
        return value
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


@dataclass(frozen=True)
class ReviewEntry:
    """One story's filled form together with the technique it answered."""

    technique: ReadingTechnique
    form: ReportForm

    @property
    def story_id(self) -> str:
        return self.technique.story.id


@dataclass(frozen=True)
class ReviewSubmission:
    """A completed review: filled forms plus the recorded time window."""

    entries: tuple[ReviewEntry, ...]
    started_at: datetime
    ended_at: datetime

    @classmethod
    def single(
        cls,
        technique: ReadingTechnique,
        form: ReportForm,
        started_at: str | datetime,
        ended_at: str | datetime,
    ) -> "ReviewSubmission":
        return cls(
            entries=(ReviewEntry(technique, form),),
            started_at=parse_timestamp(started_at),
            ended_at=parse_timestamp(ended_at),
        )

    @property
    def duration_hours(self) -> float:
        return (self.ended_at - self.started_at).total_seconds() / 3600.0

    @property
    def duration_minutes(self) -> float:
        return (self.ended_at - self.started_at).total_seconds() / 60.0

    def exceeds_cap(self, cap_minutes: float = DEFAULT_SESSION_CAP_MINUTES) -> bool:
        return self.duration_minutes > cap_minutes


@dataclass(frozen=True)
class ValidationFinding:
    """One problem detected in a submission; findings are data, not errors.

    ``requirement_id`` names the form row the finding belongs to, when it
    belongs to one, so user interfaces can render it inline.
    """

    code: str
    story_id: str
    message: str
    requirement_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "story_id": self.story_id,
            "message": self.message,
            "requirement_id": self.requirement_id,
        }


DANGLING_SPEC_ID = "DanglingSpecId"
UNDERSIZED_GROUP = "UndersizedGroup"
UNKNOWN_REQUIREMENT = "UnknownRequirement"
NON_POSITIVE_DURATION = "NonPositiveDuration"


def validate_form(technique: ReadingTechnique, form: ReportForm) -> list[ValidationFinding]:
    """Structural checks of a filled form against its technique."""
    findings: list[ValidationFinding] = []
    story_id = technique.story.id
    known_specs = technique.specification_ids()
    known_reqs = technique.requirement_ids()

    def check_spec_ids(ids, where: str, requirement_id: str) -> None:
        for spec_id in ids:
            if spec_id not in known_specs:
                findings.append(
                    ValidationFinding(
                        DANGLING_SPEC_ID,
                        story_id,
                        f"{where} references unknown specification {spec_id!r}",
                        requirement_id=requirement_id,
                    )
                )

    for row in form.rows:
        if row.requirement_id not in known_reqs:
            findings.append(
                ValidationFinding(
                    UNKNOWN_REQUIREMENT,
                    story_id,
                    f"form row references requirement {row.requirement_id!r}, "
                    "which is not part of this technique",
                    requirement_id=row.requirement_id,
                )
            )
        check_spec_ids(row.am, f"AM column of row {row.requirement_id}", row.requirement_id)
        check_spec_ids(row.if_, f"IF column of row {row.requirement_id}", row.requirement_id)
        for group in row.is_groups:
            check_spec_ids(group, f"IS column of row {row.requirement_id}", row.requirement_id)
            if len(set(group)) < 2:
                findings.append(
                    ValidationFinding(
                        UNDERSIZED_GROUP,
                        story_id,
                        f"inconsistency group {sorted(set(group))} in row "
                        f"{row.requirement_id} has fewer than two members",
                        requirement_id=row.requirement_id,
                    )
                )
    return findings


def validate(submission: ReviewSubmission) -> list[ValidationFinding]:
    """All findings for a submission, including its time window."""
    findings: list[ValidationFinding] = []
    for entry in submission.entries:
        findings.extend(validate_form(entry.technique, entry.form))
    if submission.ended_at <= submission.started_at:
        findings.append(
            ValidationFinding(
                NON_POSITIVE_DURATION,
                submission.entries[0].story_id if submission.entries else "",
                "submission end time is not after its start time",
            )
        )
    return findings


@dataclass(frozen=True)
class ReviewScore:
    """Effectiveness and efficiency of one scored review."""

    true_positives: int
    total_seeded: int
    effectiveness: float
    duration_hours: float
    efficiency: float
    per_type: dict[DefectType, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "true_positives": self.true_positives,
            "total_seeded": self.total_seeded,
            "effectiveness": self.effectiveness,
            "duration_hours": self.duration_hours,
            "efficiency": self.efficiency,
            "per_type": {d.code: n for d, n in self.per_type.items()},
        }


def _collect_reported(form: ReportForm):
    """Deduplicated marks from a form, ignoring row placement for AM/IS/IF."""
    omitted = {row.requirement_id for row in form.rows if row.om}
    ambiguous = {spec_id for row in form.rows for spec_id in row.am}
    incorrect = {spec_id for row in form.rows for spec_id in row.if_}
    groups = {frozenset(group) for row in form.rows for group in row.is_groups}
    return omitted, ambiguous, groups, incorrect


def score_entry(entry: ReviewEntry, story_key: StoryKey) -> dict[DefectType, int]:
    """True-positive marks per defect type for one story's form."""
    omitted, ambiguous, groups, incorrect = _collect_reported(entry.form)
    return {
        DefectType.OMISSION: len(omitted & story_key.omitted_requirements),
        DefectType.AMBIGUITY: len(ambiguous & story_key.ambiguous),
        DefectType.INCONSISTENCY: sum(
            len(group)
            for group in set(story_key.inconsistency_groups)
            if group in groups
        ),
        DefectType.INCORRECT_FACT: len(incorrect & story_key.incorrect_facts),
    }


def score(submission: ReviewSubmission, key: AnswerKey) -> ReviewScore:
    """Score a submission against the seeded-defect key.

    A mark is a true positive only when it hits a seeded defect; duplicates
    count once and false positives change nothing. Effectiveness is true
    positives over the key's total seeded count; efficiency is true
    positives per hour of recorded review time.
    """
    per_type = {defect: 0 for defect in DefectType}
    for entry in submission.entries:
        story_key = key.story(entry.story_id)
        for defect, count in score_entry(entry, story_key).items():
            per_type[defect] += count

    true_positives = sum(per_type.values())
    duration_hours = submission.duration_hours
    if duration_hours <= 0:
        raise ValueError("submission duration must be positive to compute efficiency")
    total = key.total_seeded
    return ReviewScore(
        true_positives=true_positives,
        total_seeded=total,
        effectiveness=true_positives / total if total else 0.0,
        duration_hours=duration_hours,
        efficiency=true_positives / duration_hours,
        per_type=per_type,
    )
