"""Assembly and rendering of the story-focused reading technique.

For each story the technique bundles the linked security properties, the
review-form requirement texts, the four verification questions and an empty
defect reporting form with one row per requirement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MismatchedStoryIdError
from .linking import LinkResult
from .model import (
    DefectType,
    OwaspRequirement,
    SecuritySpecification,
    UserStory,
    VERIFICATION_QUESTIONS,
    VerificationQuestion,
    requirements_for,
)

QUESTION_ORDER = (
    DefectType.OMISSION,
    DefectType.AMBIGUITY,
    DefectType.INCONSISTENCY,
    DefectType.INCORRECT_FACT,
)


@dataclass(frozen=True)
class FormRow:
    """One reporting-form row: a requirement plus the four defect columns.

    ``om`` marks the requirement itself as omitted; the other columns hold
    specification ids (``is_groups`` holds groups of ids reported as
    mutually inconsistent).
    """

    requirement_id: str
    om: bool = False
    am: tuple[str, ...] = ()
    is_groups: tuple[tuple[str, ...], ...] = ()
    if_: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "requirement_id": self.requirement_id,
            "om": self.om,
            "am": list(self.am),
            "is": [list(group) for group in self.is_groups],
            "if": list(self.if_),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FormRow":
        return cls(
            requirement_id=data["requirement_id"],
            om=bool(data.get("om", False)),
            am=tuple(data.get("am", ())),
            is_groups=tuple(tuple(group) for group in data.get("is", ())),
            if_=tuple(data.get("if", ())),
        )


@dataclass(frozen=True)
class FreeFinding:
    """A finding the inspector could not attach to a requirement row."""

    defect_type: DefectType
    description: str

    def to_dict(self) -> dict:
        return {"defect_type": self.defect_type.code, "description": self.description}

    @classmethod
    def from_dict(cls, data: dict) -> "FreeFinding":
        return cls(DefectType.from_code(data["defect_type"]), data["description"])


@dataclass(frozen=True)
class ReportForm:
    rows: tuple[FormRow, ...]
    free_findings: tuple[FreeFinding, ...] = ()

    def row_for(self, requirement_id: str) -> FormRow | None:
        for row in self.rows:
            if row.requirement_id == requirement_id:
                return row
        return None

    def is_empty(self) -> bool:
        return not self.free_findings and all(
            not row.om and not row.am and not row.is_groups and not row.if_
            for row in self.rows
        )

    def to_dict(self) -> dict:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "free_findings": [finding.to_dict() for finding in self.free_findings],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReportForm":
        return cls(
            rows=tuple(FormRow.from_dict(row) for row in data.get("rows", ())),
            free_findings=tuple(
                FreeFinding.from_dict(f) for f in data.get("free_findings", ())
            ),
        )


def empty_form(requirements: list[OwaspRequirement]) -> ReportForm:
    return ReportForm(rows=tuple(FormRow(req.id) for req in requirements))


@dataclass(frozen=True)
class ReadingTechnique:
    """The generated review document for one story."""

    story: UserStory
    specifications: tuple[SecuritySpecification, ...]
    link: LinkResult
    requirements: tuple[OwaspRequirement, ...]
    questions: tuple[VerificationQuestion, ...] = field(
        default_factory=lambda: tuple(VERIFICATION_QUESTIONS[d] for d in QUESTION_ORDER)
    )
    form: ReportForm = ReportForm(rows=())

    def specification_ids(self) -> set[str]:
        return {spec.id for spec in self.specifications}

    def requirement_ids(self) -> set[str]:
        return {req.id for req in self.requirements}

    def to_dict(self) -> dict:
        return {
            "story": self.story.to_dict(),
            "specifications": [spec.to_dict() for spec in self.specifications],
            "link": self.link.to_dict(),
            "requirements": [req.to_dict() for req in self.requirements],
            "questions": [
                {"defect_type": q.defect_type.code, "text": q.text}
                for q in self.questions
            ],
            "form": self.form.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReadingTechnique":
        return cls(
            story=UserStory.from_dict(data["story"]),
            specifications=tuple(
                SecuritySpecification.from_dict(s) for s in data["specifications"]
            ),
            link=LinkResult.from_dict(data["link"]),
            requirements=tuple(
                OwaspRequirement.from_dict(r) for r in data["requirements"]
            ),
            questions=tuple(
                VerificationQuestion(DefectType.from_code(q["defect_type"]), q["text"])
                for q in data["questions"]
            ),
            form=ReportForm.from_dict(data["form"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ReadingTechnique":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_dict(), handle, indent=2)
            handle.write("\n")


def generate(
    story: UserStory,
    specifications: list[SecuritySpecification],
    link: LinkResult,
) -> ReadingTechnique:
    """Assemble the reading technique for one story.

    Requirements are the concatenation, in C/I/A/IA order, of the catalog
    entries for each linked property; the form starts empty with one row
    per requirement.
    """
    if link.story_id != story.id:
        raise MismatchedStoryIdError(
            f"link is for story {link.story_id!r}, not {story.id!r}"
        )
    for spec in specifications:
        if spec.story_id != story.id:
            raise MismatchedStoryIdError(
                f"specification {spec.id} belongs to story {spec.story_id!r}, "
                f"not {story.id!r}"
            )

    requirements: list[OwaspRequirement] = []
    for prop in link.ordered_properties():
        requirements.extend(requirements_for(prop))

    return ReadingTechnique(
        story=story,
        specifications=tuple(specifications),
        link=link,
        requirements=tuple(requirements),
        form=empty_form(requirements),
    )


def render_markdown(technique: ReadingTechnique) -> str:
    """Deterministic human-readable review document for one technique."""
    story = technique.story
    lines: list[str] = []
    lines.append(f"# Security Review: {story.id}")
    lines.append("")
    lines.append("## User Story")
    lines.append("")
    lines.append(story.raw_text.strip())
    lines.append("")
    lines.append("## Security Specifications")
    lines.append("")
    if technique.specifications:
        for spec in technique.specifications:
            lines.append(f"- **{spec.id}.** {spec.text}")
    else:
        lines.append("_None provided._")
    lines.append("")
    lines.append("## Linked Security Properties")
    lines.append("")
    for prop in technique.link.ordered_properties():
        lines.append(f"- **{prop.display_name}** — {prop.description}")
    if technique.link.fallback_applied:
        lines.append("")
        lines.append(
            "_No keyword matched this story, so it is linked to all security "
            "properties._"
        )
    else:
        matches = ", ".join(
            f"{keyword} → {'/'.join(sorted(p.code for p in props))}"
            for keyword, props in technique.link.matched
        )
        lines.append("")
        lines.append(f"_Matched keywords: {matches}_")
    lines.append("")
    lines.append("## Security Requirements to Verify")
    lines.append("")
    for prop in technique.link.ordered_properties():
        lines.append(f"### {prop.display_name}")
        lines.append("")
        for req in technique.requirements:
            if req.property is prop:
                lines.append(f"- **{req.id}.** {req.review_text}")
        lines.append("")
    lines.append("## Verification Questions")
    lines.append("")
    for number, question in enumerate(technique.questions, start=1):
        defect = question.defect_type
        lines.append(
            f"{number}. **{defect.display_name} ({defect.code})** — {question.text}"
        )
    lines.append("")
    lines.append("## Defect Reporting Form")
    lines.append("")
    lines.append(
        "Mark OM with an X when the requirement itself is not covered by the "
        "specifications; record specification ids under AM/IS/IF."
    )
    lines.append("")
    lines.append("| OWASP High-level Security Requirement | OM | AM | IS | IF |")
    lines.append("| --- | --- | --- | --- | --- |")
    for row in technique.form.rows:
        req = next(r for r in technique.requirements if r.id == row.requirement_id)
        om = "X" if row.om else ""
        am = " ".join(row.am)
        is_ = "; ".join(" ".join(group) for group in row.is_groups)
        if_ = " ".join(row.if_)
        lines.append(f"| {req.id}. {req.review_text} | {om} | {am} | {is_} | {if_} |")
    lines.append("")
    return "\n".join(lines)
