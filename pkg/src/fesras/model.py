"""Core domain types and the canonical security catalog.

Everything here is immutable: the four security properties, the fifteen
OWASP high-level security requirements, the four defect types with their
verification questions, and the story/specification records they apply to.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class SecurityProperty(Enum):
    """The four security properties a user story can be linked to."""

    CONFIDENTIALITY = "C"
    INTEGRITY = "I"
    AVAILABILITY = "A"
    IDENTIFICATION_AUTHENTICATION = "IA"

    @property
    def code(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _PROPERTY_NAMES[self]

    @property
    def description(self) -> str:
        return _PROPERTY_DESCRIPTIONS[self]

    @classmethod
    def from_code(cls, code: str) -> "SecurityProperty":
        try:
            return cls(code)
        except ValueError:
            raise ValueError(f"unknown security property code: {code!r}") from None


_PROPERTY_NAMES = {
    SecurityProperty.CONFIDENTIALITY: "Confidentiality",
    SecurityProperty.INTEGRITY: "Integrity",
    SecurityProperty.AVAILABILITY: "Availability",
    SecurityProperty.IDENTIFICATION_AUTHENTICATION: "Identification & Authentication",
}

_PROPERTY_DESCRIPTIONS = {
    SecurityProperty.CONFIDENTIALITY: (
        "Degree to which the data is disclosed only as intended."
    ),
    SecurityProperty.INTEGRITY: (
        "Degree to which a system or component prevents unauthorized access to, "
        "or modification of, computer programs or data."
    ),
    SecurityProperty.AVAILABILITY: (
        "Degree to which a system or component is operational and accessible "
        "when required for use."
    ),
    SecurityProperty.IDENTIFICATION_AUTHENTICATION: (
        "Degree to which the identity of a subject or resource can be proved "
        "to be the one claimed."
    ),
}

#: Canonical ordering used everywhere properties are listed or concatenated.
PROPERTY_ORDER: tuple[SecurityProperty, ...] = (
    SecurityProperty.CONFIDENTIALITY,
    SecurityProperty.INTEGRITY,
    SecurityProperty.AVAILABILITY,
    SecurityProperty.IDENTIFICATION_AUTHENTICATION,
)

ALL_PROPERTIES: frozenset[SecurityProperty] = frozenset(PROPERTY_ORDER)


class DefectType(Enum):
    """Requirement defect types in scope for the review."""

    OMISSION = "OM"
    AMBIGUITY = "AM"
    INCONSISTENCY = "IS"
    INCORRECT_FACT = "IF"

    @property
    def code(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _DEFECT_NAMES[self]

    @property
    def definition(self) -> str:
        return _DEFECT_DEFINITIONS[self]

    @property
    def question(self) -> "VerificationQuestion":
        return VERIFICATION_QUESTIONS[self]

    @classmethod
    def from_code(cls, code: str) -> "DefectType":
        try:
            return cls(code)
        except ValueError:
            raise ValueError(f"unknown defect type code: {code!r}") from None


_DEFECT_NAMES = {
    DefectType.OMISSION: "Omission",
    DefectType.AMBIGUITY: "Ambiguity",
    DefectType.INCONSISTENCY: "Inconsistency",
    DefectType.INCORRECT_FACT: "Incorrect Fact",
}

_DEFECT_DEFINITIONS = {
    DefectType.OMISSION: (
        "Necessary information about the system has been omitted from the requirements."
    ),
    DefectType.AMBIGUITY: (
        "A requirement has multiple interpretations due to multiple terms for the "
        "same characteristic, or multiple meanings of a term in a particular context."
    ),
    DefectType.INCONSISTENCY: (
        "Two or more requirements are in conflict with one another."
    ),
    DefectType.INCORRECT_FACT: (
        "A requirement asserts a fact that cannot be true under the conditions "
        "specified for the system."
    ),
}


@dataclass(frozen=True)
class VerificationQuestion:
    """One of the four questions an inspector answers while reviewing."""

    defect_type: DefectType
    text: str


VERIFICATION_QUESTIONS: dict[DefectType, VerificationQuestion] = {
    DefectType.OMISSION: VerificationQuestion(
        DefectType.OMISSION,
        "When comparing the security specifications with the OWASP high-level "
        "security requirements, are there high-level security requirements or "
        "characteristics that were not specified?",
    ),
    DefectType.AMBIGUITY: VerificationQuestion(
        DefectType.AMBIGUITY,
        "Does any security specification allow for multiple interpretations?",
    ),
    DefectType.INCONSISTENCY: VerificationQuestion(
        DefectType.INCONSISTENCY,
        "Are there two or more security specifications in conflict with one another?",
    ),
    DefectType.INCORRECT_FACT: VerificationQuestion(
        DefectType.INCORRECT_FACT,
        "Is there any security specification stating information that is not true "
        "under the conditions specified for the system?",
    ),
}


@dataclass(frozen=True)
class UserStory:
    """An agile requirement in the role/feature/reason skeleton."""

    id: str
    role: str
    feature: str
    reason: str
    raw_text: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "role": self.role,
            "feature": self.feature,
            "reason": self.reason,
            "raw_text": self.raw_text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UserStory":
        return cls(
            id=data["id"],
            role=data["role"],
            feature=data["feature"],
            reason=data["reason"],
            raw_text=data["raw_text"],
        )


@dataclass(frozen=True)
class SecuritySpecification:
    """A numbered natural-language security statement attached to a story."""

    id: str
    story_id: str
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"security specification {self.id} has empty text")

    def to_dict(self) -> dict:
        return {"id": self.id, "story_id": self.story_id, "text": self.text}

    @classmethod
    def from_dict(cls, data: dict) -> "SecuritySpecification":
        return cls(id=data["id"], story_id=data["story_id"], text=data["text"])


@dataclass(frozen=True)
class OwaspRequirement:
    """A high-level security requirement with its review-oriented rewrite.

    ``base_text`` is the published wording; ``review_text`` is the same
    sentence with AND connectors capitalized where two verifiable aspects
    must both hold, plus parenthesized example lists for a few concepts.
    """

    id: str
    property: SecurityProperty
    base_text: str
    review_text: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "property": self.property.code,
            "base_text": self.base_text,
            "review_text": self.review_text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OwaspRequirement":
        return cls(
            id=data["id"],
            property=SecurityProperty.from_code(data["property"]),
            base_text=data["base_text"],
            review_text=data["review_text"],
        )


def _req(
    req_id: str,
    prop: SecurityProperty,
    base_text: str,
    review_text: str | None = None,
) -> OwaspRequirement:
    return OwaspRequirement(req_id, prop, base_text, review_text or base_text)


_C = SecurityProperty.CONFIDENTIALITY
_I = SecurityProperty.INTEGRITY
_A = SecurityProperty.AVAILABILITY
_IA = SecurityProperty.IDENTIFICATION_AUTHENTICATION

CANONICAL_REQUIREMENTS: tuple[OwaspRequirement, ...] = (
    _req(
        "C1",
        _C,
        "Data shall be protected from unauthorized observation and disclosure "
        "both in transit and when stored.",
        "Data shall be protected from unauthorized observation AND disclosure "
        "both in transit AND when stored.",
    ),
    _req(
        "C2",
        _C,
        "System sessions shall be unique to each individual and cannot be shared.",
        "System sessions shall be unique to each individual AND cannot be shared.",
    ),
    _req(
        "C3",
        _C,
        "System sessions are invalidated when timed out during periods of inactivity.",
    ),
    _req(
        "C4",
        _C,
        "TLS protocol shall be used where sensitive data is transmitted.",
    ),
    _req(
        "C5",
        _C,
        "System shall use strong encryption algorithm at all times.",
        "System shall use strong encryption algorithm (e.g., DES, AES, RSA) "
        "at all times.",
    ),
    _req(
        "I1",
        _I,
        "Any unauthorized modification of data must yield an auditable "
        "security-related event.",
    ),
    _req(
        "I2",
        _I,
        "All input is validated to be correct and fit for the intended purpose.",
        "All input (e.g., query parameters, string variables, REST calls and "
        "cookies) is validated to be correct and fit for the intended purpose.",
    ),
    _req(
        "I3",
        _I,
        "Data from an external entity shall always be validated.",
    ),
    _req(
        "A1",
        _A,
        "The application server shall be suitably hardened from a default "
        "configuration.",
    ),
    _req(
        "A2",
        _A,
        "HTTP responses contain a safe character set in the content type header.",
    ),
    _req(
        "A3",
        _A,
        "Backups must be implemented and recovery strategies must be considered.",
        "Backups must be implemented AND recovery strategies must be considered.",
    ),
    _req(
        "IA1",
        _IA,
        "Users are associated with a well-defined set of roles and privileges.",
    ),
    _req(
        "IA2",
        _IA,
        "The digital identity of the sender of a communication must be verified.",
    ),
    _req(
        "IA3",
        _IA,
        "Only those authorized are able to authenticate and credentials are "
        "transported and stored in a secure manner.",
        "Only those authorized are able to authenticate AND credentials are "
        "transported and stored in a secure manner.",
    ),
    _req(
        "IA4",
        _IA,
        "Passwords treatment must include complex passphrases, options to recover "
        "and reset the password and default passwords not allowed.",
    ),
)

_REQUIREMENTS_BY_ID = {req.id: req for req in CANONICAL_REQUIREMENTS}


def canonical_requirements() -> list[OwaspRequirement]:
    """All fifteen requirements, grouped C, I, A, IA and numbered within each."""
    return list(CANONICAL_REQUIREMENTS)


def requirements_for(prop: SecurityProperty) -> list[OwaspRequirement]:
    """The requirements belonging to one security property, in id order."""
    return [req for req in CANONICAL_REQUIREMENTS if req.property is prop]


def requirement_by_id(req_id: str) -> OwaspRequirement:
    try:
        return _REQUIREMENTS_BY_ID[req_id]
    except KeyError:
        raise ValueError(f"unknown requirement id: {req_id!r}") from None


def requirements_to_json_doc() -> list[dict]:
    """The catalog as plain dicts, for the ``requirements.json`` export."""
    return [req.to_dict() for req in CANONICAL_REQUIREMENTS]
