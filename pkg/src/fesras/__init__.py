"""Toolchain for reviewing security-related aspects of agile requirements.

Pipeline: parse user stories, extract verb/noun lemmas, link security
properties through the keyword repository, generate a focused reading
technique with a defect reporting form, then validate, score and compare
completed reviews.
"""

from .errors import (
    DegenerateSampleError,
    EmptyPropertySetError,
    EmptySampleError,
    FesrasError,
    InvalidStateError,
    KeyMismatchError,
    MalformedStoryError,
    MismatchedStoryIdError,
    MissingReasonError,
    ValidationFailedError,
    WeakenedCanonicalEntryError,
    ZeroPooledVarianceError,
)
from .linking import KeywordRepository, LinkResult, link
from .model import (
    DefectType,
    OwaspRequirement,
    SecurityProperty,
    SecuritySpecification,
    UserStory,
    VerificationQuestion,
    canonical_requirements,
    requirements_for,
)
from .parsing import (
    DEFAULT_LEXICON,
    ExtractionResult,
    Lexicon,
    extract,
    lemmatize,
    parse_story,
)
from .scoring import (
    AnswerKey,
    ReviewEntry,
    ReviewScore,
    ReviewSubmission,
    StoryKey,
    score,
    validate,
    validate_form,
)
from .stats import (
    ComparisonResult,
    GroupSample,
    cohens_d,
    compare_trials,
    hedges_g,
    mann_whitney,
)
from .technique import (
    FormRow,
    FreeFinding,
    ReadingTechnique,
    ReportForm,
    generate,
    render_markdown,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerKey",
    "ComparisonResult",
    "DefectType",
    "DEFAULT_LEXICON",
    "DegenerateSampleError",
    "EmptyPropertySetError",
    "EmptySampleError",
    "ExtractionResult",
    "FesrasError",
    "FormRow",
    "FreeFinding",
    "GroupSample",
    "InvalidStateError",
    "KeyMismatchError",
    "KeywordRepository",
    "Lexicon",
    "LinkResult",
    "MalformedStoryError",
    "MismatchedStoryIdError",
    "MissingReasonError",
    "OwaspRequirement",
    "ReadingTechnique",
    "ReportForm",
    "ReviewEntry",
    "ReviewScore",
    "ReviewSubmission",
    "SecurityProperty",
    "SecuritySpecification",
    "StoryKey",
    "UserStory",
    "ValidationFailedError",
    "VerificationQuestion",
    "WeakenedCanonicalEntryError",
    "ZeroPooledVarianceError",
    "canonical_requirements",
    "cohens_d",
    "compare_trials",
    "extract",
    "generate",
    "hedges_g",
    "lemmatize",
    "link",
    "mann_whitney",
    "parse_story",
    "render_markdown",
    "requirements_for",
    "score",
    "validate",
    "validate_form",
]
