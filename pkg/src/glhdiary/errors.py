"""Exception hierarchy shared across the package.

Every error raised by the pipeline derives from :class:`GlhDiaryError` so the
service layer and CLI can map them to status codes / exit codes uniformly.
"""

from __future__ import annotations


class GlhDiaryError(Exception):
    """Base class for all domain errors."""

    code = "error"


class ParseError(GlhDiaryError):
    """A KML input could not be turned into timeline entries.

    ``placemark_index`` is the 0-based position of the offending placemark in
    document order, or None when the whole document is at fault.
    """

    code = "parse_error"

    def __init__(self, message: str, placemark_index: int | None = None):
        super().__init__(message)
        self.placemark_index = placemark_index


class MalformedXmlError(ParseError):
    code = "malformed_xml"


class MissingTimeSpanError(ParseError):
    code = "missing_timespan"


class InvalidCoordinateError(ParseError):
    code = "invalid_coordinate"


class DuplicateDayError(GlhDiaryError):
    code = "duplicate_day"


class DuplicateRespondentError(GlhDiaryError):
    code = "duplicate_respondent"


class IndexOutOfRangeError(GlhDiaryError):
    code = "index_out_of_range"


class KindMismatchError(GlhDiaryError):
    code = "kind_mismatch"


class UnknownModeResponseError(GlhDiaryError):
    code = "unknown_mode_response"


class EmptyGroupError(GlhDiaryError):
    code = "empty_group"


class ZeroPersonDaysError(GlhDiaryError):
    code = "zero_person_days"


class UnknownCategoryError(GlhDiaryError):
    code = "unknown_category"


class EmptyMatrixError(GlhDiaryError):
    code = "empty_matrix"


class MissingLabelError(GlhDiaryError):
    code = "missing_label"


class ZeroDurationError(GlhDiaryError):
    code = "zero_duration"


class NonpositiveDensityError(GlhDiaryError):
    code = "nonpositive_density"


class EmptyZoneTableError(GlhDiaryError):
    code = "empty_zone_table"


class RankDeficientError(GlhDiaryError):
    code = "rank_deficient"


class SeparationError(GlhDiaryError):
    code = "separation"


class NoConvergenceError(GlhDiaryError):
    code = "no_convergence"


class InvalidLikelihoodsError(GlhDiaryError):
    code = "invalid_likelihoods"


class SchemaVersionMismatchError(GlhDiaryError):
    code = "schema_version_mismatch"


class CorruptRecordError(GlhDiaryError):
    code = "corrupt_record"


class UnknownRespondentError(GlhDiaryError):
    code = "unknown_respondent"
