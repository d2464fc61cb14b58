"""Shared exception types.

Every error carries a stable machine ``code`` so the HTTP layer can map
exceptions to API error payloads without string matching.
"""

from __future__ import annotations


class MedleyError(Exception):
    """Base class for all engine errors."""

    code = "internal_error"
    http_status = 500

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)
        self.message = message or self.code


class EmptyInput(MedleyError):
    code = "empty_input"
    http_status = 400


class RaggedRows(MedleyError):
    code = "ragged_rows"
    http_status = 400


class DuplicateColumnName(MedleyError):
    code = "duplicate_column_name"
    http_status = 400


class UnknownAttribute(MedleyError):
    code = "unknown_attribute"
    http_status = 404


class TypeMismatch(MedleyError):
    code = "type_mismatch"
    http_status = 400


class SingleYearDataset(MedleyError):
    code = "single_year_dataset"
    http_status = 400


class YearOutOfRange(MedleyError):
    code = "year_out_of_range"
    http_status = 400


class LengthMismatch(MedleyError):
    code = "length_mismatch"
    http_status = 400


class SeriesTooShort(MedleyError):
    code = "series_too_short"
    http_status = 400


class ValidationError(MedleyError):
    code = "validation_error"
    http_status = 400


class InvalidAssignment(MedleyError):
    code = "invalid_assignment"
    http_status = 400


class NoSatisfiableTemplate(MedleyError):
    code = "no_satisfiable_template"
    http_status = 404


class SelfLink(MedleyError):
    code = "self_link"
    http_status = 400


class ModeNotAllowed(MedleyError):
    code = "mode_not_allowed"
    http_status = 409


class UnknownSource(MedleyError):
    code = "unknown_source"
    http_status = 404


class UnsupportedChartKind(MedleyError):
    code = "unsupported_chart_kind"
    http_status = 400


class EmptyCanvas(MedleyError):
    code = "empty_canvas"
    http_status = 400


class UnknownElement(MedleyError):
    code = "unknown_element"
    http_status = 404


class DuplicateId(MedleyError):
    code = "duplicate_id"
    http_status = 409


class UnknownSession(MedleyError):
    code = "unknown_session"
    http_status = 404


class UnknownDataset(MedleyError):
    code = "unknown_dataset"
    http_status = 404
