"""Exception hierarchy.

The CLI maps these onto exit codes: ``DataError`` -> 2, ``BackendError`` -> 3.
"""


class PHCRouteError(Exception):
    """Base class for all package errors."""


class DataError(PHCRouteError, ValueError):
    """Input data could not be used."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(DataError):
    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)


class UndefinedMetricError(DataError):
    """A statistic is undefined for the given input (e.g. AUC with one class)."""

    def __init__(self, message, stratum=None):
        self.stratum = stratum
        if stratum is not None:
            message = f"[{stratum}] {message}"
        super().__init__(message)


class RatingParseError(DataError):
    pass


class ElicitationParseError(DataError):
    pass


class TemplateError(DataError):
    def __init__(self, template_id, slot):
        self.template_id = template_id
        self.slot = slot
        super().__init__(f"template {template_id!r} is missing slot {slot!r}")


class ConditionError(DataError):
    pass


class StratificationError(DataError):
    pass


class FitError(DataError):
    pass


class BackendError(PHCRouteError):
    def __init__(self, message, status=None, query_id=None):
        self.status = status
        self.query_id = query_id
        if query_id is not None:
            message = f"query {query_id}: {message}"
        super().__init__(message)


class MissingFixtureError(BackendError):
    def __init__(self, key, query_id=None):
        self.key = key
        super().__init__(f"no replay fixture for key {key}", query_id=query_id)


class RetrievalFixtureError(BackendError):
    def __init__(self, query_id):
        super().__init__(f"no retrieval fixture entry for query id {query_id!r}")
        self.query_id = query_id


class BackendTimeout(BackendError):
    pass


class CascadeError(BackendError):
    pass
