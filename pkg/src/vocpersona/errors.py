"""Exception hierarchy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP gateway
and CLI can map failures without string matching.
"""


class VocPersonaError(Exception):
    """Base class for all package errors."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# --- corpus ingestion ---

class MissingField(VocPersonaError):
    code = "missing_field"

    def __init__(self, name: str):
        super().__init__(f"missing required field: {name}")
        self.field = name


class BadTimestamp(VocPersonaError):
    code = "bad_timestamp"


class EmptyText(VocPersonaError):
    code = "empty_text"


class EmptyCorpus(VocPersonaError):
    code = "empty_corpus"


class UnknownCorpus(VocPersonaError):
    code = "unknown_corpus"


# --- embedding / index ---

class DimensionMismatch(VocPersonaError):
    code = "dimension_mismatch"


class EmptyIndex(VocPersonaError):
    code = "empty_index"


# --- persona derivation ---

class NoPersonas(VocPersonaError):
    code = "no_personas"


class UnknownPersona(VocPersonaError):
    code = "unknown_persona"


# --- generation ---

class NoUsableSentence(VocPersonaError):
    code = "no_usable_sentence"


class BackendUnavailable(VocPersonaError):
    """Generation backend unreachable; the turn fails soft and may be retried."""

    code = "backend_unavailable"
    retryable = True


class MalformedBackendReply(VocPersonaError):
    code = "malformed_backend_reply"


# --- conversation ---

class EmptyMessage(VocPersonaError):
    code = "empty_message"


class SessionClosed(VocPersonaError):
    code = "session_closed"


class UnknownSession(VocPersonaError):
    code = "unknown_session"


class Busy(VocPersonaError):
    """A second concurrent turn was requested on a session."""

    code = "busy"


# --- verification ---

class UnknownCitation(VocPersonaError):
    code = "unknown_citation"


# --- reactions ---

class NoFacets(VocPersonaError):
    code = "no_facets"


# --- provenance ---

class CorpusMismatch(VocPersonaError):
    code = "corpus_mismatch"


# --- gateway ---

class BadConfig(VocPersonaError):
    code = "bad_config"
