class RenderError(Exception):
    """Base class for renderer failures."""


class SchemaMismatch(RenderError):
    """Input document does not match the supported JSON schema version."""


class EmptyInput(RenderError):
    """Input document is valid but contains nothing to draw."""
