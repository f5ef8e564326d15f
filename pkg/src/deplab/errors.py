"""Exception types shared across the pipeline."""


class LexError(Exception):
    """Unrecognized byte or unterminated literal/comment."""

    def __init__(self, position: int, message: str):
        super().__init__(f"lex error at byte {position}: {message}")
        self.position = position


class ParseError(Exception):
    """Syntax violation against the supported C subset."""

    def __init__(self, position: int, expected: str, found: str = ""):
        detail = f"expected {expected}"
        if found:
            detail += f", found {found}"
        super().__init__(f"parse error at byte {position}: {detail}")
        self.position = position
        self.expected = expected


class UnsupportedConstruct(Exception):
    """Recognized C feature that the subset deliberately excludes."""

    def __init__(self, position: int, construct: str):
        super().__init__(f"unsupported construct at byte {position}: {construct}")
        self.position = position
        self.construct = construct


class ConfigError(Exception):
    """Invalid configuration value."""


class EmptyNode(Exception):
    """A statement or predicate node has no member subtokens."""


class TooShort(Exception):
    """Function has fewer statement nodes than the requested prefix length."""


class ShapeError(Exception):
    """Tensor or sequence shape violates a model constraint."""


class CheckpointError(Exception):
    """Checkpoint file is missing, corrupt, or fails its integrity hash."""
