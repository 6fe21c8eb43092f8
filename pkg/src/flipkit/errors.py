"""Shared exception types."""


class DomainError(ValueError):
    """An argument violates an operation's precondition."""


class CapExceeded(RuntimeError):
    """A size cap guarding an exhaustive computation was exceeded.

    This is a refusal, not a silent truncation: the caller must either
    shrink the input or raise the cap explicitly (``--max-parts`` on the
    CLI, or the ``FLIPKIT_MAX_PARTS`` environment variable).
    """
