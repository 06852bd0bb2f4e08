"""
Exceptions
==========
Error kinds raised across the coding, scheme and engine layers.
"""

from typing import Optional, Sequence


class CodedShuffleError(Exception):
    """Base class for every error raised by this package."""


class FieldWidthError(CodedShuffleError, ValueError):
    """Requested GF(2^w) width is not supported."""


class FieldZeroDivisionError(CodedShuffleError, ZeroDivisionError):
    """Zero has no multiplicative inverse."""


class CodeConstructionError(CodedShuffleError, ValueError):
    """MDS generator cannot be built (non-integer length or field too small)."""


class DimensionError(CodedShuffleError, ValueError):
    """Matrix shapes do not line up."""


class InsufficientRowsError(CodedShuffleError, ValueError):
    """Fewer than m distinct coded rows were supplied to the decoder."""


class InvalidParamsError(CodedShuffleError, ValueError):
    """A SystemParams or RatePair invariant does not hold."""


class InfeasibleRatesError(CodedShuffleError):
    """Rate pair violates one or more feasibility conditions."""

    def __init__(self, violations: Sequence[str], message: Optional[str] = None):
        self.violations = tuple(violations)
        super().__init__(message or f"infeasible rate pair: violates {', '.join(self.violations)}")


class DivisibilityError(CodedShuffleError):
    """Instance sizes do not split evenly across blocks, phases or groups."""

    def __init__(self, verdict, message: Optional[str] = None):
        self.verdict = verdict
        super().__init__(message or (
            f"divisibility failure ({'; '.join(verdict.failures)}); "
            f"scale m by {verdict.m_multiplier} and N by {verdict.n_multiplier}"
        ))


class ShuffleError(CodedShuffleError):
    """Shuffle plan and placement disagree, or a receiver lacks side information."""

    def __init__(self, message: str, *, phase: Optional[int] = None,
                 group: Optional[Sequence[int]] = None, sender: Optional[int] = None,
                 receiver: Optional[int] = None):
        self.phase = phase
        self.group = tuple(group) if group is not None else None
        self.sender = sender
        self.receiver = receiver
        context = []
        if phase is not None:
            context.append(f"phase={phase}")
        if group is not None:
            context.append(f"group={list(self.group)}")
        if sender is not None:
            context.append(f"sender={sender}")
        if receiver is not None:
            context.append(f"receiver={receiver}")
        suffix = f" [{', '.join(context)}]" if context else ""
        super().__init__(f"{message}{suffix}")


class PipelineError(CodedShuffleError):
    """A map / shuffle / reduce step failed; names the failing step."""

    def __init__(self, step: str, cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"{step} phase failed: {cause}")
