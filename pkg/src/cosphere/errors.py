"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CosphereError(Exception):
    """Base class for all errors raised by :mod:`cosphere`."""


class RingMismatch(CosphereError):
    """Two operands live over different coefficient rings."""


class FrameMismatch(CosphereError):
    """Two tensors are anchored to different frames."""


class JacobiError(CosphereError):
    """Structure constants violate the Jacobi identity."""

    def __init__(self, triple: tuple[int, int, int], message: str = "") -> None:
        self.triple = triple
        super().__init__(message or f"Jacobi identity fails on basis triple {triple}")


class DegreeError(CosphereError):
    """A form degree is out of range for the requested operation."""


class SingularSystem(CosphereError):
    """An exact linear system has no unique solution."""


class DimensionError(CosphereError):
    """A dimension precondition of a construction or verifier is violated."""


class NotOnSphere(CosphereError):
    """A rational point fails the exact unit-sphere condition."""


class StructureError(CosphereError):
    """Input data does not define the requested geometric structure."""


class ParseError(CosphereError):
    """Syntax or semantic error in a frame file, anchored to a position."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class UnknownInput(CosphereError):
    """An input name resolves to no file and no built-in example."""
