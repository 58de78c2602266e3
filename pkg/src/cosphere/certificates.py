"""Verdict records returned by every verifier, and their JSON encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from sympy.polys.rings import PolyElement

from .exterior import EndoField, KForm, VectorField
from .scalars import LambdaRing, format_rational, to_fraction


class Verdict(str, Enum):
    VERIFIED = "Verified"
    VERIFIED_EXACT = "VerifiedExact"
    VERIFIED_BY_ISOLATION = "VerifiedByIsolation"
    VERIFIED_BY_SUBDIVISION = "VerifiedBySubdivision"
    REFUTED = "RefutedWithWitness"
    UNDECIDED = "UndecidedAtResolution"

    @property
    def is_verified(self) -> bool:
        return self.value.startswith("Verified")


@dataclass(frozen=True)
class Certificate:
    """Outcome of one check.

    ``witness`` holds the data that justifies a refutation (or, for a
    verification, the objects whose exact vanishing was checked); ``checks``
    records named sub-conditions and whether each held; ``trace`` lists the
    method steps in order.
    """

    claim: str
    verdict: Verdict
    method: str
    witness: dict[str, Any] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    trace: tuple[Any, ...] = ()
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.verdict.is_verified

    def __bool__(self) -> bool:
        return self.verified

    def to_json(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "verdict": self.verdict.value,
            "method": self.method,
            "checks": dict(sorted(self.checks.items())),
            "witness": to_jsonable(self.witness),
            "trace": to_jsonable(list(self.trace)),
            "details": to_jsonable(self.details),
        }


def from_checks(claim: str, method: str, checks: dict[str, bool], witness: dict[str, Any] | None = None, **details: Any) -> Certificate:
    """Verified iff every named check holds; the failing names go in the witness."""
    failed = [name for name, ok in checks.items() if not ok]
    wit = dict(witness or {})
    if failed:
        wit.setdefault("failed", failed)
    verdict = Verdict.VERIFIED if not failed else Verdict.REFUTED
    return Certificate(claim, verdict, method, wit, dict(checks), (), dict(details))


def scalar_to_json(x: Any) -> Any:
    if isinstance(x, PolyElement):
        ring = LambdaRing(x.ring.ngens)
        return {"poly": ring.format(x), "terms": ring.to_json(x)}
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    return format_rational(to_fraction(x))


def to_jsonable(obj: Any) -> Any:
    """Recursively convert tensors and exact scalars into JSON-ready values."""
    if isinstance(obj, Certificate):
        return obj.to_json()
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, KForm):
        return {
            "degree": obj.degree,
            "ring": obj.ring.tag,
            "terms": [[[obj.frame.names[i] for i in key], scalar_to_json(v)] for key, v in obj.items()],
        }
    if isinstance(obj, VectorField):
        return {"ring": obj.ring.tag, "components": [scalar_to_json(c) for c in obj.coeffs]}
    if isinstance(obj, EndoField):
        return {"ring": obj.ring.tag, "matrix": [[scalar_to_json(c) for c in row] for row in obj.matrix]}
    if isinstance(obj, (Fraction, PolyElement)) or type(obj).__name__ == "mpq":
        return scalar_to_json(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats never appear in certificates")
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot encode {type(obj).__name__} in a certificate")

