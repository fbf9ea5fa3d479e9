"""Diagnostics: stable codes, severities, deterministic ordering.

The registry below is the authoritative list of codes; docs/format.md renders
it for users. Codes are stable identifiers, messages are free to improve.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .elements import ElementId


class Severity(str, Enum):
    ERROR = "Error"
    WARNING = "Warning"
    INFO = "Info"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    element_id: ElementId | None = None

    def sort_key(self) -> tuple[str, str, str]:
        return (self.code, self.element_id or "", self.message)


# code -> (severity, what it flags)
REGISTRY: dict[str, tuple[Severity, str]] = {
    "DOC-VERSION": (Severity.ERROR, "document version is not the supported one"),
    "ID-EMPTY": (Severity.ERROR, "element id is empty"),
    "ID-DUP": (Severity.ERROR, "element id is used more than once in the model"),
    "ID-DANGLING": (Severity.ERROR, "reference to an id that does not exist"),
    "LEVEL-EMPTY": (Severity.ERROR, "abstraction level name is empty"),
    "PROP-NAME": (Severity.ERROR, "property name is empty"),
    "PROP-AVAIL": (Severity.ERROR, "Availability property value is not a year or timestamp string"),
    "PROP-FEAS": (Severity.ERROR, "Feasibility property value is not a number in [0, 1]"),
    "IE-TEXT": (Severity.ERROR, "identifiable element category or text is empty"),
    "FP-NAME": (Severity.ERROR, "functional block name is empty"),
    "FP-ENDPOINT": (Severity.ERROR, "functional relation endpoint is not a functional block"),
    "FP-ARITY": (Severity.ERROR, "functional relation child count is wrong for its kind"),
    "FP-CARD": (Severity.ERROR, "Or cardinality missing or not 1 <= min <= max <= child count"),
    "FP-REFCARD": (Severity.ERROR, "refinement-typed Or relation must have cardinality [1, 1]"),
    "FP-SHAPE": (Severity.ERROR, "relation carries a field that its kind does not admit, or misses a required one"),
    "FP-VPLABEL": (Severity.ERROR, "variation point option labels do not match children or are not distinct"),
    "FP-VPDERIVE": (Severity.ERROR, "derivation endpoints are not variation points with equal label sets"),
    "FP-VPCYCLE": (Severity.ERROR, "variation point derivations form a cycle"),
    "FP-GROUP": (Severity.ERROR, "block group members are not two or more distinct functional blocks"),
    "FP-FOREST": (Severity.ERROR, "parent-child relations do not form a forest"),
    "FP-ROOTS": (Severity.ERROR, "declared roots do not match the parentless functional blocks"),
    "QP-SAT": (Severity.ERROR, "requirement satisfiability is outside [0, 1]"),
    "QP-PARENT": (Severity.ERROR, "requirement parent is not a requirement or the parent chain cycles"),
    "QP-STATUS": (Severity.ERROR, "requirement carries more than one status stereotype"),
    "SP-VARPARENT": (Severity.ERROR, "variant's parent block field does not name its owning block"),
    "SP-SELVAR": (Severity.ERROR, "selected variant is not one of the block's variants"),
    "SP-PROPDISJ": (Severity.ERROR, "block and refinement group property names are not disjoint"),
    "RG-EMPTY": (Severity.ERROR, "refinement group contains no refinement blocks"),
    "RG-SELREF": (Severity.ERROR, "selected refinement is not a member of its group"),
    "SSE-DISJ": (Severity.ERROR, "solution space input and output property lists overlap"),
    "SPR-ENDPOINT": (Severity.ERROR, "channel endpoint is not a structural block"),
    "SPR-EFFECT": (Severity.ERROR, "effect fields present or missing in conflict with the relation kind"),
    "TR-KIND": (Severity.WARNING, "trace link endpoints do not fit the link kind's endpoint table"),
    "SP-SSEINFO": (Severity.INFO, "block and variant solution spaces share more than one property; resolution will replace, not extend"),
    # Emitted by structural consistency checking, not by validate_model:
    "SP-PROP": (Severity.WARNING, "requirement pins a property value that the effective block contradicts"),
    "SP-REQCONFLICT": (Severity.ERROR, "two confirmed requirements pin different values of the same property on one block"),
}


def make(code: str, message: str, element_id: ElementId | None = None) -> Diagnostic:
    severity, _ = REGISTRY[code]
    return Diagnostic(severity, code, message, element_id)


def sort_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=Diagnostic.sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diags)


class InvalidModelError(ValueError):
    """Raised when an operation requires an error-free model and got one with errors."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        errors = [d for d in diagnostics if d.severity is Severity.ERROR]
        preview = "; ".join(f"{d.code} {d.element_id or ''}".strip() for d in errors[:5])
        more = "" if len(errors) <= 5 else f" (+{len(errors) - 5} more)"
        super().__init__(f"model has {len(errors)} validation error(s): {preview}{more}")


def diagnostic_to_obj(diag: Diagnostic) -> dict:
    return {
        "severity": diag.severity.value,
        "code": diag.code,
        "elementId": diag.element_id,
        "message": diag.message,
    }


def diagnostic_from_obj(obj: dict) -> Diagnostic:
    return Diagnostic(Severity(obj["severity"]), obj["code"], obj["message"],
                      obj.get("elementId"))
