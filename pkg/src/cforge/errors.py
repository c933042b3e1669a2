"""Exception types shared across the engine."""

from __future__ import annotations


class CforgeError(Exception):
    """Base class for all engine errors."""

    code = "error"


class DomainMismatch(CforgeError):
    code = "domain-mismatch"


class MalformedPayload(CforgeError):
    code = "malformed-payload"


class UnknownConcept(CforgeError):
    code = "unknown-concept"

    def __init__(self, name: str):
        super().__init__(f"unknown concept: {name!r}")
        self.name = name


class RefutedByStoredObject(CforgeError):
    """A proposed theorem fails on an object already in the knowledge base."""

    code = "refuted-by-stored-object"

    def __init__(self, witness_label: str, detail: str = ""):
        msg = f"refuted by stored object {witness_label!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.witness_label = witness_label


class SizeCapExceeded(CforgeError):
    code = "size-cap-exceeded"

    def __init__(self, concept: str, n: int, cap: int):
        super().__init__(f"{concept} requires n <= {cap}, got n = {n}")
        self.concept = concept
        self.n = n
        self.cap = cap


class BadHeader(CforgeError):
    code = "bad-header"

    def __init__(self, offset: int, detail: str):
        super().__init__(f"bad graph6 header at byte {offset}: {detail}")
        self.offset = offset


class BadLength(CforgeError):
    code = "bad-length"

    def __init__(self, offset: int, detail: str):
        super().__init__(f"bad graph6 length at byte {offset}: {detail}")
        self.offset = offset


class CharOutOfRange(CforgeError):
    code = "char-out-of-range"

    def __init__(self, offset: int, char: str):
        super().__init__(f"graph6 character out of range at byte {offset}: {char!r}")
        self.offset = offset
        self.char = char


class ComplexityOutOfRange(CforgeError):
    code = "complexity-out-of-range"


class EmptySignature(CforgeError):
    code = "empty-signature"


class NoEligibleObjects(CforgeError):
    code = "no-eligible-objects"


class VacuousHypothesis(CforgeError):
    code = "vacuous-hypothesis"


class RefutedTarget(CforgeError):
    """The target implication already fails on a stored object."""

    code = "refuted-target"

    def __init__(self, witness_label: str):
        super().__init__(
            f"target implication is refuted by stored object {witness_label!r}"
        )
        self.witness_label = witness_label


class MalformedKB(CforgeError):
    code = "malformed-kb"


class JobActive(CforgeError):
    code = "job-active"


class UnknownSubject(CforgeError):
    code = "unknown-subject"


class BogusCounterexample(CforgeError):
    """Submitted counterexample does not violate the subject claim."""

    code = "bogus-counterexample"

    def __init__(self, trace: dict):
        super().__init__("object does not violate the claim")
        self.trace = trace


class ParseError(CforgeError):
    code = "parse-error"


class InvalidRequest(CforgeError):
    code = "invalid-request"
