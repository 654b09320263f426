import enum


class Status(enum.Enum):
    HOLDS = "Holds"
    VIOLATION_CANDIDATE = "ViolationCandidate"
    INCONCLUSIVE_MULTIPLICITY = "InconclusiveMultiplicity"
    INCONCLUSIVE_NUMERIC = "InconclusiveNumeric"
