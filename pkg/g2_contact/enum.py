from enum import StrEnum


class ChineaGonzalezClass(StrEnum):
    D1 = "D1"
    D2 = "D2"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"
    C11 = "C11"
    C12 = "C12"

    @classmethod
    def irreducible(cls) -> list:
        return [cls(f"C{i}") for i in range(1, 13)]

    @property
    def index(self) -> int:
        """
        Position of an irreducible class, 1 to 12.

        Returns
        -------
        index : int
            The class number.
        """
        if not self.startswith("C"):
            raise ValueError(f"{self} is not an irreducible class.")
        return int(self[1:])


class NamedType(StrEnum):
    COSYMPLECTIC = "cosymplectic"
    ALMOST_COSYMPLECTIC = "almost cosymplectic"
    QUASI_SASAKIAN = "quasi-Sasakian"
    A_KENMOTSU = "a-Kenmotsu"
    A_SASAKIAN = "a-Sasakian"
    NEARLY_K_COSYMPLECTIC = "nearly K-cosymplectic"
    QUASI_K_COSYMPLECTIC = "quasi-K-cosymplectic"
    SEMI_COSYMPLECTIC = "semi-cosymplectic"
    TRANS_SASAKIAN = "trans-Sasakian"
    NEARLY_TRANS_SASAKIAN = "nearly trans-Sasakian"
    ALMOST_K_CONTACT = "almost K-contact"
    NORMAL = "normal"


class Phase(StrEnum):
    COS = "cos"
    SIN = "sin"


class DifferentiationMode(StrEnum):
    EXACT = "exact-trig"
    FINITE_DIFFERENCE = "central-fd"


class Suite(StrEnum):
    ALGEBRA = "algebra"
    CLASSIFY = "classify"
    THEOREMS = "theorems"
    THREE_STRUCTURE = "three_structure"


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class Status(StrEnum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_EXERCISED = "NOT_EXERCISED"


class Hypothesis(StrEnum):
    NON_PARALLEL = "nabla xi != 0"
    DIVERGENCE_FREE = "delta eta = 0"
    GEODESIC = "nabla_xi xi = 0"
    NORMAL = "normal"
