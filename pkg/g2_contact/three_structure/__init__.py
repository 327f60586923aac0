from .checks import (
    COSYMPLECTIC_TOLERANCE,
    KUO_TOLERANCE,
    kuo_axioms,
    KuoReport,
    three_cosymplectic_check,
    ThreeCosymplecticReport
)
from .structure import AlmostContact3, build, DEGENERATE_PAIR_THRESHOLD
