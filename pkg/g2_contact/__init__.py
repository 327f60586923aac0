from .acms import ACMS, ACS, normality_tensors, standard_structure
from .algebra7 import cross, KForm7, metric_from_three_form, model_three_form, wedge
from .chinea_gonzalez import (
    classify,
    decompose,
    decompose_structure,
    quadratic_invariants,
    subspace_basis,
    theorem_suite
)
from .enum import ChineaGonzalezClass, DifferentiationMode, NamedType, OutputFormat, Status, Suite
from .fields import (
    DegenerateFieldError,
    FieldSpecReader,
    LatticeSampling,
    nabla_omega,
    random_trig_vector_field,
    sample_structure,
    TrigVectorField,
    UnitVectorField
)
from .three_structure import AlmostContact3, build, kuo_axioms, three_cosymplectic_check

__author__ = "The g2-contact developers"
__version__ = "0.1.0"
__copyright__ = "Copyright 2026, The g2-contact developers"
__credits__ = ["The g2-contact developers"]
__license__ = "Apache License 2.0"
__maintainer__ = "The g2-contact developers"
__status__ = "Development"
