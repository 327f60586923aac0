from .base import DegenerateFieldError, TrigField, TrigVectorField
from .calculus import (
    central_difference,
    codifferential,
    DifferentiationContext,
    eta_jet,
    exterior_derivative,
    FormJet,
    integrate,
    lie_derivative_3form,
    nabla_omega,
    nabla_omega_leibniz,
    nabla_xi,
    normalize,
    omega_jet,
    sample_structure,
    stokes_volume,
    UnitVectorField
)
from .families import parallel_free_family, random_trig_vector_field
from .frames import adapted_frame, frame_inverse, frame_residual, orthonormal_frame, unitary_frame
from .sampling import LatticeSampling, TORUS_VOLUME
from .spec_reader import FieldSpec, FieldSpecReader
