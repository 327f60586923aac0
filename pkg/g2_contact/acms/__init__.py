from .normality import exterior_derivative_1form, nijenhuis, NijenhuisReport, normality_tensors
from .structure import ACMS, ACS, standard_structure, standard_structure_field, StructureField
