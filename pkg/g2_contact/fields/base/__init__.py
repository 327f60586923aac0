from .errors import DegenerateFieldError
from .trig import TrigField, TrigVectorField
