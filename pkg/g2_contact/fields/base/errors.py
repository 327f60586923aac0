class DegenerateFieldError(ValueError):
    """
    A vector field vanishes at a sample point, or two fields are parallel there.
    """
