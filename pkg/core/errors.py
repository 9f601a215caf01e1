"""Exception family shared by every toolkit module"""


class TypeSpaceToolkitError(Exception):
    """Base class for all toolkit errors"""


class FieldError(TypeSpaceToolkitError, ValueError):
    """A set is not a subset of the universe, or not a member of the field"""


class MeasureError(TypeSpaceToolkitError, ValueError):
    """Weights are negative, do not sum to one, or a preimage is not measurable"""


class ExtensionRangeError(MeasureError):
    """Requested value lies outside [inner, outer]"""

    def __init__(self, p, inner, outer):
        self.p = p
        self.inner = inner
        self.outer = outer
        super().__init__(f"value {p} outside [{inner}, {outer}]")


class RefinementError(MeasureError):
    """Target field does not refine the field of the measure"""


class ChainError(MeasureError):
    """Projections of a measure chain are not onto, do not commute, or marginals disagree"""


class TypeSpaceError(TypeSpaceToolkitError, ValueError):
    """Malformed or invalid type space"""


class MorphismError(TypeSpaceToolkitError, ValueError):
    """Maps between incompatible spaces, or a map that is not a type morphism"""


class ExpressionError(TypeSpaceToolkitError, ValueError):
    """Expression refers to an unknown event or carries a bad threshold"""


class ExpressionSyntaxError(ExpressionError):
    """Text is not in the expression grammar"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class OrdinalError(TypeSpaceToolkitError, ValueError):
    """Ordinal operation outside its domain"""


class RecordError(TypeSpaceToolkitError, ValueError):
    """Record, state or level index out of range"""


class BudgetExceededError(TypeSpaceToolkitError):
    """A brute-force computation would exceed its configured budget"""

    def __init__(self, what, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: needs {needed}, budget is {budget}")


class DocumentError(TypeSpaceToolkitError, ValueError):
    """Document cannot be parsed or violates the schema"""
