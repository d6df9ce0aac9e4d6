"""Exception hierarchy shared by all hamsym modules."""


class HamsymError(Exception):
    """Base class for every error raised by the package."""


class MalformedInputError(HamsymError, ValueError):
    pass


class ContainmentError(HamsymError, ValueError):
    """A claimed subgroup or element is not contained in its parent group."""


class NotFoundError(HamsymError):
    """A randomized search ran out of budget."""


class PreconditionError(HamsymError, ValueError):
    pass


class ShapeError(HamsymError, ValueError):
    pass


class PartitionError(HamsymError, ValueError):
    pass


class SpecError(HamsymError, ValueError):
    pass


class ResourceLimitError(HamsymError):
    pass


class FormatError(HamsymError, ValueError):
    pass


class RecipeError(HamsymError, ValueError):
    pass


class GatedError(HamsymError):
    """The requested instance is heavy and needs ``allow_heavy``."""


class RegularityError(HamsymError, ValueError):
    pass


class DigestMismatchError(HamsymError, ValueError):
    pass


class NotApplicable(HamsymError):
    """A constructive route does not apply to the given instance."""


class ConstructionFailed(HamsymError):
    pass


class ConfigError(HamsymError, ValueError):
    """Bad run configuration: budgets, formats or paths."""
