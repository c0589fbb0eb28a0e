"""Exception hierarchy shared by every module."""


class InfoDesignError(ValueError):
    """Base class for all errors raised by this package."""


class SingularH(InfoDesignError):
    pass


class DimensionMismatch(InfoDesignError):
    pass


class IndexOutOfRange(InfoDesignError):
    pass


class KGreaterThanL(InfoDesignError):
    pass


class NonSymmetric(InfoDesignError):
    pass


class NotPsd(InfoDesignError):
    pass


class NegativeShift(InfoDesignError):
    pass


class ZeroD(InfoDesignError):
    pass


class NuOutOfRange(InfoDesignError):
    pass


class OffDiagonalNotScalarIdentity(InfoDesignError):
    pass


class DegenerateNormalizer(InfoDesignError):
    pass


class MalformedModel(InfoDesignError):
    pass
