"""Exception types shared across the package."""


class Painleve3Error(Exception):
    """Base class; the CLI maps every subclass to exit code 3."""


class NonConvergence(Painleve3Error):
    pass


class SingularJacobian(Painleve3Error):
    pass


class InexactDivision(Painleve3Error):
    pass


class PoleAt(Painleve3Error):
    def __init__(self, x):
        super().__init__(f"pole (or vanishing denominator) at x={x}")
        self.x = x


class PathBlocked(Painleve3Error):
    pass


class OnBranchCut(Painleve3Error):
    pass


class BracketFailure(Painleve3Error):
    pass


class DegenerateCurve(Painleve3Error):
    pass


class ContinuationStall(Painleve3Error):
    pass


class OutsideDomain(Painleve3Error):
    pass


class HalfIntegerM(Painleve3Error):
    pass


class NearDivisor(Painleve3Error):
    pass


class DivergentParameter(Painleve3Error):
    pass


class NearSingularity(Painleve3Error):
    pass


class TooCloseToEye(Painleve3Error):
    pass


class StencilOutsideDomain(Painleve3Error):
    pass
