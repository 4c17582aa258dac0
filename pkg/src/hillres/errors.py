"""Exception hierarchy for the toolkit."""


class HillresError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(HillresError):
    """Malformed or incomplete run configuration."""


class StepFailure(HillresError):
    """ODE integrator failed to meet the requested tolerance."""


class RootBracketFailure(HillresError):
    """A predicted root could not be isolated on the scan grid."""


class BranchAmbiguity(HillresError):
    """Point too close to a band edge without a rim tag."""


class PoleAtMu(HillresError):
    """Evaluation requested at (or too close to) a Dirichlet point where
    the Weyl function has a pole."""


class OnGapEdge(HillresError):
    """Energy too close to a band edge for an S-matrix evaluation."""


class DegenerateGap(HillresError):
    """Requested gap is closed; it carries no states."""


class ClassificationAmbiguous(HillresError):
    """Both rim residuals are comparable at a root; tolerance failure or a
    genuinely multiple root."""


class ContourThroughZero(HillresError):
    """A winding-number contour passes too close to a zero."""


class MeshTooCoarse(HillresError):
    """Finite-difference mesh does not resolve the requested oscillation."""


class WindowTouchesBand(HillresError):
    """Requested eigenvalue window is not strictly inside a spectral gap."""


class NotABoundState(HillresError):
    """Norming constant requested for a state that is not bound."""


class NotEdgeCase(HillresError):
    """Edge-case asymptotics requested for an interior Dirichlet point."""


class Inconclusive(HillresError):
    """Hypotheses of the sign/stability prediction fail at this index."""
