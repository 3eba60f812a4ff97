"""Exception types shared across the package."""


class HijacksimError(Exception):
    """Base class for all package errors."""


class GraphError(HijacksimError):
    """Structural problem with an AS graph (bad id, duplicate edge, ...)."""


class NotAdjacentError(GraphError):
    """Two ASes were expected to share an edge but do not."""


class PathError(HijacksimError):
    """A path argument violates a precondition (wrong root, too short, ...)."""


class MissingEdgeError(PathError):
    """A path names an adjacent pair that is not an edge of the graph."""


class SimulationError(HijacksimError):
    """Routing simulation could not produce a result."""


class NonConvergenceError(SimulationError):
    """The round cap was exceeded; indicates an implementation bug."""


class StrategyError(HijacksimError):
    """An attack strategy is malformed or illegal for its capability."""


class RoleError(HijacksimError):
    """Source, destination and manipulator roles collide or are missing."""


class DegreeBoundError(HijacksimError):
    """The manipulator degree exceeds the configured search bound."""


class FormulaError(HijacksimError):
    """A CNF formula is malformed or violates generator preconditions."""


class FixtureError(HijacksimError):
    """Unknown built-in fixture name."""
