"""Exception hierarchy shared by every layer of the package."""


class WaveGraphError(Exception):
    """Base class for all errors raised by wavegraph."""


class DuplicateLabel(WaveGraphError):
    def __init__(self, label):
        super().__init__(f"state label {label!r} already used in this graph")
        self.label = label


class UnknownState(WaveGraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NonFiniteWeight(WaveGraphError, ValueError):
    pass


class DisconnectedWalk(WaveGraphError, ValueError):
    pass


class PortError(WaveGraphError, ValueError):
    """Illegal port designation, or an attempt to rewrite a designated port."""


class PreconditionViolated(WaveGraphError):
    """A rewrite rule was applied where its local degree conditions fail."""


class DivergentLoop(WaveGraphError):
    """A loop whose weight has modulus >= 1, so its geometric series diverges."""

    def __init__(self, state, label, weight):
        super().__init__(
            f"loop at state {label!r} (id {state}) has |weight| = {abs(weight):.6g} >= 1; "
            "walk sum does not converge"
        )
        self.state = state
        self.label = label
        self.weight = weight


class SingularSystem(WaveGraphError):
    pass


class UndeclaredState(WaveGraphError, ValueError):
    pass


class ModeMismatch(WaveGraphError, ValueError):
    pass


class DegreeCapExceeded(WaveGraphError, ValueError):
    pass


class SceneParseError(WaveGraphError, ValueError):
    pass
