"""Exception types raised across the package."""


class SapcError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatch(SapcError, ValueError):
    pass


class BoundaryError(SapcError, ValueError):
    """A boundary matrix fails d∘d = 0 or a chain map fails to commute."""


class NotClosedUnderFaces(SapcError, ValueError):
    pass


class NonManifoldLink(SapcError, ValueError):
    pass


class InconsistentOrientation(SapcError, ValueError):
    pass


class UnknownSimplex(SapcError, KeyError):
    pass


class UnboundedComplex(SapcError, ValueError):
    pass


class WindowTooNarrow(SapcError, ValueError):
    pass


class PosetTooLarge(SapcError, RuntimeError):
    def __init__(self, size, cap, what="poset"):
        super().__init__(f"{what} has more than {cap} elements (reached {size}); raise the cap to continue")
        self.size = size
        self.cap = cap


class HypothesisViolated(SapcError, ValueError):
    pass


class NotACycle(SapcError, ValueError):
    pass


class CoverViolation(SapcError, ValueError):
    pass


class NotSimplicial(SapcError, ValueError):
    pass


class InvalidLocalSystem(SapcError, ValueError):
    """A membership rule breaks one of the local-system axioms."""


class NondegenerateCheckFailed(SapcError, RuntimeError):
    def __init__(self, failing):
        self.failing = list(failing)
        shown = ", ".join(map(str, self.failing[:8]))
        more = "" if len(self.failing) <= 8 else f" (+{len(self.failing) - 8} more)"
        super().__init__(f"slant map is not an isomorphism on opens: {shown}{more}")


class FormNotSymmetric(SapcError, ValueError):
    pass


class SchemaError(SapcError, ValueError):
    """Input document violates the triangulation schema."""

    def __init__(self, pointer, message):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message
