"""Exception hierarchy shared by all minkpoly modules."""


class MinkpolyError(Exception):
    """Base class for every error raised by this package."""


class NotTimelikeFuture(MinkpolyError):
    def __init__(self, vector):
        self.vector = vector
        super().__init__(f"vector {list(vector)} is not future timelike")


# --- polygon validation -----------------------------------------------------

class PolygonError(MinkpolyError):
    """A list of edges fails to describe a point of the polygon space."""


class WrongCount(PolygonError):
    def __init__(self, expected, got):
        self.expected, self.got = expected, got
        super().__init__(f"expected {expected} edges, got {got}")


class WrongCone(PolygonError):
    def __init__(self, index, cone):
        self.index, self.cone = index, cone
        super().__init__(f"edge {index} lies in the wrong cone ({cone})")


class WrongLength(PolygonError):
    def __init__(self, index, measured, expected):
        self.index, self.measured, self.expected = index, measured, expected
        super().__init__(f"edge {index} has length {measured!r}, expected {expected!r}")


class NotClosed(PolygonError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"polygon does not close, residual {list(residual)}")


class NonTimelikeDiagonal(PolygonError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"diagonal {index} is not future timelike")


class DegenerateDihedral(PolygonError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"dihedral angle at diagonal {index} is undefined (edge aligned with diagonal)")


class OutsidePolytope(MinkpolyError):
    def __init__(self, index, value):
        self.index, self.value = index, value
        super().__init__(f"triangle {index} violates the reversed triangle inequality (cosh = {value!r})")


class EmptyPolytope(MinkpolyError):
    pass


class InfeasibleConstants(EmptyPolytope):
    pass


class UnboundedNeedsDmax(MinkpolyError):
    pass


# --- spectral side -----------------------------------------------------------

class NonRealSpectrum(MinkpolyError):
    def __init__(self, index, discriminant):
        self.index, self.discriminant = index, discriminant
        super().__init__(f"truncation {index} has non-real spectrum (discriminant {discriminant!r})")


class NotJHermitian(MinkpolyError):
    pass


class ChildNotReal(MinkpolyError):
    pass


class PoleAt(MinkpolyError):
    def __init__(self, where):
        self.where = where
        super().__init__(f"secular function has a pole at {where!r}")


class NullVector(MinkpolyError):
    pass


# --- symplectic form ---------------------------------------------------------

class NotOnSphere(MinkpolyError):
    pass


class NotTangent(MinkpolyError):
    def __init__(self, which):
        self.which = which
        super().__init__(f"{which} is not tangent to the pseudosphere")
