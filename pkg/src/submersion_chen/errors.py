"""Exception hierarchy shared by every module."""


class GeometryError(Exception):
    """Base class for numerical geometry failures."""


class NonPositiveDefinite(GeometryError):
    pass


class DomainViolation(GeometryError):
    pass


class StencilOutsideDomain(DomainViolation):
    pass


class FrameDiscontinuity(StencilOutsideDomain):
    """Projectors jump across the difference stencil."""


class RankDeficient(GeometryError):
    pass


class GramSchmidtBreakdown(GeometryError):
    pass


class DegeneratePlane(GeometryError):
    pass


class DimensionTooSmall(GeometryError):
    pass


class FiberTooSmall(DimensionTooSmall):
    pass


class MissingStructure(GeometryError):
    pass


class MixedStructureVector(GeometryError):
    pass


class ModelMisfit(GeometryError):
    pass


class ConstraintViolated(GeometryError):
    pass


class ConfigError(Exception):
    """Problems with user input: configs, expressions, CLI arguments."""


class ExpressionSyntaxError(ConfigError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownIdentifier(ConfigError):
    pass


class ArityError(ConfigError):
    pass


class ShapeError(ConfigError):
    pass


class MissingField(ConfigError):
    pass


class ReportIOError(OSError):
    pass
