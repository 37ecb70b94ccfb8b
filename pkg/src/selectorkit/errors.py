"""Exception types raised by selectorkit."""


class SelectorKitError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SelectorKitError):
    """Input does not satisfy the structural requirements of a type."""


class MissingReflexive(ValidationError):
    def __init__(self, x):
        self.x = x
        super().__init__(f"{x!r} is not in its own image")


class UnknownElement(ValidationError):
    def __init__(self, y, where=None):
        self.y = y
        self.where = where
        msg = f"{y!r} is not in the ground set"
        if where is not None:
            msg += f" (in entry for {where!r})"
        super().__init__(msg)


class DuplicateEntry(ValidationError):
    def __init__(self, x):
        self.x = x
        super().__init__(f"duplicate entry for {x!r}")


class MissingEntry(ValidationError):
    def __init__(self, x):
        self.x = x
        super().__init__(f"no entry for {x!r}")


class GroundMismatch(SelectorKitError):
    def __init__(self, msg="operands live on different ground sets"):
        super().__init__(msg)


class NotBijective(ValidationError):
    def __init__(self, msg="map is not a bijection"):
        super().__init__(msg)


class NotSymmetric(SelectorKitError):
    """Strict decomposition was asked for a non-symmetric map.

    ``pair`` is ``(x, y)`` with ``y`` in ``F(x)`` but ``x`` not in ``F(y)``.
    """

    def __init__(self, pair):
        self.pair = pair
        x, y = pair
        super().__init__(f"map is not symmetric: {y!r} in F({x!r}) but {x!r} not in F({y!r})")


class CapExceeded(SelectorKitError):
    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"instance size {size} exceeds cap {cap}")


class InvalidBase(SelectorKitError):
    def __init__(self, report):
        self.report = report
        super().__init__("base violates the coarse-structure axioms")


class NotEquivalence(SelectorKitError):
    def __init__(self, name, witness):
        self.name = name
        self.witness = witness
        super().__init__(f"entourage {name!r} is not an equivalence relation: {witness}")
