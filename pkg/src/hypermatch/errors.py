"""Exception hierarchy shared across the package."""


class HypermatchError(Exception):
    """Base class for every error raised by this package."""


class InvalidTriple(HypermatchError, ValueError):
    pass


class InvalidOrder(HypermatchError, ValueError):
    """Vertex count is not allowed for the requested operation."""


class SubsetTooSmall(HypermatchError, ValueError):
    pass


class SetsNotDisjoint(HypermatchError, ValueError):
    pass


class OrderTooLarge(HypermatchError, ValueError):
    pass


class DensityTooLow(HypermatchError):
    """A lemma's density hypothesis does not hold on its input."""


class EmptyGraph(HypermatchError):
    pass


class AbsorptionFailed(HypermatchError):
    def __init__(self, triple, message=None):
        self.triple = tuple(triple)
        super().__init__(message or f"no available absorber for {self.triple}")


class NotExtremal(HypermatchError):
    pass


class StageFailed(HypermatchError):
    """A stage of the extremal matcher could not complete.

    ``stage`` names the stage, ``vertex`` is the blocking vertex when one exists.
    """

    def __init__(self, stage, message, vertex=None):
        self.stage = stage
        self.vertex = vertex
        super().__init__(f"{stage}: {message}")


class GreedyFailed(StageFailed):
    pass


class GoodPairGraphTooSparse(StageFailed):
    def __init__(self, message):
        super().__init__("good-pairs", message)


class HallViolated(StageFailed):
    def __init__(self, witness, neighbours):
        self.witness = tuple(witness)
        self.neighbours = tuple(neighbours)
        super().__init__(
            "hall-finish",
            f"|N(Q)| = {len(self.neighbours)} < |Q| = {len(self.witness)}",
        )


class ParseError(HypermatchError, ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MalformedHeader(ParseError):
    pass


class MalformedLine(ParseError):
    pass


class VertexOutOfRange(ParseError):
    pass


class DuplicateVertexInEdge(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class EdgeCountMismatch(ParseError):
    pass
