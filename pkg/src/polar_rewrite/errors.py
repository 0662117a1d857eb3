"""Exception types. Every domain error derives from :class:`RewriteError`."""


class RewriteError(Exception):
    pass


class MissingMapping(RewriteError):
    def __init__(self, item):
        super().__init__(f"morphism has no image for {item}")
        self.item = item


class IncidenceViolation(RewriteError):
    def __init__(self, edge, detail=""):
        super().__init__(f"edge {edge} is not mapped compatibly with its endpoints" + (f": {detail}" if detail else ""))
        self.edge = edge


class NotMono(RewriteError):
    pass


class NotMatching(RewriteError):
    pass


class IdClash(RewriteError):
    def __init__(self, item):
        super().__init__(f"identifier {item} occurs in both operands")
        self.item = item


class DanglingEndpoint(RewriteError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} has an endpoint outside the node set")
        self.edge = edge


class UnknownNode(RewriteError):
    def __init__(self, node):
        super().__init__(f"unknown node {node}")
        self.node = node


class SizeBoundExceeded(RewriteError):
    def __init__(self, limit):
        super().__init__(f"enumeration exceeded the configured bound {limit}")
        self.limit = limit


class StarEndpointViolation(RewriteError):
    def __init__(self, edge):
        super().__init__(f"star edge {edge} must run from a positive node to a negative node")
        self.edge = edge


class NotASubset(RewriteError):
    def __init__(self, item):
        super().__init__(f"polarized item {item} is not part of the carrier graph")
        self.item = item


class UnpolarizedLinkingEdge(RewriteError):
    def __init__(self, edge):
        super().__init__(f"linking edge {edge} is not a star edge")
        self.edge = edge


class EdgeStrictnessViolation(RewriteError):
    def __init__(self, edge):
        super().__init__(f"left leg does not strictly preserve star edges at {edge}")
        self.edge = edge


class InvalidSpan(RewriteError):
    pass


class SignatureMismatch(RewriteError):
    pass


class StepLimitExceeded(RewriteError):
    def __init__(self, limit, trace):
        super().__init__(f"derivation did not terminate within {limit} steps")
        self.limit = limit
        self.trace = trace


class SigmaOutOfDomain(RewriteError):
    pass


class TauNotTotal(RewriteError):
    pass


class OutgoingEdgeOnC(RewriteError):
    def __init__(self, node):
        super().__init__(f"cloned parameter node {node} has outgoing edges")
        self.node = node


class ParseError(RewriteError):
    def __init__(self, msg, line, col):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class UnresolvedReference(RewriteError):
    pass


class AmbiguousEdgeMap(RewriteError):
    def __init__(self, edge):
        super().__init__(f"edge map for {edge} cannot be inferred: several parallel candidates")
        self.edge = edge
