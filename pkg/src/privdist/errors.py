"""Exception hierarchy. Every error carries a short stable code used by the CLI."""


class PrivDistError(Exception):
    code = "E_PRIVDIST"


class GraphError(PrivDistError, ValueError):
    code = "E_GRAPH"


class EdgeListError(GraphError):
    code = "E_LOAD"


class DisconnectedGraphError(GraphError):
    code = "E_DISCONNECTED"


class ParameterError(PrivDistError, ValueError):
    code = "E_PARAM"


class AbsentPathError(PrivDistError):
    """A path required by the remove-edge sensitivity computation does not exist.

    ``pairs`` lists every offending ``(u, v)`` together with the missing
    path index (2 or 3).
    """

    code = "E_ABSENT_PATH"

    def __init__(self, pairs):
        self.pairs = list(pairs)
        missing = sorted({t for _, _, t in self.pairs})
        shown = ", ".join(f"({u},{v})" for u, v, _ in self.pairs[:5])
        more = "" if len(self.pairs) <= 5 else f" and {len(self.pairs) - 5} more"
        labels = "/".join(f"P{t}" for t in missing)
        super().__init__(
            f"{labels} absent for {len(self.pairs)} pair(s): {shown}{more}; "
            "graph is not 3-edge-connected or greedy path deletion disconnected a pair"
        )


class BridgeError(PrivDistError):
    code = "E_BRIDGE"

    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"removing edge {edge} disconnects the graph")
