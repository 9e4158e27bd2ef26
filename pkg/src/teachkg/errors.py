"""Exception hierarchy.

Everything raised on bad data derives from :class:`TeachKGError`; the CLI
maps those to exit code 2.
"""


class TeachKGError(Exception):
    pass


class MalformedTriple(TeachKGError, ValueError):
    pass


class InvalidEntity(TeachKGError, ValueError):
    pass


class InvalidParams(TeachKGError, ValueError):
    pass


class DuplicateIdConflict(TeachKGError):
    def __init__(self, node_id, detail=""):
        self.id = node_id
        super().__init__(f"{node_id} already exists with different values{': ' + detail if detail else ''}")


class UnknownEntity(TeachKGError, KeyError):
    def __init__(self, node_id, kind=None):
        self.id = str(node_id)
        self.kind = kind
        what = f"unknown {kind}" if kind else "unknown entity"
        super().__init__(f"{what}: {node_id}")

    def __str__(self):
        return self.args[0]


class CycleDetected(TeachKGError):
    def __init__(self, path):
        self.path = list(path)
        super().__init__("topic hierarchy cycle: " + " -> ".join(str(p) for p in self.path))


class ReadOnlyStore(TeachKGError):
    pass


class JsonSyntax(TeachKGError):
    def __init__(self, line, col, msg="invalid JSON", source=None):
        self.line, self.col, self.source = line, col, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {msg}")


class SchemaViolation(TeachKGError):
    def __init__(self, path, reason, source=None):
        self.path, self.reason, self.source = path, reason, source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: {reason}")


class DuplicateLectureIndex(SchemaViolation):
    def __init__(self, path, index, source=None):
        self.index = index
        super().__init__(path, f"duplicate lecture index {index}", source)


class MissingFile(TeachKGError, FileNotFoundError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"missing file: {path}")

    def __str__(self):
        return f"missing file: {self.path}"


class TurtleSyntax(TeachKGError):
    def __init__(self, line, col, expected):
        self.line, self.col, self.expected = line, col, expected
        super().__init__(f"{line}:{col}: expected {expected}")


class EmptyCorpus(TeachKGError):
    pass


class NamespaceViolation(TeachKGError):
    pass


class UnsupportedBeforeInference(TeachKGError):
    def __init__(self):
        super().__init__("prerequisites have not been inferred yet; run infer-prereqs first")
