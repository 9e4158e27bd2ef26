"""Reader and canonical writer for the Turtle subset used by teachkg.

Supported: ``@prefix`` directives, prefixed names, ``a``, ``;`` and ``,``
lists, string / integer / decimal / boolean literals and ``#`` comments.
"""

import re

from .errors import TurtleSyntax
from .store import PREFIXES, RDF, Literal, NodeId, Triple

_WS = re.compile(r"(?:\s+|#[^\n]*)+")
_PNAME_NS = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*):")
_IRI = re.compile(r"<([^<>\"{}|^`\\\s]*)>")
_PNAME = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*):([A-Za-z0-9_\-]+)")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)")
_BOOL = re.compile(r"(true|false)(?![A-Za-z0-9_\-:])")
_A = re.compile(r"a(?=[\s<\"#])")
_STRING_ESC = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\",
               "b": "\b", "f": "\f", "'": "'"}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.prefixes = {}

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, expected, pos=None):
        line, col = self.where(pos)
        raise TurtleSyntax(line, col, expected)

    def skip(self):
        m = _WS.match(self.text, self.pos)
        if m:
            self.pos = m.end()

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, s):
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s):
        if not self.peek(s):
            self.fail(repr(s))
        self.pos += len(s)

    def parse(self):
        triples = []
        while not self.at_end():
            if self.peek("@prefix"):
                self.pos += len("@prefix")
                self.directive()
            else:
                self.statement(triples)
        return triples

    def directive(self):
        self.skip()
        m = _PNAME_NS.match(self.text, self.pos)
        if not m:
            self.fail("prefix name")
        prefix = m.group(1)
        if prefix not in PREFIXES:
            self.fail(f"one of the prefixes {', '.join(PREFIXES)}")
        self.pos = m.end()
        self.skip()
        m = _IRI.match(self.text, self.pos)
        if not m:
            self.fail("IRI")
        self.pos = m.end()
        self.prefixes[prefix] = m.group(1)
        self.expect(".")

    def pname(self):
        self.skip()
        m = _PNAME.match(self.text, self.pos)
        if not m:
            return None
        if m.group(1) not in self.prefixes:
            self.fail(f"declared prefix (got {m.group(1)}:)")
        self.pos = m.end()
        return NodeId(m.group(0))

    def statement(self, triples):
        start = self.pos
        subject = self.pname()
        if subject is None:
            self.fail("subject", start)
        while True:
            self.skip()
            pred = self.verb()
            while True:
                triples.append(Triple(subject, pred, self.obj()))
                if self.peek(","):
                    self.pos += 1
                    continue
                break
            if self.peek(";"):
                while self.peek(";"):
                    self.pos += 1
                if self.peek("."):
                    break
                continue
            break
        self.expect(".")

    def verb(self):
        self.skip()
        if _A.match(self.text, self.pos):
            self.pos += 1
            return RDF.type
        p = self.pname()
        if p is None:
            self.fail("predicate")
        return p

    def obj(self):
        self.skip()
        text, pos = self.text, self.pos
        if text.startswith('"', pos):
            return Literal(self.string())
        m = _BOOL.match(text, pos)
        if m:
            self.pos = m.end()
            return Literal(m.group(1) == "true")
        m = _NUMBER.match(text, pos)
        if m:
            self.pos = m.end()
            token = m.group(0)
            return Literal(float(token)) if "." in token else Literal(int(token))
        p = self.pname()
        if p is None:
            self.fail("object")
        return p

    def string(self):
        text = self.text
        i = self.pos + 1
        out = []
        while True:
            if i >= len(text) or text[i] == "\n":
                self.fail('closing \'"\'', i)
            ch = text[i]
            if ch == '"':
                self.pos = i + 1
                return "".join(out)
            if ch == "\\":
                nxt = text[i + 1:i + 2]
                if nxt in _STRING_ESC:
                    out.append(_STRING_ESC[nxt])
                    i += 2
                    continue
                width = {"u": 4, "U": 8}.get(nxt)
                digits = text[i + 2:i + 2 + width] if width else ""
                if not width or not re.fullmatch(r"[0-9A-Fa-f]+", digits) or len(digits) != width:
                    self.fail("valid escape sequence", i)
                out.append(chr(int(digits, 16)))
                i += 2 + width
                continue
            out.append(ch)
            i += 1


def parse_turtle_subset(text):
    """Parse ``text`` and return its triples in document order."""
    return _Parser(text).parse()


def parse_turtle_document(text):
    """Like parse_turtle_subset, also returning the declared prefix table."""
    parser = _Parser(text)
    triples = parser.parse()
    return parser.prefixes, triples


def prefix_block():
    return "".join(f"@prefix {p}: <{iri}> .\n" for p, iri in PREFIXES.items())


def export_turtle(store):
    """Canonical, byte-deterministic Turtle for ``store``."""
    lines = [prefix_block()]
    triples = sorted((t.key() for t in store), key=lambda k: k)
    if triples:
        lines.append("\n")
        lines.extend(f"{s} {p} {o} .\n" for s, p, o in triples)
    return "".join(lines)
