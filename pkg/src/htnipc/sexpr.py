"""S-expression reader that keeps the source position of every token."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import HtnError


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(HtnError):
    """Base for every parse-time diagnostic; always carries a span."""

    kind = "ParseError"

    def __init__(self, message: str, span: SourceSpan | None):
        self.message = message
        self.span = span
        where = f"{span}: " if span else ""
        super().__init__(f"{where}{self.kind}: {message}")


class HddlSyntaxError(ParseError):
    kind = "SyntaxError"


class UndeclaredSymbol(ParseError):
    kind = "UndeclaredSymbol"


class ArityMismatch(ParseError):
    kind = "ArityMismatch"


class TypeMismatch(ParseError):
    kind = "TypeMismatch"


class DuplicateDefinition(ParseError):
    kind = "DuplicateDefinition"


class DomainMismatch(ParseError):
    kind = "DomainMismatch"


@dataclass(frozen=True)
class Symbol:
    text: str
    span: SourceSpan = field(compare=False)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    span: SourceSpan = field(compare=False)
    end: SourceSpan | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)


_DELIMS = set("();")


def tokenize(text: str, file: str = "<input>"):
    """Yield ``(token, span)``; tokens are ``(``, ``)`` or lower-cased symbols."""
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
        elif c.isspace():
            col, i = col + 1, i + 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, SourceSpan(file, line, col, 1)
            col, i = col + 1, i + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _DELIMS:
                j += 1
            yield text[i:j].lower(), SourceSpan(file, line, col, j - i)
            col += j - i
            i = j


def read(text: str, file: str = "<input>") -> SList:
    """Read exactly one top-level list from ``text``."""
    stack: list[tuple[list, SourceSpan]] = []
    result = None
    for tok, span in tokenize(text, file):
        if result is not None:
            raise HddlSyntaxError(f"unexpected {tok!r} after the end of the definition", span)
        if tok == "(":
            stack.append(([], span))
        elif tok == ")":
            if not stack:
                raise HddlSyntaxError("unbalanced ')'", span)
            items, start = stack.pop()
            node = SList(tuple(items), start, span)
            if stack:
                stack[-1][0].append(node)
            else:
                result = node
        else:
            if not stack:
                raise HddlSyntaxError(f"expected '(' but found {tok!r}", span)
            stack[-1][0].append(Symbol(tok, span))
    if stack:
        raise HddlSyntaxError("unclosed '('", stack[-1][1])
    if result is None:
        raise HddlSyntaxError("empty input", SourceSpan(file, 1, 1, 0))
    return result
