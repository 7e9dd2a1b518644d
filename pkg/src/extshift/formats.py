"""Text formats for subspaces and ``F[t]`` matrices, with line/column diagnostics.

Subspace file::

    field Q          # optional, defaults to Q
    n 4
    k 3
    e{1,2,3} - e{1,2,4}
    ...

TMatrix file: ``n`` rows of whitespace-separated polynomials in ``t``; a row
ends at a newline or at a standalone ``/`` token, so ``1 1 / 0 t`` is a
complete 2 x 2 matrix.  An optional ``field`` line may precede the rows.
"""

from __future__ import annotations

from .exterior import FormSyntaxError, parse_form
from .shifting import TMatrix
from .subspace import Subspace, from_generators
from .tfield import Field, TPoly, get_field

__all__ = ["ParseError", "parse_subspace", "format_subspace", "parse_tmatrix", "format_tmatrix"]


class ParseError(ValueError):
    """Malformed input text; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _content(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def parse_subspace(text: str, field: Field | None = None) -> Subspace:
    """Read a subspace file; ``field`` overrides (and must agree with) any ``field`` line."""
    header: dict[str, tuple[str, int]] = {}
    forms: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _content(raw)
        if not line.strip():
            continue
        offset = len(line) - len(line.lstrip()) + 1
        head = line.split(None, 1)
        if head[0] in ("field", "n", "k") and not forms:
            if len(head) != 2:
                raise ParseError(f"'{head[0]}' needs a value", lineno, offset)
            if head[0] in header:
                raise ParseError(f"duplicate '{head[0]}' line", lineno, offset)
            header[head[0]] = (head[1].strip(), lineno)
        else:
            forms.append((line, lineno, offset))
    if field is None:
        name, lineno = header.get("field", ("Q", 0))
        try:
            field = get_field(name)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    elif "field" in header:
        name, lineno = header["field"]
        try:
            declared = get_field(name)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if declared != field:
            raise ParseError(f"file declares field {declared}, but {field} was requested", lineno)
    dims = {}
    for key in ("n", "k"):
        if key not in header:
            raise ParseError(f"missing '{key} <int>' header line", 1)
        val, lineno = header[key]
        try:
            dims[key] = int(val)
        except ValueError:
            raise ParseError(f"'{key}' must be an integer, got {val!r}", lineno) from None
    n, k = dims["n"], dims["k"]
    if n < 1 or k < 0:
        raise ParseError("need n >= 1 and k >= 0", header["n"][1])
    parsed = []
    for line, lineno, _offset in forms:
        try:
            parsed.append(parse_form(field, n, line, k))
        except FormSyntaxError as exc:
            raise ParseError(str(exc).split(": ", 1)[1], lineno, exc.column) from None
    return from_generators(field, n, k, parsed)


def format_subspace(L: Subspace) -> str:
    return L.to_text()


def parse_tmatrix(text: str, field: Field | None = None) -> TMatrix:
    rows: list[list[TPoly]] = []
    current: list[TPoly] = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _content(raw)
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("field") and not rows and not current:
            parts = stripped.split(None, 1)
            try:
                declared = get_field(parts[1]) if len(parts) == 2 else None
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if declared is None:
                raise ParseError("'field' needs a value", lineno)
            if field is not None and declared != field:
                raise ParseError(f"matrix is over {declared}, expected {field}", lineno)
            continue
        F = field or declared or get_field("Q")
        col = 0
        for tok in line.split():
            col = line.index(tok, col) + 1
            if tok == "/":
                rows.append(current)
                current = []
            else:
                try:
                    current.append(TPoly.parse(F, tok))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(str(exc), lineno, col) from None
            col += len(tok) - 1
        if current:
            rows.append(current)
            current = []
        last_line = lineno
    if current:
        rows.append(current)
    if not rows:
        raise ParseError("empty matrix", 1)
    n = len(rows)
    for r, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {r + 1} has {len(row)} entries; a {n} x {n} matrix needs {n}", last_line)
    F = field or declared or get_field("Q")
    try:
        return TMatrix(F, rows)
    except ValueError as exc:
        raise ParseError(str(exc), last_line) from None


def format_tmatrix(N: TMatrix) -> str:
    lines = [f"field {N.field}"]
    lines += [" ".join(str(p) for p in row) for row in N.entries]
    return "\n".join(lines) + "\n"
