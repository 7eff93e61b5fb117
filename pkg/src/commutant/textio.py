"""Text formats for matrices, algebras, pencils and certificates.

A matrix block is a header line "rows cols field" followed by that many
rows of whitespace-separated scalar literals; rationals print as "a/b" or
"a", prime-field residues as plain integers and extension elements as
bracketed coefficient lists "[c0,c1,...]".  Files may carry '#' comment
lines and blank lines between blocks.  A matrix-set file is a sequence of
blocks over one field, and is how algebras travel (the blocks are read as
generators).  A pencil file is exactly two blocks of shape n x (n+1).

Parsers report the first offending line; emitters are deterministic, so
identical inputs always serialize to identical bytes.
"""

from __future__ import annotations

from commutant.errors import TextFormatError
from commutant.fields import Field, parse_field_label
from commutant.matrices import Matrix
from commutant.pencils import Pencil

__all__ = [
    "format_matrix",
    "parse_matrix",
    "format_matrix_set",
    "parse_matrix_set",
    "format_pencil",
    "parse_pencil",
    "format_certificate",
]


def format_matrix(m: Matrix) -> str:
    fmt = m.field.format_value
    lines = [f"{m.rows} {m.cols} {m.field.label()}"]
    for row in m.data:
        lines.append(" ".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


class _Lines:
    """Line cursor that skips blanks and comments and tracks numbers."""

    def __init__(self, text):
        self.raw = text.splitlines()
        self.pos = 0

    def next_content(self):
        while self.pos < len(self.raw):
            line = self.raw[self.pos]
            self.pos += 1
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                return stripped, self.pos
        return None, self.pos

    def peek_content(self):
        save = self.pos
        line, no = self.next_content()
        self.pos = save
        return line, no


def _parse_header(line, line_no, field_override=None):
    parts = line.split(None, 2)
    if len(parts) != 3:
        raise TextFormatError("matrix header must be 'rows cols field'", line_no)
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise TextFormatError(f"bad matrix dimensions {parts[0]!r} {parts[1]!r}", line_no)
    if rows < 1 or cols < 1:
        raise TextFormatError("matrix dimensions must be positive", line_no)
    try:
        declared = parse_field_label(parts[2])
    except ValueError as exc:
        raise TextFormatError(str(exc), line_no)
    if field_override is not None and field_override != declared:
        return rows, cols, declared, field_override
    return rows, cols, declared, declared


def _parse_block(cursor: _Lines, field_override=None) -> Matrix:
    line, no = cursor.next_content()
    if line is None:
        raise TextFormatError("expected a matrix header, found end of input", no)
    rows, cols, declared, target = _parse_header(line, no, field_override)
    grid = []
    for _ in range(rows):
        line, no = cursor.next_content()
        if line is None:
            raise TextFormatError("matrix body ended early", no)
        tokens = line.split()
        if len(tokens) != cols:
            raise TextFormatError(
                f"expected {cols} entries, found {len(tokens)}", no
            )
        row = []
        for tok in tokens:
            value = _reinterpret(tok, declared, target, no)
            row.append(value)
        grid.append(row)
    return Matrix._wrap(target, grid)


def _reinterpret(token, declared, target, line_no):
    """Parse a literal, re-reading integers under a field override.

    Overrides only re-interpret integer literals; a rational with a
    denominator or an extension coefficient list never coerces silently.
    """
    if target == declared:
        try:
            return declared.parse_value(token)
        except ValueError as exc:
            raise TextFormatError(str(exc), line_no)
    stripped = token.lstrip("+-")
    if not stripped.isdigit():
        raise TextFormatError(
            f"cannot reinterpret non-integer literal {token!r} in {target.label()}",
            line_no,
        )
    return target.from_int(int(token))


def parse_matrix(text: str, field_override: Field = None) -> Matrix:
    cursor = _Lines(text)
    m = _parse_block(cursor, field_override)
    line, no = cursor.next_content()
    if line is not None:
        raise TextFormatError("trailing content after the matrix block", no)
    return m


def format_matrix_set(mats, header_comment=None) -> str:
    parts = []
    if header_comment:
        parts.append("".join(f"# {line}\n" for line in header_comment.splitlines()))
    parts.extend(format_matrix(m) for m in mats)
    return "\n".join(parts)


def parse_matrix_set(text: str, field_override: Field = None):
    cursor = _Lines(text)
    mats = []
    while True:
        line, _ = cursor.peek_content()
        if line is None:
            break
        mats.append(_parse_block(cursor, field_override))
    if not mats:
        raise TextFormatError("no matrix blocks found", 0)
    first = mats[0]
    for m in mats[1:]:
        if m.field != first.field:
            raise TextFormatError("matrix blocks declare different fields", 0)
    return mats


def format_pencil(pc: Pencil) -> str:
    return format_matrix(pc.a) + "\n" + format_matrix(pc.b)


def parse_pencil(text: str, field_override: Field = None) -> Pencil:
    mats = parse_matrix_set(text, field_override)
    if len(mats) != 2:
        raise TextFormatError(f"a pencil file needs exactly 2 blocks, found {len(mats)}", 0)
    return Pencil(mats[0], mats[1])


def format_certificate(cert) -> str:
    return f"route: {cert.route}\n" + format_matrix(cert.witness)
