"""Line-oriented text format for codes and repair schemes.

Grammar (fixed section order, `#` starts a comment anywhere on a line):

    msrcode v1
    field p=<int> m=<int> [modulus=<hex>]     # modulus mandatory iff m > 1
    params n=<int> k=<int> l=<int>
    C u=<u> j=<j>                             # u = 1..r outer, j = 1..k inner
    <l rows of l element literals>
    ...
    S i=<i>                                   # optional; all k blocks or none
    <l/r rows of l element literals>

Element literals are decimal canonical values for prime fields; extension
fields accept decimal or 0x-prefixed hex coefficient packings and are
written back as hex.  The writer output is the canonical form: writing a
parsed canonical file reproduces it byte for byte.
"""

from __future__ import annotations

from .code import Code, CodeParams
from .errors import CodeFileError
from .field import FieldSpec
from .matrix import Matrix
from .repair import RepairScheme

HEADER = "msrcode v1"


def _format_element(field: FieldSpec, e: int) -> str:
    if field.m == 1:
        return str(e)
    return f"{e:#x}"


def _parse_element(field: FieldSpec, tok: str, lineno: int) -> int:
    try:
        if tok.lower().startswith("0x"):
            if field.m == 1:
                raise ValueError("hex literals are for extension fields")
            value = int(tok, 16)
        else:
            value = int(tok, 10)
    except ValueError as exc:
        raise CodeFileError(f"line {lineno}: bad element literal {tok!r}") from exc
    if not 0 <= value < field.q:
        raise CodeFileError(f"line {lineno}: element {tok} outside [0, {field.q - 1}]")
    return value


def format_code_file(code: Code, scheme: RepairScheme | None = None) -> str:
    """Canonical text serialization of a code and optional constant scheme."""
    p = code.params
    out = [HEADER]
    if p.field.m == 1:
        out.append(f"field p={p.field.p} m=1")
    else:
        out.append(f"field p={p.field.p} m={p.field.m} modulus={p.field.modulus:#x}")
    out.append(f"params n={p.n} k={p.k} l={p.l}")
    for u in range(1, p.r + 1):
        for j in range(1, p.k + 1):
            out.append(f"C u={u} j={j}")
            m = code.matrix(u, j)
            for i in range(p.l):
                out.append(" ".join(_format_element(p.field, e) for e in m.row(i)))
    if scheme is not None:
        if scheme.mode != "constant":
            raise CodeFileError("only constant-mode schemes are serializable")
        for i in range(1, p.k + 1):
            out.append(f"S i={i}")
            m = scheme.matrix_for(i)
            for row in range(m.rows):
                out.append(" ".join(_format_element(p.field, e) for e in m.row(row)))
    return "\n".join(out) + "\n"


def write_code_file(path, code: Code, scheme: RepairScheme | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_code_file(code, scheme))


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self.items.append((lineno, body))
        self.pos = 0

    def next(self, expect: str | None = None):
        if self.pos >= len(self.items):
            raise CodeFileError(
                f"unexpected end of file{f' while expecting {expect}' if expect else ''}"
            )
        item = self.items[self.pos]
        self.pos += 1
        return item

    def peek(self):
        if self.pos >= len(self.items):
            return None
        return self.items[self.pos]

    def done(self) -> bool:
        return self.pos >= len(self.items)


def _parse_kv(line: str, lineno: int, tag: str, keys) -> dict:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise CodeFileError(f"line {lineno}: expected '{tag} ...', got {line!r}")
    seen = {}
    for part in parts[1:]:
        if "=" not in part:
            raise CodeFileError(f"line {lineno}: expected key=value, got {part!r}")
        key, _, value = part.partition("=")
        if key in seen:
            raise CodeFileError(f"line {lineno}: duplicate key {key!r}")
        seen[key] = value
    required = [k for k in keys if not k.endswith("?")]
    optional = {k[:-1] for k in keys if k.endswith("?")}
    for k in required:
        if k not in seen:
            raise CodeFileError(f"line {lineno}: missing {k}= in '{tag}' line")
    for k in seen:
        if k not in required and k not in optional:
            raise CodeFileError(f"line {lineno}: unknown key {k!r} in '{tag}' line")
    return seen


def _parse_int(value: str, lineno: int, what: str) -> int:
    try:
        return int(value, 10)
    except ValueError as exc:
        raise CodeFileError(f"line {lineno}: {what} must be an integer, got {value!r}") from exc


def _read_matrix(lines: _Lines, field: FieldSpec, rows: int, cols: int) -> Matrix:
    data = []
    for _ in range(rows):
        lineno, body = lines.next(expect=f"{rows}x{cols} matrix row")
        toks = body.split()
        if len(toks) != cols:
            raise CodeFileError(f"line {lineno}: expected {cols} elements, got {len(toks)}")
        data.append([_parse_element(field, t, lineno) for t in toks])
    return Matrix.from_rows(field, data)


def parse_code_file(text: str):
    """Parse the canonical format; returns (Code, RepairScheme | None).

    The code is returned exactly as stored (possibly un-normalized); loaders
    that need the normalized form should call normalize() and may want to
    tell the user they did.
    """
    lines = _Lines(text)
    lineno, body = lines.next(expect="header")
    if body != HEADER:
        raise CodeFileError(f"line {lineno}: expected header {HEADER!r}")
    lineno, body = lines.next(expect="field line")
    kv = _parse_kv(body, lineno, "field", ("p", "m", "modulus?"))
    p = _parse_int(kv["p"], lineno, "p")
    m = _parse_int(kv["m"], lineno, "m")
    modulus = None
    if "modulus" in kv:
        tok = kv["modulus"]
        try:
            modulus = int(tok, 16)
        except ValueError as exc:
            raise CodeFileError(f"line {lineno}: modulus must be hex, got {tok!r}") from exc
    if (m > 1) != (modulus is not None):
        raise CodeFileError(f"line {lineno}: modulus is required exactly when m > 1")
    try:
        field = FieldSpec(p, m, modulus)
    except Exception as exc:
        raise CodeFileError(f"line {lineno}: invalid field: {exc}") from exc
    lineno, body = lines.next(expect="params line")
    kv = _parse_kv(body, lineno, "params", ("n", "k", "l"))
    n = _parse_int(kv["n"], lineno, "n")
    k = _parse_int(kv["k"], lineno, "k")
    l = _parse_int(kv["l"], lineno, "l")
    r = n - k
    if r < 1:
        raise CodeFileError(f"line {lineno}: n = {n} must exceed k = {k}")
    try:
        params = CodeParams(field, n, k, r, l)
    except Exception as exc:
        raise CodeFileError(f"line {lineno}: invalid params: {exc}") from exc
    enc = []
    for u in range(1, r + 1):
        row = []
        for j in range(1, k + 1):
            lineno, body = lines.next(expect=f"C u={u} j={j}")
            kv = _parse_kv(body, lineno, "C", ("u", "j"))
            got_u = _parse_int(kv["u"], lineno, "u")
            got_j = _parse_int(kv["j"], lineno, "j")
            if (got_u, got_j) != (u, j):
                raise CodeFileError(
                    f"line {lineno}: expected block C u={u} j={j}, got u={got_u} j={got_j}"
                )
            row.append(_read_matrix(lines, field, l, l))
        enc.append(tuple(row))
    try:
        code = Code(params, enc)
    except Exception as exc:
        raise CodeFileError(f"invalid encoding grid: {exc}") from exc
    scheme = None
    if not lines.done():
        beta = l // r
        mats = []
        for i in range(1, k + 1):
            lineno, body = lines.next(expect=f"S i={i}")
            kv = _parse_kv(body, lineno, "S", ("i",))
            got_i = _parse_int(kv["i"], lineno, "i")
            if got_i != i:
                raise CodeFileError(f"line {lineno}: expected block S i={i}, got i={got_i}")
            mats.append(_read_matrix(lines, field, beta, l))
        try:
            scheme = RepairScheme.constant(mats)
        except Exception as exc:
            raise CodeFileError(f"invalid repair scheme: {exc}") from exc
    if not lines.done():
        lineno, body = lines.next()
        raise CodeFileError(f"line {lineno}: trailing content {body!r}")
    return code, scheme


def read_code_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_code_file(fh.read())


def parse_data_file(text: str, field: FieldSpec, k: int, l: int):
    """Parse k data columns of l element literals each (one line per column)."""
    lines = _Lines(text)
    data = []
    for j in range(k):
        lineno, body = lines.next(expect=f"data column {j + 1}")
        toks = body.split()
        if len(toks) != l:
            raise CodeFileError(f"line {lineno}: expected {l} elements, got {len(toks)}")
        data.append(tuple(_parse_element(field, t, lineno) for t in toks))
    if not lines.done():
        lineno, body = lines.next()
        raise CodeFileError(f"line {lineno}: trailing content {body!r}")
    return tuple(data)
