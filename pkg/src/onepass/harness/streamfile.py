"""Line-oriented stream files.

Layout::

    v1
    modulus <p> <m> <c_0> ... <c_m>
    code <variant> q=<p>^<m> mod=<c_0,...,c_m> n=<n> k=<k> [S=<a_0,...>] [mult=<u_0,...>]
         [fold=<s>] [seed=<seed> cdeg=<c> rdeg=<d>]
    <symbol 0>
    ...

The ``code`` header is a single line.  Evaluation points and multipliers are
decimal element encodings (c_0 + c_1 p + ...).  Each body line is one stream
symbol written as its coefficient vector over GF(p), lowest degree first and
space separated; folded symbols join their s vectors with `` ; ``.  Prime
fields use ``modulus p 1`` and ``mod=`` with no coefficients.
"""

from __future__ import annotations

import io
import os
from typing import IO, Iterator, Sequence

from ..codes import FoldedReedSolomon, LinearCode, ReedSolomon, SparseLinearCode
from ..galois import GF, Field, format_modulus, parse_modulus

FORMAT_VERSION = "v1"


class StreamFormatError(ValueError):
    pass


class SinglePassError(RuntimeError):
    """The stream body was requested a second time."""


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",")] if text else []


def _join(values: Sequence[int]) -> str:
    return ",".join(str(int(v)) for v in values)


def code_header(code: LinearCode) -> str:
    F = code.field
    m = 1 if F.base is None else F.degree
    mod = "" if F.base is None else _join(F.modulus)
    parts = ["code", code.variant, f"q={F.p}^{m}", f"mod={mod}", f"n={code.n}", f"k={code.k}"]
    if isinstance(code, SparseLinearCode):
        parts += [f"seed={code.seed}", f"cdeg={code.column_degree}", f"rdeg={code.row_degree}"]
        return " ".join(parts)
    rs = code.rs if isinstance(code, FoldedReedSolomon) else code
    parts.append(f"S={_join(rs.points)}")
    if rs.column_multipliers is not None:
        parts.append(f"mult={_join(rs.column_multipliers)}")
    if isinstance(code, FoldedReedSolomon):
        parts.append(f"fold={code.s}")
    return " ".join(parts)


def parse_code_header(line: str, field: Field | None = None) -> LinearCode:
    toks = line.split()
    if len(toks) < 2 or toks[0] != "code":
        raise StreamFormatError(f"expected a code header, got {line!r}")
    variant = toks[1]
    kv = {}
    for tok in toks[2:]:
        if "=" not in tok:
            raise StreamFormatError(f"malformed header token {tok!r}")
        key, val = tok.split("=", 1)
        kv[key] = val
    try:
        p, m = (int(x) for x in kv["q"].split("^"))
        coeffs = tuple(_ints(kv.get("mod", "")))
        F = GF(p) if m == 1 else GF(p, m, coeffs)
        if field is not None and field != F:
            raise StreamFormatError("code header field disagrees with the modulus line")
        n, k = int(kv["n"]), int(kv["k"])
        if variant == "SparseLinear":
            code = SparseLinearCode(F, n, int(kv["cdeg"]), int(kv["rdeg"]), int(kv["seed"]))
            if code.k != k:
                raise StreamFormatError(f"sparse code has dimension {code.k}, header says {k}")
            return code
        points = _ints(kv["S"])
        mult = _ints(kv["mult"]) if "mult" in kv else None
        rs = ReedSolomon(F, points, k, mult)
        if rs.n != n:
            raise StreamFormatError(f"{len(points)} evaluation points but n={n}")
        if variant == "FoldedRS":
            return FoldedReedSolomon(rs, int(kv["fold"]))
        if variant != rs.variant:
            raise StreamFormatError(f"variant {variant} does not match the supplied data")
        return rs
    except KeyError as exc:
        raise StreamFormatError(f"code header missing {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, StreamFormatError):
            raise
        raise StreamFormatError(str(exc)) from None


def format_symbol(code: LinearCode, symbol) -> str:
    F = code.field
    if isinstance(code, FoldedReedSolomon):
        return " ; ".join(" ".join(map(str, F.vector(F.coerce(x)))) for x in symbol)
    return " ".join(map(str, F.vector(F.coerce(symbol))))


def parse_symbol(code: LinearCode, line: str):
    F = code.field
    m = 1 if F.base is None else F.degree

    def one(text: str) -> int:
        digits = [int(x) for x in text.split()]
        if len(digits) != m or not all(0 <= d < F.p for d in digits):
            raise StreamFormatError(f"bad coefficient vector {text!r} for {F}")
        return F.from_vector(digits)

    if isinstance(code, FoldedReedSolomon):
        parts = line.split(";")
        if len(parts) != code.s:
            raise StreamFormatError(f"folded symbol needs {code.s} vectors, got {len(parts)}")
        return tuple(one(p) for p in parts)
    return one(line)


def dumps(code: LinearCode, word: Sequence) -> str:
    if len(word) != code.num_symbols:
        raise StreamFormatError(f"word has {len(word)} symbols, code has {code.num_symbols}")
    lines = [FORMAT_VERSION, "modulus " + format_modulus(code.field), code_header(code)]
    lines += [format_symbol(code, y) for y in word]
    return "\n".join(lines) + "\n"


def write_stream(path: str | os.PathLike | IO[str], code: LinearCode, word: Sequence) -> None:
    text = dumps(code, word)
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


class StreamReader:
    """Reads the header eagerly and the body exactly once, front to back.

    There is no seek or rewind; calling :meth:`symbols` twice raises
    :class:`SinglePassError`.
    """

    def __init__(self, source: str | os.PathLike | IO[str]):
        if hasattr(source, "readline"):
            self._fh = source
            self._owned = False
        else:
            self._fh = open(source, "r")
            self._owned = True
        self._consumed = False
        try:
            version = self._next_line()
            if version != FORMAT_VERSION:
                raise StreamFormatError(f"unsupported stream version {version!r}")
            mod = self._next_line()
            if not mod.startswith("modulus "):
                raise StreamFormatError("second line must be the modulus descriptor")
            try:
                self.field = parse_modulus(mod[len("modulus "):])
            except ValueError as exc:
                raise StreamFormatError(str(exc)) from None
            self.code = parse_code_header(self._next_line(), self.field)
        except Exception:
            self.close()
            raise

    def _next_line(self) -> str:
        line = self._fh.readline()
        if not line:
            raise StreamFormatError("unexpected end of stream header")
        return line.strip()

    def symbols(self) -> Iterator[tuple[int, object]]:
        if self._consumed:
            raise SinglePassError("the stream can be read only once")
        self._consumed = True
        return self._body()

    def _body(self):
        total = self.code.num_symbols
        j = 0
        try:
            for raw in self._fh:
                line = raw.strip()
                if not line:
                    continue
                if j >= total:
                    raise StreamFormatError(f"more than {total} symbols in the body")
                yield j, parse_symbol(self.code, line)
                j += 1
            if j != total:
                raise StreamFormatError(f"body has {j} symbols, expected {total}")
        finally:
            self.close()

    def close(self):
        if self._owned and not self._fh.closed:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_word(source) -> tuple[LinearCode, list]:
    """Header and the whole body (one pass) as a list."""
    rd = StreamReader(source)
    return rd.code, [y for _, y in rd.symbols()]


def loads(text: str) -> tuple[LinearCode, list]:
    return read_word(io.StringIO(text))
