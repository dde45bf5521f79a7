"""Reading and writing PLA files and plain truth tables.

PLA rows are read as a fully specified cover: an output ``0`` in a row
means the output is 0 on those minterms.  Output don't-cares are rejected.

Truth-table dialect::

    # comment
    3 3
    000 110
    001 000
    ...

Header ``N M`` then exactly 2^N rows in any order.
"""
from __future__ import annotations

import logging
from pathlib import Path

from .errors import (
    DuplicateRow,
    EmptyFunction,
    MissingRow,
    ParseError,
    TooLarge,
    UnsupportedFeature,
)
from .function import MAX_WIDTH, BooleanFunction, Cube, to_bits

log = logging.getLogger(__name__)

MAX_TT_INPUTS = 20

# directives that carry no semantics for us
_IGNORED = {".ilb", ".ob", ".phase", ".pair", ".symbolic", ".kiss", ".mv", ".label"}


def _int_arg(tokens, lineno):
    if len(tokens) != 2:
        raise ParseError(f"{tokens[0]} takes one integer argument", lineno)
    try:
        value = int(tokens[1])
    except ValueError:
        raise ParseError(f"bad integer {tokens[1]!r} after {tokens[0]}", lineno) from None
    if value < 1:
        raise ParseError(f"{tokens[0]} must be positive", lineno)
    return value


def parse_pla(text: str, name: str = "f") -> BooleanFunction:
    n = m = terms = None
    cubes: list[Cube] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("."):
            tokens = line.split()
            key = tokens[0]
            if key in (".e", ".end"):
                break
            if key == ".i":
                n = _int_arg(tokens, lineno)
                if n > MAX_WIDTH:
                    raise UnsupportedFeature(f".i {n} exceeds {MAX_WIDTH} inputs", lineno)
            elif key == ".o":
                m = _int_arg(tokens, lineno)
                if m > MAX_WIDTH:
                    raise UnsupportedFeature(f".o {m} exceeds {MAX_WIDTH} outputs", lineno)
            elif key == ".p":
                terms = _int_arg(tokens, lineno)
            elif key == ".type":
                if tokens[1:] != ["f"]:
                    raise UnsupportedFeature(
                        f"only fully specified PLAs (.type f) are supported, got {line!r}",
                        lineno,
                    )
            elif key in _IGNORED:
                pass
            else:
                log.warning("line %d: skipping unknown directive %s", lineno, key)
            continue
        if n is None or m is None:
            raise ParseError("cube row before .i/.o declarations", lineno)
        tokens = line.replace("|", " ").split()
        if len(tokens) == 2:
            ins, outs = tokens
        else:
            joined = "".join(tokens)
            if len(joined) != n + m:
                raise ParseError(f"cannot split row {line!r} into {n}+{m} columns", lineno)
            ins, outs = joined[:n], joined[n:]
        if len(ins) != n or len(outs) != m:
            raise ParseError(
                f"row {line!r} has widths {len(ins)}/{len(outs)}, expected {n}/{m}", lineno
            )
        if set(ins) - {"0", "1", "-"}:
            raise ParseError(f"bad input literal in {ins!r}", lineno)
        if set(outs) & {"-", "~", "2"}:
            raise UnsupportedFeature(f"output don't-care in {outs!r}", lineno)
        if set(outs) - {"0", "1"}:
            raise ParseError(f"bad output literal in {outs!r}", lineno)
        cubes.append(Cube.from_strings(ins, outs))
    if n is None or m is None:
        raise ParseError("missing .i or .o declaration")
    if not cubes:
        raise EmptyFunction("PLA has no cube rows")
    if terms is not None and terms != len(cubes):
        log.warning(".p declares %d terms but %d rows were read", terms, len(cubes))
    return BooleanFunction(n, m, tuple(cubes), name)


def parse_tt(text: str, name: str = "f") -> BooleanFunction:
    n = m = None
    rows: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            try:
                n, m = (int(t) for t in tokens)
            except ValueError:
                raise ParseError(f"expected header 'N M', got {line!r}", lineno) from None
            if not (1 <= n <= MAX_WIDTH and 1 <= m <= MAX_WIDTH):
                raise ParseError(f"header widths {n} {m} outside 1..{MAX_WIDTH}", lineno)
            if n > MAX_TT_INPUTS:
                raise TooLarge(f"truth table with {n} inputs exceeds {MAX_TT_INPUTS}")
            continue
        if len(tokens) != 2:
            raise ParseError(f"expected '<inputs> <outputs>', got {line!r}", lineno)
        ins, outs = tokens
        if len(ins) != n or len(outs) != m or set(ins + outs) - {"0", "1"}:
            raise ParseError(f"row {line!r} is not a {n}/{m} bit row", lineno)
        x = int(ins, 2)
        if x in rows:
            raise DuplicateRow(f"input {ins} listed twice", lineno)
        rows[x] = int(outs, 2)
    if n is None:
        raise EmptyFunction("truth table is empty")
    if len(rows) != 1 << n:
        missing = next(x for x in range(1 << n) if x not in rows)
        raise MissingRow(f"input {to_bits(missing, n)} has no row ({len(rows)}/{1 << n} given)")
    return BooleanFunction.from_table([rows[x] for x in range(1 << n)], n, m, name)


def serialize_tt(f: BooleanFunction, *, implicit_zero: bool = False) -> str:
    from .counting import tabulate

    if f.n > MAX_TT_INPUTS:
        raise TooLarge(f"n={f.n} exceeds {MAX_TT_INPUTS} for explicit truth tables")
    ys = tabulate(f, limit=MAX_TT_INPUTS, implicit_zero=implicit_zero)
    lines = [f"{f.n} {f.m}"]
    lines.extend(f"{to_bits(x, f.n)} {to_bits(int(y), f.m)}" for x, y in enumerate(ys))
    return "\n".join(lines) + "\n"


def serialize_pla(f: BooleanFunction) -> str:
    lines = [f".i {f.n}", f".o {f.m}", f".p {len(f.cubes)}"]
    lines.extend(str(c) for c in f.cubes)
    lines.append(".e")
    return "\n".join(lines) + "\n"


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".pla":
        return "pla"
    if suffix == ".tt":
        return "tt"
    raise ParseError(f"cannot infer format of {path} (expected .pla or .tt)")


def load_function(path: str | Path, fmt: str = "auto") -> BooleanFunction:
    path = Path(path)
    if fmt == "auto":
        fmt = detect_format(path)
    text = path.read_text()
    if fmt == "pla":
        return parse_pla(text, path.stem)
    if fmt == "tt":
        return parse_tt(text, path.stem)
    raise ValueError(f"unknown format {fmt!r}")
