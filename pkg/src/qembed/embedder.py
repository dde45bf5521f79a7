"""Reversible embeddings of non-reversible functions and their qubit counts.

Word layout shared by all schemes: an input word of ``width`` bits is
``(ancilla << n) | x``, i.e. ancilla inputs occupy the top bits and the
intended behaviour is selected with all ancillae at 0.  Output layouts:

* Bennett:  ``(g ^ f(x)) << n | x`` with the m ancillae g on top.
* Minimal:  ``garbage << m | f(x)``.
* Coded:    ``code(f(x)) << budget | garbage``; the codeword is the prefix.

``primary_output_positions`` index bit-string positions (0 = leftmost).

Garbage completion is deterministic: the mu(p) preimages of p, in ascending
input order, get garbage values 0, 1, 2, ...; the unused output words are
then handed to the remaining input words (ancilla != 0) in ascending order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .counting import tabulate
from .errors import (
    EmptyHistogram,
    GarbageOverflow,
    ParseError,
    TooLarge,
    TooWideForCompletion,
)
from .function import BitPattern, BooleanFunction, OutputHistogram, ceil_log2, to_bits
from .phcoder import CodeBook, CodeEntry, RootBound, codebook_for, root_weight_bound

MAX_TABLE_WIDTH = 20


class Scheme(enum.Enum):
    BENNETT = "bennett"
    MINIMAL = "minimal"
    CODED = "coded"


@dataclass(frozen=True, eq=False)
class EmbeddingSpec:
    scheme: Scheme
    n: int
    m: int
    width: int
    ancilla_inputs: int
    primary_output_positions: tuple[int, ...]
    table: np.ndarray | None = field(default=None, repr=False)
    rule: Callable[[int], int] | None = field(default=None, repr=False)
    codebook: CodeBook | None = None

    def __call__(self, word: int) -> int:
        if self.table is not None:
            return int(self.table[word])
        return self.rule(word)

    def as_table(self) -> np.ndarray:
        if self.table is not None:
            return self.table
        if self.width > MAX_TABLE_WIDTH:
            raise TooWideForCompletion(
                f"width {self.width} exceeds the table limit {MAX_TABLE_WIDTH}"
            )
        return _frozen(np.array([self.rule(w) for w in range(1 << self.width)], dtype=np.uint64))

    def project(self, words):
        """Gather the primary output bits of each word (MSB-first order)."""
        words = np.asarray(words, dtype=np.uint64)
        acc = np.zeros_like(words)
        for pos in self.primary_output_positions:
            bit = (words >> np.uint64(self.width - 1 - pos)) & np.uint64(1)
            acc = (acc << np.uint64(1)) | bit
        return acc


@dataclass(frozen=True)
class WidthReport:
    name: str
    n: int
    m: int
    bennett: int
    minimal: int
    encoded: int

    def row(self) -> tuple:
        return (self.name, self.n, self.m, self.bennett, self.minimal, self.encoded)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# -- qubit counts ---------------------------------------------------------------


def width_bennett(f: BooleanFunction) -> int:
    return f.n + f.m


def width_minimal(f: BooleanFunction, h: OutputHistogram) -> int:
    """max(n, m + ceil(log2 mu(p1))) with p1 the most frequent pattern."""
    if not len(h):
        raise EmptyHistogram("no output patterns")
    return max(f.n, f.m + ceil_log2(h.max_count()))


def width_encoded(f: BooleanFunction, h: OutputHistogram) -> int:
    bound = root_weight_bound(h)
    return f.n if bound is RootBound.EXACTLY_N else f.n + 1


def width_report(f: BooleanFunction, h: OutputHistogram) -> WidthReport:
    return WidthReport(
        f.name, f.n, f.m, width_bennett(f), width_minimal(f, h), width_encoded(f, h)
    )


# -- construction ---------------------------------------------------------------------


def _ranks(values: np.ndarray) -> np.ndarray:
    """Position of each entry among equal values, in ascending index order."""
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    starts = np.flatnonzero(np.r_[True, sorted_vals[1:] != sorted_vals[:-1]])
    group = np.repeat(starts, np.diff(np.r_[starts, len(values)]))
    ranks = np.empty(len(values), dtype=np.uint64)
    ranks[order] = np.arange(len(values), dtype=np.uint64) - group.astype(np.uint64)
    return ranks


def _complete(head: np.ndarray, width: int) -> np.ndarray:
    """Extend an injective map on the first len(head) words to a permutation."""
    size = 1 << width
    used = np.zeros(size, dtype=bool)
    used[head.astype(np.int64)] = True
    assert used.sum() == len(head), "partial map is not injective"
    table = np.empty(size, dtype=np.uint64)
    table[: len(head)] = head
    table[len(head):] = np.flatnonzero(~used).astype(np.uint64)
    return _frozen(table)


def _outputs(f, implicit_zero):
    return tabulate(f, limit=MAX_TABLE_WIDTH, implicit_zero=implicit_zero)


def embed_bennett(f: BooleanFunction, *, implicit_zero: bool = False) -> EmbeddingSpec:
    """(g, x) -> (g ^ f(x), x); tabled when n + m <= 20, rule-based otherwise."""
    n, m = f.n, f.m
    width = n + m
    xmask = (1 << n) - 1

    if width <= MAX_TABLE_WIDTH:
        ys = _outputs(f, implicit_zero)
        words = np.arange(1 << width, dtype=np.uint64)
        xs = words & np.uint64(xmask)
        gs = words >> np.uint64(n)
        table = _frozen(((gs ^ ys[xs.astype(np.int64)]) << np.uint64(n)) | xs)
        rule = None
    else:
        table = None

        def rule(word: int) -> int:
            x, g = word & xmask, word >> n
            return ((g ^ f(x)) << n) | x

    return EmbeddingSpec(
        Scheme.BENNETT, n, m, width, m, tuple(range(m)), table=table, rule=rule
    )


def embed_minimal(
    f: BooleanFunction, h: OutputHistogram, *, implicit_zero: bool = False
) -> EmbeddingSpec:
    width = width_minimal(f, h)
    if width > MAX_TABLE_WIDTH:
        raise TooWideForCompletion(f"minimal width {width} exceeds {MAX_TABLE_WIDTH}")
    ys = _outputs(f, implicit_zero)
    garbage = _ranks(ys)
    if garbage.max(initial=0) >> np.uint64(width - f.m):
        raise GarbageOverflow("garbage field too narrow for the minimal embedding")
    head = (garbage << np.uint64(f.m)) | ys
    positions = tuple(range(width - f.m, width))
    return EmbeddingSpec(
        Scheme.MINIMAL, f.n, f.m, width, width - f.n, positions, table=_complete(head, width)
    )


def embed_coded(
    f: BooleanFunction,
    h: OutputHistogram,
    cb: CodeBook | None = None,
    *,
    implicit_zero: bool = False,
) -> EmbeddingSpec:
    cb = cb or codebook_for(h)
    width = max(f.n, cb.total_width)
    if width > MAX_TABLE_WIDTH:
        raise TooWideForCompletion(f"coded width {width} exceeds {MAX_TABLE_WIDTH}")
    ys = _outputs(f, implicit_zero)
    pats = sorted(cb.entries)
    values = np.array([p.value for p in pats], dtype=np.uint64)
    idx = np.searchsorted(values, ys)
    if (idx >= len(values)).any() or (values[np.minimum(idx, len(values) - 1)] != ys).any():
        raise GarbageOverflow("function produces a pattern missing from the codebook")
    budget = np.array([width - len(cb.entries[p].codeword) for p in pats], dtype=np.uint64)
    code = np.array([int(cb.entries[p].codeword or "0", 2) for p in pats], dtype=np.uint64)
    garbage = _ranks(ys)
    b = budget[idx]
    if (garbage >> b).any():
        raise GarbageOverflow("a pattern has more preimages than its garbage budget allows")
    head = (code[idx] << b) | garbage
    return EmbeddingSpec(
        Scheme.CODED,
        f.n,
        f.m,
        width,
        width - f.n,
        tuple(range(width)),
        table=_complete(head, width),
        codebook=cb,
    )


def embed(
    f: BooleanFunction,
    scheme: Scheme | str,
    h: OutputHistogram | None = None,
    *,
    implicit_zero: bool = False,
) -> EmbeddingSpec:
    scheme = Scheme(scheme)
    if scheme is Scheme.BENNETT:
        return embed_bennett(f, implicit_zero=implicit_zero)
    if h is None:
        from .counting import count

        h = count(f, implicit_zero=implicit_zero)
    if scheme is Scheme.MINIMAL:
        return embed_minimal(f, h, implicit_zero=implicit_zero)
    return embed_coded(f, h, implicit_zero=implicit_zero)


# -- verification ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    passed: bool
    check: str = ""
    witness: tuple = ()
    message: str = ""

    def __str__(self) -> str:
        if self.passed:
            return "verify: pass"
        return f"verify: FAIL [{self.check}] {self.message}"


def verify_embedding(
    spec: EmbeddingSpec, f: BooleanFunction, *, implicit_zero: bool = False
) -> VerificationReport:
    """Check bijectivity, the ancilla-0 restriction, and (coded) decoding."""
    if spec.width > MAX_TABLE_WIDTH:
        raise TooLarge(f"cannot verify width {spec.width} > {MAX_TABLE_WIDTH}")
    w = spec.width
    table = np.asarray(spec.as_table(), dtype=np.uint64)
    size = 1 << w
    if len(table) != size:
        return VerificationReport(False, "NotBijective", (), f"table has {len(table)} entries, need {size}")
    if (table >= np.uint64(size)).any():
        bad = int(np.flatnonzero(table >= np.uint64(size))[0])
        return VerificationReport(False, "OutOfRange", (bad,), f"{bad} maps outside B^{w}")
    seen = np.zeros(size, dtype=bool)
    seen[table.astype(np.int64)] = True
    first_seen = np.full(size, -1, dtype=np.int64)
    for word, image in enumerate(table.tolist() if not seen.all() else ()):
        if first_seen[image] >= 0:
            a = int(first_seen[image])
            return VerificationReport(
                False, "NotBijective", (a, word),
                f"{to_bits(a, w)} and {to_bits(word, w)} both map to {to_bits(image, w)}",
            )
        first_seen[image] = word

    ys = tabulate(f, limit=MAX_TABLE_WIDTH, implicit_zero=implicit_zero)
    images = table[: 1 << f.n]
    if spec.scheme is Scheme.CODED:
        cb = spec.codebook
        for x, (y, word) in enumerate(zip(ys.tolist(), images.tolist())):
            bits = to_bits(word, w)
            p = BitPattern(f.m, y)
            entry = cb.entries.get(p)
            if entry is None or not bits.startswith(entry.codeword):
                return VerificationReport(
                    False, "WrongCode", (x,),
                    f"input {to_bits(x, f.n)} gives {bits}, expected prefix "
                    f"{entry.codeword if entry else '?'} for {p}",
                )
            try:
                decoded = cb.decode(bits)
            except ValueError as exc:
                return VerificationReport(False, "DecodeFailed", (x,), str(exc))
            if decoded != p:
                return VerificationReport(
                    False, "DecodeMismatch", (x,),
                    f"input {to_bits(x, f.n)} decodes to {decoded}, f gives {p}",
                )
    else:
        projected = spec.project(images)
        wrong = np.flatnonzero(projected != ys)
        if len(wrong):
            x = int(wrong[0])
            return VerificationReport(
                False, "WrongOutput", (x,),
                f"input {to_bits(x, f.n)} projects to {to_bits(int(projected[x]), f.m)}, "
                f"f gives {to_bits(int(ys[x]), f.m)}",
            )
    return VerificationReport(True)


# -- serialization -------------------------------------------------------------------------


def dump_embedding(spec: EmbeddingSpec) -> str:
    """Truth-table text with ``.embedding`` / ``.code`` header lines."""
    table = spec.as_table()
    w = spec.width
    lines = [
        f".embedding scheme={spec.scheme.value} width={w} ancilla={spec.ancilla_inputs} "
        f"n={spec.n} m={spec.m} primary={','.join(map(str, spec.primary_output_positions))}"
    ]
    if spec.codebook is not None:
        pairs = " ".join(f"{p}={e.codeword}" for p, e in spec.codebook.entries.items())
        lines.append(f".code {pairs}")
    lines.append(f"{w} {w}")
    lines.extend(f"{to_bits(i, w)} {to_bits(int(o), w)}" for i, o in enumerate(table))
    return "\n".join(lines) + "\n"


def load_embedding(text: str) -> EmbeddingSpec:
    from .pla_io import parse_tt

    header: dict[str, str] = {}
    code_pairs: list[tuple[str, str]] = []
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith(".embedding"):
            for tok in line.split()[1:]:
                key, _, val = tok.partition("=")
                header[key] = val
        elif line.startswith(".code"):
            for tok in line.split()[1:]:
                pat, sep, word = tok.partition("=")
                if not sep:
                    raise ParseError(f"bad codebook pair {tok!r}", lineno)
                code_pairs.append((pat, word))
        else:
            body.append(raw)
    try:
        scheme = Scheme(header["scheme"])
        width, n, m = int(header["width"]), int(header["n"]), int(header["m"])
        ancilla = int(header["ancilla"])
        positions = tuple(int(p) for p in header["primary"].split(",") if p)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"incomplete .embedding header: {exc}") from None
    mapping = parse_tt("\n".join(body))
    if mapping.n != width or mapping.m != width:
        raise ParseError("table shape does not match the declared width")
    cb = None
    if code_pairs:
        entries = {}
        for pat, word in code_pairs:
            p = BitPattern.from_str(pat)
            entries[p] = CodeEntry(word, width - len(word), 0)
        cb = CodeBook(dict(sorted(entries.items())), width)
    table = _frozen(np.asarray(mapping.table, dtype=np.uint64))
    return EmbeddingSpec(scheme, n, m, width, ancilla, positions, table=table, codebook=cb)
