"""Multi-output Boolean functions, bit patterns and output histograms.

Bit strings are written most-significant bit first: the leftmost character
of ``"101"`` is bit ``width - 1`` of the integer value.  Input cubes follow
the same convention, so the first column of a PLA row is the top bit of
the minterm index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

from .errors import EmptyHistogram, UncoveredMinterm, WidthOverflow

if TYPE_CHECKING:
    from .counting import CountBackend

MAX_WIDTH = 64


def ceil_log2(k: int) -> int:
    """Smallest ``w`` with ``2**w >= k``; ``ceil_log2(1) == 0``."""
    if k < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {k}")
    return (k - 1).bit_length()


def is_power_of_two(k: int) -> bool:
    return k > 0 and k & (k - 1) == 0


def to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


@dataclass(frozen=True, order=True)
class BitPattern:
    """A fixed-width bit vector (``width <= 64``)."""

    width: int
    value: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise WidthOverflow(f"bit width {self.width} outside 1..{MAX_WIDTH}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_str(cls, bits: str) -> BitPattern:
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(len(bits), int(bits, 2))

    def __str__(self) -> str:
        return to_bits(self.value, self.width)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True, slots=True)
class Cube:
    """One PLA row: an input cube over {0, 1, -} and its output pattern.

    ``care`` has a 1 for every bound input position, ``value`` holds the
    bound literal values (zero wherever ``care`` is zero).
    """

    n: int
    care: int
    value: int
    m: int
    output: int

    @classmethod
    def from_strings(cls, inputs: str, outputs: str) -> Cube:
        care = value = 0
        for ch in inputs:
            care <<= 1
            value <<= 1
            if ch == "1":
                care |= 1
                value |= 1
            elif ch == "0":
                care |= 1
            elif ch != "-":
                raise ValueError(f"bad input literal {ch!r} in {inputs!r}")
        return cls(len(inputs), care, value, len(outputs), int(outputs, 2))

    @classmethod
    def minterm(cls, n: int, x: int, m: int, output: int) -> Cube:
        return cls(n, (1 << n) - 1, x, m, output)

    @property
    def literals(self) -> str:
        out = []
        for i in range(self.n - 1, -1, -1):
            bit = 1 << i
            out.append("-" if not self.care & bit else "1" if self.value & bit else "0")
        return "".join(out)

    @property
    def output_pattern(self) -> BitPattern:
        return BitPattern(self.m, self.output)

    @property
    def free_count(self) -> int:
        return self.n - self.care.bit_count()

    def covers(self, x: int) -> bool:
        return x & self.care == self.value

    def __str__(self) -> str:
        return f"{self.literals} {to_bits(self.output, self.m)}"


@dataclass(frozen=True)
class BooleanFunction:
    """A fully specified function f: B^n -> B^m given as an ordered cube list.

    ``table`` optionally carries the explicit output column (index = input
    minterm); when present it must agree with ``cubes``.
    """

    n: int
    m: int
    cubes: tuple[Cube, ...]
    name: str = "f"
    table: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for side, width in (("input", self.n), ("output", self.m)):
            if not 1 <= width <= MAX_WIDTH:
                raise WidthOverflow(f"{side} count {width} outside 1..{MAX_WIDTH}")
        for c in self.cubes:
            if c.n != self.n or c.m != self.m:
                raise ValueError(
                    f"cube {c} has shape {c.n}x{c.m}, function is {self.n}x{self.m}"
                )
        if self.table is not None and len(self.table) != 1 << self.n:
            raise ValueError("explicit table must have 2**n entries")

    @classmethod
    def from_table(
        cls, outputs: Sequence[int], n: int, m: int, name: str = "f"
    ) -> BooleanFunction:
        """Build a function from its output column (``outputs[x] = f(x)``)."""
        table = tuple(int(v) for v in outputs)
        if len(table) != 1 << n:
            raise ValueError(f"expected {1 << n} outputs, got {len(table)}")
        if any(not 0 <= v < (1 << m) for v in table):
            raise ValueError(f"output value out of range for m={m}")
        full = (1 << n) - 1
        cubes = tuple(Cube(n, full, x, m, y) for x, y in enumerate(table))
        return cls(n, m, cubes, name, table)

    @classmethod
    def from_rows(
        cls, rows: Iterable[tuple[str, str]], name: str = "f"
    ) -> BooleanFunction:
        cubes = tuple(Cube.from_strings(i, o) for i, o in rows)
        if not cubes:
            raise ValueError("a function needs at least one cube")
        return cls(cubes[0].n, cubes[0].m, cubes, name)

    def evaluate(self, x: int | BitPattern) -> BitPattern:
        return evaluate(self, x)

    def __call__(self, x: int) -> int:
        return evaluate(self, x).value


def evaluate(f: BooleanFunction, x: int | BitPattern) -> BitPattern:
    """Return f(x), the output of the first cube covering ``x``."""
    if isinstance(x, BitPattern):
        if x.width != f.n:
            raise ValueError(f"input has width {x.width}, function expects {f.n}")
        x = x.value
    elif not 0 <= x < (1 << f.n):
        raise ValueError(f"input {x} out of range for n={f.n}")
    if f.table is not None:
        return BitPattern(f.m, f.table[x])
    for c in f.cubes:
        if x & c.care == c.value:
            return BitPattern(f.m, c.output)
    raise UncoveredMinterm(to_bits(x, f.n))


@dataclass(frozen=True)
class OutputHistogram:
    """Occurring output patterns and their multiplicities mu(p).

    Entries are kept sorted by pattern value; ``ranked()`` gives the
    most-frequent-first order used when listing p_1, p_2, ...
    """

    n: int
    m: int
    entries: tuple[tuple[BitPattern, int], ...]

    def __post_init__(self):
        seen = set()
        for p, mu in self.entries:
            if p.width != self.m:
                raise ValueError(f"pattern {p} does not have width m={self.m}")
            if mu <= 0:
                raise ValueError(f"multiplicity of {p} must be positive, got {mu}")
            if p in seen:
                raise ValueError(f"duplicate pattern {p}")
            seen.add(p)
        if len(self.entries) > min(1 << self.n, 1 << self.m):
            raise ValueError("more patterns than min(2^n, 2^m)")

    @classmethod
    def from_counts(
        cls, n: int, m: int, counts: Mapping[int, int] | Mapping[BitPattern, int]
    ) -> OutputHistogram:
        items = []
        for p, mu in counts.items():
            if not isinstance(p, BitPattern):
                p = BitPattern(m, int(p))
            items.append((p, int(mu)))
        items.sort()
        return cls(n, m, tuple(items))

    @classmethod
    def from_strings(cls, n: int, counts: Mapping[str, int]) -> OutputHistogram:
        pats = {BitPattern.from_str(k): v for k, v in counts.items()}
        widths = {p.width for p in pats}
        if len(widths) != 1:
            raise ValueError("patterns must share one width")
        return cls.from_counts(n, widths.pop(), pats)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[BitPattern]:
        return (p for p, _ in self.entries)

    def __getitem__(self, p: BitPattern | str) -> int:
        if isinstance(p, str):
            p = BitPattern.from_str(p)
        for q, mu in self.entries:
            if q == p:
                return mu
        raise KeyError(p)

    def items(self):
        return iter(self.entries)

    def as_dict(self) -> dict[str, int]:
        return {str(p): mu for p, mu in self.entries}

    @property
    def total(self) -> int:
        return sum(mu for _, mu in self.entries)

    @property
    def is_complete(self) -> bool:
        return self.total == 1 << self.n

    def ranked(self) -> list[tuple[BitPattern, int]]:
        return sorted(self.entries, key=lambda e: (-e[1], e[0]))

    def max_count(self) -> int:
        if not self.entries:
            raise EmptyHistogram("histogram has no entries")
        return max(mu for _, mu in self.entries)


def histogram(
    f: BooleanFunction,
    backend: CountBackend | str | None = None,
    *,
    implicit_zero: bool = False,
) -> OutputHistogram:
    """Exact output-pattern histogram of ``f`` using the chosen backend."""
    from .counting import count

    return count(f, backend, implicit_zero=implicit_zero)
