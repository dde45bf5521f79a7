"""Exact minterm counting per output pattern.

Two backends:

* ``count_enumerate`` evaluates every input (numpy, n <= ``enumerate_limit``)
  and is the reference oracle.
* ``count_cofactor`` performs Shannon cofactoring directly on the cube list
  and never materialises the 2^n rows, so it handles n up to 64 as long as
  the cube structure stays manageable.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentFunction, TooLarge, UncoveredMinterm, WidthOverflow
from .function import MAX_WIDTH, BooleanFunction, OutputHistogram, to_bits

DEFAULT_ENUMERATE_LIMIT = 20


class Backend(enum.Enum):
    ENUMERATE = "enumerate"
    COFACTOR = "cofactor"


@dataclass(frozen=True)
class CountBackend:
    variant: Backend = Backend.COFACTOR
    enumerate_limit: int = DEFAULT_ENUMERATE_LIMIT
    memoize: bool = True

    @classmethod
    def parse(cls, spec: CountBackend | Backend | str | None) -> CountBackend:
        if spec is None:
            return cls()
        if isinstance(spec, CountBackend):
            return spec
        return cls(Backend(spec))


def count(
    f: BooleanFunction,
    backend: CountBackend | Backend | str | None = None,
    *,
    implicit_zero: bool = False,
) -> OutputHistogram:
    backend = CountBackend.parse(backend)
    if f.n > MAX_WIDTH:
        raise WidthOverflow(f"n={f.n} exceeds {MAX_WIDTH}")
    if backend.variant is Backend.ENUMERATE:
        h = count_enumerate(
            f, limit=backend.enumerate_limit, implicit_zero=implicit_zero
        )
    else:
        h = count_cofactor(f, implicit_zero=implicit_zero, memoize=backend.memoize)
    assert h.total == 1 << f.n, "histogram does not sum to 2^n"
    return h


# -- enumeration -------------------------------------------------------------


def tabulate(
    f: BooleanFunction,
    *,
    limit: int = DEFAULT_ENUMERATE_LIMIT,
    implicit_zero: bool = False,
) -> np.ndarray:
    """Output column of ``f`` as a uint64 array indexed by input minterm.

    Every cube is checked against every minterm it covers, so conflicting
    overlaps raise ``InconsistentFunction`` rather than being resolved by
    cube order.
    """
    if f.n > limit:
        raise TooLarge(f"n={f.n} exceeds the enumeration limit {limit}")
    size = 1 << f.n
    if f.table is not None:
        return np.asarray(f.table, dtype=np.uint64)
    xs = np.arange(size, dtype=np.uint64)
    out = np.zeros(size, dtype=np.uint64)
    assigned = np.zeros(size, dtype=bool)
    for c in f.cubes:
        if c.care == (1 << f.n) - 1:
            hit = np.zeros(size, dtype=bool)
            hit[c.value] = True
        else:
            hit = (xs & np.uint64(c.care)) == np.uint64(c.value)
        pattern = np.uint64(c.output)
        clash = hit & assigned & (out != pattern)
        if clash.any():
            x = int(np.flatnonzero(clash)[0])
            raise InconsistentFunction(
                to_bits(x, f.n), to_bits(int(out[x]), f.m), to_bits(c.output, f.m)
            )
        fresh = hit & ~assigned
        out[fresh] = pattern
        assigned |= fresh
    if not assigned.all():
        if not implicit_zero:
            x = int(np.flatnonzero(~assigned)[0])
            raise UncoveredMinterm(to_bits(x, f.n))
    return out


def count_enumerate(
    f: BooleanFunction,
    *,
    limit: int = DEFAULT_ENUMERATE_LIMIT,
    implicit_zero: bool = False,
) -> OutputHistogram:
    out = tabulate(f, limit=limit, implicit_zero=implicit_zero)
    patterns, counts = np.unique(out, return_counts=True)
    return OutputHistogram.from_counts(
        f.n, f.m, {int(p): int(k) for p, k in zip(patterns, counts)}
    )


# -- Shannon cofactoring -----------------------------------------------------

# A node is (free variable count, canonical cube tuple); cubes are
# (care, value, output) triples restricted to the still-free variables.
_Key = tuple[int, tuple[tuple[int, int, int], ...]]


def _canonical(cubes) -> tuple[tuple[int, int, int], ...]:
    return tuple(sorted(set(cubes)))


def _cofactor(cubes, bit: int, positive: bool):
    want = bit if positive else 0
    res = []
    for care, value, out in cubes:
        if not care & bit:
            res.append((care, value, out))
        elif value & bit == want:
            res.append((care & ~bit, value & ~bit, out))
    return _canonical(res)


def _pick_variable(cubes) -> int:
    """Bit of the input bound by the most cubes; ties go to the higher bit."""
    tally: dict[int, int] = {}
    for care, _, _ in cubes:
        while care:
            low = care & -care
            tally[low] = tally.get(low, 0) + 1
            care ^= low
    return max(tally, key=lambda b: (tally[b], b))


class _Counter:
    def __init__(self, n: int, m: int, implicit_zero: bool):
        self.n = n
        self.m = m
        self.implicit_zero = implicit_zero

    def witness(self, path_care: int, path_value: int, extra: int = 0) -> str:
        return to_bits(path_value | extra, self.n)

    def leaf(self, key: _Key, path_care: int, path_value: int):
        """Histogram for a terminal node, or None if it must be split."""
        free, cubes = key
        space = 1 << free
        if not cubes:
            if self.implicit_zero:
                return {0: space}
            raise UncoveredMinterm(self.witness(path_care, path_value))
        full = [c for c in cubes if c[0] == 0]
        if full:
            out = full[0][2]
            for care, value, other in cubes:
                if other != out:
                    raise InconsistentFunction(
                        self.witness(path_care, path_value, value),
                        to_bits(out, self.m),
                        to_bits(other, self.m),
                    )
            return {out: space}
        if len(cubes) == 1:
            care, value, out = cubes[0]
            covered = 1 << (free - care.bit_count())
            if not self.implicit_zero:
                low = care & -care
                raise UncoveredMinterm(
                    self.witness(path_care, path_value, value ^ low)
                )
            res = {out: covered}
            res[0] = res.get(0, 0) + space - covered
            return res
        return None


def count_cofactor(
    f: BooleanFunction, *, implicit_zero: bool = False, memoize: bool = True
) -> OutputHistogram:
    """Per-pattern minterm counts by recursive cofactoring of the cube list.

    Uses an explicit work stack; the memo table maps canonical sub-problems
    to their histograms and can be switched off without changing results.
    """
    if f.n > MAX_WIDTH:
        raise WidthOverflow(f"n={f.n} exceeds {MAX_WIDTH}")
    ctx = _Counter(f.n, f.m, implicit_zero)
    root: _Key = (f.n, _canonical((c.care, c.value, c.output) for c in f.cubes))
    memo: dict[_Key, dict[int, int]] = {}
    results: dict[int, dict[int, int]] = {}
    # ("visit", node id, key, path care, path value) or ("join", id, key, lo, hi)
    stack: list[tuple] = [("visit", 0, root, 0, 0)]
    next_id = 1
    while stack:
        op, nid, key, a, b = stack.pop()
        if op == "join":
            lo, hi = results.pop(a), results.pop(b)
            merged = dict(lo)
            for p, k in hi.items():
                merged[p] = merged.get(p, 0) + k
            results[nid] = merged
            if memoize:
                memo[key] = merged
            continue
        if memoize and key in memo:
            results[nid] = memo[key]
            continue
        leaf = ctx.leaf(key, a, b)
        if leaf is not None:
            results[nid] = leaf
            if memoize:
                memo[key] = leaf
            continue
        free, cubes = key
        bit = _pick_variable(cubes)
        lo_id, hi_id = next_id, next_id + 1
        next_id += 2
        stack.append(("join", nid, key, lo_id, hi_id))
        stack.append(("visit", hi_id, (free - 1, _cofactor(cubes, bit, True)), a | bit, b | bit))
        stack.append(("visit", lo_id, (free - 1, _cofactor(cubes, bit, False)), a | bit, b))
    counts = {p: k for p, k in results[0].items() if k}
    return OutputHistogram.from_counts(f.n, f.m, counts)
