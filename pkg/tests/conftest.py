import random
from pathlib import Path

import pytest

from qembed import BooleanFunction, Cube, parse_tt

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def table2() -> BooleanFunction:
    return parse_tt((DATA / "table2.tt").read_text(), "table2")


@pytest.fixture
def half_adder() -> BooleanFunction:
    return parse_tt((DATA / "ha.tt").read_text(), "ha")


def brute_histogram(f: BooleanFunction, implicit_zero: bool = False) -> dict[int, int]:
    """Pure-Python oracle: evaluate every cube on every minterm."""
    counts: dict[int, int] = {}
    for x in range(1 << f.n):
        outs = {c.output for c in f.cubes if c.covers(x)}
        if len(outs) > 1:
            raise AssertionError(f"inconsistent at {x}")
        if not outs:
            if not implicit_zero:
                raise AssertionError(f"uncovered {x}")
            outs = {0}
        (y,) = outs
        counts[y] = counts.get(y, 0) + 1
    return counts


def random_table_function(rng: random.Random, n: int, m: int, name="rnd") -> BooleanFunction:
    ys = [rng.randrange(1 << m) for _ in range(1 << n)]
    return BooleanFunction.from_table(ys, n, m, name)


def random_cube_function(rng: random.Random, n: int, m: int, ncubes: int) -> BooleanFunction:
    """Random overlapping don't-care cubes, made consistent and complete.

    Each new cube takes the output of an already-covered minterm it hits
    (so overlaps agree); uncovered minterms are then patched with
    full-care cubes.  Tracks coverage explicitly, so keep n <= 10.
    """
    out_of: dict[int, int] = {}
    cubes = []
    for _ in range(ncubes):
        care = rng.getrandbits(n) if n else 0
        # keep at least a few don't-cares so cubes overlap
        if rng.random() < 0.5:
            care &= rng.getrandbits(n)
        value = rng.getrandbits(n) & care
        free = [b for b in range(n) if not care >> b & 1]
        members = []
        for k in range(1 << len(free)):
            x = value
            for i, b in enumerate(free):
                if k >> i & 1:
                    x |= 1 << b
            members.append(x)
        taken = {out_of[x] for x in members if x in out_of}
        if len(taken) > 1:
            continue
        y = taken.pop() if taken else rng.randrange(1 << m)
        for x in members:
            out_of[x] = y
        cubes.append(Cube(n, care, value, m, y))
    for x in range(1 << n):
        if x not in out_of:
            cubes.append(Cube.minterm(n, x, m, rng.randrange(1 << m)))
    rng.shuffle(cubes)
    return BooleanFunction(n, m, tuple(cubes), "cubes")


def random_tree_function(rng: random.Random, n: int, m: int, max_leaves: int = 24) -> BooleanFunction:
    """Random Shannon decision tree turned into an overlapping cube cover.

    Leaves of the tree are disjoint cubes covering B^n.  Redundant cubes are
    added on top: the cube of any subtree whose leaves share one output, and
    random sub-cubes of leaves.  Outputs come from a small pool so that such
    merges actually occur.  Suitable for any n.
    """
    pool = [rng.randrange(1 << m) for _ in range(rng.randint(1, 4))]
    cubes = []

    def grow(care, value, free, budget):
        # returns the single output of the subtree, or None if mixed
        if budget <= 1 or not free or rng.random() < 0.2:
            y = rng.choice(pool)
            cubes.append(Cube(n, care, value, m, y))
            for _ in range(rng.randint(0, 2)):
                sub_care, sub_value = care, value
                for b in rng.sample(free, rng.randint(0, len(free))):
                    sub_care |= 1 << b
                    sub_value |= rng.getrandbits(1) << b
                cubes.append(Cube(n, sub_care, sub_value, m, y))
            return y
        b = rng.choice(free)
        rest = [v for v in free if v != b]
        half = budget // 2
        lo = grow(care | 1 << b, value, rest, half)
        hi = grow(care | 1 << b, value | 1 << b, rest, budget - half)
        if lo is not None and lo == hi:
            if rng.random() < 0.5:
                cubes.append(Cube(n, care, value, m, lo))
            return lo
        return None

    grow(0, 0, list(range(n)), rng.randint(1, max_leaves))
    rng.shuffle(cubes)
    return BooleanFunction(n, m, tuple(cubes), "tree")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test's outcome decides PASS/FAIL."""
    state = {"detail": ""}

    def note(detail: str) -> None:
        state["detail"] = detail

    yield note
    rep = getattr(request.node, "rep_call", None)
    if rep is None:
        return
    status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    line = f"{request.node.name}: {status} {state['detail']}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
