"""Pseudo-Huffman trees and the variable-length output codes derived from them.

Terminal weights are ``ceil(log2 mu)`` (the garbage bits a pattern needs);
an internal node weighs ``max(children) + 1``.  This is deliberately *not*
the sum rule of ordinary Huffman coding.

Ties are broken by creation order: terminals are created first, in
ascending pattern value, followed by internal nodes in merge order.  Of
the two nodes merged, the one popped first becomes the left (``0``) child.
"""
from __future__ import annotations

import enum
import heapq
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EmptyHistogram, HistogramNotComplete, HypothesisViolated
from .function import BitPattern, OutputHistogram, ceil_log2, is_power_of_two


@dataclass(frozen=True)
class PhNode:
    id: int
    weight: int
    pattern: BitPattern | None = None
    mu: int | None = None
    left: int | None = None
    right: int | None = None

    @property
    def is_terminal(self) -> bool:
        return self.pattern is not None


@dataclass(frozen=True)
class PhTree:
    nodes: tuple[PhNode, ...]
    root: int
    terminal_of: dict[BitPattern, int] = field(compare=False)

    @property
    def root_weight(self) -> int:
        return self.nodes[self.root].weight

    def terminals(self) -> list[PhNode]:
        return [v for v in self.nodes if v.is_terminal]

    def internal(self) -> list[PhNode]:
        return [v for v in self.nodes if not v.is_terminal]


def build_ph_tree(h: OutputHistogram) -> PhTree:
    """Greedily merge the two lightest roots until one remains."""
    if not len(h):
        raise EmptyHistogram("cannot build a tree from an empty histogram")
    nodes: list[PhNode] = []
    heap: list[tuple[int, int]] = []
    for p, mu in h.items():
        v = PhNode(len(nodes), ceil_log2(mu), pattern=p, mu=mu)
        nodes.append(v)
        heap.append((v.weight, v.id))
    heapq.heapify(heap)
    while len(heap) > 1:
        wa, a = heapq.heappop(heap)
        wb, b = heapq.heappop(heap)
        c = PhNode(len(nodes), max(wa, wb) + 1, left=a, right=b)
        nodes.append(c)
        heapq.heappush(heap, (c.weight, c.id))
    tree = PhTree(
        tuple(nodes),
        heap[0][1],
        {v.pattern: v.id for v in nodes if v.pattern is not None},
    )
    assert satisfies_merge_order(tree), "greedy tree violates the merge-order condition"
    return tree


def satisfies_merge_order(tree: PhTree) -> bool:
    """Check the child-weight ordering condition between every pair of internal nodes.

    For internal nodes with sorted child weights (a1, b1) and (a2, b2) it
    must hold that both of a2, b2 are <= a1 or both are >= b1.  With pairs
    sorted this reduces to: every pair starts at or above all earlier ends.
    """
    pairs = []
    for v in tree.internal():
        wl, wr = tree.nodes[v.left].weight, tree.nodes[v.right].weight
        pairs.append((min(wl, wr), max(wl, wr)))
    pairs.sort()
    reach = -1
    for a, b in pairs:
        if a < reach:
            return False
        reach = max(reach, b)
    return True


def check_tree(tree: PhTree) -> None:
    """Raise AssertionError if structural tree invariants do not hold."""
    parents = [0] * len(tree.nodes)
    for v in tree.nodes:
        if v.is_terminal:
            assert v.left is None and v.right is None
            assert v.weight == ceil_log2(v.mu)
        else:
            a, b = tree.nodes[v.left], tree.nodes[v.right]
            assert v.weight == max(a.weight, b.weight) + 1
            parents[a.id] += 1
            parents[b.id] += 1
    for v in tree.nodes:
        assert parents[v.id] == (0 if v.id == tree.root else 1), f"node {v.id}"
    assert satisfies_merge_order(tree)


# -- codes --------------------------------------------------------------------


@dataclass(frozen=True)
class CodeEntry:
    codeword: str
    garbage_budget: int
    mu: int


@dataclass(frozen=True)
class CodeBook:
    entries: dict[BitPattern, CodeEntry] = field(compare=True)
    total_width: int

    def code(self, p: BitPattern | str) -> str:
        if isinstance(p, str):
            p = BitPattern.from_str(p)
        return self.entries[p].codeword

    def lengths(self) -> list[int]:
        return sorted(len(e.codeword) for e in self.entries.values())

    def is_prefix_free(self) -> bool:
        words = [e.codeword for e in self.entries.values()]
        for i, u in enumerate(words):
            for j, v in enumerate(words):
                if i != j and v.startswith(u):
                    return False
        return True

    def budgets_fit(self) -> bool:
        return all(
            len(e.codeword) + ceil_log2(e.mu) <= self.total_width
            and e.garbage_budget == self.total_width - len(e.codeword)
            for e in self.entries.values()
        )

    def decode(self, word: str) -> BitPattern:
        """Pattern whose codeword is a prefix of ``word``."""
        hits = [p for p, e in self.entries.items() if word.startswith(e.codeword)]
        if len(hits) != 1:
            raise ValueError(f"{word!r} matches {len(hits)} codewords")
        return hits[0]

    def rows(self) -> list[tuple[BitPattern, int, str]]:
        """(pattern, mu, codeword) ordered most frequent first."""
        ordered = sorted(self.entries.items(), key=lambda kv: (-kv[1].mu, kv[0]))
        return [(p, e.mu, e.codeword) for p, e in ordered]


def assign_codes(tree: PhTree) -> CodeBook:
    """Label left edges 0 and right edges 1; a codeword is the root-to-leaf path."""
    width = tree.root_weight
    entries: dict[BitPattern, CodeEntry] = {}
    stack = [(tree.root, "")]
    while stack:
        nid, prefix = stack.pop()
        v = tree.nodes[nid]
        if v.is_terminal:
            entries[v.pattern] = CodeEntry(prefix, width - len(prefix), v.mu)
        else:
            stack.append((v.right, prefix + "1"))
            stack.append((v.left, prefix + "0"))
    ordered = dict(sorted(entries.items()))
    return CodeBook(ordered, width)


def codebook_for(h: OutputHistogram) -> CodeBook:
    return assign_codes(build_ph_tree(h))


# -- root weight --------------------------------------------------------------


class RootBound(enum.Enum):
    EXACTLY_N = "n"
    N_PLUS_ONE = "n+1"


def root_weight_bound(h: OutputHistogram) -> RootBound:
    """Decide whether the coded width is n or n+1 without building the tree."""
    if not h.is_complete:
        raise HistogramNotComplete(
            f"multiplicities sum to {h.total}, expected 2^{h.n} = {1 << h.n}"
        )
    if sum(1 << ceil_log2(mu) for _, mu in h.items()) == 1 << h.n:
        return RootBound.EXACTLY_N
    return RootBound.N_PLUS_ONE


def all_powers_of_two(h: OutputHistogram) -> bool:
    return all(is_power_of_two(mu) for _, mu in h.items())


# -- replay of the counting argument -------------------------------------------


@dataclass
class MergeStep:
    left: int
    right: int
    merged: int
    total: int


@dataclass
class TheoremTrace:
    """Replay of the greedy construction with weights mapped ``w -> 2**w``."""

    n: int
    initial_total: int
    steps: list[MergeStep]
    root_weight: int
    violations: list[str]

    @property
    def holds(self) -> bool:
        return not self.violations


def _exponent_for(weights: Sequence[int]) -> int:
    """The n for which some s_v with 2^(w-1) < s_v <= 2^w sums to 2^n."""
    lo = sum((1 << (w - 1)) + 1 if w > 0 else 1 for w in weights)
    hi = sum(1 << w for w in weights)
    n = ceil_log2(lo)
    if (1 << n) > hi:
        raise HypothesisViolated(
            f"no assignment for weights {sorted(weights)}: 2^n must lie in [{lo}, {hi}]"
        )
    return n


def verify_theorem_instance(
    counts: Iterable[int] | None = None, *, weights: Iterable[int] | None = None
) -> TheoremTrace:
    """Replay tree construction on ``2**w`` weights and check the n / n+1 bound.

    Pass the terminal assignments ``counts`` (s_v, e.g. mu values summing to
    a power of two) or just terminal ``weights``, in which case an
    admissible assignment is derived if one exists.
    """
    if counts is not None:
        counts = list(counts)
        if not counts or any(s <= 0 for s in counts):
            raise HypothesisViolated("assignments must be positive and non-empty")
        total = sum(counts)
        if not is_power_of_two(total):
            raise HypothesisViolated(f"assignments sum to {total}, not a power of two")
        n = total.bit_length() - 1
        ws = [ceil_log2(s) for s in counts]
        if weights is not None and sorted(weights) != sorted(ws):
            raise HypothesisViolated("weights do not match the given assignments")
    elif weights is not None:
        ws = list(weights)
        if not ws or any(w < 0 for w in ws):
            raise HypothesisViolated("weights must be non-negative and non-empty")
        n = _exponent_for(ws)
    else:
        raise TypeError("give counts or weights")

    roots = [1 << w for w in ws]
    heapq.heapify(roots)
    total = sum(roots)
    trace = TheoremTrace(n, total, [], 0, [])
    if not (1 << n) <= total < (1 << (n + 1)):
        trace.violations.append(f"initial total {total} outside [2^n, 2^(n+1))")
    bumped: set[int] = set()
    while len(roots) > 1:
        a = heapq.heappop(roots)
        b = heapq.heappop(roots)
        c = 2 * max(a, b)
        if a != b:
            k = max(a, b).bit_length() - 1
            if k in bumped:
                trace.violations.append(f"unequal merge repeated at level 2^{k}")
            bumped.add(k)
        total += c - a - b
        heapq.heappush(roots, c)
        trace.steps.append(MergeStep(a, b, c, total))
        if total > 1 << (n + 1):
            trace.violations.append(f"running total {total} exceeds 2^(n+1)")
    trace.root_weight = roots[0].bit_length() - 1
    if trace.root_weight not in (n, n + 1):
        trace.violations.append(f"root weight {trace.root_weight} not in {{n, n+1}}")
    return trace


def random_partition(rng: random.Random, n: int) -> list[int]:
    """Random composition of 2^n into positive parts (random part count)."""
    size = 1 << n
    parts = rng.randint(1, size)
    cuts = sorted(rng.sample(range(1, size), parts - 1))
    bounds = [0, *cuts, size]
    return [hi - lo for lo, hi in zip(bounds, bounds[1:])]


@dataclass
class SelftestResult:
    iterations: int
    passed: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.passed == self.iterations


def theorem_selftest(iterations: int = 10_000, max_n: int = 10, seed: int = 0) -> SelftestResult:
    """Randomised check of the n / n+1 bound on partitions of 2^n.

    Each instance is checked three ways: the replay on 2**w weights, the
    constructed tree's root weight, and the closed-form bound.
    """
    rng = random.Random(seed)
    failures = []
    for i in range(iterations):
        n = rng.randint(1, max_n)
        counts = random_partition(rng, n)
        trace = verify_theorem_instance(counts)
        m = max(1, (len(counts) - 1).bit_length())
        h = OutputHistogram.from_counts(n, m, dict(enumerate(counts)))
        tree = build_ph_tree(h)
        expect_n = root_weight_bound(h) is RootBound.EXACTLY_N
        problems = list(trace.violations)
        if tree.root_weight != trace.root_weight:
            problems.append(f"tree root {tree.root_weight} != replay {trace.root_weight}")
        if (tree.root_weight == n) != expect_n or expect_n != all_powers_of_two(h):
            problems.append("root bound disagrees with the constructed tree")
        if problems:
            failures.append(f"#{i} n={n} counts={counts}: {'; '.join(problems)}")
    return SelftestResult(iterations, iterations - len(failures), failures)


# -- renderings -------------------------------------------------------------------


def render_text(tree: PhTree) -> str:
    lines = []
    stack = [(tree.root, 0, "")]
    while stack:
        nid, depth, edge = stack.pop()
        v = tree.nodes[nid]
        label = f"[{v.weight}] {v.pattern} (mu={v.mu})" if v.is_terminal else f"({v.weight})"
        lines.append("  " * depth + (f"{edge}: " if edge else "") + label)
        if not v.is_terminal:
            stack.append((v.right, depth + 1, "1"))
            stack.append((v.left, depth + 1, "0"))
    return "\n".join(lines) + "\n"


def render_dot(tree: PhTree, name: str = "ph") -> str:
    out = [f'digraph "{name}" {{']
    for v in tree.nodes:
        if v.is_terminal:
            out.append(f'  v{v.id} [shape=box, label="{v.weight}\\n{v.pattern}/{v.mu}"];')
        else:
            out.append(f'  v{v.id} [shape=circle, label="{v.weight}"];')
    for v in tree.nodes:
        if not v.is_terminal:
            out.append(f'  v{v.id} -> v{v.left} [label="0"];')
            out.append(f'  v{v.id} -> v{v.right} [label="1"];')
    out.append("}")
    return "\n".join(out) + "\n"
