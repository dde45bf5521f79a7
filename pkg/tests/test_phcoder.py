import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qembed import (
    OutputHistogram,
    RootBound,
    assign_codes,
    build_ph_tree,
    render_dot,
    render_text,
    root_weight_bound,
    verify_theorem_instance,
)
from qembed.errors import EmptyHistogram, HistogramNotComplete, HypothesisViolated
from qembed.function import ceil_log2, is_power_of_two
from qembed.phcoder import check_tree, random_partition, satisfies_merge_order, theorem_selftest

TABLE2 = {"110": 4, "000": 2, "100": 1, "111": 1}
HALF_ADDER = {"00": 1, "01": 2, "10": 1}


def hist(n, counts):
    return OutputHistogram.from_strings(n, counts)


def merge_order_bruteforce(tree):
    pairs = []
    for v in tree.internal():
        a, b = tree.nodes[v.left].weight, tree.nodes[v.right].weight
        pairs.append((min(a, b), max(a, b)))
    return all(
        b2 <= a1 or a2 >= b1
        for i, (a1, b1) in enumerate(pairs)
        for j, (a2, b2) in enumerate(pairs)
        if i != j
    )


def test_table2_tree():
    tree = build_ph_tree(hist(3, TABLE2))
    terminal_weights = {str(v.pattern): v.weight for v in tree.terminals()}
    assert terminal_weights == {"110": 2, "000": 1, "100": 0, "111": 0}
    assert [v.weight for v in tree.internal()] == [1, 2, 3]
    assert tree.root_weight == 3
    check_tree(tree)


def test_table2_codes():
    cb = assign_codes(build_ph_tree(hist(3, TABLE2)))
    assert cb.lengths() == [1, 2, 3, 3]
    assert {str(p): e.codeword for p, e in cb.entries.items()} == {
        "110": "0", "000": "10", "100": "110", "111": "111",
    }
    assert cb.total_width == 3
    assert cb.entries[next(iter(p for p in cb.entries if str(p) == "110"))].garbage_budget == 2


def test_single_pattern_tree():
    h = hist(4, {"01": 16})
    tree = build_ph_tree(h)
    assert tree.root_weight == 4 and tree.nodes[tree.root].is_terminal
    cb = assign_codes(tree)
    (entry,) = cb.entries.values()
    assert entry.codeword == "" and entry.garbage_budget == 4


def test_half_adder_tree_and_codes():
    tree = build_ph_tree(hist(2, HALF_ADDER))
    assert tree.root_weight == 2
    cb = assign_codes(tree)
    assert cb.lengths() == [1, 2, 2]
    assert {str(p): e.codeword for p, e in cb.entries.items()} == {"01": "0", "00": "10", "10": "11"}


def test_empty_histogram():
    with pytest.raises(EmptyHistogram):
        build_ph_tree(OutputHistogram(1, 1, ()))


def test_root_weight_bound_examples():
    assert root_weight_bound(hist(3, TABLE2)) is RootBound.EXACTLY_N
    assert root_weight_bound(hist(2, {"0": 3, "1": 1})) is RootBound.N_PLUS_ONE
    assert build_ph_tree(hist(2, {"0": 3, "1": 1})).root_weight == 3
    assert root_weight_bound(hist(2, {"00": 2, "01": 1, "11": 1})) is RootBound.EXACTLY_N
    with pytest.raises(HistogramNotComplete):
        root_weight_bound(hist(3, {"0": 3, "1": 1}))


def test_merge_order_condition_rejects_non_greedy_shape():
    # a hand-built chain whose child weights interleave: (0,2) and (1,1)
    from qembed.phcoder import PhNode, PhTree
    from qembed import BitPattern

    t = [PhNode(i, w, pattern=BitPattern(2, i), mu=1 << w) for i, w in enumerate([0, 1, 1])]
    a = PhNode(3, 2, left=1, right=2)
    root = PhNode(4, 3, left=0, right=3)
    tree = PhTree(tuple(t + [a, root]), 4, {})
    assert not satisfies_merge_order(tree)
    assert not merge_order_bruteforce(tree)


def test_verify_theorem_instance_table2():
    trace = verify_theorem_instance([4, 2, 1, 1])
    assert trace.holds and trace.root_weight == 3 and trace.n == 3
    assert trace.steps[-1].merged == 8
    assert trace.initial_total == 8


def test_verify_theorem_from_weights():
    assert verify_theorem_instance(weights=[3, 3, 3]).n == 4  # 16 in [15, 24]
    trace = verify_theorem_instance(weights=[2, 0])
    assert trace.n == 2 and trace.root_weight == 3 and trace.holds
    with pytest.raises(HypothesisViolated):
        verify_theorem_instance(weights=[1, 1, 1])  # every s_v is 2, sum 6
    with pytest.raises(HypothesisViolated):
        verify_theorem_instance([3, 2])
    with pytest.raises(HypothesisViolated):
        verify_theorem_instance([4, 0])


def test_random_partitions_pass():
    res = theorem_selftest(iterations=10_000, max_n=10, seed=3)
    assert res.ok, res.failures[:3]


def test_random_partition_sums():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 10)
        parts = random_partition(rng, n)
        assert sum(parts) == 1 << n and min(parts) >= 1


def compositions(total):
    """All multisets of positive integers summing to ``total``."""
    def rec(remaining, largest):
        if remaining == 0:
            yield []
            return
        for k in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - k, k):
                yield [k, *rest]
    return rec(total, total)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_corollary_exhaustive_small(n):
    """Every multiset of multiplicities summing to 2^n (n <= 4)."""
    for counts in compositions(1 << n):
        h = OutputHistogram.from_counts(n, max(1, (len(counts) - 1).bit_length()), dict(enumerate(counts)))
        tree = build_ph_tree(h)
        assert tree.root_weight in (n, n + 1)
        exact = tree.root_weight == n
        assert exact == (root_weight_bound(h) is RootBound.EXACTLY_N)
        assert exact == all(is_power_of_two(c) for c in counts)


def check_codebook(cb, h):
    words = [e.codeword for e in cb.entries.values()]
    for u, v in itertools.permutations(words, 2):
        assert not v.startswith(u)
    for p, mu in h.items():
        assert len(cb.code(p)) + ceil_log2(mu) <= cb.total_width
    w = cb.total_width
    for x in range(1 << w):
        bits = format(x, f"0{w}b") if w else ""
        assert sum(bits.startswith(c) for c in words) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.randoms(use_true_random=False))
def test_tree_and_code_properties(n, rng):
    counts = random_partition(rng, n)
    m = max(1, (len(counts) - 1).bit_length())
    h = OutputHistogram.from_counts(n, m, dict(enumerate(counts)))
    tree = build_ph_tree(h)
    check_tree(tree)
    assert merge_order_bruteforce(tree)
    assert tree.root_weight in (n, n + 1)
    assert (tree.root_weight == n) == (root_weight_bound(h) is RootBound.EXACTLY_N)
    cb = assign_codes(tree)
    assert cb.is_prefix_free() and cb.budgets_fit()
    check_codebook(cb, h)
    assert assign_codes(build_ph_tree(h)) == cb


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=12), st.randoms(use_true_random=False))
def test_code_lengths_independent_of_pattern_labels(weights, rng):
    counts = [1 << w for w in weights]
    m = max(1, (len(counts) - 1).bit_length() + 1)
    labels = rng.sample(range(1 << m), len(counts))
    h1 = OutputHistogram.from_counts(20, m, dict(enumerate(counts)))
    h2 = OutputHistogram.from_counts(20, m, dict(zip(labels, counts)))
    c1, c2 = assign_codes(build_ph_tree(h1)), assign_codes(build_ph_tree(h2))
    assert c1.total_width == c2.total_width
    assert c1.lengths() == c2.lengths()


def test_renderings():
    tree = build_ph_tree(hist(3, TABLE2))
    dot = render_dot(tree, "t2")
    assert dot.startswith('digraph "t2"') and dot.count("->") == 6
    assert 'label="2\\n110/4"' in dot
    text = render_text(tree)
    assert text.splitlines()[0] == "(3)"
    assert "0: [2] 110 (mu=4)" in text


def greedy_root_and_lengths(weights, rng):
    """Greedy merge with random tie-breaking; returns root weight and depth multiset."""
    roots = [(w, [0]) for w in weights]  # (weight, depths of leaves below)
    while len(roots) > 1:
        rng.shuffle(roots)
        roots.sort(key=lambda r: r[0])
        (wa, da), (wb, db) = roots[0], roots[1]
        roots = roots[2:] + [(max(wa, wb) + 1, [d + 1 for d in da + db])]
    return roots[0][0], sorted(roots[0][1])


def test_tie_breaking_changes_lengths_not_root_weight():
    rng = random.Random(0)
    outcomes = set()
    for _ in range(200):
        root, lengths = greedy_root_and_lengths([1, 1, 0, 0], rng)
        outcomes.add((root, tuple(lengths)))
    assert {root for root, _ in outcomes} == {3}
    assert {lengths for _, lengths in outcomes} == {(2, 2, 2, 2), (1, 2, 3, 3)}


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.randoms(use_true_random=False))
def test_root_weight_independent_of_tie_breaking(n, rng):
    counts = random_partition(rng, n)
    weights = [ceil_log2(c) for c in counts]
    m = max(1, (len(counts) - 1).bit_length())
    h = OutputHistogram.from_counts(n, m, dict(enumerate(counts)))
    root, _ = greedy_root_and_lengths(weights, rng)
    assert root == build_ph_tree(h).root_weight
