import random
from fractions import Fraction

import pytest

import oracles
from corpus import inset_pairs
from insetedge.direct import (
    EVALUATORS,
    NotInsetEdgeError,
    WeightVectors,
    adprime,
    coefficient_matrix,
    cycle_partition,
    dprime_lemma1,
    dprime_lemma2,
    dprime_shortcut_oracle,
    norm_lemma2,
    weight_vectors,
)
from insetedge.tree import distance_matrix, edge_splits, generate, parse_tree


def labels(tree, vs):
    return [tree.labels[v] for v in vs]


# -- cycle partition ----------------------------------------------------------


def test_partition_odd(p5):
    part = cycle_partition(p5, 0, 4)
    assert part.k == 5
    assert labels(p5, part.cx) == ["1", "2"]
    assert labels(p5, part.cy) == ["5", "4"]
    assert p5.labels[part.cm] == "3"


def test_partition_even(p4):
    part = cycle_partition(p4, 0, 3)
    assert part.k == 4
    assert labels(p4, part.cx) == ["1", "2"]
    assert labels(p4, part.cy) == ["4", "3"]
    assert part.cm is None


def test_partition_triangle(p4):
    part = cycle_partition(p4, 0, 2)
    assert (part.k, labels(p4, part.cx), labels(p4, part.cy), p4.labels[part.cm]) == (3, ["1"], ["3"], "2")


def test_partition_rejects_tree_edge(p4):
    with pytest.raises(NotInsetEdgeError):
        cycle_partition(p4, 0, 1)
    with pytest.raises(NotInsetEdgeError):
        cycle_partition(p4, 2, 2)


@pytest.mark.parametrize("seed", range(15))
def test_partition_closeness(seed):
    t = generate("random", 40, seed)
    dist = distance_matrix(t)
    for x, y in random.Random(seed).sample(inset_pairs(t), 20):
        part = cycle_partition(t, x, y)
        assert len(part.cx) == len(part.cy) == part.k // 2
        assert (part.cm is not None) == (part.k % 2 == 1)
        assert part.cx[0] == x and part.cy[0] == y
        for i, v in enumerate(part.cx):
            assert dist[x, v] == i and dist[x, v] < dist[y, v]
        for j, v in enumerate(part.cy):
            assert dist[y, v] == j and dist[y, v] < dist[x, v]


# -- weight vectors -----------------------------------------------------------


def test_weights_p4(p4):
    w = weight_vectors(p4, edge_splits(p4), cycle_partition(p4, 0, 2))
    assert (w.vx, w.vy) == ((1,), (2,))


def test_weights_p5(p5):
    w = weight_vectors(p5, edge_splits(p5), cycle_partition(p5, 0, 4))
    assert (w.vx, w.vy) == ((1, 1), (1, 1))


def test_weights_star(star3):
    w = weight_vectors(star3, edge_splits(star3), cycle_partition(star3, 1, 3))
    assert (w.vx, w.vy) == ((1,), (1,))


@pytest.mark.parametrize("seed", range(20))
def test_weights_match_path_deletion(seed):
    t = generate("random", 35, seed)
    s = edge_splits(t)
    for x, y in random.Random(seed).sample(inset_pairs(t), 15):
        w = weight_vectors(t, s, cycle_partition(t, x, y))
        path, sizes = oracles.trailing_weights(t.n, t.edges, x, y)
        half = len(path) // 2
        assert list(w.vx) == sizes[:half]
        assert list(w.vy) == sizes[::-1][:half]
        middle = sizes[half] if len(path) % 2 else 0
        assert sum(w.vx) + sum(w.vy) + middle == t.n
        assert min(w.vx + w.vy) >= 1


# -- coefficient matrix -------------------------------------------------------


def test_coefficients_examples():
    assert coefficient_matrix(3).entries == ((1,),)
    assert coefficient_matrix(5).entries == ((3, 1), (1, 0))
    assert coefficient_matrix(4).entries == ((2, 0), (0, 0))


def test_coefficients_top_left_display():
    for k in range(3, 65):
        half = k // 2
        top = coefficient_matrix(k)[0, 0]
        assert top == (2 * half - 1 if k % 2 else 2 * half - 2)


@pytest.mark.parametrize("k", range(3, 65))
def test_coefficients_structure(k):
    f = coefficient_matrix(k)  # raises if the two constructions differ
    half = k // 2
    for i in range(half):
        for j in range(half):
            # distance between the (i+1)-th x vertex and (j+1)-th y vertex
            d = k + 1 - (i + 1) - (j + 1)
            assert f[i, j] == max(2 * d - k, 0)
            if i + 1 < half:
                assert f[i + 1, j] <= f[i, j]
            if i + 1 < half and j > 0:
                assert f[i + 1, j - 1] == f[i, j]


def test_coefficients_reject_short():
    with pytest.raises(ValueError):
        coefficient_matrix(2)


# -- evaluators ---------------------------------------------------------------


def test_lemma2_examples():
    assert norm_lemma2(WeightVectors(3, (1,), (2,))) == 2
    assert norm_lemma2(WeightVectors(5, (1, 1), (1, 1))) == 5
    assert norm_lemma2(WeightVectors(4, (1, 1), (1, 1))) == 2


def test_brute_force_fixed_points(p4, p5, star3):
    assert oracles.dprime(4, p4.edges, 0, 2) == 2
    assert oracles.dprime(4, p4.edges, 0, 3) == 2
    assert oracles.dprime(5, p5.edges, 0, 4) == 5
    assert oracles.dprime(4, star3.edges, 1, 2) == 1


@pytest.mark.parametrize("name", sorted(EVALUATORS))
def test_evaluators_fixed_points(name, p4, p5, star3):
    ev = EVALUATORS[name]
    assert ev(p4, 0, 2) == 2
    assert ev(p4, 0, 3) == 2
    assert ev(p5, 0, 4) == 5
    assert ev(star3, 1, 3) == 1


@pytest.mark.parametrize("name", sorted(EVALUATORS))
def test_evaluators_reject_tree_edges(name, p4):
    with pytest.raises(NotInsetEdgeError):
        EVALUATORS[name](p4, 1, 2)


@pytest.mark.parametrize("seed", range(12))
def test_three_evaluators_agree_with_bfs(seed):
    rng = random.Random(seed)
    t = generate(rng.choice(["random", "caterpillar"]), rng.randint(3, 25), seed)
    s = edge_splits(t)
    dist = distance_matrix(t)
    for x, y in inset_pairs(t):
        expected = oracles.dprime(t.n, t.edges, x, y)
        assert dprime_lemma2(t, x, y, s) == expected
        assert dprime_lemma1(t, x, y, dist) == expected
        assert dprime_shortcut_oracle(t, x, y, dist) == expected
        assert expected >= 1


@pytest.mark.parametrize("seed", range(10))
def test_triangle_identity(seed):
    t = generate("random", 30, seed)
    s = edge_splits(t)
    for x, y in inset_pairs(t):
        part = cycle_partition(t, x, y)
        if part.k == 3:
            w = weight_vectors(t, s, part)
            assert dprime_lemma2(t, x, y, s) == w.vx[0] * w.vy[0]


def test_adprime():
    assert adprime(2, 4) == Fraction(1, 3)
    assert adprime(5, 5) == Fraction(1, 2)
    assert adprime(0, 7) == 0
    with pytest.raises(ValueError):
        adprime(1, 2)


def test_adprime_is_difference_of_averages():
    t = parse_tree("a b\nb c\nc d\nd e\nc f")
    x, y = t.vertex("a"), t.vertex("e")
    pairs = t.n * (t.n - 1) // 2
    before = Fraction(oracles.wiener(oracles.adjacency(t.n, t.edges)), pairs)
    after = Fraction(oracles.wiener(oracles.adjacency(t.n, list(t.edges) + [(x, y)])), pairs)
    assert adprime(dprime_lemma2(t, x, y), t.n) == before - after
