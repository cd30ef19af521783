"""Pair groupoid structure: composition, inverses, fibers, orbits."""

import itertools

import pytest

from ncgroupoid import (
    Arrow,
    Partition,
    build_groupoid,
    compose,
    fibers,
    hausdorff_relation,
    inverse,
    is_transitive,
)

from conftest import grid_space, line_space, random_groupoid, total_pair_space


def total_pair_groupoid():
    space = total_pair_space()
    return build_groupoid(space, hausdorff_relation(space))


def test_total_pair_has_four_arrows():
    g = total_pair_groupoid()
    assert g.arrow_count == 4
    assert {(a.src, a.dst) for a in g.arrows()} == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_compose_and_inverse():
    g = total_pair_groupoid()
    assert compose(g, Arrow(0, 1), Arrow(1, 0)) == Arrow(0, 0)
    assert compose(g, Arrow(0, 1), Arrow(1, 1)) == Arrow(0, 1)
    assert inverse(Arrow(0, 1)) == Arrow(1, 0)
    assert inverse(inverse(Arrow(0, 1))) == Arrow(0, 1)


def test_non_composable_raises():
    g = total_pair_groupoid()
    with pytest.raises(ValueError):
        compose(g, Arrow(0, 1), Arrow(0, 1))


def test_foreign_arrow_raises():
    space = grid_space()
    g = build_groupoid(space, hausdorff_relation(space))
    # 0 and 2 sit in different columns, so (0, 2) is not an arrow
    assert not g.has_arrow(Arrow(0, 2))
    with pytest.raises(ValueError):
        compose(g, Arrow(0, 2), Arrow(2, 2))


def test_units_are_neutral(rng):
    for _ in range(5):
        g = random_groupoid(rng)
        for a in g.arrows():
            assert compose(g, Arrow(a.src, a.src), a) == a
            assert compose(g, a, Arrow(a.dst, a.dst)) == a
            assert compose(g, a, inverse(a)) == Arrow(a.src, a.src)
            assert compose(g, inverse(a), a) == Arrow(a.dst, a.dst)


def test_associativity_exhaustive(rng):
    for _ in range(5):
        g = random_groupoid(rng, max_points=6, max_block=5)
        for block in g.blocks:
            for x, y, z, u in itertools.product(block, repeat=4):
                lhs = compose(g, compose(g, Arrow(x, y), Arrow(y, z)), Arrow(z, u))
                rhs = compose(g, Arrow(x, y), compose(g, Arrow(y, z), Arrow(z, u)))
                assert lhs == rhs


def test_fibers_and_isotropy():
    space = grid_space()
    g = build_groupoid(space, hausdorff_relation(space))
    rep = fibers(g, 0)
    assert set(rep.outgoing) == {Arrow(0, 0), Arrow(0, 1)}
    assert set(rep.incoming) == {Arrow(0, 0), Arrow(1, 0)}
    assert rep.isotropy == (Arrow(0, 0),)


def test_fiber_sizes_match_class_sizes(rng):
    for _ in range(5):
        g = random_groupoid(rng)
        for x in g.space.ids:
            rep = fibers(g, x)
            m = len(g.block_points(g.block_index(x)))
            assert len(rep.outgoing) == m
            assert len(rep.incoming) == m
            assert len(rep.isotropy) == 1


def test_transitivity():
    g = total_pair_groupoid()
    assert is_transitive(g)
    space = line_space()
    assert not is_transitive(build_groupoid(space, hausdorff_relation(space)))


def test_arrow_count_is_sum_of_squares():
    space = line_space()
    rho = Partition([(0, 1, 2), (3, 4)])
    g = build_groupoid(space, rho)
    assert g.arrow_count == 9 + 4
    assert len(list(g.arrows())) == 13


def test_orbit_decomposition_partitions_arrows(rng):
    for _ in range(5):
        g = random_groupoid(rng)
        seen = {}
        for a in g.arrows():
            assert g.block_index(a.src) == g.block_index(a.dst)
            seen.setdefault(g.block_index(a.src), set()).add((a.src, a.dst))
        for b, arrows in seen.items():
            assert len(arrows) == len(g.blocks[b]) ** 2


def test_partition_space_mismatch_raises():
    space = line_space()
    with pytest.raises(ValueError):
        build_groupoid(space, Partition([(0, 1)]))
