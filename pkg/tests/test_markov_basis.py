import itertools
import random
from math import comb

import pytest

from weakind.binomials import ResourceLimit
from weakind.datafiles import read_model
from weakind.intlinalg import matvec_t
from weakind.markov_basis import (
    MarkovBasis,
    NotApplicable,
    compute_basis,
    enumerate_fiber,
    find_disconnected_fiber,
    normalize_move,
    verify_connectivity,
)
from weakind.suffstat import SuffStatMatrix, generators, z_matrix
from weakind.table_model import Shape, validate_model

from conftest import random_minor_set


def basis_of(name):
    a = generators(read_model(name))
    return a, compute_basis(a)


@pytest.mark.parametrize("name, size", [("ex3per3.json", 2), ("full_3x3.json", 9), ("chol.json", 14)])
def test_known_sizes(name, size):
    a, basis = basis_of(name)
    assert len(basis) == size
    for m in basis.moves:
        assert not any(matvec_t(a.columns, m))
        assert m == normalize_move(m)


@pytest.mark.parametrize("rows, cols", [(2, 2), (2, 3), (2, 5), (3, 3), (3, 4)])
def test_independence_basis_count(rows, cols):
    # the minimal Markov basis of independence is the set of all 2x2 minors
    a = generators(validate_model((rows, cols), "all"))
    basis = compute_basis(a)
    assert len(basis) == comb(rows, 2) * comb(cols, 2)
    assert all(sum(abs(x) for x in m) == 4 for m in basis.moves)


def test_ex3per3_moves_are_degree_two():
    _, basis = basis_of("ex3per3.json")
    assert basis.grids() == [[[1, -1, 0], [-1, 1, 0], [0, 0, 0]], [[0, 0, 0], [0, 1, -1], [0, -1, 1]]]


def test_empty_model_has_empty_basis():
    a = generators(validate_model((3, 3), []))
    assert len(compute_basis(a)) == 0


@pytest.mark.parametrize("name", ["patexample.json", "m2.json", "chol.json"])
def test_every_move_is_indispensable(name):
    a, basis = basis_of(name)
    assert verify_connectivity(basis, a, 8, mode="sampled", samples=150, seed=1)
    for i, m in enumerate(basis.moves):
        seed = [max(x, 0) for x in m]
        assert find_disconnected_fiber(basis.without(i), a, 8, mode="sampled", samples=0,
                                       extra_tables=[seed]) is not None


def test_hole_basis_contains_model_minors():
    model = read_model("patexample.json")
    a = generators(model)
    basis = compute_basis(a)
    assert len(basis) == 20
    assert {sum(x for x in m if x > 0) for m in basis.moves} == {2}
    assert all(normalize_move(z) in basis.moves for z in z_matrix(model))


def test_enumerate_fiber_matches_brute_force():
    a = generators(read_model("ex3per3.json"))
    h = (1, 2, 0, 0, 1, 1, 1, 0, 2)
    t = a.statistic(h)
    brute = set()
    for cells in itertools.combinations_with_replacement(range(9), sum(h)):
        g = tuple(cells.count(k) for k in range(9))
        if a.statistic(g) == t:
            brute.add(g)
    brute = sorted(brute)
    assert sorted(enumerate_fiber(a, t)) == brute


def test_exhaustive_oracle_3x3_random_models():
    rng = random.Random(8)
    shape = Shape(3, 3)
    for _ in range(25):
        a = generators(validate_model(shape, random_minor_set(shape, rng)))
        assert verify_connectivity(compute_basis(a), a, 6, mode="exhaustive")


def test_sampled_oracle_random_models():
    rng = random.Random(9)
    for size in (3, 4):
        shape = Shape(size, size)
        for _ in range(50):
            a = generators(validate_model(shape, random_minor_set(shape, rng)))
            assert verify_connectivity(compute_basis(a), a, 8, mode="sampled", samples=30, seed=2)


def test_mutation_exhaustive():
    a, basis = basis_of("ex3per3.json")
    for i in range(len(basis)):
        fiber = find_disconnected_fiber(basis.without(i), a, 10, mode="exhaustive")
        assert fiber is not None and len(fiber) >= 2


def test_oracle_rejects_foreign_moves():
    a, basis = basis_of("ex3per3.json")
    bogus = MarkovBasis(basis.shape, basis.moves + ((1, -1, 0, 0, 0, 0, 0, 0, 0),))
    with pytest.raises(NotApplicable):
        verify_connectivity(bogus, a, 3)


def test_oracle_limits():
    a, basis = basis_of("ex3per3.json")
    with pytest.raises(ResourceLimit):
        find_disconnected_fiber(basis, a, 10, mode="exhaustive", node_budget=1000)
    with pytest.raises(ValueError):
        find_disconnected_fiber(basis, a, 13)


def test_non_binary_matrix_rejected():
    shape = Shape(2, 2)
    a = SuffStatMatrix(shape, ((2, 0, 0, 0), (0, 1, 1, 1)), (), 2)
    with pytest.raises(NotApplicable):
        compute_basis(a)


def test_degree_cap_is_enforced():
    a = generators(read_model("patexample.json"))
    with pytest.raises(ResourceLimit):
        compute_basis(a, degree_cap=2)
