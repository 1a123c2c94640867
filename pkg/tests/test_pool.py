"""Pool enumeration against independent counting."""

from itertools import combinations
from math import comb

import pytest

from adapt_xstate.elements import FERMIONIC, QUBIT
from adapt_xstate.pool import (
    export_pool_csv,
    fermionic_pool,
    pool_size,
    qubit_pool,
    uccsd_elements,
)


def brute_pool_count(n: int) -> int:
    """Count distinct elements directly: unordered index pairs for singles,
    unordered pair-of-disjoint-pairs for doubles."""
    singles = len(list(combinations(range(n), 2)))
    doubles = set()
    for quad in combinations(range(n), 4):
        a, b, c, d = quad
        for pair in [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]:
            doubles.add(frozenset(pair))
    return singles + len(doubles)


@pytest.mark.parametrize("n", range(4, 15))
def test_pool_size_formula_matches_enumeration(n):
    assert pool_size(n) == brute_pool_count(n) == comb(n, 2) + 3 * comb(n, 4)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_generated_pool_has_declared_size(n):
    for pool_fn in (qubit_pool, fermionic_pool):
        pool = pool_fn(n)
        assert len(pool) == pool_size(n)
        assert len(set(pool)) == len(pool)


def test_known_sizes():
    assert pool_size(4) == 9
    assert pool_size(12) == 1551
    assert pool_size(14) == 3094


def test_pool_flavors():
    assert all(el.flavor == QUBIT for el in qubit_pool(4))
    assert all(el.flavor == FERMIONIC for el in fermionic_pool(4))


def test_pool_elements_canonical():
    for el in qubit_pool(6):
        if el.is_double:
            i, j, k, l = el.indices
            assert i < j and k < l and i < k
        else:
            i, k = el.indices
            assert i < k


def test_pool_order_deterministic():
    assert qubit_pool(6) == qubit_pool(6)


def test_spin_preserving_filter():
    # even indices are one spin species, odd the other
    pool = fermionic_pool(4, spin_preserving=True)
    for el in pool:
        parities = sorted(q % 2 for q in el.indices)
        if el.is_double:
            i, j, k, l = el.indices
            assert sorted((i % 2, j % 2)) == sorted((k % 2, l % 2))
        else:
            i, k = el.indices
            assert i % 2 == k % 2
    assert len(pool) < pool_size(4)


class TestUccsd:
    def test_count_formula(self):
        # occupied->virtual singles and pair doubles
        for n, ne in [(4, 2), (8, 4), (12, 4), (14, 6)]:
            ops = uccsd_elements(n, ne)
            want = ne * (n - ne) + comb(ne, 2) * comb(n - ne, 2)
            assert len(ops) == want

    def test_reference_count(self):
        assert len(uccsd_elements(12, 4)) == 200
        assert len(uccsd_elements(14, 6)) == 468

    def test_all_fermionic_and_occupied_to_virtual(self):
        ops = uccsd_elements(6, 2)
        for el in ops:
            assert el.flavor == FERMIONIC
            if el.is_double:
                i, j, k, l = el.indices
                assert {i, j} <= {0, 1} or {k, l} <= {0, 1}
            else:
                assert min(el.indices) < 2 <= max(el.indices)

    def test_subset_of_full_pool(self):
        full = set(el.indices for el in fermionic_pool(6))
        for el in uccsd_elements(6, 2):
            assert el.indices in full


def test_export_pool_csv(tmp_path):
    path = tmp_path / "pool.csv"
    export_pool_csv(qubit_pool(4), path, stamp="test run")
    lines = path.read_text().splitlines()
    assert lines[0] == "# test run"
    assert lines[1] == "kind,flavor,i,j,k,l"
    assert len(lines) == 2 + pool_size(4)
    # singles leave the j/l columns blank
    single_rows = [ln for ln in lines[2:] if ln.startswith("single")]
    assert single_rows and all(ln.count(",") == 5 for ln in single_rows)
