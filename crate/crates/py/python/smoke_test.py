"""Smoke test for the compiled extension.

Build and install first, e.g. `maturin build --release` in crates/py and
`pip install` the wheel, then run `python python/smoke_test.py`.
"""

import wellbalanced_py as wb


def main():
    square = wb.Graph(
        ["a", "b", "c", "d", "p", "q"],
        [("a", "b", 2), ("b", "c", 2), ("c", "d", 2), ("a", "d", 2), ("p", "a", 1), ("q", "c", 1)],
    )
    assert square.vertex_count() == 6
    assert square.edge_count() == 10
    assert square.odd_vertices() == ["a", "c", "p", "q"]
    assert square.local_connectivity("a", "c")[0] == 4
    assert square.r_value(["a", "b", "p"]) == 4

    bad = square.decide_ca([("a", "c"), ("p", "q")])
    assert bad is not None and bad[1:] == (4, 2, 4), bad
    assert square.decide_ca([("a", "p"), ("c", "q")]) is None
    assert square.decide_oa([("a", "p"), ("c", "q")]) is None
    assert square.decide_oa([("a", "c"), ("p", "q")]) is not None

    arcs = square.well_balanced_orientation()
    assert square.well_balance_violation(arcs) is None

    grid, left, right = wb.augmented_grid(3, 2)
    assert grid.vertex_count() == 12 and len(left) == 2 and len(right) == 2
    assert all(grid.degree(v) == 3 for v in left + right)

    again = wb.Graph.from_json(square.to_json())
    assert again.edges() == square.edges()

    passed, report = wb.run_suite(only=[5, 7])
    assert passed, report
    print("smoke test passed")


if __name__ == "__main__":
    main()
