"""Quick check that the extension imports and agrees with known values.

Build and install first, e.g.
    pip install --no-build-isolation ./crates/python
"""

import pyqstab as q


def main():
    ghz = q.Stabilizer.ghz(6)
    nf = q.normal_form(ghz, [[0], [1], [2]])
    counts = dict(nf.counts())
    assert counts["m_ABC"] == 1 and sum(counts.values()) == 1, counts
    assert nf.verify()
    assert nf.predicted_rank([0]) == 6

    x = q.Pauli(3, [1], [0])
    z = q.Pauli(3, [0], [1])
    assert x.commutation_phase(z) == 1
    assert (x ** 3).x == [0]

    s = q.Stabilizer.random(5, 10, seed=4)
    assert s.is_state()
    assert [f.d for f in s.crt_decompose()] == [2, 5]

    a = q.analyze_channel(q.Code.ghz(3), [0], [1])
    assert a.capacities() == (0, 1, 0, 1)
    assert a.duality_holds()

    try:
        q.Stabilizer.random(2, 4)
    except ValueError as e:
        assert str(e).startswith("NotSquarefree")
    else:
        raise AssertionError("D = 4 should be rejected")
    print("smoke test passed")


if __name__ == "__main__":
    main()
