"""Smoke test for the rainbow_py extension module.

Build with `maturin develop -m crates/py/Cargo.toml --features extension-module`,
or copy target/release/librainbow_py.so to rainbow_py.so on PYTHONPATH.
"""

import rainbow_py as rp


def main():
    assert rp.auto_colours(10) == 191
    assert rp.derive_trial_seed(1, 0) == rp.derive_trial_seed(1, 0)

    # root 0 reaches 1 with colour 0 and 2 with colour 1
    g = rp.ColouredDigraph(3, 3, [(0, 1, 0), (1, 2, 1), (2, 1, 2)])
    d = rp.decide(g, mode="oracle")
    assert d and d.status == "found" and d.root == 0, d
    assert sorted(c for _, _, c in d.edges) == [0, 1]
    assert rp.decide(g, mode="exact", root=1).status == "absent"

    kind, value = rp.colour_assignment(g, 0)
    assert kind == "assignment" and value == {1: 0, 2: 1}, value
    h = rp.ColouredDigraph(3, 2, [(0, 1, 0), (0, 2, 0)])
    kind, (s, t) = rp.colour_assignment(h, 0)
    assert kind == "violation" and len(t) == len(s) - 1

    trace = rp.ProcessTrace(20, seed=7)
    assert len(trace) == 20 * 19 and trace.colours == rp.auto_colours(20)
    t = trace.hitting_times()
    assert t["m_Z"] <= t["m_A"] <= t["m_R"] and t["m_C"] <= t["m_R"], t
    assert len(trace.prefix(t["m_Z"])) == t["m_Z"]
    assert len(trace.graph_at(t["m_Z"]).zero_in_vertices()) <= 1

    f = rp.sample_mapping(50, loopless=True, seed=3)
    assert all(f[v] != v for v in range(50))
    comps = rp.cycle_components(f)
    assert sum(len(c) + len(tr) for c, tr in comps) == 50

    rep = rp.run_experiment("theorem", 20, trials=20, seed=1, threads=1)
    again = rp.run_experiment("theorem", 20, trials=20, seed=1, threads=1)
    assert rep.to_csv() == again.to_csv() and rep.to_csv().startswith("# schema=1")
    assert 0.0 <= rep.summary["p_r_at_z"] <= 1.0
    assert len(rep.rows) == 20

    try:
        rp.run_experiment("nonsense", 10)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown experiment accepted")

    print("rainbow_py smoke test ok")


if __name__ == "__main__":
    main()
