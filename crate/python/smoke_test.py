"""Smoke test for the Python bindings.

Build first:
    cargo build --release -p weilcheck-py --features extension-module
then run this script from anywhere. It copies the built library next to
itself as weilcheck.so and imports it.
"""

import os
import shutil
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


def load():
    for profile in ("release", "debug"):
        lib = os.path.join(ROOT, "target", profile, "libweilcheck_py.so")
        if os.path.exists(lib):
            shutil.copy(lib, os.path.join(HERE, "weilcheck.so"))
            break
    else:
        sys.exit("build weilcheck-py first (see the docstring)")
    sys.path.insert(0, HERE)
    import weilcheck

    return weilcheck


def main():
    wc = load()

    q5 = wc.Field("Qp:5")
    assert len(q5.square_classes()) == 4
    assert q5.hilbert("2", "5") == -1
    assert q5.hilbert("2", "2") == 1

    # hyperbolic plane is Weil-trivial; the norm form of the ramified extension is not
    assert wc.QuadraticForm(q5, [[0, 1], [1, 0]]).weil_index() == "1"
    norm = wc.QuadraticForm(q5, [[2, 0], [0, -10]])
    g = norm.weil_index()
    re, im = norm.gauss_sum()
    assert abs(complex(re, im) - {"1": 1, "i": 1j, "-1": -1, "-i": -1j}[g]) < 1e-6, (g, re, im)

    rep = wc.verify(
        {"field": "Qp:5", "type": "A1", "frame": {"quadratic": "5"}, "w": [[1]]},
        intermediates=True,
        robustness=True,
    )
    assert rep["verdict"] == "PASS" and rep["lhs"] == rep["rhs"], rep
    assert all(rep["intermediates"].values())

    try:
        wc.verify({"field": "Qp:3", "type": "B2", "frame": {"biquadratic": ["2", "3"]}, "w": [[1], [2, 1, 2, 1]]})
        raise AssertionError("expected an obstruction")
    except wc.ObstructedError:
        pass

    insts = wc.matrix_instances(types=["A1"], fields=["Qp:5"])
    assert len(insts) == 4

    suites = wc.run_suite({"suites": ["lattice", "torus-binary"]})
    assert suites["pass"], suites
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
