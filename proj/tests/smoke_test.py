"""Import-level smoke checks for the python module."""

import math
import sys


def load_module():
    try:
        from relspec import _core  # packaged layout
        return _core
    except ImportError:
        import _core  # build-tree layout
        return _core


def main():
    core = load_module()
    assert core.__version__

    base = [[1.0, 0.0], [0.0, 2.0]]
    pert = [[1.0, 0.0], [0.0, 1.0]]
    pair = core.make_pair(base, pert)
    assert pair.dim == 2
    assert pair.h == 0
    assert abs(pair.spectral_gap() - 1.0) < 1e-12
    assert abs(pair.relative_trace(1.0) - (math.exp(-2.0) - math.exp(-1.0))) < 1e-14

    det = core.relative_determinant(pair, n_dim=0, terms=3)
    assert abs(det - 2.0) < 1e-8, det

    z = core.zeta_pipeline(pair, s_values=[1.0 + 0.0j], n_dim=0, terms=3)
    assert abs(z["relative_determinant"] - 2.0) < 1e-8
    assert abs(z["zeta_prime_at_zero"] + math.log(2.0)) < 1e-8
    assert z["h"] == 0

    values, errs = core.relative_heat_trace(pair, [0.5, 1.0])
    assert len(values) == 2 and errs == [0.0, 0.0]

    idx = core.relative_index([[1.0, 0.0, 0.5], [0.0, 2.0, 0.0]],
                              [[1.0, 0.1, 0.5], [0.2, 2.0, 0.1]])
    assert idx["nearest_integer"] == 0
    assert idx["max_deviation"] <= 1e-9

    resid = core.duhamel_residual(pair, t=1.0, nodes=48)
    assert resid < 1e-10, resid

    try:
        core.make_pair(base, [[1.0, 0.0, 0.0]] * 3)
        raise AssertionError("dimension mismatch must raise")
    except ValueError:
        pass
    try:
        core.fit_expansion([1e-3, 1e-2], [0.0, 0.0], n_dim=1, terms=5,
                           window_min=1e-3, window_max=1e-2)
        raise AssertionError("starved fit must raise")
    except ValueError:
        pass

    ok, report = core.verify("fast")
    assert ok, report
    assert "checks=" in report

    print("python smoke: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
