"""Smoke test for the ldg_py extension module.

Build first:
    cargo build -p ldg-python --release --features extension-module
    cp target/release/libldg_py.so python/ldg_py.so
then run `python3 python/smoke_test.py`.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import ldg_py  # noqa: E402


def main():
    mesh = ldg_py.Mesh("b", 32, 1e-8, sigma=2.5)
    x = mesh.nodes()
    assert len(x) == 33 and x[0] == 0.0 and x[-1] == 1.0
    assert all(b > a for a, b in zip(x, x[1:]))
    assert abs(sum(mesh.widths()) - 1.0) < 1e-13
    assert 0.0 < mesh.tau < 0.5 and not mesh.clamped

    errs = [ldg_py.solve(ldg_py.Mesh("s", n, 1e-8), 1, 1e-8) for n in (16, 32)]
    assert ldg_py.format_error(errs[0].energy) == "2.57e-02", errs[0]
    assert errs[0].backward_error < 1e-14
    r = ldg_py.rate_r2(errs[0].energy, errs[1].energy)
    assert 1.0 < r < 2.0, r
    ldg_py.rate_rs(errs[0].energy, errs[1].energy, 16)

    table, failed = ldg_py.study(mesh="s", k="1", eps="1e-8", nmin=16, nmax=64)
    lines = table.splitlines()
    assert lines[0] == ldg_py.CSV_HEADER
    assert lines[1] == "S,1,1e-8,16,2.57e-02,,,4.31e-03,,8.15e-03,", lines[1]
    assert not failed and len(lines) == 4

    try:
        ldg_py.Mesh("q", 16, 1e-8)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown mesh kind accepted")

    print("smoke test OK:", mesh, errs[0])


if __name__ == "__main__":
    main()
