import functools

import pytest
from hypothesis import settings

from heckedirac.hecke import HeckeAlgebra
from heckedirac.rootsys import build_root_system
from heckedirac.spincover import generate_spin_cover

settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


@functools.lru_cache(maxsize=None)
def root_system(label):
    return build_root_system(label)


@functools.lru_cache(maxsize=None)
def cover(label):
    return generate_spin_cover(root_system(label))


@functools.lru_cache(maxsize=None)
def hecke(label, short=None, long=None, degree_cap=6):
    rs = root_system(label)
    spec = {}
    if short is not None:
        spec["short"] = short
    if long is not None:
        spec["long"] = long
    return HeckeAlgebra(rs, rs.parameters(spec), W=cover(label).weyl, degree_cap=degree_cap)


@pytest.fixture
def rs_cache():
    return root_system


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
