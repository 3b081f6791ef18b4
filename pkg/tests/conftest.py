"""Session fixtures: the two precision tiers shared across the suite.

The 50-digit tier drives the printed-constant comparisons and the scans;
the 30-digit desk tier drives the n <= 1000 table checks. Both are built
once per session.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from xikit import (PrecisionContext, an_oracle, circle_scan, cnp_build, li_an,
                   li_an_streaming, radius_estimates, sandwich_scan_real,
                   sigma_table, theta_for_height, titchmarsh_bn, xi_r_table)
from xikit.li import EXACT_RATIONAL

LONG = bool(os.environ.get("XIKIT_LONG"))

long_running = pytest.mark.skipif(
    not LONG, reason="set XIKIT_LONG=1 to enable long-running checks")


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionContext(digits=50)


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(digits=30)


@pytest.fixture(scope="session")
def xi50(ctx50):
    return xi_r_table(240, ctx50)


@pytest.fixture(scope="session")
def sig50(xi50):
    return sigma_table(120, xi50)


@pytest.fixture(scope="session")
def cnp_rational():
    return cnp_build(110, EXACT_RATIONAL)


@pytest.fixture(scope="session")
def li50(cnp_rational, sig50):
    return li_an(110, cnp_rational, sig50)


@pytest.fixture(scope="session")
def oracle100(xi50):
    return an_oracle(100, xi50)


@pytest.fixture(scope="session")
def xi30(ctx30):
    return xi_r_table(755, ctx30)


@pytest.fixture(scope="session")
def sig30(xi30):
    return sigma_table(1000, xi30)


@pytest.fixture(scope="session")
def desk(sig30, ctx30):
    """(LiCoefficients N=1000, CnpTable with rows 100..2000) at 30 digits."""
    return li_an_streaming(1000, sig30, ctx30,
                           keep_rows={100, 200, 400, 800, 1000, 2000})


@pytest.fixture(scope="session")
def li30(desk):
    return desk[0]


@pytest.fixture(scope="session")
def cnp30(desk):
    return desk[1]


@pytest.fixture(scope="session")
def bn30(li30):
    return titchmarsh_bn(li30, 1000)


@pytest.fixture(scope="session")
def rn30(li30):
    return radius_estimates(li30)


@pytest.fixture(scope="session")
def sandwich_report(xi50):
    return sandwich_scan_real((1, 30, "0.05"), xi50)


@pytest.fixture(scope="session")
def circle_report(xi50, ctx50):
    with ctx50.workdps():
        theta = (theta_for_height(60), theta_for_height(10))
    return circle_scan(theta, 3600, xi50)
