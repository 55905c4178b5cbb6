import json
from fractions import Fraction
from pathlib import Path

import pytest
from mpmath import mp

from fracmine.identifier import LimitFamily

DATA = Path(__file__).parent / "data"


def load_family(name: str) -> tuple[LimitFamily, int]:
    """Rebuild a frozen limit family; returns (family, dps it was frozen at).

    The fixture strings carry 60 significant digits, enough to reproduce the
    exact binary values of the original evaluation when parsed at the
    recorded dps.
    """
    blob = json.loads((DATA / "family_fixtures.json").read_text())[name]
    with mp.workdps(blob["dps"]):
        values = tuple(mp.mpf(s) for s in blob["values"])
    regressor = tuple(Fraction(r) for r in blob["regressor"])
    fam = LimitFamily(
        values, regressor, varied_slot=blob["varied_slot"], label=name
    )
    return fam, blob["dps"]


@pytest.fixture(scope="session")
def family_fixtures() -> dict:
    return {
        name: load_family(name)
        for name in ("epi", "polyroot", "expk", "catalan", "cloitre")
    }
