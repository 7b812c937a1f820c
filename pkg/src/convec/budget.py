"""Work budgets for enumerations and brute-force searches.

Budgets stop accidental combinatorial explosions, not malicious input.  Every
budgeted operation takes an explicit ``budget`` argument; when that is None
the CONVEC_BUDGET environment variable applies, and failing that a per-call
default.
"""

from __future__ import annotations

import os

ENV_VAR = "CONVEC_BUDGET"


def resolve(explicit: int | None, default: int) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(ENV_VAR)
    if env is not None:
        return int(env)
    return default
