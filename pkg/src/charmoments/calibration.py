"""Calibrated constants used by the verification checks.

Every empirically chosen constant lives here, is embedded in check output,
and can be overridden by a JSON file (path argument or the
CHARMOMENTS_CALIBRATION environment variable).  Check implementations never
hard-code these numbers.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

ENV_VAR = "CHARMOMENTS_CALIBRATION"


@dataclass(frozen=True)
class Calibration:
    # even-moment comparison: observed-to-bound ratio ceiling
    lemma_ratio_max: float = 4.0
    # sieve count versus (B-A)/log y: acceptable ratio window
    sieve_ratio_lo: float = 0.1
    sieve_ratio_hi: float = 10.0
    # surrogate domination: ceiling on the e^{J}-scaled excess constant
    surrogate_slack: float = 8.0
    # additive slack on prime cosine-sum branch bounds
    cosine_slack: float = 3.0
    # truncation error: direct-vs-series relative tolerance
    series_rel_tol: float = 1e-10
    # Hoelder chain / subadditivity relative slack
    chain_slack: float = 1e-9
    # diagonal (orthogonality) identities, relative
    orthogonality_tol: float = 1e-9
    # reflection symmetry of prefix sums, relative
    reflection_tol: float = 1e-9
    # Parseval identity: delta coefficients (near-exact) and generic ones
    parseval_delta_tol: float = 1e-10
    parseval_random_tol: float = 1e-4
    # Mellin transform identity, relative
    mellin_tol: float = 1e-6

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def load(path: str | None = None) -> Calibration:
    """Calibration from a JSON file, the environment override, or defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is None:
        return Calibration()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in dataclasses.fields(Calibration)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown calibration keys: {sorted(unknown)}")
    return Calibration(**data)
