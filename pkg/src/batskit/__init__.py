"""Finite-length BATS and LDPC-precoded BATS codes.

Encoding, line-network simulation with RLNC recoding, joint BP /
inactivation / ML decoding, closed-form upper bounds on BP and ML error
probability, and degree-distribution optimization built on those bounds.
"""

from batskit.gf import GF, FieldSpec, get_field
from batskit.code_model import (
    CodeSpec,
    DegreeDistribution,
    LdpcCode,
    RankDistribution,
    TannerGraph,
)

__all__ = [
    "GF",
    "FieldSpec",
    "get_field",
    "CodeSpec",
    "DegreeDistribution",
    "LdpcCode",
    "RankDistribution",
    "TannerGraph",
]

__version__ = "0.1.0"
