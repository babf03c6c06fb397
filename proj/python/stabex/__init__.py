"""Distributions of a stable Levy process and of its running supremum."""

from ._stabex import (
    DivergenceError,
    DomainError,
    RegimeError,
    StabexError,
    StableParams,
    cpdf_sup,
    cpdf_x,
    exchange,
    from_beta,
    joint_cpdf,
    psi,
    regime,
    table_reference,
)

__all__ = [
    "DivergenceError",
    "DomainError",
    "RegimeError",
    "StabexError",
    "StableParams",
    "cpdf_sup",
    "cpdf_x",
    "exchange",
    "from_beta",
    "joint_cpdf",
    "psi",
    "regime",
    "table_reference",
]
