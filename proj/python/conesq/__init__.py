"""Numerical laboratory for directional square functions and wave-packet extremizers."""

from ._conesq import (  # noqa: F401
    BandwidthError,
    ContractError,
    DomainError,
    Field,
    GridSpec,
    IoError,
    Side,
    SizingError,
    accept,
    cone_planks,
    criterion_count,
    expected_exponent,
    extremizer,
    fit_exponent,
    forward_transform,
    inverse_transform,
    lp_norm,
    parse_deltas,
    read_field,
    run_sweep,
    separated_caps,
    sweep_csv,
    write_field,
)

__version__ = "0.1.0"
