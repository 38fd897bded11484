"""Distributed arithmetic coding for correlated binary sources.

The encoder widens the arithmetic coder's subintervals so they overlap,
which buys rate below H(X) at the price of an ambiguous codeword. The
decoder resolves the ambiguity with side information, tracking the best
M candidate paths through the interval tree.
"""

from ._daclab import (
    DoesNotFit,
    EmptyFrontier,
    Infeasible,
    InvalidParam,
    ParseError,
    RoleViolation,
    allocate_margin,
    allocate_symmetric,
    apply_bsc,
    binary_entropy,
    cond_entropy_x_given_y,
    crossover_for_cond_entropy,
    crossover_for_joint_entropy,
    decode,
    decode_lossless,
    decode_pair,
    encode,
    encode_pair,
    equal_overlap_factor,
    gen_source,
    joint_entropy,
    overlap_factors,
    predicted_rate,
    predicted_rate_k,
    preset_names,
    run_preset,
    side_entropy,
    solve_k,
    stream_info,
)

__all__ = [
    "DoesNotFit",
    "EmptyFrontier",
    "Infeasible",
    "InvalidParam",
    "ParseError",
    "RoleViolation",
    "allocate_margin",
    "allocate_symmetric",
    "apply_bsc",
    "binary_entropy",
    "cond_entropy_x_given_y",
    "crossover_for_cond_entropy",
    "crossover_for_joint_entropy",
    "decode",
    "decode_lossless",
    "decode_pair",
    "encode",
    "encode_pair",
    "equal_overlap_factor",
    "gen_source",
    "joint_entropy",
    "overlap_factors",
    "predicted_rate",
    "predicted_rate_k",
    "preset_names",
    "run_preset",
    "side_entropy",
    "solve_k",
    "stream_info",
]

__version__ = "0.1.0"
