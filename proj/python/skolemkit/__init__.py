from ._core import (
    SkolemError,
    SkolemVector,
    Specification,
    bphp_lexfirst,
    check_unique,
    count,
    gen_bphp,
    gen_factor,
    gen_planted,
    gen_random,
    interp_experiment,
    run_cli,
    synth,
    verify,
)

__all__ = [
    "SkolemError",
    "SkolemVector",
    "Specification",
    "bphp_lexfirst",
    "check_unique",
    "count",
    "gen_bphp",
    "gen_factor",
    "gen_planted",
    "gen_random",
    "interp_experiment",
    "run_cli",
    "synth",
    "verify",
]
