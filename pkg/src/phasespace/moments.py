"""
Closed-form phase-space averages. Quadrature versions live in
src.quadrature.oracles and are only used to validate these.
"""
from src.oscillator.model import ModelParams, as_state


def mean_position(state, params: ModelParams) -> float:
    """<x> = 0: x W is odd in x for every n and q"""
    as_state(state)
    return 0.0


def mean_momentum(state, params: ModelParams) -> float:
    """<p> = -n m omega h"""
    n = as_state(state).n
    # + 0.0 turns -0.0 into 0.0
    return -(n * params.m * params.omega * params.h) + 0.0
