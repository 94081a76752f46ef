"""Contextuality-based randomness certification: graphs, theta numbers,
epsilon-models, guessing-probability SDPs, protocol simulation and attacks."""

from ._ctxrand import *  # noqa: F401,F403
from ._ctxrand import (
    DomainError,
    EntropyExhausted,
    Error,
    InvalidParameter,
    ParseError,
)

__version__ = "0.1.0"
